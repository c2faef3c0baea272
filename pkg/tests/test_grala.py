import pytest
from hypothesis import assume, given, settings, strategies as st

from epgm import EpgmDatabase, LogicalGraph
from epgm.grala import (GralaRuntimeError, GralaSyntaxError, GralaTypeError, fmt, format_script,
                        parse, parse_expression, run, tokenize)
from epgm.grala import ast as A

from conftest import (APPLY_SCRIPT, MATCH_SCRIPT, PROJECT_SCRIPT, REDUCE_SCRIPT, SELECT_SCRIPT,
                      SORT_TOP_SCRIPT, SUMMARIZE_SCRIPT)


def kinds(src):
    return [(t.kind, t.value) for t in tokenize(src)][:-1]


# -- lexer -------------------------------------------------------------------------

def test_symbols_and_map_colons():
    assert kinds(':desc') == [("symbol", "desc")]
    assert kinds('{"k":v}') == [("punct", "{"), ("string", "k"), ("punct", ":"),
                                ("ident", "v"), ("punct", "}")]
    assert kinds("g.V[$a][:type]")[4:] == [("binding", "a"), ("punct", "]"), ("punct", "["),
                                           ("symbol", "type"), ("punct", "]")]


def test_numbers_strings_and_operators():
    assert kinds('12 3.5 "a\\"b\\n"') == [("int", 12), ("float", 3.5), ("string", 'a"b\n')]
    assert [v for _, v in kinds("a=>b==c<=d&&e")][1::2] == ["=>", "==", "<=", "&&"]


def test_token_positions():
    toks = tokenize("x =\n  db.G")
    assert [(t.line, t.column) for t in toks[:4]] == [(1, 1), (1, 3), (2, 3), (2, 5)]


@pytest.mark.parametrize("src, message", [
    ('"open', "unterminated string"), ("a # b", "illegal character"), ('"\\q"', "escape"),
])
def test_lexer_errors(src, message):
    with pytest.raises(GralaSyntaxError, match=message):
        tokenize(src)


def test_comments_are_skipped():
    assert kinds("a // note\nb") == [("ident", "a"), ("ident", "b")]


# -- parser ------------------------------------------------------------------------

def test_collection_literal_versus_comparison():
    s = parse("c = <db.G[0],db.G[1]>\nt = a > b")
    assert isinstance(s.statements[0].value, A.CollectionLit)
    assert len(s.statements[0].value.items) == 2
    assert s.statements[1].value == A.BinOp(">", A.Var("a"), A.Var("b"))


def test_select_listing_parses_with_one_repair():
    s = parse(SELECT_SCRIPT)
    assert len(s.statements) == 5
    assert len(s.warnings) == 1 and "ignored unmatched ')'" in s.warnings[0]
    assert s.warnings[0].startswith("line 6,")


def test_strict_mode_rejects_stray_paren():
    with pytest.raises(GralaSyntaxError) as info:
        parse(SELECT_SCRIPT, strict=True)
    assert info.value.line == 6


def test_missing_paren_supplied():
    s = parse(APPLY_SCRIPT)
    assert len(s.statements) == 1
    assert s.warnings == ("line 3, column 44: supplied a missing ')'",)
    with pytest.raises(GralaSyntaxError):
        parse(APPLY_SCRIPT, strict=True)


def test_truncated_statement_is_not_repaired():
    with pytest.raises(GralaSyntaxError):
        parse("x = db.G[0].combine(")
    with pytest.raises(GralaSyntaxError):
        parse("x = a +\ny = b")


def test_lambda_forms():
    paren = parse_expression("(Graph g => g.V.count())")
    params = parse_expression("(Vertex vSum, Set vs) => vSum[\"n\"] = vs.count()")
    call = parse_expression("c.reduce(Graph g, Graph f => g.combine(f))")
    assert paren.style == "paren" and params.style == "params"
    assert isinstance(params.body, A.IndexAssign)
    assert call.args[0].style == "bare" and len(call.args[0].params) == 2


def test_aggregation_lambda_body_is_index_assignment():
    s = parse(SUMMARIZE_SCRIPT)
    body = s.statements[3].value.body
    assert isinstance(body, A.IndexAssign)
    assert body.index == A.Literal("avg_age")


@pytest.mark.parametrize("src, message", [
    ("x = $a", "inside a match predicate"),
    ("f = (Foo x => x)", "unknown parameter type"),
    ("x = new Thing()", "cannot construct"),
    ('x["k"] = 1', "only allowed as the body of a lambda"),
    ("f = (Graph g => g.id = 1)", "only an indexed element"),
    ("f = (Graph g, Vertex g => g)", "duplicate parameter"),
    ("x = <a, b", "closing the collection"),
])
def test_parse_errors(src, message):
    with pytest.raises(GralaSyntaxError, match=message) as info:
        parse(src)
    assert info.value.line == 1 and info.value.column >= 1


def test_every_listing_parses():
    for src in (SELECT_SCRIPT, SORT_TOP_SCRIPT, MATCH_SCRIPT, PROJECT_SCRIPT, SUMMARIZE_SCRIPT,
                APPLY_SCRIPT, REDUCE_SCRIPT):
        assert parse(src).statements


# -- printer round trip -------------------------------------------------------------

NAMES = st.sampled_from(["a", "b", "g", "coll", "vSum", "x1"])
CALLS = st.sampled_from(["select", "combine", "count", "top", "values"])
safe_floats = st.floats(0, 1e6, allow_nan=False, allow_infinity=False).filter(
    lambda f: "e" not in repr(f))

leaves = st.one_of(
    st.builds(A.Literal, st.integers(-10**6, 10**6)),
    st.builds(A.Literal, safe_floats),
    st.builds(A.Literal, st.booleans()),
    st.builds(A.Literal, st.text(st.characters(codec="utf-8", exclude_categories=("Cs",)),
                                 max_size=6)),
    st.builds(A.Var, NAMES),
    st.builds(A.Symbol, st.sampled_from(["type", "desc", "asc"])),
    st.builds(A.Binding, NAMES),
)
params = st.lists(st.builds(A.Param, st.sampled_from(A.PARAM_TYPES), NAMES), min_size=1,
                  max_size=2, unique_by=lambda p: p.name).map(tuple)


def extend(children):
    def index_assign(t):
        return st.builds(A.IndexAssign, t, children, children)
    bodies = st.one_of(children, index_assign(st.builds(A.Var, NAMES)))
    args = st.lists(st.one_of(children,
                              st.builds(A.Lambda, params, bodies, st.just("bare"))),
                    max_size=3).map(tuple)
    return st.one_of(
        st.builds(A.BinOp, st.sampled_from(["||", "&&", "==", "!=", "<", ">", "<=", ">=", "+",
                                            "-", "*", "/", "%"]), children, children),
        st.builds(A.Unary, st.just("!"), children),
        st.builds(A.Unary, st.just("-"), children).filter(
            lambda u: not (isinstance(u.operand, A.Literal) and type(u.operand.value) in (int, float)
                           and u.operand.value >= 0 and not str(u.operand.value).startswith("-"))),
        st.builds(A.Attr, children, st.sampled_from(["V", "E", "G"])),
        st.builds(A.Call, children, CALLS, args),
        st.builds(A.Index, children, children),
        st.builds(A.New, st.sampled_from(["Graph", "Vertex", "Edge"]), args),
        st.builds(A.CollectionLit, st.lists(children, max_size=3).map(tuple)),
        st.builds(A.SetLit, st.lists(children, min_size=1, max_size=3).map(tuple)),
        st.builds(A.MapLit, st.lists(st.tuples(children, children), max_size=2).map(tuple)),
        st.builds(A.Lambda, params, bodies, st.sampled_from(["paren", "params"])),
    )


expressions = st.recursive(leaves, extend, max_leaves=12)


@pytest.mark.filterwarnings("ignore:Generating overly large repr")
@settings(max_examples=300, deadline=None)
@given(expressions)
def test_printer_round_trip(expr):
    text = fmt(expr)
    assert parse_expression(text) == expr, text


def test_negated_literal_folds_into_literal():
    assert parse_expression("-5") == A.Literal(-5)
    assert parse_expression("-(5)") == A.Literal(-5)
    assert fmt(A.Unary("-", A.Literal(-5))) == "-(-5)"


def test_script_round_trip():
    for src in (MATCH_SCRIPT, SUMMARIZE_SCRIPT, SELECT_SCRIPT):
        s = parse(src)
        again = parse(format_script(s), strict=True)
        assert again.statements == s.statements


# -- interpreter ----------------------------------------------------------------------

def ids(g):
    return sorted(g.vertices), sorted(g.edges)


def test_select_listing(fig3):
    r = run(SELECT_SCRIPT, fig3)
    assert r.bindings["result1"].ids == [2]
    assert r.bindings["result2"].ids == [1]
    assert len(r.warnings) == 1


def test_sort_and_top(fig3):
    r = run(SORT_TOP_SCRIPT, fig3)
    assert r.bindings["topGraphs"].ids == [2, 0]


def test_match_listing(fig3):
    r = run(MATCH_SCRIPT, fig3)
    assert [ids(g) for g in r.bindings["result"]] == [([0, 1, 9], [17, 18]), ([2, 3, 10], [19, 20])]


def test_project_listing(fig3):
    g = run(PROJECT_SCRIPT, fig3).bindings["projGraph"]
    assert {v.label: v.properties for v in g.vertices.values()} == {
        "Alice": {"from": "Leipzig"}, "Bob": {"from": "Leipzig"}, "Eve": {"from": "Leipzig"}}
    assert {e.label for e in g.edges.values()} == {"knows"}
    assert all(not e.properties for e in g.edges.values())


def test_summarize_listing(fig3):
    g = run(SUMMARIZE_SCRIPT, fig3).bindings["sumGraph"]
    assert sorted((v["city"], v["avg_age"]) for v in g.vertices.values()) == \
        [("Berlin", 23.0), ("Dresden", 36.0), ("Leipzig", 35.0)]
    assert sorted(e["count"] for e in g.edges.values()) == [1, 1, 2, 2, 4]


def test_apply_listing(fig3_clean):
    r = run(APPLY_SCRIPT, fig3_clean)
    assert [g["vertexCount"] for g in r.bindings["counted"]] == [3, 3, 4]
    assert len(r.warnings) == 1


def test_reduce_listing(fig3):
    g = run(REDUCE_SCRIPT, fig3).bindings["totalMerge"]
    assert sorted(g.vertices) == [0, 1, 2, 3, 4, 5]
    assert len(g.edges) == 10


def test_aggregate_statement_on_db_graph(fig3):
    r = run('g = db.G[1].aggregate("vertexCount", (Graph g => g.V.count()))', fig3)
    assert r.bindings["g"]["vertexCount"] == 3


def test_call_for_collection(fig3):
    src = """persons = db.G.reduce(Graph g, Graph f => g.combine(f))
communities = persons.callForCollection(:CommunityDetection, {"graphPropertyKey":"community"})"""
    comms = run(src, fig3).bindings["communities"]
    assert sum(len(g) for g in comms) == 6
    assert all(g.label == "Community" for g in comms)


def test_values_sum_and_average(fig3):
    r = run('s = db.G[1].V.values("age").sum()\na = db.G[1].V.average("age")', fig3)
    assert r.bindings["s"] == 30 + 42 + 23
    assert r.bindings["a"] == pytest.approx((30 + 42 + 23) / 3)


def test_external_bindings_and_timings(fig3):
    seen = []
    r = run("x = g.V.count()\ny = x * 2", fig3, {"g": fig3.graphs[2]}, on_statement=seen.append)
    assert r.bindings["y"] == 8 and r.value == 8
    assert [t.index for t in seen] == [1, 2]
    assert all(t.seconds >= 0 for t in r.timings)


def test_absent_property_comparisons(fig3):
    r = run('c = db.G[0].V.select(Vertex v => v["age"] > 20).count()', fig3)
    assert r.bindings["c"] == 1


@pytest.mark.parametrize("src, exc, message", [
    ("x = nothing", GralaRuntimeError, "undefined"),
    ("x = db.G.top(\"2\")", GralaTypeError, "must be an Integer"),
    ("x = db.G.top(-1)", GralaRuntimeError, "must not be negative"),
    ("x = db.G.select(Vertex v => true)", GralaTypeError, "Vertex"),
    ("x = db.G.select(Graph g => 1)", GralaTypeError, "expected Boolean"),
    ("x = db.G[0].combine(1)", GralaTypeError, "Graph"),
    ("x = db.G[7]", GralaRuntimeError, "7"),
    ("x = db.G[0].frobnicate()", GralaRuntimeError, "frobnicate"),
    ("x = db.callForGraph(:NoSuchThing, {})", GralaRuntimeError, "NoSuchThing"),
])
def test_runtime_errors_have_positions(fig3, src, exc, message):
    with pytest.raises(exc, match=message) as info:
        run(src, fig3)
    assert info.value.line == 1 and info.value.column is not None


def test_stored_graphs_are_read_only(fig3):
    with pytest.raises(GralaRuntimeError):
        run('x = db.G.apply(Graph g => g["k"] = 1)', fig3)


def test_new_vertex_outside_projection(fig3):
    r = run('v = new Vertex("Person", {"name": "Zoe"})', fig3)
    assert r.bindings["v"].label == "Person" and r.bindings["v"]["name"] == "Zoe"


def test_database_is_not_mutated(fig3):
    before = (len(fig3.vertices), len(fig3.edges), len(fig3.graphs))
    run(SUMMARIZE_SCRIPT, fig3)
    run(PROJECT_SCRIPT, fig3)
    assert (len(fig3.vertices), len(fig3.edges), len(fig3.graphs)) == before
    assert fig3.vertices[0].label == "Person"


def test_empty_database():
    r = run("n = db.V.count()\nm = db.G.count()", EpgmDatabase())
    assert (r.bindings["n"], r.bindings["m"]) == (0, 0)


def test_graph_valued_binding_types(fig3):
    r = run("g = db.G[0]\nc = db.G", fig3)
    assert isinstance(r.bindings["g"], LogicalGraph)
    assert r.bindings["c"].ids == [0, 1, 2]
