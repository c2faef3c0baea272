"""Seeded synthetic datasets standing in for a social network benchmark and a
business process generator.

Both generators are pure functions of ``(scale, seed)``: the same arguments
give the same vertices, edges, ids and property values on every platform.

The social graph plants communities. Persons get contiguous ids per
community and ``knows`` edges are wired by a stochastic block model, dense
inside a community and sparse across. The planted partition and the model
parameters go into ``db.metadata`` so tests can score community detection
against it.

The business graph is a set of sales cases. Each case is a chain of
transactional objects (quotation, order, purchase orders, delivery notes,
invoice) linked to shared master data (customers, vendors, employees,
products). Some cases stop before the invoice.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass

from .model import EpgmDatabase

SOCIAL_LABELS = ("Person", "Forum", "knows", "hasMember", "hasModerator", "Community",
                 "Tag", "hasInterest", "hasTag")
BUSINESS_LABELS = ("Customer", "Vendor", "Employee", "Product", "SalesQuotation", "SalesOrder",
                   "PurchOrder", "DeliveryNote", "SalesInvoice", "sentBy", "sentTo", "contains",
                   "basedOn", "receivedFrom", "processedBy", "serves", "placedAt", "fulfills",
                   "deliveredBy", "createdFor", "billedTo", "approvedBy")

CITIES = ("Leipzig", "Dresden", "Berlin", "Hamburg", "Munich", "Cologne", "Frankfurt", "Stuttgart")
FIRST_NAMES = ("Alice", "Bob", "Carol", "Dave", "Eve", "Frank", "Grace", "Heidi", "Ivan", "Judy",
               "Mallory", "Niaj", "Olivia", "Peggy", "Rupert", "Sybil", "Trent", "Victor",
               "Walter", "Yara")
TOPICS = ("Databases", "Hadoop", "Graphs", "Streaming", "Machine Learning", "Compilers",
          "Networks", "Security", "Cloud", "Visualization", "Statistics", "Bioinformatics")


@dataclass(frozen=True)
class SocialParams:
    persons_per_scale: int = 1000
    min_community: int = 30
    max_community: int = 70
    # expected knows-degree of a person inside and across its community
    internal_degree: float = 14.0
    external_degree: float = 1.0
    forums_per_community: int = 1
    tags_per_scale: int = 24


@dataclass(frozen=True)
class BusinessParams:
    cases_per_scale: int = 300
    customers_per_scale: int = 60
    vendors_per_scale: int = 12
    employees_per_scale: int = 25
    products_per_scale: int = 80
    order_rate: float = 0.8
    invoice_rate: float = 0.85


def _community_sizes(n: int, rng: random.Random, lo: int, hi: int) -> list[int]:
    sizes = []
    left = n
    while left > 0:
        if left <= hi:
            size = left
        else:
            size = rng.randint(lo, hi)
            if left - size < lo:
                size = left - lo
        sizes.append(size)
        left -= size
    return sizes


def social_network(scale: int = 1, seed: int = 0, params: SocialParams = SocialParams()) -> EpgmDatabase:
    """Persons, forums and tags with planted communities in the ``knows`` relation.

    Exactly ``1000 * scale`` Person vertices. Every person has at least one
    ``knows`` edge. ``db.metadata["planted"]`` maps each community index to
    the inclusive id range of its members.
    """
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    rng = random.Random(f"social:{scale}:{seed}")
    db = EpgmDatabase()
    n = params.persons_per_scale * scale
    sizes = _community_sizes(n, rng, params.min_community, params.max_community)

    members: list[list[int]] = []
    community_of: list[int] = []
    for c, size in enumerate(sizes):
        home = CITIES[rng.randrange(len(CITIES))]
        ids = []
        for _ in range(size):
            # most members share the community's city, as friend circles tend to
            city = home if rng.random() < 0.7 else CITIES[rng.randrange(len(CITIES))]
            ids.append(db.add_vertex("Person", {
                "name": f"{FIRST_NAMES[rng.randrange(len(FIRST_NAMES))]} {len(community_of)}",
                "gender": "f" if rng.random() < 0.5 else "m",
                "city": city,
                "age": rng.randint(18, 70),
            }))
            community_of.append(c)
        members.append(ids)

    degree = [0] * n

    def knows(a: int, b: int) -> None:
        if rng.random() < 0.5:
            a, b = b, a
        db.add_edge(a, b, "knows", {"since": rng.randint(2005, 2015)})
        degree[a] += 1
        degree[b] += 1

    for ids in members:
        size = len(ids)
        p_in = min(1.0, params.internal_degree / max(size - 1, 1))
        for i in range(size):
            for j in range(i + 1, size):
                if rng.random() < p_in:
                    knows(ids[i], ids[j])
    cross = round(n * params.external_degree / 2)
    made = 0
    while made < cross and len(members) > 1:
        a, b = rng.randrange(n), rng.randrange(n)
        if community_of[a] != community_of[b]:
            knows(a, b)
            made += 1
    for ids in members:
        for vid in ids:
            if degree[vid] == 0:
                other = ids[rng.randrange(len(ids))]
                while other == vid and len(ids) > 1:
                    other = ids[rng.randrange(len(ids))]
                if other != vid:
                    knows(vid, other)

    tag_count = params.tags_per_scale * scale
    tags = [db.add_vertex("Tag", {"name": f"{TOPICS[t % len(TOPICS)]} {t // len(TOPICS)}"
                                  if t >= len(TOPICS) else TOPICS[t]})
            for t in range(tag_count)]
    for c, ids in enumerate(members):
        topic = tags[rng.randrange(tag_count)]
        for _ in range(params.forums_per_community):
            forum = db.add_vertex("Forum", {"title": f"{db.vertices[topic]['name']} {c}"})
            db.add_edge(forum, topic, "hasTag")
            db.add_edge(forum, ids[rng.randrange(len(ids))], "hasModerator")
            for vid in ids:
                if rng.random() < 0.3:
                    db.add_edge(forum, vid, "hasMember")
        for vid in ids:
            if rng.random() < 0.5:
                db.add_edge(vid, topic if rng.random() < 0.7 else tags[rng.randrange(tag_count)],
                            "hasInterest")

    db.metadata["labels"] = list(SOCIAL_LABELS)
    db.metadata["generator"] = {"kind": "social", "scale": scale, "seed": seed, **asdict(params)}
    db.metadata["planted"] = [[ids[0], ids[-1]] for ids in members]
    return db


def planted_communities(db: EpgmDatabase) -> dict[int, int]:
    """Person id to planted community index, read back from the metadata."""
    out = {}
    for c, (lo, hi) in enumerate(db.metadata["planted"]):
        for vid in range(lo, hi + 1):
            out[vid] = c
    return out


def business_network(scale: int = 1, seed: int = 0,
                     params: BusinessParams = BusinessParams()) -> EpgmDatabase:
    """Sales cases around shared master data.

    Every SalesInvoice carries a positive float ``revenue``. Cases are
    disjoint in their transactional objects and meet only at master data.
    """
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    rng = random.Random(f"business:{scale}:{seed}")
    db = EpgmDatabase()

    def pick(pool: list[int]) -> int:
        return pool[rng.randrange(len(pool))]

    customers = [db.add_vertex("Customer", {"name": f"Customer {i}",
                                            "city": CITIES[rng.randrange(len(CITIES))]})
                 for i in range(params.customers_per_scale * scale)]
    vendors = [db.add_vertex("Vendor", {"name": f"Vendor {i}"})
               for i in range(params.vendors_per_scale * scale)]
    employees = [db.add_vertex("Employee", {"name": f"{FIRST_NAMES[i % len(FIRST_NAMES)]} {i}"})
                 for i in range(params.employees_per_scale * scale)]
    products = [db.add_vertex("Product", {"name": f"Product {i}",
                                          "price": round(rng.uniform(1.0, 200.0), 2)})
                for i in range(params.products_per_scale * scale)]
    # every invoice is signed off by the same controller, so top cases share one master vertex
    controller = employees[0]

    invoiced = 0
    for case in range(params.cases_per_scale * scale):
        customer = pick(customers)
        clerk = pick(employees)
        lines = rng.sample(products, rng.randint(1, 4))
        quantities = [rng.randint(1, 20) for _ in lines]
        quote = db.add_vertex("SalesQuotation", {"case": case, "date": 20150000 + rng.randint(101, 1228)})
        db.add_edge(quote, clerk, "sentBy")
        db.add_edge(quote, customer, "sentTo")
        for p, q in zip(lines, quantities):
            db.add_edge(quote, p, "contains", {"quantity": q})
        if rng.random() >= params.order_rate:
            continue
        order = db.add_vertex("SalesOrder", {"case": case})
        db.add_edge(order, quote, "basedOn")
        db.add_edge(order, customer, "receivedFrom")
        db.add_edge(order, pick(employees), "processedBy")
        for p in lines:
            purch = db.add_vertex("PurchOrder", {"case": case})
            db.add_edge(purch, order, "serves")
            db.add_edge(purch, pick(vendors), "placedAt")
            db.add_edge(purch, p, "contains")
        note = db.add_vertex("DeliveryNote", {"case": case})
        db.add_edge(note, order, "fulfills")
        db.add_edge(note, pick(vendors), "deliveredBy")
        if rng.random() >= params.invoice_rate:
            continue
        net = sum(db.vertices[p]["price"] * q for p, q in zip(lines, quantities))
        revenue = round(net * rng.uniform(1.05, 1.4), 2)
        invoice = db.add_vertex("SalesInvoice", {"case": case, "revenue": max(revenue, 0.01)})
        db.add_edge(invoice, order, "createdFor")
        db.add_edge(invoice, customer, "billedTo")
        db.add_edge(invoice, controller, "approvedBy")
        invoiced += 1

    db.metadata["labels"] = list(BUSINESS_LABELS)
    db.metadata["generator"] = {"kind": "business", "scale": scale, "seed": seed, **asdict(params)}
    db.metadata["invoiced_cases"] = invoiced
    return db


def generate(kind: str, scale: int = 1, seed: int = 0) -> EpgmDatabase:
    if kind == "social":
        return social_network(scale, seed)
    if kind == "business":
        return business_network(scale, seed)
    raise ValueError(f"unknown dataset kind {kind!r}; expected 'social' or 'business'")
