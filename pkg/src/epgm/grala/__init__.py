"""GrALa, the graph analytical language: lexer, parser, printer and interpreter."""

from .ast import Script
from .interpreter import (DatabaseRef, ElementSet, GralaRuntimeError, GralaTypeError, Interpreter,
                          RunResult, StatementTiming, run)
from .lexer import GralaError, GralaSyntaxError, Token, tokenize
from .parser import parse, parse_expression
from .printer import fmt, format_script, format_statement

__all__ = ["DatabaseRef", "ElementSet", "GralaError", "GralaRuntimeError", "GralaSyntaxError",
           "GralaTypeError", "Interpreter", "RunResult", "Script", "StatementTiming", "Token",
           "fmt", "format_script", "format_statement", "parse", "parse_expression", "run",
           "tokenize"]
