"""Text format for series specifications.

Grammar (``;`` starts a comment that runs to the end of the line)::

    document   := form*
    form       := "(" "field" ("Q" | "Fq" INT) ")"
                | "(" "series" NAME expr ")"
                | "(" "relation" NAME "[" poly* "]" ")"
    expr       := NAME                                 ; an earlier series
                | "(" "RationalFn" poly poly ")"       ; numerator, denominator
                | "(" "Algebraic" "[" poly* "]" elem ")"  ; P_0 .. P_r, y(0)
                | "(" "HadamardProduct" expr expr ")"
                | "(" "HadamardQuotient" expr expr ")"
                | "(" "DiffOp" poly expr ")"           ; polynomial in n
                | "(" "Scale" elem expr ")"
                | "(" "Polylog" INT ")"
                | "(" "Literal" poly ")"               ; finite coefficient prefix
    poly       := "[" elem* "]"                        ; lowest degree first
    elem       := INT | INT "/" INT                    ; over Q
                | "<" INT* ">" ["/" "<" INT* ">"]      ; over F_q(x), coefficients of x
                | INT                                  ; over F_q(x), a constant

The ``field`` form must come first.  Names are identifiers not used before.
"""

from __future__ import annotations

import re
from fractions import Fraction
from dataclasses import dataclass, field

from .errors import SpecSyntaxError
from .fields import FieldCtx
from .relations import BivariateRelation
from .series import (
    Algebraic,
    DiffOp,
    HadamardProduct,
    HadamardQuotient,
    Literal,
    Polylog,
    PowerSeries,
    RationalFn,
    Scale,
    SeriesExpr,
)

_TOKEN = re.compile(r"\s+|;[^\n]*|(<[^>]*>(?:/<[^>]*>)?|[()\[\]]|[^\s()\[\]<>;]+)")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*$")
_KEYWORDS = {"field", "series", "relation", "RationalFn", "Algebraic", "HadamardProduct",
             "HadamardQuotient", "DiffOp", "Scale", "Polylog", "Literal"}


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SpecSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        if m.group(1):
            out.append(m.group(1))
        pos = m.end()
    return out


def _read(tokens, i):
    """S-expression reader: returns (node, next index); lists are tagged
    ("(", items) or ("[", items)."""
    if i >= len(tokens):
        raise SpecSyntaxError("unexpected end of input")
    tok = tokens[i]
    if tok in "([":
        close = ")" if tok == "(" else "]"
        items, i = [], i + 1
        while True:
            if i >= len(tokens):
                raise SpecSyntaxError(f"missing {close!r}")
            if tokens[i] == close:
                return (tok, items), i + 1
            if tokens[i] in ")]":
                raise SpecSyntaxError(f"mismatched {tokens[i]!r}")
            node, i = _read(tokens, i)
            items.append(node)
    if tok in ")]":
        raise SpecSyntaxError(f"unexpected {tok!r}")
    return tok, i + 1


@dataclass
class SpecDocument:
    ctx: FieldCtx
    series: dict = field(default_factory=dict)  # name -> SeriesExpr
    relations: dict = field(default_factory=dict)  # name -> BivariateRelation

    def power_series(self, name) -> PowerSeries:
        if name not in self.series:
            raise SpecSyntaxError(f"no series named {name!r}")
        return build(self.series[name], self.ctx)

    def relation(self, name) -> BivariateRelation:
        if name not in self.relations:
            raise SpecSyntaxError(f"no relation named {name!r}")
        return self.relations[name]


class _Parser:
    def __init__(self):
        self.ctx = None
        self.doc = None

    def elem(self, node):
        if not isinstance(node, str):
            raise SpecSyntaxError("expected a field element")
        try:
            if self.ctx.is_rationals or not node.startswith("<"):
                return self.ctx.coerce(self._rational(node))
            return self.ctx.parse_element(node)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise SpecSyntaxError(f"bad element {node!r}: {exc}") from None

    def _rational(self, node):
        if not re.fullmatch(r"-?\d+(/-?\d+)?", node):
            raise ValueError("not a rational number")
        return Fraction(node)

    def poly(self, node):
        if not (isinstance(node, tuple) and node[0] == "["):
            raise SpecSyntaxError("expected a bracketed coefficient list")
        return tuple(self.elem(c) for c in node[1])

    def integer(self, node, lo=0):
        if not (isinstance(node, str) and re.fullmatch(r"-?\d+", node)) or int(node) < lo:
            raise SpecSyntaxError(f"expected an integer >= {lo}, got {node!r}")
        return int(node)

    def expr(self, node) -> SeriesExpr:
        if isinstance(node, str):
            if node not in self.doc.series:
                raise SpecSyntaxError(f"unknown series name {node!r}")
            return self.doc.series[node]
        kind, items = node
        if kind != "(" or not items or not isinstance(items[0], str):
            raise SpecSyntaxError("expected an expression")
        tag, args = items[0], items[1:]
        arity = {"RationalFn": 2, "Algebraic": 2, "HadamardProduct": 2, "HadamardQuotient": 2,
                 "DiffOp": 2, "Scale": 2, "Polylog": 1, "Literal": 1}
        if tag not in arity:
            raise SpecSyntaxError(f"unknown node tag {tag!r}")
        if len(args) != arity[tag]:
            raise SpecSyntaxError(f"{tag} takes {arity[tag]} arguments")
        if tag == "RationalFn":
            num, den = self.poly(args[0]), self.poly(args[1])
            if not den or not den[0]:
                raise SpecSyntaxError("RationalFn denominator must be nonzero at t = 0")
            return RationalFn(num, den)
        if tag == "Algebraic":
            rel = args[0]
            if not (isinstance(rel, tuple) and rel[0] == "[") or len(rel[1]) < 2:
                raise SpecSyntaxError("Algebraic needs a list of at least two polynomials")
            return Algebraic(tuple(self.poly(p) for p in rel[1]), self.elem(args[1]))
        if tag == "HadamardProduct":
            return HadamardProduct(self.expr(args[0]), self.expr(args[1]))
        if tag == "HadamardQuotient":
            return HadamardQuotient(self.expr(args[0]), self.expr(args[1]))
        if tag == "DiffOp":
            return DiffOp(self.poly(args[0]), self.expr(args[1]))
        if tag == "Scale":
            beta = self.elem(args[0])
            if not beta:
                raise SpecSyntaxError("Scale needs a nonzero factor")
            return Scale(beta, self.expr(args[1]))
        if tag == "Polylog":
            return Polylog(self.integer(args[0]))
        return Literal(self.poly(args[0]))

    def name(self, node):
        if not isinstance(node, str) or not _NAME.match(node) or node in _KEYWORDS:
            raise SpecSyntaxError(f"bad name {node!r}")
        if node in self.doc.series or node in self.doc.relations:
            raise SpecSyntaxError(f"name {node!r} defined twice")
        return node

    def document(self, text) -> SpecDocument:
        tokens = _tokenize(text)
        i = 0
        while i < len(tokens):
            node, i = _read(tokens, i)
            if not (isinstance(node, tuple) and node[0] == "(" and node[1] and isinstance(node[1][0], str)):
                raise SpecSyntaxError("top level must be (field ...), (series ...) or (relation ...)")
            head, args = node[1][0], node[1][1:]
            if head == "field":
                if self.ctx is not None:
                    raise SpecSyntaxError("field declared twice")
                if args == ["Q"]:
                    self.ctx = FieldCtx.rationals()
                elif len(args) == 2 and args[0] == "Fq":
                    try:
                        self.ctx = FieldCtx.function_field(self.integer(args[1], 2))
                    except ValueError as exc:
                        raise SpecSyntaxError(str(exc)) from None
                else:
                    raise SpecSyntaxError("field must be (field Q) or (field Fq q)")
                self.doc = SpecDocument(self.ctx)
                continue
            if self.ctx is None:
                raise SpecSyntaxError("the field form must come first")
            if head == "series" and len(args) == 2:
                name = self.name(args[0])
                self.doc.series[name] = self.expr(args[1])
            elif head == "relation" and len(args) == 2:
                name = self.name(args[0])
                rel = args[1]
                if not (isinstance(rel, tuple) and rel[0] == "["):
                    raise SpecSyntaxError("relation needs a list of polynomials")
                try:
                    self.doc.relations[name] = BivariateRelation.make(
                        [self.poly(p) for p in rel[1]], self.ctx)
                except ValueError as exc:
                    raise SpecSyntaxError(str(exc)) from None
            else:
                raise SpecSyntaxError(f"bad top-level form {head!r}")
        if self.doc is None:
            raise SpecSyntaxError("empty specification")
        return self.doc


def parse_spec(text: str) -> SpecDocument:
    return _Parser().document(text)


def parse_expr(text: str, ctx: FieldCtx) -> SeriesExpr:
    p = _Parser()
    p.ctx = ctx
    p.doc = SpecDocument(ctx)
    tokens = _tokenize(text)
    node, i = _read(tokens, 0)
    if i != len(tokens):
        raise SpecSyntaxError("trailing input after expression")
    return p.expr(node)


# ---------------------------------------------------------------------------
# printing


def format_elem(ctx: FieldCtx, a) -> str:
    return ctx.format_element(a)


def format_poly(ctx: FieldCtx, poly) -> str:
    return "[" + " ".join(format_elem(ctx, c) for c in poly) + "]"


def format_expr(expr: SeriesExpr, ctx: FieldCtx) -> str:
    fp = lambda p: format_poly(ctx, p)  # noqa: E731
    if isinstance(expr, RationalFn):
        return f"(RationalFn {fp(expr.numer)} {fp(expr.denom)})"
    if isinstance(expr, Algebraic):
        rel = "[" + " ".join(fp(p) for p in expr.relation) + "]"
        return f"(Algebraic {rel} {format_elem(ctx, expr.y0)})"
    if isinstance(expr, HadamardProduct):
        return f"(HadamardProduct {format_expr(expr.left, ctx)} {format_expr(expr.right, ctx)})"
    if isinstance(expr, HadamardQuotient):
        return f"(HadamardQuotient {format_expr(expr.numer, ctx)} {format_expr(expr.denom, ctx)})"
    if isinstance(expr, DiffOp):
        return f"(DiffOp {fp(expr.poly)} {format_expr(expr.inner, ctx)})"
    if isinstance(expr, Scale):
        return f"(Scale {format_elem(ctx, expr.beta)} {format_expr(expr.inner, ctx)})"
    if isinstance(expr, Polylog):
        return f"(Polylog {expr.weight})"
    if isinstance(expr, Literal):
        return f"(Literal {fp(expr.coeffs)})"
    raise TypeError(f"unknown node {expr!r}")


def format_spec(doc: SpecDocument) -> str:
    ctx = doc.ctx
    lines = ["(field Q)" if ctx.is_rationals else f"(field Fq {ctx.q})"]
    for name, expr in doc.series.items():
        lines.append(f"(series {name} {format_expr(expr, ctx)})")
    for name, rel in doc.relations.items():
        polys = " ".join(format_poly(ctx, p) for p in rel.coeffs)
        lines.append(f"(relation {name} [{polys}])")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------


def build(expr: SeriesExpr, ctx: FieldCtx, cache: dict | None = None) -> PowerSeries:
    """PowerSeries for an expression tree; equal subtrees share one memo."""
    cache = {} if cache is None else cache
    if expr in cache:
        return cache[expr]
    if isinstance(expr, (HadamardProduct, HadamardQuotient)):
        a, b = (expr.left, expr.right) if isinstance(expr, HadamardProduct) else (expr.numer, expr.denom)
        children = [build(a, ctx, cache), build(b, ctx, cache)]
    elif isinstance(expr, (DiffOp, Scale)):
        children = [build(expr.inner, ctx, cache)]
    else:
        children = []
    s = PowerSeries(expr, ctx, children)
    cache[expr] = s
    return s
