"""Symbolic multilinear expressions and operad presentations.

Grammar (whitespace-insensitive)::

    element := ["+"|"-"] term (("+"|"-") term)*
    term    := [rational ["*"]] product
    product := atom ["o" atom]
    atom    := "a" integer | ident "(" product ("," product)* ")"
             | "(" product ")" | "[" product "," product "]"
    rational := integer ["/" integer]

``x o y`` is sugar for the generator named ``o`` and ``[x, y]`` for the
generator named ``b``.  A chain ``x o y o z`` is rejected: parenthesize it.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import trees
from .algebra import Element, from_planar, scalar_text
from .trees import Generator, ShuffleSignature

INFIX = "o"
BRACKET = "b"


class ExpressionError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[-+*/()\[\],]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExpressionError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


@dataclass(frozen=True)
class Expression:
    """A parsed multilinear expression: ``terms`` are (coefficient, planar tree)."""

    terms: tuple
    arity: int

    def __str__(self):
        return print_expression(self)

    def __sub__(self, other: Expression) -> Expression:
        if other.arity != self.arity:
            raise ExpressionError("arity mismatch")
        return Expression(self.terms + tuple((-c, t) for c, t in other.terms), self.arity)


class _Parser:
    def __init__(self, text: str, gens: dict):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.gens = gens

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None, kind=None):
        tok = self.toks[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value or kind
            got = tok[1] or "end of input"
            raise ExpressionError(f"expected {want!r}, got {got!r}", tok[2])
        self.i += 1
        return tok

    def element(self):
        terms = []
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "sym":
            sign = -1 if self.take()[1] == "-" else 1
        terms.append(self.term(sign))
        while self.peek()[0] == "sym" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            terms.append(self.term(sign))
        self.take(kind="end")
        return terms

    def term(self, sign):
        coeff = Fraction(sign)
        if self.peek()[0] == "num":
            num = int(self.take()[1])
            den = 1
            if self.peek()[1] == "/":
                self.take("/")
                den = int(self.take(kind="num")[1])
                if den == 0:
                    raise ExpressionError("zero denominator", self.toks[self.i - 1][2])
            coeff *= Fraction(num, den)
            if self.peek()[1] == "*":
                self.take("*")
        return coeff, self.product()

    def product(self):
        left = self.atom()
        tok = self.peek()
        if tok[0] == "ident" and tok[1] == INFIX:
            self.take()
            self._need(INFIX, 2, tok[2])
            right = self.atom()
            nxt = self.peek()
            if nxt[0] == "ident" and nxt[1] == INFIX:
                raise ExpressionError("ambiguous chain of 'o'; add parentheses", nxt[2])
            return (INFIX, left, right)
        return left

    def _need(self, name, n, pos):
        g = self.gens.get(name)
        if g is None:
            raise ExpressionError(f"unknown generator {name!r}", pos)
        if g.arity != n:
            raise ExpressionError(f"generator {name!r} has arity {g.arity}, used with {n} arguments", pos)

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "sym" and val == "(":
            self.take()
            inner = self.product()
            self.take(")")
            return inner
        if kind == "sym" and val == "[":
            self.take()
            left = self.product()
            self.take(",")
            right = self.product()
            self.take("]")
            self._need(BRACKET, 2, pos)
            return (BRACKET, left, right)
        if kind == "ident":
            self.take()
            m = re.fullmatch(r"a(\d+)", val)
            if m and self.peek()[1] != "(":
                k = int(m.group(1))
                if k < 1:
                    raise ExpressionError("arguments are numbered from a1", pos)
                return k
            self.take("(")
            args = [self.product()]
            while self.peek()[1] == ",":
                self.take(",")
                args.append(self.product())
            self.take(")")
            self._need(val, len(args), pos)
            return (val, *args)
        raise ExpressionError(f"unexpected token {val or 'end of input'!r}", pos)


def parse_expression(text: str, gens, arity: int | None = None) -> Expression:
    """Parse ``text`` over the generator table ``gens`` (names or Generators)."""
    table = {g.name: g for g in gens} if not isinstance(gens, dict) else gens
    terms = _Parser(text, table).element()
    n = None
    for coeff, t in terms:
        labs = sorted(trees.leaves(t))
        k = len(labs)
        if labs != list(range(1, k + 1)):
            raise ExpressionError(f"term {_print_tree(t)} does not use each of a1..a{k} exactly once")
        if n is None:
            n = k
        elif k != n:
            raise ExpressionError(f"terms of different arities ({n} and {k})")
    if arity is not None and n != arity:
        raise ExpressionError(f"expression has arity {n}, expected {arity}")
    return Expression(tuple((c, t) for c, t in terms if c), n)


def _print_tree(t, top=True) -> str:
    if isinstance(t, int):
        return f"a{t}"
    name = t[0]
    if name == INFIX and len(t) == 3:
        s = f"{_print_tree(t[1], False)} o {_print_tree(t[2], False)}"
        return s if top else f"({s})"
    if name == BRACKET and len(t) == 3:
        return f"[{_print_tree(t[1])}, {_print_tree(t[2])}]"
    return f"{name}(" + ", ".join(_print_tree(c) for c in t[1:]) + ")"


def print_expression(e: Expression) -> str:
    if not e.terms:
        return "0"
    out = []
    for i, (c, t) in enumerate(e.terms):
        a = abs(c)
        body = _print_tree(t) if a == 1 else f"{scalar_text(a)}*{_print_tree(t)}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(f" {'-' if c < 0 else '+'} {body}")
    return "".join(out)


def to_element(expr: Expression, sig: ShuffleSignature, sigma=None) -> Element:
    """The shuffle element of ``expr`` with ``a_i`` placed at leaf ``sigma[i-1]``."""
    if sigma is None:
        return from_planar(expr.terms, sig, expr.arity)
    mapping = {i + 1: s for i, s in enumerate(sigma)}
    return from_planar(((c, trees.relabel(t, mapping)) for c, t in expr.terms), sig, expr.arity)


def to_shuffle_elements(expr: Expression, sig: ShuffleSignature, order) -> list[Element]:
    """Expand ``expr`` over its S_n-orbit; zero and proportional copies dropped."""
    out = []
    seen = set()
    for sigma in itertools.permutations(range(1, expr.arity + 1)):
        e = to_element(expr, sig, sigma)
        if not e:
            continue
        m = e.monic(order)
        if m not in seen:
            seen.add(m)
            out.append(m)
    return out


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Presentation:
    name: str
    generators: tuple
    relations: tuple
    notes: str = ""

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {self.name!r}")
        for r in self.relations:
            parse_expression(r, self.generators)

    @property
    def generator_table(self) -> dict:
        return {g.name: g for g in self.generators}

    def parsed_relations(self) -> list[Expression]:
        return [parse_expression(r, self.generators) for r in self.relations]

    def signature(self) -> ShuffleSignature:
        return ShuffleSignature.from_generators(self.generators)

    def canonical(self) -> Presentation:
        return Presentation(
            self.name, self.generators, tuple(str(e) for e in self.parsed_relations()), self.notes
        )

    def to_json(self) -> dict:
        gens = []
        for g in self.generators:
            d = {"name": g.name, "arity": g.arity, "symmetry": g.symmetry}
            if g.weight:
                d["weight"] = g.weight
            if g.tag:
                d["tag"] = g.tag
            gens.append(d)
        return {
            "name": self.name,
            "generators": gens,
            "relations": [str(e) for e in self.parsed_relations()],
            "notes": self.notes,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, d: dict) -> Presentation:
        gens = tuple(
            Generator(g["name"], int(g["arity"]), g["symmetry"], int(g.get("weight", 0)), g.get("tag"))
            for g in d["generators"]
        )
        return cls(d["name"], gens, tuple(d["relations"]), d.get("notes", ""))

    @classmethod
    def loads(cls, text: str) -> Presentation:
        return cls.from_json(json.loads(text))

    def fingerprint(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ShufflePresentation:
    signature: ShuffleSignature
    relations: tuple  # of Element
    name: str = ""
    _by_arity: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        for r in self.relations:
            if not r:
                raise ValueError("zero relation in a presentation")

    def of_arity(self, n: int) -> list[Element]:
        return [r for r in self.relations if r.arity == n]


def shuffle_presentation(p: Presentation, order) -> ShufflePresentation:
    sig = p.signature()
    rels = []
    seen = set()
    for expr in p.parsed_relations():
        for e in to_shuffle_elements(expr, sig, order):
            if e not in seen:
                seen.add(e)
                rels.append(e)
    return ShufflePresentation(sig, tuple(rels), p.name)
