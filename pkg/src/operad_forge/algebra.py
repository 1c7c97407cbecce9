"""Exact linear combinations of shuffle tree monomials."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from . import trees
from .trees import Occurrence, ShuffleSignature, Tree


def as_scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not allowed")
    return Fraction(c)


def scalar_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Element:
    """A finite rational combination of monomials of one arity.

    Treated as an immutable value: operations return new elements.
    """

    __slots__ = ("arity", "terms")

    def __init__(self, terms=None, arity: int | None = None):
        clean: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for t, c in items:
                c = as_scalar(c)
                if c:
                    n = trees.arity(t)
                    if arity is None:
                        arity = n
                    elif n != arity:
                        raise ValueError(f"monomial {trees.to_text(t)} has arity {n}, expected {arity}")
                    clean[t] = clean.get(t, 0) + c
                    if not clean[t]:
                        del clean[t]
        self.terms = clean
        self.arity = arity

    @classmethod
    def monomial(cls, t: Tree, c=1) -> Element:
        return cls({t: c})

    @classmethod
    def zero(cls, arity: int | None = None) -> Element:
        return cls(None, arity)

    @classmethod
    def _raw(cls, terms: dict, arity) -> Element:
        e = cls.__new__(cls)
        e.terms = terms
        e.arity = arity
        return e

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __contains__(self, t):
        return t in self.terms

    def coefficient(self, t: Tree) -> Fraction:
        return self.terms.get(t, Fraction(0))

    def _check(self, other: Element):
        if self.arity is not None and other.arity is not None and self.arity != other.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")
        return self.arity if self.arity is not None else other.arity

    def __add__(self, other: Element) -> Element:
        n = self._check(other)
        out = dict(self.terms)
        for t, c in other.terms.items():
            v = out.get(t, 0) + c
            if v:
                out[t] = v
            else:
                out.pop(t, None)
        return Element._raw(out, n)

    def __neg__(self) -> Element:
        return Element._raw({t: -c for t, c in self.terms.items()}, self.arity)

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def __mul__(self, c) -> Element:
        c = as_scalar(c)
        if not c:
            return Element.zero(self.arity)
        return Element._raw({t: c * v for t, v in self.terms.items()}, self.arity)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Element({self.to_text()!r})"

    def leading_monomial(self, order) -> Tree:
        if not self.terms:
            raise ValueError("the zero element has no leading monomial")
        return order.max(self.terms)

    def leading_coefficient(self, order) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order) -> Element:
        return self * (1 / self.leading_coefficient(order))

    def sorted_terms(self, order) -> list:
        return sorted(self.terms.items(), key=lambda kv: order.key(kv[0]), reverse=True)

    def to_text(self, order=None) -> str:
        if not self.terms:
            return "0"
        items = self.sorted_terms(order) if order is not None else sorted(
            self.terms.items(), key=lambda kv: trees.to_text(kv[0])
        )
        parts = []
        for i, (t, c) in enumerate(items):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = trees.to_text(t) if a == 1 else f"{scalar_text(a)}*{trees.to_text(t)}"
            if i == 0:
                parts.append(("-" if sign == "-" else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def to_json(self, order=None) -> list:
        items = self.sorted_terms(order) if order is not None else sorted(
            self.terms.items(), key=lambda kv: trees.to_text(kv[0])
        )
        return [{"coeff": scalar_text(c), "monomial": trees.to_json(t)} for t, c in items]

    @classmethod
    def from_json(cls, data, arity=None) -> Element:
        return cls([(trees.from_json(d["monomial"]), Fraction(d["coeff"])) for d in data], arity)


def linear_combination(pairs: Iterable, arity=None) -> Element:
    out: dict = {}
    for c, e in pairs:
        c = as_scalar(c)
        for t, v in e.terms.items():
            w = out.get(t, 0) + c * v
            if w:
                out[t] = w
            else:
                out.pop(t, None)
        if arity is None:
            arity = e.arity
    return Element._raw(out, arity)


def add(e1: Element, e2: Element) -> Element:
    return e1 + e2


def scale(c, e: Element) -> Element:
    return e * c


def from_planar(pairs, sig: ShuffleSignature, arity=None) -> Element:
    """Straighten ``(coefficient, planar tree)`` pairs into an element."""
    out: dict = {}
    for c, t in pairs:
        s, m = trees.straighten(t, sig)
        v = out.get(m, 0) + s * as_scalar(c)
        if v:
            out[m] = v
        else:
            out.pop(m, None)
        if arity is None:
            arity = trees.arity(t)
    return Element._raw(out, arity)


def apply_permutation(e: Element, sigma, sig: ShuffleSignature) -> Element:
    return from_planar(
        ((c, trees.relabel(t, {i + 1: s for i, s in enumerate(sigma)})) for t, c in e), sig, e.arity
    )


def replace_occurrence(host: Tree, occ: Occurrence, replacement: Element) -> Element:
    """Substitute ``replacement`` (an element of the pattern's arity) at ``occ``."""
    if replacement.arity is not None and replacement.arity != trees.arity(occ.pattern):
        raise ValueError("replacement arity differs from the pattern arity")
    out = {}
    for t, c in replacement.terms.items():
        r = trees.substitute(host, occ, t)
        out[r] = out.get(r, 0) + c
    return Element(out, trees.arity(host))


def weight_of(t: Tree, weights: dict) -> int:
    total = 0
    for _, v in trees.vertices(t):
        try:
            total += weights[v[0]]
        except KeyError:
            raise ValueError(f"generator {v[0]!r} has no weight") from None
    return total


def weight_components(e: Element, weights: dict) -> dict[int, Element]:
    """Split ``e`` into weight-homogeneous parts, keyed by weight (ascending)."""
    parts: dict[int, dict] = {}
    for t, c in e:
        parts.setdefault(weight_of(t, weights), {})[t] = c
    return {w: Element._raw(parts[w], e.arity) for w in sorted(parts)}


def change_basis(e: Element, table: dict) -> Element:
    """Vertexwise linear substitution of generators.

    ``table[g]`` maps a generator name to ``{new_name: coefficient}``; all new
    generators must have the arity of ``g``.  The planar shape is kept, so
    shuffle trees stay shuffle trees.
    """
    out: dict = {}
    for t, c in e:
        for t2, c2 in _expand(t, table).items():
            v = out.get(t2, 0) + c * c2
            if v:
                out[t2] = v
            else:
                out.pop(t2, None)
    return Element._raw(out, e.arity)


def _expand(t: Tree, table) -> dict:
    if isinstance(t, int):
        return {t: Fraction(1)}
    try:
        images = table[t[0]]
    except KeyError:
        raise ValueError(f"generator {t[0]!r} is not in the substitution table") from None
    partial = {(): Fraction(1)}
    for child in t[1:]:
        ce = _expand(child, table)
        nxt = {}
        for kids, c in partial.items():
            for k, c2 in ce.items():
                nxt[kids + (k,)] = c * c2
        partial = nxt
    out = {}
    for name, c in images.items():
        c = as_scalar(c)
        for kids, c2 in partial.items():
            out[(name, *kids)] = c * c2
    return out


HALF = Fraction(1, 2)


def polarization_table(product="dot", sym="o", bracket="b") -> dict:
    """x.y = (x o y + [x, y]) / 2 on the shuffle pair (dot, dot')."""
    p = trees.partner_name(product)
    return {product: {sym: HALF, bracket: HALF}, p: {sym: HALF, bracket: -HALF}}


def depolarization_table(product="dot", sym="o", bracket="b") -> dict:
    """x o y = x.y + y.x and [x, y] = x.y - y.x."""
    p = trees.partner_name(product)
    return {sym: {product: 1, p: 1}, bracket: {product: 1, p: -1}}


def polarize(e: Element, product="dot", sym="o", bracket="b") -> Element:
    return change_basis(e, polarization_table(product, sym, bracket))


def depolarize(e: Element, product="dot", sym="o", bracket="b") -> Element:
    return change_basis(e, depolarization_table(product, sym, bracket))


def proportional(a: Element, b: Element) -> bool:
    """True when ``a = c * b`` for some nonzero scalar ``c``."""
    if not a or not b or a.terms.keys() != b.terms.keys():
        return False
    t0 = next(iter(a.terms))
    r = a.terms[t0] / b.terms[t0]
    return all(a.terms[t] == r * b.terms[t] for t in a.terms)
