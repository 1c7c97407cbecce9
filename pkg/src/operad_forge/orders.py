"""Monomial orders on shuffle tree monomials.

Path-lexicographic convention (frozen, see README):

1. arity;
2. (weighted variant only) total generator weight, larger first unless
   ``descending`` is set;
3. the path sequence ``(w_1, ..., w_n)``, where ``w_i`` is the word of
   generators met on the way from the root to leaf ``i``.  Words are compared
   degree-lexicographically (longer is larger, then letter by letter using the
   position of the generator in the precedence list), sequences
   lexicographically starting from leaf 1;
4. the leaf permutation read left to right, compared reverse-lexicographically
   (the permutation whose last entry is smaller is larger).

The XY-augmented order first compares the number of (X above Y) vertex pairs,
more pairs meaning smaller, and falls back to an admissible order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .trees import Tree, arity, leaves, vertices


@lru_cache(maxsize=None)
def _paths(t: Tree) -> dict:
    out = {}

    def walk(s, word):
        if isinstance(s, int):
            out[s] = word
            return
        w = word + (s[0],)
        for c in s[1:]:
            walk(c, w)

    walk(t, ())
    return out


@lru_cache(maxsize=None)
def _pathlex_key(precedence: tuple, t: Tree) -> tuple:
    rank = {name: i for i, name in enumerate(precedence)}
    paths = _paths(t)
    try:
        words = tuple(
            (len(paths[i]), tuple(rank[g] for g in paths[i])) for i in range(1, len(paths) + 1)
        )
    except KeyError as exc:
        raise ValueError(f"generator {exc.args[0]!r} missing from the precedence list") from None
    perm = tuple(-x for x in reversed(leaves(t)))
    return (len(paths), words, perm)


def n_pairs(t: Tree, xs, ys) -> int:
    """Number of pairs (v, v') with v an X-vertex strictly above a Y-vertex v'."""
    xs, ys = frozenset(xs), frozenset(ys)
    if xs & ys:
        raise ValueError("X and Y must be disjoint")
    return _n_pairs(t, xs, ys)


@lru_cache(maxsize=None)
def _n_pairs(t, xs, ys):
    total = 0

    def walk(s, above):
        nonlocal total
        if isinstance(s, int):
            return
        g = s[0]
        if g in ys:
            total += above
            inc = 0
        elif g in xs:
            inc = 1
        else:
            raise ValueError(f"generator {g!r} is neither in X nor in Y")
        for c in s[1:]:
            walk(c, above + inc)

    walk(t, 0)
    return total


class OrderSpec:
    """Base class; ``key(t)`` is a sort key, larger key meaning larger monomial."""

    admissible = True

    def key(self, t: Tree):
        raise NotImplementedError

    def compare(self, a: Tree, b: Tree) -> int:
        if arity(a) != arity(b):
            raise ValueError("cannot compare monomials of different arities")
        if a == b:
            return 0
        ka, kb = self.key(a), self.key(b)
        if ka == kb:
            raise AssertionError(f"order is not total: {a} and {b} share a key")
        return 1 if ka > kb else -1

    def max(self, monomials):
        return max(monomials, key=self.key)


@dataclass(frozen=True)
class PathLex(OrderSpec):
    precedence: tuple

    def key(self, t):
        return _pathlex_key(self.precedence, t)

    def describe(self) -> dict:
        return {"variant": "pathlex", "precedence": list(self.precedence)}


@dataclass(frozen=True)
class WeightedPathLex(OrderSpec):
    precedence: tuple
    weights: tuple  # ((name, weight), ...)
    descending: bool = False

    def key(self, t):
        return _weighted_key(self, t)

    def weight(self, t: Tree) -> int:
        w = dict(self.weights)
        return sum(w.get(v[0], 0) for _, v in vertices(t))

    def describe(self) -> dict:
        return {
            "variant": "weighted-pathlex",
            "precedence": list(self.precedence),
            "weights": {k: v for k, v in self.weights},
            "descending": self.descending,
        }


@lru_cache(maxsize=None)
def _weighted_key(order: WeightedPathLex, t: Tree):
    w = order.weight(t)
    return (arity(t), -w if order.descending else w, _pathlex_key(order.precedence, t))


@dataclass(frozen=True)
class XYAugmented(OrderSpec):
    xs: frozenset
    ys: frozenset
    fallback: OrderSpec

    admissible = False

    def __post_init__(self):
        object.__setattr__(self, "xs", frozenset(self.xs))
        object.__setattr__(self, "ys", frozenset(self.ys))
        if self.xs & self.ys:
            raise ValueError("X and Y must be disjoint")

    def key(self, t):
        return (arity(t), -_n_pairs(t, self.xs, self.ys), self.fallback.key(t))

    def describe(self) -> dict:
        return {
            "variant": "xy-augmented",
            "X": sorted(self.xs),
            "Y": sorted(self.ys),
            "fallback": self.fallback.describe(),
        }


def compare(a: Tree, b: Tree, order: OrderSpec) -> int:
    """-1, 0 or 1 as ``a`` is smaller than, equal to or greater than ``b``."""
    return order.compare(a, b)


def order_from_description(d: dict) -> OrderSpec:
    v = d["variant"]
    if v == "pathlex":
        return PathLex(tuple(d["precedence"]))
    if v == "weighted-pathlex":
        return WeightedPathLex(
            tuple(d["precedence"]), tuple(sorted(d["weights"].items())), bool(d.get("descending", False))
        )
    if v == "xy-augmented":
        return XYAugmented(frozenset(d["X"]), frozenset(d["Y"]), order_from_description(d["fallback"]))
    raise ValueError(f"unknown order variant {v!r}")
