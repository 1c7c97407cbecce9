"""Exact sparse elimination over the rationals."""

from __future__ import annotations

import math
from fractions import Fraction

from .algebra import Element


def echelon_reduce(rows, order):
    """Fully reduced row echelon form of ``rows`` with respect to ``order``.

    Pivots are leading monomials.  Returns a list of ``(row, source_index)``
    with monic rows; ``source_index`` is the input row that created the pivot.
    Rows are visited in input order, so the result is deterministic.
    """
    pivots: dict = {}  # leading monomial -> [row, source]
    for idx, row in enumerate(rows):
        terms = dict(row.terms)
        # reduce by existing pivots until the leading term is new
        while terms:
            lead = order.max(terms)
            p = pivots.get(lead)
            if p is None:
                break
            c = terms[lead]
            for t, v in p[0].terms.items():
                w = terms.get(t, 0) - c * v
                if w:
                    terms[t] = w
                else:
                    terms.pop(t, None)
        if not terms:
            continue
        lead = order.max(terms)
        inv = 1 / terms[lead]
        terms = {t: v * inv for t, v in terms.items()}
        # fully reduce the new row by the others
        for t in [t for t in terms if t != lead and t in pivots]:
            c = terms.get(t)
            if not c:
                continue
            for u, v in pivots[t][0].terms.items():
                w = terms.get(u, 0) - c * v
                if w:
                    terms[u] = w
                else:
                    terms.pop(u, None)
        new = Element._raw(terms, row.arity)
        # and the others by the new one
        for p in pivots.values():
            c = p[0].terms.get(lead)
            if c:
                p[0] = p[0] - new * c
        pivots[lead] = [new, idx]
    out = [(r, src) for r, src in pivots.values()]
    out.sort(key=lambda rs: order.key(rs[0].leading_monomial(order)))
    return out


def _integer_row(row: dict) -> dict:
    den = 1
    for v in row.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = {k: int(v * den) for k, v in row.items()}
    g = 0
    for v in ints.values():
        g = math.gcd(g, v)
    if g > 1:
        ints = {k: v // g for k, v in ints.items()}
    return ints


def rank(rows) -> int:
    """Rank of sparse rational rows (dicts or Elements), by fraction-free elimination.

    Each row is scaled to a primitive integer vector; eliminating with
    ``r <- a*r - b*p`` and dividing by the content keeps entries integral.
    """
    pivots: dict = {}  # column -> integer row whose smallest column is that column
    keyfn = repr
    for row in rows:
        terms = row.terms if isinstance(row, Element) else row
        r = _integer_row({k: Fraction(v) for k, v in terms.items() if v})
        while r:
            col = min(r, key=keyfn)
            p = pivots.get(col)
            if p is None:
                pivots[col] = r
                break
            a, b = p[col], r[col]
            g = math.gcd(a, b)
            a, b = a // g, b // g
            new = {}
            for k in set(r) | set(p):
                v = a * r.get(k, 0) - b * p.get(k, 0)
                if v:
                    new[k] = v
            g = 0
            for v in new.values():
                g = math.gcd(g, v)
            r = {k: v // g for k, v in new.items()} if new else {}
    return len(pivots)
