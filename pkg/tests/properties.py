"""Seeded randomized property runs shared by the unit tests and the acceptance gate.

Each function returns ``(cases, violations)``.
"""

from __future__ import annotations

import random
from fractions import Fraction

from oracles import exhaustive_shuffle_monomials, free_dimension, random_planar_tree

from operad_forge import trees
from operad_forge.algebra import Element, linear_combination
from operad_forge.catalog import HM_LHS, RhsMap, completed, dims_of, make_order, preset, with_rewriting_rhs
from operad_forge.expressions import _print_tree, shuffle_presentation
from operad_forge.orders import PathLex, WeightedPathLex
from operad_forge.rewriting import complete

FM = preset("fm")
FM_SIG = FM.signature()
PL_SIG = preset("prelie").signature()
PLC_SIG = preset("plc").signature()


def _random_monomial(rng, sig, n):
    return rng.choice(trees.enumerate_monomials(sig, n))


def _random_block(rng, outer_arity, leaf_index, inner_arity):
    """A block for ``compose`` keeping leaf ``leaf_index``'s relative position."""
    n = outer_arity + inner_arity - 1
    while True:
        block = tuple(sorted(rng.sample(range(1, n + 1), inner_arity)))
        rest = [x for x in range(1, n + 1) if x not in block]
        outer = rest[: leaf_index - 1] + [block[0]] + rest[leaf_index - 1:]
        if sorted(outer) == outer:
            return block


def admissibility(order_factory, sig, cases=1000, seed=1):
    """a < b implies C[a] < C[b] for shuffle compositions on either side."""
    rng = random.Random(seed)
    order = order_factory(sig)
    bad = []
    for _ in range(cases):
        k = rng.randint(2, 3)
        a, b = _random_monomial(rng, sig, k), _random_monomial(rng, sig, k)
        while a == b:
            b = _random_monomial(rng, sig, k)
        m = rng.randint(2, 3)
        c = _random_monomial(rng, sig, m)
        if rng.random() < 0.5:
            i = rng.randint(1, m)
            block = _random_block(rng, m, i, k)
            ca, cb = trees.compose(c, i, a, block), trees.compose(c, i, b, block)
        else:
            i = rng.randint(1, k)
            block = _random_block(rng, k, i, m)
            ca, cb = trees.compose(a, i, c, block), trees.compose(b, i, c, block)
        if order.compare(a, b) != order.compare(ca, cb):
            bad.append((a, b, c, ca, cb))
    return cases, bad


def pathlex(sig):
    return PathLex(sig.names)


def weighted(sig):
    return WeightedPathLex(sig.names, tuple((n, 1 if n == "b" else 0) for n in sig.names))


def straighten_idempotence(cases=1000, seed=2):
    rng = random.Random(seed)
    bad = []
    names = ["o", "b"]
    for _ in range(cases):
        n = rng.randint(1, 6)
        labels = rng.sample(range(1, n + 1), n)
        t = random_planar_tree(rng, names, labels)
        s, m = trees.straighten(t, FM_SIG)
        s2, m2 = trees.straighten(m, FM_SIG)
        if not trees.is_shuffle(m) or (s2, m2) != (1, m):
            bad.append(t)
    return cases, bad


def permutation_action(cases=1000, seed=3):
    """Acting by sigma then tau equals acting by tau o sigma, with multiplied signs."""
    rng = random.Random(seed)
    bad = []
    for _ in range(cases):
        sig = rng.choice([FM_SIG, PL_SIG, PLC_SIG])
        n = rng.randint(2, 5)
        t = _random_monomial(rng, sig, n)
        sigma = rng.sample(range(1, n + 1), n)
        tau = rng.sample(range(1, n + 1), n)
        s1, t1 = trees.apply_permutation(t, sigma, sig)
        s2, t2 = trees.apply_permutation(t1, tau, sig)
        both = [tau[sigma[i] - 1] for i in range(n)]
        s3, t3 = trees.apply_permutation(t, both, sig)
        if (s1 * s2, t2) != (s3, t3):
            bad.append((t, sigma, tau))
    return cases, bad


def _random_element(rng, sig, n, size):
    monos = trees.enumerate_monomials(sig, n)
    return Element({rng.choice(monos): Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(size)}, n)


def reduction_properties(cases=1000, seed=4):
    """Idempotence, linearity, strategy independence and certificate replay."""
    rng = random.Random(seed)
    systems = [completed(preset(name), 4) for name in ("fm", "prelie", "plc", "poisson")]
    bad = []
    for _ in range(cases):
        sys_ = rng.choice(systems)
        n = rng.randint(2, 4)
        e1 = _random_element(rng, sys_.signature, n, rng.randint(1, 4))
        e2 = _random_element(rng, sys_.signature, n, rng.randint(1, 4))
        a, b = Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3), 2)
        r1 = sys_.reduce(e1)
        ok = sys_.reduce(r1) == r1
        ok &= sys_.reduce(e1 * a + e2 * b) == linear_combination([(a, r1), (b, sys_.reduce(e2))], n)
        out_nf, steps = sys_.reduce(e1, strategy="outermost", certificate=True)
        inn_nf = sys_.reduce(e1, strategy="innermost")
        ok &= out_nf == r1 and inn_nf == r1
        ok &= e1 - r1 == sys_.replay(steps)
        ok &= all(sys_.is_normal(t) for t in r1.terms)
        if not ok:
            bad.append((e1, e2))
    return cases, bad


def occurrence_round_trips(cases=1000, seed=5):
    rng = random.Random(seed)
    fm = completed(FM, 4)
    patterns = [r.lhs for r in fm.rules]
    bad = []
    found = 0
    while found < cases:
        n = rng.randint(3, 5)
        host = _random_monomial(rng, FM_SIG, n)
        p = rng.choice([q for q in patterns if trees.arity(q) <= n])
        for occ in trees.find_occurrences(host, p):
            found += 1
            if trees.restrict(occ) != p or trees.substitute(host, occ, p) != host:
                bad.append((host, p, occ.root))
        # also every subtree is an occurrence of its standardization at its own root
        path = rng.choice([path for path, _ in trees.vertices(host)])
        sub = trees.standardize(trees.subtree(host, path))
        occ = trees.match_at(host, sub, path)
        found += 1
        if occ is None or trees.restrict(occ) != sub or trees.substitute(host, occ, sub) != host:
            bad.append((host, sub, path))
    return found, bad


def enumeration_counts(up_to=5):
    """Exhaustive: engine enumeration against brute-force straightening and the closed form."""
    bad = []
    cases = 0
    for name in ("fm", "prelie", "com", "plc", "ass"):
        p = preset(name)
        sig = p.signature()
        gens = [(g.name, g.symmetry) for g in p.generators]
        for n in range(1, up_to + 1):
            cases += 1
            got = trees.enumerate_monomials(sig, n)
            if len(set(got)) != len(got) or set(got) != exhaustive_shuffle_monomials(sig, n):
                bad.append((name, n, "set"))
            if len(got) != free_dimension(gens, n):
                bad.append((name, n, len(got)))
    return cases, bad


X_ROOTED = [t for t in trees.enumerate_monomials(FM_SIG, 4) if t[0] == "o" and "b" in trees.generators_used(t)]


def random_rhs(rng) -> RhsMap:
    k = rng.randint(1, 3)
    parts = []
    for t in rng.sample(X_ROOTED, k):
        c = rng.choice([-2, -1, 1, 2, 3])
        parts.append(f"{c}*{_print_tree(t)}")
    return RhsMap({HM_LHS: " + ".join(parts).replace("+ -", "- ")})


def monotonicity(cases=1000, seed=6, up_to=4):
    """Deforming the almost composite never increases a dimension."""
    rng = random.Random(seed)
    com, lie = preset("com"), preset("lie")
    base = dims_of(with_rewriting_rhs(com, lie, RhsMap({})), up_to)
    bad = []
    for _ in range(cases):
        p = with_rewriting_rhs(com, lie, random_rhs(rng))
        order = make_order("pathlex", p)
        sys_, _ = complete(shuffle_presentation(p, order), order, up_to)
        d = sys_.dims(up_to)
        if any(x > y for x, y in zip(d, base)):
            bad.append((p.relations[-1], d))
    return cases, bad


def totality(up_to=4):
    """Distinct monomials get distinct keys (exhaustive)."""
    bad = []
    cases = 0
    for sig in (FM_SIG, PL_SIG, PLC_SIG):
        for order in (pathlex(sig), weighted(sig)):
            for n in range(1, up_to + 1):
                ms = trees.enumerate_monomials(sig, n)
                cases += len(ms)
                if len({order.key(m) for m in ms}) != len(ms):
                    bad.append((sig.names, n))
    return cases, bad


ALL = {
    "PathLex admissibility": lambda: admissibility(pathlex, FM_SIG),
    "PathLex admissibility (pre-Lie)": lambda: admissibility(pathlex, PL_SIG, seed=11),
    "WeightedPathLex admissibility": lambda: admissibility(weighted, FM_SIG, seed=12),
    "order totality": totality,
    "straighten idempotence": straighten_idempotence,
    "permutation action": permutation_action,
    "reduction properties": reduction_properties,
    "occurrence round trips": occurrence_round_trips,
    "enumeration counts": enumeration_counts,
    "dimension monotonicity": monotonicity,
}

