"""Rewriting systems on shuffle operads: normal forms, critical pairs, completion."""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import trees
from .algebra import Element, apply_permutation, linear_combination, replace_occurrence
from .expressions import ShufflePresentation
from .linalg import echelon_reduce, rank
from .orders import OrderSpec, order_from_description
from .trees import Occurrence, ShuffleGenerator, ShuffleSignature, Tree

DEFAULT_STEP_LIMIT = 10**6


class StepLimitExceeded(RuntimeError):
    """Raised when rewriting does not terminate within the step limit."""


@dataclass(frozen=True)
class RewriteRule:
    lhs: Tree
    rhs: Element
    provenance: tuple = ("input",)

    @property
    def element(self) -> Element:
        return Element.monomial(self.lhs) - self.rhs

    @property
    def arity(self) -> int:
        return trees.arity(self.lhs)


@dataclass(frozen=True)
class ReductionStep:
    coefficient: Fraction
    rule: int
    host: Tree
    occurrence: Occurrence


class RewriteSystem:
    """An ordered set of rules ``lhs -> rhs``, valid up to ``truncation_arity``.

    Rules are kept sorted by (arity, order of the left-hand side).  The object
    is immutable apart from internal memo tables.
    """

    def __init__(self, signature: ShuffleSignature, order: OrderSpec, rules, truncation_arity: int,
                 step_limit: int = DEFAULT_STEP_LIMIT):
        self.signature = signature
        self.order = order
        self.rules = tuple(sorted(rules, key=lambda r: (r.arity, order.key(r.lhs))))
        self.truncation_arity = truncation_arity
        self.step_limit = step_limit
        self._by_root: dict = {}
        for i, r in enumerate(self.rules):
            self._by_root.setdefault(r.lhs[0], []).append(i)
        self._lhs = {r.lhs: i for i, r in enumerate(self.rules)}
        self._reducer: dict = {}
        self._nf: dict = {}

    def __repr__(self):
        return f"RewriteSystem({len(self.rules)} rules, truncation {self.truncation_arity})"

    # -- divisibility ------------------------------------------------------

    def reducers(self, t: Tree):
        """All ``(rule_index, occurrence)`` pairs, outermost vertex first."""
        out = []
        for path, v in trees.vertices(t):
            for i in self._by_root.get(v[0], ()):
                occ = trees.match_at(t, self.rules[i].lhs, path)
                if occ is not None:
                    out.append((i, occ))
        return out

    def find_reducer(self, t: Tree):
        if t in self._reducer:
            return self._reducer[t]
        found = None
        if not isinstance(t, int):
            i = self._lhs.get(t)
            if i is not None:
                found = (i, trees.match_at(t, t, ()))
            else:
                for path, v in trees.vertices(t):
                    for i in self._by_root.get(v[0], ()):
                        occ = trees.match_at(t, self.rules[i].lhs, path)
                        if occ is not None:
                            found = (i, occ)
                            break
                    if found:
                        break
        self._reducer[t] = found
        return found

    def is_normal(self, t: Tree) -> bool:
        return self.find_reducer(t) is None

    # -- reduction -----------------------------------------------------------

    def _rewrite(self, t: Tree, red) -> Element:
        i, occ = red
        return replace_occurrence(t, occ, self.rules[i].rhs)

    def _normal_form_of(self, t: Tree, budget: list) -> Element:
        memo = self._nf
        if t in memo:
            return memo[t]
        stack = [[t, None]]
        on_stack = {t}
        while stack:
            top = stack[-1]
            u = top[0]
            if top[1] is None:
                red = self.find_reducer(u)
                if red is None:
                    memo[u] = Element.monomial(u)
                    stack.pop()
                    on_stack.discard(u)
                    continue
                budget[0] += 1
                if budget[0] > self.step_limit:
                    raise StepLimitExceeded(f"more than {self.step_limit} rewriting steps")
                top[1] = self._rewrite(u, red)
            pending = None
            for v in top[1].terms:
                if v not in memo:
                    if v in on_stack:
                        raise StepLimitExceeded(f"rewriting loops through {trees.to_text(v)}")
                    pending = v
                    break
            if pending is not None:
                stack.append([pending, None])
                on_stack.add(pending)
                continue
            memo[u] = linear_combination(((c, memo[v]) for v, c in top[1].terms.items()), trees.arity(u))
            stack.pop()
            on_stack.discard(u)
        return memo[t]

    def reduce(self, e: Element, strategy: str | None = None, certificate: bool = False):
        """Normal form of ``e``.

        ``strategy=None`` uses memoized monomial normal forms.  ``"outermost"``
        and ``"innermost"`` rewrite the largest reducible monomial at its
        outermost (resp. innermost) redex step by step.  With ``certificate``
        the applied steps are returned as well.
        """
        if e.arity is not None and e.arity > self.truncation_arity:
            raise ValueError(f"arity {e.arity} exceeds the truncation arity {self.truncation_arity}")
        return self._reduce(e, strategy, certificate)

    def _reduce(self, e: Element, strategy=None, certificate=False):
        if strategy is None and not certificate:
            budget = [0]
            return linear_combination(((c, self._normal_form_of(t, budget)) for t, c in e.terms.items()), e.arity)
        strategy = strategy or "outermost"
        if strategy not in ("outermost", "innermost"):
            raise ValueError(f"unknown strategy {strategy!r}")
        steps = []
        cur = e
        n = 0
        while True:
            reducible = [t for t in cur.terms if self.find_reducer(t) is not None]
            if not reducible:
                break
            t = max(reducible, key=self.order.key)
            reds = self.reducers(t)
            i, occ = reds[0] if strategy == "outermost" else max(reds, key=lambda r: (len(r[1].root), r[1].root))
            c = cur.terms[t]
            step_elem = replace_occurrence(t, occ, self.rules[i].element)
            cur = cur - step_elem * c
            steps.append(ReductionStep(c, i, t, occ))
            n += 1
            if n > self.step_limit:
                raise StepLimitExceeded(f"more than {self.step_limit} rewriting steps")
        return (cur, steps) if certificate else cur

    def replay(self, steps) -> Element:
        """The ideal element sum c * host[rule at occurrence] witnessed by ``steps``."""
        return linear_combination(
            (s.coefficient, replace_occurrence(s.host, s.occurrence, self.rules[s.rule].element)) for s in steps
        )

    def ideal_membership(self, e: Element) -> bool:
        return not self.reduce(e)

    # -- counting ----------------------------------------------------------

    def normal_monomials(self, n: int) -> list[Tree]:
        if n > self.truncation_arity:
            raise ValueError(f"arity {n} exceeds the truncation arity {self.truncation_arity}")
        return [t for t in trees.enumerate_monomials(self.signature, n) if self.is_normal(t)]

    def dims(self, up_to: int) -> list[int]:
        return [len(self.normal_monomials(n)) for n in range(1, up_to + 1)]

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "order": self.order.describe(),
            "truncation_arity": self.truncation_arity,
            "signature": [
                {"name": g.name, "arity": g.arity, "symmetry": g.symmetry, "origin": g.origin,
                 "partner": g.partner, "weight": g.weight, "tag": g.tag}
                for g in self.signature.generators
            ],
            "rules": [
                {"lhs": trees.to_json(r.lhs), "rhs": r.rhs.to_json(self.order)} for r in self.rules
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, d: dict, step_limit: int = DEFAULT_STEP_LIMIT) -> RewriteSystem:
        sig = ShuffleSignature(tuple(
            ShuffleGenerator(g["name"], g["arity"], g["symmetry"], g["origin"], g["partner"], g["weight"], g["tag"])
            for g in d["signature"]
        ))
        order = order_from_description(d["order"])
        rules = []
        for r in d["rules"]:
            lhs = trees.from_json(r["lhs"])
            rules.append(RewriteRule(lhs, Element.from_json(r["rhs"], trees.arity(lhs)), ("loaded",)))
        return cls(sig, order, rules, d["truncation_arity"], step_limit)

    @classmethod
    def loads(cls, text: str, step_limit: int = DEFAULT_STEP_LIMIT) -> RewriteSystem:
        return cls.from_json(json.loads(text), step_limit)


def reduce(e: Element, sys: RewriteSystem, **kw):
    return sys.reduce(e, **kw)


def normal_monomials(sys: RewriteSystem, n: int):
    return sys.normal_monomials(n)


def dims(sys: RewriteSystem, up_to: int) -> list[int]:
    return sys.dims(up_to)


def ideal_membership(e: Element, sys: RewriteSystem) -> bool:
    return sys.ideal_membership(e)


# ---------------------------------------------------------------------------
# critical pairs


@dataclass(frozen=True)
class Overlap:
    """A small common multiple ``tree`` of two left-hand sides.

    ``first`` and ``second`` are the rules, ``occ1`` (at the root of ``tree``)
    and ``occ2`` their occurrences; they share at least one vertex and cover
    every vertex of ``tree``.
    """

    tree: Tree
    first: RewriteRule
    second: RewriteRule
    occ1: Occurrence
    occ2: Occurrence

    @property
    def arity(self) -> int:
        return trees.arity(self.tree)


def _top_occurrence(t: Tree, pattern: Tree, leaf_paths) -> Occurrence:
    vmap = tuple((p, p) for p, _ in trees.vertices(pattern))
    return Occurrence(t, pattern, (), vmap, tuple(leaf_paths))


def _overlaps_on_top(sig, rule, n, candidates, skip_same_root):
    """Overlaps of arity ``n`` with ``rule`` on top and a rule from ``candidates``.

    ``candidates`` maps a root generator name to a list of ``(key, rule)``;
    ``skip_same_root(key)`` decides whether a second occurrence at the root is
    skipped (it is then produced from the other side, or is trivial).
    """
    p = rule.lhs
    top_vertices = [path for path, _ in trees.vertices(p)]
    top_set = set(top_vertices)
    out = []
    for t, leaf_paths in trees.rooted_extensions(sig, p, n):
        all_vertices = set(path for path, _ in trees.vertices(t))
        rest = all_vertices - top_set
        occ1 = None
        for path in top_vertices:
            label = trees.subtree(t, path)[0]
            for key, other in candidates.get(label, ()):
                if path == () and skip_same_root(key):
                    continue
                occ2 = trees.match_at(t, other.lhs, path)
                if occ2 is None or not rest <= occ2.host_vertices:
                    continue
                if occ1 is None:
                    occ1 = _top_occurrence(t, p, leaf_paths)
                out.append((key, Overlap(t, rule, other, occ1, occ2)))
    return out


def _max_overlap_arity(r1: RewriteRule, r2: RewriteRule) -> int:
    return r1.arity + r2.arity - 1


def critical_pairs(r1: RewriteRule, r2: RewriteRule, sig: ShuffleSignature, max_arity: int) -> list[Overlap]:
    """All overlaps of the left-hand sides of ``r1`` and ``r2`` up to ``max_arity``."""
    same = r1 == r2
    out = []
    top = min(max_arity, _max_overlap_arity(r1, r2))
    for n in range(max(r1.arity, r2.arity), top + 1):
        for _, ov in _overlaps_on_top(sig, r1, n, {r2.lhs[0]: [(1, r2)]}, lambda k: same):
            out.append(ov)
        if not same:
            for _, ov in _overlaps_on_top(sig, r2, n, {r1.lhs[0]: [(0, r1)]}, lambda k: True):
                out.append(ov)
    return out


def s_polynomial(ov: Overlap) -> Element:
    """``tree[first -> rhs] - tree[second -> rhs]`` up to sign: the leading ``tree`` cancels."""
    return replace_occurrence(ov.tree, ov.occ2, ov.second.rhs) - replace_occurrence(ov.tree, ov.occ1, ov.first.rhs)


def _all_overlaps(sys: RewriteSystem, n: int):
    """Every overlap of arity ``n`` among the rules of ``sys``, deterministic order."""
    index: dict = {}
    for j, r in enumerate(sys.rules):
        if r.arity < n:
            index.setdefault(r.lhs[0], []).append((j, r))
    out = []
    for i, r in enumerate(sys.rules):
        if r.arity >= n:
            continue
        for j, ov in _overlaps_on_top(sys.signature, r, n, index, lambda k, i=i: k <= i):
            out.append(((i, j), ov))
    return out


# ---------------------------------------------------------------------------
# completion


@dataclass
class CompletionReport:
    pairs_examined: int = 0
    rules_added: int = 0
    max_arity_reached: int = 0
    seconds_per_arity: dict = field(default_factory=dict)
    step_limit_hits: int = 0
    rules_per_arity: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "pairs_examined": self.pairs_examined,
            "rules_added": self.rules_added,
            "max_arity_reached": self.max_arity_reached,
            "rules_per_arity": {str(k): v for k, v in self.rules_per_arity.items()},
            "step_limit_hits": self.step_limit_hits,
        }


def complete(sp: ShufflePresentation, order: OrderSpec, max_arity: int, threads: int = 1,
             step_limit: int = DEFAULT_STEP_LIMIT) -> tuple[RewriteSystem, CompletionReport]:
    """Arity-truncated completion.

    Arity by arity: the S-polynomials of all overlaps of that arity, together
    with the input relations of that arity, are reduced by the rules of lower
    arity (an immutable snapshot, so this part may run on several threads),
    then inter-reduced by exact elimination; the pivots become new rules.
    With an admissible order this is Buchberger's algorithm; with the
    XY-augmented order it is Knuth-Bendix completion guarded by ``step_limit``.
    """
    if max_arity < 1:
        raise ValueError("max_arity must be >= 1")
    report = CompletionReport()
    rules: list[RewriteRule] = []
    sig = sp.signature
    for n in range(1, max_arity + 1):
        t0 = time.perf_counter()
        snapshot = RewriteSystem(sig, order, rules, n - 1, step_limit)
        cands: list[tuple[Element, tuple]] = []
        for k, r in enumerate(sp.of_arity(n)):
            cands.append((r, ("input", k)))
        overlaps = _all_overlaps(snapshot, n)
        report.pairs_examined += len(overlaps)
        for (i, j), ov in overlaps:
            cands.append((s_polynomial(ov), ("critical-pair", i, j)))

        def work(item, snapshot=snapshot):
            return snapshot._reduce(item[0])

        try:
            if threads > 1 and len(cands) > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    reduced = list(pool.map(work, cands))
            else:
                reduced = [work(c) for c in cands]
        except StepLimitExceeded:
            report.step_limit_hits += 1
            raise
        rows = [(e, src) for e, (_, src) in zip(reduced, cands) if e]
        new = []
        for row, idx in echelon_reduce([e for e, _ in rows], order):
            lead = row.leading_monomial(order)
            rhs = Element.monomial(lead) - row
            new.append(RewriteRule(lead, rhs, rows[idx][1]))
        rules.extend(new)
        report.rules_added += len(new)
        report.rules_per_arity[n] = len(new)
        report.max_arity_reached = n
        report.seconds_per_arity[n] = time.perf_counter() - t0
    return RewriteSystem(sig, order, rules, max_arity, step_limit), report


def unresolved_pairs(sys: RewriteSystem, up_to: int | None = None) -> list:
    """Overlaps whose S-polynomial does not reduce to zero (empty when complete)."""
    up_to = up_to or sys.truncation_arity
    bad = []
    for n in range(2, up_to + 1):
        for key, ov in _all_overlaps(sys, n):
            if sys.reduce(s_polynomial(ov)):
                bad.append((key, ov))
    return bad


# ---------------------------------------------------------------------------
# suboperads


def _orbit_basis(g: Element, sig: ShuffleSignature) -> list[Element]:
    images = [apply_permutation(g, s, sig) for s in itertools.permutations(range(1, g.arity + 1))]
    basis: list[Element] = []
    for e in images:
        if rank(basis + [e]) > len(basis):
            basis.append(e)
    return basis


def _evaluate(t: Tree, table: dict) -> Element:
    """Substitute generator elements for the vertices of an abstract tree."""
    if isinstance(t, int):
        return Element.monomial(t)
    gen = table[t[0]]
    kids = [_evaluate(c, table) for c in t[1:]]
    out: dict = {}
    for top, c in gen.terms.items():
        for combo in itertools.product(*(k.terms.items() for k in kids)):
            coeff = c
            plug = {}
            for j, (kt, kc) in enumerate(combo, start=1):
                coeff *= kc
                plug[j] = kt
            tree = trees._plug(top, plug)
            out[tree] = out.get(tree, 0) + coeff
    return Element(out, trees.arity(t))


def suboperad_dims(ambient: RewriteSystem, gens, up_to: int) -> list[int]:
    """Dimensions of the suboperad generated by ``gens`` inside ``ambient``.

    Each generator is replaced by a basis of its symmetric-group orbit; every
    shuffle composite of those is reduced to normal form and the rank of the
    span is computed per arity.
    """
    if up_to > ambient.truncation_arity:
        raise ValueError("up_to exceeds the truncation arity")
    abstract = []
    table = {}
    for g in gens:
        if not g or g.arity < 2:
            raise ValueError("generators must be nonzero of arity >= 2")
        for e in _orbit_basis(g, ambient.signature):
            name = f"h{len(abstract)}"
            abstract.append(ShuffleGenerator(name, e.arity, "symmetric", name))
            table[name] = e
    asig = ShuffleSignature(tuple(abstract))
    out = []
    for n in range(1, up_to + 1):
        rows = [ambient.reduce(_evaluate(t, table)) for t in trees.enumerate_monomials(asig, n)]
        out.append(rank([r for r in rows if r]))
    return out
