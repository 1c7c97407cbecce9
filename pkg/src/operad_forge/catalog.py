"""Preset presentations, the almost-composite constructors and cached completion."""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from dataclasses import dataclass
from pathlib import Path

from . import trees
from .expressions import (
    BRACKET,
    INFIX,
    Expression,
    Presentation,
    _print_tree,
    parse_expression,
    shuffle_presentation,
)
from .orders import OrderSpec, PathLex, WeightedPathLex, XYAugmented
from .rewriting import DEFAULT_STEP_LIMIT, RewriteSystem, complete
from .trees import ANTISYMMETRIC, NONE, SYMMETRIC, Generator

PRODUCT = Generator(INFIX, 2, SYMMETRIC)
BRACKET_GEN = Generator(BRACKET, 2, ANTISYMMETRIC)
PRE_LIE = Generator("dot", 2, NONE)
ASS_PRODUCT = Generator("m", 2, NONE)

ASSOCIATIVITY = "(a1 o a2) o a3 - a1 o (a2 o a3)"
JACOBI = "[[a1, a2], a3] + [[a2, a3], a1] + [[a3, a1], a2]"
LEIBNIZ = "[a1, a2 o a3] - [a1, a2] o a3 - a2 o [a1, a3]"
ASS = "m(m(a1, a2), a3) - m(a1, m(a2, a3))"
PRE_LIE_RELATION = "dot(dot(a1, a2), a3) - dot(a1, dot(a2, a3)) - dot(dot(a1, a3), a2) + dot(a1, dot(a3, a2))"
PLC_MIXED = "dot(a1 o a2, a3) - dot(a1, a3) o a2 - a1 o dot(a2, a3)"

# the right-hand side of the cubic compatibility relation, with its left-hand
# side [a1 o a2, a3 o a4]
HM_LHS = "[a1 o a2, a3 o a4]"
HM_RHS = (
    "[a1 o a2, a3] o a4 + [a1 o a2, a4] o a3 + a1 o [a2, a3 o a4] + a2 o [a1, a3 o a4]"
    " - (a1 o a3) o [a2, a4] - (a2 o a3) o [a1, a4] - (a2 o a4) o [a1, a3] - (a1 o a4) o [a2, a3]"
)


def _relation(lhs: str, rhs: str, gens) -> str:
    return str(parse_expression(lhs, gens) - parse_expression(rhs, gens))


HERTLING_MANIN = _relation(HM_LHS, HM_RHS, (PRODUCT, BRACKET_GEN))


def _com():
    return Presentation("com", (PRODUCT,), (ASSOCIATIVITY,), "commutative associative product o")


def _lie():
    return Presentation("lie", (BRACKET_GEN,), (JACOBI,), "Lie bracket b, written [x, y]")


def _ass():
    return Presentation("ass", (ASS_PRODUCT,), (ASS,), "associative product m")


def _poisson():
    return Presentation(
        "poisson", (PRODUCT, BRACKET_GEN), (ASSOCIATIVITY, JACOBI, LEIBNIZ), "Leibniz rule for the bracket"
    )


def _prelie():
    return Presentation("prelie", (PRE_LIE,), (PRE_LIE_RELATION,), "right-symmetric associator of dot")


def _fm():
    return Presentation(
        "fm", (PRODUCT, BRACKET_GEN), (ASSOCIATIVITY, JACOBI, HERTLING_MANIN),
        "associativity, Jacobi and the cubic compatibility relation",
    )


def _plc():
    return Presentation(
        "plc", (PRODUCT, PRE_LIE), (ASSOCIATIVITY, PRE_LIE_RELATION, PLC_MIXED),
        "commutative o, pre-Lie dot, dot(x o y, z) = dot(x, z) o y + x o dot(y, z)",
    )


def _almost_com_lie():
    return almost_composite(_com(), _lie())


_PRESETS = {
    "com": _com,
    "lie": _lie,
    "ass": _ass,
    "poisson": _poisson,
    "prelie": _prelie,
    "fm": _fm,
    "plc": _plc,
    "almost(com,lie)": _almost_com_lie,
}

PRESET_IDS = tuple(_PRESETS)


def preset(name: str) -> Presentation:
    key = name.replace(" ", "")
    try:
        return _PRESETS[key]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; known: {', '.join(PRESET_IDS)}") from None


# ---------------------------------------------------------------------------
# almost composite products


def _tagged(g: Generator, tag: str) -> Generator:
    return Generator(g.name, g.arity, g.symmetry, g.weight, tag)


def _filled_monomials(p: Presentation, q: Presentation) -> list:
    """Planar trees alpha(beta_1, ..., beta_k) with consecutive leaf labels."""
    out = []
    for alpha in q.generators:
        for betas in itertools.product(p.generators, repeat=alpha.arity):
            kids = []
            nxt = 1
            for b in betas:
                kids.append((b.name, *range(nxt, nxt + b.arity)))
                nxt += b.arity
            out.append((alpha.name, *kids))
    return out


def _check_disjoint(p: Presentation, q: Presentation):
    clash = {g.name for g in p.generators} & {g.name for g in q.generators}
    if clash:
        raise ValueError(f"generator names shared by {p.name!r} and {q.name!r}: {sorted(clash)}")


def almost_composite(p: Presentation, q: Presentation) -> Presentation:
    """P and Q together with every full substitution of P-generators into a Q-generator set to 0.

    P-generators are tagged X, Q-generators Y.
    """
    _check_disjoint(p, q)
    return with_rewriting_rhs(p, q, RhsMap({}))


@dataclass(frozen=True)
class RhsMap:
    """Images of the monomials alpha(beta_1, ..., beta_k), as expression texts.

    Keys are printed monomials such as ``"[a1 o a2, a3 o a4]"``; a missing key
    means the image is 0.
    """

    images: dict

    def __post_init__(self):
        object.__setattr__(self, "images", dict(self.images))

    def validated(self, p: Presentation, q: Presentation) -> dict:
        """Map printed monomial -> parsed image, after checking the invariants."""
        gens = {g.name: g for g in (*p.generators, *q.generators)}
        xs = {g.name for g in p.generators}
        allowed = {_print_tree(t): t for t in _filled_monomials(p, q)}
        out = {}
        for key, value in self.images.items():
            k = parse_expression(key, gens)
            if len(k.terms) != 1 or k.terms[0][0] != 1:
                raise ValueError(f"key {key!r} is not a single monomial")
            printed = _print_tree(k.terms[0][1])
            if printed not in allowed:
                raise ValueError(f"key {key!r} is not of the form alpha(beta_1, ..., beta_k)")
            v = value if isinstance(value, Expression) else parse_expression(value, gens)
            if v.terms and v.arity != k.arity:
                raise ValueError(f"image of {printed} has arity {v.arity}, expected {k.arity}")
            for _, t in v.terms:
                if isinstance(t, int) or t[0] not in xs:
                    raise ValueError(f"image term {_print_tree(t)} of {printed} is not rooted at a generator of X")
            out[printed] = v
        return out


def with_rewriting_rhs(p: Presentation, q: Presentation, f: RhsMap) -> Presentation:
    """P and Q with relations alpha(beta_1, ..., beta_k) = f(alpha(beta_1, ..., beta_k))."""
    _check_disjoint(p, q)
    images = f.validated(p, q)
    gens = (*(_tagged(g, "X") for g in p.generators), *(_tagged(g, "Y") for g in q.generators))
    rels = [str(e) for e in p.parsed_relations()] + [str(e) for e in q.parsed_relations()]
    for t in _filled_monomials(p, q):
        lhs = Expression(((1, t),), trees.arity(t))
        img = images.get(_print_tree(t))
        rels.append(str(lhs - img) if img is not None and img.terms else str(lhs))
    return Presentation(f"almost({p.name},{q.name})", gens, tuple(rels))


def filled_monomial_texts(p: Presentation, q: Presentation) -> list[str]:
    return [_print_tree(t) for t in _filled_monomials(p, q)]


def lie_filtration_weights(p) -> dict:
    """Weight 1 on the bracket, 0 on everything else, over shuffle generator names.

    ``p`` is a Presentation or a ShuffleSignature.
    """
    sig = p.signature() if isinstance(p, Presentation) else p
    if not any(g.origin == BRACKET and g.symmetry == ANTISYMMETRIC for g in sig.generators):
        raise ValueError("no antisymmetric bracket generator 'b'")
    return {g.name: 1 if g.origin == BRACKET else 0 for g in sig.generators}


# ---------------------------------------------------------------------------
# orders and cached completion

ORDER_NAMES = ("pathlex", "weighted-pathlex", "xy-augmented")


def make_order(name: str, p: Presentation, precedence=None) -> OrderSpec:
    sig = p.signature()
    prec = tuple(precedence) if precedence is not None else sig.names
    if sorted(prec) != sorted(sig.names):
        raise ValueError(f"precedence {prec} does not list the generators {sig.names}")
    if name == "pathlex":
        return PathLex(prec)
    if name == "weighted-pathlex":
        try:
            weights = lie_filtration_weights(sig)
        except ValueError:
            weights = {n: 0 for n in sig.names}
        return WeightedPathLex(prec, tuple(sorted(weights.items())))
    if name == "xy-augmented":
        xs = {g.name for g in sig.generators if g.tag == "X"}
        ys = {g.name for g in sig.generators if g.tag == "Y"}
        if not xs and not ys:
            ys = {g.name for g in sig.generators if g.origin == BRACKET}
            xs = set(sig.names) - ys
        if not xs or not ys:
            raise ValueError("xy-augmented order needs nonempty generator classes X and Y")
        return XYAugmented(frozenset(xs), frozenset(ys), PathLex(prec))
    raise ValueError(f"unknown order {name!r}; known: {', '.join(ORDER_NAMES)}")


def truncate(system: RewriteSystem, n: int) -> RewriteSystem:
    """The rules of arity <= n.  Completion is arity-graded, so this is the completion to n."""
    if n > system.truncation_arity:
        raise ValueError("cannot extend a truncated system")
    return RewriteSystem(
        system.signature, system.order, [r for r in system.rules if r.arity <= n], n, system.step_limit
    )


_MEMORY: dict = {}


def _cache_key(p: Presentation, order: OrderSpec) -> str:
    blob = json.dumps({"presentation": p.to_json(), "order": order.describe()}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def completed(p: Presentation, max_arity: int, order: OrderSpec | None = None, threads: int = 1,
              step_limit: int = DEFAULT_STEP_LIMIT) -> RewriteSystem:
    """Completion of ``p`` to ``max_arity``, memoized in process.

    With ``OPERAD_FORGE_CACHE`` set to a directory, completed systems are also
    stored there as JSON dumps.
    """
    order = order or PathLex(p.signature().names)
    key = _cache_key(p, order)
    hit = _MEMORY.get(key)
    if hit is None:
        hit = _load_disk(key, max_arity, step_limit)
    if hit is not None and hit.truncation_arity >= max_arity:
        _MEMORY[key] = hit
        return truncate(hit, max_arity) if hit.truncation_arity > max_arity else hit
    system, _ = complete(shuffle_presentation(p, order), order, max_arity, threads, step_limit)
    _MEMORY[key] = system
    _store_disk(key, system)
    return system


def _cache_dir() -> Path | None:
    d = os.environ.get("OPERAD_FORGE_CACHE")
    return Path(d) if d else None


def _load_disk(key, max_arity, step_limit):
    d = _cache_dir()
    if d is None:
        return None
    best = None
    for f in d.glob(f"{key}-*.json"):
        n = int(f.stem.rsplit("-", 1)[1])
        if n >= max_arity and (best is None or n < best[0]):
            best = (n, f)
    if best is None:
        return None
    return RewriteSystem.loads(best[1].read_text(), step_limit)


def _store_disk(key, system):
    d = _cache_dir()
    if d is None:
        return
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"{key}-{system.truncation_arity}.json"
    tmp = path.with_suffix(".tmp")
    tmp.write_text(system.dumps())
    tmp.replace(path)


def clear_cache():
    _MEMORY.clear()


def dims_of(p: Presentation, max_arity: int, order: OrderSpec | None = None, threads: int = 1) -> list[int]:
    return completed(p, max_arity, order, threads).dims(max_arity)


def is_almost_distributive(p: Presentation, q: Presentation, f: RhsMap, n: int) -> bool:
    """Whether deforming by ``f`` keeps every dimension up to arity ``n``."""
    return dims_of(with_rewriting_rhs(p, q, f), n) == dims_of(almost_composite(p, q), n)
