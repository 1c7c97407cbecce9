"""Shuffle tree monomials.

A tree is stored as a nested tuple: a leaf is its integer label, an internal
vertex is ``(generator_name, child_1, ..., child_k)``.  Tuples are hashable and
compare structurally, so monomials can be used directly as dictionary keys.

A *shuffle* tree additionally satisfies: at every internal vertex the minimal
leaf labels of the children increase from left to right.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Union

Tree = Union[int, tuple]

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"
NONE = "none"
SYMMETRIES = (SYMMETRIC, ANTISYMMETRIC, NONE)

IDENTITY: Tree = 1


@dataclass(frozen=True)
class Generator:
    """A generator of a symmetric operad."""

    name: str
    arity: int = 2
    symmetry: str = NONE
    weight: int = 0
    tag: str | None = None

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"generator {self.name!r}: arity must be >= 1")
        if self.symmetry not in SYMMETRIES:
            raise ValueError(f"generator {self.name!r}: unknown symmetry {self.symmetry!r}")
        if self.symmetry == NONE and self.arity != 2:
            raise ValueError(f"generator {self.name!r}: only binary generators may lack symmetry")
        if self.tag not in (None, "X", "Y"):
            raise ValueError(f"generator {self.name!r}: class tag must be X, Y or None")


@dataclass(frozen=True)
class ShuffleGenerator:
    name: str
    arity: int
    symmetry: str
    origin: str
    partner: str | None = None
    weight: int = 0
    tag: str | None = None


def partner_name(name: str) -> str:
    return name + "'"


@dataclass(frozen=True)
class ShuffleSignature:
    """Shuffle-expanded generators, in precedence order.

    A generator without symmetry ``mu`` becomes the pair ``mu`` and ``mu'``
    where ``mu'(1,2)`` stands for ``mu(a2, a1)``.
    """

    generators: tuple[ShuffleGenerator, ...]
    _by_name: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        by_name = {}
        for g in self.generators:
            if g.name in by_name:
                raise ValueError(f"duplicate shuffle generator {g.name!r}")
            by_name[g.name] = g
        for g in self.generators:
            if g.partner is not None:
                p = by_name.get(g.partner)
                if p is None or p.partner != g.name or p.arity != g.arity:
                    raise ValueError(f"inconsistent partner link for {g.name!r}")
        object.__setattr__(self, "_by_name", by_name)

    @classmethod
    def from_generators(cls, gens) -> ShuffleSignature:
        out = []
        for g in gens:
            if g.symmetry == NONE:
                p = partner_name(g.name)
                out.append(ShuffleGenerator(g.name, g.arity, NONE, g.name, p, g.weight, g.tag))
                out.append(ShuffleGenerator(p, g.arity, NONE, g.name, g.name, g.weight, g.tag))
            else:
                out.append(ShuffleGenerator(g.name, g.arity, g.symmetry, g.name, None, g.weight, g.tag))
        return cls(tuple(out))

    def __getitem__(self, name: str) -> ShuffleGenerator:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._by_name

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def arity_of(self, name: str) -> int:
        return self[name].arity


# ---------------------------------------------------------------------------
# basic tree queries


@lru_cache(maxsize=None)
def min_leaf(t: Tree) -> int:
    if isinstance(t, int):
        return t
    return min(min_leaf(c) for c in t[1:])


@lru_cache(maxsize=None)
def leaves(t: Tree) -> tuple[int, ...]:
    """Leaf labels in planar (left to right) order."""
    if isinstance(t, int):
        return (t,)
    return tuple(itertools.chain.from_iterable(leaves(c) for c in t[1:]))


def arity(t: Tree) -> int:
    return len(leaves(t))


def is_leaf(t: Tree) -> bool:
    return isinstance(t, int)


def vertices(t: Tree, path: tuple = ()) -> Iterator[tuple[tuple, tuple]]:
    """Yield ``(path, subtree)`` for internal vertices in preorder."""
    if isinstance(t, int):
        return
    yield path, t
    for i, c in enumerate(t[1:]):
        yield from vertices(c, path + (i,))


def vertex_count(t: Tree) -> int:
    if isinstance(t, int):
        return 0
    return 1 + sum(vertex_count(c) for c in t[1:])


def generators_used(t: Tree) -> list[str]:
    return [v[0] for _, v in vertices(t)]


def subtree(t: Tree, path: tuple) -> Tree:
    for i in path:
        t = t[i + 1]
    return t


def replace_subtree(t: Tree, path: tuple, new: Tree) -> Tree:
    if not path:
        return new
    i = path[0]
    children = list(t[1:])
    children[i] = replace_subtree(children[i], path[1:], new)
    return (t[0], *children)


def relabel(t: Tree, mapping) -> Tree:
    """Replace each leaf label ``i`` by ``mapping[i]`` (no straightening)."""
    if isinstance(t, int):
        return mapping[t]
    return (t[0], *(relabel(c, mapping) for c in t[1:]))


def standardize(t: Tree) -> Tree:
    """Relabel leaves order-preservingly onto 1..n."""
    labels = sorted(leaves(t))
    return relabel(t, {x: i + 1 for i, x in enumerate(labels)})


@lru_cache(maxsize=None)
def is_shuffle(t: Tree) -> bool:
    if isinstance(t, int):
        return True
    mins = [min_leaf(c) for c in t[1:]]
    return all(a < b for a, b in zip(mins, mins[1:])) and all(is_shuffle(c) for c in t[1:])


def check_monomial(t: Tree, sig: ShuffleSignature) -> None:
    """Raise ``ValueError`` unless ``t`` is a shuffle tree monomial over ``sig``."""
    labs = leaves(t)
    if sorted(labs) != list(range(1, len(labs) + 1)):
        raise ValueError(f"leaves of {to_text(t)} are not 1..n")
    for _, v in vertices(t):
        g = sig[v[0]]
        if len(v) - 1 != g.arity:
            raise ValueError(f"vertex {v[0]!r} has {len(v) - 1} children, expected {g.arity}")
    if not is_shuffle(t):
        raise ValueError(f"{to_text(t)} violates the shuffle condition")


# ---------------------------------------------------------------------------
# straightening


def _perm_sign(order: list[int]) -> int:
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _straighten(t: Tree, sig: ShuffleSignature) -> tuple[int, Tree]:
    if isinstance(t, int):
        return 1, t
    g = sig[t[0]]
    if len(t) - 1 != g.arity:
        raise ValueError(f"vertex {t[0]!r} has {len(t) - 1} children, expected {g.arity}")
    sign = 1
    kids = []
    for c in t[1:]:
        s, c2 = _straighten(c, sig)
        sign *= s
        kids.append(c2)
    order = sorted(range(len(kids)), key=lambda i: min_leaf(kids[i]))
    name = g.name
    if order != list(range(len(kids))):
        if g.symmetry == ANTISYMMETRIC:
            sign *= _perm_sign(order)
        elif g.symmetry == NONE:
            name = g.partner
        kids = [kids[i] for i in order]
    return sign, (name, *kids)


def straighten(t: Tree, sig: ShuffleSignature) -> tuple[int, Tree]:
    """Bring a planar tree with distinct leaf labels into shuffle form.

    Returns ``(sign, monomial)``.  Leaf labels are kept as they are.
    """
    labs = leaves(t)
    if len(set(labs)) != len(labs):
        raise ValueError(f"repeated leaf label in {to_text(t)}")
    return _straighten(t, sig)


def apply_permutation(t: Tree, sigma, sig: ShuffleSignature) -> tuple[int, Tree]:
    """Relabel leaf ``i`` as ``sigma[i-1]`` and straighten."""
    n = arity(t)
    sigma = tuple(sigma)
    if len(sigma) != n or sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{n}")
    return _straighten(relabel(t, {i + 1: s for i, s in enumerate(sigma)}), sig)


# ---------------------------------------------------------------------------
# shuffle composition


def _graft(t: Tree, leaf: int, t2: Tree) -> Tree:
    if isinstance(t, int):
        return t2 if t == leaf else t
    return (t[0], *(_graft(c, leaf, t2) for c in t[1:]))


def compose(t: Tree, leaf_index: int, t2: Tree, block) -> Tree:
    """Graft ``t2`` onto leaf ``leaf_index`` of ``t``.

    ``block`` is the set of labels (of the result, 1..n1+n2-1) that the leaves
    of ``t2`` receive; both trees are relabeled order-preservingly.  It is a
    shuffle when the minimum of ``block`` keeps the relative position of
    ``leaf_index`` among the leaves of ``t``; otherwise ``ValueError``.
    """
    n1, n2 = arity(t), arity(t2)
    if not 1 <= leaf_index <= n1:
        raise ValueError(f"leaf index {leaf_index} out of range 1..{n1}")
    n = n1 + n2 - 1
    block = sorted(block)
    if len(block) != n2 or len(set(block)) != n2 or not all(1 <= b <= n for b in block):
        raise ValueError(f"{block} is not a {n2}-subset of 1..{n}")
    rest = [x for x in range(1, n + 1) if x not in block]
    outer = {}
    it = iter(rest)
    for lab in range(1, n1 + 1):
        if lab != leaf_index:
            outer[lab] = next(it)
    if (leaf_index > 1 and outer[leaf_index - 1] > block[0]) or (
        leaf_index < n1 and outer[leaf_index + 1] < block[0]
    ):
        raise ValueError("relabeling is not a shuffle for this composition")
    marker = -1
    outer[leaf_index] = marker
    inner = relabel(t2, dict(zip(range(1, n2 + 1), block)))
    return _graft(relabel(t, outer), marker, inner)


def enumerate_compositions(t: Tree, leaf_index: int, t2: Tree) -> list[Tree]:
    n1, n2 = arity(t), arity(t2)
    if not 1 <= leaf_index <= n1:
        raise ValueError(f"leaf index {leaf_index} out of range 1..{n1}")
    out = []
    for block in itertools.combinations(range(1, n1 + n2), n2):
        try:
            r = compose(t, leaf_index, t2, block)
        except ValueError:
            continue
        if r not in out:
            out.append(r)
    return out


# ---------------------------------------------------------------------------
# enumeration


def ordered_set_partitions(labels: tuple[int, ...], k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Set partitions of ``labels`` into ``k`` blocks, blocks sorted by minimum."""
    if k == 0:
        if not labels:
            yield ()
        return
    if len(labels) < k:
        return
    first, rest = labels[0], labels[1:]
    # the block containing the smallest label comes first
    for size in range(0, len(rest) - k + 2):
        for others in itertools.combinations(rest, size):
            block = (first, *others)
            remaining = tuple(x for x in rest if x not in others)
            for tail in ordered_set_partitions(remaining, k - 1):
                yield (block, *tail)


@lru_cache(maxsize=None)
def _monomials_on(sig: ShuffleSignature, labels: tuple[int, ...]) -> tuple[Tree, ...]:
    if len(labels) == 1:
        return (labels[0],)
    out = []
    for g in sig.generators:
        if g.arity == 1:
            raise ValueError("enumeration with unary generators is infinite")
        for blocks in ordered_set_partitions(labels, g.arity):
            for kids in itertools.product(*(_monomials_on(sig, b) for b in blocks)):
                out.append((g.name, *kids))
    return tuple(out)


def monomials_on(sig: ShuffleSignature, labels) -> tuple[Tree, ...]:
    return _monomials_on(sig, tuple(sorted(labels)))


def enumerate_monomials(sig: ShuffleSignature, n: int) -> list[Tree]:
    """All shuffle tree monomials of arity ``n`` over ``sig``."""
    if n < 1:
        raise ValueError("arity must be >= 1")
    return list(_monomials_on(sig, tuple(range(1, n + 1))))


def rooted_extensions(sig: ShuffleSignature, pattern: Tree, n: int) -> list[tuple[Tree, tuple]]:
    """Monomials of arity ``n`` whose top region is ``pattern``.

    Returns pairs ``(tree, leaf_paths)`` where ``leaf_paths[j-1]`` is the path
    of the subtree grafted on pattern leaf ``j``.
    """
    return list(_rooted_extensions(sig, pattern, n))


@lru_cache(maxsize=None)
def _rooted_extensions(sig, pattern, n):
    k = arity(pattern)
    paths = _leaf_paths(pattern)
    out = []
    for blocks in ordered_set_partitions(tuple(range(1, n + 1)), k):
        for kids in itertools.product(*(_monomials_on(sig, b) for b in blocks)):
            t = pattern
            for j, kid in enumerate(kids, start=1):
                t = replace_subtree(t, paths[j - 1], kid)
            out.append((t, paths))
    return tuple(out)


@lru_cache(maxsize=None)
def _leaf_paths(t: Tree) -> tuple[tuple, ...]:
    """Paths of the leaves, indexed by label - 1."""
    found = {}

    def walk(s, path):
        if isinstance(s, int):
            found[s] = path
            return
        for i, c in enumerate(s[1:]):
            walk(c, path + (i,))

    walk(t, ())
    return tuple(found[i] for i in sorted(found))


# ---------------------------------------------------------------------------
# occurrences


@dataclass(frozen=True)
class Occurrence:
    """An embedding of ``pattern`` into ``host``.

    ``root`` is the host path of the image of the pattern root, ``vertex_map``
    pairs pattern vertex paths with host vertex paths, and ``leaf_map[j-1]`` is
    the host path of the subtree sitting at pattern leaf ``j``.
    """

    host: Tree
    pattern: Tree
    root: tuple
    vertex_map: tuple
    leaf_map: tuple

    @property
    def host_vertices(self) -> frozenset:
        return frozenset(h for _, h in self.vertex_map)


def _match(p: Tree, h: Tree, ppath, hpath, vmap, leafs) -> bool:
    if isinstance(p, int):
        leafs[p] = hpath
        return True
    if isinstance(h, int) or h[0] != p[0] or len(h) != len(p):
        return False
    vmap.append((ppath, hpath))
    for i in range(1, len(p)):
        if not _match(p[i], h[i], ppath + (i - 1,), hpath + (i - 1,), vmap, leafs):
            return False
    return True


def match_at(host: Tree, pattern: Tree, path: tuple) -> Occurrence | None:
    h = subtree(host, path)
    vmap: list = []
    leafs: dict = {}
    if not _match(pattern, h, (), path, vmap, leafs):
        return None
    frontier = [leafs[j] for j in range(1, len(leafs) + 1)]
    mins = [min_leaf(subtree(host, fp)) for fp in frontier]
    if any(a >= b for a, b in zip(mins, mins[1:])):
        return None
    return Occurrence(host, pattern, path, tuple(vmap), tuple(frontier))


def find_occurrences(host: Tree, pattern: Tree) -> list[Occurrence]:
    if isinstance(pattern, int):
        raise ValueError("the identity leaf is not a valid pattern")
    out = []
    for path, v in vertices(host):
        if v[0] == pattern[0]:
            occ = match_at(host, pattern, path)
            if occ is not None:
                out.append(occ)
    return out


def substitute(host: Tree, occ: Occurrence, t: Tree) -> Tree:
    """Replace the matched region of ``host`` by ``t`` (same arity as the pattern)."""
    kids = {j + 1: subtree(host, p) for j, p in enumerate(occ.leaf_map)}
    return replace_subtree(host, occ.root, _plug(t, kids))


def _plug(t: Tree, kids) -> Tree:
    if isinstance(t, int):
        return kids[t]
    return (t[0], *(_plug(c, kids) for c in t[1:]))


def restrict(occ: Occurrence) -> Tree:
    """The pattern read off the host along ``occ`` (used to check round trips)."""
    marks = {p: -(j + 1) for j, p in enumerate(occ.leaf_map)}

    def cut(s, path):
        if path in marks:
            return min_leaf(s)
        return (s[0], *(cut(c, path + (i,)) for i, c in enumerate(s[1:])))

    return standardize(cut(subtree(occ.host, occ.root), occ.root))


# ---------------------------------------------------------------------------
# serialization


def to_text(t: Tree) -> str:
    if isinstance(t, int):
        return str(t)
    return f"{t[0]}(" + ",".join(to_text(c) for c in t[1:]) + ")"


def to_json(t: Tree):
    if isinstance(t, int):
        return t
    return [t[0], *(to_json(c) for c in t[1:])]


def from_json(obj) -> Tree:
    if isinstance(obj, int):
        return obj
    if not isinstance(obj, list) or not obj or not isinstance(obj[0], str):
        raise ValueError(f"malformed monomial JSON: {obj!r}")
    return (obj[0], *(from_json(c) for c in obj[1:]))


def from_text(text: str) -> Tree:
    """Parse the prefix form, e.g. ``o(o(1,2),3)``."""
    pos = 0
    s = text.replace(" ", "")

    def parse():
        nonlocal pos
        if pos < len(s) and s[pos].isdigit():
            start = pos
            while pos < len(s) and s[pos].isdigit():
                pos += 1
            return int(s[start:pos])
        start = pos
        while pos < len(s) and (s[pos].isalnum() or s[pos] in "_'"):
            pos += 1
        name = s[start:pos]
        if not name or pos >= len(s) or s[pos] != "(":
            raise ValueError(f"bad monomial text at position {start}: {text!r}")
        pos += 1
        kids = [parse()]
        while pos < len(s) and s[pos] == ",":
            pos += 1
            kids.append(parse())
        if pos >= len(s) or s[pos] != ")":
            raise ValueError(f"expected ')' at position {pos}: {text!r}")
        pos += 1
        return (name, *kids)

    t = parse()
    if pos != len(s):
        raise ValueError(f"trailing characters at position {pos}: {text!r}")
    return t
