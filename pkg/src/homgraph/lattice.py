"""Submodule lattice enumeration.

The algorithm is deliberately elementary: seed with every cyclic submodule
R.x (additive span of the monoid orbit of x), then close under pairwise join
until nothing new appears.  Joins are additive closures of unions, computed
by coset extension.  Internally elements are the integer indices from
modcore.ModuleOps; the public Submodule type exposes canonical residue
tuples so labels and exports stay readable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import modcore
from .errors import CapExceeded, InternalInconsistency, LocalityRequired
from .modcore import Caps, DEFAULT_CAPS, Element, ModulePresentation


@dataclass(frozen=True)
class Submodule:
    """One node of the lattice.

    canonical is the sorted tuple of element tuples and is the node's
    identity: nodes sort by it, and the zero submodule sorts first.
    generators is a greedy module-generating tuple (largest element order
    first, ties by canonical element order).
    """

    canonical: tuple[Element, ...]
    generators: tuple[Element, ...]

    @property
    def order(self) -> int:
        return len(self.canonical)

    @cached_property
    def element_set(self) -> frozenset[Element]:
        return frozenset(self.canonical)

    def label(self) -> str:
        if not self.generators:
            return "0"
        return "<" + ", ".join("(" + ",".join(map(str, g)) + ")" for g in self.generators) + ">"


@dataclass(frozen=True)
class SubmoduleLattice:
    """All submodules of a module, sorted canonically, with containment masks.

    leq_masks[i] has bit j set iff nodes[i] <= nodes[j].  Node 0 is the zero
    submodule (its canonical label sorts first); top_index points at M.
    """

    module: ModulePresentation
    nodes: tuple[Submodule, ...]
    leq_masks: tuple[int, ...]
    top_index: int

    @property
    def zero_index(self) -> int:
        return 0

    @property
    def proper_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.nodes)) if i != self.top_index)

    @property
    def t(self) -> int:
        return len(self.nodes) - 1

    def is_leq(self, i: int, j: int) -> bool:
        return bool(self.leq_masks[i] >> j & 1)


def _extend_subgroup(ops: modcore.ModuleOps, current: frozenset[int], x: int) -> frozenset[int]:
    """Smallest addition-closed superset of current containing x.

    current must already be addition-closed; the result is the union of the
    cosets current + i*x.
    """
    if x in current:
        return current
    reps = []
    c = x
    while c not in current:
        reps.append(c)
        c = ops.add(c, x)
    out = set(current)
    for r in reps:
        out.update(ops.add(r, s) for s in current)
    return frozenset(out)


def _monoid_orbit(ops: modcore.ModuleOps, x: int) -> set[int]:
    """x together with everything reachable by applying ring generator maps."""
    seen = {x}
    frontier = [x]
    while frontier:
        v = frontier.pop()
        for gmap in ops.generator_maps:
            w = gmap[v]
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


def cyclic_submodule_set(ops: modcore.ModuleOps, x: int) -> frozenset[int]:
    """Element indices of R.x, as the additive span of the monoid orbit of x."""
    span = frozenset((0,))
    for v in sorted(_monoid_orbit(ops, x)):
        span = _extend_subgroup(ops, span, v)
    return span


def _join(ops: modcore.ModuleOps, a: frozenset[int], b: frozenset[int]) -> frozenset[int]:
    if len(b) > len(a):
        a, b = b, a
    if b <= a:
        return a
    out = a
    for x in b:
        if x not in out:
            out = _extend_subgroup(ops, out, x)
            if len(out) == ops.size:
                break
    return out


def _greedy_generators(ops: modcore.ModuleOps, members: frozenset[int]) -> tuple[int, ...]:
    # largest order first so cyclic nodes get a single generator; ties by index
    ranked = sorted(members - {0}, key=lambda i: (-ops.element_orders[i], ops.tuples[i]))
    gens: list[int] = []
    span = frozenset((0,))
    for x in ranked:
        if x in span:
            continue
        gens.append(x)
        span = _join(ops, span, cyclic_submodule_set(ops, x))
        if span == members:
            break
    if span != members:
        raise InternalInconsistency("generator search did not span the submodule")
    return tuple(gens)


def enumerate_submodules(m: ModulePresentation, caps: Caps = DEFAULT_CAPS) -> SubmoduleLattice:
    """Every submodule of m, as a sorted lattice with containment masks."""
    if m.size > caps.max_module_order:
        raise CapExceeded(f"|M| = {m.size} exceeds the module order cap {caps.max_module_order}")
    ops = modcore.ops_for(m)
    found: dict[frozenset[int], None] = {frozenset((0,)): None}
    for x in range(1, ops.size):
        found.setdefault(cyclic_submodule_set(ops, x), None)
        if len(found) > caps.max_lattice_nodes:
            raise CapExceeded(f"more than {caps.max_lattice_nodes} lattice nodes")
    work = list(found)
    while work:
        fresh: list[frozenset[int]] = []
        for i, a in enumerate(work):
            for b in list(found):
                j = _join(ops, a, b)
                if j not in found:
                    found[j] = None
                    fresh.append(j)
                    if len(found) > caps.max_lattice_nodes:
                        raise CapExceeded(f"more than {caps.max_lattice_nodes} lattice nodes")
        work = fresh

    def canonical_of(s: frozenset[int]) -> tuple[Element, ...]:
        return tuple(sorted(ops.tuples[i] for i in s))

    int_sets = sorted(found, key=canonical_of)
    nodes = []
    for s in int_sets:
        gens = tuple(ops.tuples[i] for i in _greedy_generators(ops, s))
        nodes.append(Submodule(canonical_of(s), gens))
    masks = []
    for i, si in enumerate(int_sets):
        mask = 0
        for j, sj in enumerate(int_sets):
            if len(si) <= len(sj) and si <= sj:
                mask |= 1 << j
        masks.append(mask)
    top = next(i for i, s in enumerate(int_sets) if len(s) == ops.size)
    return SubmoduleLattice(m, tuple(nodes), tuple(masks), top)


def covers(lat: SubmoduleLattice, i: int) -> tuple[int, ...]:
    """Indices j covering i: i < j with nothing strictly between."""
    above = [j for j in range(len(lat.nodes)) if j != i and lat.is_leq(i, j)]
    out = []
    for j in above:
        if not any(x != j and lat.is_leq(x, j) for x in above):
            out.append(j)
    return tuple(sorted(out))


def maximal_submodules(lat: SubmoduleLattice) -> tuple[int, ...]:
    """Indices of the maximal proper submodules (the co-atoms)."""
    top = lat.top_index
    out = []
    for i in range(len(lat.nodes)):
        if i == top:
            continue
        strictly_between = any(
            j != i and j != top and lat.is_leq(i, j) for j in range(len(lat.nodes))
        )
        if not strictly_between:
            out.append(i)
    return tuple(sorted(out))


def atoms(lat: SubmoduleLattice) -> tuple[int, ...]:
    """Indices of the minimal nonzero submodules."""
    out = []
    for i in range(len(lat.nodes)):
        if i == lat.zero_index:
            continue
        below = any(j != i and j != lat.zero_index and lat.is_leq(j, i) for j in range(len(lat.nodes)))
        if not below:
            out.append(i)
    return tuple(sorted(out))


def is_uniserial(lat: SubmoduleLattice) -> bool:
    """True when containment totally orders the submodules."""
    n = len(lat.nodes)
    for i in range(n):
        for j in range(i + 1, n):
            if not (lat.is_leq(i, j) or lat.is_leq(j, i)):
                return False
    return True


def longest_chain(lat: SubmoduleLattice) -> int:
    """Number of covering steps on a longest chain from 0 to M."""
    order = sorted(range(len(lat.nodes)), key=lambda i: lat.nodes[i].order)
    best = {lat.zero_index: 0}
    for j in order:
        if j == lat.zero_index:
            continue
        below = [best[i] for i in order if i != j and lat.is_leq(i, j) and i in best]
        best[j] = max(below) + 1 if below else 0
    return best[lat.top_index]


def socle_node(lat: SubmoduleLattice) -> int:
    """Index of the socle in the lattice.  Local base rings only.

    Just locates the node; how the socle sits relative to maximal submodules
    is a claim checked by the suite, not an invariant asserted here.
    """
    if not lat.module.ring.is_local:
        raise LocalityRequired("socle is only computed over local rings")
    soc = modcore.socle(lat.module)
    for i, node in enumerate(lat.nodes):
        if node.element_set == soc:
            return i
    raise InternalInconsistency("socle is not a lattice node")
