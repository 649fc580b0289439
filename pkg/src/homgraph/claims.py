"""Executable claim registry for the homomorphism submodule graph.

Every structural claim the tool tracks lives here as a checker over
(module, lattice, graph) instances.  A claim verdict never raises on a
refutation: finding a counterexample is a result, and the suite reports
it with witnesses and moves on.  Only solver/oracle disagreement is
treated as fatal, elsewhere.

The paper_ref strings attached to verdicts are interface data consumed
by downstream tooling; they name claims in the registry's own catalogue.
"""
from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from . import graphkit, homcore, lattice as lattice_mod, modcore
from .errors import (
    CapExceeded,
    InternalInconsistency,
    LocalityRequired,
    NotApplicable,
    SpecError,
)
from .graphkit import Graph
from .lattice import SubmoduleLattice
from .modcore import (
    Caps,
    DEFAULT_CAPS,
    KXY_PRESETS,
    LOCAL_SQUARE_ZERO,
    ModulePresentation,
    PRIME_FIELD,
    PRODUCT_FIELD,
    RingSpec,
    ZMOD,
)

log = logging.getLogger(__name__)

CONFIRMED = "confirmed"
REFUTED = "refuted"
MIXED = "mixed"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class Witness:
    """A refuting or notable instance: module spec strings plus a detail line."""

    modules: tuple[str, ...]
    detail: str


@dataclass(frozen=True)
class ClaimVerdict:
    claim_id: str
    paper_ref: str
    instances_checked: int
    status: str
    witnesses: tuple[Witness, ...] = ()


@dataclass(frozen=True)
class ModuleZoo:
    """Pairwise non-isomorphic modules over one ring, up to a size bound."""

    ring: RingSpec
    members: tuple[ModulePresentation, ...]
    bound: int


# ======================================================================
# zoo enumeration
# ======================================================================


def _partitions(total: int, max_part: int):
    if total == 0:
        yield ()
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in _partitions(total - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _square_zero_mats(p: int, n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    out = []
    for flat in itertools.product(range(p), repeat=n * n):
        mat = tuple(flat[r * n:(r + 1) * n] for r in range(n))
        sq = modcore._mat_mul(mat, mat)
        if all(v % p == 0 for row in sq for v in row):
            out.append(mat)
    return tuple(out)


def _kxy_exhaustive(ring: RingSpec, dim: int, caps: Caps) -> list[ModulePresentation]:
    """All modules of the given dimension, one per isomorphism class."""
    reps: list[ModulePresentation] = []
    mats = _square_zero_mats(ring.p, dim)
    for xmat in mats:
        for ymat in mats:
            xy = modcore._mat_mul(xmat, ymat)
            yx = modcore._mat_mul(ymat, xmat)
            if any(v % ring.p for row in xy for v in row):
                continue
            if any(v % ring.p for row in yx for v in row):
                continue
            cand = modcore.kxy_module(ring.p, xmat, ymat)
            if not any(module_isomorphic(cand, r, caps) for r in reps):
                reps.append(cand)
    return reps


_KXY_PRESET_DIMS = {"k": 1, "k2": 2, "R/x": 2, "R/y": 2, "R/x+y": 2, "R": 3}


def enumerate_zoo(ring: RingSpec, bound: int, caps: Caps = DEFAULT_CAPS) -> ModuleZoo:
    """Modules over the ring with length (or dimension) up to bound.

    zmod enumerates exponent partitions, prime_field dimensions,
    product_field multiplicity pairs.  local_square_zero takes the named
    presets and, at p = 2, an exhaustive sweep of all presentations of
    dimension at most 3 deduplicated up to isomorphism.
    """
    if bound < 1:
        raise SpecError(f"zoo bound must be positive, got {bound}")
    if ring.p ** bound > caps.max_module_order:
        raise CapExceeded(
            f"largest zoo member would have order {ring.p ** bound}, "
            f"over the cap {caps.max_module_order}")
    members: list[ModulePresentation] = []
    if ring.kind == ZMOD:
        for total in range(1, bound + 1):
            for part in _partitions(total, ring.k):
                members.append(modcore.zmod_module(ring.p, ring.k, part))
    elif ring.kind == PRIME_FIELD:
        for dim in range(1, bound + 1):
            members.append(modcore.field_module(ring.p, dim))
    elif ring.kind == PRODUCT_FIELD:
        for total in range(1, bound + 1):
            for a in range(total, -1, -1):
                members.append(modcore.prod_module(ring.p, (a, total - a)))
    elif ring.kind == LOCAL_SQUARE_ZERO:
        for preset in KXY_PRESETS:
            if _KXY_PRESET_DIMS[preset] <= bound:
                members.append(modcore.kxy_preset(ring.p, preset))
        if ring.p == 2:
            for dim in range(1, min(bound, 3) + 1):
                for cand in _kxy_exhaustive(ring, dim, caps):
                    if not any(module_isomorphic(cand, m, caps) for m in members):
                        members.append(cand)
    else:
        raise SpecError(f"unknown ring kind {ring.kind!r}")
    return ModuleZoo(ring=ring, members=tuple(members), bound=bound)


# ======================================================================
# module isomorphism
# ======================================================================


@lru_cache(maxsize=None)
def _invertible_mats(p: int, n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    out = []
    for flat in itertools.product(range(p), repeat=n * n):
        mat = tuple(flat[r * n:(r + 1) * n] for r in range(n))
        if modcore.rank_mod_p(mat, p) == n:
            out.append(mat)
    return tuple(out)


def _mats_equal_mod(a, b, p: int) -> bool:
    return all((x - y) % p == 0 for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def _iso_verdict(a: ModulePresentation, b: ModulePresentation,
                 caps: Caps) -> tuple[bool, str]:
    """(isomorphic?, human-readable certificate for the answer)."""
    if a.ring != b.ring:
        raise SpecError("cannot compare modules over different rings")
    kind = a.ring.kind
    if kind == ZMOD:
        sa, sb = sorted(a.orders), sorted(b.orders)
        if sa == sb:
            return True, f"equal cyclic order multisets {tuple(sa)}"
        return False, f"cyclic order multisets differ: {tuple(sa)} vs {tuple(sb)}"
    if kind == PRIME_FIELD:
        if len(a.orders) == len(b.orders):
            return True, f"equal dimension {len(a.orders)}"
        return False, f"dimensions differ: {len(a.orders)} vs {len(b.orders)}"
    if kind == PRODUCT_FIELD:
        ma, mb = modcore.simple_multiplicities(a), modcore.simple_multiplicities(b)
        if ma == mb:
            return True, f"equal simple multiplicities {ma}"
        return False, f"simple multiplicities differ: {ma} vs {mb}"
    # local_square_zero: invariants first, then change-of-basis search
    n = len(a.orders)
    if n != len(b.orders):
        return False, f"dimensions differ: {n} vs {len(b.orders)}"
    pa, pb = modcore.annihilator_profile(a), modcore.annihilator_profile(b)
    if pa != pb:
        return False, f"annihilator profiles differ: {pa} vs {pb}"
    sa, sb = len(modcore.socle(a)), len(modcore.socle(b))
    if sa != sb:
        return False, f"socle sizes differ: {sa} vs {sb}"
    p = a.ring.p
    ranks_a = tuple(modcore.rank_mod_p(m, p) for m in a.actions)
    ranks_b = tuple(modcore.rank_mod_p(m, p) for m in b.actions)
    if ranks_a != ranks_b:
        return False, f"action rank profiles differ: {ranks_a} vs {ranks_b}"
    if n == 0:
        return True, "both zero"
    if p ** (n * n) > caps.max_oracle_candidates:
        raise CapExceeded(
            f"change-of-basis search over {p}^{n * n} matrices exceeds the cap")
    cands = _invertible_mats(p, n)
    for t in cands:
        if all(_mats_equal_mod(modcore._mat_mul(t, ma), modcore._mat_mul(mb, t), p)
               for ma, mb in zip(a.actions, b.actions)):
            return True, "explicit change of basis found"
    return False, (f"no change of basis among {len(cands)} invertible matrices "
                   "intertwines the actions")


def module_isomorphic(a: ModulePresentation, b: ModulePresentation,
                      caps: Caps = DEFAULT_CAPS) -> bool:
    return _iso_verdict(a, b, caps)[0]


def noniso_certificate(a: ModulePresentation, b: ModulePresentation,
                       caps: Caps = DEFAULT_CAPS) -> str | None:
    """Why a and b are not isomorphic, or None when they are."""
    ok, cert = _iso_verdict(a, b, caps)
    return None if ok else cert


# ======================================================================
# prepared instances
# ======================================================================


@dataclass
class Instance:
    """A zoo member with its lattice and graph built."""

    module: ModulePresentation
    spec: str
    lat: SubmoduleLattice
    graph: Graph

    @property
    def t(self) -> int:
        return self.graph.n

    @property
    def length(self) -> int:
        return modcore.composition_length(self.module)

    @property
    def uniserial(self) -> bool:
        return lattice_mod.is_uniserial(self.lat)

    @property
    def semisimple(self) -> bool:
        return modcore.is_semisimple(self.module)

    def vertex_of(self, lat_index: int) -> int:
        return self.lat.proper_indices.index(lat_index)


def build_instance(m: ModulePresentation, caps: Caps = DEFAULT_CAPS) -> Instance:
    lat = lattice_mod.enumerate_submodules(m, caps)
    if lat.proper_indices[0] != lat.zero_index:
        raise InternalInconsistency("zero submodule is not vertex 0")
    g = graphkit.build_graph(m, lat, caps)
    return Instance(module=m, spec=modcore.spec_string(m), lat=lat, graph=g)


def _graph_desc(g: Graph) -> str:
    if graphkit.is_complete(g):
        return f"K_{g.n}"
    return f"graph on {g.n} vertices with {g.edge_count()} edges"


# ======================================================================
# per-instance claim checkers
#
# Each checker returns a list of (direction, ok, detail) outcomes for the
# directions applicable to the instance; an empty list means the claim
# does not speak about this module.
# ======================================================================

Outcome = tuple[str, bool, str]
Checker = Callable[[Instance, Caps], list[Outcome]]


def _share(mult_a: tuple[int, ...], mult_b: tuple[int, ...]) -> bool:
    return any(x > 0 and y > 0 for x, y in zip(mult_a, mult_b))


def _chk_semisimple_adjacency(inst: Instance, caps: Caps) -> list[Outcome]:
    if not inst.semisimple or inst.t < 2:
        return []
    m, lat, g = inst.module, inst.lat, inst.graph
    nodes = [lat.nodes[i] for i in lat.proper_indices]
    sub_mults = [modcore.simple_multiplicities(homcore.present_submodule(m, nd))
                 for nd in nodes]
    quot_mults = [modcore.simple_multiplicities(homcore.present_quotient(m, nd))
                  for nd in nodes]
    for i in range(g.n):
        for j in range(i + 1, g.n):
            want = _share(sub_mults[i], quot_mults[j]) or _share(sub_mults[j], quot_mults[i])
            if g.has_edge(i, j) != want:
                detail = (f"vertices {nodes[i].label()} and {nodes[j].label()}: "
                          f"edge={g.has_edge(i, j)} but the shared-summand "
                          f"criterion gives {want}")
                return [("adjacency-matches-shared-simple-summand", False, detail)]
    return [("adjacency-matches-shared-simple-summand", True, "")]


def _chk_uniserial_complete(inst: Instance, caps: Caps) -> list[Outcome]:
    if not inst.uniserial:
        return []
    ok = graphkit.is_complete(inst.graph)
    return [("uniserial-gives-complete", ok,
             f"chain module but {_graph_desc(inst.graph)}")]


def _chk_complete_iff_uniserial(inst: Instance, caps: Caps) -> list[Outcome]:
    if inst.t < 2:
        return []
    outs: list[Outcome] = []
    complete = graphkit.is_complete(inst.graph)
    if inst.uniserial:
        outs.append(("if", complete,
                     f"chain module but {_graph_desc(inst.graph)}"))
    if complete:
        outs.append(("only-if", inst.uniserial,
                     f"{_graph_desc(inst.graph)} but the submodule lattice "
                     "is not a chain"))
    return outs


def _chk_connected_universal(inst: Instance, caps: Caps) -> list[Outcome]:
    if inst.t < 2:
        return []
    g = inst.graph
    return [
        ("connected", graphkit.is_connected(g), "graph is disconnected"),
        ("zero-vertex-universal", g.degree(0) == g.n - 1,
         f"zero submodule has degree {g.degree(0)} on {g.n} vertices"),
    ]


def _chk_chordal(inst: Instance, caps: Caps) -> list[Outcome]:
    ok, cert = graphkit.is_chordal(inst.graph)
    labels = tuple(inst.graph.labels[v] for v in cert) if not ok else ()
    return [("chordal", ok, f"induced hole through {labels}")]


def _chk_diameter(inst: Instance, caps: Caps) -> list[Outcome]:
    d = graphkit.diameter(inst.graph)
    outs: list[Outcome] = [("at-most-two", d <= 2, f"diameter {d}")]
    if inst.t >= 2 and inst.uniserial:
        outs.append(("equals-one-if", d == 1,
                     f"chain module with {inst.t} proper submodules but diameter {d}"))
    if d == 1:
        outs.append(("equals-one-only-if", inst.uniserial,
                     "diameter 1 but the submodule lattice is not a chain"))
    return outs


def _chk_regularity(inst: Instance, caps: Caps) -> list[Outcome]:
    if inst.t < 3:
        return []
    g = inst.graph
    outs: list[Outcome] = []
    if graphkit.is_complete(g):
        outs.append(("if", graphkit.is_regular(g), "complete graph is not regular"))
    if graphkit.is_regular(g):
        outs.append(("only-if", graphkit.is_complete(g),
                     f"regular of degree {g.degree(0)} on {g.n} vertices "
                     "but not complete"))
    return outs


def _chk_empty_graph(inst: Instance, caps: Caps) -> list[Outcome]:
    outs: list[Outcome] = []
    g = inst.graph
    if inst.length == 1:
        outs.append(("simple-module-single-vertex",
                     g.n == 1 and g.edge_count() == 0,
                     f"simple module but {_graph_desc(g)}"))
    if inst.t >= 2:
        outs.append(("nonsimple-has-an-edge", g.edge_count() >= 1,
                     f"{inst.t} proper submodules but no edges"))
    return outs


def _chk_tree(inst: Instance, caps: Caps) -> list[Outcome]:
    outs: list[Outcome] = []
    g = inst.graph
    if inst.length == 2:
        outs.append(("if", graphkit.is_tree(g) and g.n == 2,
                     f"length 2 but {_graph_desc(g)}"))
    if graphkit.is_tree(g):
        outs.append(("only-if", inst.length == 2,
                     f"{_graph_desc(g)} is a tree but the composition length "
                     f"is {inst.length}"))
    return outs


def _chk_socle(inst: Instance, caps: Caps) -> list[Outcome]:
    m = inst.module
    if not m.ring.is_local:
        return []
    lat = inst.lat
    soc_set = modcore.socle(m)
    soc_idx = lattice_mod.socle_node(lat)
    outs: list[Outcome] = []

    ats = lattice_mod.atoms(lat)
    candidates = [i for i in range(len(lat.nodes))
                  if all(lat.is_leq(a, i) for a in ats)]
    join_idx = min(candidates, key=lambda i: lat.nodes[i].order)
    outs.append(("sum-of-simple-submodules", join_idx == soc_idx,
                 f"join of the minimal submodules is {lat.nodes[join_idx].label()} "
                 f"but the socle is {lat.nodes[soc_idx].label()}"))

    offender = None
    for node in lat.nodes:
        pres = homcore.present_submodule(m, node)
        if modcore.is_semisimple(pres) and not node.element_set <= soc_set:
            offender = node
            break
    outs.append(("contains-every-semisimple-submodule", offender is None,
                 f"semisimple submodule {offender.label() if offender else ''} "
                 "is not inside the socle"))

    if len(soc_set) < m.size:
        miss = None
        for i in lattice_mod.maximal_submodules(lat):
            if not soc_set <= lat.nodes[i].element_set:
                miss = lat.nodes[i]
                break
        outs.append(("contained-in-every-maximal", miss is None,
                     f"maximal submodule {miss.label() if miss else ''} "
                     "does not contain the socle"))
    return outs


def _chk_vertex_transitivity(inst: Instance, caps: Caps) -> list[Outcome]:
    vt = graphkit.is_vertex_transitive(inst.graph, caps)
    if inst.t <= 2:
        return [("at-most-two-vertices-transitive", vt,
                 f"{_graph_desc(inst.graph)} is not vertex-transitive")]
    return [("three-plus-vertices-not-transitive", not vt,
             f"{_graph_desc(inst.graph)} is vertex-transitive")]


def _chk_complete_spectrum(inst: Instance, caps: Caps) -> list[Outcome]:
    if not inst.uniserial or inst.t < 2:
        return []
    g = inst.graph
    if not graphkit.is_complete(g):
        return [("spectrum-n-minus-one-and-minus-ones", False,
                 f"chain module but {_graph_desc(g)}")]
    rep = graphkit.spectrum(g, caps, exact_complete=False)
    want = [float(g.n - 1)] + [-1.0] * (g.n - 1)
    err = max(abs(a - b) for a, b in zip(rep.eigenvalues, want))
    return [("spectrum-n-minus-one-and-minus-ones", err <= 1e-9,
             f"eigenvalues deviate from ({g.n - 1}, -1^{g.n - 1}) by {err:.3e}")]


def _chk_chain_spectral_radius(inst: Instance, caps: Caps) -> list[Outcome]:
    m = inst.module
    if m.ring.kind != ZMOD or len(m.orders) != 1:
        return []
    n = inst.length
    g = inst.graph
    lam = graphkit.spectrum(g, caps).lambda_max
    detail = (f"chain module of length {n}: measured {_graph_desc(g)} with "
              f"lambda_max {lam:g}; stated clique K_{n - 1} with largest "
              f"eigenvalue {n - 2}")
    stated_ok = (g.n == n - 1 and graphkit.is_complete(g)
                 and abs(lam - (n - 2)) <= caps.tol)
    measured_ok = (graphkit.is_complete(g) and g.n == n
                   and abs(lam - (g.n - 1)) <= caps.tol)
    return [
        ("stated-clique-size-and-radius", stated_ok, detail),
        ("measured-complete-with-radius-t-minus-one", measured_ok, detail),
    ]


def _chk_lambda_bound(inst: Instance, caps: Caps) -> list[Outcome]:
    lam = graphkit.spectrum(inst.graph, caps).lambda_max
    bound = math.sqrt(inst.t - 1)
    return [("radius-at-least-sqrt-t-minus-one", lam + caps.tol >= bound,
             f"lambda_max {lam:g} below sqrt({inst.t} - 1) = {bound:g}")]


# ======================================================================
# pairwise reconstruction checks
# ======================================================================


def _paired_groups(instances: Sequence[Instance], kinds: set[str],
                   pred: Callable[[Instance], bool] | None):
    groups: dict[RingSpec, list[Instance]] = {}
    for inst in instances:
        if inst.module.ring.kind not in kinds:
            continue
        if pred is not None and not pred(inst):
            continue
        groups.setdefault(inst.module.ring, []).append(inst)
    for ring in sorted(groups, key=lambda r: (r.kind, r.p, r.k)):
        yield groups[ring]


def _reconstruction_scan(instances: Sequence[Instance], caps: Caps,
                         kinds: set[str],
                         pred: Callable[[Instance], bool] | None = None):
    """(pairs checked, collisions) where a collision is a graph-isomorphic
    pair together with the module-isomorphism answer and certificate."""
    checked = 0
    collisions: list[tuple[Instance, Instance, bool, str]] = []
    for group in _paired_groups(instances, kinds, pred):
        for a, b in itertools.combinations(group, 2):
            try:
                giso, _ = graphkit.are_isomorphic(a.graph, b.graph, caps)
            except CapExceeded as exc:
                log.warning("skipping pair (%s, %s): %s", a.spec, b.spec, exc)
                continue
            checked += 1
            if not giso:
                continue
            miso, cert = _iso_verdict(a.module, b.module, caps)
            collisions.append((a, b, miso, cert))
    return checked, collisions


def _run_reconstruction(claim_id: str, paper_ref: str,
                        instances: Sequence[Instance], caps: Caps,
                        kinds: set[str],
                        pred: Callable[[Instance], bool] | None = None) -> ClaimVerdict:
    checked, collisions = _reconstruction_scan(instances, caps, kinds, pred)
    if checked == 0:
        return ClaimVerdict(claim_id, paper_ref, 0, NOT_APPLICABLE)
    wits = [Witness((a.spec, b.spec),
                    f"graphs isomorphic (both {_graph_desc(a.graph)}) but the "
                    f"modules are not: {cert}")
            for a, b, miso, cert in collisions if not miso]
    wits.sort(key=lambda w: (w.modules, w.detail))
    status = CONFIRMED if not wits else REFUTED
    return ClaimVerdict(claim_id, paper_ref, checked, status, tuple(wits))


def _run_nonlocal_collision(claim_id: str, paper_ref: str,
                         instances: Sequence[Instance], caps: Caps) -> ClaimVerdict:
    checked, collisions = _reconstruction_scan(instances, caps, {PRODUCT_FIELD})
    if checked == 0:
        return ClaimVerdict(claim_id, paper_ref, 0, NOT_APPLICABLE)
    wits = [Witness((a.spec, b.spec),
                    f"both {_graph_desc(a.graph)}; modules non-isomorphic: {cert}")
            for a, b, miso, cert in collisions if not miso]
    wits.sort(key=lambda w: (w.modules, w.detail))
    if wits:
        return ClaimVerdict(claim_id, paper_ref, checked, CONFIRMED, tuple(wits))
    note = Witness((), "no graph-isomorphic pair of non-isomorphic modules "
                       "in this zoo")
    return ClaimVerdict(claim_id, paper_ref, checked, MIXED, (note,))


def reconstruction_experiment(zoo: ModuleZoo, caps: Caps = DEFAULT_CAPS) -> ClaimVerdict:
    """Pairwise graph-isomorphism vs module-isomorphism over one local ring."""
    if not zoo.ring.is_local:
        raise SpecError(f"reconstruction needs a local ring, got {zoo.ring.describe()}")
    instances = []
    for m in zoo.members:
        try:
            instances.append(build_instance(m, caps))
        except CapExceeded as exc:
            log.warning("skipping %s: %s", modcore.spec_string(m), exc)
    return _run_reconstruction(
        "reconstruction-artinian-local", "Theorem 4.3", instances, caps,
        {ZMOD, LOCAL_SQUARE_ZERO, PRIME_FIELD})


# ======================================================================
# socle probe
# ======================================================================


@dataclass(frozen=True)
class SocleProbeReport:
    """How the socle vertex sits among maximal-submodule vertices."""

    module: str
    socle_label: str
    maximal_count: int
    adjacent_to_all_maximals: bool
    unique_among_zero_neighbors: bool
    zero_has_unique_max_degree: bool


def socle_probe(m: ModulePresentation, lat: SubmoduleLattice, g: Graph,
                caps: Caps = DEFAULT_CAPS) -> SocleProbeReport:
    """Check the socle-vertex signature used by the reconstruction argument.

    Adjacency is taken up to equality, so a vertex trivially has the
    property with respect to itself.
    """
    if not m.ring.is_local:
        raise LocalityRequired("socle probe needs a local base ring")
    soc_idx = lattice_mod.socle_node(lat)
    if soc_idx == lat.top_index:
        raise NotApplicable("socle equals the whole module")
    pos = {li: i for i, li in enumerate(lat.proper_indices)}
    soc_v = pos[soc_idx]
    maximal_vs = [pos[i] for i in lattice_mod.maximal_submodules(lat)]

    def hits_all(v: int) -> bool:
        return all(v == w or g.has_edge(v, w) for w in maximal_vs)

    adjacent_all = hits_all(soc_v)
    qualified = [v for v in g.neighbors(0) if hits_all(v)]
    unique = qualified == [soc_v]
    degs = [g.degree(v) for v in range(g.n)]
    top = max(degs)
    zero_unique = degs[0] == top and degs.count(top) == 1
    return SocleProbeReport(
        module=modcore.spec_string(m),
        socle_label=lat.nodes[soc_idx].label(),
        maximal_count=len(maximal_vs),
        adjacent_to_all_maximals=adjacent_all,
        unique_among_zero_neighbors=unique,
        zero_has_unique_max_degree=zero_unique,
    )


# ======================================================================
# registry and suite driver
# ======================================================================


def _tally_runner(fn: Checker):
    def run(claim_id: str, paper_ref: str, instances: Sequence[Instance],
            caps: Caps) -> ClaimVerdict:
        per_dir: dict[str, list[int]] = {}
        witnesses: list[Witness] = []
        touched = 0
        for inst in instances:
            try:
                outs = fn(inst, caps)
            except CapExceeded as exc:
                log.warning("skipping %s for %s: %s", inst.spec, claim_id, exc)
                continue
            if outs:
                touched += 1
            for direction, ok, detail in outs:
                slot = per_dir.setdefault(direction, [0, 0])
                slot[0 if ok else 1] += 1
                if not ok:
                    witnesses.append(Witness((inst.spec,), f"[{direction}] {detail}"))
        if not per_dir:
            return ClaimVerdict(claim_id, paper_ref, 0, NOT_APPLICABLE)
        dir_status = []
        for sat, vio in per_dir.values():
            if vio == 0:
                dir_status.append(CONFIRMED)
            elif sat == 0:
                dir_status.append(REFUTED)
            else:
                dir_status.append(MIXED)
        if all(s == CONFIRMED for s in dir_status):
            status = CONFIRMED
        elif all(s == REFUTED for s in dir_status):
            status = REFUTED
        else:
            status = MIXED
        witnesses.sort(key=lambda w: (w.modules, w.detail))
        return ClaimVerdict(claim_id, paper_ref, touched, status, tuple(witnesses))

    return run


def _reconstruction_runner(kinds: set[str],
                           pred: Callable[[Instance], bool] | None = None):
    def run(claim_id: str, paper_ref: str, instances: Sequence[Instance],
            caps: Caps) -> ClaimVerdict:
        return _run_reconstruction(claim_id, paper_ref, instances, caps, kinds, pred)

    return run


_REGISTRY: list[tuple[str, str, Callable]] = [
    ("adjacency-semisimple-criterion", "Theorem 3.1",
     _tally_runner(_chk_semisimple_adjacency)),
    ("chain-spectral-radius", "Proposition (spectral radius of R/m^n)",
     _tally_runner(_chk_chain_spectral_radius)),
    ("chordal-perfect", "Proposition 3.5", _tally_runner(_chk_chordal)),
    ("complete-iff-uniserial", "Theorem 3.3",
     _tally_runner(_chk_complete_iff_uniserial)),
    ("connected-with-universal-zero", "Theorem 3.4",
     _tally_runner(_chk_connected_universal)),
    ("diameter-at-most-two", "Theorem (diameter)", _tally_runner(_chk_diameter)),
    ("empty-graph-cases", "Proposition (empty graph)",
     _tally_runner(_chk_empty_graph)),
    ("lambda-max-lower-bound", "Proposition (lambda_max lower bound)",
     _tally_runner(_chk_lambda_bound)),
    ("noetherian-local-reduction", "Proposition 4.5",
     _reconstruction_runner({ZMOD})),
    ("reconstruction-artinian-local", "Theorem 4.3",
     _reconstruction_runner({ZMOD, LOCAL_SQUARE_ZERO})),
    ("reconstruction-fails-nonlocal", "Remark after Theorem 4.3",
     _run_nonlocal_collision),
    ("regular-iff-complete", "Proposition (regularity)",
     _tally_runner(_chk_regularity)),
    ("socle-structure", "Lemma 4.2", _tally_runner(_chk_socle)),
    ("spectrum-of-complete-graphs", "Theorem (spectrum of K_n)",
     _tally_runner(_chk_complete_spectrum)),
    ("tree-iff-length-two", "Theorem 4.1", _tally_runner(_chk_tree)),
    ("uniserial-implies-complete", "Theorem 3.2",
     _tally_runner(_chk_uniserial_complete)),
    ("uniserial-reconstruction", "Proposition 4.6",
     _reconstruction_runner({ZMOD, LOCAL_SQUARE_ZERO, PRIME_FIELD},
                            pred=lambda inst: inst.uniserial)),
    ("vertex-transitivity-bound", "Proposition (vertex transitivity)",
     _tally_runner(_chk_vertex_transitivity)),
]


def claim_ids() -> tuple[str, ...]:
    return tuple(cid for cid, _, _ in _REGISTRY)


def run_claim_suite(zoos: ModuleZoo | Iterable[ModuleZoo],
                    caps: Caps = DEFAULT_CAPS,
                    only: set[str] | None = None) -> list[ClaimVerdict]:
    """Evaluate every registered claim over the prepared zoo members.

    Cap overruns on individual members or pairs are logged and skipped;
    they never abort the suite.  Refutations are results, not errors.
    """
    if isinstance(zoos, ModuleZoo):
        zoos = [zoos]
    if only is not None:
        unknown = set(only) - set(claim_ids())
        if unknown:
            raise SpecError(f"unknown claim ids: {sorted(unknown)}")
    instances: list[Instance] = []
    for zoo in zoos:
        for m in zoo.members:
            try:
                instances.append(build_instance(m, caps))
            except CapExceeded as exc:
                log.warning("skipping %s: %s", modcore.spec_string(m), exc)
    verdicts = []
    for cid, ref, runner in _REGISTRY:
        if only is not None and cid not in only:
            continue
        verdicts.append(runner(cid, ref, instances, caps))
    verdicts.sort(key=lambda v: v.claim_id)
    return verdicts


# ======================================================================
# serialization
# ======================================================================


def verdicts_to_json(verdicts: Sequence[ClaimVerdict]) -> str:
    payload = [
        {
            "claim_id": v.claim_id,
            "paper_ref": v.paper_ref,
            "instances_checked": v.instances_checked,
            "status": v.status,
            "witnesses": [{"modules": list(w.modules), "detail": w.detail}
                          for w in v.witnesses],
        }
        for v in sorted(verdicts, key=lambda v: v.claim_id)
    ]
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def verdicts_to_csv(verdicts: Sequence[ClaimVerdict]) -> str:
    lines = ["claim_id,status,instances,witness_count"]
    for v in sorted(verdicts, key=lambda v: v.claim_id):
        lines.append(f"{v.claim_id},{v.status},{v.instances_checked},{len(v.witnesses)}")
    return "\n".join(lines) + "\n"
