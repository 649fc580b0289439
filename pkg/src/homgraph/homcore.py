"""Hom groups between finite module presentations, two independent ways.

hom_structure sets up the defining congruences for a module map (torsion
compatibility plus HP = QH row-wise for every generator action) and reads the
group structure off the solution lattice modulo the trivial identifications,
all in exact integer arithmetic.  hom_oracle instead enumerates every
candidate generator-image tuple, filters by the same conditions, and counts
element orders; it exists so the solver has something to disagree with.

present_submodule / present_quotient turn lattice nodes into standalone
presentations over the same ring, which is what makes the adjacency test
Hom(N1, M/N2) != 0 computable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iter_product

import numpy as np

from . import modcore
from .errors import CapExceeded, InternalInconsistency, SpecError
from .lattice import Submodule, SubmoduleLattice
from .modcore import (
    Caps,
    DEFAULT_CAPS,
    ModulePresentation,
    _smith_with_transforms,
    elem_add,
    elem_scale,
    kernel_basis,
    quotient_invariants,
)


@dataclass(frozen=True)
class HomStructure:
    """Invariant factors (ascending divisibility, all > 1) of a Hom group."""

    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def is_zero(self) -> bool:
        return not self.invariant_factors


def _combine(m: ModulePresentation, coeffs, vectors):
    """Integer combination sum coeffs[t] * vectors[t], reduced in m."""
    out = modcore.zero_element(m)
    for c, v in zip(coeffs, vectors):
        if c:
            out = elem_add(m, out, elem_scale(m, c, v))
    return out


@lru_cache(maxsize=None)
def present_submodule(m: ModulePresentation, sub: Submodule) -> ModulePresentation:
    """A presentation of the submodule over the same ring.

    Generators come from the node's greedy generating tuple; the relation
    lattice of the lift Z^r -> M is Smith-reduced to get cyclic coordinates,
    and the ring actions are re-expressed in those coordinates.  Raises
    InternalInconsistency if the node is not actually action-closed.
    """
    if sub.order == 1:
        return ModulePresentation(m.ring, (), ((),) * len(m.actions) if m.actions else ())
    gens = sub.generators
    r = len(gens)
    n = len(m.orders)
    stacked = [
        [gens[c][i] for c in range(r)] + [m.orders[i] if i == j else 0 for j in range(n)]
        for i in range(n)
    ]
    relation_gens = [v[:r] for v in kernel_basis(stacked, n, r + n)]
    if not relation_gens:
        raise InternalInconsistency("finite submodule with a free presentation")
    kmat = [[col[i] for col in relation_gens] for i in range(r)]
    diag, left, left_inv, _, _ = _smith_with_transforms(kmat, r, len(relation_gens))
    if len(diag) < r or any(d == 0 for d in diag):
        raise InternalInconsistency("submodule relation lattice is not full rank")
    kept = [t for t in range(r) if diag[t] > 1]
    new_orders = tuple(diag[t] for t in kept)
    if math.prod(new_orders) != sub.order:
        raise InternalInconsistency("relation lattice order disagrees with the element count")
    basis = [
        _combine(m, [left_inv[i][t] for i in range(r)], gens) for t in kept
    ]
    coords_of: dict[tuple, tuple] = {}
    for z in iter_product(*(range(d) for d in new_orders)):
        w = _combine(m, z, basis)
        if w in coords_of:
            raise InternalInconsistency("submodule coordinates collide")
        coords_of[w] = z
    if set(coords_of) != sub.element_set:
        raise InternalInconsistency("submodule coordinates do not cover the node")
    acts = []
    for a in m.actions:
        cols = []
        for t, b in enumerate(basis):
            w = modcore.mat_apply(m, a, b)
            if w not in coords_of:
                raise InternalInconsistency("submodule is not closed under the ring action")
            cols.append(coords_of[w])
        acts.append(tuple(tuple(cols[t][i] for t in range(len(kept))) for i in range(len(kept))))
    return ModulePresentation(m.ring, new_orders, tuple(acts))


@lru_cache(maxsize=None)
def present_quotient(m: ModulePresentation, sub: Submodule) -> ModulePresentation:
    """A presentation of M/N over the same ring.

    Smith-reduces the column lattice [diag(orders) | lifted generators of N]
    so classes get canonical cyclic coordinates, then pushes the ring actions
    through chosen representatives.
    """
    n = len(m.orders)
    gens = sub.generators
    r = len(gens)
    stacked = [
        [m.orders[i] if i == j else 0 for j in range(n)] + [gens[c][i] for c in range(r)]
        for i in range(n)
    ]
    diag, left, left_inv, _, _ = _smith_with_transforms(stacked, n, n + r)
    if len(diag) < n or any(d == 0 for d in diag):
        raise InternalInconsistency("quotient lattice is not full rank")
    kept = [t for t in range(n) if diag[t] > 1]
    new_orders = tuple(diag[t] for t in kept)
    if math.prod(new_orders) * sub.order != m.size:
        raise InternalInconsistency("quotient order disagrees with |M| / |N|")

    def project(v) -> tuple:
        return tuple(
            sum(left[t][j] * v[j] for j in range(n)) % diag[t] for t in kept
        )

    reps = [
        tuple(left_inv[i][t] % m.orders[i] for i in range(n)) for t in kept
    ]
    for t, q in enumerate(reps):
        unit = tuple(1 if s == t else 0 for s in range(len(kept)))
        if project(q) != unit:
            raise InternalInconsistency("quotient representatives do not project to units")
    acts = []
    for a in m.actions:
        cols = [project(modcore.mat_apply(m, a, q)) for q in reps]
        acts.append(tuple(tuple(cols[t][i] for t in range(len(kept))) for i in range(len(kept))))
    return ModulePresentation(m.ring, new_orders, tuple(acts))


@lru_cache(maxsize=None)
def hom_structure(a: ModulePresentation, b: ModulePresentation) -> HomStructure:
    """Invariant factors of Hom_R(a, b) via the solution lattice of the defining congruences.

    Unknowns are the matrix entries h[j][i] of generator images; the lattice
    of integer solutions contains the row-wise identifications, and the
    quotient is the Hom group.
    """
    if a.ring != b.ring:
        raise SpecError("hom_structure needs modules over the same ring")
    m_, n_ = a.rank, b.rank
    if m_ == 0 or n_ == 0:
        return HomStructure(())
    tdim = n_ * m_

    def pos(j: int, i: int) -> int:
        return j * m_ + i

    col_moduli = [b.orders[j] for j in range(n_) for _ in range(m_)]
    rows: list[list[int]] = []
    row_moduli: list[int] = []
    # torsion compatibility: d_i h[j][i] = 0 mod e_j
    for j in range(n_):
        for i in range(m_):
            row = [0] * tdim
            row[pos(j, i)] = a.orders[i]
            rows.append(row)
            row_moduli.append(b.orders[j])
    # intertwining with each generator action: (HP)[j][i2] = (QH)[j][i2] mod e_j
    for p_mat, q_mat in zip(a.actions, b.actions):
        for j in range(n_):
            for i2 in range(m_):
                row = [0] * tdim
                for i in range(m_):
                    row[pos(j, i)] += p_mat[i][i2]
                for j2 in range(n_):
                    row[pos(j2, i2)] -= q_mat[j][j2]
                rows.append(row)
                row_moduli.append(b.orders[j])
    s = len(rows)
    stacked = [rows[r_] + [row_moduli[r_] if r_ == c else 0 for c in range(s)] for r_ in range(s)]
    solution_gens = [v[:tdim] for v in kernel_basis(stacked, s, tdim + s)]
    factors = quotient_invariants(solution_gens, col_moduli)
    return HomStructure(tuple(factors))


def hom_oracle(a: ModulePresentation, b: ModulePresentation, caps: Caps = DEFAULT_CAPS) -> HomStructure:
    """Brute-force Hom group: enumerate candidate images, filter, count orders.

    Kept deliberately independent of hom_structure; the only shared inputs
    are the presentations themselves.
    """
    if a.ring != b.ring:
        raise SpecError("hom_oracle needs modules over the same ring")
    if a.size > caps.max_oracle_order:
        raise CapExceeded(f"|A| = {a.size} exceeds the oracle cap {caps.max_oracle_order}")
    if a.rank == 0 or b.rank == 0:
        return HomStructure(())
    p = a.ring.p
    eord = np.array(b.orders, dtype=np.int64)
    belems = np.array(list(modcore.elements(b)), dtype=np.int64)
    cands = []
    for d in a.orders:
        mask = ((d * belems) % eord == 0).all(axis=1)
        cands.append(belems[mask])
    total = math.prod(len(c) for c in cands)
    if total > caps.max_oracle_candidates:
        raise CapExceeded(f"{total} candidate maps exceed the oracle candidate cap")
    shape = tuple(len(c) for c in cands)
    idx = np.indices(shape).reshape(len(cands), -1)
    h = np.stack([cands[i][idx[i]] for i in range(len(cands))], axis=1)
    ok = np.ones(h.shape[0], dtype=bool)
    for p_mat, q_mat in zip(a.actions, b.actions):
        pm = np.array(p_mat, dtype=np.int64)
        qm = np.array(q_mat, dtype=np.int64)
        lhs = np.einsum("kin,ij->kjn", h, pm)
        rhs = np.einsum("kil,jl->kij", h, qm)
        ok &= ((lhs - rhs) % eord == 0).all(axis=(1, 2))
    surv = h[ok]
    count = surv.shape[0]
    if count == 0:
        raise InternalInconsistency("the zero map did not survive the oracle filter")
    gamma_total = _p_log(count, p)
    elem_orders = (eord // np.gcd(surv, eord)).max(axis=(1, 2))
    # invariant factors from the subgroup-of-exponent-p^j filtration
    factors: list[int] = []
    ge_counts = []
    j = 1
    prev_gamma = 0
    while prev_gamma < gamma_total:
        cnt = int((elem_orders <= p ** j).sum())
        gamma = _p_log(cnt, p)
        ge_counts.append(gamma - prev_gamma)
        prev_gamma = gamma
        j += 1
    for jj in range(len(ge_counts), 0, -1):
        here = ge_counts[jj - 1] - (ge_counts[jj] if jj < len(ge_counts) else 0)
        factors = [p ** jj] * here + factors
    return HomStructure(tuple(factors))


def _p_log(n: int, p: int) -> int:
    e = 0
    while n > 1:
        if n % p:
            raise InternalInconsistency(f"{n} survivors do not form a p-group")
        n //= p
        e += 1
    return e


def adjacent(m: ModulePresentation, lat: SubmoduleLattice, i: int, j: int) -> bool:
    """Edge test: Hom(N_i, M/N_j) != 0 or Hom(N_j, M/N_i) != 0."""
    if i == j:
        raise ValueError("adjacency is defined on distinct nodes")
    if i == lat.top_index or j == lat.top_index:
        raise ValueError("adjacency is defined on proper submodules")
    ni, nj = lat.nodes[i], lat.nodes[j]
    if not hom_structure(present_submodule(m, ni), present_quotient(m, nj)).is_zero:
        return True
    return not hom_structure(present_submodule(m, nj), present_quotient(m, ni)).is_zero
