"""Ring and module presentations, plus the exact integer linear algebra they ride on.

Supported base rings, all finite and commutative:

  zmod               Z/p^k           local, radical generated by p
  prime_field        F_p             local, radical zero
  product_field      F_p x F_p       semisimple, NOT local
  local_square_zero  F_p[x,y]/(x,y)^2  local, radical (x,y) with square zero

A module is presented as a direct sum of cyclic p-groups Z/d_1 (+) ... (+) Z/d_n
(the d_j are the cyclic orders) together with one integer matrix per listed
ring generator describing its action in those coordinates.  Elements are
canonical residue tuples.  Everything downstream (submodule lattices, Hom
groups, quotients) reduces to Smith normal form over plain Python ints, with
left/right transforms and their inverses tracked exactly.
"""

from __future__ import annotations

import itertools
import math
from ast import literal_eval
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import CapExceeded, InternalInconsistency, LocalityRequired, SpecError

Element = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

ZMOD = "zmod"
PRIME_FIELD = "prime_field"
PRODUCT_FIELD = "product_field"
LOCAL_SQUARE_ZERO = "local_square_zero"

RING_KINDS = (ZMOD, PRIME_FIELD, PRODUCT_FIELD, LOCAL_SQUARE_ZERO)

KXY_PRESETS = ("k", "k2", "R/x", "R/y", "R/x+y", "R")


@dataclass(frozen=True)
class Caps:
    """Size caps and tolerances threaded through every expensive operation."""

    max_module_order: int = 4096
    max_lattice_nodes: int = 5000
    max_spectrum: int = 500
    max_iso_vertices: int = 64
    max_oracle_order: int = 64
    max_oracle_candidates: int = 1 << 22
    iso_budget: int = 200_000
    tol: float = 1e-9


DEFAULT_CAPS = Caps()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """One of the four supported base rings.

    k is only meaningful for zmod and must stay 1 elsewhere, so equality of
    RingSpec values means equality of rings.
    """

    kind: str
    p: int
    k: int = 1

    def __post_init__(self):
        if self.kind not in RING_KINDS:
            raise SpecError(f"unknown ring kind {self.kind!r}")
        if not is_prime(self.p):
            raise SpecError(f"p={self.p} is not prime")
        if self.k < 1:
            raise SpecError("k must be >= 1")
        if self.kind != ZMOD and self.k != 1:
            raise SpecError(f"k={self.k} only makes sense for zmod")

    @property
    def is_local(self) -> bool:
        return self.kind != PRODUCT_FIELD

    @property
    def generator_labels(self) -> tuple[str, ...]:
        """Labels of the ring generators that carry action matrices (p acts as a scalar)."""
        if self.kind == PRODUCT_FIELD:
            return ("e1", "e2")
        if self.kind == LOCAL_SQUARE_ZERO:
            return ("x", "y")
        return ()

    def describe(self) -> str:
        if self.kind == ZMOD:
            return f"Z/{self.p}^{self.k}" if self.k > 1 else f"Z/{self.p}"
        if self.kind == PRIME_FIELD:
            return f"F_{self.p}"
        if self.kind == PRODUCT_FIELD:
            return f"F_{self.p} x F_{self.p}"
        return f"F_{self.p}[x,y]/(x,y)^2"


def _p_exponent(p: int, d: int) -> int | None:
    """e with p^e == d, or None if d is not a power of p.  d=1 gives 0."""
    e = 0
    while d > 1:
        if d % p:
            return None
        d //= p
        e += 1
    return e


@dataclass(frozen=True)
class ModulePresentation:
    """Finite module given by cyclic orders and generator action matrices.

    orders may be empty (the zero module).  Matrix entry (i, j) lives mod
    orders[i]; validation checks the matrices are genuinely well defined,
    commute, and satisfy the defining relations of the ring kind.
    """

    ring: RingSpec
    orders: tuple[int, ...]
    actions: tuple[Matrix, ...] = ()
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.orders)
        for d in self.orders:
            e = _p_exponent(self.ring.p, d)
            if e is None or e < 1:
                raise SpecError(f"cyclic order {d} is not a positive power of p={self.ring.p}")
            if self.ring.kind == ZMOD and e > self.ring.k:
                raise SpecError(f"cyclic order {d} exceeds ring exponent p^{self.ring.k}")
            if self.ring.kind != ZMOD and d != self.ring.p:
                raise SpecError(f"cyclic order {d} must equal p={self.ring.p} over {self.ring.kind}")
        want = len(self.ring.generator_labels)
        if len(self.actions) != want:
            raise SpecError(f"{self.ring.kind} needs {want} action matrices, got {len(self.actions)}")
        for a in self.actions:
            if len(a) != n or any(len(row) != n for row in a):
                raise SpecError("action matrix shape does not match the number of cyclic factors")
            for i, row in enumerate(a):
                for j, v in enumerate(row):
                    if not (0 <= v < self.orders[i]):
                        raise SpecError(f"matrix entry {v} at ({i},{j}) not reduced mod {self.orders[i]}")
                    # well-definedness: the image of a torsion generator has to be torsion
                    if (self.orders[j] * v) % self.orders[i]:
                        raise SpecError(f"matrix entry at ({i},{j}) breaks order compatibility")
        self._check_relations()

    def _check_relations(self):
        acts = self.actions
        if not acts:
            return
        zero = tuple((0,) * len(self.orders) for _ in self.orders)
        ident = tuple(
            tuple(1 if i == j else 0 for j in range(len(self.orders))) for i in range(len(self.orders))
        )
        prod = _mat_mul_tuples
        eq = lambda a, b: _mats_congruent(self.orders, a, b)
        if not eq(prod(acts[0], acts[1]), prod(acts[1], acts[0])):
            raise SpecError("action matrices do not commute")
        if self.ring.kind == LOCAL_SQUARE_ZERO:
            x, y = acts
            for bad in (prod(x, x), prod(y, y), prod(x, y), prod(y, x)):
                if not eq(bad, zero):
                    raise SpecError("local_square_zero actions must square and multiply to zero")
        elif self.ring.kind == PRODUCT_FIELD:
            e1, e2 = acts
            if not eq(prod(e1, e1), e1) or not eq(prod(e2, e2), e2):
                raise SpecError("product_field selectors must be idempotent")
            if not eq(prod(e1, e2), zero):
                raise SpecError("product_field selectors must be orthogonal")
            summed = tuple(
                tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(e1, e2)
            )
            if not eq(summed, ident):
                raise SpecError("product_field selectors must sum to the identity")

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    def describe(self) -> str:
        if self.name:
            return self.name
        if not self.orders:
            return "0"
        if self.ring.kind in (ZMOD, PRIME_FIELD):
            return " (+) ".join(f"Z/{d}" for d in self.orders)
        return spec_string(self)


def _mat_mul_tuples(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][l] * b[l][j] for l in range(n)) for j in range(n)) for i in range(n)
    )


def _mats_congruent(orders: Sequence[int], a, b) -> bool:
    return all(
        (x - y) % d == 0
        for d, ra, rb in zip(orders, a, b)
        for x, y in zip(ra, rb)
    )


# ======================================================================
# element arithmetic on residue tuples
# ======================================================================


def zero_element(m: ModulePresentation) -> Element:
    return (0,) * len(m.orders)


def elements(m: ModulePresentation) -> Iterator[Element]:
    """All elements in mixed-radix order (last coordinate fastest); zero first."""
    return itertools.product(*(range(d) for d in m.orders))


def elem_add(m: ModulePresentation, x: Element, y: Element) -> Element:
    return tuple((a + b) % d for a, b, d in zip(x, y, m.orders))


def elem_neg(m: ModulePresentation, x: Element) -> Element:
    return tuple((-a) % d for a, d in zip(x, m.orders))


def elem_scale(m: ModulePresentation, c: int, x: Element) -> Element:
    return tuple((c * a) % d for a, d in zip(x, m.orders))


def mat_apply(m: ModulePresentation, mat: Matrix, x: Element) -> Element:
    return tuple(
        sum(mat[i][j] * x[j] for j in range(len(x))) % m.orders[i] for i in range(len(x))
    )


def module_action(m: ModulePresentation, gen: int, x: Element) -> Element:
    """Apply the gen-th ring generator.  For zmod, gen 0 is the scalar p."""
    if m.ring.kind == ZMOD:
        if gen != 0:
            raise ValueError("zmod has a single radical generator, the scalar p")
        return elem_scale(m, m.ring.p, x)
    if not m.actions:
        raise ValueError(f"{m.ring.kind} has no ring generators with matrix actions")
    return mat_apply(m, m.actions[gen], x)


def element_order(m: ModulePresentation, x: Element) -> int:
    return math.lcm(*(d // math.gcd(d, a) for a, d in zip(x, m.orders))) if x else 1


def composition_length(m: ModulePresentation) -> int:
    """Sum of p-exponents of the cyclic orders (= length over every supported ring)."""
    return sum(_p_exponent(m.ring.p, d) for d in m.orders)


def radical_maps(m: ModulePresentation):
    """The maps generating the radical action: scalar p for zmod, matrices otherwise."""
    if not m.ring.is_local:
        raise LocalityRequired(f"{m.ring.kind} is not local")
    if m.ring.kind == ZMOD:
        return (lambda x: elem_scale(m, m.ring.p, x),)
    if m.ring.kind == PRIME_FIELD:
        return ()
    return tuple((lambda x, a=a: mat_apply(m, a, x)) for a in m.actions)


def socle(m: ModulePresentation) -> frozenset[Element]:
    """Elements killed by every radical generator.  Local rings only."""
    maps = radical_maps(m)
    z = zero_element(m)
    return frozenset(x for x in elements(m) if all(f(x) == z for f in maps))


def is_semisimple(m: ModulePresentation) -> bool:
    if m.ring.kind == ZMOD:
        return all(d == m.ring.p for d in m.orders)
    if m.ring.kind in (PRIME_FIELD, PRODUCT_FIELD):
        return True
    return all(all(v == 0 for row in a for v in row) for a in m.actions)


def simple_multiplicities(m: ModulePresentation) -> tuple[int, ...]:
    """Multiplicity of each simple summand of a semisimple module.

    One simple module for the local kinds, two (the factor fields) for
    product_field.
    """
    if not is_semisimple(m):
        raise ValueError("module is not semisimple")
    if m.ring.kind == PRODUCT_FIELD:
        r1 = rank_mod_p(m.actions[0], m.ring.p)
        return (r1, len(m.orders) - r1)
    return (len(m.orders),)


def annihilator_profile(m: ModulePresentation) -> tuple[tuple[str, bool], ...]:
    """Which canonical ring elements kill the whole module, in a fixed order.

    Checked on the cyclic generators, which suffices since the actions are
    additive.
    """
    kind = m.ring.kind
    if kind == PRIME_FIELD:
        return ()
    if kind == ZMOD:
        out = []
        for j in range(1, m.ring.k + 1):
            q = m.ring.p ** j
            out.append((f"p^{j}", all(q % d == 0 for d in m.orders)))
        return tuple(out)
    labels = m.ring.generator_labels
    out = []
    for lab, a in zip(labels, m.actions):
        kills = all(v % m.orders[i] == 0 for i, row in enumerate(a) for v in row)
        out.append((lab, kills))
    return tuple(out)


def rank_mod_p(mat: Sequence[Sequence[int]], p: int) -> int:
    """Row rank of an integer matrix reduced mod p, by Gaussian elimination."""
    a = [[v % p for v in row] for row in mat]
    rank = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], -1, p)
        a[rank] = [(inv * v) % p for v in a[rank]]
        for r in range(len(a)):
            if r != rank and a[r][col]:
                c = a[r][col]
                a[r] = [(v - c * w) % p for v, w in zip(a[r], a[rank])]
        rank += 1
    return rank


# ======================================================================
# Smith normal form with tracked transforms
# ======================================================================


@dataclass(frozen=True)
class SnfResult:
    """diagonal = diag(left @ a @ right); transforms are unimodular."""

    diagonal: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _smith_with_transforms(mat: Sequence[Sequence[int]], nrows: int, ncols: int):
    """Full Smith reduction.

    Returns (diag, left, left_inv, right, right_inv) as lists, with
    left @ mat @ right diagonal, nonnegative, each entry dividing the next,
    zeros last.  All five are exact over Z.
    """
    a = [list(map(int, row)) for row in mat]
    assert len(a) == nrows and all(len(r) == ncols for r in a)
    left = _identity(nrows)
    left_inv = _identity(nrows)
    right = _identity(ncols)
    right_inv = _identity(ncols)

    def row_swap(i, j):
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]
        for r in left_inv:
            r[i], r[j] = r[j], r[i]

    def row_add(i, j, q):
        # row_i += q * row_j, inverse tracked as col_j -= q * col_i
        if q == 0:
            return
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
        left[i] = [x + q * y for x, y in zip(left[i], left[j])]
        for r in left_inv:
            r[j] -= q * r[i]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]
        for r in left_inv:
            r[i] = -r[i]

    def col_swap(i, j):
        if i == j:
            return
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]
        right_inv[i], right_inv[j] = right_inv[j], right_inv[i]

    def col_add(i, j, q):
        # col_i += q * col_j, inverse tracked as row_j -= q * row_i
        if q == 0:
            return
        for r in a:
            r[i] += q * r[j]
        for r in right:
            r[i] += q * r[j]
        right_inv[j] = [x - q * y for x, y in zip(right_inv[j], right_inv[i])]

    t = 0
    while t < min(nrows, ncols):
        best = None
        pi = pj = -1
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = a[i][j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    pi, pj = i, j
        if best is None:
            break
        row_swap(t, pi)
        col_swap(t, pj)
        while True:
            dirty = False
            for i in range(t + 1, nrows):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        # remainder became the smaller pivot; keep reducing
                        row_swap(i, t)
                        dirty = True
            for j in range(t + 1, ncols):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        col_swap(j, t)
                        dirty = True
            if dirty:
                continue
            if any(a[i][t] for i in range(t + 1, nrows)):
                continue
            if any(a[t][j] for j in range(t + 1, ncols)):
                continue
            d = a[t][t]
            bad_row = None
            for i in range(t + 1, nrows):
                if any(v % d for v in a[i][t + 1:]):
                    bad_row = i
                    break
            if bad_row is None:
                break
            # fold the offending row into the pivot row so the gcd shrinks
            row_add(t, bad_row, 1)
        if a[t][t] < 0:
            row_negate(t)
        t += 1
    diag = [a[i][i] for i in range(min(nrows, ncols))]
    return diag, left, left_inv, right, right_inv


def smith_normal_form(mat: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form of an integer matrix (all rows the same length)."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    diag, left, _, right, _ = _smith_with_transforms(mat, nrows, ncols)
    return SnfResult(
        diagonal=tuple(diag),
        left=tuple(tuple(r) for r in left),
        right=tuple(tuple(r) for r in right),
    )


def _mat_mul(a, b):
    if not a or not b:
        return [[] for _ in a]
    nr, mid, nc = len(a), len(b), len(b[0])
    out = [[0] * nc for _ in range(nr)]
    for i in range(nr):
        ai = a[i]
        oi = out[i]
        for l in range(mid):
            v = ai[l]
            if v:
                bl = b[l]
                for j in range(nc):
                    oi[j] += v * bl[j]
    return out


def kernel_basis(mat: Sequence[Sequence[int]], nrows: int, ncols: int) -> list[list[int]]:
    """Basis (as columns) of {v in Z^ncols : mat @ v = 0}."""
    diag, _, _, right, _ = _smith_with_transforms(mat, nrows, ncols)
    rank = sum(1 for d in diag if d)
    return [[right[r][c] for r in range(ncols)] for c in range(rank, ncols)]


def lattice_basis(columns: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """Independent basis columns of the lattice spanned by the given columns in Z^dim."""
    if not columns:
        return []
    mat = [[col[r] for col in columns] for r in range(dim)]
    diag, _, left_inv, _, _ = _smith_with_transforms(mat, dim, len(columns))
    out = []
    for t, d in enumerate(diag):
        if d:
            out.append([left_inv[r][t] * d for r in range(dim)])
    return out


def solve_exact(bmat: Sequence[Sequence[int]], emat: Sequence[Sequence[int]]) -> list[list[int]]:
    """X with bmat @ X == emat, for square nonsingular bmat; requires exact divisibility."""
    n = len(bmat)
    ncols = len(emat[0]) if emat else 0
    diag, left, _, right, _ = _smith_with_transforms(bmat, n, n)
    if any(d == 0 for d in diag):
        raise InternalInconsistency("singular matrix in exact solve")
    m1 = _mat_mul(left, [list(r) for r in emat])
    for t in range(n):
        d = diag[t]
        for j in range(ncols):
            if m1[t][j] % d:
                raise InternalInconsistency("exact solve hit a non-integral entry")
            m1[t][j] //= d
    return _mat_mul(right, m1)


def quotient_invariants(gen_columns: Sequence[Sequence[int]], moduli: Sequence[int]) -> list[int]:
    """Invariant factors (>1, ascending divisibility) of L / L0.

    L is the lattice in Z^T spanned by gen_columns together with the diagonal
    lattice L0 = diag(moduli) Z^T; the quotient is the finite abelian group of
    interest.  Standard change of basis: write L0 in a basis B of L, so
    L/L0 = Z^T / (B^-1 L0) and Smith gives the factors.
    """
    tdim = len(moduli)
    cols = [list(c) for c in gen_columns]
    for t in range(tdim):
        e = [0] * tdim
        e[t] = moduli[t]
        cols.append(e)
    basis = lattice_basis(cols, tdim)
    if len(basis) != tdim:
        raise InternalInconsistency("solution lattice is not full rank")
    bmat = [[basis[c][r] for c in range(tdim)] for r in range(tdim)]
    l0 = [[moduli[i] if i == j else 0 for j in range(tdim)] for i in range(tdim)]
    x = solve_exact(bmat, l0)
    diag, *_ = _smith_with_transforms(x, tdim, tdim)
    if any(d == 0 for d in diag):
        raise InternalInconsistency("quotient of full lattices came out infinite")
    return [abs(d) for d in diag if abs(d) > 1]


# ======================================================================
# constructors for the supported shapes
# ======================================================================


def zmod_module(p: int, k: int, exponents: Sequence[int], name: str | None = None) -> ModulePresentation:
    exps = tuple(sorted(exponents, reverse=True))
    if not exps:
        raise SpecError("zmod module needs at least one cyclic factor")
    if any(e < 1 or e > k for e in exps):
        raise SpecError(f"exponents must lie in 1..{k}")
    ring = RingSpec(ZMOD, p, k)
    return ModulePresentation(ring, tuple(p ** e for e in exps), (), name)


def field_module(p: int, dim: int, name: str | None = None) -> ModulePresentation:
    if dim < 1:
        raise SpecError("field module needs dim >= 1")
    return ModulePresentation(RingSpec(PRIME_FIELD, p), (p,) * dim, (), name)


def prod_module(p: int, mult: Sequence[int], name: str | None = None) -> ModulePresentation:
    m1, m2 = mult
    if m1 < 0 or m2 < 0 or m1 + m2 < 1:
        raise SpecError("product_field multiplicities must be nonnegative and not both zero")
    n = m1 + m2
    e1 = tuple(tuple(1 if i == j and i < m1 else 0 for j in range(n)) for i in range(n))
    e2 = tuple(tuple(1 if i == j and i >= m1 else 0 for j in range(n)) for i in range(n))
    return ModulePresentation(RingSpec(PRODUCT_FIELD, p), (p,) * n, (e1, e2), name)


def kxy_module(p: int, xmat: Sequence[Sequence[int]], ymat: Sequence[Sequence[int]],
               name: str | None = None) -> ModulePresentation:
    n = len(xmat)
    tupx = tuple(tuple(v % p for v in row) for row in xmat)
    tupy = tuple(tuple(v % p for v in row) for row in ymat)
    return ModulePresentation(RingSpec(LOCAL_SQUARE_ZERO, p), (p,) * n, (tupx, tupy), name)


def kxy_preset(p: int, preset: str) -> ModulePresentation:
    """The six standard small modules over F_p[x,y]/(x,y)^2.

    R is the regular module on basis (1, xbar, ybar); R/x means R/(x), the
    dim-2 quotient where y still acts; k is the residue field.
    """
    if preset == "k":
        return kxy_module(p, [[0]], [[0]], name="k")
    if preset == "k2":
        z = [[0, 0], [0, 0]]
        return kxy_module(p, z, z, name="k^2")
    if preset == "R/x":
        return kxy_module(p, [[0, 0], [0, 0]], [[0, 0], [1, 0]], name="R/(x)")
    if preset == "R/y":
        return kxy_module(p, [[0, 0], [1, 0]], [[0, 0], [0, 0]], name="R/(y)")
    if preset == "R/x+y":
        return kxy_module(p, [[0, 0], [1, 0]], [[0, 0], [p - 1, 0]], name="R/(x+y)")
    if preset == "R":
        x = [[0, 0, 0], [1, 0, 0], [0, 0, 0]]
        y = [[0, 0, 0], [0, 0, 0], [1, 0, 0]]
        return kxy_module(p, x, y, name="R")
    raise SpecError(f"unknown kxy preset {preset!r} (know {', '.join(KXY_PRESETS)})")


def direct_sum(a: ModulePresentation, b: ModulePresentation, name: str | None = None) -> ModulePresentation:
    """Block direct sum of two presentations over the same ring."""
    if a.ring != b.ring:
        raise SpecError("direct sum needs a common base ring")
    na, nb = len(a.orders), len(b.orders)
    acts = []
    for ma, mb in zip(a.actions, b.actions):
        rows = [tuple(ma[i]) + (0,) * nb for i in range(na)]
        rows += [(0,) * na + tuple(mb[i]) for i in range(nb)]
        acts.append(tuple(rows))
    return ModulePresentation(a.ring, a.orders + b.orders, tuple(acts), name)


# ======================================================================
# module spec grammar
# ======================================================================

_KNOWN_KEYS = {
    "zmod": {"p", "k", "type"},
    "field": {"p", "dim"},
    "prod": {"p", "mult"},
    "kxy": {"p", "preset", "dim", "X", "Y"},
}


def _split_top_level(text: str) -> list[str]:
    """Split on commas that are not nested inside brackets."""
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise SpecError(f"unbalanced brackets in {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise SpecError(f"unbalanced brackets in {text!r}")
    parts.append("".join(cur))
    return parts


def parse_module_spec(text: str, caps: Caps = DEFAULT_CAPS) -> ModulePresentation:
    """Parse 'kind:key=value,...' into a validated presentation.

    Examples: zmod:p=2,k=2,type=[2,1]  field:p=3,dim=2  prod:p=2,mult=[1,1]
    kxy:p=2,preset=R/x  kxy:p=2,dim=2,X=[[0,0],[1,0]],Y=[[0,0],[0,0]]
    """
    text = text.strip()
    if ":" not in text:
        raise SpecError(f"module spec {text!r} lacks a 'kind:' prefix")
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    if kind not in _KNOWN_KEYS:
        raise SpecError(f"unknown module kind {kind!r} (know {', '.join(_KNOWN_KEYS)})")
    kv = {}
    for part in _split_top_level(rest):
        if "=" not in part:
            raise SpecError(f"expected key=value, got {part!r}")
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in _KNOWN_KEYS[kind]:
            raise SpecError(f"unknown key {key!r} for kind {kind!r}")
        if key in kv:
            raise SpecError(f"duplicate key {key!r}")
        kv[key] = val.strip()
    if "p" not in kv:
        raise SpecError("every module spec needs p=<prime>")

    def intval(key):
        try:
            return int(kv[key])
        except ValueError:
            raise SpecError(f"{key} must be an integer, got {kv[key]!r}") from None

    def listval(key):
        try:
            v = literal_eval(kv[key])
        except (ValueError, SyntaxError):
            raise SpecError(f"could not parse {key}={kv[key]!r}") from None
        if not isinstance(v, list):
            raise SpecError(f"{key} must be a bracketed list")
        return v

    p = intval("p")
    if kind == "zmod":
        if "k" not in kv or "type" not in kv:
            raise SpecError("zmod needs k=<int> and type=[exponents]")
        mod = zmod_module(p, intval("k"), listval("type"))
    elif kind == "field":
        if "dim" not in kv:
            raise SpecError("field needs dim=<int>")
        mod = field_module(p, intval("dim"))
    elif kind == "prod":
        if "mult" not in kv:
            raise SpecError("prod needs mult=[m1,m2]")
        mult = listval("mult")
        if len(mult) != 2:
            raise SpecError("mult must have exactly two entries")
        mod = prod_module(p, mult)
    else:
        if "preset" in kv:
            if "dim" in kv or "X" in kv or "Y" in kv:
                raise SpecError("kxy preset and explicit matrices are mutually exclusive")
            mod = kxy_preset(p, kv["preset"])
        else:
            if not {"dim", "X", "Y"} <= kv.keys():
                raise SpecError("kxy needs either preset=... or dim=, X=, Y=")
            dim = intval("dim")
            x, y = listval("X"), listval("Y")
            if len(x) != dim or len(y) != dim:
                raise SpecError("matrix sizes must match dim")
            mod = kxy_module(p, x, y)
    if mod.size > caps.max_module_order:
        raise CapExceeded(f"|M| = {mod.size} exceeds the module order cap {caps.max_module_order}")
    return mod


def _fmt_matrix(mat: Matrix) -> str:
    return "[" + ",".join("[" + ",".join(str(v) for v in row) + "]" for row in mat) + "]"


def spec_string(m: ModulePresentation) -> str:
    """Canonical spec string that parses back to an equal presentation."""
    ring = m.ring
    if ring.kind == ZMOD:
        exps = sorted((_p_exponent(ring.p, d) for d in m.orders), reverse=True)
        return f"zmod:p={ring.p},k={ring.k},type=[{','.join(map(str, exps))}]"
    if ring.kind == PRIME_FIELD:
        return f"field:p={ring.p},dim={len(m.orders)}"
    if ring.kind == PRODUCT_FIELD:
        r1 = rank_mod_p(m.actions[0], ring.p)
        return f"prod:p={ring.p},mult=[{r1},{len(m.orders) - r1}]"
    for preset in KXY_PRESETS:
        ref = kxy_preset(ring.p, preset)
        if ref.orders == m.orders and ref.actions == m.actions:
            return f"kxy:p={ring.p},preset={preset}"
    return (
        f"kxy:p={ring.p},dim={len(m.orders)},"
        f"X={_fmt_matrix(m.actions[0])},Y={_fmt_matrix(m.actions[1])}"
    )


# ======================================================================
# fast integer-encoded element engine
# ======================================================================

_ADD_TABLE_LIMIT = 1 << 21  # build a flat table when |M|^2 stays under this


class ModuleOps:
    """Per-module engine working on element indices instead of tuples.

    Index 0 is the zero element; indices enumerate elements() order.  Keeps
    a flat addition table for small modules, which is what makes join
    closure over hundreds of submodules affordable.
    """

    def __init__(self, m: ModulePresentation):
        self.module = m
        self.size = m.size
        self.tuples: list[Element] = list(elements(m))
        self.index: dict[Element, int] = {t: i for i, t in enumerate(self.tuples)}
        self._orders = m.orders
        if self.size * self.size <= _ADD_TABLE_LIMIT:
            size = self.size
            tups = self.tuples
            idx = self.index
            table = [0] * (size * size)
            for i in range(size):
                ti = tups[i]
                base = i * size
                for j in range(i, size):
                    s = idx[elem_add(m, ti, tups[j])]
                    table[base + j] = s
                    table[j * size + i] = s
            self._table = table
        else:
            self._table = None
        gens = []
        if m.ring.kind == ZMOD:
            gens.append([self.index[elem_scale(m, m.ring.p, t)] for t in self.tuples])
        else:
            for a in m.actions:
                gens.append([self.index[mat_apply(m, a, t)] for t in self.tuples])
        self.generator_maps = gens
        self.element_orders = [element_order(m, t) for t in self.tuples]

    def add(self, i: int, j: int) -> int:
        if self._table is not None:
            return self._table[i * self.size + j]
        return self.index[elem_add(self.module, self.tuples[i], self.tuples[j])]


@lru_cache(maxsize=32)
def ops_for(m: ModulePresentation) -> ModuleOps:
    return ModuleOps(m)
