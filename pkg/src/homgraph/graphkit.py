"""Simple graphs on submodule lattices, plus the analyzers the claim suite needs.

Adjacency lives in bitmask rows, which keeps breadth-first sweeps and
partition refinement cheap even for the few-hundred-vertex graphs the bigger
zoos produce.  Vertices of a module graph are the proper submodules in
canonical label order, so vertex 0 is always the zero submodule.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import homcore, lattice as lattice_mod
from .errors import CapExceeded, InternalInconsistency, SpecError
from .modcore import Caps, DEFAULT_CAPS, ModulePresentation


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; adj[v] is the neighbor bitmask of vertex v."""

    labels: tuple[str, ...]
    orders: tuple[int, ...]
    adj: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> Iterator[int]:
        return _bits(self.adj[v])

    def edge_count(self) -> int:
        return sum(self.degree(v) for v in range(self.n)) // 2

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            rest = self.adj[u] >> (u + 1) << (u + 1)
            out.extend((u, v) for v in _bits(rest))
        return out

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   labels: Sequence[str] | None = None,
                   orders: Sequence[int] | None = None) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise SpecError(f"bad edge ({u}, {v}) for {n} vertices")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        labs = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        ords = tuple(orders) if orders is not None else (0,) * n
        if len(labs) != n or len(ords) != n:
            raise SpecError("labels/orders length must match the vertex count")
        return cls(labs, ords, tuple(adj))


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def build_graph(m: ModulePresentation, lat: lattice_mod.SubmoduleLattice,
                caps: Caps = DEFAULT_CAPS) -> Graph:
    """The homomorphism submodule graph: proper submodules, edge iff
    Hom(N1, M/N2) or Hom(N2, M/N1) is nonzero."""
    props = lat.proper_indices
    nodes = [lat.nodes[i] for i in props]
    subs = [homcore.present_submodule(m, nd) for nd in nodes]
    quots = [homcore.present_quotient(m, nd) for nd in nodes]
    t = len(nodes)
    adj = [0] * t
    for i in range(t):
        for j in range(i + 1, t):
            hit = (not homcore.hom_structure(subs[i], quots[j]).is_zero
                   or not homcore.hom_structure(subs[j], quots[i]).is_zero)
            if hit:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return Graph(
        labels=tuple(nd.label() for nd in nodes),
        orders=tuple(nd.order for nd in nodes),
        adj=tuple(adj),
    )


# ======================================================================
# structural analyzers
# ======================================================================


def is_complete(g: Graph) -> bool:
    full = (1 << g.n) - 1
    return all(g.adj[v] == full ^ (1 << v) for v in range(g.n))


def _bfs_dists(g: Graph, s: int) -> list[int]:
    dist = [-1] * g.n
    dist[s] = 0
    visited = 1 << s
    frontier = g.adj[s] & ~visited
    d = 1
    while frontier:
        for v in _bits(frontier):
            dist[v] = d
        visited |= frontier
        nxt = 0
        for v in _bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & ~visited
        d += 1
    return dist

def is_connected(g: Graph) -> bool:
    return all(d >= 0 for d in _bfs_dists(g, 0)) if g.n else True


def diameter(g: Graph) -> float:
    """Longest shortest-path distance; math.inf when disconnected."""
    best = 0
    for s in range(g.n):
        dist = _bfs_dists(g, s)
        if any(d < 0 for d in dist):
            return math.inf
        best = max(best, max(dist))
    return float(best)


def is_tree(g: Graph) -> bool:
    return is_connected(g) and g.edge_count() == g.n - 1


def is_regular(g: Graph) -> bool:
    degs = {g.degree(v) for v in range(g.n)}
    return len(degs) <= 1


def degree_sequence(g: Graph) -> tuple[int, ...]:
    return tuple(sorted((g.degree(v) for v in range(g.n)), reverse=True))


def universal_vertices(g: Graph) -> tuple[int, ...]:
    return tuple(v for v in range(g.n) if g.degree(v) == g.n - 1)


# ======================================================================
# chordality: lexicographic BFS, reverse order as elimination order
# ======================================================================


def lexbfs_order(g: Graph) -> list[int]:
    """Visit order of lexicographic BFS with smallest-index tie-breaking."""
    sequence: list[list[int]] = [list(range(g.n))]
    order: list[int] = []
    while sequence:
        cell = sequence[0]
        v = cell.pop(0)
        if not cell:
            sequence.pop(0)
        order.append(v)
        nxt: list[list[int]] = []
        for c in sequence:
            inside = [u for u in c if g.has_edge(v, u)]
            outside = [u for u in c if not g.has_edge(v, u)]
            if inside:
                nxt.append(inside)
            if outside:
                nxt.append(outside)
        sequence = nxt
    return order


def _peo_violation(g: Graph, elim: Sequence[int]):
    """None if elim is a perfect elimination order, else a witness triple."""
    pos = {v: i for i, v in enumerate(elim)}
    for i, v in enumerate(elim):
        later = [w for w in g.neighbors(v) if pos[w] > i]
        if not later:
            continue
        u = min(later, key=pos.__getitem__)
        for w in later:
            if w != u and not g.has_edge(u, w):
                return (v, u, w)
    return None


def _find_hole(g: Graph) -> tuple[int, ...] | None:
    """Some chordless cycle of length >= 4, or None.

    For each vertex v and non-adjacent pair u, w of its neighbors, a
    shortest u-w path avoiding the rest of N[v] closes an induced cycle
    through v.
    """
    for v in range(g.n):
        nb = list(g.neighbors(v))
        closed = g.adj[v] | (1 << v)
        for a in range(len(nb)):
            for b in range(a + 1, len(nb)):
                u, w = nb[a], nb[b]
                if g.has_edge(u, w):
                    continue
                allowed = (~closed) | (1 << u) | (1 << w)
                # BFS from u to w inside the allowed mask
                prev = {u: None}
                frontier = [u]
                found = False
                while frontier and not found:
                    nxt = []
                    for x in frontier:
                        for y in _bits(g.adj[x] & allowed):
                            if y not in prev:
                                prev[y] = x
                                if y == w:
                                    found = True
                                    break
                                nxt.append(y)
                        if found:
                            break
                    frontier = nxt
                if not found:
                    continue
                path = []
                cur: int | None = w
                while cur is not None:
                    path.append(cur)
                    cur = prev[cur]
                return tuple([v] + path[::-1])
    return None


def is_chordal(g: Graph) -> tuple[bool, tuple[int, ...]]:
    """(True, elimination order) or (False, vertices of an induced cycle >= 4)."""
    elim = lexbfs_order(g)[::-1]
    if _peo_violation(g, elim) is None:
        return True, tuple(elim)
    hole = _find_hole(g)
    if hole is None:
        raise InternalInconsistency("elimination order failed but no hole was found")
    return False, hole


# ======================================================================
# spectrum
# ======================================================================


@dataclass(frozen=True)
class SpectrumReport:
    """Adjacency eigenvalues sorted descending; partial means lambda_max only."""

    eigenvalues: tuple[float, ...]
    lambda_max: float
    tolerance: float
    partial: bool = False


def _adjacency_array(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=np.uint8)
    for u in range(g.n):
        for v in g.neighbors(u):
            a[u, v] = 1
    return a


def _power_lambda_max(g: Graph, tol: float, max_iter: int = 10000) -> float:
    if g.edge_count() == 0:
        return 0.0
    a = _adjacency_array(g)
    x = np.ones(g.n) / math.sqrt(g.n)
    prev = 0.0
    for _ in range(max_iter):
        # iterate A + I so bipartite eigenvalue ties cannot oscillate
        y = a @ x + x
        lam = float(x @ y)
        nrm = float(np.linalg.norm(y))
        if nrm == 0.0:
            return 0.0
        x = y / nrm
        if abs(lam - prev) <= tol * max(1.0, abs(lam)):
            return lam - 1.0
        prev = lam
    raise InternalInconsistency("power iteration did not converge within its budget")


def spectrum(g: Graph, caps: Caps = DEFAULT_CAPS, exact_complete: bool = True) -> SpectrumReport:
    """Eigenvalues of the adjacency matrix.

    Complete graphs take the closed form (n-1 once, -1 with multiplicity
    n-1).  Up to the spectrum cap a dense symmetric eigensolver runs; above
    it only lambda_max is estimated, flagged partial.
    """
    n = g.n
    tol = caps.tol
    if n == 0:
        return SpectrumReport((), 0.0, tol)
    if exact_complete and is_complete(g) and n >= 1:
        eig = (float(n - 1),) + (-1.0,) * (n - 1)
        return SpectrumReport(eig, float(n - 1) if n > 1 else 0.0, tol)
    if n > caps.max_spectrum:
        lam = _power_lambda_max(g, tol)
        return SpectrumReport((lam,), lam, tol, partial=True)
    vals = np.linalg.eigvalsh(_adjacency_array(g).astype(np.float64))
    eig = tuple(sorted((float(v) for v in vals), reverse=True))
    if abs(sum(eig)) > max(tol, 1e-9) * max(1, n):
        raise InternalInconsistency("eigenvalue sum strayed from the zero trace")
    return SpectrumReport(eig, eig[0], tol)


# ======================================================================
# isomorphism and vertex transitivity
# ======================================================================


def _refine_joint(g1: Graph, g2: Graph, c1: list[int], c2: list[int]):
    """Color refinement run jointly so palettes stay comparable."""
    while True:
        s1 = [(c1[v], tuple(sorted(c1[u] for u in g1.neighbors(v)))) for v in range(g1.n)]
        s2 = [(c2[v], tuple(sorted(c2[u] for u in g2.neighbors(v)))) for v in range(g2.n)]
        palette = {sig: i for i, sig in enumerate(sorted(set(s1) | set(s2)))}
        n1 = [palette[s] for s in s1]
        n2 = [palette[s] for s in s2]
        if n1 == c1 and n2 == c2:
            return c1, c2
        c1, c2 = n1, n2


def _class_histogram(colors: Sequence[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for c in colors:
        out[c] = out.get(c, 0) + 1
    return out


def _verify_mapping(g1: Graph, g2: Graph, mapping: Sequence[int]) -> bool:
    for v in range(g1.n):
        image = 0
        for u in g1.neighbors(v):
            image |= 1 << mapping[u]
        if image != g2.adj[mapping[v]]:
            return False
    return True


def _search_mapping(g1: Graph, g2: Graph, pins: dict[int, int], budget: list[int]):
    """Individualization-refinement search; returns a mapping list or None.

    Complete in both directions: every branch assigns one more vertex pair,
    and refinement only prunes when no isomorphism can respect the pins.
    """
    budget[0] -= 1
    if budget[0] < 0:
        raise CapExceeded("isomorphism search budget exhausted")
    base = g1.n
    c1 = [0] * g1.n
    c2 = [0] * g2.n
    for rank, (v, u) in enumerate(sorted(pins.items())):
        c1[v] = base + rank + 1
        c2[u] = base + rank + 1
    c1, c2 = _refine_joint(g1, g2, c1, c2)
    if _class_histogram(c1) != _class_histogram(c2):
        return None
    by_color: dict[int, list[int]] = {}
    for v in range(g1.n):
        by_color.setdefault(c1[v], []).append(v)
    split = None
    for color in sorted(by_color, key=lambda c: (len(by_color[c]), c)):
        if len(by_color[color]) > 1:
            split = color
            break
    if split is None:
        target = {c2[u]: u for u in range(g2.n)}
        mapping = [target[c1[v]] for v in range(g1.n)]
        return mapping if _verify_mapping(g1, g2, mapping) else None
    v = min(by_color[split])
    for u in sorted(u for u in range(g2.n) if c2[u] == split):
        nxt = dict(pins)
        nxt[v] = u
        res = _search_mapping(g1, g2, nxt, budget)
        if res is not None:
            return res
    return None


def are_isomorphic(g1: Graph, g2: Graph, caps: Caps = DEFAULT_CAPS):
    """(True, vertex mapping) or (False, distinguishing reason)."""
    if g1.n != g2.n:
        return False, ("vertex-count", g1.n, g2.n)
    if g1.edge_count() != g2.edge_count():
        return False, ("edge-count", g1.edge_count(), g2.edge_count())
    d1, d2 = degree_sequence(g1), degree_sequence(g2)
    if d1 != d2:
        return False, ("degree-sequence", d1, d2)
    if is_complete(g1) and is_complete(g2):
        return True, tuple(range(g1.n))
    if g1.n <= caps.max_spectrum:
        e1 = [round(v, 6) for v in spectrum(g1, caps).eigenvalues]
        e2 = [round(v, 6) for v in spectrum(g2, caps).eigenvalues]
        if e1 != e2:
            return False, ("spectrum", tuple(e1), tuple(e2))
    if g1.n > caps.max_iso_vertices:
        raise CapExceeded(f"{g1.n} vertices exceed the isomorphism cap {caps.max_iso_vertices}")
    mapping = _search_mapping(g1, g2, {}, [caps.iso_budget])
    if mapping is None:
        return False, ("search", "exhausted all candidate mappings")
    return True, tuple(mapping)


def is_vertex_transitive(g: Graph, caps: Caps = DEFAULT_CAPS) -> bool:
    """Whether the automorphism group moves vertex 0 onto every vertex."""
    if g.n <= 1:
        return True
    if is_complete(g) or g.edge_count() == 0:
        return True
    if g.n > caps.max_iso_vertices:
        raise CapExceeded(f"{g.n} vertices exceed the isomorphism cap {caps.max_iso_vertices}")
    degs = degree_sequence(g)
    if degs[0] != degs[-1]:
        return False
    for v in range(1, g.n):
        if _search_mapping(g, g, {0: v}, [caps.iso_budget]) is None:
            return False
    return True


# ======================================================================
# export
# ======================================================================


def graph_properties(g: Graph, caps: Caps = DEFAULT_CAPS) -> dict:
    """The analyzer summary used by both the JSON export and the CLI."""
    diam = diameter(g)
    chordal, _ = is_chordal(g)
    return {
        "complete": is_complete(g),
        "connected": is_connected(g),
        "diameter": None if math.isinf(diam) else int(diam),
        "tree": is_tree(g),
        "regular": is_regular(g),
        "chordal": chordal,
        "universal_vertices": list(universal_vertices(g)),
        "degree_sequence": list(degree_sequence(g)),
    }


def export_graph(g: Graph, fmt: str, caps: Caps = DEFAULT_CAPS) -> str:
    """Serialize as 'json' (vertices/edges/properties) or 'dot'."""
    if fmt == "json":
        doc = {
            "vertices": [
                {"id": i, "label": g.labels[i], "order": g.orders[i]} for i in range(g.n)
            ],
            "edges": [[u, v] for u, v in g.edges()],
            "properties": graph_properties(g, caps),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "dot":
        lines = ["graph G {"]
        for i in range(g.n):
            lines.append(f'  {i} [label="{g.labels[i]}"];')
        for u, v in g.edges():
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise SpecError(f"unknown export format {fmt!r} (know json, dot)")
