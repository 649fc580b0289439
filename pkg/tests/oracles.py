"""Independent brute-force reference implementations.

Everything here recomputes answers from first principles (subset closure,
pointwise map checking) without touching the SNF-based solver paths, so
agreement between the two is meaningful evidence.
"""
from __future__ import annotations

import itertools

from homgraph import modcore
from homgraph.modcore import ModulePresentation


def _closure(m: ModulePresentation, seed) -> frozenset:
    """Additive-and-action closure of a set of elements."""
    zero = modcore.zero_element(m)
    current = set(seed) | {zero}
    frontier = list(current)
    while frontier:
        x = frontier.pop()
        nxt = []
        for y in list(current):
            nxt.append(modcore.elem_add(m, x, y))
        for gen in range(len(m.actions) or 0):
            nxt.append(modcore.module_action(m, gen, x))
        if m.ring.kind == modcore.ZMOD:
            nxt.append(modcore.elem_scale(m, m.ring.p, x))
        for z in nxt:
            if z not in current:
                current.add(z)
                frontier.append(z)
    return frozenset(current)


def brute_submodules(m: ModulePresentation) -> set[frozenset]:
    """Every submodule as an element set, found by closure growth."""
    zero = modcore.zero_element(m)
    found = {frozenset([zero])}
    frontier = [frozenset([zero])]
    all_elems = list(modcore.elements(m))
    while frontier:
        s = frontier.pop()
        for x in all_elems:
            if x in s:
                continue
            bigger = _closure(m, set(s) | {x})
            if bigger not in found:
                found.add(bigger)
                frontier.append(bigger)
    return found


def subset_filter_submodules(m: ModulePresentation) -> set[frozenset]:
    """Literal subset filter: every subset containing 0 that is closed
    under addition and the ring action.  Only sane for |M| <= 16."""
    elems = list(modcore.elements(m))
    zero = modcore.zero_element(m)
    rest = [x for x in elems if x != zero]
    out = set()
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            s = frozenset(combo) | {zero}
            closed = all(modcore.elem_add(m, x, y) in s for x in s for y in s)
            if closed:
                for gen in range(len(m.actions)):
                    closed = all(modcore.module_action(m, gen, x) in s for x in s)
                    if not closed:
                        break
            if closed and m.ring.kind == modcore.ZMOD:
                closed = all(modcore.elem_scale(m, m.ring.p, x) in s for x in s)
            if closed:
                out.add(s)
    return out


def brute_hom_count(a: ModulePresentation, b: ModulePresentation) -> int:
    """Number of module homomorphisms a -> b, checked pointwise.

    Every additive map is determined by generator images; candidates are
    accepted only if the induced table is additive and commutes with the
    ring action on every single element.  Exponential; keep |a|, |b| small.
    """
    elems_a = list(modcore.elements(a))
    elems_b = list(modcore.elements(b))
    rank = len(a.orders)
    count = 0
    for images in itertools.product(elems_b, repeat=rank):
        table = {}
        ok = True
        for x in elems_a:
            val = modcore.zero_element(b)
            for i, c in enumerate(x):
                val = modcore.elem_add(b, val, modcore.elem_scale(b, c, images[i]))
            table[x] = val
        for x in elems_a:
            for y in elems_a:
                s = modcore.elem_add(a, x, y)
                if table[s] != modcore.elem_add(b, table[x], table[y]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for gen in range(len(a.actions)):
                for x in elems_a:
                    if table[modcore.module_action(a, gen, x)] != \
                            modcore.module_action(b, gen, table[x]):
                        ok = False
                        break
                if not ok:
                    break
        if ok and a.ring.kind == modcore.ZMOD:
            for x in elems_a:
                if table[modcore.elem_scale(a, a.ring.p, x)] != \
                        modcore.elem_scale(b, b.ring.p, table[x]):
                    ok = False
                    break
        if ok:
            count += 1
    return count
