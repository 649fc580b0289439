"""Submodule lattice enumeration against independent brute-force oracles."""
import pytest

from homgraph import lattice, modcore
from homgraph.errors import CapExceeded, LocalityRequired
from homgraph.modcore import Caps
from oracles import brute_submodules, subset_filter_submodules


Z42 = modcore.zmod_module(2, 2, (2, 1))


def test_known_counts():
    cases = [
        (modcore.zmod_module(2, 2, (2, 1)), 8),
        (modcore.zmod_module(2, 3, (3,)), 4),
        (modcore.field_module(2, 2), 5),
        (modcore.zmod_module(2, 1, (1, 1, 1)), 16),
        (modcore.kxy_preset(2, "R"), 6),
        (modcore.zmod_module(3, 2, (2,)), 3),
        (modcore.prod_module(2, (1, 1)), 4),
    ]
    for m, want in cases:
        lat = lattice.enumerate_submodules(m)
        assert len(lat.nodes) == want, m.describe()
        assert lat.t == want - 1


BATTERY = [
    modcore.zmod_module(2, 2, (2, 1)),
    modcore.zmod_module(2, 3, (3, 1)),
    modcore.zmod_module(2, 2, (2, 2)),
    modcore.zmod_module(3, 2, (2, 1)),
    modcore.field_module(2, 2),
    modcore.field_module(3, 2),
    modcore.field_module(2, 3),
    modcore.prod_module(2, (2, 1)),
    modcore.prod_module(3, (1, 1)),
    modcore.kxy_preset(2, "R"),
    modcore.kxy_preset(2, "R/x"),
    modcore.kxy_preset(2, "R/x+y"),
    modcore.kxy_preset(3, "R"),
]


@pytest.mark.parametrize("m", BATTERY, ids=lambda m: m.describe())
def test_nodes_match_brute_force(m):
    lat = lattice.enumerate_submodules(m)
    got = {node.element_set for node in lat.nodes}
    assert got == brute_submodules(m)


@pytest.mark.parametrize(
    "m",
    [m for m in BATTERY if m.size <= 16],
    ids=lambda m: m.describe(),
)
def test_nodes_match_subset_filter(m):
    lat = lattice.enumerate_submodules(m)
    got = {node.element_set for node in lat.nodes}
    assert got == subset_filter_submodules(m)


def test_node_ordering_and_top():
    lat = lattice.enumerate_submodules(Z42)
    assert lat.nodes[lat.zero_index].order == 1
    assert lat.nodes[lat.top_index].order == m_size(lat)
    assert lat.zero_index == 0
    assert lat.zero_index in lat.proper_indices
    assert lat.top_index not in lat.proper_indices


def m_size(lat):
    return lat.module.size


def test_leq_matches_subsets():
    for m in [Z42, modcore.kxy_preset(2, "R"), modcore.prod_module(2, (1, 1))]:
        lat = lattice.enumerate_submodules(m)
        n = len(lat.nodes)
        for i in range(n):
            for j in range(n):
                want = lat.nodes[i].element_set <= lat.nodes[j].element_set
                assert lat.is_leq(i, j) == want


def test_covers_atoms_maximal():
    lat = lattice.enumerate_submodules(Z42)
    at = lattice.atoms(lat)
    assert len(at) == 3
    assert all(lat.nodes[i].order == 2 for i in at)
    mx = lattice.maximal_submodules(lat)
    assert len(mx) == 3
    assert all(lat.nodes[i].order == 4 for i in mx)
    # covers of zero are exactly the atoms
    assert set(lattice.covers(lat, lat.zero_index)) == set(at)


def test_covers_are_minimal_strict_extensions():
    lat = lattice.enumerate_submodules(modcore.kxy_preset(2, "R"))
    for i in range(len(lat.nodes)):
        for j in lattice.covers(lat, i):
            assert lat.is_leq(i, j) and i != j
            between = [
                k for k in range(len(lat.nodes))
                if k not in (i, j) and lat.is_leq(i, k) and lat.is_leq(k, j)
            ]
            assert not between


def test_uniserial_detection():
    assert lattice.is_uniserial(lattice.enumerate_submodules(
        modcore.zmod_module(2, 3, (3,))))
    assert lattice.is_uniserial(lattice.enumerate_submodules(
        modcore.field_module(5, 1)))
    assert lattice.is_uniserial(lattice.enumerate_submodules(
        modcore.kxy_preset(2, "R/x")))
    assert not lattice.is_uniserial(lattice.enumerate_submodules(Z42))
    assert not lattice.is_uniserial(lattice.enumerate_submodules(
        modcore.field_module(2, 2)))
    assert not lattice.is_uniserial(lattice.enumerate_submodules(
        modcore.kxy_preset(2, "R")))


@pytest.mark.parametrize("m", BATTERY, ids=lambda m: m.describe())
def test_longest_chain_is_composition_length(m):
    lat = lattice.enumerate_submodules(m)
    assert lattice.longest_chain(lat) == modcore.composition_length(m)


def test_socle_node_matches_element_socle():
    for m in [Z42, modcore.zmod_module(2, 3, (3,)), modcore.kxy_preset(2, "R"),
              modcore.kxy_preset(2, "R/y")]:
        lat = lattice.enumerate_submodules(m)
        i = lattice.socle_node(lat)
        assert lat.nodes[i].element_set == modcore.socle(m)
    # semisimple: socle is the whole module
    lat = lattice.enumerate_submodules(modcore.field_module(2, 2))
    assert lattice.socle_node(lat) == lat.top_index


def test_socle_node_requires_local_ring():
    lat = lattice.enumerate_submodules(modcore.prod_module(2, (1, 1)))
    with pytest.raises(LocalityRequired):
        lattice.socle_node(lat)


def test_caps_enforced():
    with pytest.raises(CapExceeded):
        lattice.enumerate_submodules(Z42, Caps(max_module_order=4))
    with pytest.raises(CapExceeded):
        lattice.enumerate_submodules(
            modcore.zmod_module(2, 1, (1, 1, 1)), Caps(max_lattice_nodes=5))


def test_labels():
    lat = lattice.enumerate_submodules(Z42)
    assert lat.nodes[lat.zero_index].label() == "0"
    for node in lat.nodes[1:]:
        assert node.label().startswith("<")


def test_generators_generate():
    for m in [Z42, modcore.kxy_preset(2, "R"), modcore.prod_module(2, (2, 1))]:
        ops = modcore.ops_for(m)
        lat = lattice.enumerate_submodules(m)
        for node in lat.nodes:
            span = frozenset((0,))
            for g in node.generators:
                span = lattice._join(
                    ops, span, lattice.cyclic_submodule_set(ops, ops.index[g]))
            assert frozenset(ops.tuples[i] for i in span) == node.element_set
