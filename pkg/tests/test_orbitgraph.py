import itertools

import numpy as np
import pytest

from shellcodes.errors import CapExceeded, MalformedFile
from shellcodes.orbitgraph import (CompatibilityGraph, admissible_orbits, build_graph, cached_build_graph,
                                   cache_key, cross_compatible, cross_max, graph_from_weights)
from shellcodes.shellgeom import ShellId
from shellcodes.symgroup import builtin_family, full_group, partition_orbits, trivial_group


def naive_graph(table, t):
    """Every pair of vectors checked directly."""
    ok = []
    for i, orb in enumerate(table.orbits):
        m = table.members(i)
        g = m @ m.T
        np.fill_diagonal(g, -10**9)
        if orb.size == 1 or g.max() <= t:
            ok.append(i)
    adj = {}
    for a, b in itertools.combinations(range(len(ok)), 2):
        adj[a, b] = int((table.members(ok[a]) @ table.members(ok[b]).T).max()) <= t
    return ok, adj


@pytest.mark.parametrize("group", [builtin_family("s", 5, 0, "negacyclic"), builtin_family("p", 5, 1, "cyclic"),
                                   full_group(5)])
@pytest.mark.parametrize("k, t", [(3, 1), (4, 2), (5, 0), (6, -1)])
def test_graph_matches_naive(group, k, t):
    table = partition_orbits(ShellId(5, k), group)
    graph = build_graph(table, t)
    ok, adj = naive_graph(table, t)
    assert [v.orbit_index for v in graph.vertices] == ok
    assert [v.weight for v in graph.vertices] == [table.orbits[i].size for i in ok]
    for (a, b), edge in adj.items():
        assert graph.has_edge(a, b) == edge == graph.has_edge(b, a)


def test_cross_max_is_symmetric():
    table = partition_orbits(ShellId(4, 5), builtin_family("s", 4, 0, "cyclic*pm"))
    for i, j in itertools.combinations(range(len(table)), 2):
        assert cross_max(table, i, j) == cross_max(table, j, i)
        assert cross_compatible(table, i, j, 1) == (cross_max(table, i, j) <= 1)
    with pytest.raises(ValueError):
        cross_compatible(table, 0, 0, 1)


def test_trivial_group_gives_vector_graph():
    table = partition_orbits(ShellId(3, 2), trivial_group(3))
    graph = build_graph(table, 0)
    assert len(graph) == 12
    assert all(v.weight == 1 for v in graph.vertices)


def test_inadmissible_orbits_dropped():
    # under the full group the (2,0,..) orbit contains antipodes but also parallel-free pairs with ip 0
    table = partition_orbits(ShellId(4, 4), full_group(4))
    assert all(v.internal_max_ip is None or v.internal_max_ip <= 0 for v in admissible_orbits(table, 0))
    assert len(admissible_orbits(table, 0)) < len(table)


def test_caps():
    table = partition_orbits(ShellId(5, 5), trivial_group(5))
    with pytest.raises(CapExceeded):
        build_graph(table, 2, vertex_cap=10)
    with pytest.raises(CapExceeded):
        build_graph(table, 2, pair_budget=100)


def test_dimacs_round_trip():
    table = partition_orbits(ShellId(6, 4), builtin_family("s", 6, 0, "negacyclic"))
    graph = build_graph(table, 2)
    text = graph.to_dimacs()
    assert text.startswith("c shell n=6 k=4 t=2")
    again = CompatibilityGraph.from_dimacs(text)
    assert again == graph
    assert again.edge_count == graph.edge_count


def test_dimacs_errors():
    with pytest.raises(MalformedFile):
        CompatibilityGraph.from_dimacs("n 1 3\n")
    with pytest.raises(MalformedFile):
        CompatibilityGraph.from_dimacs("p edge 2 1\ne 1 1\n")
    with pytest.raises(MalformedFile):
        CompatibilityGraph.from_dimacs("p edge 2 1\nx 1 2\n")


def test_graph_validation():
    with pytest.raises(ValueError):
        graph_from_weights([1, 2], [[False, True], [False, False]])


def test_cache(tmp_path):
    group = builtin_family("s", 5, 0, "negacyclic")
    table = partition_orbits(ShellId(5, 4), group)
    first = cached_build_graph(table, 1, cache_dir=tmp_path)
    files = list(tmp_path.iterdir())
    assert [f.name for f in files] == [f"graph-{cache_key(table.shell, group, 1)}.npz"]
    second = cached_build_graph(table, 1, cache_dir=tmp_path)
    assert first == second
    assert [v.representative for v in first.vertices] == [v.representative for v in second.vertices]
    assert cache_key(table.shell, group, 1) != cache_key(table.shell, group, 2)
