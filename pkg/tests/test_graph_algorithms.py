from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridctl.graph_algorithms import (BlockKind, BudgetExceeded, Multigraph,
                                      TargetClass, biconnected_components,
                                      is_cactus, is_forest, min_feedback_set,
                                      min_vertex_cover)

from conftest import ALL_CASES, get_case


def graph(edges, extra_vertices=()):
    vs = set(extra_vertices)
    for u, v in edges:
        vs.update((u, v))
    return Multigraph(vs, edges)


TRIANGLE = graph([(1, 2), (2, 3), (3, 1)])
PATH3 = graph([(1, 2), (2, 3)])
K4 = graph(list(combinations(range(4), 2)))
C5 = graph([(i, (i + 1) % 5) for i in range(5)])
TWO_TRIANGLES = graph([(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 3)])
PARALLEL = graph([(1, 2), (1, 2)])


# -- brute-force oracles -----------------------------------------------------

def components(vertices, edges):
    vs = set(vertices)
    adj = {v: set() for v in vs}
    for u, v in edges:
        if u in vs and v in vs:
            adj[u].add(v)
            adj[v].add(u)
    seen, comps = set(), []
    for s in vs:
        if s in seen:
            continue
        comp, stack = {s}, [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(comp)
    return comps


def brute_blocks(g: Multigraph):
    """Partition edges into blocks by the 'same cycle / bridge' relation,
    checked via vertex-removal connectivity enumeration."""
    # two edges are in one block iff they lie on a common cycle; compute via
    # equivalence closure of sharing a cycle; cycles enumerated by brute force
    n = len(g.edges)
    on_common_cycle = [[False] * n for _ in range(n)]
    for size in range(2, len(g.vertices) + 1):
        for vs in combinations(g.vertices, size):
            idx = [i for i, (u, v) in enumerate(g.edges) if u in vs and v in vs]
            # a cycle through exactly vs: every chosen vertex degree 2, connected
            for cyc in combinations(idx, size):
                deg = {v: 0 for v in vs}
                ok = True
                for i in cyc:
                    u, v = g.edges[i]
                    deg[u] += 1
                    deg[v] += 1
                if any(d != 2 for d in deg.values()):
                    ok = False
                if ok and len(components(vs, [g.edges[i] for i in cyc])) == 1:
                    for a in cyc:
                        for b in cyc:
                            on_common_cycle[a][b] = True
    # 2-cycles from parallel edges
    for a in range(n):
        for b in range(a + 1, n):
            if set(g.edges[a]) == set(g.edges[b]):
                on_common_cycle[a][b] = on_common_cycle[b][a] = True
    # union-find closure
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(n):
        for b in range(n):
            if on_common_cycle[a][b]:
                ra, rb = find(a), find(b)
                parent[ra] = rb
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), set()).add(i)
    return {frozenset(v) for v in groups.values()}


def brute_min_feedback(g: Multigraph, target: TargetClass) -> int:
    for size in range(len(g.vertices) + 1):
        for vs in combinations(g.vertices, size):
            if target.check(g.without_vertices(vs)):
                return size
    raise AssertionError("unreachable")


def brute_min_cover(g: Multigraph) -> int:
    edges = {(min(u, v), max(u, v)) for u, v in g.edges}
    for size in range(len(g.vertices) + 1):
        for vs in combinations(g.vertices, size):
            chosen = set(vs)
            if all(u in chosen or v in chosen for u, v in edges):
                return size
    raise AssertionError("unreachable")


# -- blocks ------------------------------------------------------------------

def test_triangle_is_one_cycle_block():
    d = biconnected_components(TRIANGLE)
    assert len(d.blocks) == 1
    assert d.blocks[0].kind is BlockKind.CYCLE
    assert not d.cutvertices


def test_path_has_two_single_edge_blocks():
    d = biconnected_components(PATH3)
    assert sorted(b.kind.value for b in d.blocks) == ["single-edge", "single-edge"]
    assert d.cutvertices == {2}


def test_two_triangles_sharing_a_vertex():
    d = biconnected_components(TWO_TRIANGLES)
    assert len(d.blocks) == 2
    assert all(b.kind is BlockKind.CYCLE for b in d.blocks)
    assert d.cutvertices == {3}
    assert {frozenset(b.edge_indices) for b in d.blocks} == brute_blocks(TWO_TRIANGLES)


def test_parallel_edges_form_2_cycle_block():
    d = biconnected_components(PARALLEL)
    assert len(d.blocks) == 1 and d.blocks[0].kind is BlockKind.CYCLE


def test_k4_is_complex():
    d = biconnected_components(K4)
    assert len(d.blocks) == 1 and d.blocks[0].kind is BlockKind.COMPLEX


def test_blocks_partition_edges_on_ieee_cases():
    for name in ALL_CASES:
        grid = get_case(name)
        g = Multigraph(grid.buses, grid.edges())
        d = biconnected_components(g)
        counts = [0] * len(g.edges)
        vs_union = set()
        for b in d.blocks:
            vs_union |= b.vertices
            for i in b.edge_indices:
                counts[i] += 1
        assert all(c == 1 for c in counts)
        non_isolated = {v for v in g.vertices if g.degree(v) > 0}
        assert vs_union == non_isolated


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=12))
def test_blocks_match_brute_force_on_random_graphs(pairs):
    edges = [(u, v) for u, v in pairs if u != v]
    if not edges:
        return
    g = graph(edges)
    mine = {frozenset(b.edge_indices) for b in biconnected_components(g).blocks}
    assert mine == brute_blocks(g)


# -- forest / cactus ---------------------------------------------------------

def test_tree_is_forest_and_cactus():
    t = graph([(1, 2), (2, 3), (2, 4)])
    assert is_forest(t) and is_cactus(t)


def test_triangle_not_forest_but_cactus():
    assert not is_forest(TRIANGLE)
    assert is_cactus(TRIANGLE)


def test_k4_neither():
    # K4 has edges on two cycles: verified by the brute-force block oracle
    assert not is_forest(K4) and not is_cactus(K4)
    assert brute_blocks(K4) == {frozenset(range(6))}


def test_parallel_pair_cactus_but_not_forest():
    assert not is_forest(PARALLEL) and is_cactus(PARALLEL)


# -- feedback sets -----------------------------------------------------------

def test_triangle_feedback_sizes():
    assert len(min_feedback_set(TRIANGLE, TargetClass.FOREST).vertices) == 1
    assert len(min_feedback_set(TRIANGLE, TargetClass.CACTUS).vertices) == 0


def test_k4_forest_feedback_is_2():
    res = min_feedback_set(K4, TargetClass.FOREST)
    assert len(res.vertices) == brute_min_feedback(K4, TargetClass.FOREST) == 2


def test_feedback_self_certifies():
    for g in (K4, TWO_TRIANGLES, C5, PARALLEL):
        for target in TargetClass:
            res = min_feedback_set(g, target)
            assert target.check(g.without_vertices(res.vertices))


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        min_feedback_set(K4, TargetClass.FOREST, budget=1)


def test_forest_feedback_at_least_cactus_feedback():
    for g in (K4, TWO_TRIANGLES, C5, TRIANGLE, PARALLEL):
        f = min_feedback_set(g, TargetClass.FOREST)
        c = min_feedback_set(g, TargetClass.CACTUS)
        assert len(f.vertices) >= len(c.vertices)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), min_size=1, max_size=14))
def test_feedback_exactness_on_random_graphs(pairs):
    edges = [(u, v) for u, v in pairs if u != v]
    if not edges:
        return
    g = graph(edges)
    for target in TargetClass:
        res = min_feedback_set(g, target)
        assert res.optimal
        assert len(res.vertices) == brute_min_feedback(g, target)
        assert target.check(g.without_vertices(res.vertices))


# -- vertex cover ------------------------------------------------------------

def test_single_edge_cover():
    assert len(min_vertex_cover(graph([(1, 2)])).vertices) == 1


def test_star_cover_is_center():
    star = graph([(0, i) for i in range(1, 6)])
    assert min_vertex_cover(star).vertices == {0}


def test_c5_cover_is_3():
    res = min_vertex_cover(C5)
    assert len(res.vertices) == brute_min_cover(C5) == 3


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), min_size=1, max_size=14))
def test_cover_exactness_on_random_graphs(pairs):
    edges = [(u, v) for u, v in pairs if u != v]
    if not edges:
        return
    g = graph(edges)
    res = min_vertex_cover(g)
    assert len(res.vertices) == brute_min_cover(g)


def test_cover_dominates_feedback_on_ieee_cases():
    # removing a vertex cover leaves no edges at all, so certainly a forest
    for name in ALL_CASES:
        grid = get_case(name)
        g = Multigraph(grid.buses, grid.edges())
        vc = min_vertex_cover(g)
        fvs = min_feedback_set(g, TargetClass.FOREST)
        assert len(vc.vertices) >= len(fvs.vertices)
