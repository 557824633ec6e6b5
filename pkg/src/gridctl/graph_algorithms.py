"""Topology machinery: biconnected blocks, cactus/forest tests, feedback sets.

All algorithms work on undirected multigraphs; parallel edges between the same
pair of vertices form a 2-cycle (which a forest must not contain but a cactus
may). Feedback-set and vertex-cover searches are exact branch-and-bound up to
a configurable size threshold and fall back to a verified greedy heuristic
with a reported lower bound beyond it. Tie-breaks always prefer the lowest
vertex index, so results are deterministic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class BudgetExceeded(RuntimeError):
    """No feasible vertex set within the given budget."""


class Multigraph:
    """Undirected multigraph over integer vertices; edges indexed by position."""

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]]):
        self.vertices: tuple[int, ...] = tuple(sorted(set(vertices)))
        self.edges: tuple[tuple[int, int], ...] = tuple((u, v) for u, v in edges)
        vs = set(self.vertices)
        self._adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.vertices}
        for i, (u, v) in enumerate(self.edges):
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if u not in vs or v not in vs:
                raise ValueError(f"edge {u}-{v} references unknown vertex")
            self._adj[u].append((i, v))
            self._adj[v].append((i, u))

    def neighbors(self, v: int) -> list[tuple[int, int]]:
        """(edge index, other endpoint) pairs at v."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def without_vertices(self, removed: Iterable[int]) -> "Multigraph":
        gone = set(removed)
        return Multigraph(
            (v for v in self.vertices if v not in gone),
            ((u, v) for u, v in self.edges if u not in gone and v not in gone),
        )

    def __repr__(self):
        return f"Multigraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


class BlockKind(Enum):
    TRIVIAL = "trivial"
    SINGLE_EDGE = "single-edge"
    CYCLE = "cycle"
    COMPLEX = "complex"


@dataclass(frozen=True)
class Block:
    edge_indices: frozenset[int]
    vertices: frozenset[int]
    kind: BlockKind


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[Block, ...]
    cutvertices: frozenset[int]


def _classify(graph: Multigraph, edge_indices: frozenset[int], vertices: frozenset[int]) -> BlockKind:
    if len(edge_indices) == 1:
        return BlockKind.SINGLE_EDGE
    if len(edge_indices) != len(vertices):
        return BlockKind.COMPLEX
    deg: Counter = Counter()
    for i in edge_indices:
        u, v = graph.edges[i]
        deg[u] += 1
        deg[v] += 1
    if all(deg[v] == 2 for v in vertices):
        return BlockKind.CYCLE
    return BlockKind.COMPLEX


def _make_block(graph: Multigraph, edge_indices: Sequence[int]) -> Block:
    eset = frozenset(edge_indices)
    vs: set[int] = set()
    for i in eset:
        u, v = graph.edges[i]
        vs.add(u)
        vs.add(v)
    vset = frozenset(vs)
    return Block(eset, vset, _classify(graph, eset, vset))


def biconnected_components(graph: Multigraph) -> BlockDecomposition:
    """Block-cutvertex decomposition (iterative Hopcroft-Tarjan).

    Every edge lands in exactly one block; parallel edges between one pair
    form a 2-cycle block. Isolated vertices belong to no block.
    """
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[Block] = []
    cutvertices: set[int] = set()
    clock = 0

    for root in graph.vertices:
        if root in disc or graph.degree(root) == 0:
            continue
        disc[root] = low[root] = clock
        clock += 1
        # frame: [vertex, tree edge that reached it, neighbor cursor]
        frames: list[list] = [[root, -1, 0]]
        edge_stack: list[int] = []
        root_children = 0

        while frames:
            frame = frames[-1]
            v, parent_edge, cursor = frame
            nbrs = graph.neighbors(v)
            if cursor < len(nbrs):
                frame[2] += 1
                ei, w = nbrs[cursor]
                if ei == parent_edge:
                    continue
                if w not in disc:
                    edge_stack.append(ei)
                    disc[w] = low[w] = clock
                    clock += 1
                    if v == root:
                        root_children += 1
                    frames.append([w, ei, 0])
                elif disc[w] < disc[v]:
                    edge_stack.append(ei)
                    if disc[w] < low[v]:
                        low[v] = disc[w]
                continue
            frames.pop()
            if not frames:
                continue
            u = frames[-1][0]
            if low[v] < low[u]:
                low[u] = low[v]
            if low[v] >= disc[u]:
                members = []
                while True:
                    ei = edge_stack.pop()
                    members.append(ei)
                    if ei == parent_edge:
                        break
                blocks.append(_make_block(graph, members))
                if u != root or root_children > 1:
                    cutvertices.add(u)

    return BlockDecomposition(tuple(blocks), frozenset(cutvertices))


def is_forest(graph: Multigraph) -> bool:
    """True iff the graph has no cycle (parallel edges count as a 2-cycle)."""
    return all(b.kind is BlockKind.SINGLE_EDGE for b in biconnected_components(graph).blocks)


def is_cactus(graph: Multigraph) -> bool:
    """True iff every edge lies on at most one cycle."""
    return all(b.kind is not BlockKind.COMPLEX for b in biconnected_components(graph).blocks)


class TargetClass(Enum):
    FOREST = "forest"
    CACTUS = "cactus"

    def check(self, graph: Multigraph) -> bool:
        return is_forest(graph) if self is TargetClass.FOREST else is_cactus(graph)


@dataclass(frozen=True)
class VertexSetResult:
    vertices: frozenset[int]
    optimal: bool
    lower_bound: int


# ---------------------------------------------------------------------------
# shortest cycles and obstructions
# ---------------------------------------------------------------------------


def _adjacency(graph: Multigraph, alive: set[int], banned_edges: frozenset[int] = frozenset()):
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in alive}
    for v in alive:
        for ei, w in graph.neighbors(v):
            if w in alive and ei not in banned_edges:
                adj[v].append((ei, w))
    return adj


def _shortest_cycle(graph: Multigraph, alive: set[int]) -> list[int] | None:
    """Vertex list of a shortest cycle in the induced subgraph, or None."""
    # parallel pair = 2-cycle
    best: list[int] | None = None
    for v in sorted(alive):
        seen: Counter = Counter()
        for ei, w in graph.neighbors(v):
            if w in alive and w > v:
                seen[w] += 1
        for w, k in sorted(seen.items()):
            if k >= 2:
                return [v, w]
    adj = _adjacency(graph, alive)
    for src in sorted(alive):
        dist = {src: 0}
        parent: dict[int, tuple[int, int]] = {}
        queue = [src]
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            if best is not None and dist[x] + 1 >= len(best):
                break
            for ei, y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = (ei, x)
                    queue.append(y)
                elif (parent.get(x, (None, None))[0] != ei
                      and parent.get(y, (None, None))[0] != ei
                      and dist[y] >= dist[x]):
                    # non-tree edge; root paths in a BFS tree meet in a common
                    # suffix, so cutting both at the first shared vertex gives
                    # a simple cycle
                    px = _path_to_root(parent, x)
                    py_set = _path_to_root(parent, y)
                    in_py = {t: i for i, t in enumerate(py_set)}
                    cut_x = next(i for i, t in enumerate(px) if t in in_py)
                    cut_y = in_py[px[cut_x]]
                    cycle = px[:cut_x + 1] + py_set[:cut_y][::-1]
                    if len(cycle) >= 2 and (best is None or len(cycle) < len(best)):
                        best = cycle
        if best is not None and len(best) <= 3:
            break
    return best


def _path_to_root(parent: dict[int, tuple[int, int]], v: int) -> list[int]:
    path = [v]
    while path[-1] in parent:
        path.append(parent[path[-1]][1])
    return path


def _bfs_path(adj, src: int, dst: int) -> list[int] | None:
    if src == dst:
        return [src]
    prev = {src: None}
    queue = [src]
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for _ei, y in adj[x]:
            if y not in prev:
                prev[y] = x
                if y == dst:
                    path = [y]
                    while path[-1] != src:
                        path.append(prev[path[-1]])
                    return path[::-1]
                queue.append(y)
    return None


def _cactus_obstruction(graph: Multigraph, alive: set[int]) -> list[int] | None:
    """Vertices of two cycles sharing an edge, or None if already a cactus."""
    sub = graph.without_vertices(set(graph.vertices) - alive)
    decomp = biconnected_components(sub)
    complex_blocks = [b for b in decomp.blocks if b.kind is BlockKind.COMPLEX]
    if not complex_blocks:
        return None
    block = min(complex_blocks, key=lambda b: min(b.vertices))
    block_alive = set(block.vertices)
    e0 = min(block.edge_indices)
    u, v = sub.edges[e0]
    adj1 = _adjacency(sub, block_alive, frozenset([e0]))
    path1 = _bfs_path(adj1, u, v)
    if path1 is None:  # e0 is a bridge inside the block: impossible for complex
        return None
    cycle1 = path1  # closing edge e0 implied
    cycle1_edges = set()
    for a, b in zip(path1, path1[1:]):
        for ei, w in sub.neighbors(a):
            if w == b and ei != e0:
                cycle1_edges.add(ei)
                break
    for g in sorted(cycle1_edges):
        adj2 = _adjacency(sub, block_alive, frozenset([e0, g]))
        path2 = _bfs_path(adj2, u, v)
        if path2 is not None:
            return sorted(set(cycle1) | set(path2))
    # parallel copy of e0 gives a second cycle [u, v]
    for ei, w in sub.neighbors(u):
        if w == v and ei != e0:
            return sorted(set(cycle1) | {u, v})
    return None


def _forest_obstruction(graph: Multigraph, alive: set[int]) -> list[int] | None:
    return _shortest_cycle(graph, alive)


def _obstruction(graph: Multigraph, alive: set[int], target: TargetClass) -> list[int] | None:
    if target is TargetClass.FOREST:
        return _forest_obstruction(graph, alive)
    return _cactus_obstruction(graph, alive)


def _packing_bound(graph: Multigraph, alive: set[int], target: TargetClass) -> int:
    """Greedy count of vertex-disjoint obstructions: a feedback-set lower bound."""
    rest = set(alive)
    count = 0
    while True:
        obs = _obstruction(graph, rest, target)
        if obs is None:
            return count
        count += 1
        rest -= set(obs)


# ---------------------------------------------------------------------------
# feedback sets
# ---------------------------------------------------------------------------


def _greedy_feedback(graph: Multigraph, alive: set[int], target: TargetClass,
                     forbidden: frozenset[int] = frozenset()) -> set[int] | None:
    """Feedback set by repeatedly deleting the busiest obstruction vertex."""
    rest = set(alive)
    picked: set[int] = set()
    while True:
        obs = _obstruction(graph, rest, target)
        if obs is None:
            break
        candidates = [v for v in obs if v not in forbidden]
        if not candidates:
            return None
        choice = max(candidates, key=lambda v: (sum(1 for _e, w in graph.neighbors(v) if w in rest), -v))
        picked.add(choice)
        rest.discard(choice)
    # drop redundant picks, lowest index first
    for v in sorted(picked):
        without = picked - {v}
        if _obstruction(graph, set(alive) - without, target) is None:
            picked = without
    return picked


def min_feedback_set(graph: Multigraph, target: TargetClass,
                     budget: int | None = None,
                     exact_threshold: int = 150) -> VertexSetResult:
    """Smallest vertex set whose removal puts the graph in the target class.

    Exact branch-and-bound when |V| <= exact_threshold, otherwise greedy with
    a packing lower bound. The returned set is always re-verified against the
    target class. Raises BudgetExceeded when a budget is given and no feasible
    set within it exists.
    """
    alive = set(graph.vertices)
    exact = len(alive) <= exact_threshold

    greedy = _greedy_feedback(graph, alive, target)
    assert greedy is not None
    best: set[int] = set(greedy)

    lower = _packing_bound(graph, alive, target)
    if exact and len(best) > lower:
        best = _branch_and_bound_feedback(graph, alive, target, best)
        lower = len(best)

    assert target.check(graph.without_vertices(best)), "feedback verifier failed"
    if budget is not None and len(best) > budget:
        if exact:
            raise BudgetExceeded(f"minimum {target.value} feedback set has size {len(best)} > {budget}")
        raise BudgetExceeded(f"no {target.value} feedback set within budget {budget} found")
    return VertexSetResult(frozenset(best), exact, lower if not exact else len(best))


def _branch_and_bound_feedback(graph: Multigraph, alive: set[int],
                               target: TargetClass, incumbent: set[int]) -> set[int]:
    best = set(incumbent)
    # stack of (chosen, forbidden); explored depth-first, deterministic order
    stack: list[tuple[set[int], frozenset[int]]] = [(set(), frozenset())]
    while stack:
        chosen, forbidden = stack.pop()
        if len(chosen) >= len(best):
            continue
        rest = alive - chosen
        obs = _obstruction(graph, rest, target)
        if obs is None:
            best = set(chosen)
            continue
        if len(chosen) + 1 >= len(best):
            continue
        bound = len(chosen) + _packing_bound(graph, rest, target)
        if bound >= len(best):
            continue
        # branch: first obstruction vertex picked is obs[i]; obs[:i] stay out
        children = []
        banned: list[int] = []
        for v in obs:
            if v not in forbidden:
                children.append((chosen | {v}, forbidden | frozenset(banned)))
            banned.append(v)
        stack.extend(reversed(children))
    return best


# ---------------------------------------------------------------------------
# vertex cover
# ---------------------------------------------------------------------------


def _cover_edges(graph: Multigraph) -> list[tuple[int, int]]:
    return sorted({(min(u, v), max(u, v)) for u, v in graph.edges})


def _greedy_cover(edges: list[tuple[int, int]]) -> set[int]:
    adj: dict[int, set[int]] = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    cover: set[int] = set()
    while any(adj.values()):
        v = max(sorted(adj), key=lambda x: len(adj[x]))
        cover.add(v)
        for w in adj.pop(v):
            adj[w].discard(v)
    for v in sorted(cover):  # trim redundancy
        trial = cover - {v}
        if all(u in trial or w in trial for u, w in edges):
            cover = trial
    return cover


def _matching_bound(edges: list[tuple[int, int]], banned: set[int]) -> int:
    used: set[int] = set()
    count = 0
    for u, v in edges:
        if u in banned or v in banned:
            continue
        if u not in used and v not in used:
            used.add(u)
            used.add(v)
            count += 1
    return count


def min_vertex_cover(graph: Multigraph, budget: int | None = None,
                     exact_threshold: int = 150) -> VertexSetResult:
    """Minimum vertex cover; exact branch-and-bound below the size threshold.

    The result is verified: every edge has a covered endpoint.
    """
    edges = _cover_edges(graph)
    best = _greedy_cover(edges)
    exact = len(graph.vertices) <= exact_threshold
    lower = _matching_bound(edges, set())

    if exact and len(best) > lower:
        best = _branch_and_bound_cover(edges, best)
        lower = len(best)

    assert all(u in best or v in best for u, v in edges), "cover verifier failed"
    if budget is not None and len(best) > budget:
        raise BudgetExceeded(f"vertex cover needs {len(best)} > budget {budget}")
    return VertexSetResult(frozenset(best), exact, lower if not exact else len(best))


def _branch_and_bound_cover(edges: list[tuple[int, int]], incumbent: set[int]) -> set[int]:
    best = set(incumbent)
    stack: list[tuple[frozenset[int], frozenset[int]]] = [(frozenset(), frozenset())]
    adj_full: dict[int, set[int]] = {}
    for u, v in edges:
        adj_full.setdefault(u, set()).add(v)
        adj_full.setdefault(v, set()).add(u)

    while stack:
        chosen, excluded = stack.pop()
        if len(chosen) >= len(best):
            continue
        chosen = set(chosen)
        # reductions: an excluded vertex forces all its uncovered neighbors in
        changed = True
        dead = False
        while changed:
            changed = False
            for v in sorted(excluded):
                for w in adj_full[v]:
                    if w in chosen:
                        continue
                    if w in excluded:
                        dead = True
                        break
                    chosen.add(w)
                    changed = True
                if dead:
                    break
            if dead or len(chosen) >= len(best):
                dead = True
                break
        if dead:
            continue
        open_edges = [(u, v) for u, v in edges if u not in chosen and v not in chosen]
        if not open_edges:
            best = set(chosen)
            continue
        if len(chosen) + _matching_bound(open_edges, set()) >= len(best):
            continue
        deg: Counter = Counter()
        for u, v in open_edges:
            deg[u] += 1
            deg[v] += 1
        v = max(sorted(deg), key=lambda x: deg[x])
        stack.append((frozenset(chosen), frozenset(excluded | {v})))
        stack.append((frozenset(chosen | {v}), frozenset(excluded)))
    return best
