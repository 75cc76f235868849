"""Weighted block-graph realizations and per-block metric decompositions."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Mapping

import networkx as nx
import numpy as np

from .cutpoints import CutSystem, compute_cut_points
from .errors import RealizationCheckFailed
from .metric import Metric, PointMap

_INT64_SAFE = 1 << 55


@dataclass(frozen=True)
class RealizationGraph:
    """An edge-weighted graph whose shortest paths reproduce a metric.

    Vertices named after metric points are the labeled ones; the rest carry
    synthetic names v1, v2, ... and stand for interior cutpoints.  `maps`
    holds the cutpoint behind each vertex when the graph was built from a
    cut system (plain graphs may omit it).
    """

    names: tuple[str, ...]
    edges: tuple[tuple[str, str, Fraction], ...]
    labeled: tuple[str, ...]
    maps: Mapping[str, PointMap] | None = field(default=None, compare=False)

    @cached_property
    def adjacency(self) -> dict[str, dict[str, Fraction]]:
        adj: dict[str, dict[str, Fraction]] = {v: {} for v in self.names}
        for u, v, w in self.edges:
            adj[u][v] = w
            adj[v][u] = w
        return adj

    def weight(self, u: str, v: str) -> Fraction:
        return self.adjacency[u][v]

    def as_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.names)
        g.add_weighted_edges_from(self.edges)
        return g

    @cached_property
    def _int_weights(self) -> tuple[dict[str, list[tuple[str, int]]], int]:
        scale = lcm(*(w.denominator for _, _, w in self.edges)) if self.edges else 1
        adj: dict[str, list[tuple[str, int]]] = {v: [] for v in self.names}
        for u, v, w in self.edges:
            wi = int(w * scale)
            adj[u].append((v, wi))
            adj[v].append((u, wi))
        return adj, scale

    @cached_property
    def _dist_int(self) -> dict[str, dict[str, int]]:
        adj, _ = self._int_weights
        out = {}
        for src in self.names:
            dist = {src: 0}
            heap = [(0, src)]
            while heap:
                d, u = heapq.heappop(heap)
                if d > dist[u]:
                    continue
                for v, w in adj[u]:
                    nd = d + w
                    if v not in dist or nd < dist[v]:
                        dist[v] = nd
                        heapq.heappush(heap, (nd, v))
            out[src] = dist
        return out

    def distance(self, u: str, v: str) -> Fraction:
        _, scale = self._int_weights
        return Fraction(self._dist_int[u][v], scale)

    def shortest_path_lex(self, u: str, v: str) -> list[str]:
        """The lexicographically least shortest path, by vertex sequence.

        Greedy by next vertex name: any prefix of a lexicographically least
        shortest path extends to one, so local minimization is globally
        least.
        """
        adj, _ = self._int_weights
        dist = self._dist_int
        if v not in dist[u]:
            raise RealizationCheckFailed(f"{u} and {v} are disconnected")
        path = [u]
        cur = u
        while cur != v:
            cur = min(
                w for w, wt in adj[cur] if wt + dist[w][v] == dist[cur][v]
            )
            path.append(cur)
        return path


def _vertex_table(metric: Metric, cs: CutSystem):
    """Name every stored cutpoint; labels attach to the distance maps."""
    by_vector = {row: lab for lab, row in zip(metric.labels, metric.rows)}
    names, maps = [], {}
    counter = 0
    for rec in cs.cutpoints:
        lab = by_vector.get(rec.map.values)
        if lab is None:
            counter += 1
            lab = f"v{counter}"
        names.append(lab)
        maps[lab] = rec.map
    missing = set(metric.labels) - set(names)
    if missing:
        raise RealizationCheckFailed(f"no distance map stored for {sorted(missing)}")
    return tuple(names), maps


def build_block_realization(metric: Metric, cs: CutSystem) -> RealizationGraph:
    """Build the realization graph on the stored cutpoints.

    Vertices are the cutpoint maps with sup-norm distances.  Every vertex w
    with a disconnected support graph assigns each other vertex u a side:
    the stored component containing {x : u(x) < w(x)}, a set that is
    nonempty and never straddles two components (two components would give
    w(x) + w(y) = d(x, y) > u(x) + u(y), expelling u from the distance
    polytope).  u and v are joined exactly when no third vertex puts them
    on different sides.  All defining properties of a block realization are
    then verified; any violation raises RealizationCheckFailed.
    """
    names, maps = _vertex_table(metric, cs)
    m = len(names)
    denom = lcm(*(
        v.denominator for name in names for v in maps[name].values
    ))
    vals = [
        [int(v * denom) for v in maps[name].values] for name in names
    ]
    biggest = max((abs(v) for row in vals for v in row), default=0)
    dtype = np.int64 if biggest < _INT64_SAFE else object
    V = np.array(vals, dtype=dtype)

    dv = np.zeros((m, m), dtype=dtype)
    for i in range(m):
        if i + 1 < m:
            dv[i, i + 1 :] = np.abs(V[i + 1 :] - V[i][None, :]).max(axis=1)
            dv[i + 1 :, i] = dv[i, i + 1 :]

    lab_pos = {lab: j for j, lab in enumerate(metric.labels)}
    adj = np.ones((m, m), dtype=bool)
    np.fill_diagonal(adj, False)
    others = np.arange(m)
    for wi, wrec in enumerate(cs.cutpoints):
        if len(wrec.components) < 2:
            continue
        comp_of = np.full(metric.n, -1, dtype=np.int64)
        for ci, comp in enumerate(wrec.components):
            for lab in comp:
                comp_of[lab_pos[lab]] = ci
        below = (V < V[wi][None, :]).astype(bool)
        if not below.any(axis=1)[others != wi].all():
            raise RealizationCheckFailed(
                f"a stored map is not minimal relative to {names[wi]}"
            )
        side = comp_of[below.argmax(axis=1)]
        separated = side[:, None] != side[None, :]
        separated[wi, :] = False
        separated[:, wi] = False
        adj &= ~separated

    edges = []
    for i in range(m):
        for j in range(i + 1, m):
            if adj[i, j]:
                u, v = sorted((names[i], names[j]))
                edges.append((u, v, Fraction(int(dv[i, j]), denom)))
    graph = RealizationGraph(
        names=names,
        edges=tuple(sorted(edges)),
        labeled=metric.labels,
        maps=maps,
    )
    check_realization(metric, graph)
    return graph


def check_realization(metric: Metric, graph: RealizationGraph) -> None:
    """Verify every defining property of a block realization, or raise."""
    for u, v, w in graph.edges:
        if w <= 0:
            raise RealizationCheckFailed(f"edge {u}-{v} has weight {w}")
    reachable = set(graph._dist_int[graph.names[0]]) if graph.names else set()
    if reachable != set(graph.names):
        raise RealizationCheckFailed("graph is not connected")
    for x in metric.labels:
        if x not in graph.adjacency:
            raise RealizationCheckFailed(f"label {x} has no vertex")
    for i, x in enumerate(metric.labels):
        for y in metric.labels[i + 1 :]:
            got = graph.distance(x, y)
            if got != metric.d(x, y):
                raise RealizationCheckFailed(
                    f"graph distance {x}-{y} is {got}, metric says {metric.d(x, y)}"
                )
    blocks, cuts = blocks_and_cut_vertices(graph)
    for block in blocks:
        members = sorted(block)
        for i, u in enumerate(members):
            for v in members[i + 1 :]:
                if v not in graph.adjacency[u]:
                    raise RealizationCheckFailed(
                        f"block {members} is not a clique: {u}-{v} missing"
                    )
                if graph.weight(u, v) != graph.distance(u, v):
                    raise RealizationCheckFailed(
                        f"edge {u}-{v} is longer than the path between them"
                    )
    labeled = set(graph.labeled)
    for v in graph.names:
        if v in labeled:
            continue
        if len(graph.adjacency[v]) < 3:
            raise RealizationCheckFailed(f"unlabeled vertex {v} has degree < 3")
        if v not in cuts:
            raise RealizationCheckFailed(f"unlabeled vertex {v} is not a cut vertex")


def blocks_and_cut_vertices(
    graph: RealizationGraph,
) -> tuple[tuple[frozenset[str], ...], frozenset[str]]:
    """Biconnected components (bridges included as 2-sets) and cut vertices."""
    g = graph.as_networkx()
    blocks = sorted(
        (frozenset(b) for b in nx.biconnected_components(g)),
        key=lambda b: sorted(b),
    )
    cuts = frozenset(nx.articulation_points(g))
    return tuple(blocks), cuts


def block_metric(metric: Metric, graph: RealizationGraph, block: frozenset[str]):
    """The contribution of one block to all pairwise distances.

    Entry (x, y) sums the weights of the edges with both endpoints in the
    block along a shortest x-y path; the canonical lexicographically least
    path is used, and path independence is asserted separately on small
    instances.
    """
    rows = []
    for x in metric.labels:
        row = []
        for y in metric.labels:
            if x == y:
                row.append(Fraction(0))
                continue
            path = graph.shortest_path_lex(x, y)
            total = Fraction(0)
            for u, v in zip(path, path[1:]):
                if u in block and v in block:
                    total += graph.weight(u, v)
            row.append(total)
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class BlockDecomposition:
    """The metric written as an exact sum of one pseudometric per block."""

    blocks: tuple[frozenset[str], ...]
    matrices: tuple[tuple[tuple[Fraction, ...], ...], ...]
    bridges: tuple[bool, ...]
    graph: RealizationGraph


def decompose(metric: Metric, cs: CutSystem | None = None) -> BlockDecomposition:
    """Split the metric into its per-block contributions, which sum back
    to it exactly (verified; a mismatch raises RealizationCheckFailed)."""
    if cs is None:
        cs = compute_cut_points(metric)
    graph = build_block_realization(metric, cs)
    blocks, _ = blocks_and_cut_vertices(graph)
    owner: dict[frozenset[str], int] = {}
    for bi, block in enumerate(blocks):
        members = sorted(block)
        for i, u in enumerate(members):
            for v in members[i + 1 :]:
                if v in graph.adjacency[u]:
                    owner[frozenset((u, v))] = bi

    n = metric.n
    zero = Fraction(0)
    sums = [[[zero] * n for _ in range(n)] for _ in blocks]
    for i, x in enumerate(metric.labels):
        for j in range(i + 1, n):
            y = metric.labels[j]
            path = graph.shortest_path_lex(x, y)
            for u, v in zip(path, path[1:]):
                bi = owner[frozenset((u, v))]
                sums[bi][i][j] += graph.weight(u, v)
                sums[bi][j][i] = sums[bi][i][j]

    matrices = tuple(tuple(tuple(row) for row in mat) for mat in sums)
    for i in range(n):
        for j in range(n):
            total = sum((mat[i][j] for mat in matrices), start=zero)
            if total != metric.rows[i][j]:
                raise RealizationCheckFailed(
                    f"block contributions for ({metric.labels[i]},{metric.labels[j]}) "
                    f"sum to {total}, metric says {metric.rows[i][j]}"
                )
    bridges = tuple(len(b) == 2 for b in blocks)
    return BlockDecomposition(blocks, matrices, bridges, graph)
