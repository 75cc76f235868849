"""Brute-force reference implementations, instance generators and checkers.

Everything here recomputes from definitions: splits are re-tested with
freshly chosen anchors, support graphs are rebuilt from scratch, endpoint
maps are evaluated per coordinate.  The fast engine is validated against
these on small instances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from ._intkernel import cross_additive, vd_point
from .cutpoints import CutpointRecord, CutSystem, _labelled_record, compute_cut_points
from .errors import CapExceeded
from .metric import (
    Classification,
    Metric,
    PointMap,
    classify_cutstar,
    gamma_graph,
    is_in_tight_span,
    kuratowski_map,
    validate_metric,
    virtual_distance,
)
from .realization import BlockDecomposition
from .splits import BlockSplitRecord, Split, are_compatible, split_map


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: str | None = None


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)


def _lex_least(indices, labels):
    return min(indices, key=lambda i: labels[i])


def brute_force_block_splits(metric: Metric, cap: int = 16) -> frozenset[BlockSplitRecord]:
    """Test every one of the 2^(n-1) - 1 splits against the definition."""
    n = metric.n
    if n > cap:
        raise CapExceeded(n, cap)
    mat, scale = metric.scaled
    labels = metric.labels
    out = []
    for mask in range(1, 1 << (n - 1)):
        bset = [i + 1 for i in range(n - 1) if (mask >> i) & 1]
        in_b = set(bset)
        aset = [i for i in range(n) if i not in in_b]
        a0 = _lex_least(aset, labels)
        b0 = _lex_least(bset, labels)
        if not cross_additive(mat, aset, bset, a0, b0):
            continue
        va = vd_point(mat, a0, bset)
        vb = vd_point(mat, b0, aset)
        alpha = va + vb - int(mat[a0][b0])
        if alpha <= 0:
            continue
        out.append(
            _labelled_record(
                labels[a0], labels[b0], va, vb, alpha, scale,
                frozenset(labels[i] for i in aset),
                frozenset(labels[i] for i in bset),
            )
        )
    return frozenset(out)


def split_witness_map(metric: Metric, split: Split) -> PointMap:
    """The midpoint witness candidate of a split, built unconditionally.

    For a genuine block split its strict-slack graph is exactly the two
    side cliques with full support; for anything else that property fails,
    which makes this the definitional block-split test.
    """
    a0, b0 = min(split.side_a), min(split.side_b)
    va = virtual_distance(metric, kuratowski_map(metric, a0), split.side_b)
    vb = virtual_distance(metric, kuratowski_map(metric, b0), split.side_a)
    alpha = va + vb - metric.d(a0, b0)
    values = []
    for lab in metric.labels:
        k = kuratowski_map(metric, lab)
        if lab in split.side_a:
            values.append(virtual_distance(metric, k, split.side_b) - alpha / 2)
        else:
            values.append(virtual_distance(metric, k, split.side_a) - alpha / 2)
    return PointMap(metric.labels, tuple(values))


def _vd_int(rows, x, idx):
    """Definitional virtual distance on rescaled integer rows."""
    rx = rows[x]
    best = None
    for i, y in enumerate(idx):
        ry = rows[y]
        vy = rx[y]
        for z in idx[i:]:
            t = vy + rx[z] - ry[z]
            if best is None or t < best:
                best = t
    return best // 2


def _cross_int(rows, aset, bset, a0, b0):
    ra0, rb0 = rows[a0], rows[b0]
    base = ra0[b0]
    for a in aset:
        ra = rows[a]
        for b in bset:
            if base + ra[b] != ra0[b] + ra[b0]:
                return False
    return True


def _tight_int(rows, vals, k):
    for i in range(k):
        ri = rows[i]
        if vals[i] != max(ri[j] - vals[j] for j in range(k)):
            return False
    return True


def _gamma_int(rows, vals, k):
    """Support-graph components and clique flags, rebuilt from scratch."""
    sup = [i for i in range(k) if vals[i] != 0]
    adj = {i: [] for i in sup}
    for p, i in enumerate(sup):
        ri = rows[i]
        vi = vals[i]
        for j in sup[p + 1 :]:
            if vi + vals[j] > ri[j]:
                adj[i].append(j)
                adj[j].append(i)
    comps, flags = [], []
    seen = set()
    for i in sup:
        if i in seen:
            continue
        comp = {i}
        stack = [i]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in comp:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        comps.append(sorted(comp))
        deg = sum(len(adj[u]) for u in comp)
        flags.append(deg == len(comp) * (len(comp) - 1))
    return comps, flags


def _classify_int(rows, vals, k):
    if not _tight_int(rows, vals, k):
        return "not_in_tight_span"
    comps, flags = _gamma_int(rows, vals, k)
    if len(comps) >= 2:
        full = sum(len(c) for c in comps) == k
        if full and len(comps) == 2 and all(flags):
            return "two_cliques_full_support"
        return "interior_cutpoint"
    if any(vals == tuple(rows[y][:k]) for y in range(k)):
        return "kuratowski"
    return "connected"


def reference_cut_points(metric: Metric, cap: int = 16) -> CutSystem:
    """The growth recursion executed naively, with no incremental state.

    Every candidate split is re-tested from its definition with freshly
    chosen anchors, every support graph is rebuilt from scratch, and every
    extended map is classified honestly (minimality included).  One factor
    of n slower than the engine, by design.
    """
    n = metric.n
    if n > cap:
        raise CapExceeded(n, cap)
    mat, scale = metric.scaled
    rows = [[int(v) for v in row] for row in mat.tolist()]
    labels = metric.labels

    maps = {(0,)}
    splits: list[tuple[list[int], list[int], int, int, int, int]] = []
    for k in range(2, n + 1):
        x = k - 1
        candidates = [(sorted(a + [x]), b) for a, b, *_ in splits]
        candidates += [(a, sorted(b + [x])) for a, b, *_ in splits]
        candidates.append(([x], list(range(k - 1))))
        new_splits = []
        for aset, bset in candidates:
            a0 = _lex_least(aset, labels)
            b0 = _lex_least(bset, labels)
            if not _cross_int(rows, aset, bset, a0, b0):
                continue
            va = _vd_int(rows, a0, bset)
            vb = _vd_int(rows, b0, aset)
            if va + vb - rows[a0][b0] > 0:
                new_splits.append((aset, bset, a0, b0, va, vb))

        new_maps = set()
        for aset, bset, a0, b0, va, vb in new_splits:
            alpha = va + vb - rows[a0][b0]
            fa = [0] * k
            fb = [0] * k
            for a in aset:
                v = _vd_int(rows, a, bset)
                fa[a] = v - alpha
                fb[a] = v
            for b in bset:
                v = _vd_int(rows, b, aset)
                fa[b] = v
                fb[b] = v - alpha
            new_maps.add(tuple(fa))
            new_maps.add(tuple(fb))
        rx = rows[x]
        for prev in maps:
            fx = max(rx[y] - prev[y] for y in range(k - 1))
            vals = prev + (fx,)
            if _classify_int(rows, vals, k) == "interior_cutpoint":
                new_maps.add(vals)
        for y in range(k):
            new_maps.add(tuple(rows[y][:k]))
        maps = new_maps
        splits = new_splits

    records = []
    for aset, bset, a0, b0, va, vb in splits:
        alpha = va + vb - rows[a0][b0]
        records.append(
            _labelled_record(
                labels[a0], labels[b0], va, vb, alpha, scale,
                frozenset(labels[i] for i in aset),
                frozenset(labels[i] for i in bset),
            )
        )
    records.sort(key=lambda rec: (sorted(rec.split.side_a), sorted(rec.split.side_b)))

    points = []
    for vals in sorted(maps):
        comps, flags = _gamma_int(rows, vals, n)
        comp_labels = tuple(frozenset(labels[i] for i in c) for c in comps)
        kind = Classification(_classify_int(rows, vals, n))
        pm = PointMap(labels, tuple(Fraction(v, scale) for v in vals))
        points.append(CutpointRecord(pm, kind, comp_labels, tuple(flags)))
    return CutSystem(metric, tuple(points), tuple(records))


def verify_cut_system(metric: Metric, cs: CutSystem, cap: int = 10) -> VerificationReport:
    """Re-derive every promised property of an engine output from scratch."""
    checks: list[CheckResult] = []
    n = metric.n

    def add(name, passed, witness=None):
        checks.append(CheckResult(name, bool(passed), witness))

    bad = next((r for r in cs.cutpoints if not is_in_tight_span(metric, r.map)), None)
    add("tight_span_membership", bad is None, bad and f"map {bad.map.values}")

    bad = None
    for r in cs.cutpoints:
        g = gamma_graph(metric, r.map)
        if set(g.components) != set(r.components) or dict(
            zip(g.components, g.clique_flags)
        ) != dict(zip(r.components, r.clique_flags)):
            bad = f"metadata of {r.map.values}"
            break
    add("support_graph_metadata", bad is None, bad)

    bad = next(
        (
            r
            for r in cs.cutpoints
            if classify_cutstar(metric, r.map) is not r.kind
        ),
        None,
    )
    add("classification", bad is None, bad and f"map {bad.map.values} tagged {bad.kind}")

    vectors = cs.cutpoint_vectors
    missing = [x for x in metric.labels if kuratowski_map(metric, x).values not in vectors]
    add("kuratowski_complete", not missing, missing and f"distance maps of {missing}")

    bad = None
    for rec in cs.block_splits:
        ka = kuratowski_map(metric, rec.a_s)
        kb = kuratowski_map(metric, rec.b_s)
        if (
            rec.a_s not in rec.split.side_a
            or rec.b_s not in rec.split.side_b
            or rec.va != virtual_distance(metric, ka, rec.split.side_b)
            or rec.vb != virtual_distance(metric, kb, rec.split.side_a)
            or rec.alpha != rec.va + rec.vb - metric.d(rec.a_s, rec.b_s)
            or rec.alpha <= 0
        ):
            bad = f"record for {rec.split}"
            break
    add("record_consistency", bad is None, bad)

    bad = None
    for rec in cs.block_splits:
        fa = split_map(metric, rec, rec.alpha, Fraction(0))
        fb = split_map(metric, rec, Fraction(0), rec.alpha)
        if fa.values not in vectors or fb.values not in vectors:
            bad = f"endpoints of {rec.split}"
            break
    add("endpoint_closure", bad is None, bad)

    add(
        "split_count_bound",
        len(cs.block_splits) <= max(2 * n - 3, 0),
        f"{len(cs.block_splits)} splits on {n} points",
    )
    add(
        "cutpoint_count_bound",
        len(cs.cutpoints) <= max(4 * n - 5, 1),
        f"{len(cs.cutpoints)} cutpoints on {n} points",
    )

    bad = None
    recs = cs.block_splits
    for i, r1 in enumerate(recs):
        for r2 in recs[i + 1 :]:
            if not are_compatible(r1.split, r2.split):
                bad = f"{r1.split} vs {r2.split}"
                break
        if bad:
            break
    add("pairwise_compatibility", bad is None, bad)

    if n <= cap:
        expected = {r.split for r in brute_force_block_splits(metric, cap=cap)}
        got = cs.splits
        add(
            "split_completeness",
            got == expected,
            None if got == expected else f"difference {got ^ expected}",
        )
        ref = reference_cut_points(metric, cap=cap)
        add(
            "cutpoint_completeness",
            ref.cutpoint_vectors == vectors,
            None
            if ref.cutpoint_vectors == vectors
            else f"difference {sorted(ref.cutpoint_vectors ^ vectors)}",
        )
    else:
        add("split_completeness", True, f"skipped (n={n} > cap={cap})")
        add("cutpoint_completeness", True, f"skipped (n={n} > cap={cap})")
    return VerificationReport(tuple(checks))


def generate_block_instance(n: int, seed: int) -> Metric:
    """A random metric realized by a random tree of weighted cliques.

    Labels sit on every vertex that is not a cut vertex of degree >= 3;
    leftover label budget lands on random internal vertices.  When the
    graph has at least two blocks one of them is forced to be a bridge.
    Deterministic in (n, seed).
    """
    if n < 2:
        raise ValueError("need at least 2 points")
    rng = random.Random(1_000_003 * seed + n)
    den = rng.choice((1, 1, 2, 3, 4, 5, 10))

    for attempt in range(64):
        total = n if attempt >= 32 else n + rng.randint(0, n // 2)
        sizes = [rng.randint(2, min(5, total))]
        placed = sizes[0]
        while placed < total:
            want = 2 if len(sizes) == 1 else rng.randint(2, 5)
            size = min(want, total - placed + 1)
            sizes.append(size)
            placed += size - 1

        membership: list[list[int]] = []
        blocks: list[list[int]] = []
        edges: dict[tuple[int, int], int] = {}
        count = 0
        for bi, size in enumerate(sizes):
            if bi == 0:
                verts = list(range(size))
                count = size
            else:
                anchor = rng.randrange(count)
                verts = [anchor] + list(range(count, count + size - 1))
                count += size - 1
            blocks.append(verts)
            low = rng.randint(1, 10)
            for i, u in enumerate(verts):
                for v in verts[i + 1 :]:
                    edges[(u, v)] = rng.randint(low, 2 * low)
        membership = [[] for _ in range(count)]
        for bi, verts in enumerate(blocks):
            for v in verts:
                membership[v].append(bi)
        degree = [0] * count
        for v in range(count):
            degree[v] = sum(len(blocks[bi]) - 1 for bi in membership[v])
        must = {
            v for v in range(count) if len(membership[v]) == 1 or degree[v] < 3
        }
        if len(must) <= n <= count:
            pool = sorted(set(range(count)) - must)
            chosen = sorted(must) + rng.sample(pool, n - len(must))
            chosen = sorted(chosen)
            break
    else:  # pragma: no cover - the total == n attempts always succeed
        raise RuntimeError("block instance generation failed")

    big = 1 << 40
    mat = np.full((count, count), big, dtype=np.int64)
    np.fill_diagonal(mat, 0)
    for (u, v), w in edges.items():
        mat[u, v] = min(mat[u, v], w)
        mat[v, u] = mat[u, v]
    for k in range(count):
        mat = np.minimum(mat, mat[:, k, None] + mat[None, k, :])

    width = max(2, len(str(n - 1)))
    labels = [f"x{i:0{width}d}" for i in range(n)]
    rows = [
        [Fraction(int(mat[u, v]), den) for v in chosen] for u in chosen
    ]
    return validate_metric(labels, rows)


def generate_random_metric(n: int, seed: int) -> Metric:
    """The shortest-path completion of a uniformly random weighted table."""
    if n < 1:
        raise ValueError("need at least 1 point")
    rng = random.Random(2_000_003 * seed + n)
    den = rng.choice((1, 1, 2, 3, 4, 5, 10))
    mat = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            mat[i, j] = mat[j, i] = rng.randint(1, 20)
    for k in range(n):
        mat = np.minimum(mat, mat[:, k, None] + mat[None, k, :])
    width = max(2, len(str(n - 1)))
    labels = [f"x{i:0{width}d}" for i in range(n)]
    rows = [[Fraction(int(mat[i, j]), den) for j in range(n)] for i in range(n)]
    return validate_metric(labels, rows)


def _canonical(cs: CutSystem):
    maps = frozenset(
        tuple(sorted(r.map.as_dict().items())) for r in cs.cutpoints
    )
    splits = frozenset(
        frozenset((s.side_a, s.side_b)) for s in cs.splits
    )
    return maps, splits


def permutation_harness(metric: Metric, trials: int, seed: int) -> VerificationReport:
    """Rerun the engine under random relabelings; the chosen growth order
    must never change the result as a set."""
    rng = random.Random(seed)
    base = _canonical(compute_cut_points(metric))
    checks = []
    for t in range(trials):
        perm = rng.sample(range(metric.n), metric.n)
        labels = tuple(metric.labels[i] for i in perm)
        rows = tuple(tuple(metric.rows[i][j] for j in perm) for i in perm)
        shuffled = Metric(labels, rows)
        same = _canonical(compute_cut_points(shuffled)) == base
        checks.append(
            CheckResult(
                f"relabeling_{t}",
                same,
                None if same else f"order {labels} changed the output",
            )
        )
    return VerificationReport(tuple(checks))


def decomposition_path_independent(
    metric: Metric, dec: BlockDecomposition, cap: int = 8
) -> CheckResult:
    """Recompute every block contribution along every shortest path.

    Exponential in the worst case, so capped; the decomposition itself uses
    one canonical path per pair.
    """
    if metric.n > cap:
        return CheckResult("path_independence", True, f"skipped (n={metric.n} > cap={cap})")
    g = dec.graph.as_networkx()
    owner: dict[frozenset[str], int] = {}
    for bi, block in enumerate(dec.blocks):
        members = sorted(block)
        for i, u in enumerate(members):
            for v in members[i + 1 :]:
                if v in dec.graph.adjacency[u]:
                    owner[frozenset((u, v))] = bi
    for i, x in enumerate(metric.labels):
        for j in range(i + 1, metric.n):
            y = metric.labels[j]
            for path in nx.all_shortest_paths(g, x, y, weight="weight"):
                sums = [Fraction(0)] * len(dec.blocks)
                for u, v in zip(path, path[1:]):
                    sums[owner[frozenset((u, v))]] += dec.graph.weight(u, v)
                for bi, mat in enumerate(dec.matrices):
                    if sums[bi] != mat[i][j]:
                        return CheckResult(
                            "path_independence",
                            False,
                            f"pair ({x},{y}) via {path} gives {sums[bi]} "
                            f"for block {sorted(dec.blocks[bi])}, stored {mat[i][j]}",
                        )
    return CheckResult("path_independence", True)


def bridge_split_correspondence(metric: Metric, cs: CutSystem, dec: BlockDecomposition) -> CheckResult:
    """Each block split must appear as a bridge of weight alpha separating
    the labels accordingly, and vice versa."""
    g = dec.graph.as_networkx()
    bridges = [
        (sorted(b)[0], sorted(b)[1], bi)
        for bi, b in enumerate(dec.blocks)
        if dec.bridges[bi]
    ]
    if len(bridges) != len(cs.block_splits):
        return CheckResult(
            "bridge_split_correspondence",
            False,
            f"{len(bridges)} bridges vs {len(cs.block_splits)} block splits",
        )
    unmatched = {rec.split: rec.alpha for rec in cs.block_splits}
    for u, v, _bi in bridges:
        h = g.copy()
        h.remove_edge(u, v)
        comp = nx.node_connected_component(h, u)
        side = frozenset(x for x in metric.labels if x in comp)
        other = frozenset(metric.labels) - side
        if not side or not other:
            return CheckResult(
                "bridge_split_correspondence", False, f"bridge {u}-{v} separates no labels"
            )
        split = Split(side, other)
        alpha = unmatched.pop(split, None)
        if alpha is None:
            return CheckResult(
                "bridge_split_correspondence", False, f"bridge {u}-{v} matches no split"
            )
        if dec.graph.weight(u, v) != alpha:
            return CheckResult(
                "bridge_split_correspondence",
                False,
                f"bridge {u}-{v} weighs {dec.graph.weight(u, v)}, split has {alpha}",
            )
    if unmatched:
        return CheckResult(
            "bridge_split_correspondence", False, f"splits without bridges: {list(unmatched)}"
        )
    return CheckResult("bridge_split_correspondence", True)
