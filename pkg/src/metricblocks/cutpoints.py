"""Incremental computation of all retained cutpoints and block splits.

The engine grows the point set one label at a time (input order, last label
added last).  At each step the block splits of the smaller metric are
extended in O(n) apiece using their stored anchor 4-tuples, the previous
cutpoints are extended by one coordinate, and component/clique bookkeeping
is updated instead of recomputed, giving O(n^2) per step and O(n^3) overall.
All arithmetic happens on an integer rescaling of the metric, so results
are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from ._intkernel import (
    Components,
    cross_additive,
    half,
    polytope_ok,
    tight_span_ok,
    vd_point,
    vd_rows,
)
from .errors import UnknownPoint
from .metric import Classification, Metric, PointMap, SupportGraph
from .splits import BlockSplitRecord, Split


@dataclass(frozen=True)
class CutpointRecord:
    """One stored cutpoint with its support-graph metadata."""

    map: PointMap
    kind: Classification
    components: tuple[frozenset[str], ...]
    clique_flags: tuple[bool, ...]


@dataclass(frozen=True)
class CutSystem:
    """Everything the engine returns for one metric."""

    metric: Metric
    cutpoints: tuple[CutpointRecord, ...]
    block_splits: tuple[BlockSplitRecord, ...]

    @property
    def splits(self) -> frozenset[Split]:
        return frozenset(r.split for r in self.block_splits)

    @property
    def cutpoint_vectors(self) -> frozenset[tuple[Fraction, ...]]:
        return frozenset(r.map.values for r in self.cutpoints)

    @property
    def interior_cutpoints(self) -> tuple[CutpointRecord, ...]:
        return tuple(
            r for r in self.cutpoints if r.kind is Classification.INTERIOR_CUTPOINT
        )

    @property
    def kuratowski_cutpoints(self) -> tuple[CutpointRecord, ...]:
        return tuple(r for r in self.cutpoints if r.kind is Classification.KURATOWSKI)


class Dic:
    """Deduplicating dictionary keyed by exact value vectors."""

    def __init__(self):
        self._maps: dict[tuple, PointMap] = {}

    def insert(self, f: PointMap) -> bool:
        key = f.values
        if key in self._maps:
            return False
        self._maps[key] = f
        return True

    def __contains__(self, f: PointMap) -> bool:
        return f.values in self._maps

    def __len__(self) -> int:
        return len(self._maps)

    def maps(self) -> tuple[PointMap, ...]:
        return tuple(self._maps.values())


def dedup_insert(dic: Dic, f: PointMap) -> bool:
    """Insert with set semantics; True when the vector is new."""
    return dic.insert(f)


class _Rec:
    """Engine-internal block-split record on a prefix of the ground set."""

    __slots__ = ("aside", "bside", "a", "b", "va", "vb", "alpha", "fa", "ca", "fb", "cb")

    def __init__(self, aside, bside, a, b, va, vb, alpha):
        self.aside = aside
        self.bside = bside
        self.a = a
        self.b = b
        self.va = va
        self.vb = vb
        self.alpha = alpha
        self.fa = self.ca = self.fb = self.cb = None


class _Entry:
    __slots__ = ("vals", "comps", "kur")

    def __init__(self, vals, comps, kur=None):
        self.vals = vals
        self.comps = comps
        self.kur = kur


def _split_candidates(mat, x, recs, ground, fresh_b):
    """Yield accepted split extensions for the step that adds index `x`.

    `recs` holds (aside, bside, a, b, va, vb) tuples over `ground`; the
    result tuples carry (aside, bside, a, b, va, vb, alpha, parent, case,
    changed) where case is "a"/"b"/"fresh" and `changed` says whether the
    off-anchor virtual distance shrank (the endpoint graph then needs a
    rebuild instead of an extension).
    """
    rx = mat[x]
    out = []
    for pi, (aside, bside, a0, b0, va, vb) in enumerate(recs):
        ra0, rb0 = mat[a0], mat[b0]
        base = int(ra0[b0])
        # x joining the anchor-a side: new cross pairs are (x, b) for b in B
        if bool(np.all(ra0[bside] - rx[bside] == base - int(rx[b0]))):
            m = int((rb0[aside] - rx[aside]).min()) + int(rb0[x])
            vb2 = min(vb, half(min(m, 2 * int(rb0[x]))))
            alpha = va + vb2 - base
            if alpha > 0:
                out.append(
                    (np.append(aside, x), bside, a0, b0, va, vb2, alpha, pi, "a", vb2 < vb)
                )
        # x joining the anchor-b side
        if bool(np.all(rb0[aside] - rx[aside] == base - int(rx[a0]))):
            m = int((ra0[bside] - rx[bside]).min()) + int(ra0[x])
            va2 = min(va, half(min(m, 2 * int(ra0[x]))))
            alpha = va2 + vb - base
            if alpha > 0:
                out.append(
                    (aside, np.append(bside, x), a0, b0, va2, vb, alpha, pi, "b", va2 < va)
                )
    # the split isolating x; its cross condition is vacuous
    va = vd_point(mat, x, ground)
    vb = int(mat[fresh_b][x])
    alpha = va + vb - int(mat[x][fresh_b])
    if alpha > 0:
        out.append(
            (np.array([x], dtype=np.intp), ground, x, fresh_b, va, vb, alpha, None, "fresh", False)
        )
    return out


def _next_recs(mat, x, recs, kx_comps, fresh_b):
    """Extend the split records by index `x`, maintaining endpoint maps."""
    ground = np.arange(x, dtype=np.intp)
    lite = [(r.aside, r.bside, r.a, r.b, r.va, r.vb) for r in recs]
    out = []
    for aside, bside, a0, b0, va, vb, alpha, pi, case, changed in _split_candidates(
        mat, x, lite, ground, fresh_b
    ):
        rec = _Rec(aside, bside, a0, b0, va, vb, alpha)
        base = int(mat[a0][b0])
        rowx = mat[x, : x + 1]
        if case == "fresh":
            # one endpoint is the distance map of x itself
            rec.fa = mat[x, : x + 1]
            rec.ca = kx_comps.clone()
            fb = np.empty(x + 1, dtype=mat.dtype)
            fb[:x] = mat[x, :x] - alpha
            fb[x] = alpha
            rec.fb = fb
            rec.cb = Components.from_scratch(fb, mat[: x + 1, : x + 1])
        elif case == "a":
            parent = recs[pi]
            fbx = va - base + int(mat[x][b0])
            rec.fb = np.append(parent.fb, fbx)
            rec.cb = parent.cb.clone()
            rec.cb.add_vertex(rec.fb, rowx)
            if not changed:
                rec.fa = np.append(parent.fa, fbx - alpha)
                rec.ca = parent.ca.clone()
                rec.ca.add_vertex(rec.fa, rowx)
            else:
                # the tight pair on the b side moved: endpoint graph on the
                # old ground collapses to two cliques, then x is attached
                fa = np.empty(x + 1, dtype=mat.dtype)
                fa[aside] = (va - base - alpha) + mat[aside, b0]
                fa[bside] = (vb - base) + mat[a0, bside]
                rec.fa = fa
                rec.ca = Components.two_cliques(parent.aside, bside, x)
                rec.ca.add_vertex(fa, rowx)
        else:
            parent = recs[pi]
            fax = vb - base + int(mat[a0][x])
            rec.fa = np.append(parent.fa, fax)
            rec.ca = parent.ca.clone()
            rec.ca.add_vertex(rec.fa, rowx)
            if not changed:
                rec.fb = np.append(parent.fb, fax - alpha)
                rec.cb = parent.cb.clone()
                rec.cb.add_vertex(rec.fb, rowx)
            else:
                fb = np.empty(x + 1, dtype=mat.dtype)
                fb[aside] = (va - base) + mat[aside, b0]
                fb[bside] = (vb - base - alpha) + mat[a0, bside]
                rec.fb = fb
                rec.cb = Components.two_cliques(aside, parent.bside, x)
                rec.cb.add_vertex(fb, rowx)
        out.append(rec)
    return out


def _next_dic(mat, x, recs, prior, klin, key):
    new: dict = {}

    def insert(vals, comps, kur=None):
        k = key(vals)
        if k not in new:
            new[k] = _Entry(vals, comps, kur)
        elif kur is not None:
            new[k].kur = kur

    for rec in recs:
        insert(rec.fa, rec.ca.clone())
        insert(rec.fb, rec.cb.clone())

    rowx = mat[x, : x + 1]
    for entry in prior.values():
        if entry.kur is not None:
            # a distance map extends to the same point's distance map, which
            # the closing loop below reinserts; nothing to do here
            continue
        fx = int((mat[x, :x] - entry.vals).max())
        if fx < 0:
            raise AssertionError("extension left the distance polytope")
        vals = np.append(entry.vals, fx)
        comps = entry.comps  # prior stage's entries are consumed here
        comps.add_vertex(vals, rowx)
        if comps.n_components >= 2 and not comps.excluded_from_cutstar(x + 1):
            insert(vals, comps)

    for y in range(x + 1):
        insert(mat[y, : x + 1], klin[y], kur=y)
    return new


def compute_cut_points(metric: Metric, *, selfcheck: bool = False) -> CutSystem:
    """All retained cutpoints plus the block splits with their 4-tuples.

    The output is deterministic for a fixed label order, and as a set it is
    invariant under relabeling.  `selfcheck` re-derives every stored
    quantity from scratch after each growth step (quadratic per map; meant
    for small instances and debugging).
    """
    mat, scale = metric.scaled
    n = metric.n
    use_bytes = mat.dtype == np.int64

    def key(vals):
        return vals.tobytes() if use_bytes else tuple(int(v) for v in vals.tolist())

    klin = [Components.from_scratch(mat[0, :1], mat[:1, :1])]
    dic = {key(mat[0, :1]): _Entry(mat[0, :1], klin[0], kur=0)}
    recs: list[_Rec] = []
    lexmin = 0
    for x in range(1, n):
        rowx = mat[x, : x + 1]
        for y in range(x):
            klin[y].add_vertex(mat[y, : x + 1], rowx)
        klin.append(Components.from_scratch(mat[x, : x + 1], mat[: x + 1, : x + 1]))
        recs = _next_recs(mat, x, recs, klin[x], lexmin)
        dic = _next_dic(mat, x, recs, dic, klin, key)
        if metric.labels[x] < metric.labels[lexmin]:
            lexmin = x
        if selfcheck:
            _selfcheck_stage(metric, mat, x + 1, recs, dic)
    return _finish(metric, mat, scale, recs, dic)


def _finish(metric, mat, scale, recs, dic):
    labels = metric.labels
    n = metric.n
    points = []
    for entry in sorted(dic.values(), key=lambda e: tuple(e.vals.tolist())):
        comps, flags = entry.comps.to_label_components(labels)
        disconnected = entry.comps.n_components >= 2
        if disconnected and not entry.comps.excluded_from_cutstar(n):
            kind = Classification.INTERIOR_CUTPOINT
        elif entry.kur is not None:
            kind = Classification.KURATOWSKI
        else:
            raise AssertionError("engine stored a map that is not a cutpoint")
        pm = PointMap(labels, tuple(Fraction(int(v), scale) for v in entry.vals.tolist()))
        points.append(CutpointRecord(pm, kind, comps, flags))

    out_recs = [
        _labelled_record(
            labels[r.a], labels[r.b], r.va, r.vb, r.alpha, scale,
            frozenset(labels[int(i)] for i in r.aside),
            frozenset(labels[int(i)] for i in r.bside),
        )
        for r in recs
    ]
    out_recs.sort(key=lambda rec: (sorted(rec.split.side_a), sorted(rec.split.side_b)))
    return CutSystem(metric, tuple(points), tuple(out_recs))


def _labelled_record(a_s, b_s, va, vb, alpha, scale, side_a, side_b) -> BlockSplitRecord:
    """Package a scaled record, following the split's canonical orientation."""
    split = Split(side_a, side_b)
    if a_s not in split.side_a:
        a_s, b_s, va, vb = b_s, a_s, vb, va
    return BlockSplitRecord(
        split, a_s, b_s, Fraction(va, scale), Fraction(vb, scale), Fraction(alpha, scale)
    )


def _selfcheck_stage(metric, mat, k, recs, dic):
    sub = mat[:k, :k]
    if len(recs) > max(2 * k - 3, 0):
        raise AssertionError(f"{len(recs)} block splits on {k} points")
    if len(dic) > max(4 * k - 5, 1):
        raise AssertionError(f"{len(dic)} cutpoints on {k} points")
    for r in recs:
        if r.va != vd_point(mat, r.a, r.bside) or r.vb != vd_point(mat, r.b, r.aside):
            raise AssertionError("stored virtual distances drifted")
        if not cross_additive(mat, r.aside, r.bside, r.a, r.b):
            raise AssertionError("stored split is not additively separated")
        if r.alpha != r.va + r.vb - int(mat[r.a][r.b]) or r.alpha <= 0:
            raise AssertionError("stored isolation index drifted")
        for vals, comps, gamma in ((r.fa, r.ca, r.alpha), (r.fb, r.cb, 0)):
            expect = np.empty(k, dtype=mat.dtype)
            expect[r.aside] = np.array(vd_rows(mat, list(map(int, r.aside)), r.bside)) - gamma
            expect[r.bside] = np.array(vd_rows(mat, list(map(int, r.bside)), r.aside)) - (r.alpha - gamma)
            if not np.all(vals == expect):
                raise AssertionError("endpoint map drifted from its definition")
            _check_comps(vals, comps, sub)
    for entry in dic.values():
        _check_comps(entry.vals, entry.comps, sub)
        if not polytope_ok(sub, entry.vals):
            raise AssertionError("stored map left the distance polytope")
        if not tight_span_ok(sub, entry.vals):
            raise AssertionError("stored map is not minimal")


def _check_comps(vals, comps, sub):
    fresh = Components.from_scratch(vals, sub)
    if fresh.partition() != comps.partition():
        raise AssertionError("incremental components drifted from recomputation")


def _reordered(metric: Metric, labels: tuple[str, ...]) -> Metric:
    idx = [metric.index(lab) for lab in labels]
    rows = tuple(tuple(metric.rows[i][j] for j in idx) for i in idx)
    return Metric(labels, rows)


def extend_splits(
    metric: Metric, x: str, prior: Iterable[BlockSplitRecord]
) -> frozenset[BlockSplitRecord]:
    """One growth step of the split computation, exposed on label level.

    `prior` must be the complete block-split set of the metric restricted
    to everything but `x`; the result is the complete block-split set of
    the full metric.  Anchors are inherited from the prior records; the
    split isolating `x` gets fresh lexicographically-least anchors.
    """
    metric.index(x)
    order = tuple(lab for lab in metric.labels if lab != x) + (x,)
    perm = _reordered(metric, order)
    mat, scale = perm.scaled
    k = metric.n - 1
    lite = []
    for rec in prior:
        if rec.split.ground != set(order[:k]):
            raise ValueError("prior records must cover the metric minus x")
        aside = np.array(sorted(perm.index(p) for p in rec.split.side_of(rec.a_s)), dtype=np.intp)
        bside = np.array(sorted(perm.index(p) for p in rec.split.side_of(rec.b_s)), dtype=np.intp)
        va, vb = rec.va * scale, rec.vb * scale
        if va.denominator != 1 or vb.denominator != 1:
            raise ValueError("prior record is inconsistent with the metric")
        lite.append((aside, bside, perm.index(rec.a_s), perm.index(rec.b_s), int(va), int(vb)))
    ground = np.arange(k, dtype=np.intp)
    fresh_b = min(range(k), key=lambda i: order[i])
    out = []
    for aside, bside, a0, b0, va, vb, alpha, _pi, _case, _ch in _split_candidates(
        mat, k, lite, ground, fresh_b
    ):
        out.append(
            _labelled_record(
                order[a0], order[b0], va, vb, alpha, scale,
                frozenset(order[int(i)] for i in aside),
                frozenset(order[int(i)] for i in bside),
            )
        )
    return frozenset(out)


def extend_cutpoint(metric: Metric, x: str, f_prev: PointMap) -> PointMap:
    """Extend a map on the metric minus `x` by its forced coordinate at x.

    The new coordinate is max over old points y of d(x, y) - f(y); the
    caller classifies the result and keeps it only when it is an interior
    cutpoint.
    """
    metric.index(x)
    rest = set(metric.labels) - {x}
    if set(f_prev.labels) != rest:
        raise UnknownPoint((set(f_prev.labels) ^ rest).pop())
    fx = max(metric.d(x, y) - f_prev[y] for y in f_prev.labels)
    values = tuple(
        fx if lab == x else f_prev[lab] for lab in metric.labels
    )
    return PointMap(metric.labels, values)


def incremental_components(
    metric: Metric, x: str, prev_graph: SupportGraph, f: PointMap
) -> SupportGraph:
    """Support-graph metadata of `f` from that of its restriction off `x`.

    Requires that `f` agrees with the prior map away from `x`, so only
    edges incident to `x` can appear; runs in O(n) plus the copy of the
    prior structure and matches `gamma_graph` from scratch.
    """
    fx = f[x]
    if fx == 0:
        return SupportGraph(
            prev_graph.vertices,
            prev_graph.edges,
            prev_graph.components,
            prev_graph.clique_flags,
        )
    nb = {y for y in prev_graph.vertices if fx + f[y] > metric.d(x, y)}
    comps = list(prev_graph.components)
    flags = list(prev_graph.clique_flags)
    touched = [i for i, c in enumerate(comps) if c & nb]
    if not touched:
        comps.append(frozenset({x}))
        flags.append(True)
    elif len(touched) == 1:
        i = touched[0]
        flags[i] = flags[i] and comps[i] <= nb
        comps[i] = comps[i] | {x}
    else:
        merged = frozenset({x}).union(*(comps[i] for i in touched))
        comps = [c for i, c in enumerate(comps) if i not in touched] + [merged]
        flags = [fl for i, fl in enumerate(flags) if i not in touched] + [False]
    pos = {lab: i for i, lab in enumerate(metric.labels)}
    order = sorted(range(len(comps)), key=lambda i: min(pos[p] for p in comps[i]))
    return SupportGraph(
        vertices=prev_graph.vertices | {x},
        edges=prev_graph.edges | {frozenset((x, y)) for y in nb},
        components=tuple(comps[i] for i in order),
        clique_flags=tuple(flags[i] for i in order),
    )
