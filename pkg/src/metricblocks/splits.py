"""Splits, isolation indices, block-split recognition and split maps."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import GammaOutOfRange
from .metric import Metric, PointMap, kuratowski_map, virtual_distance


@dataclass(frozen=True)
class Split:
    """An unordered bipartition of the point set into two nonempty sides.

    Stored canonically: side_a holds the lexicographically least label, so
    equal bipartitions compare and hash equal however they were built.
    """

    side_a: frozenset[str]
    side_b: frozenset[str]

    def __post_init__(self):
        a, b = frozenset(self.side_a), frozenset(self.side_b)
        if not a or not b:
            raise ValueError("both sides of a split must be nonempty")
        if a & b:
            raise ValueError(f"split sides overlap: {sorted(a & b)}")
        if min(b) < min(a):
            a, b = b, a
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    @property
    def ground(self) -> frozenset[str]:
        return self.side_a | self.side_b

    def side_of(self, point: str) -> frozenset[str]:
        if point in self.side_a:
            return self.side_a
        if point in self.side_b:
            return self.side_b
        raise KeyError(point)

    def __repr__(self):
        a = ",".join(sorted(self.side_a))
        b = ",".join(sorted(self.side_b))
        return f"Split({{{a}}}|{{{b}}})"


@dataclass(frozen=True)
class BlockSplitRecord:
    """A recognized block split with its anchor pair and virtual distances.

    `va` is the virtual distance from a_s to the opposite side, `vb` the
    mirror quantity; `alpha = va + vb - d(a_s, b_s)` is the isolation index
    and is positive for every block split.
    """

    split: Split
    a_s: str
    b_s: str
    va: Fraction
    vb: Fraction
    alpha: Fraction


def isolation_index(metric: Metric, split: Split) -> Fraction:
    """The definitional isolation index, minimizing over side pairs.

    Quartic in n and kept for oracle-grade use; the engine never calls it.
    Note this is the two-term variant tied to the block-split test: on
    splits whose cross distances do not decompose additively it can be
    negative (the classical three-term index clamps at 0 instead).
    """
    ai = [metric.index(p) for p in sorted(split.side_a)]
    bi = [metric.index(p) for p in sorted(split.side_b)]
    if split.ground != set(metric.labels):
        raise ValueError("split must cover the metric's point set")
    rows = metric.rows
    best = None
    for a1, a2 in combinations_with_replacement(ai, 2):
        for b1, b2 in combinations_with_replacement(bi, 2):
            straight = rows[a1][b1] + rows[a2][b2]
            crossed = rows[a1][b2] + rows[a2][b1]
            term = max(straight, crossed) - rows[a1][a2] - rows[b1][b2]
            if best is None or term < best:
                best = term
    return best / 2


def _cross_sums_split(metric: Metric, split: Split, a0: str, b0: str) -> bool:
    base = metric.d(a0, b0)
    return all(
        base + metric.d(a, b) == metric.d(a0, b) + metric.d(a, b0)
        for a in split.side_a
        for b in split.side_b
    )


def block_split_record(metric: Metric, split: Split) -> BlockSplitRecord | None:
    """Recognize a block split, returning its record, else None.

    After fixing the lexicographically least anchor on each side, the
    additive cross-distance condition needs only O(n^2) checks; a block
    split additionally has positive isolation index.
    """
    if split.ground != set(metric.labels):
        raise ValueError("split must cover the metric's point set")
    a0 = min(split.side_a)
    b0 = min(split.side_b)
    if not _cross_sums_split(metric, split, a0, b0):
        return None
    va = virtual_distance(metric, kuratowski_map(metric, a0), split.side_b)
    vb = virtual_distance(metric, kuratowski_map(metric, b0), split.side_a)
    alpha = va + vb - metric.d(a0, b0)
    if alpha <= 0:
        return None
    return BlockSplitRecord(split, a0, b0, va, vb, alpha)


def is_block_split(metric: Metric, split: Split) -> bool:
    return block_split_record(metric, split) is not None


def split_map(
    metric: Metric,
    record: BlockSplitRecord,
    gamma_a: Fraction,
    gamma_b: Fraction,
) -> PointMap:
    """One point of the segment spanned by a block split.

    Each point is sent to its virtual distance to the opposite side, minus
    the side's weight; the weights must be nonnegative and sum to alpha.
    Evaluation is definitional (per-point virtual distances); see
    `endpoint_maps` for the constant-time-per-coordinate path.
    """
    gamma_a = Fraction(gamma_a)
    gamma_b = Fraction(gamma_b)
    if gamma_a < 0 or gamma_b < 0 or gamma_a + gamma_b != record.alpha:
        raise GammaOutOfRange(
            f"weights ({gamma_a}, {gamma_b}) must be >= 0 and sum to {record.alpha}"
        )
    values = []
    for lab in metric.labels:
        k = kuratowski_map(metric, lab)
        if lab in record.split.side_a:
            values.append(virtual_distance(metric, k, record.split.side_b) - gamma_a)
        else:
            values.append(virtual_distance(metric, k, record.split.side_a) - gamma_b)
    return PointMap(metric.labels, tuple(values))


def endpoint_maps(metric: Metric, record: BlockSplitRecord) -> tuple[PointMap, PointMap]:
    """The two ends of a block split's segment, one per side.

    Coordinates come from the stored anchor 4-tuple in O(1) each:
    d(a | B) = va - d(a_s, b_s) + d(a, b_s) and symmetrically, which agrees
    with the definitional evaluation on every block split.
    """
    a_s, b_s = record.a_s, record.b_s
    base = metric.d(a_s, b_s)
    alpha = record.alpha
    fa, fb = [], []
    for lab in metric.labels:
        if lab in record.split.side_a:
            da_b = record.va - base + metric.d(lab, b_s)
            fa.append(da_b - alpha)
            fb.append(da_b)
        else:
            db_a = record.vb - base + metric.d(a_s, lab)
            fa.append(db_a)
            fb.append(db_a - alpha)
    return PointMap(metric.labels, tuple(fa)), PointMap(metric.labels, tuple(fb))


def are_compatible(s1: Split, s2: Split) -> bool:
    """Two splits are compatible when some pair of opposite sides is disjoint."""
    if s1.ground != s2.ground:
        raise ValueError("splits live on different ground sets")
    return (
        not (s1.side_a & s2.side_a)
        or not (s1.side_a & s2.side_b)
        or not (s1.side_b & s2.side_a)
        or not (s1.side_b & s2.side_b)
    )
