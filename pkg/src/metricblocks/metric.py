"""Exact finite metrics, point maps, and the basic membership predicates.

All quantities are `fractions.Fraction`; every comparison in this library is
equality-sensitive, so there is no floating-point tolerance mode anywhere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    Asymmetry,
    EmptySubset,
    NegativeEntry,
    NonzeroDiagonal,
    TriangleViolation,
    UnknownPoint,
    ZeroOffDiagonal,
)

Rational = Fraction

# int64 is used for internal rescaled arithmetic only when every entry stays
# far from overflow (intermediate sums combine at most four entries).
_INT64_SAFE = 1 << 55


def to_rational(value) -> Fraction:
    """Coerce a single table entry to an exact rational.

    Strings are parsed exactly ("0.1" -> 1/10, "3/2" -> 3/2).  Floats are
    taken at their exact binary value; pass strings or Fractions when decimal
    semantics matter.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not distances")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


@dataclass(frozen=True)
class Metric:
    """A finite metric: ordered point labels plus an exact distance table."""

    labels: tuple[str, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def _pos(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, point: str) -> int:
        try:
            return self._pos[point]
        except KeyError:
            raise UnknownPoint(point) from None

    def d(self, x: str, y: str) -> Fraction:
        return self.rows[self.index(x)][self.index(y)]

    def restrict(self, points: Iterable[str]) -> "Metric":
        """Restriction to a subset, keeping this metric's label order."""
        keep = set(points)
        for p in keep:
            self.index(p)
        idx = [i for i, lab in enumerate(self.labels) if lab in keep]
        labels = tuple(self.labels[i] for i in idx)
        rows = tuple(tuple(self.rows[i][j] for j in idx) for i in idx)
        return Metric(labels, rows)

    @cached_property
    def scaled(self) -> tuple[np.ndarray, int]:
        """Integer-rescaled copy `(matrix, scale)` with ``matrix = scale * D``.

        `scale` is twice the lcm of all denominators, which keeps every
        halved distance combination (virtual distances) integral.  The dtype
        is int64 when magnitudes are safely below overflow, else object
        (arbitrary-precision Python ints); both are exact.
        """
        dens = {v.denominator for row in self.rows for v in row}
        scale = 2 * lcm(*dens) if dens else 2
        ints = [
            [v.numerator * (scale // v.denominator) for v in row] for row in self.rows
        ]
        biggest = max((abs(v) for row in ints for v in row), default=0)
        dtype = np.int64 if biggest < _INT64_SAFE else object
        return np.array(ints, dtype=dtype), scale


def validate_metric(labels: Sequence[str], table: Sequence[Sequence]) -> Metric:
    """Check every metric axiom on `table` and return the Metric.

    Raises Asymmetry, NegativeEntry, NonzeroDiagonal, ZeroOffDiagonal or
    TriangleViolation (with the witnessing triple).  Pseudometrics are
    rejected, not quotiented.
    """
    labels = tuple(str(lab) for lab in labels)
    n = len(labels)
    if n == 0:
        raise ValueError("empty point set")
    if len(set(labels)) != n:
        raise ValueError("duplicate point labels")
    if len(table) != n or any(len(row) != n for row in table):
        raise ValueError(f"table must be {n}x{n}")
    rows = tuple(tuple(to_rational(v) for v in row) for row in table)

    for i in range(n):
        if rows[i][i] != 0:
            raise NonzeroDiagonal(labels[i], rows[i][i])
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise Asymmetry(labels[i], labels[j], rows[i][j], rows[j][i])
            if rows[i][j] < 0:
                raise NegativeEntry(labels[i], labels[j], rows[i][j])
            if rows[i][j] == 0:
                raise ZeroOffDiagonal(labels[i], labels[j])

    metric = Metric(labels, rows)
    mat, _ = metric.scaled
    for k in range(n):
        slack = mat[:, k, None] + mat[None, k, :] - mat
        bad = np.argwhere(slack < 0)
        if len(bad):
            i, j = (int(v) for v in bad[0])
            raise TriangleViolation(
                labels[i], labels[k], labels[j],
                rows[i][j], rows[i][k], rows[k][j],
            )
    return metric


def as_metric(X, labels: Sequence[str] | None = None) -> Metric:
    """Input-validation helper: build a Metric from an array-like table.

    Accepts nested sequences, numpy arrays or DataFrame-likes; entries may be
    ints, Fractions, exact strings or floats (used at their binary value).
    Labels default to the DataFrame columns, else "p0", "p1", ...
    """
    if isinstance(X, Metric):
        return X
    if labels is None and hasattr(X, "columns"):
        labels = [str(c) for c in X.columns]
    if hasattr(X, "to_numpy"):
        X = X.to_numpy()
    arr = np.asarray(X, dtype=object)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    n = arr.shape[0]
    if labels is None:
        labels = [f"p{i}" for i in range(n)]
    return validate_metric(labels, arr.tolist())


@dataclass(frozen=True)
class PointMap:
    """A real-valued map on the point set, stored in a fixed label order."""

    labels: tuple[str, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.values):
            raise ValueError("one value per point required")

    @classmethod
    def from_values(cls, metric: Metric, values) -> "PointMap":
        """Build a map over `metric`'s points from a sequence or mapping."""
        if isinstance(values, Mapping):
            missing = set(metric.labels) - set(values)
            extra = set(values) - set(metric.labels)
            if missing or extra:
                raise UnknownPoint((missing or extra).pop())
            seq = [values[lab] for lab in metric.labels]
        else:
            seq = list(values)
            if len(seq) != metric.n:
                raise ValueError("one value per point required")
        return cls(metric.labels, tuple(to_rational(v) for v in seq))

    @cached_property
    def _pos(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def __getitem__(self, point: str) -> Fraction:
        try:
            return self.values[self._pos[point]]
        except KeyError:
            raise UnknownPoint(point) from None

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.labels, self.values))


@dataclass(frozen=True)
class SupportGraph:
    """The strict-slack graph of a map: vertices are the support, and two
    support points are adjacent when f(x) + f(y) strictly exceeds d(x, y)."""

    vertices: frozenset[str]
    edges: frozenset[frozenset[str]]
    components: tuple[frozenset[str], ...]
    clique_flags: tuple[bool, ...]

    @property
    def n_components(self) -> int:
        return len(self.components)

    @property
    def is_disconnected(self) -> bool:
        return len(self.components) >= 2


def kuratowski_map(metric: Metric, x: str) -> PointMap:
    """The distance map of a single point: y -> d(x, y)."""
    return PointMap(metric.labels, metric.rows[metric.index(x)])


def support(f: PointMap) -> frozenset[str]:
    return frozenset(lab for lab, v in zip(f.labels, f.values) if v != 0)


def _components_of(vertices: list[int], edges: set[frozenset[int]]):
    adj = {v: set() for v in vertices}
    for e in edges:
        u, v = tuple(e)
        adj[u].add(v)
        adj[v].add(u)
    seen = set()
    comps = []
    for v in vertices:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def gamma_graph(metric: Metric, f: PointMap) -> SupportGraph:
    """Build the support graph of `f` with components and clique flags."""
    if set(f.labels) != set(metric.labels):
        raise UnknownPoint((set(f.labels) ^ set(metric.labels)).pop())
    val = [f[lab] for lab in metric.labels]
    verts = [i for i in range(metric.n) if val[i] != 0]
    edges = {
        frozenset((i, j))
        for k, i in enumerate(verts)
        for j in verts[k + 1 :]
        if val[i] + val[j] > metric.rows[i][j]
    }
    comps = _components_of(verts, edges)
    flags = tuple(
        sum(1 for e in edges if e <= c) == len(c) * (len(c) - 1) // 2 for c in comps
    )
    lab = metric.labels
    return SupportGraph(
        vertices=frozenset(lab[i] for i in verts),
        edges=frozenset(frozenset((lab[i], lab[j])) for i, j in map(tuple, edges)),
        components=tuple(frozenset(lab[i] for i in c) for c in comps),
        clique_flags=flags,
    )


def is_in_polytope(metric: Metric, f: PointMap) -> bool:
    """Whether f(x) + f(y) >= d(x, y) for every pair, including x = y.

    The diagonal pair forces f >= 0 coordinatewise, matching the convention
    used by virtual distances.
    """
    val = [f[lab] for lab in metric.labels]
    return all(
        val[i] + val[j] >= metric.rows[i][j]
        for i in range(metric.n)
        for j in range(i, metric.n)
    )


def is_in_tight_span(metric: Metric, f: PointMap) -> bool:
    """Whether f(x) = max_y (d(x, y) - f(y)) holds at every point."""
    val = [f[lab] for lab in metric.labels]
    n = metric.n
    return all(
        val[i] == max(metric.rows[i][j] - val[j] for j in range(n)) for i in range(n)
    )


def virtual_distance(metric: Metric, f: PointMap, points: Iterable[str]) -> Fraction:
    """Half the minimal slack of `f` over pairs from `points` (repeats allowed)."""
    idx = [metric.index(p) for p in points]
    if not idx:
        raise EmptySubset("virtual distance needs a nonempty point set")
    val = [f[lab] for lab in metric.labels]
    best = min(
        val[i] + val[j] - metric.rows[i][j]
        for k, i in enumerate(idx)
        for j in idx[k:]
    )
    return best / 2


class Classification(str, enum.Enum):
    INTERIOR_CUTPOINT = "interior_cutpoint"
    KURATOWSKI = "kuratowski"
    TWO_CLIQUES_FULL_SUPPORT = "two_cliques_full_support"
    NOT_IN_TIGHT_SPAN = "not_in_tight_span"
    CONNECTED = "connected"


def classify_cutstar(metric: Metric, f: PointMap) -> Classification:
    """Classify a map relative to the retained cutpoint set.

    A map is an interior cutpoint when it lies in the tight span, its
    support graph is disconnected, and it is not a full-support disjoint
    union of exactly two cliques (those sit in the interior of an edge of
    the realization and are excluded).  A point's distance map reports
    `interior_cutpoint` too when it qualifies; membership in the returned
    cutpoint set holds either way.
    """
    if not is_in_tight_span(metric, f):
        return Classification.NOT_IN_TIGHT_SPAN
    g = gamma_graph(metric, f)
    if g.is_disconnected:
        full = len(g.vertices) == metric.n
        if full and g.n_components == 2 and all(g.clique_flags):
            return Classification.TWO_CLIQUES_FULL_SUPPORT
        return Classification.INTERIOR_CUTPOINT
    values = tuple(f[lab] for lab in metric.labels)
    if any(values == row for row in metric.rows):
        return Classification.KURATOWSKI
    return Classification.CONNECTED
