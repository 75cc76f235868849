"""Internal exact-integer kernels on rescaled distance matrices.

A metric is rescaled by twice the lcm of its denominators (see
`Metric.scaled`), after which every quantity the algorithms touch is an
integer and every halving below is of an even number.  The helpers here are
shared representation; the incremental engine and the brute-force oracles
keep their own, independent logic on top of them.
"""

from __future__ import annotations

import numpy as np


def half(value: int) -> int:
    q, r = divmod(int(value), 2)
    if r:
        raise AssertionError("halved an odd quantity; rescaling is broken")
    return q


def vd_point(mat: np.ndarray, x: int, idx) -> int:
    """Rescaled virtual distance from point x to the set `idx` of indices."""
    row = mat[x][idx]
    pairs = row[:, None] + row[None, :] - mat[np.ix_(idx, idx)]
    return half(pairs.min())


def vd_rows(mat: np.ndarray, src, idx) -> list[int]:
    """Virtual distances from each point of `src` to the set `idx`, batched."""
    sub = mat[np.ix_(src, idx)]
    pairs = sub[:, :, None] + sub[:, None, :] - mat[np.ix_(idx, idx)][None, :, :]
    mins = pairs.min(axis=(1, 2))
    return [half(v) for v in mins]


def cross_additive(mat: np.ndarray, aset, bset, a0: int, b0: int) -> bool:
    """Whether d(a0,b0) + d(a,b) == d(a0,b) + d(a,b0) across the split."""
    lhs = mat[a0][b0] + mat[np.ix_(aset, bset)]
    rhs = mat[np.ix_(aset, [b0])] + mat[[a0], :][:, bset]
    return bool(np.all(lhs == rhs))


def polytope_ok(mat: np.ndarray, values: np.ndarray) -> bool:
    slack = values[:, None] + values[None, :] - mat
    return bool(slack.min() >= 0)


def tight_span_ok(mat: np.ndarray, values: np.ndarray) -> bool:
    return bool(np.all((mat - values[None, :]).max(axis=1) == values))


class Components:
    """Mutable component/clique bookkeeping for one stored map.

    Tracks, per point index, the id of its support-graph component (-1 off
    the support) plus each component's size and clique flag.  Updates are
    O(n) when one vertex is appended and the map is unchanged elsewhere,
    which is the only mutation the engine performs.
    """

    __slots__ = ("comp_id", "flags", "sizes", "support", "_next")

    def __init__(self, comp_id, flags, sizes, support, next_id):
        self.comp_id = comp_id
        self.flags = flags
        self.sizes = sizes
        self.support = support
        self._next = next_id

    @classmethod
    def from_scratch(cls, values: np.ndarray, mat: np.ndarray) -> "Components":
        """Component structure of the support graph, computed directly."""
        m = len(values)
        comp_id = np.full(m, -1, dtype=np.int32)
        sup = np.flatnonzero(values != 0)
        flags, sizes = {}, {}
        if len(sup):
            adj = (values[sup][:, None] + values[sup][None, :]) > mat[np.ix_(sup, sup)]
            adj = adj.astype(bool)
            np.fill_diagonal(adj, False)
            seen = np.zeros(len(sup), dtype=bool)
            cid = 0
            for s in range(len(sup)):
                if seen[s]:
                    continue
                member = np.zeros(len(sup), dtype=bool)
                member[s] = True
                frontier = member.copy()
                while frontier.any():
                    frontier = adj[frontier].any(axis=0) & ~member
                    member |= frontier
                idx = np.flatnonzero(member)
                seen |= member
                comp_id[sup[idx]] = cid
                k = len(idx)
                flags[cid] = bool(adj[np.ix_(idx, idx)].sum() == k * (k - 1))
                sizes[cid] = k
                cid += 1
        return cls(comp_id, flags, sizes, int(len(sup)), len(flags))

    @classmethod
    def two_cliques(cls, aset, bset, total: int) -> "Components":
        comp_id = np.full(total, -1, dtype=np.int32)
        comp_id[aset] = 0
        comp_id[bset] = 1
        return cls(comp_id, {0: True, 1: True}, {0: len(aset), 1: len(bset)}, total, 2)

    def clone(self) -> "Components":
        return Components(
            self.comp_id.copy(),
            dict(self.flags),
            dict(self.sizes),
            self.support,
            self._next,
        )

    @property
    def n_components(self) -> int:
        return len(self.flags)

    def excluded_from_cutstar(self, ground_size: int) -> bool:
        """Full support split into exactly two cliques: not retained."""
        return (
            self.support == ground_size
            and len(self.flags) == 2
            and all(self.flags.values())
        )

    def add_vertex(self, values: np.ndarray, row: np.ndarray) -> None:
        """Append the last index of `values` as a new vertex.

        Valid only when the map restricted to the old indices is unchanged,
        so no edge among them appears or disappears.
        """
        x = len(self.comp_id)
        comp_id = np.empty(x + 1, dtype=np.int32)
        comp_id[:x] = self.comp_id
        comp_id[x] = -1
        self.comp_id = comp_id
        fx = values[x]
        if fx == 0:
            return
        self.support += 1
        sup = np.flatnonzero(comp_id[:x] != -1)
        if len(sup):
            mask = ((values[sup] + fx) > row[sup]).astype(bool)
            nb = sup[mask]
        else:
            nb = sup
        touched = np.unique(comp_id[nb])
        if len(touched) == 0:
            cid = self._next
            self._next += 1
            comp_id[x] = cid
            self.flags[cid] = True
            self.sizes[cid] = 1
        elif len(touched) == 1:
            cid = int(touched[0])
            comp_id[x] = cid
            self.flags[cid] = self.flags[cid] and len(nb) == self.sizes[cid]
            self.sizes[cid] += 1
        else:
            # Old components carry no mutual edges, so the merge is no clique.
            target = int(touched[0])
            comp_id[np.isin(comp_id, touched)] = target
            comp_id[x] = target
            self.sizes[target] = sum(self.sizes[int(c)] for c in touched) + 1
            self.flags[target] = False
            for c in touched[1:]:
                del self.sizes[int(c)]
                del self.flags[int(c)]

    def partition(self) -> dict[frozenset, bool]:
        """Frozen view {component indices -> clique flag} for comparisons."""
        out = {}
        for cid in self.flags:
            members = frozenset(int(i) for i in np.flatnonzero(self.comp_id == cid))
            out[members] = self.flags[cid]
        return out

    def to_label_components(self, labels):
        """Components as ordered label sets plus aligned clique flags."""
        items = sorted(self.partition().items(), key=lambda kv: min(kv[0]))
        comps = tuple(frozenset(labels[i] for i in members) for members, _ in items)
        flags = tuple(flag for _, flag in items)
        return comps, flags


