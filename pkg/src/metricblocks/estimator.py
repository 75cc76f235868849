"""Scikit-learn style front end for the cutpoint analysis."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cutpoints import compute_cut_points
from .metric import as_metric
from .realization import blocks_and_cut_vertices, decompose


class MetricCutpoints(TransformerMixin, BaseEstimator):
    """Analyze a precomputed distance matrix as an estimator.

    `fit(X)` validates X as an exact finite metric and computes its block
    splits, cutpoints, block realization and block decomposition.
    `transform(X)` returns the decomposition as an (n_blocks, n, n) object
    array of Fractions whose sum over the first axis reproduces X exactly.

    Entries may be ints, Fractions, exact decimal strings or floats; floats
    are used at their exact binary value.

    Parameters
    ----------
    labels : sequence of str, optional
        Point names; DataFrame columns are picked up automatically, the
        fallback is "p0", "p1", ...
    selfcheck : bool, default False
        Re-derive all incremental engine state from scratch while fitting
        (slow; for debugging).
    """

    def __init__(self, *, labels=None, selfcheck=False):
        self.labels = labels
        self.selfcheck = selfcheck

    def fit(self, X, y=None):
        metric = as_metric(X, labels=self.labels)
        self.metric_ = metric
        self.cut_system_ = compute_cut_points(metric, selfcheck=self.selfcheck)
        self.block_splits_ = self.cut_system_.block_splits
        self.cutpoints_ = self.cut_system_.cutpoints
        self.decomposition_ = decompose(metric, self.cut_system_)
        self.realization_ = self.decomposition_.graph
        self.blocks_ = self.decomposition_.blocks
        self.cut_vertices_ = blocks_and_cut_vertices(self.realization_)[1]
        self.n_features_in_ = metric.n
        return self

    def transform(self, X):
        check_is_fitted(self, "metric_")
        metric = as_metric(X, labels=self.labels)
        if metric == self.metric_:
            dec = self.decomposition_
        else:
            dec = decompose(metric)
        return self._stack(dec)

    @staticmethod
    def _stack(dec):
        n = len(dec.graph.labeled)
        out = np.empty((len(dec.matrices), n, n), dtype=object)
        for bi, mat in enumerate(dec.matrices):
            for i, row in enumerate(mat):
                for j, v in enumerate(row):
                    out[bi, i, j] = v
        return out
