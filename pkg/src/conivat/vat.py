"""VAT reordering, the minimax path-distance transform, and the ConiVAT pipeline.

VAT reorders a dissimilarity matrix along a minimum spanning tree traversal
so that cluster structure shows up as dark diagonal blocks. The minimax
transform replaces each pairwise distance with the smallest possible
worst edge over all connecting paths, which sharpens those blocks (iVAT).
ConiVAT runs the same machinery on a matrix that has been reshaped by
constraint-learned Mahalanobis distances and zeroed similar pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constraints import ConstraintSet, sanitize
from .data import FeatureMatrix
from .metric import LearnConfig, LearnReport, dissimilarity_under_metric, euclidean_dissimilarity, learn_metric

VARIANTS = ("ivat", "metric_ivat", "mtd_vat", "conivat")
_METRIC_VARIANTS = frozenset({"metric_ivat", "conivat"})
_IMPOSE_VARIANTS = frozenset({"mtd_vat", "conivat"})


def validate_dissimilarity(d: np.ndarray) -> np.ndarray:
    """Check square/symmetric/zero-diagonal/non-negative/finite; return as float array."""
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"dissimilarity matrix must be square, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValueError("dissimilarity matrix contains non-finite entries")
    if np.any(d < 0):
        raise ValueError("dissimilarity matrix contains negative entries")
    if np.any(np.abs(np.diag(d)) > 1e-12):
        raise ValueError("dissimilarity matrix diagonal must be zero")
    if np.max(np.abs(d - d.T)) > 1e-12:
        raise ValueError("dissimilarity matrix must be symmetric")
    return d


@dataclass(frozen=True)
class VatResult:
    """Reordering of a dissimilarity matrix along the VAT MST traversal.

    ``order[t]`` is the original index of the object in ordered position t.
    ``mst_parent[t]`` (t >= 1) is the ordered position the t-th object
    attached to; entry 0 is -1 for the seed. ``cut_magnitudes[t-1]`` is the
    weight of the MST edge that admitted the t-th object, so cutting the
    k-1 largest splits the tree into k single-linkage clusters.
    """

    order: np.ndarray
    reordered: np.ndarray
    mst_parent: np.ndarray
    cut_magnitudes: np.ndarray

    @property
    def n(self) -> int:
        return self.order.shape[0]


def vat_reorder(d: np.ndarray) -> VatResult:
    """Reorder ``d`` by the modified-Prim VAT traversal.

    The seed is the row holding the global maximum entry (row-major first on
    ties). Each step admits the unvisited object closest to the visited set;
    ties go to the lowest candidate index, then the lowest anchor index.
    """
    d = validate_dissimilarity(d)
    n = d.shape[0]
    order = np.empty(n, dtype=int)
    parent = np.full(n, -1, dtype=int)
    cuts = np.empty(max(n - 1, 0), dtype=float)
    seed = int(np.argmax(d)) // n
    order[0] = seed

    # best_dist[j]: min distance from unvisited j to the visited set;
    # best_anchor[j]: lowest-index visited object attaining it.
    pos = {seed: 0}
    unvisited = np.ones(n, dtype=bool)
    unvisited[seed] = False
    best_dist = d[seed].copy()
    best_anchor = np.full(n, seed, dtype=int)
    best_dist[seed] = np.inf
    for t in range(1, n):
        j = int(np.argmin(best_dist))
        order[t] = j
        parent[t] = pos[int(best_anchor[j])]
        cuts[t - 1] = best_dist[j]
        pos[j] = t
        unvisited[j] = False
        closer = unvisited & (d[j] < best_dist)
        best_dist[closer] = d[j][closer]
        best_anchor[closer] = j
        tied = unvisited & (d[j] == best_dist) & (best_anchor > j)
        best_anchor[tied] = j
        best_dist[j] = np.inf
    return VatResult(order=order, reordered=d[np.ix_(order, order)], mst_parent=parent, cut_magnitudes=cuts)


def minimax_transform(d: np.ndarray) -> np.ndarray:
    """Minimum-over-paths maximum-edge distance for every pair, original order.

    Runs in O(N^2) after VAT reordering: the t-th admitted object reaches
    every earlier object through its MST parent, so its minimax row is
    max(parent edge, parent's row). Output is ultrametric and entrywise
    dominated by the input.
    """
    vat = vat_reorder(d)
    n = vat.n
    r = vat.reordered
    dp = np.zeros((n, n))
    for t in range(1, n):
        j = vat.mst_parent[t]
        dp[t, :t] = np.maximum(r[t, j], dp[j, :t])
        dp[:t, t] = dp[t, :t]
    out = np.empty_like(dp)
    out[np.ix_(vat.order, vat.order)] = dp
    return out


def impose_similar(d: np.ndarray, cs: ConstraintSet) -> np.ndarray:
    """Copy of ``d`` with every similar pair's distance set to zero."""
    d = np.array(d, dtype=float)
    n = d.shape[0]
    for i, j in cs.similar:
        if i >= n or j >= n:
            raise IndexError(f"constraint pair ({i}, {j}) out of range for {n} objects")
        d[i, j] = d[j, i] = 0.0
    return d


def conivat_pipeline(
    data: FeatureMatrix,
    cs: ConstraintSet | None = None,
    cfg: LearnConfig | None = None,
    variant: str = "conivat",
) -> tuple[VatResult, LearnReport | None]:
    """Run one assessment variant end to end; returns (VatResult, report?).

    Variants: ``ivat`` (Euclidean -> minimax -> VAT), ``metric_ivat``
    (learned metric first), ``mtd_vat`` (zero similar pairs, no learning),
    ``conivat`` (both). Raw constraints are sanitized here so the learner
    and the imposition step see the same closed, conflict-free sets.
    """
    variant = variant.lower()
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    cs = sanitize(cs) if cs is not None else ConstraintSet.empty(data.n)
    report = None
    if variant in _METRIC_VARIANTS:
        a, report = learn_metric(data, cs, cfg)
        d = dissimilarity_under_metric(data, a)
    else:
        d = euclidean_dissimilarity(data)
    if variant in _IMPOSE_VARIANTS:
        d = impose_similar(d, cs)
    return vat_reorder(minimax_transform(d)), report
