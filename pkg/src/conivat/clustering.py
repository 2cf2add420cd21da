"""Partition extraction from VAT MSTs plus baseline hierarchical algorithms.

Cutting the k-1 largest MST edges of a VAT result yields exactly the
single-linkage clusters of the underlying matrix, so ``cut_mst`` is the
cheap SL back end used by the pipelines. ``hac`` provides the classical
agglomerative reference (single or complete linkage), and ``ccl``/``ssl``
are the constraint-editing baselines: zero must-link entries, inflate
cannot-link entries past the matrix maximum, propagate by all-pairs
shortest paths, then cluster with complete or single linkage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constraints import ConstraintSet
from .vat import VatResult, validate_dissimilarity


@dataclass(frozen=True)
class Partition:
    """Cluster labels in [0, k), one per object, every cluster nonempty."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        object.__setattr__(self, "labels", labels)
        if labels.ndim != 1 or labels.shape[0] == 0:
            raise ValueError("labels must be a nonempty 1-D array")
        present = np.unique(labels)
        if present[0] < 0 or present[-1] >= self.k or present.shape[0] != self.k:
            raise ValueError(f"labels must cover exactly the ids 0..{self.k - 1}")

    @property
    def n(self) -> int:
        return self.labels.shape[0]


def cut_mst(vat: VatResult, k: int) -> Partition:
    """Partition into k clusters by cutting the k-1 largest MST edges.

    Ties between equal-weight edges cut the one admitted later in the VAT
    ordering. Cluster ids run 0..k-1 in order of first appearance along the
    ordering; labels are returned in original index order.
    """
    n = vat.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    w = vat.cut_magnitudes
    by_weight = np.lexsort((np.arange(n - 1), w))
    cut = set(by_weight[n - k:].tolist())
    ordered_labels = np.zeros(n, dtype=int)
    next_id = 0
    for t in range(1, n):
        if t - 1 in cut:
            next_id += 1
            ordered_labels[t] = next_id
        else:
            ordered_labels[t] = ordered_labels[vat.mst_parent[t]]
    labels = np.empty(n, dtype=int)
    labels[vat.order] = ordered_labels
    return Partition(labels=labels, k=k)


def hac(d: np.ndarray, k: int, linkage: str = "single") -> Partition:
    """Agglomerative clustering from singletons down to k clusters.

    ``linkage`` is "single" (merge distance = min pairwise) or "complete"
    (max pairwise). Merge ties pick the lexicographically smallest pair of
    cluster representatives, a cluster's representative being its lowest
    member index.
    """
    d = validate_dissimilarity(d)
    n = d.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if linkage not in ("single", "complete"):
        raise ValueError(f"linkage must be 'single' or 'complete', got {linkage!r}")
    combine = np.minimum if linkage == "single" else np.maximum

    # Slot index == representative index; merging folds the larger slot
    # into the smaller so representatives stay minimal.
    m = d.copy()
    np.fill_diagonal(m, np.inf)
    labels = np.arange(n)
    for _ in range(n - k):
        flat = int(np.argmin(m))
        i, j = flat // n, flat % n
        if i > j:
            i, j = j, i
        m[i] = m[:, i] = combine(m[i], m[j])
        m[j] = m[:, j] = np.inf
        m[i, i] = np.inf
        labels[labels == j] = i
    _, labels = np.unique(labels, return_inverse=True)
    return Partition(labels=labels, k=k)


def _edited_distances(d: np.ndarray, cs: ConstraintSet) -> np.ndarray:
    """Must-link -> 0, cannot-link -> max+1, additive shortest-path closure."""
    d = validate_dissimilarity(d)
    n = d.shape[0]
    for i, j in cs.similar | cs.dissimilar:
        if i >= n or j >= n:
            raise IndexError(f"constraint pair ({i}, {j}) out of range for {n} objects")
    out = d.copy()
    ceiling = float(d.max()) + 1.0
    for i, j in cs.similar:
        out[i, j] = out[j, i] = 0.0
    for i, j in cs.dissimilar:
        out[i, j] = out[j, i] = ceiling
    for mid in range(n):
        np.minimum(out, out[:, mid, None] + out[None, mid, :], out=out)
    # shortest paths may tunnel around an inflated pair; restore the barrier
    for i, j in cs.dissimilar:
        out[i, j] = out[j, i] = ceiling
    return out


def ccl(d: np.ndarray, cs: ConstraintSet, k: int) -> Partition:
    """Constrained complete linkage over the edited, propagated matrix."""
    if len(cs) == 0:
        return hac(d, k, "complete")
    return hac(_edited_distances(d, cs), k, "complete")


def ssl(d: np.ndarray, cs: ConstraintSet, k: int) -> Partition:
    """Constrained single linkage over the edited, propagated matrix."""
    if len(cs) == 0:
        return hac(d, k, "single")
    return hac(_edited_distances(d, cs), k, "single")


def suggest_k(vat: VatResult) -> list[tuple[int, float]]:
    """Rank candidate cluster counts by gaps between sorted cut magnitudes.

    score(k) = (k-1)-th largest magnitude minus the k-th largest; a large
    gap means cutting k-1 edges removes everything clearly longer than what
    remains. Advisory only; empty for N < 3.
    """
    if vat.n < 2:
        raise ValueError("suggest_k needs at least 2 objects")
    desc = np.sort(vat.cut_magnitudes)[::-1]
    scores = [(kk, float(desc[kk - 2] - desc[kk - 1])) for kk in range(2, vat.n)]
    scores.sort(key=lambda pair: (-pair[1], pair[0]))
    return scores
