"""Independent reference implementations used to cross-check the package.

Everything here is deliberately naive -- O(N^3) dynamic programming,
exhaustive permutation search, textbook formulas -- so that when a test
disagrees, the finger points at the efficient implementation.
"""

from __future__ import annotations

from itertools import permutations
from pathlib import Path

import numpy as np


def random_dissimilarity(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    """Random symmetric matrix with zero diagonal and positive entries."""
    m = rng.uniform(0.05, scale, (n, n))
    m = (m + m.T) / 2.0
    np.fill_diagonal(m, 0.0)
    return m


def kruskal_mst_weights(d: np.ndarray) -> np.ndarray:
    """Sorted MST edge weights by Kruskal's algorithm with union-find.

    The weight multiset is the same for every minimum spanning tree, so the
    sorted weights are a well-defined oracle even under ties.
    """
    n = d.shape[0]
    edges = sorted((float(d[i, j]), i, j) for i in range(n) for j in range(i + 1, n))
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    weights = []
    for w, i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            weights.append(w)
            if len(weights) == n - 1:
                break
    return np.array(weights)


def floyd_warshall_minimax(d: np.ndarray) -> np.ndarray:
    """O(N^3) minimax path distance: d'ik = min(d'ik, max(d'ij, d'jk))."""
    out = np.array(d, dtype=float)
    n = out.shape[0]
    for j in range(n):
        np.minimum(out, np.maximum(out[:, j, None], out[None, j, :]), out=out)
    return out


def brute_force_pa(pred, truth) -> float:
    """Maximum match percentage over all one-to-one label-id assignments."""
    p = np.asarray(pred, dtype=int)
    t = np.asarray(truth, dtype=int)
    _, p = np.unique(p, return_inverse=True)
    _, t = np.unique(t, return_inverse=True)
    r, c = int(p.max()) + 1, int(t.max()) + 1
    cont = np.zeros((r, c), dtype=int)
    np.add.at(cont, (p, t), 1)
    if r <= c:
        best = max(sum(cont[i, perm[i]] for i in range(r)) for perm in permutations(range(c), r))
    else:
        best = max(sum(cont[perm[j], j] for j in range(c)) for perm in permutations(range(r), c))
    return 100.0 * best / t.shape[0]


def reachability_closure(similar, dissimilar, n):
    """Constraint closure by boolean Floyd-Warshall reachability.

    Returns ``(similar, dissimilar)`` frozensets of normalized pairs: the
    similar side is every pair connected through similar edges, the
    dissimilar side is every pair with one endpoint reaching each end of
    some dissimilar edge.
    """
    reach = np.eye(n, dtype=bool)
    for i, j in similar:
        reach[i, j] = reach[j, i] = True
    for m in range(n):
        reach |= reach[:, m, None] & reach[None, m, :]
    sim = frozenset((i, j) for i in range(n) for j in range(i + 1, n) if reach[i, j])
    dis = set()
    for i, j in dissimilar:
        for a in range(n):
            for b in range(n):
                if a != b and ((reach[a, i] and reach[b, j]) or (reach[a, j] and reach[b, i])):
                    dis.add((min(a, b), max(a, b)))
    return sim, frozenset(dis)


def similar_components(similar, n) -> np.ndarray:
    """Component id per index under the similar-edge graph (BFS labeling)."""
    adj = [[] for _ in range(n)]
    for i, j in similar:
        adj[i].append(j)
        adj[j].append(i)
    comp = np.full(n, -1, dtype=int)
    next_id = 0
    for start in range(n):
        if comp[start] >= 0:
            continue
        comp[start] = next_id
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if comp[u] < 0:
                    comp[u] = next_id
                    stack.append(u)
        next_id += 1
    return comp


def charpoly_coeffs(a: np.ndarray) -> np.ndarray:
    """Characteristic polynomial (monic, descending) by Faddeev-LeVerrier."""
    n = a.shape[0]
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    m = np.zeros_like(a, dtype=float)
    eye = np.eye(n)
    for k in range(1, n + 1):
        m = a @ m + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(a @ m) / k
    return coeffs


def psd_clamp_charpoly(a: np.ndarray) -> np.ndarray:
    """PSD projection rebuilt from characteristic-polynomial roots.

    Each eigenvalue's spectral projector comes from the product formula
    prod_{j != i} (A - lam_j I) / (lam_i - lam_j), which needs distinct
    eigenvalues -- fine for generic random input.
    """
    lams = np.sort(np.real(np.roots(charpoly_coeffs(a))))
    n = a.shape[0]
    eye = np.eye(n)
    out = np.zeros_like(a, dtype=float)
    for i, lam in enumerate(lams):
        if lam <= 0.0:
            continue
        proj = eye.copy()
        for j, other in enumerate(lams):
            if j != i:
                proj = proj @ (a - other * eye) / (lam - other)
        out += lam * proj
    return out


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Minimal binary-P5 reader; returns ``(pixels, maxval)``."""
    data = Path(path).read_bytes()
    if data[:2] != b"P5":
        raise ValueError("not a binary PGM file")
    pos = 2
    vals = []
    while len(vals) < 3:
        while data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while data[pos : pos + 1] not in (b"\n", b""):
                pos += 1
            continue
        start = pos
        while not data[pos : pos + 1].isspace():
            pos += 1
        vals.append(int(data[start:pos]))
    width, height, maxval = vals
    pos += 1
    pixels = np.frombuffer(data[pos : pos + width * height], dtype=np.uint8)
    if pixels.size != width * height:
        raise ValueError("truncated pixel payload")
    return pixels.reshape(height, width).copy(), maxval


def canonical_labels(labels) -> np.ndarray:
    """Relabel cluster ids by first appearance so partitions compare directly."""
    seen: dict[int, int] = {}
    return np.array([seen.setdefault(int(v), len(seen)) for v in np.asarray(labels)])


def partitions_equal(a, b) -> bool:
    return np.array_equal(canonical_labels(a), canonical_labels(b))
