"""Ward minimum-variance clustering of matrix rows.

Heights are the raw Ward cost of each merge (the increase in total
within-cluster sum of squares), not scipy's square-root rescaling, so they are
directly comparable to hand computations. Rows are rank vectors, which are
commensurate by construction; Euclidean geometry is the one under which Ward
costs mean variance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadKError, InvariantViolation, TooFewRowsError
from .multirpys import RpysMatrix

# Relative slack used only to group mathematically tied merge costs that
# float arithmetic separates; candidate pairs within it resolve by index.
_TIE_RTOL = 1e-9


@dataclass(slots=True)
class DistanceMatrix:
    """Symmetric pairwise Euclidean distances with a zero diagonal."""

    n: int
    d: np.ndarray

    def __post_init__(self) -> None:
        self.d = np.asarray(self.d, dtype=float)
        if self.d.shape != (self.n, self.n):
            raise InvariantViolation(f"distance matrix shape {self.d.shape} != ({self.n}, {self.n})")
        if not np.allclose(self.d, self.d.T) or not np.allclose(np.diag(self.d), 0.0):
            raise InvariantViolation("distance matrix must be symmetric with zero diagonal")


@dataclass(slots=True)
class Merge:
    """One agglomeration step; left/right reference leaves (< n) or prior merges (n + step)."""

    left: int
    right: int
    height: float
    size: int


@dataclass(slots=True)
class Dendrogram:
    """Merge tree over labeled leaves; exactly len(leaves) - 1 merges."""

    leaves: list[str]
    merges: list[Merge]


def _as_rows(data) -> tuple[np.ndarray | None, list[str]]:
    """Extract (row vectors, labels) from the accepted input shapes."""
    if isinstance(data, RpysMatrix):
        return np.asarray(data.ranks, dtype=float), list(data.segment_labels)
    if isinstance(data, DistanceMatrix):
        return None, [str(i) for i in range(data.n)]
    rows = np.asarray(data, dtype=float)
    if rows.ndim == 1:
        rows = rows[:, None]
    return rows, [str(i) for i in range(rows.shape[0])]


def row_distances(data) -> DistanceMatrix:
    """Pairwise Euclidean distances between matrix rows."""
    rows, _ = _as_rows(data)
    if rows is None:
        raise TooFewRowsError("row_distances needs row vectors, not a distance matrix")
    n = rows.shape[0]
    if n < 2:
        raise TooFewRowsError("need at least two rows")
    diff = rows[:, None, :] - rows[None, :, :]
    return DistanceMatrix(n=n, d=np.sqrt((diff * diff).sum(axis=2)))


def ward_cluster(data, labels: list[str] | None = None) -> Dendrogram:
    """Agglomerate rows by Ward's minimum-variance criterion.

    Accepts an RpysMatrix, raw row vectors, or a precomputed Euclidean
    DistanceMatrix. Each step merges the active pair with the smallest Ward
    cost |A||B|/(|A|+|B|) * ||centroid_A - centroid_B||^2, maintained through
    the Lance-Williams recurrence; ties resolve to the smallest
    (min node id, max node id) pair. Heights must come out non-decreasing
    (Ward is reducible); a violation means a bug and raises.
    """
    rows, default_labels = _as_rows(data)
    leaf_labels = list(labels) if labels is not None else default_labels
    n = len(leaf_labels)
    if n < 2:
        raise TooFewRowsError("need at least two rows to cluster")

    # Initial costs: merging singletons {i},{j} costs half their squared distance.
    cost: dict[tuple[int, int], float] = {}
    if rows is not None:
        if rows.shape[0] != n:
            raise InvariantViolation("labels do not align with rows")
        for i in range(n):
            diff = rows[i + 1 :] - rows[i]
            sq = (diff * diff).sum(axis=1)
            for j, s in enumerate(sq, start=i + 1):
                cost[(i, j)] = 0.5 * float(s)
    else:
        d = data.d
        for i in range(n):
            for j in range(i + 1, n):
                cost[(i, j)] = 0.5 * float(d[i, j]) ** 2

    sizes = {i: 1 for i in range(n)}
    merges: list[Merge] = []
    prev_height = 0.0
    next_id = n

    for _ in range(n - 1):
        lowest = min(cost.values())
        slack = _TIE_RTOL * max(1.0, abs(lowest))
        a, b = min(pair for pair, c in cost.items() if c <= lowest + slack)
        height = cost[(a, b)]
        if height < prev_height - _TIE_RTOL * max(1.0, abs(prev_height)):
            raise InvariantViolation(
                f"Ward merge heights decreased: {height} after {prev_height}"
            )
        prev_height = max(prev_height, height)

        s_a, s_b = sizes[a], sizes[b]
        merged_size = s_a + s_b
        merges.append(Merge(left=a, right=b, height=height, size=merged_size))

        del cost[(a, b)]
        updates = {}
        for k in sizes:
            if k == a or k == b:
                continue
            s_k = sizes[k]
            c_ak = cost.pop((min(a, k), max(a, k)))
            c_bk = cost.pop((min(b, k), max(b, k)))
            updates[(k, next_id)] = (
                (s_a + s_k) * c_ak + (s_b + s_k) * c_bk - s_k * height
            ) / (merged_size + s_k)
        cost.update(updates)
        del sizes[a], sizes[b]
        sizes[next_id] = merged_size
        next_id += 1

    return Dendrogram(leaves=leaf_labels, merges=merges)


def cut(dendrogram: Dendrogram, k: int) -> list[int]:
    """Flat clustering into k clusters by undoing the k-1 highest merges.

    Returns one cluster id per leaf (in leaf order), numbered 1..k by each
    cluster's first leaf.
    """
    n = len(dendrogram.leaves)
    if not 1 <= k <= n:
        raise BadKError(f"k must be in 1..{n}, got {k}")

    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    node_leaf = list(range(n))  # node id -> one leaf under it
    for merge in dendrogram.merges[: n - k]:
        ra, rb = find(node_leaf[merge.left]), find(node_leaf[merge.right])
        parent[rb] = ra
        node_leaf.append(ra)

    numbers: dict[int, int] = {}
    labels = []
    for leaf in range(n):
        root = find(leaf)
        if root not in numbers:
            numbers[root] = len(numbers) + 1
        labels.append(numbers[root])
    return labels


def leaf_order(dendrogram: Dendrogram) -> list[str]:
    """Left-to-right leaf ordering for resorted heatmaps.

    In-order traversal of the merge tree, visiting at each node the child
    containing the smaller original leaf index first.
    """
    n = len(dendrogram.leaves)
    if not dendrogram.merges:
        return list(dendrogram.leaves)

    min_leaf = list(range(n))
    for merge in dendrogram.merges:
        min_leaf.append(min(min_leaf[merge.left], min_leaf[merge.right]))

    order: list[int] = []
    stack = [n + len(dendrogram.merges) - 1]
    while stack:
        node = stack.pop()
        if node < n:
            order.append(node)
            continue
        merge = dendrogram.merges[node - n]
        first, second = sorted((merge.left, merge.right), key=lambda c: min_leaf[c])
        stack.append(second)
        stack.append(first)
    return [dendrogram.leaves[i] for i in order]
