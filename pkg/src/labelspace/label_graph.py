"""Label co-occurrence graphs."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["LabelGraph", "build_cooccurrence_graph"]


@dataclass(frozen=True, eq=False)
class LabelGraph:
    """Undirected graph over label indices, stored as a symmetric weight matrix.

    ``adjacency[i, j] > 0`` iff labels ``i`` and ``j`` co-occur; the diagonal
    is always zero.
    """

    adjacency: np.ndarray

    def __post_init__(self):
        A = np.array(self.adjacency, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.allclose(A, A.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(A) != 0):
            raise ValueError("self-loops are not allowed")
        if np.any(A < 0):
            raise ValueError("edge weights must be positive")
        A.setflags(write=False)
        object.__setattr__(self, "adjacency", A)

    @classmethod
    def from_edges(cls, n_nodes: int, edges, weights=None) -> "LabelGraph":
        A = np.zeros((n_nodes, n_nodes))
        weights = [1.0] * len(edges) if weights is None else weights
        for (i, j), w in zip(edges, weights):
            if i == j:
                raise ValueError("self-loops are not allowed")
            A[i, j] = A[j, i] = w
        return cls(A)

    @property
    def n_nodes(self) -> int:
        return self.adjacency.shape[0]

    @property
    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(i.tolist(), j.tolist()))

    @property
    def weights(self) -> list[float]:
        return [float(self.adjacency[i, j]) for i, j in self.edges]

    @property
    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.adjacency, 1)))

    @property
    def total_weight(self) -> float:
        return float(np.triu(self.adjacency, 1).sum())

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def neighbors(self, i: int) -> np.ndarray:
        return np.nonzero(self.adjacency[i])[0]

    def connected_components(self) -> np.ndarray:
        """Component index per node, numbered by lowest member node."""
        n = self.n_nodes
        comp = np.full(n, -1, dtype=int)
        label = 0
        for start in range(n):
            if comp[start] >= 0:
                continue
            stack = [start]
            comp[start] = label
            while stack:
                u = stack.pop()
                for v in self.neighbors(u):
                    if comp[v] < 0:
                        comp[v] = label
                        stack.append(v)
            label += 1
        return comp

    def to_edge_list(self) -> str:
        return "".join(f"{i} {j} {w:g}\n" for (i, j), w in zip(self.edges, self.weights))

    def write_edge_list(self, path) -> None:
        Path(path).write_text(self.to_edge_list(), encoding="utf-8")


def build_cooccurrence_graph(labels, weighted: bool = True) -> LabelGraph:
    """Edge (i, j) whenever some row assigns both labels.

    Weighted graphs carry the number of such rows; unweighted graphs use 1.0.
    """
    Y = np.asarray(labels, dtype=bool)
    if Y.ndim != 2:
        raise ValueError("labels must be a 2-d boolean matrix")
    Yi = Y.astype(np.int64)
    counts = (Yi.T @ Yi).astype(float)
    np.fill_diagonal(counts, 0.0)
    if not weighted:
        counts = (counts > 0).astype(float)
    return LabelGraph(counts)
