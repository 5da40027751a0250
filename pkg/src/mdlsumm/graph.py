"""Immutable undirected simple graphs backed by CSR arrays."""

from __future__ import annotations

import gzip
import io
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import BinaryIO, Iterable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc


class ParseError(ValueError):
    """Malformed edge-list or partition input."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class Graph:
    """Undirected, unweighted graph without self-loops or parallel edges.

    Nodes are the dense integers ``0..n-1``. ``labels[i]`` is the external id
    of node ``i`` and ``origin`` (only set on induced subgraphs) maps each
    node back to its index in the parent graph.
    """

    def __init__(self, indptr, indices, labels=None, origin=None):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        n = len(self.indptr) - 1
        self.labels = np.arange(n, dtype=np.int64) if labels is None else np.asarray(labels, dtype=np.int64)
        self.origin = None if origin is None else np.asarray(origin, dtype=np.int64)
        for arr in (self.indptr, self.indices, self.labels):
            arr.flags.writeable = False

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> "Graph":
        """Build from an iterable or ``(k, 2)`` array of node pairs.

        Self-loops and duplicates (in either direction) are dropped.
        """
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint outside 0..n-1")
        arr = arr[arr[:, 0] != arr[:, 1]]
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        keys = np.unique(lo * max(n, 1) + hi)
        lo, hi = keys // max(n, 1), keys % max(n, 1)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(indptr, dst, labels)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def adjacency(self) -> list[list[int]]:
        """Sorted neighbor lists as plain Python lists (for pure-Python loops)."""
        ind = self.indices.tolist()
        ptr = self.indptr.tolist()
        return [ind[ptr[i]:ptr[i + 1]] for i in range(self.n)]

    @cached_property
    def edge_array(self) -> np.ndarray:
        """``(m, 2)`` array of edges with ``u < v``, sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        mask = src < self.indices
        return np.stack([src[mask], self.indices[mask]], axis=1)

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """Sorted cell indices (see :func:`pair_index`) of all edges."""
        e = self.edge_array
        return np.sort(pair_index(e[:, 0], e[:, 1], self.n))

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def to_scipy(self) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def node_index(self, label: int) -> int:
        hits = np.flatnonzero(self.labels == label)
        if not len(hits):
            raise KeyError(label)
        return int(hits[0])

    @cached_property
    def label_index(self) -> dict[int, int]:
        return {int(lab): i for i, lab in enumerate(self.labels.tolist())}


def pair_index(u, v, n: int):
    """Index of the unordered pair ``{u, v}`` (``u < v``) among the n(n-1)/2 cells.

    Row-major over the strict upper triangle, so indices are dense in
    ``[0, n(n-1)/2)``.
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def cell_count(n: int) -> int:
    return n * (n - 1) // 2


# ----------------------------------------------------------------------------
# I/O


def _read_bytes(source) -> bytes:
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.read()
        if isinstance(data, str):
            data = data.encode()
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    return data


def load_edge_list(source: bytes | str | os.PathLike | BinaryIO, comments: str = "#%") -> Graph:
    """Parse a whitespace-separated edge list.

    ``source`` may be raw bytes, a path, or a binary file object; gzip input is
    detected from its magic bytes. Lines starting with any character in
    ``comments`` are skipped, as are blank lines. Columns after the first two
    (weights, timestamps) are ignored. External ids are remapped to dense
    indices in order of first appearance.
    """
    text = _read_bytes(source).decode("utf-8", errors="replace")
    index: dict[int, int] = {}
    src: list[int] = []
    dst: list[int] = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        s = line.strip()
        if not s or s[0] in comments:
            continue
        tokens = s.split()
        if len(tokens) < 2:
            raise ParseError(f"expected two node ids, got {s!r}", lineno)
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer node id in {s!r}", lineno) from None
        if a < 0 or b < 0:
            raise ParseError(f"negative node id in {s!r}", lineno)
        for x in (a, b):
            if x not in index:
                index[x] = len(index)
        src.append(index[a])
        dst.append(index[b])
    labels = np.fromiter(index.keys(), dtype=np.int64, count=len(index))
    edges = np.stack([np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)], axis=1)
    return Graph.from_edges(len(index), edges, labels)


def write_edge_list(g: Graph) -> bytes:
    """Serialize with external labels, one ``u v`` line per edge.

    Isolated nodes cannot be represented and are lost on re-load.
    """
    lab = g.labels
    lines = [f"{lab[u]} {lab[v]}\n" for u, v in g.edge_array.tolist()]
    return "".join(lines).encode()


# ----------------------------------------------------------------------------
# Structural queries


def _check_nodes(g: Graph, nodes: np.ndarray) -> None:
    if nodes.size and (nodes.min() < 0 or nodes.max() >= g.n):
        raise ValueError("node outside the graph")


def induced_subgraph(g: Graph, nodes: Iterable[int]) -> Graph:
    """Subgraph on ``nodes`` with ids relocalized to ``0..k-1`` in ascending order.

    The result keeps the parent's external labels, and ``origin`` holds each
    node's index in ``g``.
    """
    keep = np.unique(np.fromiter(nodes, dtype=np.int64) if not isinstance(nodes, np.ndarray) else nodes.astype(np.int64))
    _check_nodes(g, keep)
    local = np.full(g.n, -1, dtype=np.int64)
    local[keep] = np.arange(len(keep))
    rows = np.repeat(np.arange(g.n, dtype=np.int64), g.degrees)
    mask = (local[rows] >= 0) & (local[g.indices] >= 0) & (rows < g.indices)
    edges = np.stack([local[rows[mask]], local[g.indices[mask]]], axis=1)
    sub = Graph.from_edges(len(keep), edges, g.labels[keep])
    sub.origin = keep
    sub.origin.flags.writeable = False
    return sub


def connected_components(g: Graph) -> list[np.ndarray]:
    """Components as sorted node arrays, ordered by their smallest node."""
    if g.n == 0:
        return []
    _, lab = _cc(g.to_scipy(), directed=False)
    order = np.argsort(lab, kind="stable")
    bounds = np.flatnonzero(np.diff(lab[order])) + 1
    comps = np.split(order, bounds)
    comps.sort(key=lambda c: c[0])
    return comps


def egonet(g: Graph, v: int) -> np.ndarray:
    """``v`` together with its neighbors, sorted."""
    if not 0 <= v < g.n:
        raise ValueError(f"node {v} outside the graph")
    return np.union1d(g.neighbors(v), [v])


@dataclass(frozen=True)
class CandidateSubgraph:
    """Node set proposed by a decomposer for labeling.

    ``edges`` optionally records the edge set the decomposer saw when it
    emitted the candidate (KCBC works on a shrinking copy of the graph).
    """

    nodes: tuple[int, ...]
    source_method: str
    source_iteration: int = 0
    edges: frozenset[tuple[int, int]] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.nodes) < 3:
            raise ValueError("candidate subgraphs need at least 3 nodes")
        if self.source_iteration < 0:
            raise ValueError("source_iteration must be nonnegative")

    @classmethod
    def of(cls, nodes, method: str, iteration: int = 0, edges=None) -> "CandidateSubgraph":
        return cls(tuple(sorted(int(x) for x in nodes)), method, iteration, edges)

    def __len__(self) -> int:
        return len(self.nodes)
