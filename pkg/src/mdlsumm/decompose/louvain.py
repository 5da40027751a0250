"""Louvain modularity optimisation with a resolution parameter."""

from __future__ import annotations

import numpy as np

from ..graph import Graph
from .base import DecomposerConfig, Method, Partition

_EPS = 1e-12


class _Level:
    """Weighted graph for one Louvain level. Self-loop weight is stored per node."""

    def __init__(self, nbrs: list[dict[int, float]], loops: list[float]):
        self.nbrs = nbrs
        self.loops = loops
        self.n = len(nbrs)
        self.strength = [sum(nb.values()) + 2 * lp for nb, lp in zip(nbrs, loops)]
        self.two_m = sum(self.strength)

    def modularity(self, comm: list[int], resolution: float) -> float:
        if self.two_m == 0:
            return 0.0
        inside: dict[int, float] = {}
        tot: dict[int, float] = {}
        for i in range(self.n):
            c = comm[i]
            tot[c] = tot.get(c, 0.0) + self.strength[i]
            w = 2 * self.loops[i] + sum(wt for j, wt in self.nbrs[i].items() if comm[j] == c)
            inside[c] = inside.get(c, 0.0) + w
        return sum(inside.values()) / self.two_m - resolution * sum((t / self.two_m) ** 2 for t in tot.values())


def _move_nodes(level: _Level, order: list[int], resolution: float, init=None) -> tuple[list[int], bool]:
    """Phase one: local moves until no node gains by switching community."""
    comm = list(range(level.n)) if init is None else list(init)
    tot = [0.0] * level.n
    for i, c in enumerate(comm):
        tot[c] += level.strength[i]
    two_m = level.two_m
    moved_any = False
    if two_m == 0:
        return comm, False
    while True:
        moved = False
        for i in order:
            ki = level.strength[i]
            own = comm[i]
            links: dict[int, float] = {}
            for j, w in level.nbrs[i].items():
                links[comm[j]] = links.get(comm[j], 0.0) + w
            tot[own] -= ki
            scale = resolution * ki / two_m
            stay = links.get(own, 0.0) - scale * tot[own]
            best_c, best_gain = own, None
            for c in sorted(links):
                if c == own:
                    continue
                gain = links[c] - scale * tot[c]
                if best_gain is None or gain > best_gain + _EPS:
                    best_c, best_gain = c, gain
            if best_gain is not None and best_gain > stay + _EPS:
                comm[i] = best_c
                moved = True
            tot[comm[i]] += ki
        if not moved:
            return comm, moved_any
        moved_any = True


def _aggregate(level: _Level, comm: list[int]) -> tuple[_Level, list[int]]:
    relabel: dict[int, int] = {}
    dense = []
    for c in comm:
        if c not in relabel:
            relabel[c] = len(relabel)
        dense.append(relabel[c])
    k = len(relabel)
    nbrs: list[dict[int, float]] = [dict() for _ in range(k)]
    loops = [0.0] * k
    for i in range(level.n):
        ci = dense[i]
        loops[ci] += level.loops[i]
        for j, w in level.nbrs[i].items():
            cj = dense[j]
            if ci == cj:
                # each internal edge is seen from both ends
                loops[ci] += w / 2
            else:
                nbrs[ci][cj] = nbrs[ci].get(cj, 0.0) + w
    return _Level(nbrs, loops), dense


def louvain_levels(g: Graph, cfg: DecomposerConfig) -> tuple[list[Partition], list[float]]:
    """Run Louvain and return the partition and modularity after every contraction.

    Once the level hierarchy converges, a node-level sweep starting from the
    current partition checks for remaining gains; if any node moves, the
    hierarchy is rebuilt from that partition. The final partition is therefore
    a fixed point of single-node moves.
    """
    rng = np.random.default_rng(cfg.seed)
    base = _Level([{int(j): 1.0 for j in nb} for nb in g.adjacency], [0.0] * g.n)
    base_order = rng.permutation(g.n).tolist()
    level = base
    membership = np.arange(g.n, dtype=np.int64)
    partitions: list[Partition] = []
    scores: list[float] = []

    def record(level, membership):
        partitions.append(Partition.from_labels(membership))
        scores.append(level.modularity(list(range(level.n)), cfg.resolution))

    for _ in range(cfg.max_iterations):
        order = base_order if level is base else rng.permutation(level.n).tolist()
        comm, moved = _move_nodes(level, order, cfg.resolution)
        if moved:
            level, dense = _aggregate(level, comm)
            membership = np.asarray(dense, dtype=np.int64)[membership]
            record(level, membership)
            continue
        comm, moved = _move_nodes(base, base_order, cfg.resolution, init=membership.tolist())
        if not moved:
            break
        level, dense = _aggregate(base, comm)
        membership = np.asarray(dense, dtype=np.int64)
        record(level, membership)
    if not partitions:
        record(level, membership)
    return partitions, scores


def louvain_cluster(g: Graph, cfg: DecomposerConfig | None = None) -> Partition:
    cfg = cfg or DecomposerConfig(method=Method.LOUVAIN)
    if g.n == 0:
        return Partition.from_labels([])
    partitions, _ = louvain_levels(g, cfg)
    return partitions[-1]


def local_move_gains(g: Graph, p: Partition, resolution: float) -> list[float]:
    """Best modularity-numerator gain each node could get by one move from ``p``.

    Zero everywhere means ``p`` is a fixed point of the local-move phase.
    """
    a = p.assignment
    deg = g.degrees.astype(float)
    two_m = float(deg.sum())
    tot = np.bincount(a, weights=deg, minlength=p.community_count)
    gains = []
    for i in range(g.n):
        links: dict[int, float] = {}
        for j in g.neighbors(i).tolist():
            links[int(a[j])] = links.get(int(a[j]), 0.0) + 1.0
        own = int(a[i])
        scale = resolution * deg[i] / two_m if two_m else 0.0
        stay = links.get(own, 0.0) - scale * (tot[own] - deg[i])
        best = max((links[c] - scale * tot[c] for c in links if c != own), default=stay)
        gains.append(max(0.0, best - stay))
    return gains
