"""Multilevel k-way partitioning in the style of METIS.

Coarsen by heavy-edge matching, grow an initial partition greedily on the
coarsest graph, then project back level by level, refining each level with
boundary Fiduccia-Mattheyses moves and Kernighan-Lin pair swaps.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from ..graph import Graph
from .base import DecomposerConfig, Method, Partition

INITIAL_TRIALS = 8
MAX_PASSES = 10
# a pass gives up after this many moves without a new best cut
PASS_PATIENCE = 50
SWAP_CANDIDATES = 5


class _WGraph:
    def __init__(self, nbrs: list[dict[int, float]], vw: list[int]):
        self.nbrs = nbrs
        self.vw = vw
        self.n = len(nbrs)


def _coarsen(wg: _WGraph, rng, weight_cap: int) -> tuple[_WGraph, list[int]]:
    """One round of heavy-edge matching. Returns the coarse graph and the fine-to-coarse map."""
    match = [-1] * wg.n
    for u in rng.permutation(wg.n).tolist():
        if match[u] != -1:
            continue
        best, best_w = u, -1.0
        for v, w in wg.nbrs[u].items():
            if match[v] == -1 and v != u and wg.vw[u] + wg.vw[v] <= weight_cap:
                if w > best_w or (w == best_w and v < best):
                    best, best_w = v, w
        match[u] = best
        match[best] = u
    cmap = [-1] * wg.n
    k = 0
    for u in range(wg.n):
        if cmap[u] == -1:
            cmap[u] = cmap[match[u]] = k
            k += 1
    vw = [0] * k
    nbrs: list[dict[int, float]] = [dict() for _ in range(k)]
    for u in range(wg.n):
        cu = cmap[u]
        vw[cu] += wg.vw[u]
        for v, w in wg.nbrs[u].items():
            cv = cmap[v]
            if cv != cu:
                nbrs[cu][cv] = nbrs[cu].get(cv, 0.0) + w
    return _WGraph(nbrs, vw), cmap


class _State:
    """A k-way assignment with per-node connectivity to each part."""

    def __init__(self, wg: _WGraph, part: list[int], k: int, max_weight: int):
        self.wg = wg
        self.part = part
        self.k = k
        self.max_weight = max_weight
        self.pw = [0] * k
        for u, p in enumerate(part):
            self.pw[p] += wg.vw[u]
        self.conn: list[dict[int, float]] = []
        for u in range(wg.n):
            c: dict[int, float] = {}
            for v, w in wg.nbrs[u].items():
                c[part[v]] = c.get(part[v], 0.0) + w
            self.conn.append(c)

    def gain(self, u: int, q: int) -> float:
        c = self.conn[u]
        return c.get(q, 0.0) - c.get(self.part[u], 0.0)

    def best_target(self, u: int) -> tuple[float, int]:
        """Best adjacent part that can take ``u`` without overflowing."""
        best = (-math.inf, -1)
        p, vu = self.part[u], self.wg.vw[u]
        for q in sorted(self.conn[u]):
            if q != p and self.pw[q] + vu <= self.max_weight:
                g = self.gain(u, q)
                if g > best[0]:
                    best = (g, q)
        return best

    def move(self, u: int, q: int):
        p = self.part[u]
        vu = self.wg.vw[u]
        self.pw[p] -= vu
        self.pw[q] += vu
        self.part[u] = q
        for v, w in self.wg.nbrs[u].items():
            c = self.conn[v]
            c[p] -= w
            if c[p] <= 0:
                del c[p]
            c[q] = c.get(q, 0.0) + w

    def cut(self) -> float:
        total = 0.0
        for u in range(self.wg.n):
            total += sum(w for q, w in self.conn[u].items() if q != self.part[u])
        return total / 2

    def is_boundary(self, u: int) -> bool:
        c = self.conn[u]
        return len(c) > 1 or (len(c) == 1 and self.part[u] not in c)

    def overweight(self) -> int:
        return sum(max(0, w - self.max_weight) for w in self.pw)


def _rebalance(st: _State):
    """Move nodes out of overweight parts, cheapest cut increase first."""
    while True:
        heavy = max(range(st.k), key=lambda p: st.pw[p])
        if st.pw[heavy] <= st.max_weight:
            return
        best = None
        for u in range(st.wg.n):
            if st.part[u] != heavy:
                continue
            vu = st.wg.vw[u]
            for q in range(st.k):
                if q == heavy or st.pw[q] + vu > st.max_weight:
                    continue
                key = (st.gain(u, q), -st.pw[q], -vu)
                if best is None or key > best[0]:
                    best = (key, u, q)
        if best is None:
            # coarse weights too lumpy to fit; fix at a finer level
            return
        st.move(best[1], best[2])


def _fm_pass(st: _State) -> float:
    """One boundary FM pass with best-prefix rollback. Returns the cut reduction."""
    heap = []
    for u in range(st.wg.n):
        if st.is_boundary(u):
            g, q = st.best_target(u)
            if q >= 0:
                heap.append((-g, u, q))
    heapq.heapify(heap)
    locked: set[int] = set()
    moves: list[tuple[int, int]] = []
    total = best_total = 0.0
    best_len = 0
    while heap and len(moves) - best_len < PASS_PATIENCE:
        neg, u, q = heapq.heappop(heap)
        if u in locked:
            continue
        g, q2 = st.best_target(u)
        if q2 < 0:
            continue
        if q2 != q or g != -neg:
            heapq.heappush(heap, (-g, u, q2))
            continue
        p = st.part[u]
        st.move(u, q)
        locked.add(u)
        moves.append((u, p))
        total += g
        if total > best_total + 1e-12:
            best_total, best_len = total, len(moves)
        for v in st.wg.nbrs[u]:
            if v not in locked:
                gv, qv = st.best_target(v)
                if qv >= 0:
                    heapq.heappush(heap, (-gv, v, qv))
    for u, p in reversed(moves[best_len:]):
        st.move(u, p)
    return best_total


def _kl_pass(st: _State) -> float:
    """Kernighan-Lin pair swaps between adjacent parts, best-prefix rollback.

    Swaps keep part weights unchanged for equal node weights, so they still
    make progress when every single move would break the balance bound.
    Candidates sit in one heap per (from, to) part pair; entries go stale
    when a node is touched and are skipped lazily. The best swap of each
    part pair is cached until one of its inputs changes.
    """
    locked: set[int] = set()
    version = [0] * st.wg.n
    heaps: dict[tuple[int, int], list[tuple[float, int, int]]] = {}
    tops: dict[tuple[int, int], list[tuple[float, int]]] = {}
    seen_in: dict[int, set[tuple[int, int]]] = {}
    pair_best: dict[tuple[int, int], tuple[float, int, int] | None] = {}

    def forget(key):
        tops.pop(key, None)
        pair_best.pop(key if key[0] < key[1] else (key[1], key[0]), None)

    def refresh(u: int):
        version[u] += 1
        for key in seen_in.pop(u, ()):
            forget(key)
        if u in locked or not st.is_boundary(u):
            return
        p = st.part[u]
        for q in st.conn[u]:
            if q != p:
                heapq.heappush(heaps.setdefault((p, q), []), (-st.gain(u, q), u, version[u]))
                forget((p, q))

    def top(key) -> list[tuple[float, int]]:
        if key in tops:
            return tops[key]
        heap = heaps.get(key)
        out: list[tuple[float, int, int]] = []
        while heap and len(out) < SWAP_CANDIDATES:
            item = heapq.heappop(heap)
            if item[2] == version[item[1]]:
                out.append(item)
        for item in out:
            heapq.heappush(heap, item)
            seen_in.setdefault(item[1], set()).add(key)
        tops[key] = [(-g, u) for g, u, _ in out]
        return tops[key]

    def best_swap(p: int, q: int):
        if (p, q) in pair_best:
            return pair_best[(p, q)]
        best = None
        for ga, a in top((p, q)):
            va = st.wg.vw[a]
            for gb, b in top((q, p)):
                vb = st.wg.vw[b]
                if st.pw[p] - va + vb > st.max_weight or st.pw[q] - vb + va > st.max_weight:
                    continue
                g = ga + gb - 2 * st.wg.nbrs[a].get(b, 0.0)
                if best is None or g > best[0]:
                    best = (g, a, b)
        pair_best[(p, q)] = best
        return best

    for u in range(st.wg.n):
        refresh(u)
    swaps: list[tuple[int, int, int, int]] = []
    total = best_total = 0.0
    best_len = 0
    while len(swaps) - best_len < PASS_PATIENCE:
        best = None
        for p, q in sorted(heaps):
            if p > q or (q, p) not in heaps:
                continue
            cand = best_swap(p, q)
            if cand is not None and (best is None or cand[0] > best[0]):
                best = cand
        if best is None:
            break
        g, a, b = best
        pa, pb = st.part[a], st.part[b]
        st.move(a, pb)
        st.move(b, pa)
        locked.update((a, b))
        for x in {a, b, *st.wg.nbrs[a], *st.wg.nbrs[b]}:
            refresh(x)
        # part weights moved, so every pair involving pa or pb is re-scored
        for key in [k for k in pair_best if pa in k or pb in k]:
            del pair_best[key]
        swaps.append((a, pa, b, pb))
        total += g
        if total > best_total + 1e-12:
            best_total, best_len = total, len(swaps)
    for a, pa, b, pb in reversed(swaps[best_len:]):
        st.move(a, pa)
        st.move(b, pb)
    return best_total


def _refine(st: _State):
    _rebalance(st)
    for _ in range(MAX_PASSES):
        gained = _fm_pass(st)
        if gained <= 1e-12:
            # single moves are stuck (often on the balance bound); try swaps
            gained = _kl_pass(st)
        if gained <= 1e-12:
            break


def _grow(wg: _WGraph, k: int, max_weight: int, rng) -> list[int]:
    """Greedy graph growing: each part expands from a random seed along the best frontier node."""
    total = sum(wg.vw)
    part = [-1] * wg.n
    unassigned = set(range(wg.n))
    for p in range(k - 1):
        target = total * (p + 1) / k - total * p / k
        weight = 0
        frontier: dict[int, float] = {}
        while unassigned and weight < target:
            if not frontier:
                seed = sorted(unassigned)[int(rng.integers(len(unassigned)))]
                frontier[seed] = 0.0
            u = max(frontier, key=lambda x: (frontier[x], -x))
            del frontier[u]
            if weight + wg.vw[u] > max_weight and weight > 0:
                break
            part[u] = p
            unassigned.discard(u)
            weight += wg.vw[u]
            for v, w in wg.nbrs[u].items():
                if part[v] == -1:
                    frontier[v] = frontier.get(v, 0.0) + w
    for u in unassigned:
        part[u] = k - 1
    return part


def multilevel_partition(g: Graph, cfg: DecomposerConfig | None = None) -> Partition:
    """Split ``g`` into ``k`` parts of at most ``floor((1 + tol) * ceil(n / k))`` nodes with a small cut."""
    cfg = cfg or DecomposerConfig(method=Method.MULTILEVEL)
    n = g.n
    if n == 0:
        return Partition.from_labels([])
    k = cfg.clusters_for(n)
    if k > n:
        raise ValueError(f"cannot split {n} nodes into {k} parts")
    if k == n:
        return Partition.from_labels(np.arange(n))
    rng = np.random.default_rng(cfg.seed)
    max_weight = max(math.ceil(n / k), math.floor((1 + cfg.balance_tolerance) * math.ceil(n / k)))

    levels = [_WGraph([{int(v): 1.0 for v in nb} for nb in g.adjacency], [1] * n)]
    maps: list[list[int]] = []
    stop = max(50, 20 * k)
    weight_cap = max(1, max_weight // 2)
    while levels[-1].n > stop:
        coarse, cmap = _coarsen(levels[-1], rng, weight_cap)
        if coarse.n > 0.95 * levels[-1].n:
            break
        levels.append(coarse)
        maps.append(cmap)

    coarsest = levels[-1]
    best = None
    for _ in range(INITIAL_TRIALS):
        st = _State(coarsest, _grow(coarsest, k, max_weight, rng), k, max_weight)
        _refine(st)
        key = (st.overweight(), st.cut())
        if best is None or key < best[0]:
            best = (key, st.part)
    part = best[1]

    for depth in range(len(maps) - 1, -1, -1):
        fine = levels[depth]
        cmap = maps[depth]
        part = [part[cmap[u]] for u in range(fine.n)]
        st = _State(fine, part, k, max_weight)
        _refine(st)
        part = st.part
    return Partition.from_labels(part)
