"""Core numbers and KCBC, the k-core based clustering."""

from __future__ import annotations

from collections import deque

from ..graph import CandidateSubgraph, Graph
from .base import MIN_CANDIDATE_SIZE, Method


def core_numbers_from_adjacency(adj) -> list[int]:
    """Bucket-sort peeling (Batagelj & Zaversnik), O(n + m).

    ``adj`` is any sequence of neighbor collections.
    """
    n = len(adj)
    if n == 0:
        return []
    deg = [len(a) for a in adj]
    max_deg = max(deg)
    bin_start = [0] * (max_deg + 2)
    for d in deg:
        bin_start[d + 1] += 1
    for d in range(1, max_deg + 2):
        bin_start[d] += bin_start[d - 1]
    pos = [0] * n
    vert = [0] * n
    fill = bin_start[:]
    for v in range(n):
        pos[v] = fill[deg[v]]
        vert[pos[v]] = v
        fill[deg[v]] += 1
    for i in range(n):
        v = vert[i]
        dv = deg[v]
        for u in adj[v]:
            du = deg[u]
            if du > dv:
                # swap u with the first vertex of its bin, then shrink the bin
                pu, pw = pos[u], bin_start[du]
                w = vert[pw]
                if u != w:
                    vert[pu], vert[pw] = w, u
                    pos[u], pos[w] = pw, pu
                bin_start[du] += 1
                deg[u] = du - 1
    return deg


def core_numbers(g: Graph) -> list[int]:
    """Largest k such that the node survives in the k-core."""
    return core_numbers_from_adjacency(g.adjacency)


def _components_within(adj, members: set[int]) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for root in sorted(members):
        if root in seen:
            continue
        seen.add(root)
        comp = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in members and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def kcbc_decompose(g: Graph, max_iterations: int | None = None) -> list[CandidateSubgraph]:
    """Repeatedly peel off the maximum core.

    Each round takes the nodes of the current k_max-core, emits every
    connected component of it as a candidate, and deletes the edges among
    those nodes from a working copy. Stops once k_max <= 1. Each candidate's
    ``edges`` holds the working-copy edges it was emitted with, so candidates
    are edge-disjoint in that sense even when their induced subgraphs in
    ``g`` overlap.
    """
    adj = [set(a) for a in g.adjacency]
    out: list[CandidateSubgraph] = []
    it = 0
    while max_iterations is None or it < max_iterations:
        core = core_numbers_from_adjacency(adj)
        k_max = max(core, default=0)
        if k_max <= 1:
            break
        members = {v for v, c in enumerate(core) if c == k_max}
        for comp in _components_within(adj, members):
            if len(comp) < MIN_CANDIDATE_SIZE:
                continue
            cs = set(comp)
            edges = frozenset((u, w) for u in comp for w in adj[u] if u < w and w in cs)
            out.append(CandidateSubgraph.of(comp, Method.KCBC.value, it, edges))
        for u in members:
            adj[u] -= members
        it += 1
    return out
