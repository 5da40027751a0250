"""Assign each candidate subgraph its cheapest vocabulary structure."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .codec import binomial_cost, standalone_benefit, structure_cost, universal_int_cost
from .graph import CandidateSubgraph, Graph, cell_count, induced_subgraph
from .structures import KINDS, Kind, Structure


@dataclass(frozen=True)
class LabeledCandidate:
    structure: Structure
    local_error_bits: float
    benefit_bits: float
    cost_bits: float
    candidate: CandidateSubgraph | None = None


def choose_star_role(sub: Graph) -> tuple[int, list[int]]:
    """Hub is the highest-degree node (lowest id on ties); everything else is a spoke."""
    hub = int(np.argmax(sub.degrees))
    return hub, [v for v in range(sub.n) if v != hub]


def _bc_errors(sub: Graph, side: np.ndarray) -> int:
    e = sub.edge_array
    cross = int((side[e[:, 0]] != side[e[:, 1]]).sum())
    n_a = int((side == 0).sum())
    return (sub.m - cross) + (n_a * (sub.n - n_a) - cross)


def _two_colour(sub: Graph) -> np.ndarray:
    adj = sub.adjacency
    side = np.full(sub.n, -1, dtype=np.int64)
    sizes = [0, 0]
    deg = sub.degrees
    for root in np.argsort(-deg, kind="stable").tolist():
        if side[root] >= 0:
            continue
        r = 0 if sizes[0] <= sizes[1] else 1
        side[root] = r
        sizes[r] += 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if side[w] >= 0:
                    continue
                want = 1 - side[u]
                clash = any(side[x] == want for x in adj[w])
                if clash and any(side[x] == 1 - want for x in adj[w]):
                    want = 0 if sizes[0] <= sizes[1] else 1
                elif clash:
                    want = 1 - want
                side[w] = want
                sizes[want] += 1
                queue.append(w)
    return side


def choose_bipartition(sub: Graph) -> tuple[list[int], list[int]]:
    """Split the nodes into two sides for a bipartite-core reading.

    Starts from a BFS 2-colouring rooted at the max-degree node, then makes
    single-node moves while the bipartite-core error strictly drops. Returns
    ``(A, B)`` with ``|A| <= |B|``.
    """
    n = sub.n
    side = _two_colour(sub)
    if side.min() == side.max():
        side[int(np.argmax(sub.degrees))] ^= 1
    rows = np.repeat(np.arange(n), sub.degrees)
    nbr_a = np.bincount(rows, weights=(side[sub.indices] == 0), minlength=n).astype(np.int64)
    nbr_b = sub.degrees - nbr_a
    for _ in range(2 * n):
        n_a = int((side == 0).sum())
        n_b = n - n_a
        in_a = side == 0
        own = np.where(in_a, nbr_a, nbr_b)
        other = np.where(in_a, nbr_b, nbr_a)
        pair_delta = np.where(in_a, n_a - n_b - 1, n_b - n_a - 1)
        delta = 2 * (other - own) + pair_delta
        # a side may not be emptied
        delta[in_a & (n_a == 1)] = 1
        delta[~in_a & (n_b == 1)] = 1
        v = int(np.argmin(delta))
        if delta[v] >= 0:
            break
        nb = sub.neighbors(v)
        if side[v] == 0:
            nbr_a[nb] -= 1
            nbr_b[nb] += 1
        else:
            nbr_b[nb] -= 1
            nbr_a[nb] += 1
        side[v] ^= 1
    a = np.flatnonzero(side == 0).tolist()
    b = np.flatnonzero(side == 1).tolist()
    if len(a) > len(b) or (len(a) == len(b) and b[0] < a[0]):
        a, b = b, a
    return a, b


def _bfs(adj, source: int, n: int):
    dist = [-1] * n
    parent = [-1] * n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                parent[w] = u
                queue.append(w)
    return dist, parent


def _farthest(dist) -> int:
    best = max(dist)
    return dist.index(best)


def choose_chain_order(sub: Graph) -> list[int]:
    """Chain order from a double BFS.

    The spine is a shortest path between two far-apart nodes; remaining nodes
    follow in ascending distance from the spine's end (unreachable ones last,
    by id).
    """
    n, adj = sub.n, sub.adjacency
    dist0, _ = _bfs(adj, 0, n)
    u = _farthest(dist0)
    dist_u, parent = _bfs(adj, u, n)
    v = _farthest(dist_u)
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    path.reverse()
    on_path = set(path)
    dist_v, _ = _bfs(adj, v, n)
    rest = [x for x in range(n) if x not in on_path]
    rest.sort(key=lambda x: (dist_v[x] < 0, dist_v[x], x))
    return path + rest


def _local_errors(s: Structure, sub: Graph) -> int:
    """Pairs inside the candidate where the structure and the subgraph disagree."""
    n, m = sub.n, sub.m
    k = s.kind
    if k is Kind.FULL_CLIQUE:
        return cell_count(n) - m
    if k is Kind.STAR:
        d = int(sub.degrees[s.hub])
        return (n - 1 - d) + (m - d)
    if k is Kind.BIPARTITE_CORE:
        side = np.ones(n, dtype=np.int64)
        side[list(s.parts[0])] = 0
        return _bc_errors(sub, side)
    order = s.parts[0]
    present = sum(1 for a, b in zip(order, order[1:]) if sub.has_edge(a, b))
    return (len(order) - 1 - present) + (m - present)


def local_error_cost(s: Structure, sub: Graph) -> float:
    """Binomial code for the mismatched pairs within the candidate's area.

    ``s`` must be expressed in ``sub``'s node ids and cover all of its nodes.
    """
    if len(s) != sub.n:
        raise ValueError("structure must cover exactly the subgraph's nodes")
    errs = _local_errors(s, sub)
    return universal_int_cost(errs + 1) + binomial_cost(cell_count(sub.n), errs)


def candidate_structures(sub: Graph) -> dict[Kind, Structure]:
    """One instance of each vocabulary type over ``sub``'s nodes (local ids)."""
    hub, spokes = choose_star_role(sub)
    a, b = choose_bipartition(sub)
    return {
        Kind.FULL_CLIQUE: Structure.clique(range(sub.n)),
        Kind.STAR: Structure.star(hub, spokes),
        Kind.BIPARTITE_CORE: Structure.bipartite(a, b),
        Kind.CHAIN: Structure.chain(choose_chain_order(sub)),
    }


def label_subgraph(g: Graph, c: CandidateSubgraph) -> LabeledCandidate:
    """Cheapest of the four types on the candidate's induced subgraph.

    Ties go to the denser type (fc, st, bc, ch).
    """
    sub = induced_subgraph(g, np.asarray(c.nodes, dtype=np.int64))
    if sub.n < 3:
        raise ValueError("candidates need at least 3 nodes")
    best = None
    for kind, local in candidate_structures(sub).items():
        s = local.relabel(sub.origin)
        local_bits = local_error_cost(local, sub)
        cost = structure_cost(s, g.n) + local_bits
        if best is None or cost < best[0]:
            best = (cost, s, local_bits)
    cost, s, local_bits = best
    benefit = standalone_benefit(g, s)
    return LabeledCandidate(s, local_bits, benefit, cost, c)


def label_all(g: Graph, candidates) -> list[LabeledCandidate]:
    return [label_subgraph(g, c) for c in candidates]


__all__ = [
    "KINDS",
    "LabeledCandidate",
    "candidate_structures",
    "choose_bipartition",
    "choose_chain_order",
    "choose_star_role",
    "label_all",
    "label_subgraph",
    "local_error_cost",
]
