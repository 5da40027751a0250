"""SlashBurn adapted to emit candidate subgraphs.

Each round removes the top hubs of the current giant component. The hubs'
egonets (taken before removal) and the small components that split off are
the candidates; the next round runs on what is left of the giant component.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse.csgraph import connected_components

from ..graph import CandidateSubgraph, Graph
from .base import MIN_CANDIDATE_SIZE, DecomposerConfig, Method


def _components(adj_sub) -> list[np.ndarray]:
    _, lab = connected_components(adj_sub, directed=False)
    order = np.argsort(lab, kind="stable")
    comps = np.split(order, np.flatnonzero(np.diff(lab[order])) + 1)
    comps.sort(key=lambda c: c[0])
    return comps


def slashburn_decompose(g: Graph, cfg: DecomposerConfig | None = None) -> list[CandidateSubgraph]:
    cfg = cfg or DecomposerConfig(method=Method.SLASHBURN)
    if g.n == 0:
        return []
    A = g.to_scipy()
    tag = Method.SLASHBURN.value
    out: list[CandidateSubgraph] = []
    current = np.arange(g.n, dtype=np.int64)
    it = 0
    while len(current) >= MIN_CANDIDATE_SIZE and it < cfg.max_iterations:
        sub = A[current][:, current]
        deg = np.asarray(sub.sum(axis=1)).ravel()
        k = max(1, math.ceil(cfg.hub_fraction * len(current)))
        # highest degree first, lower id on ties (current is ascending)
        hubs_local = np.lexsort((np.arange(len(current)), -deg))[:k]
        for h in hubs_local.tolist():
            ego = np.union1d(sub.indices[sub.indptr[h]:sub.indptr[h + 1]], [h])
            if len(ego) >= MIN_CANDIDATE_SIZE:
                out.append(CandidateSubgraph.of(current[ego].tolist(), tag, it))
        keep = np.ones(len(current), dtype=bool)
        keep[hubs_local] = False
        rest_local = np.flatnonzero(keep)
        if not len(rest_local):
            break
        comps = _components(sub[rest_local][:, rest_local])
        giant = max(range(len(comps)), key=lambda i: (len(comps[i]), -comps[i][0]))
        for i, comp in enumerate(comps):
            if i != giant and len(comp) >= MIN_CANDIDATE_SIZE:
                out.append(CandidateSubgraph.of(current[rest_local[comp]].tolist(), tag, it))
        current = current[rest_local[comps[giant]]]
        it += 1
    return out
