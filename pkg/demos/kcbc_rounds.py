"""
Peeling maximum cores
=====================

KCBC repeatedly takes the nodes of the current maximum core, emits each
connected piece as a candidate and deletes the edges among them. This
prints the core numbers of a small graph and the candidates round by round.
"""

from mdlsumm import Graph, core_numbers, kcbc_decompose, label_all

edges = []
edges += [(u, v) for u in range(6) for v in range(u + 1, 6)]  # K6 on 0-5
edges += [(u, v) for u in range(6, 10) for v in range(u + 1, 10)]  # K4 on 6-9
edges += [(5, 6), (9, 10), (10, 11), (11, 12), (12, 10)]  # bridge and a triangle
edges += [(12, 13), (13, 14)]  # a tail
g = Graph.from_edges(15, edges)

print("core numbers:", core_numbers(g))

cands = kcbc_decompose(g)
for c, lc in zip(cands, label_all(g, cands)):
    print(f"round {c.source_iteration}: nodes {list(c.nodes)}  -> {lc.structure.kind.value}")
