"""Vocabulary structures: full cliques, stars, bipartite cores and chains."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graph import pair_index


class Kind(str, enum.Enum):
    FULL_CLIQUE = "fc"
    STAR = "st"
    BIPARTITE_CORE = "bc"
    CHAIN = "ch"

    def __str__(self) -> str:
        return self.value


# Fixed serialization order, also the tie order for labeling (denser first).
KINDS = (Kind.FULL_CLIQUE, Kind.STAR, Kind.BIPARTITE_CORE, Kind.CHAIN)


@dataclass(frozen=True, eq=True)
class Structure:
    """A typed node layout.

    ``parts`` depends on the kind: ``(nodes,)`` for cliques, ``((hub,), spokes)``
    for stars, ``(A, B)`` for bipartite cores and ``(ordered nodes,)`` for
    chains. Use the named constructors rather than building this directly.
    """

    kind: Kind
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        k, p = self.kind, self.parts
        if k is Kind.FULL_CLIQUE:
            if len(p) != 1 or len(p[0]) < 3 or len(set(p[0])) != len(p[0]):
                raise ValueError("full clique needs >= 3 distinct nodes")
        elif k is Kind.STAR:
            if len(p) != 2 or len(p[0]) != 1 or len(p[1]) < 2 or p[0][0] in p[1] or len(set(p[1])) != len(p[1]):
                raise ValueError("star needs one hub and >= 2 distinct spokes")
        elif k is Kind.BIPARTITE_CORE:
            if len(p) != 2 or len(p[0]) < 1 or len(p[1]) < 2 or set(p[0]) & set(p[1]):
                raise ValueError("bipartite core needs disjoint sides with |A| >= 1, |B| >= 2")
        elif k is Kind.CHAIN:
            if len(p) != 1 or len(p[0]) < 3 or len(set(p[0])) != len(p[0]):
                raise ValueError("chain needs >= 3 distinct nodes")

    @classmethod
    def clique(cls, nodes) -> "Structure":
        return cls(Kind.FULL_CLIQUE, (tuple(sorted(int(x) for x in nodes)),))

    @classmethod
    def star(cls, hub: int, spokes) -> "Structure":
        return cls(Kind.STAR, ((int(hub),), tuple(sorted(int(x) for x in spokes))))

    @classmethod
    def bipartite(cls, a, b) -> "Structure":
        return cls(Kind.BIPARTITE_CORE, (tuple(sorted(int(x) for x in a)), tuple(sorted(int(x) for x in b))))

    @classmethod
    def chain(cls, order) -> "Structure":
        return cls(Kind.CHAIN, (tuple(int(x) for x in order),))

    @property
    def hub(self) -> int:
        return self.parts[0][0]

    @property
    def spokes(self) -> tuple[int, ...]:
        return self.parts[1]

    @cached_property
    def nodes(self) -> tuple[int, ...]:
        """All nodes, sorted."""
        return tuple(sorted(x for part in self.parts for x in part))

    def __len__(self) -> int:
        return sum(len(p) for p in self.parts)

    def implied_pairs(self) -> np.ndarray:
        """``(k, 2)`` array of the node pairs this structure asserts as edges, ``u < v``."""
        k = self.kind
        if k is Kind.FULL_CLIQUE:
            nodes = np.asarray(self.parts[0], dtype=np.int64)
            i, j = np.triu_indices(len(nodes), 1)
            a, b = nodes[i], nodes[j]
        elif k is Kind.STAR:
            b = np.asarray(self.parts[1], dtype=np.int64)
            a = np.full(len(b), self.hub, dtype=np.int64)
        elif k is Kind.BIPARTITE_CORE:
            left = np.asarray(self.parts[0], dtype=np.int64)
            right = np.asarray(self.parts[1], dtype=np.int64)
            a = np.repeat(left, len(right))
            b = np.tile(right, len(left))
        else:
            order = np.asarray(self.parts[0], dtype=np.int64)
            a, b = order[:-1], order[1:]
        return np.stack([np.minimum(a, b), np.maximum(a, b)], axis=1)

    def implied_count(self) -> int:
        k, p = self.kind, self.parts
        if k is Kind.FULL_CLIQUE:
            s = len(p[0])
            return s * (s - 1) // 2
        if k is Kind.STAR:
            return len(p[1])
        if k is Kind.BIPARTITE_CORE:
            return len(p[0]) * len(p[1])
        return len(p[0]) - 1

    def cell_keys(self, n: int) -> np.ndarray:
        pairs = self.implied_pairs()
        return pair_index(pairs[:, 0], pairs[:, 1], n)

    def relabel(self, mapping) -> "Structure":
        """Map every node through ``mapping`` (array or dict), keeping roles."""
        parts = tuple(tuple(int(mapping[x]) for x in part) for part in self.parts)
        if self.kind is Kind.CHAIN:
            return Structure(self.kind, parts)
        return Structure(self.kind, tuple(tuple(sorted(p)) for p in parts))

    def to_line(self, labels=None) -> str:
        """Model-file line, e.g. ``st 4, 1 2 3``; ``labels`` maps to external ids."""
        lab = (lambda x: x) if labels is None else (lambda x: int(labels[x]))
        fmt = lambda part: " ".join(str(lab(x)) for x in part)
        if self.kind in (Kind.STAR, Kind.BIPARTITE_CORE):
            return f"{self.kind.value} {fmt(self.parts[0])}, {fmt(self.parts[1])}"
        return f"{self.kind.value} {fmt(self.parts[0])}"

    @classmethod
    def from_line(cls, line: str, index=None) -> "Structure":
        """Inverse of :meth:`to_line`; ``index`` maps external ids to node indices."""
        tag, _, rest = line.strip().partition(" ")
        conv = (lambda t: int(t)) if index is None else (lambda t: index[int(t)])
        groups = [[conv(t) for t in chunk.split()] for chunk in rest.split(",")]
        kind = Kind(tag)
        if kind is Kind.FULL_CLIQUE:
            return cls.clique(groups[0])
        if kind is Kind.STAR:
            return cls.star(groups[0][0], groups[1])
        if kind is Kind.BIPARTITE_CORE:
            return cls.bipartite(groups[0], groups[1])
        return cls.chain(groups[0])
