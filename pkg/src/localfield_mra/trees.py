"""Rooted trees on the vertex set GF(p^s) with root 0.

Vertices are field elements (integers 0..q-1).  A tree is stored as its
parent map; the root 0 has no parent.  Prüfer sequences give the bijection
with sequences of length q-2 used for random generation and enumeration.
"""

from __future__ import annotations

import heapq
import itertools
import os
import random
from collections import deque
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from .gf import GF

DEFAULT_CAP = 10**6
CAP_ENV = "LOCALFIELD_MRA_CAP"


class TreeError(ValueError):
    pass


class CycleError(TreeError):
    pass


class CapExceededError(ValueError):
    pass


def enumeration_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{CAP_ENV} must be >= 1")
    return cap


@dataclass(frozen=True)
class RootedTree:
    """``parent[v]`` is the parent of vertex v; ``parent[0]`` is None."""

    field: GF
    parent: tuple[int | None, ...]
    depth: tuple[int, ...] = dc_field(compare=False, repr=False)

    @classmethod
    def validate(cls, field: GF, parent: Mapping[int, int] | Sequence[int | None]) -> RootedTree:
        """Check a parent map (keys = all nonzero vertices) and build the tree."""
        q = field.order
        if isinstance(parent, Mapping):
            keys = set(parent)
            expected = set(range(1, q))
            if keys != expected:
                missing = sorted(expected - keys)
                extra = sorted(keys - expected, key=repr)
                raise TreeError(f"parent map keys must be the nonzero vertices; missing {missing}, extra {extra}")
            par: list[int | None] = [None] + [parent[v] for v in range(1, q)]
        else:
            par = list(parent)
            if len(par) != q or par[0] is not None:
                raise TreeError("parent sequence must have length q with no parent for the root")
        for v in range(1, q):
            pv = par[v]
            if not isinstance(pv, int) or not 0 <= pv < q:
                raise TreeError(f"parent of {v} is not a vertex: {pv!r}")
            if pv == v:
                raise CycleError(f"vertex {v} is its own parent")
        depth = [0] * q
        state = [0] * q  # 0 unvisited, 1 on stack, 2 done
        state[0] = 2
        depth[0] = 1
        for v in range(1, q):
            path = []
            u = v
            while state[u] == 0:
                state[u] = 1
                path.append(u)
                u = par[u]
            if state[u] == 1:
                raise CycleError(f"cycle through vertex {u}")
            d = depth[u]
            for w in reversed(path):
                d += 1
                depth[w] = d
                state[w] = 2
        return cls(field, tuple(par), tuple(depth))

    @classmethod
    def _trusted(cls, field: GF, parent: tuple, depth: tuple) -> RootedTree:
        return cls(field, parent, depth)

    # -- structure -----------------------------------------------------------

    @property
    def height(self) -> int:
        """Vertex count on the longest root-to-leaf path."""
        return max(self.depth)

    @property
    def M(self) -> int:
        return self.height - 2

    @cached_property
    def first_level(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, len(self.parent)) if self.parent[v] == 0)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in self.parent]
        for v in range(1, len(self.parent)):
            kids[self.parent[v]].append(v)
        return tuple(tuple(k) for k in kids)

    def edges(self) -> list[tuple[int, int]]:
        """(parent, child) pairs."""
        return [(self.parent[v], v) for v in range(1, len(self.parent))]

    def path(self, v: int) -> tuple[int, ...]:
        """Root-to-v vertex sequence (0, u_j, ..., v)."""
        if v == 0:
            raise TreeError("the path is defined for nonzero vertices")
        self.field.check(v)
        out = [v]
        while out[-1] != 0:
            out.append(self.parent[out[-1]])
        return tuple(reversed(out))

    def is_star(self) -> bool:
        return self.height == 2

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        f = self.field
        return {
            "field": f.to_json(),
            "parent": {f.label(v): f.label(self.parent[v]) for v in range(1, len(self.parent))},
        }

    @classmethod
    def from_json(cls, data: dict, field: GF | None = None) -> RootedTree:
        f = field or GF.from_json(data["field"])
        parent = {f.parse(k): f.parse(v) for k, v in data["parent"].items()}
        return cls.validate(f, parent)

    def __str__(self):
        f = self.field
        parts = [f"{f.label(v)}->{f.label(self.parent[v])}" for v in range(1, len(self.parent))]
        return "{" + ", ".join(parts) + "}"


def star_tree(field: GF) -> RootedTree:
    return RootedTree.validate(field, [None] + [0] * (field.order - 1))


def _root_at_zero(field: GF, adj: list[list[int]]) -> RootedTree:
    q = field.order
    parent: list[int | None] = [None] * q
    depth = [0] * q
    depth[0] = 1
    seen = [False] * q
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                depth[w] = depth[u] + 1
                queue.append(w)
    return RootedTree._trusted(field, tuple(parent), tuple(depth))


def prufer_decode(seq: Sequence[int], field: GF) -> RootedTree:
    """Labeled tree of a Prüfer sequence, rooted at 0."""
    q = field.order
    if len(seq) != max(q - 2, 0):
        raise TreeError(f"Prüfer sequence must have length {q - 2}, got {len(seq)}")
    for v in seq:
        field.check(v)
    degree = [1] * q
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(q) if degree[v] == 1]
    heapq.heapify(leaves)
    adj: list[list[int]] = [[] for _ in range(q)]
    for v in seq:
        leaf = heapq.heappop(leaves)
        adj[leaf].append(v)
        adj[v].append(leaf)
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    a, b = heapq.heappop(leaves), heapq.heappop(leaves)
    adj[a].append(b)
    adj[b].append(a)
    return _root_at_zero(field, adj)


def prufer_encode(tree: RootedTree) -> tuple[int, ...]:
    q = len(tree.parent)
    degree = [0] * q
    adj: list[set[int]] = [set() for _ in range(q)]
    for u, v in tree.edges():
        adj[u].add(v)
        adj[v].add(u)
        degree[u] += 1
        degree[v] += 1
    leaves = [v for v in range(q) if degree[v] == 1]
    heapq.heapify(leaves)
    out = []
    for _ in range(q - 2):
        leaf = heapq.heappop(leaves)
        (nb,) = adj[leaf]
        out.append(nb)
        adj[nb].discard(leaf)
        degree[nb] -= 1
        if degree[nb] == 1:
            heapq.heappush(leaves, nb)
    return tuple(out)


def tree_count(field: GF) -> int:
    q = field.order
    return q ** (q - 2) if q >= 2 else 1


def random_tree(field: GF, seed: int | random.Random) -> RootedTree:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    q = field.order
    return prufer_decode([rng.randrange(q) for _ in range(q - 2)], field)


def enumerate_trees(field: GF, cap: int | None = None) -> Iterator[RootedTree]:
    """Every rooted tree, in lexicographic order of Prüfer sequences."""
    cap = enumeration_cap() if cap is None else cap
    count = tree_count(field)
    if count > cap:
        raise CapExceededError(f"{count} trees exceed the enumeration cap {cap}")
    q = field.order
    for seq in itertools.product(range(q), repeat=q - 2):
        yield prufer_decode(seq, field)
