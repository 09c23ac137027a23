"""Finite simple graphs: Cayley balls, induced subgraphs, components, sampling."""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from lampsep.groups import GroupSpec, make_group

DEFAULT_MAX_VERTICES = 5_000_000
GRAPH_SCHEMA = "lampsep.graph/1"


class CapExceeded(RuntimeError):
    """A construction would exceed its configured size cap."""


def named_rng(seed: int, name: str) -> random.Random:
    """Independent deterministic stream derived from ``seed`` and a stream name."""
    return random.Random(f"{seed}:{name}")


@dataclass
class Graph:
    """Simple undirected graph with vertex labels and sorted adjacency lists."""

    labels: list[str]
    adj: list[list[int]]
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self.adj) for v in nb if u < v]

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def index_of(self) -> dict[str, int]:
        return {lab: k for k, lab in enumerate(self.labels)}

    def check(self) -> None:
        for u, nb in enumerate(self.adj):
            if nb != sorted(set(nb)):
                raise ValueError(f"adjacency of {u} not sorted/unique")
            for v in nb:
                if v == u:
                    raise ValueError(f"self-loop at {u}")
                if u not in self.adj[v]:
                    raise ValueError(f"edge {u}-{v} not symmetric")

    @classmethod
    def from_edges(cls, labels: Sequence[str], edges: Iterable[tuple[int, int]],
                   meta: dict | None = None) -> "Graph":
        n = len(labels)
        sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u != v:
                sets[u].add(v)
                sets[v].add(u)
        return cls(list(labels), [sorted(s) for s in sets], dict(meta or {}))

    # ---- serialisation -------------------------------------------------

    def to_edgelist(self) -> str:
        edges = self.edges()
        lines = [f"{self.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str, labels: Sequence[str] | None = None) -> "Graph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        n, m = map(int, rows[0])
        edges = [(int(u), int(v)) for u, v in rows[1:]]
        if len(edges) != m:
            raise ValueError(f"header announces {m} edges, found {len(edges)}")
        return cls.from_edges(labels if labels is not None else [str(k) for k in range(n)], edges)

    def to_dot(self, name: str = "G") -> str:
        out = [f"graph {name} {{"]
        for k, lab in enumerate(self.labels):
            out.append(f'  {k} [label="{lab}"];')
        for u, v in self.edges():
            out.append(f"  {u} -- {v};")
        out.append("}")
        return "\n".join(out) + "\n"

    def to_json(self) -> dict:
        return {"schema": GRAPH_SCHEMA, "meta": self.meta, "labels": self.labels,
                "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, data: dict | str) -> "Graph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_edges(data["labels"], [tuple(e) for e in data["edges"]], data.get("meta"))


def ball(group: GroupSpec | str, radius: int, max_vertices: int = DEFAULT_MAX_VERTICES,
         **params) -> Graph:
    """Ball of the given radius around the identity in the Cayley graph.

    Vertices are numbered layer by layer, each layer sorted by canonical encoding.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    spec = make_group(group, **params) if isinstance(group, str) else group
    gens = [g for _, g in spec.generators]
    layers = [[spec.identity]]
    seen = {spec.identity}
    for _ in range(radius):
        nxt = set()
        for x in layers[-1]:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.add(y)
        if len(seen) > max_vertices:
            raise CapExceeded(f"ball of radius {radius} exceeds {max_vertices} vertices")
        layers.append(sorted(nxt, key=lambda e: e.encode()))
    elements = [x for layer in layers for x in layer]
    index = {x: k for k, x in enumerate(elements)}
    edges = []
    for u, x in enumerate(elements):
        for g in gens:
            v = index.get(x * g)
            if v is not None and v != u:
                edges.append((u, v))
    meta = {"group": spec.kind, "params": spec.params, "radius": radius}
    return Graph.from_edges([x.encode() for x in elements], edges, meta)


def ball_elements(graph: Graph, group: GroupSpec | str, **params) -> list:
    spec = make_group(group, **params) if isinstance(group, str) else group
    return [spec.parse(lab) for lab in graph.labels]


def induced_subgraph(g: Graph, f: Iterable[int]) -> Graph:
    verts = sorted(set(f))
    if verts and (verts[0] < 0 or verts[-1] >= g.n):
        raise ValueError("vertex index out of range")
    pos = {v: k for k, v in enumerate(verts)}
    adj = [[pos[w] for w in g.adj[v] if w in pos] for v in verts]
    return Graph([g.labels[v] for v in verts], adj, dict(g.meta))


def connected_components(g: Graph, removed: Iterable[int] = ()) -> list[list[int]]:
    """Components of ``g`` minus ``removed``, ordered by smallest vertex."""
    blocked = set(removed)
    seen = [False] * g.n
    for v in blocked:
        seen[v] = True
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def sample_connected_subgraph(g: Graph, size: int, seed: int, start: int | None = None) -> list[int]:
    """Grow a connected vertex set of exactly ``size`` vertices by random frontier expansion."""
    if size < 1 or size > g.n:
        raise ValueError(f"size {size} outside [1, {g.n}]")
    rng = named_rng(seed, "sample_connected_subgraph")
    if start is None:
        start = rng.randrange(g.n)
    chosen = {start}
    frontier = [w for w in g.adj[start]]
    in_frontier = set(frontier)
    while len(chosen) < size:
        if not frontier:
            raise ValueError(f"component of vertex {start} has fewer than {size} vertices")
        k = rng.randrange(len(frontier))
        frontier[k], frontier[-1] = frontier[-1], frontier[k]
        v = frontier.pop()
        chosen.add(v)
        for w in g.adj[v]:
            if w not in chosen and w not in in_frontier:
                in_frontier.add(w)
                frontier.append(w)
    return sorted(chosen)
