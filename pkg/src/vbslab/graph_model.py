"""Graphs of spins joined by valence bonds: uniqueness, degeneracy and dimensions.

JSON layout::

    {"vertices": [{"id": 0, "twice_spin": 2}, ...],
     "edges": [{"u": 0, "v": 1, "m": 1}, ...],
     "block": [0, 1]}
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError, ModelConditionError
from .exact_algebra import HalfInt
from .spin_operators import Bond, HamiltonianSpec


@dataclass(frozen=True)
class GraphSpec:
    vertex_ids: tuple
    spins: tuple
    edges: tuple  # (u_index, v_index, multiplicity)

    def __post_init__(self):
        if not self.vertex_ids:
            raise DomainError("graph needs at least one vertex")
        if len(set(self.vertex_ids)) != len(self.vertex_ids):
            raise DomainError("vertex ids must be unique")
        if len(self.spins) != len(self.vertex_ids):
            raise DomainError("one spin per vertex")
        object.__setattr__(self, "spins", tuple(HalfInt.coerce(s) for s in self.spins))
        seen = set()
        n = len(self.vertex_ids)
        for u, v, m in self.edges:
            if u == v:
                raise DomainError(f"self-loop at vertex {self.vertex_ids[u]}")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError("edge endpoint out of range")
            if isinstance(m, bool) or not isinstance(m, int) or m < 1:
                raise DomainError(f"edge multiplicity must be a positive integer, got {m!r}")
            key = frozenset((u, v))
            if key in seen:
                raise DomainError("repeated edge; use the multiplicity instead")
            seen.add(key)
        if not _connected(n, [(u, v) for u, v, _ in self.edges]):
            raise DomainError("graph is disconnected; treat each component separately")

    @classmethod
    def build(cls, vertices: Sequence[tuple], edges: Sequence[tuple]) -> "GraphSpec":
        """``vertices`` as ``(id, spin)`` pairs, ``edges`` as ``(u_id, v_id, M)`` triples."""
        ids = tuple(v[0] for v in vertices)
        index = {vid: i for i, vid in enumerate(ids)}
        try:
            es = tuple((index[u], index[v], m) for u, v, m in edges)
        except KeyError as exc:
            raise DomainError(f"edge refers to unknown vertex {exc.args[0]!r}") from exc
        return cls(ids, tuple(v[1] for v in vertices), es)

    @classmethod
    def from_json(cls, obj: dict) -> tuple["GraphSpec", Optional[list]]:
        """Parse the JSON layout; returns the graph and the block id list (or ``None``)."""
        try:
            vertices = [(v["id"], HalfInt(int(v["twice_spin"]))) for v in obj["vertices"]]
            edges = [(e["u"], e["v"], int(e.get("m", 1))) for e in obj["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed graph JSON: {exc}") from exc
        block = obj.get("block")
        return cls.build(vertices, edges), (list(block) if block is not None else None)

    def to_json(self, block: Optional[Iterable[Hashable]] = None) -> dict:
        out = {
            "vertices": [{"id": vid, "twice_spin": s.twice_value} for vid, s in zip(self.vertex_ids, self.spins)],
            "edges": [{"u": self.vertex_ids[u], "v": self.vertex_ids[v], "m": m} for u, v, m in self.edges],
        }
        if block is not None:
            out["block"] = list(block)
        return out

    def index(self, vid) -> int:
        try:
            return self.vertex_ids.index(vid)
        except ValueError as exc:
            raise DomainError(f"unknown vertex {vid!r}") from exc

    def to_hamiltonian_spec(self) -> HamiltonianSpec:
        return HamiltonianSpec(self.spins, tuple(Bond(min(u, v), max(u, v), m) for u, v, m in self.edges))


def _connected(n: int, pairs) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == n


def chain_graph(spins: Sequence, multiplicities: Sequence[int]) -> GraphSpec:
    spins = list(spins)
    if len(multiplicities) != len(spins) - 1:
        raise DomainError("a chain of n vertices needs n-1 multiplicities")
    return GraphSpec.build(list(enumerate(spins)), [(i, i + 1, m) for i, m in enumerate(multiplicities)])


def complete_graph(k: int, spin, multiplicity: int = 1) -> GraphSpec:
    """Complete graph on ``k`` vertices with equal spins and multiplicities."""
    edges = [(i, j, multiplicity) for i in range(k) for j in range(i + 1, k)]
    return GraphSpec.build([(i, spin) for i in range(k)], edges)


@dataclass(frozen=True)
class BlockCut:
    block: frozenset          # vertex indices in the block
    cut_edges: tuple          # (u, v, M) with exactly one endpoint in the block
    boundary: frozenset       # block vertices touching a cut edge
    env_boundary: frozenset   # environment vertices touching a cut edge


def make_cut(g: GraphSpec, block_ids: Iterable[Hashable]) -> BlockCut:
    """Cut data for a block given by vertex ids; the whole graph is allowed (no cut edges)."""
    block = frozenset(g.index(v) for v in block_ids)
    if not block:
        raise DomainError("block must be non-empty")
    cut = tuple(e for e in g.edges if (e[0] in block) != (e[1] in block))
    boundary = frozenset(x for u, v, _ in cut for x in (u, v) if x in block)
    env_boundary = frozenset(x for u, v, _ in cut for x in (u, v) if x not in block)
    return BlockCut(block, cut, boundary, env_boundary)


def incidence_matrix(g: GraphSpec) -> np.ndarray:
    """Vertex-by-edge 0/1 matrix."""
    out = np.zeros((len(g.vertex_ids), len(g.edges)), dtype=np.int64)
    for j, (u, v, _) in enumerate(g.edges):
        out[u, j] = 1
        out[v, j] = 1
    return out


def check_uniqueness(g: GraphSpec) -> tuple[bool, list]:
    """Whether ``2 S_l`` equals the summed multiplicity at every vertex.

    Returns ``(ok, violations)`` with violations as ``(vertex_id, 2S, sum_M)``.
    """
    inc = incidence_matrix(g)
    ms = np.array([m for _, _, m in g.edges], dtype=object)
    sums = inc.astype(object).dot(ms) if len(ms) else np.zeros(len(g.vertex_ids), dtype=object)
    violations = [(vid, s.twice_value, int(tot))
                  for vid, s, tot in zip(g.vertex_ids, g.spins, sums) if s.twice_value != int(tot)]
    return not violations, violations


def require_unique(g: GraphSpec) -> None:
    ok, violations = check_uniqueness(g)
    if not ok:
        raise ModelConditionError(f"spins not saturated by bonds at {violations}")


def katsura_degeneracy(g: GraphSpec, cut: BlockCut) -> int:
    """``prod_{l in boundary} (sum of cut multiplicities at l + 1)``."""
    out = 1
    for l in cut.boundary:
        out *= sum(m for u, v, m in cut.cut_edges if l in (u, v)) + 1
    return out


def hilbert_dimensions(g: GraphSpec, cut: BlockCut) -> tuple[int, int, bool]:
    """``(dim, deg, deg <= dim)`` for the block."""
    dim = 1
    for i in cut.block:
        dim *= g.spins[i].twice_value + 1
    deg = katsura_degeneracy(g, cut)
    return dim, deg, deg <= dim
