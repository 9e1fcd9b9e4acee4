"""The difference graph of a projective two-weight code and its SRG parameters."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .code_builder import TraceCode
from .field_tower import SubfieldLevel, TowerParams


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class SRGParams:
    N: int
    K: int
    lam: int
    mu: int

    def feasible(self) -> bool:
        return self.K * (self.K - self.lam - 1) == (self.N - self.K - 1) * self.mu

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.N, self.K, self.lam, self.mu)


@dataclass(frozen=True)
class NotSRG:
    reason: str
    witness: tuple[int, int] | None = None


@dataclass(frozen=True, eq=False)
class PointGraph:
    """Vertices are ambient encodings 0..N-1; u ~ v iff u - v lies in omega."""

    N: int
    adjacency: np.ndarray  # bool (N, N)

    def degree(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def edges(self):
        u, v = np.nonzero(np.triu(self.adjacency, 1))
        return zip(u.tolist(), v.tolist())


def omega_set(code: TraceCode) -> np.ndarray:
    """F_q^* . D, sorted; the vectors whose span is a column span of the generator matrix."""
    if not code.is_projective():
        raise GraphError("code is not projective; its difference graph is not strongly regular")
    tower = code.tower
    units = tower.subfield_elements(SubfieldLevel.Q)[1:]
    omega = np.unique(tower.mul(units[:, None], code.defining_set.elements[None, :]))
    if len(omega) != code.n * (code.q - 1):
        raise GraphError("scaled defining set has unexpected size")
    return omega


def build_graph(tower: TowerParams, omega) -> PointGraph:
    omega = np.asarray(omega, dtype=np.int64)
    N = tower.size
    member = np.zeros(N, dtype=bool)
    member[omega] = True
    if member[0]:
        raise GraphError("0 in omega would give loops")
    if not np.array_equal(np.sort(tower.neg(omega)), np.sort(omega)):
        raise GraphError("omega is not closed under negation")
    v = np.arange(N)
    adj = np.empty((N, N), dtype=bool)
    step = max(1, (1 << 21) // (N * tower.degree))
    for lo in range(0, N, step):
        hi = min(N, lo + step)
        adj[lo:hi] = member[tower.sub(v[lo:hi, None], v[None, :])]
    return PointGraph(N, adj)


def is_connected(graph: PointGraph) -> bool:
    seen = np.zeros(graph.N, dtype=bool)
    seen[0] = True
    todo = deque([0])
    while todo:
        u = todo.popleft()
        nbrs = np.flatnonzero(graph.adjacency[u] & ~seen)
        seen[nbrs] = True
        todo.extend(nbrs.tolist())
    return bool(seen.all())


def srg_count(graph: PointGraph) -> SRGParams | NotSRG:
    """Common-neighbour counts over every adjacent and every non-adjacent pair."""
    adj = graph.adjacency
    N = graph.N
    deg = graph.degree()
    K = int(deg[0])
    if np.any(deg != K):
        return NotSRG("not regular", (0, int(np.flatnonzero(deg != K)[0])))
    if K == 0 or K == N - 1:
        raise GraphError(f"degenerate graph (K = {K}, N = {N})")
    if not is_connected(graph):
        return NotSRG("not connected")
    a = adj.astype(np.float32)
    common = a @ a  # exact: entries <= N < 2**24
    off = ~np.eye(N, dtype=bool)
    values = {}
    for name, mask in (("lam", adj), ("mu", ~adj & off)):
        vals = common[mask]
        if vals.min() != vals.max():
            u, v = np.argwhere(mask & (common != vals.min()))[0]
            return NotSRG(f"{name} not constant", (int(u), int(v)))
        values[name] = int(vals[0])
    return SRGParams(N, K, values["lam"], values["mu"])


def srg_predicted_generic(n: int, q: int, k: int, w1: int, w2: int) -> SRGParams:
    K = n * (q - 1)
    lam = K * K + 3 * K - q * (w1 + w2) - K * q * (w1 + w2) + q * q * w1 * w2
    mu = K * K + K - K * q * (w1 + w2) + q * q * w1 * w2
    if lam < 0 or mu < 0:
        raise GraphError(f"negative parameter (lambda={lam}, mu={mu})")
    return SRGParams(q**k, K, lam, mu)


def srg_family_params(q: int, s: int) -> SRGParams:
    if q % 2:
        raise GraphError("family parameters are for even q")
    N = q ** (2 * s)
    K = q ** (s - 1) * (q**s + 1) * (q - 1)
    lam = q ** (s - 1) * (2 * q - 3 + q ** (s - 1) * (q - 1) ** 2)
    mu = (q - 1) * q ** (s - 1) * (q**s - q ** (s - 1) + 1)
    return SRGParams(N, K, lam, mu)


def format_graph(graph: PointGraph) -> str:
    K = int(graph.degree()[0]) if graph.N else 0
    lines = [f"{graph.N} {K}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"
