from __future__ import annotations

import numpy as np
import pytest

from twoweight.code_builder import build_code
from twoweight.field_tower import SubfieldLevel, build_tower
from twoweight.srg import (
    GraphError,
    NotSRG,
    PointGraph,
    SRGParams,
    build_graph,
    format_graph,
    omega_set,
    srg_count,
    srg_family_params,
    srg_predicted_generic,
)


def graph_for(p, e, s, c):
    t = build_tower(p, e, s)
    code = build_code(t, c)
    return t, code, build_graph(t, omega_set(code))


def cycle(n):
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        adj[i, (i + 1) % n] = adj[(i + 1) % n, i] = True
    return PointGraph(n, adj)


def brute_common(adj, u, v):
    return int(np.sum(adj[u] & adj[v]))


def test_five_cycle():
    assert srg_count(cycle(5)) == SRGParams(5, 2, 0, 1)


def test_six_cycle_is_not_srg():
    assert isinstance(srg_count(cycle(6)), NotSRG)


def test_degenerate_graphs_rejected():
    with pytest.raises(GraphError):
        srg_count(PointGraph(4, ~np.eye(4, dtype=bool)))


@pytest.mark.parametrize("pesc, size", [((2, 1, 2, 1), 10), ((2, 1, 3, 1), 36)])
def test_omega(pesc, size):
    t, code, g = graph_for(*pesc)
    omega = omega_set(code)
    assert len(omega) == size
    units = t.subfield_elements(SubfieldLevel.Q)[1:]
    assert set(t.mul(units[:, None], omega[None, :]).ravel().tolist()) == set(omega.tolist())
    assert np.flatnonzero(g.adjacency[0]).tolist() == sorted(omega.tolist())


def test_omega_rejects_non_projective():
    code = build_code(build_tower(3, 1, 2), 1)
    with pytest.raises(GraphError):
        omega_set(code)


def test_translation_invariance():
    t, _, g = graph_for(2, 2, 2, 1)
    adj = g.adjacency
    v = np.arange(t.size)
    for shift in (1, 7, 100, 255):
        perm = t.add(v, shift)
        assert np.array_equal(adj[np.ix_(perm, perm)], adj)


@pytest.mark.parametrize("pesc, params", [((2, 1, 2, 1), (16, 10, 6, 6)), ((2, 1, 3, 1), (64, 36, 20, 20)),
                                          ((2, 2, 2, 1), (256, 204, 164, 156)),
                                          ((2, 1, 3, 0), (64, 27, 10, 12))])
def test_counted_parameters(pesc, params):
    _, _, g = graph_for(*pesc)
    counted = srg_count(g)
    assert counted.as_tuple() == params and counted.feasible()
    adj = g.adjacency
    rng = np.random.default_rng(1)
    for u, v in rng.integers(0, g.N, size=(50, 2)):
        if u != v:
            assert brute_common(adj, u, v) == (params[2] if adj[u, v] else params[3])


def test_predictions():
    assert srg_predicted_generic(10, 2, 4, 4, 6).as_tuple() == (16, 10, 6, 6)
    assert srg_predicted_generic(36, 2, 6, 16, 20).as_tuple() == (64, 36, 20, 20)
    assert srg_family_params(2, 2).as_tuple() == (16, 10, 6, 6)
    assert srg_family_params(2, 3).as_tuple() == (64, 36, 20, 20)
    fam = srg_family_params(4, 2)
    assert fam.as_tuple() == (256, 204, 164, 156)
    assert fam.K * (fam.K - fam.lam - 1) == (fam.N - fam.K - 1) * fam.mu == 7956
    with pytest.raises(GraphError):
        srg_family_params(3, 2)


def test_format_graph():
    _, _, g = graph_for(2, 1, 2, 1)
    lines = format_graph(g).splitlines()
    assert lines[0] == "16 10"
    assert len(lines) == 1 + 16 * 10 // 2
    edges = [tuple(map(int, ln.split())) for ln in lines[1:]]
    assert all(u < v for u, v in edges) and edges == sorted(edges)
