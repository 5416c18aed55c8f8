import json

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from curvecx import complexes as cx
from curvecx import normalcurves as nc
from curvecx.surface import SurfaceSig

from conftest import reference, snapshot


def _graph_rows(n, edges):
    rows = [0] * n
    for a, b in edges:
        if a != b:
            rows[a] |= 1 << b
            rows[b] |= 1 << a
    return rows


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 12).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))))
def test_bron_kerbosch_matches_networkx(graph):
    n, edges = graph
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from((a, b) for a, b in edges if a != b)
    ours = sorted(sorted(c) for c in cx.maximal_cliques(_graph_rows(n, edges)))
    assert ours == sorted(sorted(c) for c in nx.find_cliques(G))


def test_snapshot_cliques_match_networkx():
    snap = snapshot("N1,4", 3)
    snap.materialize()
    G = nx.Graph()
    G.add_nodes_from(range(len(snap)))
    G.add_edges_from(snap.edges())
    ours = sorted(list(a.clique) for a in cx.maximal_simplices(snap))
    assert ours == sorted(sorted(c) for c in nx.find_cliques(G))


def test_lazy_and_eager_agree():
    eager = snapshot("N1,3", 4)
    lazy = cx.build_snapshot(SurfaceSig.parse("N1,3"), 4, lazy=True)
    assert lazy.weights == eager.weights
    assert all(lazy.neighbors(i) == eager.neighbors(i) for i in range(len(lazy)))


def test_threaded_materialize_matches(monkeypatch):
    monkeypatch.setenv("CURVECX_THREADS", "2")
    snap = cx.build_snapshot(SurfaceSig.parse("N1,3"), 4, lazy=True).materialize()
    assert snap.edges() == snapshot("N1,3", 4).edges()


def test_unknown_vertex_and_self_adjacency():
    snap = snapshot("N1,3", 4)
    with pytest.raises(cx.UnknownVertex):
        snap.vertex(10**6)
    with pytest.raises(cx.UnknownVertex):
        snap.id_of((99,) * 6)
    with pytest.raises(ValueError):
        snap.adjacent(0, 0)


def test_snapshot_json():
    data = json.loads(json.dumps(snapshot("N1,2", 6).to_json()))
    assert len(data["vertices"]) == 2 and data["adjacency"] == []


def test_audit_certification():
    snap = snapshot("N3,1", 3)
    audits = cx.maximal_simplices(snap)
    cert = [a for a in audits if a.certified]
    assert {a.dimension for a in cert} == {2, 3}
    assert all(a.eq1_ok and a.onesided % 2 == 1 for a in cert)


def test_dual_link_components_and_sides():
    snap = snapshot("N1,5", 2)
    for i, v in enumerate(snap.vertices):
        if v.separating and (v.k_separating or 0) >= 3:
            view = cx.link(snap, i)
            sides = cx.side_partition(snap, i)
            assert set(sides) == set(view.vertices)
            assert all(sides[a] == sides[b] for a, b in view.dual_edges)
    one_sided = next(i for i, v in enumerate(snap.vertices) if v.one_sided)
    with pytest.raises(ValueError):
        cx.side_partition(snap, one_sided)


def test_pentagon_helpers():
    assert cx.same_pentagon([1, 2, 3, 4, 5], [3, 2, 1, 5, 4])
    assert not cx.same_pentagon([1, 2, 3, 4, 5], [1, 3, 2, 4, 5])
    snap = snapshot("N1,3", 4)
    with pytest.raises(ValueError):
        cx.is_pentagon(snap, [0, 1, 2, 3])


def test_simple_pair_witness():
    snap = snapshot("N1,5", 3, lazy=True)
    T = snap.triangulation
    chain = cx.reference_chain(T, 3)
    assert cx.is_chain(T, chain)
    alpha, beta, gamma = (cx.arc_vertex(snap, e) for e in chain)
    w = cx.find_simple_pair_witness(snap, alpha, beta)
    assert w is not None
    assert cx.check_simple_pair_witness(snap, alpha, beta, w) == {
        "pentagon": True, "types": True, "simplices": True}
    bogus = cx.SimplePairWitness(list(reversed(w.gammas)), w.delta)
    assert not all(cx.check_simple_pair_witness(snap, alpha, beta, bogus).values())
    assert cx.find_simple_pair_witness(snap, alpha, gamma) is None


def test_witness_needs_genus_one():
    snap = snapshot("N3,1", 3)
    with pytest.raises(ValueError):
        cx.find_simple_pair_witness(snap, 0, 1)


def test_chains_and_good_triangles():
    T = reference("N1,5")
    chain = cx.reference_chain(T, 4)
    assert cx.is_chain(T, chain) and len(chain) == 4
    assert not cx.is_chain(T, [chain[0], chain[0]])
    good = cx.good_triangles(T)
    assert all(len({T.corner_puncture[3 * t + v] for v in range(3)}) == 3 for t in good)
    with pytest.raises(ValueError):
        cx.reference_chain(reference("N1,2"), 5)
