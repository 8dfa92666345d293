import networkx as nx
import pytest
from hypothesis import given, strategies as st

from cobordcalc.graphcat import (GraphError, GraphMorphism, canonicalize, compose_graphs,
                                 graph_leq, identity_graph, permutation_graph, spider,
                                 tensor_graphs)


@st.composite
def raw_graphs(draw):
    ns = draw(st.integers(0, 3))
    nt = draw(st.integers(0, 3))
    ninner = draw(st.integers(1, 4))
    inner = list(range(ninner))
    edges = [(("s", i), draw(st.sampled_from(inner))) for i in range(ns)]
    edges += [(draw(st.sampled_from(inner)), ("t", j)) for j in range(nt)]
    edges += draw(st.lists(st.tuples(st.sampled_from(inner), st.sampled_from(inner)),
                           max_size=5))
    return ns, nt, inner, edges


def cycle_rank(edges, vertices):
    G = nx.MultiGraph()
    G.add_nodes_from(vertices)
    G.add_edges_from(edges)
    return G.number_of_edges() - G.number_of_nodes() + nx.number_connected_components(G)


@given(raw_graphs())
def test_canonical_form_matches_networkx(g):
    ns, nt, inner, edges = g
    m = canonicalize(["a"] * ns, ["b"] * nt, edges, inner)
    verts = inner + [("s", i) for i in range(ns)] + [("t", j) for j in range(nt)]
    assert m.beta1 == cycle_rank(edges, verts)
    G = nx.MultiGraph()
    G.add_nodes_from(verts)
    G.add_edges_from(edges)
    assert m.beta0 == nx.number_connected_components(G)


def test_canonical_form_forgets_subdivision():
    a = canonicalize([1], [1], [(("s", 0), "u"), ("u", ("t", 0))])
    b = canonicalize([1], [1], [(("s", 0), "u"), ("u", "v"), ("v", ("t", 0))])
    assert a == b == identity_graph([1])


def test_canonical_form_rejects_bad_endpoints():
    with pytest.raises(GraphError):
        canonicalize([1], [], [])
    with pytest.raises(GraphError):
        canonicalize([1], [], [(("s", 0), "u"), (("s", 0), "v")])
    with pytest.raises(GraphError):
        canonicalize([], [], [(("t", 0), "u")])


@st.composite
def morphisms(draw, source):
    n = len(source)
    k = draw(st.integers(0, 3))
    target = tuple(draw(st.lists(st.integers(0, 2), min_size=k, max_size=k)))
    ncomp = draw(st.integers(1, max(1, n + k)))
    src_owner = [draw(st.integers(0, ncomp - 1)) for _ in range(n)]
    tgt_owner = [draw(st.integers(0, ncomp - 1)) for _ in range(k)]
    edges = [(("s", i), ("c", o)) for i, o in enumerate(src_owner)]
    edges += [(("c", o), ("t", j)) for j, o in enumerate(tgt_owner)]
    for c in range(ncomp):
        edges += [(("c", c), ("c", c))] * draw(st.integers(0, 2))
    return canonicalize(source, target, edges, [("c", c) for c in range(ncomp)])


@st.composite
def chains(draw):
    src = tuple(draw(st.lists(st.integers(0, 2), max_size=3)))
    g1 = draw(morphisms(src))
    g2 = draw(morphisms(g1.target.labels))
    g3 = draw(morphisms(g2.target.labels))
    return g1, g2, g3


@given(chains())
def test_composition_is_associative_and_mu0_additive(ch):
    g1, g2, g3 = ch
    a, m12 = compose_graphs(g2, g1)
    left, m_a = compose_graphs(g3, a)
    b, m23 = compose_graphs(g3, g2)
    right, m_b = compose_graphs(b, g1)
    assert left == right
    assert m12 + m_a == m23 + m_b
    assert min(m12, m23, m_a, m_b) >= 0


@given(chains())
def test_mu0_is_betti_defect(ch):
    g1, g2, _ = ch
    g, mu0 = compose_graphs(g2, g1)
    assert mu0 == g.beta1 - g1.beta1 - g2.beta1
    assert compose_graphs(identity_graph(g1.target.labels), g1)[0] == g1
    assert compose_graphs(g1, identity_graph(g1.source.labels))[0] == g1


def test_spider_composition_counts_cycles():
    # joining two pieces along k circles closes k - 1 loops
    for k in range(1, 5):
        up = spider([], [1] * k)
        down = spider([1] * k, [])
        g, mu0 = compose_graphs(down, up)
        assert mu0 == k - 1 and g.beta1 == k - 1


def test_tensor_and_permutation():
    a, b = spider([1], [2]), spider([0], [0], loops=1)
    t = tensor_graphs(a, b)
    assert t.beta1 == 1 and t.beta0 == 2
    p = permutation_graph([1, 0], [2, 0])
    g, mu0 = compose_graphs(p, t)
    assert mu0 == 0 and list(g.target.labels) == [0, 2]


def test_order_on_loop_ranks():
    assert graph_leq(spider([1], [1], 0), spider([1], [1], 2))
    assert not graph_leq(spider([1], [1], 2), spider([1], [1], 0))


def test_json_round_trip():
    g = spider([1, 2], [3], loops=2)
    assert GraphMorphism.from_json(g.to_json()) == g
