"""Product vertices, adjacency, the closed-form metric and its oracle."""

import pytest
from hypothesis import given, settings, strategies as st

from horoprod.product import (
    BASE,
    HeightMismatch,
    HoroProduct,
    ProductVertex,
    product_busemann,
    product_dist,
    product_height,
)
from horoprod.tree import TreeSpec, VertexAddress, height, tree_dist

R3 = TreeSpec.regular(3)
R4 = TreeSpec.regular(4)
LINE = TreeSpec.line()
DL33 = HoroProduct(R3, R3)
DL34 = HoroProduct(R3, R4)
DL3LINE = HoroProduct(R3, LINE)


def pv(text):
    return ProductVertex.parse(text)


def test_vertex_construction():
    assert product_height(BASE) == 0
    ok = DL33.vertex(VertexAddress.parse("0;0"), VertexAddress.parse("1;"))
    assert product_height(ok) == 1
    with pytest.raises(HeightMismatch) as err:
        ProductVertex(VertexAddress.parse("0;0"), VertexAddress.parse("0;"))
    assert (err.value.h1, err.value.h2) == (1, 0)


def test_vertex_text_round_trip():
    for text in ("0;|0;", "0;0|1;", "2;0.1|1;0", "0;1.0.1|3;"):
        assert str(pv(text)) == text


def test_neighbors_base():
    ns = DL33.neighbors(BASE)
    assert len(ns) == 4
    assert set(map(str, ns)) == {"0;0|1;", "0;1|1;", "1;|0;0", "1;|0;1"}
    assert pv("0;0|1;") in ns  # climbing into the first tree's child 0


def test_neighbor_counts():
    assert all(len(DL3LINE.neighbors(v)) == 3 for v in DL3LINE.ball(2))
    assert len(DL34.neighbors(BASE)) == 5
    for v in DL33.ball(3):
        assert len(DL33.neighbors(v)) == DL33.degree(v) == 4


def test_edges_change_height_by_one():
    for v in DL33.ball(3):
        for w in DL33.neighbors(v):
            assert abs(product_height(v) - product_height(w)) == 1
            assert height(w.x1) + height(w.x2) == 0


def test_dist_examples():
    a = pv("0;0|1;")
    b = pv("0;1|1;")
    assert product_dist(a, a) == 0
    assert product_dist(BASE, a) == 1
    assert product_dist(a, b) == 2


def test_dist_bfs_examples():
    assert DL33.dist_bfs(BASE, BASE, 5) == 0
    assert DL33.dist_bfs(BASE, pv("0;0|1;"), 3) == 1
    far = pv("2;|0;0.0")
    assert product_dist(BASE, far) == 2
    assert DL33.dist_bfs(BASE, far, 1) is None
    assert DL33.dist_bfs(BASE, far, 2) == 2


def test_busemann_examples():
    z = pv("0;0|1;")
    y = pv("0;1|1;")
    assert product_busemann(z, BASE, check=True) == 0
    assert product_busemann(z, y, check=True) == 1
    for y in DL33.ball(3):
        assert product_busemann(BASE, y, check=True) == product_dist(BASE, y)


def test_busemann_identity_on_ball():
    ball = DL33.ball(3)
    for z in ball:
        base_d = product_dist(z, BASE)
        for y in ball:
            assert product_busemann(z, y) == product_dist(z, y) - base_d


def test_ball_sizes():
    assert [len(DL33.ball(r)) for r in range(5)] == [1, 5, 15, 39, 92]
    # second route: filter a larger ball by the closed-form distance
    big = DL33.ball(4)
    assert sum(1 for v in big if product_dist(BASE, v) <= 2) == 15


def test_ball_deterministic_and_valid():
    once = [str(v) for v in DL33.ball(3)]
    again = [str(v) for v in DL33.ball(3)]
    assert once == again
    assert len(once) == len(set(once))


def test_dist_lower_bounds():
    ball = DL33.ball(4)
    for v in ball:
        for w in ball:
            d = product_dist(v, w)
            assert d >= tree_dist(v.x1, w.x1)
            assert d >= tree_dist(v.x2, w.x2)
            assert d >= abs(product_height(v) - product_height(w))


@st.composite
def ball_vertices(draw, product=DL33, radius=3):
    ball = product.ball(radius)
    return ball[draw(st.integers(0, len(ball) - 1))]


@settings(max_examples=60, deadline=None)
@given(ball_vertices(), ball_vertices())
def test_formula_matches_bfs(v, w):
    assert DL33.dist_bfs(v, w, 12) == product_dist(v, w)


def test_ball_graph_is_the_edge_relation():
    verts, adj = DL33.ball_graph(3)
    index = {v: i for i, v in enumerate(verts)}
    for v, i in index.items():
        expected = sorted(index[w] for w in DL33.neighbors(v) if w in index)
        assert sorted(adj[i]) == expected
