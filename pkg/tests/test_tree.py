"""Tree addresses, metric, heights, degree rules, serialization."""

import json
from collections import deque

import pytest
from hypothesis import given, strategies as st

from horoprod.tree import (
    AddressError,
    ExplicitCore,
    Line,
    ORIGIN,
    RayPeriodic,
    Regular,
    SpecError,
    TreeSpec,
    VertexAddress,
    gamma_ward,
    height,
    meet_depth,
    origin_dist,
    tree_dist,
    vertex_busemann,
)

R3 = TreeSpec.regular(3)
R4 = TreeSpec.regular(4)
LINE = TreeSpec.line()


def v(text):
    return VertexAddress.parse(text)


@st.composite
def addresses(draw, spec=R3, max_branch=5, max_depth=4):
    branch = draw(st.integers(0, max_branch))
    cur = VertexAddress(branch, ())
    for _ in range(draw(st.integers(0, max_depth))):
        count = spec.label_count(cur)
        if count == 0:
            break
        letter = draw(st.integers(0, count - 1))
        cur = VertexAddress(cur.branch, cur.suffix + (letter,))
    return cur


# -- addresses ----------------------------------------------------------------

def test_parse_and_format():
    assert str(v("0;")) == "0;"
    assert str(v("2;0.1.0")) == "2;0.1.0"
    assert v("0;") == ORIGIN
    assert v("3;") == VertexAddress(3, ())
    with pytest.raises(AddressError):
        VertexAddress.parse("17")
    with pytest.raises(AddressError):
        VertexAddress.parse("a;b")
    with pytest.raises(AddressError):
        VertexAddress(-1, ())


@given(addresses())
def test_text_round_trip(a):
    assert VertexAddress.parse(str(a)) == a


def test_gamma_ward():
    assert gamma_ward(v("0;0.1")) == v("0;0")
    assert gamma_ward(v("3;")) == v("4;")
    assert gamma_ward(ORIGIN) == v("1;")


def test_height():
    assert height(ORIGIN) == 0
    assert height(v("3;")) == -3
    assert height(v("1;0")) == 0


def test_dist_examples():
    assert tree_dist(v("2;0"), v("2;0")) == 0
    assert tree_dist(v("0;0"), v("2;")) == 3
    assert tree_dist(v("0;0.0"), v("0;0.1")) == 2


def test_busemann_examples():
    assert vertex_busemann(v("4;0.1"), ORIGIN) == 0
    assert vertex_busemann(v("2;"), v("0;0")) == 1
    assert vertex_busemann(v("0;0"), v("0;0.1")) == 0


@given(addresses(), addresses())
def test_dist_symmetry_and_zero(a, b):
    assert tree_dist(a, b) == tree_dist(b, a)
    assert (tree_dist(a, b) == 0) == (a == b)


@given(addresses(), addresses(), addresses())
def test_busemann_lipschitz(z, a, b):
    assert abs(vertex_busemann(z, a) - vertex_busemann(z, b)) <= tree_dist(a, b)


def test_triangle_inequality_exhaustive():
    ball = R3.ball(5)
    assert len(ball) == 94
    for a in ball:
        for b in ball:
            dab = tree_dist(a, b)
            for c in ball:
                assert dab <= tree_dist(a, c) + tree_dist(c, b)


def test_height_is_confluent_distance_difference():
    for a in R3.ball(5):
        c = VertexAddress(a.branch, ())
        assert height(a) == tree_dist(a, c) - tree_dist(ORIGIN, c)


# -- degrees and neighbors -----------------------------------------------------

def test_degree_examples():
    assert R3.degree(ORIGIN) == 3
    assert R3.degree(v("2;")) == 3
    assert LINE.degree(v("5;")) == 2
    with pytest.raises(AddressError):
        R3.degree(v("1;2"))


def test_neighbors_examples():
    assert set(R3.neighbors(ORIGIN)) == {v("1;"), v("0;0"), v("0;1")}
    assert set(R3.neighbors(v("1;"))) == {v("0;"), v("2;"), v("1;0")}
    assert set(R3.neighbors(v("0;0"))) == {v("0;"), v("0;0.0"), v("0;0.1")}


def test_neighbor_heights():
    for spec in (R3, R4, LINE):
        for a in spec.ball(4):
            ns = spec.neighbors(a)
            assert len(ns) == spec.degree(a)
            below = [b for b in ns if height(b) == height(a) - 1]
            above = [b for b in ns if height(b) == height(a) + 1]
            assert below == [gamma_ward(a)]
            assert len(above) == spec.degree(a) - 1


def test_ball_counts():
    assert len(R3.ball(0)) == 1
    assert len(R3.ball(1)) == 4
    assert len(R3.ball(2)) == 10
    assert [len(LINE.ball(r)) for r in range(4)] == [1, 3, 5, 7]


def test_dist_equals_bfs_over_neighbors():
    ball = R3.ball(4)
    members = set(ball)
    for src in ball:
        seen = {src: 0}
        queue = deque([src])
        while queue:
            cur = queue.popleft()
            if seen[cur] >= 8:
                continue
            for nxt in R3.neighbors(cur):
                if nxt not in seen:
                    seen[nxt] = seen[cur] + 1
                    queue.append(nxt)
        for dst in ball:
            assert seen[dst] == tree_dist(src, dst), (src, dst)


@given(addresses(spec=R4, max_branch=3, max_depth=3),
       addresses(spec=R4, max_branch=3, max_depth=3))
def test_meet_depth_properties(a, b):
    assert meet_depth(a, ORIGIN) == 0
    assert meet_depth(a, a) == origin_dist(a)
    assert 0 <= meet_depth(a, b) <= min(origin_dist(a), origin_dist(b))
    assert meet_depth(a, b) == meet_depth(b, a)


# -- validation ----------------------------------------------------------------

def test_validate_examples():
    assert TreeSpec(Regular(3), 3).validate() is None
    bad = TreeSpec(Line(), 3).validate()
    assert bad is not None and bad.witness == ORIGIN
    core = TreeSpec.explicit_core_of(R3, 2, 2)
    entries = tuple((t, 1 if t == "1;0" else d) for t, d in core.family.entries)
    leafy = TreeSpec(ExplicitCore(entries, 2, 2), 2)
    violation = leafy.validate()
    assert violation is not None
    assert violation.witness == v("1;0")


def test_validate_core_consistency():
    core = TreeSpec.explicit_core_of(R3, 2, 2)
    assert core.validate() is None
    missing = tuple(e for e in core.family.entries if e[0] != "2;")
    assert TreeSpec(ExplicitCore(missing, 2, 2), 2).validate() is not None
    extra = core.family.entries + (("9;", 3),)
    assert TreeSpec(ExplicitCore(extra, 2, 2), 2).validate() is not None


def test_malformed_families():
    with pytest.raises(SpecError):
        RayPeriodic((), (2,))
    with pytest.raises(SpecError):
        ExplicitCore((("0;", 3),), 0, 1)
    with pytest.raises(SpecError):
        Regular(1)
    with pytest.raises(SpecError):
        TreeSpec(Regular(3), 4)


def test_ray_periodic_degrees():
    spec = TreeSpec.ray_periodic([3, 2], [2, 3])
    assert spec.degree(ORIGIN) == 3
    assert spec.degree(v("1;")) == 2
    assert spec.degree(v("2;")) == 3
    assert spec.degree(v("0;0")) == 2
    assert spec.degree(v("0;0.0")) == 3
    assert spec.validate() is None
    flagged = TreeSpec.ray_periodic([3, 2], [2, 3], min_degree=3)
    violation = flagged.validate()
    assert violation is not None and violation.witness == v("1;")


def test_custom_rule_usable_for_structure():
    from horoprod.tree import CustomRule

    spec = TreeSpec(CustomRule(lambda a: 4 if a.branch == 0 else 3), 3)
    assert spec.degree(ORIGIN) == 4
    assert len(spec.ball(2)) > len(R3.ball(2))
    assert spec.validate() is None


# -- serialization -------------------------------------------------------------

@pytest.mark.parametrize("spec", [
    R3, R4, LINE,
    TreeSpec.ray_periodic([3, 2], [2, 3]),
    TreeSpec.explicit_core_of(R3, 2, 2),
])
def test_spec_json_round_trip(spec):
    data = spec.to_json()
    assert TreeSpec.from_json(data) == spec
    assert TreeSpec.from_text(spec.to_text()) == spec
    assert json.loads(spec.to_text()) == data


def test_custom_rule_not_serializable():
    from horoprod.tree import CustomRule

    with pytest.raises(SpecError):
        TreeSpec(CustomRule(lambda a: 3), 2).to_json()
