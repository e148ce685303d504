"""Ends, their Busemann functions, horocycle levels, the level dichotomy."""

import itertools

import pytest

from horoprod.rays import (
    BranchingRay,
    FSet,
    GAMMA,
    UndecidableFamilyError,
    canonical_at_height,
    f_set,
    level_busemann,
    level_count,
    level_sequence,
    level_set_report,
    parse_ray,
    ray_busemann,
    ray_confluent,
    ray_split_depth,
    ray_vertex,
    validate_ray,
)
from horoprod.tree import CustomRule, ORIGIN, TreeSpec, VertexAddress, height

R3 = TreeSpec.regular(3)
R4 = TreeSpec.regular(4)
LINE = TreeSpec.line()


def v(text):
    return VertexAddress.parse(text)


# -- representation ------------------------------------------------------------

def test_parse_and_format():
    assert parse_ray("gamma") is GAMMA
    ray = parse_ray("0;0.1(0.1)")
    assert ray == BranchingRay(0, (0, 1), (0, 1))
    assert parse_ray(str(ray)) == ray
    assert str(parse_ray("2;(0)")) == "2;(0)"
    with pytest.raises(ValueError):
        parse_ray("0;0.1")


def test_normalization():
    assert BranchingRay(0, (0,), (0,)) == BranchingRay(0, (), (0,))
    assert BranchingRay(1, (), (0, 1, 0, 1)) == BranchingRay(1, (), (0, 1))
    # prefix letter absorbed by rotating the cycle
    assert BranchingRay(0, (1,), (0, 1)) == BranchingRay(0, (), (1, 0))
    assert BranchingRay(0, (), (0,)) != BranchingRay(0, (), (1,))
    assert BranchingRay(0, (), (0,)) != BranchingRay(1, (), (0,))
    with pytest.raises(ValueError):
        BranchingRay(0, (), ())


def test_validity():
    assert validate_ray(R3, BranchingRay(0, (), (1,)))
    assert not validate_ray(R3, BranchingRay(0, (), (2,)))
    assert validate_ray(R3, BranchingRay(1, (), (0,)))
    assert not validate_ray(R3, BranchingRay(1, (), (1, 0)))  # z_1 has one label
    assert validate_ray(LINE, BranchingRay(0, (), (0,)))
    assert not validate_ray(LINE, BranchingRay(0, (), (1,)))
    assert not validate_ray(LINE, BranchingRay(1, (), (0,)))
    periodic = TreeSpec.ray_periodic([3], [3, 2])
    # vertices at even depth >= 2 have a single label, so only cycles
    # placing letter 0 there survive
    assert validate_ray(periodic, BranchingRay(0, (), (0, 1)))
    assert not validate_ray(periodic, BranchingRay(0, (), (1, 0)))
    assert not validate_ray(periodic, BranchingRay(0, (), (1, 1)))


def test_ray_vertices():
    ray = BranchingRay(1, (), (0,))
    assert [str(ray_vertex(ray, n)) for n in range(4)] == \
        ["0;", "1;", "1;0", "1;0.0"]
    assert ray_vertex(GAMMA, 5) == v("5;")


# -- confluents and Busemann values ---------------------------------------------

def test_confluent_examples():
    assert ray_confluent(v("3;"), GAMMA) == v("3;")
    assert ray_confluent(v("0;0.1"), BranchingRay(0, (), (0,))) == v("0;0")
    assert ray_confluent(v("2;"), BranchingRay(0, (), (0,))) == ORIGIN


def test_ray_busemann_examples():
    assert ray_busemann(BranchingRay(2, (), (0,)), ORIGIN) == 0
    assert ray_busemann(GAMMA, v("2;")) == -2
    assert ray_busemann(BranchingRay(0, (), (0,)), v("2;")) == 2


def test_ray_busemann_is_height_for_gamma():
    for a in R3.ball(4):
        assert ray_busemann(GAMMA, a) == height(a)


def test_level_busemann_examples():
    assert level_busemann(0, ORIGIN) == 0
    assert level_busemann(3, v("0;0")) == 1
    assert level_busemann(-2, v("1;")) == 1
    for k in range(-4, 5):
        assert level_busemann(k, ORIGIN) == 0
    for a in R3.ball(3):
        assert level_busemann(0, a) == -abs(height(a))


def test_ray_split_depth():
    assert ray_split_depth(GAMMA, GAMMA) is None
    assert ray_split_depth(GAMMA, BranchingRay(3, (), (0,))) == 3
    assert ray_split_depth(BranchingRay(0, (), (0,)),
                           BranchingRay(0, (), (0, 1))) == 1
    r = BranchingRay(2, (0, 1), (1, 0))
    assert ray_split_depth(r, r) is None
    assert ray_split_depth(BranchingRay(0, (), (0,)),
                           BranchingRay(1, (), (0,))) == 0


def test_stabilization_along_ray():
    # anchored values along a ray settle to the ray's function
    from horoprod.tree import vertex_busemann

    ray = BranchingRay(1, (0,), (1,))
    ball = R3.ball(4)
    for y in ball:
        want = ray_busemann(ray, y)
        for n in range(7, 15):
            assert vertex_busemann(ray_vertex(ray, n), y) == want


# -- level sets ------------------------------------------------------------------

def test_level_count_examples():
    assert level_count(LINE, 2, 5) == 1
    assert level_count(R3, 0, 0) == 1
    # brute force: the only height-0 vertices within distance 2 are the
    # origin and the single labeled child of z_1
    assert sorted(str(a) for a in R3.ball(2) if height(a) == 0) == ["0;", "1;0"]
    assert level_count(R3, 0, 2) == 2


def test_level_sequence_matches_ball_filter():
    for spec in (R3, R4, LINE):
        for k in range(-3, 4):
            from_ball = sorted(str(a) for a in spec.ball(8) if height(a) == k)
            from_stream = []
            for a in level_sequence(spec, k):
                if 2 * a.branch + k > 8:
                    # later elements sit at distance 2*branch + k > 8
                    break
                from_stream.append(a)
            filtered = sorted(str(a) for a in from_stream
                              if a.branch + len(a.suffix) <= 8)
            assert filtered == from_ball, (spec, k)


def test_level_sequence_order():
    seq = list(itertools.islice(level_sequence(R3, 0), 8))
    assert [str(a) for a in seq] == \
        ["0;", "1;0", "2;0.0", "2;0.1", "3;0.0.0", "3;0.0.1", "3;0.1.0", "3;0.1.1"]
    branches = [a.branch for a in seq]
    assert branches == sorted(branches)


def test_level_sequence_finite_on_line():
    assert [str(a) for a in level_sequence(LINE, 2)] == ["0;0.0"]
    assert [str(a) for a in level_sequence(LINE, -1)] == ["1;"]


def test_f_set():
    assert f_set(R3) == FSet.ALL
    assert f_set(LINE) == FSet.EMPTY
    assert f_set(TreeSpec.explicit_core_of(R3, 4, 2)) == FSet.EMPTY
    assert f_set(TreeSpec.explicit_core_of(LINE, 2, 3)) == FSet.ALL
    assert f_set(TreeSpec.ray_periodic([2, 3], [2])) == FSet.ALL
    # bushy subtrees cannot rescue a branchless ray
    assert f_set(TreeSpec.ray_periodic([2], [3, 2])) == FSet.EMPTY
    with pytest.raises(UndecidableFamilyError):
        f_set(TreeSpec(CustomRule(lambda a: 3), 2))


def test_f_set_consistent_with_counting_oracle():
    specs = [R3, LINE, TreeSpec.explicit_core_of(R3, 3, 2),
             TreeSpec.ray_periodic([2], [3, 2])]
    for spec in specs:
        infinite = f_set(spec) == FSet.ALL
        for k in (-2, 0, 1):
            lo, hi = level_count(spec, k, 9), level_count(spec, k, 11)
            assert (hi > lo) == infinite, (spec, k, lo, hi)


def test_level_set_report():
    rep = level_set_report(R3, 1, (4, 6, 8))
    assert rep.verdict == "infinite"
    counts = [c for _, c in rep.sampled_counts]
    assert counts == sorted(counts)
    rep = level_set_report(LINE, 1, (4, 6, 8))
    assert rep.verdict == "finite"


def test_canonical_at_height():
    for spec in (R3, LINE):
        for h in range(-4, 5):
            a = canonical_at_height(spec, h)
            assert height(a) == h
            assert a.branch + len(a.suffix) == abs(h)
            spec.require_valid(a)
