"""Symbolic sequence families in the product and their limit classification.

Structured families come with generators whose limiting behavior is
decidable, so classification is exact:

  EventuallyConstant  the constant sequence at a vertex
  RadialRay           one coordinate marches along an end, the other is
                      paired at the opposite height (see below)
  Horocyclic          both coordinates enumerate a horocycle level, in
                      canonical order (increasing branch index, then
                      word order), which forces divergence
  FixedFirst          first coordinate pinned, second enumerates its level
  FixedSecond         second coordinate pinned, first enumerates its level
  Alternating         interleaves horocycle levels; at least two distinct
                      levels means no limit
  Custom              an arbitrary generator, classified heuristically
                      over a finite window (verdicts are marked so)

Pairing rule for RadialRay: the opposite coordinate must sit at the
negated height.  By default it takes the closest canonical vertex of
that height (ray vertices for non-positive heights, the all-zeros word
otherwise); an optional pairing end supplies its own vertex whenever it
reaches the required height.  Since heights drive the classification,
the pairing only matters when the marching coordinate heads to the
distinguished end, in which case the opposite coordinate's own
geometric limit names the boundary point.

Every report records which height limits land in the trees' infinite
level sets, under two readings: per divergent component (used by the
classifier; a pinned coordinate imposes no condition) and the literal
simultaneous reading (reported for comparison, since it would reject
sequences whose convergence the empirical suite confirms).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .tree import VertexAddress, height
from .rays import (
    BranchingRay,
    FSet,
    GAMMA,
    GammaEnd,
    Ray,
    canonical_at_height,
    f_set,
    level_sequence,
    parse_ray,
    ray_vertex,
    validate_ray,
)
from .product import HoroProduct, ProductVertex, product_busemann, product_height
from .boundary import (
    BoundaryPoint,
    HoroFunction,
    PointKind,
    level_point,
    ray_point1,
    ray_point2,
    theta,
    vertex_point1,
    vertex_point2,
)


class FamilyExhausted(RuntimeError):
    """A divergent enumeration ran out of vertices (finite level set)."""


@dataclass(frozen=True)
class EventuallyConstant:
    vertex: ProductVertex


@dataclass(frozen=True)
class RadialRay:
    tree: int  # 1 or 2: which coordinate marches along the end
    ray: Ray
    pairing: Ray | None = None

    def __post_init__(self):
        if self.tree not in (1, 2):
            raise ValueError("tree must be 1 or 2")


@dataclass(frozen=True)
class Horocyclic:
    level: int


@dataclass(frozen=True)
class FixedFirst:
    vertex: VertexAddress  # the pinned first coordinate


@dataclass(frozen=True)
class FixedSecond:
    vertex: VertexAddress  # the pinned second coordinate


@dataclass(frozen=True)
class Alternating:
    levels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        if not self.levels:
            raise ValueError("levels must be nonempty")


@dataclass(frozen=True)
class Custom:
    """An arbitrary indexed generator.

    A wrapper that knows which structured family it imitates can say so
    through ``stabilizes_like`` (plus an index ``offset``); windows are
    then sized from the inner family instead of the blind default.
    """

    generator: Callable[[int], ProductVertex]
    label: str = "custom"
    stabilizes_like: "SequenceFamily | None" = None
    offset: int = 0


SequenceFamily = (EventuallyConstant | RadialRay | Horocyclic
                  | FixedFirst | FixedSecond | Alternating | Custom)


# -- term generation ----------------------------------------------------------

def _partner(spec, h: int, pairing: Ray | None) -> VertexAddress:
    """A deterministic vertex of the given height in the opposite tree."""
    if pairing is not None:
        if isinstance(pairing, GammaEnd):
            if h <= 0:
                return VertexAddress(-h, ())
        elif h > -pairing.branch:
            return ray_vertex(pairing, h + 2 * pairing.branch)
    return canonical_at_height(spec, h)


def term_stream(product: HoroProduct, family: SequenceFamily) -> Iterator[ProductVertex]:
    if isinstance(family, EventuallyConstant):
        return itertools.repeat(family.vertex)
    if isinstance(family, RadialRay):
        return _radial_stream(product, family)
    if isinstance(family, Horocyclic):
        seq1 = level_sequence(product.tree1, family.level)
        seq2 = level_sequence(product.tree2, -family.level)
        return _zip_levels(seq1, seq2, family.level)
    if isinstance(family, FixedFirst):
        k = -height(family.vertex)
        return (ProductVertex(family.vertex, t)
                for t in _exhaust_guard(level_sequence(product.tree2, k), k, 2))
    if isinstance(family, FixedSecond):
        k = -height(family.vertex)
        return (ProductVertex(t, family.vertex)
                for t in _exhaust_guard(level_sequence(product.tree1, k), k, 1))
    if isinstance(family, Alternating):
        streams = [term_stream(product, Horocyclic(k)) for k in family.levels]
        return (next(streams[n % len(streams)]) for n in itertools.count())
    return (family.generator(n) for n in itertools.count())


def _exhaust_guard(seq, k, tree):
    yielded = False
    for v in seq:
        yielded = True
        yield v
    side = f"tree {tree}"
    raise FamilyExhausted(f"level set at height {k} of {side} is finite"
                          if yielded else f"level set at height {k} of {side} is empty")


def _zip_levels(seq1, seq2, k):
    for v1, v2 in itertools.zip_longest(seq1, seq2):
        if v1 is None or v2 is None:
            raise FamilyExhausted(f"a level set at height {k} or {-k} is finite")
        yield ProductVertex(v1, v2)


def _radial_stream(product, family):
    if family.tree == 1:
        march_spec, other_spec = product.tree1, product.tree2
    else:
        march_spec, other_spec = product.tree2, product.tree1

    def gen():
        for n in itertools.count():
            v = ray_vertex(family.ray, n)
            partner = _partner(other_spec, -height(v), family.pairing)
            if family.tree == 1:
                yield ProductVertex(v, partner)
            else:
                yield ProductVertex(partner, v)

    return gen()


def terms(product: HoroProduct, family: SequenceFamily,
          stop: int, start: int = 0) -> list[ProductVertex]:
    return list(itertools.islice(term_stream(product, family), start, stop))


# -- reports ------------------------------------------------------------------

INTERIOR = "interior"
BOUNDARY = "boundary"
NOT_CONVERGENT = "not_convergent"
NOT_DECIDED = "not_decided"


def _eta_text(eta):
    if eta == math.inf:
        return "+inf"
    if eta == -math.inf:
        return "-inf"
    return eta


@dataclass(frozen=True)
class LimitReport:
    status: str
    hm_point: BoundaryPoint | None = None
    interior: ProductVertex | None = None
    component1: object = None  # VertexAddress | Ray | None
    component2: object = None
    eta: int | float | None = None
    busemann: HoroFunction | None = None
    heuristic: bool = False
    window: tuple[int, int] | None = None
    f_flags: dict | None = None
    notes: tuple[str, ...] = ()

    def payload(self) -> dict:
        return {
            "status": self.status,
            "hm_point": None if self.hm_point is None else str(self.hm_point),
            "interior": None if self.interior is None else str(self.interior),
            "component1": None if self.component1 is None else str(self.component1),
            "component2": None if self.component2 is None else str(self.component2),
            "eta": None if self.eta is None else _eta_text(self.eta),
            "busemann": None if self.busemann is None else str(self.busemann),
            "heuristic": self.heuristic,
            "window": None if self.window is None else list(self.window),
            "f_flags": self.f_flags,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class EmpiricalReport:
    convergent: bool
    window: tuple[int, int]
    radius: int
    points_checked: int
    matched_target: bool | None
    violations: tuple[dict, ...]

    def payload(self) -> dict:
        return {
            "convergent": self.convergent,
            "window": list(self.window),
            "radius": self.radius,
            "points_checked": self.points_checked,
            "matched_target": self.matched_target,
            "violations": list(self.violations),
        }


# -- classification -----------------------------------------------------------

def _f_membership(spec, eta) -> bool:
    if eta in (math.inf, -math.inf):
        return True
    return f_set(spec) == FSet.ALL


def _flags(product, eta1, eta2, divergent1, divergent2) -> dict:
    lit1 = _f_membership(product.tree1, eta1)
    lit2 = _f_membership(product.tree2, eta2)
    per1 = lit1 if divergent1 else True
    per2 = lit2 if divergent2 else True
    return {
        "literal": lit1 and lit2,
        "per_divergent_component": per1 and per2,
    }


def classify(product: HoroProduct, family: SequenceFamily,
             window: tuple[int, int] = (0, 80)) -> LimitReport:
    """Where the family goes in the height compactification.

    Structured kinds are decided exactly from their parameters; Custom
    generators get a finite-window verdict marked ``heuristic``.
    """
    if isinstance(family, EventuallyConstant):
        v = family.vertex
        return LimitReport(INTERIOR, interior=v, component1=v.x1,
                           component2=v.x2, eta=product_height(v),
                           busemann=theta(v),
                           f_flags=_flags(product, product_height(v),
                                          -product_height(v), False, False))
    if isinstance(family, RadialRay):
        return _classify_radial(product, family)
    if isinstance(family, Horocyclic):
        return _classify_level(product, family.level)
    if isinstance(family, FixedFirst):
        return _classify_pinned(product, family.vertex, pinned=1)
    if isinstance(family, FixedSecond):
        return _classify_pinned(product, family.vertex, pinned=2)
    if isinstance(family, Alternating):
        if len(set(family.levels)) == 1:
            return _classify_level(product, family.levels[0])
        return LimitReport(NOT_CONVERGENT,
                           notes=("height oscillates between distinct levels",))
    return _classify_window(product, family, window)


def busemann_limit(product: HoroProduct, family: SequenceFamily,
                   window: tuple[int, int] = (0, 80)) -> HoroFunction | None:
    """The family's limiting function, or None when there is no limit.

    Always the theta image of the classified limit point (interior
    anchors included), so the two compactification views stay paired.
    """
    return classify(product, family, window).busemann


def _classify_radial(product, family):
    marching_gamma = isinstance(family.ray, GammaEnd)
    if family.tree == 1:
        eta = -math.inf if marching_gamma else math.inf
    else:
        eta = math.inf if marching_gamma else -math.inf
    other_spec = product.tree2 if family.tree == 1 else product.tree1
    if marching_gamma:
        other_limit = _partner_limit(other_spec, family.pairing)
    else:
        other_limit = GAMMA
    if family.tree == 1:
        comp1, comp2 = family.ray, other_limit
    else:
        comp1, comp2 = other_limit, family.ray
    point = ray_point1(comp1) if eta == math.inf else ray_point2(comp2)
    return LimitReport(BOUNDARY, hm_point=point, component1=comp1,
                       component2=comp2, eta=eta, busemann=theta(point),
                       f_flags=_flags(product, eta, -eta, True, True))


def _partner_limit(spec, pairing):
    """Geometric limit of the partner coordinate when its heights rise."""
    if pairing is not None and not isinstance(pairing, GammaEnd):
        return pairing
    return BranchingRay(0, (), (0,))


def _classify_level(product, k):
    flags = _flags(product, k, -k, True, True)
    if not flags["per_divergent_component"]:
        return LimitReport(
            NOT_CONVERGENT, eta=k, f_flags=flags,
            notes=("a level enumeration is finite, no divergent sequence exists",))
    point = level_point(k)
    return LimitReport(BOUNDARY, hm_point=point, component1=GAMMA,
                       component2=GAMMA, eta=k, busemann=theta(point),
                       f_flags=flags)


def _classify_pinned(product, pinned_vertex, pinned):
    k = -height(pinned_vertex)
    if pinned == 1:
        divergent_spec = product.tree2
        eta = height(pinned_vertex)
        point = vertex_point1(pinned_vertex)
        comp1, comp2 = pinned_vertex, GAMMA
        div1, div2 = False, True
    else:
        divergent_spec = product.tree1
        eta = k
        point = vertex_point2(pinned_vertex)
        comp1, comp2 = GAMMA, pinned_vertex
        div1, div2 = True, False
    flags = _flags(product, eta, -eta, div1, div2)
    if f_set(divergent_spec) != FSet.ALL:
        return LimitReport(
            NOT_CONVERGENT, eta=eta, f_flags=flags,
            notes=("the divergent coordinate's level set is finite",))
    return LimitReport(BOUNDARY, hm_point=point, component1=comp1,
                       component2=comp2, eta=eta, busemann=theta(point),
                       f_flags=flags)


def _classify_window(product, family, window):
    """Finite-window heuristics for Custom generators.

    A verdict here is evidence, not proof; it is always marked
    heuristic and carries the window it was read from.
    """
    n0, n1 = window
    if n1 <= n0:
        raise ValueError("window must be nonempty")
    try:
        seq = terms(product, family, n1, n0)
    except FamilyExhausted as exc:
        return LimitReport(NOT_CONVERGENT, heuristic=True, window=window,
                           notes=(str(exc),))
    tail = seq[len(seq) // 2:]
    heights = [product_height(v) for v in tail]
    if all(v == tail[0] for v in tail):
        v = tail[0]
        return LimitReport(INTERIOR, interior=v, component1=v.x1,
                           component2=v.x2, eta=heights[0], busemann=theta(v),
                           heuristic=True, window=window,
                           f_flags=_flags(product, heights[0], -heights[0],
                                          False, False))
    if all(h == heights[0] for h in heights):
        return _window_bounded(product, family, window, tail, heights[0])
    up = all(b > a for a, b in zip(heights, heights[1:]))
    down = all(b < a for a, b in zip(heights, heights[1:]))
    if up or down:
        return _window_unbounded(product, window, tail, up)
    return LimitReport(NOT_CONVERGENT, heuristic=True, window=window,
                       notes=("heights neither stabilize nor diverge in window",))


def _diverging(coords) -> bool:
    # at bounded height each branch holds finitely many vertices, so a
    # divergent sequence never repeats and its branch index creeps out;
    # level enumerations may plateau on one branch for a long stretch,
    # which is why distance growth is not required here
    if len(set(coords)) != len(coords):
        return False
    branches = [c.branch for c in coords]
    return all(b >= a for a, b in zip(branches, branches[1:]))


def _window_bounded(product, family, window, tail, k):
    xs1 = [v.x1 for v in tail]
    xs2 = [v.x2 for v in tail]
    const1 = all(x == xs1[0] for x in xs1)
    const2 = all(x == xs2[0] for x in xs2)
    flags = _flags(product, k, -k, not const1, not const2)
    if const1 and _diverging(xs2):
        point = vertex_point1(xs1[0])
        return LimitReport(BOUNDARY, hm_point=point, component1=xs1[0],
                           component2=GAMMA, eta=k, busemann=theta(point),
                           heuristic=True, window=window, f_flags=flags)
    if const2 and _diverging(xs1):
        point = vertex_point2(xs2[0])
        return LimitReport(BOUNDARY, hm_point=point, component1=GAMMA,
                           component2=xs2[0], eta=k, busemann=theta(point),
                           heuristic=True, window=window, f_flags=flags)
    if _diverging(xs1) and _diverging(xs2):
        point = level_point(k)
        return LimitReport(BOUNDARY, hm_point=point, component1=GAMMA,
                           component2=GAMMA, eta=k, busemann=theta(point),
                           heuristic=True, window=window, f_flags=flags)
    return LimitReport(NOT_CONVERGENT, heuristic=True, window=window, eta=k,
                       f_flags=flags,
                       notes=("bounded height but components wander",))


def _window_unbounded(product, window, tail, up):
    eta = math.inf if up else -math.inf
    coords = [v.x1 for v in tail] if up else [v.x2 for v in tail]
    branches = [c.branch for c in coords]
    toward_gamma = (all(b2 >= b1 for b1, b2 in zip(branches, branches[1:]))
                    and branches[-1] - branches[0] >= max(2, len(tail) // 4))
    if toward_gamma:
        point = ray_point1(GAMMA) if up else ray_point2(GAMMA)
        return LimitReport(
            BOUNDARY, hm_point=point,
            component1=GAMMA, component2=GAMMA, eta=eta,
            busemann=theta(point), heuristic=True, window=window,
            f_flags=_flags(product, eta, -eta, True, True),
            notes=("limit is the height function of a distinguished end",))
    return LimitReport(NOT_DECIDED, eta=eta, heuristic=True, window=window,
                       notes=("diverging heights, but the escaping end cannot "
                              "be read off a finite window",))


# -- empirical convergence ----------------------------------------------------

def stabilization_bound(product: HoroProduct, family: SequenceFamily,
                        radius: int) -> int:
    """A sound index past which structured families have stabilized on
    the radius ball (heights past the ball and meet depths settled).

    Custom generators get a fixed default, reported as heuristic.
    """
    if isinstance(family, EventuallyConstant):
        return 1
    if isinstance(family, RadialRay):
        b_march = 0 if isinstance(family.ray, GammaEnd) else family.ray.branch
        pairing = family.pairing
        b_pair = (pairing.branch
                  if isinstance(pairing, BranchingRay) else 0)
        return radius + 2 + 2 * (b_march + b_pair)
    if isinstance(family, Horocyclic):
        c1 = _level_prefix_count(product.tree1, family.level, radius)
        c2 = _level_prefix_count(product.tree2, -family.level, radius)
        return max(c1, c2)
    if isinstance(family, FixedFirst):
        return _level_prefix_count(product.tree2, -height(family.vertex), radius)
    if isinstance(family, FixedSecond):
        return _level_prefix_count(product.tree1, -height(family.vertex), radius)
    if isinstance(family, Alternating):
        inner = max(stabilization_bound(product, Horocyclic(k), radius)
                    for k in family.levels)
        return inner * len(family.levels)
    if family.stabilizes_like is not None:
        return stabilization_bound(product, family.stabilizes_like,
                                   radius) + family.offset
    return 40


def _level_prefix_count(spec, k, radius) -> int:
    """How many level-k vertices have branch index <= radius."""
    count = 0
    for v in level_sequence(spec, k):
        if v.branch > radius:
            break
        count += 1
    return count


def empirical_pointwise_check(product: HoroProduct, family: SequenceFamily,
                              window: tuple[int, int], radius: int,
                              target: HoroFunction | None = None,
                              max_violations: int = 8) -> EmpiricalReport:
    """Exact pointwise test over a window of indices and a test ball.

    For every ball vertex the anchored Busemann values across the
    window must be constant and, when a target is supplied, equal to
    the target's value.  Violations carry the witnessing index.
    """
    n0, n1 = window
    if not (0 <= n0 < n1):
        raise ValueError("window must satisfy 0 <= n0 < n1")
    try:
        seq = terms(product, family, n1, n0)
    except FamilyExhausted as exc:
        return EmpiricalReport(False, window, radius, 0, None,
                               ({"reason": str(exc)},))
    ball = product.ball(radius)
    violations: list[dict] = []
    matched = None if target is None else True
    for y in ball:
        first = product_busemann(seq[0], y)
        for i, x in enumerate(seq):
            val = product_busemann(x, y)
            if val != first:
                violations.append({"vertex": str(y), "index": n0 + i,
                                   "value": val, "previous": first})
                break
        else:
            if target is not None and first != target(y):
                matched = False
                violations.append({"vertex": str(y), "value": first,
                                   "expected": target(y)})
        if len(violations) >= max_violations:
            break
    convergent = not any("previous" in v or "reason" in v for v in violations)
    return EmpiricalReport(convergent, window, radius, len(ball), matched,
                           tuple(violations))


@dataclass(frozen=True)
class IsomorphismEntry:
    label: str
    symbolic_status: str
    empirical_convergent: bool
    agreed: bool
    heuristic: bool
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class IsomorphismSummary:
    total: int
    agreed: int
    undecided: int
    disagreements: tuple[IsomorphismEntry, ...]
    entries: tuple[IsomorphismEntry, ...]

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def payload(self) -> dict:
        return {
            "total": self.total,
            "agreed": self.agreed,
            "undecided": self.undecided,
            "disagreements": [e.label for e in self.disagreements],
        }


def family_label(family: SequenceFamily) -> str:
    if isinstance(family, EventuallyConstant):
        return f"const[{family.vertex}]"
    if isinstance(family, RadialRay):
        pairing = "-" if family.pairing is None else str(family.pairing)
        return f"radial[t{family.tree};{family.ray};{pairing}]"
    if isinstance(family, Horocyclic):
        return f"horocyclic[{family.level}]"
    if isinstance(family, FixedFirst):
        return f"fixed1[{family.vertex}]"
    if isinstance(family, FixedSecond):
        return f"fixed2[{family.vertex}]"
    if isinstance(family, Alternating):
        return f"alternating[{','.join(map(str, family.levels))}]"
    return f"custom[{family.label}]"


def isomorphism_check(product: HoroProduct,
                      families: Sequence[SequenceFamily],
                      radius: int = 4,
                      extra_window: int = 55) -> IsomorphismSummary:
    """Symbolic classification against empirical pointwise convergence.

    Each family's window starts at its stabilization bound and runs
    ``extra_window`` further.  Agreement means: both routes converge
    and the empirical values equal the classified limit function
    pointwise, or both routes report non-convergence.  Families the
    window heuristic cannot decide are counted separately.
    """
    entries = []
    disagreements = []
    undecided = 0
    for family in families:
        rep = classify(product, family)
        n0 = stabilization_bound(product, family, radius)
        window = (n0, n0 + extra_window)
        if rep.status == NOT_DECIDED:
            undecided += 1
            entry = IsomorphismEntry(family_label(family), rep.status,
                                     False, True, rep.heuristic,
                                     {"note": "window heuristic undecided"})
            entries.append(entry)
            continue
        target = rep.busemann if rep.status in (INTERIOR, BOUNDARY) else None
        emp = empirical_pointwise_check(product, family, window, radius, target)
        if rep.status in (INTERIOR, BOUNDARY):
            agreed = emp.convergent and emp.matched_target is True
        else:
            agreed = not emp.convergent
        entry = IsomorphismEntry(
            family_label(family), rep.status, emp.convergent, agreed,
            rep.heuristic,
            {"window": list(window),
             "violations": list(emp.violations)} if not agreed else {})
        entries.append(entry)
        if not agreed:
            disagreements.append(entry)
    agreed_count = sum(1 for e in entries if e.agreed and e.symbolic_status != NOT_DECIDED)
    return IsomorphismSummary(len(entries), agreed_count, undecided,
                              tuple(disagreements), tuple(entries))


# -- realizability ------------------------------------------------------------

def realizability(product: HoroProduct, p: BoundaryPoint) -> tuple[bool, str | None]:
    """Whether some interior sequence converges to the descriptor.

    Level points need both level sets infinite; pinned-vertex points
    need the opposite tree's level set infinite; non-distinguished ends
    are always reachable; a distinguished end needs its own tree's
    level sets infinite (heights must climb while hugging the ray).
    """
    all1 = f_set(product.tree1) == FSet.ALL
    all2 = f_set(product.tree2) == FSet.ALL
    if p.kind is PointKind.LEVEL:
        if all1 and all2:
            return True, None
        side = "first" if not all1 else "second"
        return False, f"the {side} tree has finite horocycle levels"
    if p.kind is PointKind.VERTEX1:
        if all2:
            return True, None
        return False, "the second tree has finite horocycle levels"
    if p.kind is PointKind.VERTEX2:
        if all1:
            return True, None
        return False, "the first tree has finite horocycle levels"
    if p.kind is PointKind.RAY1:
        if not isinstance(p.payload, GammaEnd):
            return True, None
        if all1:
            return True, None
        return False, ("heights cannot climb along the first tree's "
                       "distinguished ray: its levels are finite")
    if not isinstance(p.payload, GammaEnd):
        return True, None
    if all2:
        return True, None
    return False, ("heights cannot climb along the second tree's "
                   "distinguished ray: its levels are finite")


# -- randomized family generation ----------------------------------------------

def _random_ray(spec, rng: random.Random, max_branch=3) -> Ray:
    for _ in range(64):
        branch = rng.randrange(0, max_branch + 1)
        word = []
        cur = VertexAddress(branch, ())
        length = rng.randrange(1, 5)
        ok = True
        for _ in range(length):
            count = spec.label_count(cur)
            if count == 0:
                ok = False
                break
            letter = rng.randrange(count)
            word.append(letter)
            cur = VertexAddress(cur.branch, cur.suffix + (letter,))
        if not ok:
            continue
        cut = rng.randrange(0, len(word))
        ray = BranchingRay(branch, tuple(word[:cut]), tuple(word[cut:]))
        if validate_ray(spec, ray):
            return ray
    raise RuntimeError("could not sample a ray")


def _random_vertex(spec, rng: random.Random, max_dist=3) -> VertexAddress:
    branch = rng.randrange(0, max_dist + 1)
    cur = VertexAddress(branch, ())
    for _ in range(max_dist - branch):
        count = spec.label_count(cur)
        if count == 0 or rng.random() < 0.4:
            break
        cur = VertexAddress(cur.branch, cur.suffix + (rng.randrange(count),))
    return cur


def _random_product_vertex(product, rng) -> ProductVertex:
    x1 = _random_vertex(product.tree1, rng)
    pool = list(itertools.islice(level_sequence(product.tree2, -height(x1)), 6))
    return ProductVertex(x1, rng.choice(pool))


def random_families(product: HoroProduct, count: int, seed: int,
                    ) -> list[SequenceFamily]:
    """A reproducible mix of all structured kinds plus custom wrappers."""
    rng = random.Random(seed)
    out: list[SequenceFamily] = []
    makers = [
        lambda: EventuallyConstant(_random_product_vertex(product, rng)),
        lambda: RadialRay(1, _random_ray(product.tree1, rng),
                          None if rng.random() < 0.5
                          else _random_ray(product.tree2, rng)),
        lambda: RadialRay(2, _random_ray(product.tree2, rng),
                          None if rng.random() < 0.5
                          else _random_ray(product.tree1, rng)),
        lambda: RadialRay(1, GAMMA,
                          None if rng.random() < 0.5
                          else _random_ray(product.tree2, rng)),
        lambda: RadialRay(2, GAMMA, None),
        lambda: Horocyclic(rng.randrange(-4, 5)),
        lambda: FixedFirst(_random_vertex(product.tree1, rng)),
        lambda: FixedSecond(_random_vertex(product.tree2, rng)),
        lambda: Alternating((rng.randrange(-2, 3), rng.randrange(-2, 3))),
        lambda: _shifted_custom(product, Horocyclic(rng.randrange(-3, 4)),
                                rng.randrange(1, 9)),
        lambda: _shifted_custom(product, FixedSecond(_random_vertex(product.tree2, rng)),
                                rng.randrange(1, 9)),
        lambda: _diagonal_custom(product, toward_first=rng.random() < 0.5),
    ]
    i = 0
    while len(out) < count:
        out.append(makers[i % len(makers)]())
        i += 1
    return out


def _shifted_custom(product, inner: SequenceFamily, offset: int) -> Custom:
    stream_cache: list[ProductVertex] = []
    stream = term_stream(product, inner)

    def gen(n: int) -> ProductVertex:
        while len(stream_cache) <= n + offset:
            stream_cache.append(next(stream))
        return stream_cache[n + offset]

    return Custom(gen, label=f"shifted+{offset}:{family_label(inner)}",
                  stabilizes_like=inner, offset=offset)


def _diagonal_custom(product, toward_first: bool) -> Custom:
    """Heights diverge while the climbing coordinate hugs its own
    distinguished ray, so the limit is that ray's height function."""

    def gen(n: int) -> ProductVertex:
        deep = VertexAddress(n, (0,) * (2 * n))
        ray_side = VertexAddress(n, ())
        if toward_first:
            return ProductVertex(deep, ray_side)
        return ProductVertex(ray_side, deep)

    side = "first" if toward_first else "second"
    return Custom(gen, label=f"diagonal-to-gamma[{side}]")


# -- serialization ------------------------------------------------------------

def family_to_json(family: SequenceFamily) -> dict:
    if isinstance(family, EventuallyConstant):
        return {"kind": "eventually_constant", "vertex": str(family.vertex)}
    if isinstance(family, RadialRay):
        data = {"kind": "radial_ray", "tree": family.tree, "ray": str(family.ray)}
        if family.pairing is not None:
            data["pairing"] = str(family.pairing)
        return data
    if isinstance(family, Horocyclic):
        return {"kind": "horocyclic", "level": family.level}
    if isinstance(family, FixedFirst):
        return {"kind": "fixed_first", "vertex": str(family.vertex)}
    if isinstance(family, FixedSecond):
        return {"kind": "fixed_second", "vertex": str(family.vertex)}
    if isinstance(family, Alternating):
        return {"kind": "alternating", "levels": list(family.levels)}
    raise ValueError("custom generators are not serializable")


def family_from_json(data: dict) -> SequenceFamily:
    kind = data["kind"]
    if kind == "eventually_constant":
        return EventuallyConstant(ProductVertex.parse(data["vertex"]))
    if kind == "radial_ray":
        pairing = data.get("pairing")
        return RadialRay(int(data["tree"]), parse_ray(data["ray"]),
                         None if pairing is None else parse_ray(pairing))
    if kind == "horocyclic":
        return Horocyclic(int(data["level"]))
    if kind == "fixed_first":
        return FixedFirst(VertexAddress.parse(data["vertex"]))
    if kind == "fixed_second":
        return FixedSecond(VertexAddress.parse(data["vertex"]))
    if kind == "alternating":
        return Alternating(tuple(int(k) for k in data["levels"]))
    raise ValueError(f"unknown family kind {kind!r}")
