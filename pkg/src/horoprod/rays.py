"""Ends of a pointed tree, their Busemann functions, and horocycle levels.

A boundary point is a non-backtracking infinite path from the origin:
either the distinguished end itself (``GAMMA``) or a path that follows
the distinguished ray up to some vertex and then walks an eventually
periodic word of child labels.  Eventually periodic ends are dense in
the full end space and keep every comparison exact and terminating;
arbitrary ends can still be probed through their vertex sequences.

The boundary metric 2^(-N) between two ends is never materialized as a
float; ``ray_split_depth`` returns the exponent N as an exact integer.

Level sets: H_k collects the vertices of height k.  Whether H_k is
infinite does not depend on k.  Sketch: a vertex of height k either is
the ray vertex z_{-k} or lies in the subtree hanging off some ray
vertex z_n with at least one labeled child, at suffix depth n + k.
Each such subtree meets H_k in finitely many vertices (local
finiteness) and, because no vertex is a leaf, in at least one vertex
whenever n + k >= 1.  So H_k is infinite exactly when infinitely many
ray vertices carry a labeled child, independently of k; the set of
infinite levels is all of Z or empty.  ``f_set`` implements that
dichotomy and the level-counting oracle cross-checks it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

from .tree import (
    AddressError,
    ExplicitCore,
    Line,
    RayPeriodic,
    Regular,
    TreeSpec,
    VertexAddress,
    height,
    origin_dist,
    path_vertex,
)


class UndecidableFamilyError(Exception):
    """Raised when a decision procedure meets a custom degree rule."""


@dataclass(frozen=True)
class GammaEnd:
    """The distinguished end the tree is pointed at."""

    def __str__(self):
        return "gamma"


@dataclass(frozen=True)
class BranchingRay:
    """An end leaving the distinguished ray at z_branch, then walking
    ``prefix`` followed by ``cycle`` repeated forever.

    Construction normalizes to the unique shortest representation, so
    structural equality coincides with equality of ends.
    """

    branch: int
    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self):
        prefix = tuple(self.prefix)
        cycle = tuple(self.cycle)
        if not cycle:
            raise ValueError("cycle must be nonempty")
        if self.branch < 0:
            raise ValueError("negative branch index")
        if any(c < 0 for c in prefix + cycle):
            raise ValueError("negative child label")
        for p in range(1, len(cycle)):
            if len(cycle) % p == 0 and cycle == cycle[:p] * (len(cycle) // p):
                cycle = cycle[:p]
                break
        while prefix and prefix[-1] == cycle[-1]:
            prefix = prefix[:-1]
            cycle = (cycle[-1],) + cycle[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    def letter(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def __str__(self):
        pre = ".".join(str(c) for c in self.prefix)
        cyc = ".".join(str(c) for c in self.cycle)
        return f"{self.branch};{pre}({cyc})"


GAMMA = GammaEnd()
Ray = GammaEnd | BranchingRay


def parse_ray(text: str) -> Ray:
    if text == "gamma":
        return GAMMA
    head, sep, tail = text.partition(";")
    if not sep or not tail.endswith(")") or "(" not in tail:
        raise ValueError(f"unparsable ray {text!r}")
    pre_text, _, cyc_text = tail[:-1].partition("(")
    try:
        branch = int(head)
        prefix = tuple(int(c) for c in pre_text.split(".")) if pre_text else ()
        cycle = tuple(int(c) for c in cyc_text.split(".")) if cyc_text else ()
    except ValueError as exc:
        raise ValueError(f"unparsable ray {text!r}") from exc
    return BranchingRay(branch, prefix, cycle)


def ray_vertex(ray: Ray, step: int) -> VertexAddress:
    """The step-th vertex along the end's path from the origin."""
    if step < 0:
        raise ValueError("step must be >= 0")
    if isinstance(ray, GammaEnd) or step <= ray.branch:
        return VertexAddress(step, ())
    word = tuple(ray.letter(i) for i in range(step - ray.branch))
    return VertexAddress(ray.branch, word)


def ray_meet_depth(v: VertexAddress, ray: Ray) -> int:
    """Length of the common initial segment of v's origin path and the end."""
    if isinstance(ray, GammaEnd):
        return v.branch
    if v.branch != ray.branch:
        return min(v.branch, ray.branch)
    n = 0
    for i, letter in enumerate(v.suffix):
        if letter != ray.letter(i):
            break
        n += 1
    return v.branch + n


def ray_confluent(v: VertexAddress, ray: Ray) -> VertexAddress:
    """The farthest-from-origin vertex shared by [origin, v] and the end."""
    return path_vertex(v, ray_meet_depth(v, ray))


def ray_busemann(ray: Ray, y: VertexAddress) -> int:
    """Busemann function of the end: d(o, y) minus twice the meet depth."""
    return origin_dist(y) - 2 * ray_meet_depth(y, ray)


def level_busemann(k: int, v: VertexAddress) -> int:
    """Busemann limit attached to horocycle level k: |k| - |k - height|."""
    return abs(k) - abs(k - height(v))


def ray_split_depth(r1: Ray, r2: Ray) -> int | None:
    """Exponent N with boundary gap 2^(-N); None when the ends coincide."""
    if isinstance(r1, GammaEnd) and isinstance(r2, GammaEnd):
        return None
    if isinstance(r1, GammaEnd):
        return r2.branch
    if isinstance(r2, GammaEnd):
        return r1.branch
    if r1.branch != r2.branch:
        return min(r1.branch, r2.branch)
    if r1 == r2:
        return None
    bound = (len(r1.prefix) + len(r2.prefix)
             + math.lcm(len(r1.cycle), len(r2.cycle)) + 1)
    for i in range(bound):
        if r1.letter(i) != r2.letter(i):
            return r1.branch + i
    raise AssertionError("normalized distinct rays must split")


def validate_ray(spec: TreeSpec, ray: Ray, probe_letters: int = 64) -> bool:
    """Whether every letter of the end is a legal child label.

    Exact for the decidable families; a CustomRule is probed over the
    first ``probe_letters`` letters only.
    """
    if isinstance(ray, GammaEnd):
        return True
    fam = spec.family
    if isinstance(fam, (Regular, Line)):
        checked = len(ray.prefix) + len(ray.cycle)
    elif isinstance(fam, RayPeriodic):
        checked = (len(ray.prefix)
                   + math.lcm(len(ray.cycle), len(fam.off_ray_degrees))
                   + len(ray.cycle))
    elif isinstance(fam, ExplicitCore):
        checked = (max(fam.radius - ray.branch, 0)
                   + len(ray.prefix) + len(ray.cycle))
    else:
        checked = probe_letters
    cur = VertexAddress(ray.branch, ())
    for i in range(checked):
        letter = ray.letter(i)
        if letter >= spec.label_count(cur):
            return False
        cur = VertexAddress(cur.branch, cur.suffix + (letter,))
    return True


def require_valid_ray(spec: TreeSpec, ray: Ray) -> None:
    if not validate_ray(spec, ray):
        raise AddressError(f"ray {ray} does not exist in this tree")


def canonical_at_height(spec: TreeSpec, h: int) -> VertexAddress:
    """The closest-to-origin canonical vertex of the given height."""
    if h <= 0:
        return VertexAddress(-h, ())
    return VertexAddress(0, (0,) * h)


# -- level sets ---------------------------------------------------------------

class FSet:
    """Verdict on which horocycle levels are infinite."""

    ALL = "all_integers"
    EMPTY = "empty"


def _branching_bound(spec: TreeSpec) -> int | None:
    """Largest ray index with a labeled child, or None if unbounded."""
    fam = spec.family
    if isinstance(fam, Regular):
        return None if fam.degree >= 3 else 0
    if isinstance(fam, Line):
        return 0
    if isinstance(fam, RayPeriodic):
        return None if any(d >= 3 for d in fam.ray_degrees) else 0
    if isinstance(fam, ExplicitCore):
        return None if fam.tail_degree >= 3 else fam.radius
    raise UndecidableFamilyError("level-set decisions need a decidable family")


def f_set(spec: TreeSpec) -> str:
    """FSet.ALL when every level is infinite, FSet.EMPTY when none is."""
    return FSet.EMPTY if _branching_bound(spec) is not None else FSet.ALL


def level_sequence(spec: TreeSpec, k: int) -> Iterator[VertexAddress]:
    """The height-k vertices, by increasing branch index then word order.

    Terminates when the level set is finite; otherwise never exhausts.
    """
    bound = _branching_bound(spec)
    for n in itertools.count(max(0, -k)):
        if bound is not None and n > max(bound, -k):
            return
        length = n + k
        if length == 0:
            yield VertexAddress(n, ())
            continue
        root = VertexAddress(n, ())
        if spec.label_count(root) == 0:
            continue
        yield from _words_below(spec, root, length)


def _words_below(spec: TreeSpec, root: VertexAddress,
                 length: int) -> Iterator[VertexAddress]:
    if length == 0:
        yield root
        return
    for letter in range(spec.label_count(root)):
        child = VertexAddress(root.branch, root.suffix + (letter,))
        yield from _words_below(spec, child, length - 1)


def level_count(spec: TreeSpec, k: int, radius: int) -> int:
    """|H_k within the radius ball|, by brute-force ball filtering.

    Deliberately independent of ``level_sequence`` so the two routes can
    check each other.
    """
    return sum(1 for v in spec.ball(radius) if height(v) == k)


@dataclass(frozen=True)
class LevelSetReport:
    k: int
    sampled_counts: tuple[tuple[int, int], ...]
    verdict: str  # "finite" | "infinite"

    def payload(self) -> dict:
        return {"k": self.k, "sampled_counts": list(map(list, self.sampled_counts)),
                "verdict": self.verdict}


def level_set_report(spec: TreeSpec, k: int, radii: tuple[int, ...]) -> LevelSetReport:
    """Sample level counts over growing radii and call the growth verdict.

    The verdict compares the last two sampled radii: saturation means
    finite.  Sound for the supported families once the largest radius
    passes every branching ray vertex.
    """
    radii = tuple(sorted(radii))
    counts = tuple((r, level_count(spec, k, r)) for r in radii)
    if len(counts) >= 2 and counts[-1][1] > counts[-2][1]:
        verdict = "infinite"
    else:
        verdict = "finite"
    return LevelSetReport(k, counts, verdict)
