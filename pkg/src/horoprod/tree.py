"""Pointed rooted trees with exact integer geometry.

A tree here is locally finite, leafless (every vertex has degree >= 2),
rooted at a base vertex, and pointed at a distinguished end: the ray
z_0 = origin, z_1, z_2, ...  A vertex is addressed by a pair
(branch, suffix): ``branch`` is the index of the ray vertex where the
path from the origin leaves the ray, and ``suffix`` is the word of child
labels walked off the ray from there.  The empty suffix addresses the
ray vertex itself, so every vertex has exactly one address.

Child labels: the origin has labels 0..deg-2, a ray vertex z_n (n >= 1)
has labels 0..deg-3 (its other two neighbors are z_{n-1} and z_{n+1}),
and an off-ray vertex has labels 0..deg-2 (one neighbor is its parent).

The height of a vertex is len(suffix) - branch: moving toward the
distinguished end decreases it by one, every other move increases it by
one.  All quantities are exact integers; no floats appear anywhere in
this module.  Values are immutable and operations are pure, so
everything is safe to share between threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Callable


class AddressError(ValueError):
    """Raised for addresses that do not exist in the given tree."""


class SpecError(ValueError):
    """Raised for structurally malformed tree descriptions."""


@dataclass(frozen=True)
class VertexAddress:
    """Canonical coordinates of a tree vertex: ray index plus child word."""

    branch: int
    suffix: tuple[int, ...] = ()

    def __post_init__(self):
        if self.branch < 0:
            raise AddressError(f"negative branch index: {self.branch}")
        if any(c < 0 for c in self.suffix):
            raise AddressError(f"negative child label in {self.suffix!r}")

    def __str__(self):
        return f"{self.branch};" + ".".join(str(c) for c in self.suffix)

    @classmethod
    def parse(cls, text: str) -> "VertexAddress":
        head, sep, tail = text.partition(";")
        if not sep:
            raise AddressError(f"missing ';' in vertex address {text!r}")
        try:
            branch = int(head)
            suffix = tuple(int(c) for c in tail.split(".")) if tail else ()
        except ValueError as exc:
            raise AddressError(f"unparsable vertex address {text!r}") from exc
        return cls(branch, suffix)

    def sort_key(self):
        return (self.branch + len(self.suffix), self.branch, self.suffix)


ORIGIN = VertexAddress(0, ())


def origin_dist(v: VertexAddress) -> int:
    """Graph distance from the origin: ray part plus off-ray part."""
    return v.branch + len(v.suffix)


def height(v: VertexAddress) -> int:
    """Busemann value of the distinguished end at v."""
    return len(v.suffix) - v.branch


def gamma_ward(v: VertexAddress) -> VertexAddress:
    """The unique neighbor one step closer to the distinguished end."""
    if v.suffix:
        return VertexAddress(v.branch, v.suffix[:-1])
    return VertexAddress(v.branch + 1, ())


def meet_depth(v: VertexAddress, w: VertexAddress) -> int:
    """Length of the common initial segment of the two origin paths."""
    if v.branch != w.branch:
        return min(v.branch, w.branch)
    n = 0
    for a, b in zip(v.suffix, w.suffix):
        if a != b:
            break
        n += 1
    return v.branch + n


def tree_dist(v: VertexAddress, w: VertexAddress) -> int:
    """Exact graph distance between two addresses of one tree."""
    return origin_dist(v) + origin_dist(w) - 2 * meet_depth(v, w)


def vertex_busemann(z: VertexAddress, y: VertexAddress) -> int:
    """d(z, y) - d(z, origin), the Busemann function anchored at z."""
    return tree_dist(z, y) - origin_dist(z)


def path_vertex(v: VertexAddress, depth: int) -> VertexAddress:
    """The vertex at the given depth on the origin path of v."""
    if depth <= v.branch:
        return VertexAddress(depth, ())
    return VertexAddress(v.branch, v.suffix[: depth - v.branch])


# -- degree rules ------------------------------------------------------------

@dataclass(frozen=True)
class Regular:
    degree: int

    def __post_init__(self):
        if self.degree < 2:
            raise SpecError(f"regular degree must be >= 2, got {self.degree}")


@dataclass(frozen=True)
class RayPeriodic:
    """Degrees cycle along the ray and, separately, with off-ray depth.

    deg(z_n) = ray_degrees[n % len(ray_degrees)]; an off-ray vertex whose
    suffix has length L >= 1 gets off_ray_degrees[(L - 1) % len(...)].
    """

    ray_degrees: tuple[int, ...]
    off_ray_degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ray_degrees", tuple(self.ray_degrees))
        object.__setattr__(self, "off_ray_degrees", tuple(self.off_ray_degrees))
        if not self.ray_degrees or not self.off_ray_degrees:
            raise SpecError("degree cycles must be nonempty")
        if min(self.ray_degrees + self.off_ray_degrees) < 1:
            raise SpecError("degrees must be positive")


@dataclass(frozen=True)
class ExplicitCore:
    """Explicitly listed degrees out to a radius, constant degree beyond.

    ``entries`` lists (address text, degree) for every vertex with
    origin distance <= radius; all deeper vertices get ``tail_degree``.
    """

    entries: tuple[tuple[str, int], ...]
    radius: int
    tail_degree: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))
        if self.tail_degree < 2:
            raise SpecError(f"tail degree must be >= 2, got {self.tail_degree}")
        if self.radius < 0:
            raise SpecError("core radius must be >= 0")
        for text, deg in self.entries:
            VertexAddress.parse(text)
            if deg < 1:
                raise SpecError(f"listed degree must be positive at {text!r}")

    @cached_property
    def degree_map(self) -> dict[str, int]:
        return dict(self.entries)


@dataclass(frozen=True)
class Line:
    """The two-ended path: every vertex has degree exactly 2."""


@dataclass(frozen=True)
class CustomRule:
    """Arbitrary degree callback.  Usable for evaluation and simulation,
    excluded from decision procedures and from serialization."""

    degree_fn: Callable[[VertexAddress], int]


TreeFamily = Regular | RayPeriodic | ExplicitCore | Line | CustomRule


@dataclass(frozen=True)
class Violation:
    message: str
    witness: VertexAddress | None = None

    def payload(self) -> dict:
        return {
            "message": self.message,
            "witness": None if self.witness is None else str(self.witness),
        }


@dataclass(frozen=True)
class TreeSpec:
    """A pointed tree given by a degree rule plus the minimum-degree flag."""

    family: TreeFamily
    min_degree: int = 2

    def __post_init__(self):
        if self.min_degree not in (2, 3):
            raise SpecError(f"min_degree must be 2 or 3, got {self.min_degree}")

    # convenience constructors used all over the test-suite and scripts
    @classmethod
    def regular(cls, degree: int, min_degree: int | None = None) -> "TreeSpec":
        if min_degree is None:
            min_degree = 3 if degree >= 3 else 2
        return cls(Regular(degree), min_degree)

    @classmethod
    def line(cls) -> "TreeSpec":
        return cls(Line(), 2)

    @classmethod
    def ray_periodic(cls, ray_degrees, off_ray_degrees, min_degree=2) -> "TreeSpec":
        return cls(RayPeriodic(tuple(ray_degrees), tuple(off_ray_degrees)), min_degree)

    @classmethod
    def explicit_core_of(cls, template: "TreeSpec", radius: int,
                         tail_degree: int, min_degree: int = 2) -> "TreeSpec":
        """Freeze the ball of ``template`` to the given radius as a core."""
        entries = tuple(
            (str(v), template.degree(v)) for v in template.ball(radius)
        )
        return cls(ExplicitCore(entries, radius, tail_degree), min_degree)

    # -- degree rule ---------------------------------------------------------

    def degree(self, v: VertexAddress) -> int:
        """Total neighbor count of a canonical address."""
        self.require_valid(v)
        return self._degree(v)

    def _degree(self, v: VertexAddress) -> int:
        fam = self.family
        if isinstance(fam, Regular):
            return fam.degree
        if isinstance(fam, Line):
            return 2
        if isinstance(fam, RayPeriodic):
            if v.suffix:
                return fam.off_ray_degrees[(len(v.suffix) - 1) % len(fam.off_ray_degrees)]
            return fam.ray_degrees[v.branch % len(fam.ray_degrees)]
        if isinstance(fam, ExplicitCore):
            if origin_dist(v) <= fam.radius:
                try:
                    return fam.degree_map[str(v)]
                except KeyError:
                    raise SpecError(f"core does not list in-radius address {v}") from None
            return fam.tail_degree
        return fam.degree_fn(v)

    def label_count(self, v: VertexAddress) -> int:
        """How many labeled children hang below v (0 means none)."""
        d = self._degree(v)
        if not v.suffix and v.branch > 0:
            return max(0, d - 2)
        return max(0, d - 1)

    # -- structure -----------------------------------------------------------

    def is_valid(self, v: VertexAddress) -> bool:
        cur = VertexAddress(v.branch, ())
        for letter in v.suffix:
            if letter >= self.label_count(cur):
                return False
            cur = VertexAddress(cur.branch, cur.suffix + (letter,))
        return True

    def require_valid(self, v: VertexAddress) -> None:
        if not self.is_valid(v):
            raise AddressError(f"address {v} does not exist in this tree")

    def neighbors(self, v: VertexAddress) -> list[VertexAddress]:
        """All adjacent addresses; first entry is the gamma-ward one."""
        self.require_valid(v)
        return [gamma_ward(v)] + self.up_neighbors(v)

    def up_neighbors(self, v: VertexAddress) -> list[VertexAddress]:
        """The neighbors of height(v) + 1, in deterministic order."""
        ups = []
        if not v.suffix and v.branch > 0:
            ups.append(VertexAddress(v.branch - 1, ()))
        ups.extend(
            VertexAddress(v.branch, v.suffix + (j,))
            for j in range(self.label_count(v))
        )
        return ups

    def ball(self, radius: int) -> list[VertexAddress]:
        """Every address within the given distance of the origin (BFS order)."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        seen = {ORIGIN}
        out = [ORIGIN]
        frontier = [ORIGIN]
        for _ in range(radius):
            nxt = []
            for v in frontier:
                for w in [gamma_ward(v)] + self.up_neighbors(v):
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            out.extend(nxt)
            frontier = nxt
        return out

    # -- validation ----------------------------------------------------------

    def validate(self, radius: int = 8) -> Violation | None:
        """None when every derivable degree is >= min_degree.

        Decidable families are checked exactly; a CustomRule is checked
        out to ``radius`` only.
        """
        fam = self.family
        flag = self.min_degree
        if isinstance(fam, Regular):
            if fam.degree < flag:
                return Violation(f"degree {fam.degree} < {flag}", ORIGIN)
            return None
        if isinstance(fam, Line):
            if flag > 2:
                return Violation(f"degree 2 < {flag}", ORIGIN)
            return None
        if isinstance(fam, RayPeriodic):
            for n, d in enumerate(fam.ray_degrees):
                if d < flag:
                    return Violation(f"ray degree {d} < {flag}", VertexAddress(n, ()))
            for i, d in enumerate(fam.off_ray_degrees):
                if d < flag:
                    witness = VertexAddress(0, (0,) * (i + 1))
                    return Violation(f"off-ray degree {d} < {flag}", witness)
            return None
        if isinstance(fam, ExplicitCore):
            return self._validate_core(fam, flag)
        for v in self.ball(radius):
            d = self._degree(v)
            if d < flag:
                return Violation(f"degree {d} < {flag}", v)
        return None

    def _validate_core(self, fam: ExplicitCore, flag: int) -> Violation | None:
        listed = set(fam.degree_map)
        derived: list[VertexAddress] = []
        seen = {ORIGIN}
        frontier = [ORIGIN]
        derived.append(ORIGIN)
        for _ in range(fam.radius):
            nxt = []
            for v in frontier:
                if str(v) not in fam.degree_map:
                    return Violation("core is missing a reachable address", v)
                for w in [gamma_ward(v)] + self.up_neighbors(v):
                    if origin_dist(w) <= fam.radius and w not in seen:
                        seen.add(w)
                        nxt.append(w)
            derived.extend(nxt)
            frontier = nxt
        derived_texts = {str(v) for v in derived}
        for v in derived:
            if str(v) not in listed:
                return Violation("core is missing a reachable address", v)
        extra = sorted(listed - derived_texts)
        if extra:
            return Violation("core lists an unreachable address",
                             VertexAddress.parse(extra[0]))
        for v in derived:
            d = fam.degree_map[str(v)]
            if d < flag:
                return Violation(f"degree {d} < {flag}", v)
        if fam.tail_degree < flag:
            return Violation(f"tail degree {fam.tail_degree} < {flag}",
                             VertexAddress(fam.radius + 1, ()))
        return None

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        fam = self.family
        if isinstance(fam, Regular):
            return {"family": "regular", "degree": fam.degree,
                    "min_degree": self.min_degree}
        if isinstance(fam, Line):
            return {"family": "line", "min_degree": self.min_degree}
        if isinstance(fam, RayPeriodic):
            return {"family": "ray_periodic",
                    "ray_degrees": list(fam.ray_degrees),
                    "off_ray_degrees": list(fam.off_ray_degrees),
                    "min_degree": self.min_degree}
        if isinstance(fam, ExplicitCore):
            return {"family": "explicit_core",
                    "core": {t: d for t, d in fam.entries},
                    "radius": fam.radius,
                    "tail_degree": fam.tail_degree,
                    "min_degree": self.min_degree}
        raise SpecError("custom degree rules are not serializable")

    @classmethod
    def from_json(cls, data: dict) -> "TreeSpec":
        try:
            kind = data["family"]
            min_degree = int(data.get("min_degree", 2))
            if kind == "regular":
                return cls(Regular(int(data["degree"])), min_degree)
            if kind == "line":
                return cls(Line(), min_degree)
            if kind == "ray_periodic":
                return cls(RayPeriodic(tuple(int(d) for d in data["ray_degrees"]),
                                       tuple(int(d) for d in data["off_ray_degrees"])),
                           min_degree)
            if kind == "explicit_core":
                entries = tuple(sorted((t, int(d)) for t, d in data["core"].items()))
                return cls(ExplicitCore(entries, int(data["radius"]),
                                        int(data["tail_degree"])), min_degree)
        except (KeyError, TypeError) as exc:
            raise SpecError(f"malformed tree description: {exc}") from exc
        raise SpecError(f"unknown tree family {kind!r}")

    def to_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_text(cls, text: str) -> "TreeSpec":
        return cls.from_json(json.loads(text))
