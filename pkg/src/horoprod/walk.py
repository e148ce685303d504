"""Nearest-neighbor biased random walks on the product graph.

Each step climbs with probability ``p_up`` (uniform over the first
coordinate's upward neighbors, the second coordinate forced toward its
end) and otherwise descends symmetrically.  Per step the walker records
its distance from the base point (closed form, never breadth-first),
its height, and the Busemann value of each configured probe end.

Walks instantiate integrable ergodic increments over a Bernoulli
source, which makes the law-of-large-numbers drift identities testable:
the escape speed equals the distance slope, the height slope matches it
in absolute value, probes on ends away from the escape direction climb
at the speed, and the height function of the escape side falls at the
speed.  ``drift_report`` checks exactly that, and flags the unbiased
zero-speed regime instead of asserting anything there.

Reproducibility: trajectory i draws from its own Mersenne Twister
seeded with (seed << 32) ^ (i * 0x9E3779B1), recorded in the summary as
the rng identifier.  Identical configs give bit-identical results;
trajectories are independent and merged in index order.

Slopes are exact rationals: integer least squares over the second half
of each trajectory (the first half is discarded as burn-in), averaged
across trajectories with the spread reported as a standard error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Sequence

import numpy as np

from .tree import Line, Regular, TreeSpec, VertexAddress, gamma_ward
from .rays import GammaEnd, Ray, parse_ray, require_valid_ray
from .product import HoroProduct, ProductVertex

RNG_ID = "mt19937/per-trajectory seed (seed<<32)^(i*0x9E3779B1)"


@dataclass(frozen=True)
class WalkConfig:
    product: HoroProduct
    p_up: Fraction
    steps: int
    seed: int
    trajectories: int
    probes: tuple[tuple[int, Ray], ...] = ()
    record_stride: int = 1  # 0 keeps summaries only
    max_total_steps: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "p_up", Fraction(self.p_up))
        object.__setattr__(self, "probes", tuple(self.probes))
        if not 0 <= self.p_up <= 1:
            raise ValueError("p_up must lie in [0, 1]")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if self.trajectories < 1:
            raise ValueError("trajectories must be >= 1")
        if self.record_stride < 0:
            raise ValueError("record_stride must be >= 0")
        for tree, ray in self.probes:
            if tree not in (1, 2):
                raise ValueError("probe tree must be 1 or 2")
            spec = self.product.tree1 if tree == 1 else self.product.tree2
            require_valid_ray(spec, ray)

    def to_json(self) -> dict:
        return {
            "spec": {"tree1": self.product.tree1.to_json(),
                     "tree2": self.product.tree2.to_json()},
            "p_up": str(self.p_up),
            "steps": self.steps,
            "seed": self.seed,
            "trajectories": self.trajectories,
            "probes": [{"tree": t, "ray": str(r)} for t, r in self.probes],
            "record_stride": self.record_stride,
            "max_total_steps": self.max_total_steps,
        }

    @classmethod
    def from_json(cls, data: dict) -> "WalkConfig":
        product = HoroProduct(TreeSpec.from_json(data["spec"]["tree1"]),
                              TreeSpec.from_json(data["spec"]["tree2"]))
        probes = tuple((int(p["tree"]), parse_ray(p["ray"]))
                       for p in data.get("probes", ()))
        return cls(product, Fraction(data["p_up"]), int(data["steps"]),
                   int(data["seed"]), int(data["trajectories"]), probes,
                   int(data.get("record_stride", 1)),
                   data.get("max_total_steps"))


@dataclass(frozen=True)
class TrajectoryStats:
    index: int
    steps: int
    record_stride: int
    dist: np.ndarray | None     # recorded every stride steps, index 0 first
    height: np.ndarray | None
    probe_values: tuple[np.ndarray, ...]
    dist_slope: Fraction | None         # None below 2 steps
    height_slope: Fraction | None
    probe_slopes: tuple[Fraction | None, ...]
    final_dist: int
    final_height: int


@dataclass(frozen=True)
class WalkResult:
    config: WalkConfig
    trajectories: tuple[TrajectoryStats, ...]
    partial: bool


def _trajectory_seed(seed: int, index: int) -> int:
    return (seed << 32) ^ (index * 0x9E3779B1)


def _label_counts(spec: TreeSpec):
    """(at origin, at ray vertex, at suffix vertex) label counts, or
    None when they depend on more than the position type."""
    fam = spec.family
    if isinstance(fam, Regular):
        return (fam.degree - 1, fam.degree - 2, fam.degree - 1)
    if isinstance(fam, Line):
        return (1, 0, 1)
    return None


def _choose(rng: Random, count: int) -> int:
    # shared drawing discipline so simulate() runs replay through step()
    if count == 1:
        return 0
    if count == 2:
        return rng.getrandbits(1)
    return rng.randrange(count)


def step(product: HoroProduct, v: ProductVertex, rng: Random,
         p_up: float) -> ProductVertex:
    """One walk step; deterministic in the rng state and history."""
    if rng.random() < p_up:
        ups = product.tree1.up_neighbors(v.x1)
        return ProductVertex(ups[_choose(rng, len(ups))], gamma_ward(v.x2))
    ups = product.tree2.up_neighbors(v.x2)
    return ProductVertex(gamma_ward(v.x1), ups[_choose(rng, len(ups))])


def _compile_probe(product: HoroProduct, tree: int, ray: Ray):
    """(coordinate index, gamma flag, branch, letter function)."""
    if isinstance(ray, GammaEnd):
        return (tree, True, 0, None)
    return (tree, False, ray.branch, ray.letter)


def _run_trajectory(config: WalkConfig, index: int,
                    budget: int | None) -> tuple[TrajectoryStats, int]:
    rng = Random(_trajectory_seed(config.seed, index))
    p = float(config.p_up)
    steps = config.steps if budget is None else min(config.steps, budget)
    stride = config.record_stride
    fast1 = _label_counts(config.product.tree1)
    fast2 = _label_counts(config.product.tree2)
    slow1 = config.product.tree1.label_count
    slow2 = config.product.tree2.label_count
    probes = tuple(_compile_probe(config.product, t, r)
                   for t, r in config.probes)

    m1 = 0
    s1: list[int] = []
    m2 = 0
    s2: list[int] = []
    dists = [0]
    heights = [0]
    probe_series: list[list[int]] = [[0] for _ in probes]
    probe_slots = [(series.append,) + spec
                   for series, spec in zip(probe_series, probes)]

    rand = rng.random
    getrandbits = rng.getrandbits
    randrange = rng.randrange
    for _ in range(steps):
        if rand() < p:
            # first coordinate climbs, second slides toward its end
            if s1:
                cnt = fast1[2] if fast1 else slow1(VertexAddress(m1, tuple(s1)))
                s1.append(0 if cnt == 1 else
                          getrandbits(1) if cnt == 2 else randrange(cnt))
            else:
                if fast1:
                    cnt = fast1[0] if m1 == 0 else fast1[1] + 1
                else:
                    cnt = slow1(VertexAddress(m1, ())) + (1 if m1 else 0)
                c = (0 if cnt == 1 else
                     getrandbits(1) if cnt == 2 else randrange(cnt))
                if m1:
                    if c == 0:
                        m1 -= 1
                    else:
                        s1.append(c - 1)
                else:
                    s1.append(c)
            if s2:
                s2.pop()
            else:
                m2 += 1
        else:
            if s2:
                cnt = fast2[2] if fast2 else slow2(VertexAddress(m2, tuple(s2)))
                s2.append(0 if cnt == 1 else
                          getrandbits(1) if cnt == 2 else randrange(cnt))
            else:
                if fast2:
                    cnt = fast2[0] if m2 == 0 else fast2[1] + 1
                else:
                    cnt = slow2(VertexAddress(m2, ())) + (1 if m2 else 0)
                c = (0 if cnt == 1 else
                     getrandbits(1) if cnt == 2 else randrange(cnt))
                if m2:
                    if c == 0:
                        m2 -= 1
                    else:
                        s2.append(c - 1)
                else:
                    s2.append(c)
            if s1:
                s1.pop()
            else:
                m1 += 1
        h = len(s1) - m1
        dists.append(m1 + len(s1) + m2 + len(s2) - (h if h >= 0 else -h))
        heights.append(h)
        for append, which, is_gamma, rb, letter in probe_slots:
            if which == 1:
                m, s = m1, s1
            else:
                m, s = m2, s2
            if is_gamma:
                append(len(s) - m)
                continue
            if m != rb:
                meet = m if m < rb else rb
            else:
                i = 0
                for letter_val in s:
                    if letter_val != letter(i):
                        break
                    i += 1
                meet = m + i
            append(m + len(s) - 2 * meet)

    dist_arr = np.array(dists, dtype=np.int64)
    height_arr = np.array(heights, dtype=np.int64)
    probe_arrs = tuple(np.array(se, dtype=np.int64) for se in probe_series)
    stats = TrajectoryStats(
        index=index, steps=steps, record_stride=stride,
        dist=dist_arr[::stride] if stride else None,
        height=height_arr[::stride] if stride else None,
        probe_values=tuple(a[::stride] for a in probe_arrs) if stride else (),
        dist_slope=_half_slope(dist_arr),
        height_slope=_half_slope(height_arr),
        probe_slopes=tuple(_half_slope(a) for a in probe_arrs),
        final_dist=int(dist_arr[-1]), final_height=int(height_arr[-1]))
    return stats, steps


def _half_slope(values: np.ndarray) -> Fraction | None:
    """Exact least-squares slope over the second half of the series.

    All sums are integers (int64 is ample for 1e5-step runs), so the
    returned Fraction is the exact fitted slope.  None below 2 steps.
    """
    n_total = len(values) - 1
    if n_total < 2:
        return None
    start = n_total // 2
    ys = values[start:]
    count = len(ys)
    idx = np.arange(start, n_total + 1, dtype=np.int64)
    sx = int(idx.sum())
    sxx = int((idx * idx).sum())
    sy = int(ys.sum())
    sxy = int((idx * ys).sum())
    return Fraction(count * sxy - sx * sy, count * sxx - sx * sx)


def simulate(config: WalkConfig) -> WalkResult:
    """Run all trajectories; deterministic in the config.

    A ``max_total_steps`` budget truncates remaining trajectories and
    marks the result partial instead of discarding finished work.
    """
    out = []
    budget = config.max_total_steps
    partial = False
    for i in range(config.trajectories):
        if budget is not None and budget <= 0:
            partial = True
            break
        stats, used = _run_trajectory(config, i, budget)
        if stats.steps < config.steps:
            partial = True
        if budget is not None:
            budget -= used
        out.append(stats)
    return WalkResult(config, tuple(out), partial)


def _mean_se(values: Sequence[Fraction]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    if n == 1:
        return float(mean), 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return float(mean), float(var ** 0.5) / n ** 0.5


@dataclass(frozen=True)
class SpeedEstimate:
    mean: float
    stderr: float
    per_trajectory: tuple[Fraction, ...]

    @property
    def exact_mean(self) -> Fraction:
        return sum(self.per_trajectory) / len(self.per_trajectory)


def estimate_speed(result: WalkResult) -> SpeedEstimate:
    """Distance slope against step index, averaged over trajectories."""
    slopes = tuple(t.dist_slope for t in result.trajectories)
    if not slopes:
        raise ValueError("no trajectories")
    if any(s is None for s in slopes):
        raise ValueError("speed estimation needs at least 2 steps")
    if all(t.final_dist == 0 and t.dist_slope == 0 for t in result.trajectories):
        raise ValueError("degenerate all-zero trajectories")
    mean, se = _mean_se(slopes)
    return SpeedEstimate(mean, se, slopes)


def drift_report(result: WalkResult, tolerance: float = 0.05,
                 zero_speed_threshold: float = 0.05) -> dict:
    """Law-of-large-numbers drift checks on a finished simulation.

    In the biased regime: |height slope| must match the speed, probes
    away from the escape direction must climb at the speed, and the
    escape side's distinguished-end probe must fall at the speed.  The
    zero-speed regime is only flagged, never asserted against.
    """
    config = result.config
    speed = estimate_speed(result)
    height_mean, height_se = _mean_se(
        tuple(t.height_slope for t in result.trajectories))
    probe_stats = []
    for j, (tree, ray) in enumerate(config.probes):
        mean, se = _mean_se(tuple(t.probe_slopes[j] for t in result.trajectories))
        probe_stats.append({"tree": tree, "ray": str(ray),
                            "slope": mean, "stderr": se})
    report = {
        "rng": RNG_ID,
        "config": config.to_json(),
        "partial": result.partial,
        "speed": {"mean": speed.mean, "stderr": speed.stderr},
        "height_slope": {"mean": height_mean, "stderr": height_se},
        "probes": probe_stats,
        "exact": {"speed_is_one": speed.exact_mean == 1,
                  "height_slope_is_one": all(
                      t.height_slope == 1 for t in result.trajectories),
                  "height_slope_is_minus_one": all(
                      t.height_slope == -1 for t in result.trajectories)},
    }
    if abs(speed.mean) <= zero_speed_threshold:
        report["regime"] = "zero_speed"
        report["checks"] = {"zero_speed_flagged": True}
        report["ok"] = True
        return report
    report["regime"] = "biased"
    sign = 1 if height_mean > 0 else -1
    checks = {
        "speed_positive": speed.mean > 0,
        "height_slope_matches_speed":
            abs(height_mean - sign * speed.mean) <= tolerance,
    }
    escape = (2, "gamma") if sign > 0 else (1, "gamma")
    probe_checks = []
    for entry in probe_stats:
        is_escape_side = (entry["tree"], entry["ray"]) == escape
        expected = -speed.mean if is_escape_side else speed.mean
        probe_checks.append({
            "tree": entry["tree"], "ray": entry["ray"],
            "escape_side": is_escape_side,
            "expected": expected,
            "within_tolerance": abs(entry["slope"] - expected) <= tolerance,
        })
    checks["probes_within_tolerance"] = all(p["within_tolerance"]
                                            for p in probe_checks)
    report["sign"] = sign
    report["probe_checks"] = probe_checks
    report["checks"] = checks
    report["ok"] = all(checks.values())
    return report


def write_trace_csv(path, stats: TrajectoryStats, probe_count: int) -> None:
    """One trace as CSV: n,dist,height,probe_0,...  (recorded stride)."""
    if stats.record_stride == 0:
        raise ValueError("trajectory was run without records")
    header = "n,dist,height" + "".join(f",probe_{j}" for j in range(probe_count))
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for k in range(len(stats.dist)):
            n = k * stats.record_stride
            row = [str(n), str(int(stats.dist[k])), str(int(stats.height[k]))]
            row.extend(str(int(p[k])) for p in stats.probe_values)
            fh.write(",".join(row) + "\n")
