"""Point-set generators, the unit-distance search and the corpus runner."""
from __future__ import annotations

import csv
import io
import math
import random
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .geom import FLOAT, RATIONAL, ConvexPointSet, GeometryError, Point, is_convex_position
from .proximity import GeoGraph, build_udg, greedy_maximal_lgg

SEARCH_TOLERANCE = 1e-9
RECHECK_TOLERANCE = 1e-7
MAX_SEARCH_POINTS = 40
GROW_RESTARTS = 60
CSV_FIELDS = ("experiment", "name", "n", "seed", "check", "value", "bound", "pass")


class InexactWarning(UserWarning):
    """A rational point set only approximates the intended construction."""


# -- generators -----------------------------------------------------------

def gen_regular_unit_polygon(n: int, mode: str = FLOAT) -> ConvexPointSet:
    """Regular n-gon with unit sides, counterclockwise from (R, 0)."""
    if n < 3:
        raise ValueError("a polygon needs n >= 3")
    r = 0.5 / math.sin(math.pi / n)
    pts = [(r * math.cos(2 * math.pi * k / n), r * math.sin(2 * math.pi * k / n)) for k in range(n)]
    if mode == FLOAT:
        return ConvexPointSet(Point(x, y) for x, y in pts)
    if mode != RATIONAL:
        raise ValueError(f"unknown mode {mode!r}")
    if n not in (3, 4, 6):
        warnings.warn(f"rational {n}-gon is an approximation; its sides are not exactly 1", InexactWarning)
    return ConvexPointSet(Point(Fraction(x).limit_denominator(10**9), Fraction(y).limit_denominator(10**9))
                          for x, y in pts)


def _rational_unit(t: Fraction) -> tuple[Fraction, Fraction]:
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def gen_random_convex(n: int, seed: int, mode: str = RATIONAL) -> ConvexPointSet:
    """n points on a random ellipse, at sorted random angles.

    Rational mode uses the rational parametrisation of the circle, so the
    points lie exactly on the ellipse and are exactly in convex position.
    The ellipse is scaled so that a typical neighbour gap is about unit length.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    rng = random.Random(seed)
    ax = Fraction(rng.randint(100, 200), 100)
    by = Fraction(rng.randint(60, 100), 100)
    scale = Fraction(max(1, round(n / 5)), 1)
    ts: set[Fraction] = set()
    while len(ts) < n:
        theta = rng.uniform(-math.pi * 0.999, math.pi * 0.999)
        ts.add(Fraction(math.tan(theta / 2)).limit_denominator(10**4))
    rot = _rational_unit(Fraction(rng.randint(0, 100), 100))
    pts = []
    for t in sorted(ts):
        cx, sy = _rational_unit(t)
        x, y = ax * cx * scale, by * sy * scale
        pts.append((x * rot[0] - y * rot[1], x * rot[1] + y * rot[0]))
    if mode == FLOAT:
        return ConvexPointSet(Point(float(x), float(y)) for x, y in pts)
    if mode != RATIONAL:
        raise ValueError(f"unknown mode {mode!r}")
    return ConvexPointSet(Point(x, y) for x, y in pts)


# -- unit-distance search -------------------------------------------------

@dataclass(frozen=True)
class Schedule:
    iterations: int = 4000
    t_start: float = 1.5
    t_end: float = 0.05

    def temperature(self, step: int) -> float:
        if self.iterations <= 1:
            return self.t_end
        frac = step / (self.iterations - 1)
        return self.t_start * (self.t_end / self.t_start) ** frac


@dataclass
class SearchState:
    points: list[tuple[float, float]]
    count: int
    best_points: list[tuple[float, float]]
    best_count: int
    step: int = 0


@dataclass
class SearchResult:
    best: ConvexPointSet
    count: int  # at the search tolerance
    recheck_count: int  # at the looser re-verification tolerance
    history: list[int]  # best-so-far after every step
    accepted: int

    @property
    def target(self) -> int:
        return 2 * self.best.n - 7


def _unit_count(pts: Sequence[tuple[float, float]], tol: float) -> int:
    n = len(pts)
    c = 0
    for i in range(n):
        xi, yi = pts[i]
        for j in range(i + 1, n):
            dx, dy = xi - pts[j][0], yi - pts[j][1]
            if abs(dx * dx + dy * dy - 1.0) <= tol:
                c += 1
    return c


def _convex(pts: Sequence[tuple[float, float]]) -> bool:
    n = len(pts)
    for i in range(n):
        (ax, ay), (bx, by), (cx, cy) = pts[i], pts[(i + 1) % n], pts[(i + 2) % n]
        if (bx - ax) * (cy - ay) - (by - ay) * (cx - ax) <= 1e-12:
            return False
    # left turns everywhere plus one full turn of the edge angles
    total = 0.0
    for i in range(n):
        (ax, ay), (bx, by), (cx, cy) = pts[i], pts[(i + 1) % n], pts[(i + 2) % n]
        a1 = math.atan2(by - ay, bx - ax)
        a2 = math.atan2(cy - by, cx - bx)
        total += (a2 - a1) % (2 * math.pi)
    return abs(total - 2 * math.pi) < 1e-6


def _circle_hits(p, q) -> list[tuple[float, float]]:
    """Points at unit distance from both p and q."""
    dx, dy = q[0] - p[0], q[1] - p[1]
    d2 = dx * dx + dy * dy
    if d2 == 0 or d2 > 4:
        return []
    h = math.sqrt(max(0.0, 1.0 / d2 - 0.25))
    mx, my = p[0] + dx / 2, p[1] + dy / 2
    return [(mx - dy * h, my + dx * h), (mx + dy * h, my - dx * h)]


def _ray_hits(theta: float, q) -> list[float]:
    """Radii r > 0 putting r*(cos, sin)(theta) at unit distance from q."""
    ux, uy = math.cos(theta), math.sin(theta)
    b = ux * q[0] + uy * q[1]
    disc = b * b - (q[0] ** 2 + q[1] ** 2 - 1)
    if disc < 0:
        return []
    s = math.sqrt(disc)
    return [r for r in (b - s, b + s) if r > 1e-6]


def _propose(pts: list, rng: random.Random) -> tuple[int, list] | None:
    """Move one point in polar coordinates, often snapping it onto a unit circle."""
    n = len(pts)
    i = rng.randrange(n)
    j = rng.choice([x for x in range(n) if x != i])
    theta = math.atan2(pts[i][1], pts[i][0])
    r = math.hypot(*pts[i])
    kind = rng.random()
    new = list(pts)
    if kind < 0.4:
        # new angle, radius chosen to land at unit distance from j
        t2 = theta + rng.gauss(0, 0.1)
        radii = _ray_hits(t2, pts[j])
        if not radii:
            return None
        r2 = min(radii, key=lambda z: abs(z - r))
        new[i] = (r2 * math.cos(t2), r2 * math.sin(t2))
    elif kind < 0.7:
        k = rng.choice([x for x in range(n) if x not in (i, j)])
        hits = _circle_hits(pts[j], pts[k])
        if not hits:
            return None
        new[i] = min(hits, key=lambda h: (h[0] - pts[i][0]) ** 2 + (h[1] - pts[i][1]) ** 2)
    else:
        r2 = r * math.exp(rng.gauss(0, 0.05))
        t2 = theta + rng.gauss(0, 0.05)
        new[i] = (r2 * math.cos(t2), r2 * math.sin(t2))
    return i, new


def _degree(pts: Sequence[tuple[float, float]], i: int, tol: float) -> int:
    xi, yi = pts[i]
    return sum(1 for j, (x, y) in enumerate(pts) if j != i and abs((xi - x) ** 2 + (yi - y) ** 2 - 1.0) <= tol)


def optimize_unit_distances(n: int, seed: int = 0, schedule: Schedule | None = None,
                            tolerance: float = SEARCH_TOLERANCE) -> SearchResult:
    """Anneal a convex n-point configuration towards many unit pairs.

    Starts at the regular unit polygon. Each move shifts one point in polar
    coordinates, usually landing it on the unit circle around another point.
    Only convex states are ever accepted.
    """
    if not 3 <= n <= MAX_SEARCH_POINTS:
        raise ValueError(f"n must be in 3..{MAX_SEARCH_POINTS}")
    schedule = schedule or Schedule()
    rng = random.Random(seed)
    start = [p.as_float() for p in gen_regular_unit_polygon(n).points]
    c0 = _unit_count(start, tolerance)
    state = SearchState(start, c0, list(start), c0)
    history = []
    accepted = 0
    for step in range(schedule.iterations):
        state.step = step
        move = _propose(state.points, rng)
        if move is not None and _convex(move[1]):
            i, cand = move
            c = state.count - _degree(state.points, i, tolerance) + _degree(cand, i, tolerance)
            t = schedule.temperature(step)
            if c >= state.count or rng.random() < math.exp((c - state.count) / t):
                state.points, state.count = cand, c
                accepted += 1
                if c > state.best_count:
                    state.best_points, state.best_count = list(cand), c
        history.append(state.best_count)
    best = ConvexPointSet(Point(x, y) for x, y in state.best_points)
    if not is_convex_position(best.points):
        raise GeometryError("search produced a non-convex state")
    verified = len(build_udg(best, tolerance=tolerance).edges)
    if verified != state.best_count:
        raise AssertionError(f"search count {state.best_count} does not re-verify ({verified})")
    recheck = len(build_udg(best, tolerance=RECHECK_TOLERANCE).edges)
    return SearchResult(best, verified, recheck, history, accepted)


def _strictly_convex(pts: Sequence[tuple[float, float]], eps: float = 1e-9) -> bool:
    """Every point is a hull vertex with a turn of at least ``eps``."""
    ordered = sorted(pts)

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    upper: list = []
    for p in ordered:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= eps:
            lower.pop()
        lower.append(p)
    for p in reversed(ordered):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= eps:
            upper.pop()
        upper.append(p)
    return len(lower) + len(upper) - 2 == len(ordered)


def grow_unit_configuration(n: int, seed: int = 0, restarts: int = 200,
                            tolerance: float = SEARCH_TOLERANCE) -> SearchResult:
    """Build convex configurations point by point instead of annealing.

    Each new point goes, when convexity allows, where it meets the most unit
    circles around points already placed (candidates are pairwise circle
    intersections). Randomised greedy with restarts; the best is kept.
    """
    if not 3 <= n <= MAX_SEARCH_POINTS:
        raise ValueError(f"n must be in 3..{MAX_SEARCH_POINTS}")
    rng = random.Random(seed)
    best_pts, best = None, -1
    history = []
    for _ in range(restarts):
        pts = [(0.0, 0.0), (1.0, 0.0)]
        while len(pts) < n:
            cands = []
            for a in range(len(pts)):
                for b in range(a + 1, len(pts)):
                    for h in _circle_hits(pts[a], pts[b]):
                        if min((h[0] - q[0]) ** 2 + (h[1] - q[1]) ** 2 for q in pts) < 1e-6:
                            continue
                        gain = sum(1 for q in pts if abs((h[0] - q[0]) ** 2 + (h[1] - q[1]) ** 2 - 1) <= tolerance)
                        cands.append((-gain, rng.random(), h))
            cands.sort()
            placed = next((h for _, _, h in cands[:200] if rng.random() >= 0.3 and _strictly_convex(pts + [h])), None)
            if placed is None:
                for _ in range(100):
                    q = rng.choice(pts)
                    t = rng.uniform(0, 2 * math.pi)
                    h = (q[0] + math.cos(t), q[1] + math.sin(t))
                    if _strictly_convex(pts + [h]):
                        placed = h
                        break
            if placed is None:
                break
            pts.append(placed)
        if len(pts) == n:
            c = _unit_count(pts, tolerance)
            if c > best:
                best_pts, best = pts, c
        history.append(max(best, 0))
    if best_pts is None:
        raise GeometryError("no restart produced a convex configuration")
    cps = ConvexPointSet.from_unordered(Point(x, y) for x, y in best_pts)
    verified = len(build_udg(cps, tolerance=tolerance).edges)
    recheck = len(build_udg(cps, tolerance=RECHECK_TOLERANCE).edges)
    return SearchResult(cps, verified, recheck, history, restarts)


# -- suite ----------------------------------------------------------------

GENERATORS = ("regular-polygon", "random-convex", "optimized", "grown")
STEPS = ("udg", "lgg")


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    generator: str
    sizes: tuple[int, ...] = ()
    seeds: tuple[int, ...] = (0,)
    steps: tuple[str, ...] = STEPS
    csv_path: str | None = None
    bundle_dir: str | None = None
    search_iterations: int = 1500

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")
        bad = set(self.steps) - set(STEPS)
        if bad:
            raise ValueError(f"unknown steps {sorted(bad)}")

    def instances(self) -> list[tuple[int, int]]:
        seeds = (0,) if self.generator == "regular-polygon" else self.seeds
        return [(n, s) for n in self.sizes for s in seeds]


def generate(spec: ExperimentSpec, n: int, seed: int) -> ConvexPointSet:
    if spec.generator == "regular-polygon":
        return gen_regular_unit_polygon(n)
    if spec.generator == "random-convex":
        return gen_random_convex(n, seed)
    if spec.generator == "grown":
        return grow_unit_configuration(n, seed, restarts=GROW_RESTARTS).best
    return optimize_unit_distances(n, seed, Schedule(spec.search_iterations)).best


@dataclass
class InstanceResult:
    rows: list[dict] = field(default_factory=list)
    bundles: list[dict] = field(default_factory=list)
    counters: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(r["pass"] == "fail" for r in self.rows)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def run_instance(spec: ExperimentSpec, n: int, seed: int) -> InstanceResult:
    from .pipeline import check_instance

    pts = generate(spec, n, seed)
    out = InstanceResult()
    graphs: list[tuple[str, GeoGraph]] = []
    if "udg" in spec.steps:
        udg = build_udg(pts)
        if udg.edges:
            graphs.append(("udg", udg))
    if "lgg" in spec.steps:
        graphs.append(("lgg", greedy_maximal_lgg(pts, seed=None if spec.generator != "random-convex" else seed)))
    for kind, g in graphs:
        checks, bundles, counters = check_instance(g, is_udg=kind == "udg")
        for check, value, bound, status in checks:
            out.rows.append({"experiment": spec.name, "name": f"{spec.generator}/{kind}", "n": n, "seed": seed,
                             "check": check, "value": _fmt(value), "bound": _fmt(bound), "pass": status})
        out.bundles += bundles
        for k, v in counters.items():
            out.counters[(kind, k)] = out.counters.get((kind, k), 0) + v
    return out


def _run_one(args):
    return run_instance(*args)


@dataclass
class SuiteResult:
    rows: list[dict]
    bundles: list[dict]
    counters: dict
    seconds: float

    @property
    def failures(self) -> int:
        return sum(r["pass"] == "fail" for r in self.rows)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(self.rows)
        return buf.getvalue()


def run_suite(spec: ExperimentSpec, workers: int = 1) -> SuiteResult:
    """Run every (size, seed) of ``spec``; rows come back in (size, seed) order."""
    t0 = time.perf_counter()
    jobs = [(spec, n, s) for n, s in spec.instances()]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    rows, bundles, counters = [], [], {}
    for r in results:
        rows += r.rows
        bundles += r.bundles
        for k, v in r.counters.items():
            counters[k] = counters.get(k, 0) + v
    res = SuiteResult(rows, bundles, counters, time.perf_counter() - t0)
    if spec.csv_path:
        Path(spec.csv_path).write_text(res.csv_text())
    if spec.bundle_dir and bundles:
        from .io import write_bundle

        d = Path(spec.bundle_dir)
        d.mkdir(parents=True, exist_ok=True)
        for k, b in enumerate(bundles):
            write_bundle(d / f"{spec.name}-{k:04d}.json", b)
    return res
