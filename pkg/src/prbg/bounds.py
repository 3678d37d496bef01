"""Edge-count machinery for path-restricted graphs.

Separator counting, a divide-and-conquer upper-bound certificate, a
doubling construction for dense instances, and an exact small-size maximum.
Throughout, "left" means higher order.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from . import kernels
from .obg import OBG, PreconditionError, is_prbg

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "n/a"


# -- separators -----------------------------------------------------------

@dataclass(frozen=True)
class CrossingReport:
    """Both parts of the separator bound at one cut.

    The cut puts U indices >= ``su`` and V indices >= ``sv`` on the left.
    Part one counts U-left to V-right edges, part two V-left to U-right.
    """

    separator: tuple[int, int]
    part1: str
    part1_edges: int
    part1_bound: int
    part2: str
    part2_edges: int
    part2_bound: int

    @property
    def passed(self) -> bool:
        return FAIL not in (self.part1, self.part2)


def _status(premise: bool, edges: int, bound: int) -> str:
    if not premise:
        return NOT_APPLICABLE
    return PASS if edges <= bound else FAIL


def crossing_lemma_check(g: OBG, separator: tuple[int, int]) -> CrossingReport:
    su, sv = separator
    if not (0 <= su <= g.u_count and 0 <= sv <= g.v_count):
        raise ValueError(f"separator {separator} outside 0..{g.u_count} x 0..{g.v_count}")
    a = g.adjacency.astype(np.int64)
    u1, v1 = a[su:, :], a[:, sv:]
    prem1 = bool(np.all(a[su:, sv:].any(axis=1))) if su < g.u_count else True
    prem2 = bool(np.all(a[su:, sv:].any(axis=0))) if sv < g.v_count else True
    e1 = int(u1[:, :sv].sum())
    e2 = int(v1[:su, :].sum())
    b1 = (g.u_count - su) + sv
    b2 = (g.v_count - sv) + su
    return CrossingReport((su, sv), _status(prem1, e1, b1), e1, b1, _status(prem2, e2, b2), e2, b2)


@dataclass
class SweepSummary:
    checks: int = 0
    not_applicable: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: "SweepSummary") -> "SweepSummary":
        return SweepSummary(self.checks + other.checks, self.not_applicable + other.not_applicable,
                            self.failures + other.failures)


def crossing_sweep(g: OBG) -> SweepSummary:
    """Every separator at once with 2D prefix sums.

    A check counts only when its premise holds and both sides it compares
    are nonempty; empty sides are recorded as not applicable.
    """
    nu, nv = g.u_count, g.v_count
    out = SweepSummary()
    if nu == 0 or nv == 0:
        return out
    a = g.adjacency.astype(np.int64)
    # P[i, j] = sum a[i:, :j]  (U rows from i down to the end, V columns below j)
    P = np.zeros((nu + 1, nv + 1), dtype=np.int64)
    P[:nu, 1:] = np.cumsum(np.cumsum(a[::-1, :], axis=0)[::-1, :], axis=1)
    # Q[i, j] = sum a[:i, j:]
    Q = np.zeros((nu + 1, nv + 1), dtype=np.int64)
    Q[1:, :nv] = np.cumsum(np.cumsum(a[:, ::-1], axis=1)[:, ::-1], axis=0)
    # highest neighbour of each u and each v (or -1)
    idx_v = np.where(a.any(axis=1), nv - 1 - np.argmax(a[:, ::-1], axis=1), -1)
    idx_u = np.where(a.any(axis=0), nu - 1 - np.argmax(a[::-1, :], axis=0), -1)
    # part 1 premise at (su, sv): min over u >= su of idx_v[u] >= sv
    suffix_min_v = np.minimum.accumulate(idx_v[::-1])[::-1]
    suffix_min_u = np.minimum.accumulate(idx_u[::-1])[::-1]
    su = np.arange(nu + 1)[:, None]
    sv = np.arange(nv + 1)[None, :]
    prem1 = np.zeros((nu + 1, nv + 1), dtype=bool)
    prem1[:nu, :] = suffix_min_v[:, None] >= sv
    prem2 = np.zeros((nu + 1, nv + 1), dtype=bool)
    prem2[:, :nv] = suffix_min_u[None, :] >= su
    nonempty1 = (su < nu) & (sv > 0)
    nonempty2 = (sv < nv) & (su > 0)
    bound1 = (nu - su) + sv
    bound2 = (nv - sv) + su
    for prem, nonempty, edges, bound, part in (
        (prem1, nonempty1, P, bound1, 1),
        (prem2, nonempty2, Q, bound2, 2),
    ):
        live = prem & nonempty
        out.checks += int(live.sum())
        out.not_applicable += int((~live).sum())
        bad = live & (edges > bound)
        for i, j in zip(*np.nonzero(bad)):
            out.failures.append({"separator": (int(i), int(j)), "part": part,
                                 "edges": int(edges[i, j]), "bound": int(bound[i, j])})
    return out


# -- divide and conquer certificate ---------------------------------------

@dataclass
class BoundCertificate:
    total_bound: int
    actual_edges: int
    n: int
    trace: list = field(default_factory=list)

    @property
    def sound(self) -> bool:
        """Every charged separator held and the total covers the edges."""
        return self.total_bound >= self.actual_edges and all(t.get("crossing_ok", True) for t in self.trace)

    @property
    def reference(self) -> float:
        return self.n * math.log2(self.n) + 4 * self.n if self.n > 1 else 4.0 * self.n

    @property
    def within_reference(self) -> bool:
        return self.total_bound <= self.reference

    def to_dict(self) -> dict:
        d = asdict(self)
        d["reference"] = self.reference
        return d


def _dnc(g: OBG, us: list[int], vs: list[int], depth: int, trace: list) -> int:
    uset, vset = set(us), set(vs)
    nbr_v = {v: [u for u in g.nbr_v(v) if u in uset] for v in vs}
    deg_u = {u: 0 for u in us}
    for v in vs:
        for u in nbr_v[v]:
            deg_u[u] += 1
    us = [u for u in us if deg_u[u]]
    vs = [v for v in vs if nbr_v[v]]
    if not us or not vs:
        return 0
    if min(len(us), len(vs)) == 1:
        charge = len(us) * len(vs)
        trace.append({"depth": depth, "kind": "star", "u": len(us), "v": len(vs), "charge": charge})
        return charge
    n = len(us) + len(vs)
    s1_u: set[int] = set()
    scanned: list[int] = []
    terminals: list[int] = []
    for v in reversed(vs):
        new = [u for u in nbr_v[v] if u not in s1_u]
        scanned.append(v)
        s1_u.update(new)
        if len(s1_u) + len(scanned) >= n / 2:
            terminals = new
            break
    last = scanned[-1]
    v2 = [v for v in vs if v < last]
    s1_list = sorted(s1_u)
    crossing = sum(1 for u in s1_list for w in g.nbr_u(u) if w in vset and w < last)
    charge = len(s1_list) + len(v2)
    inside = [sum(1 for w in g.nbr_u(u) if w in vset and w >= last) for u in terminals]
    trace.append({
        "depth": depth, "kind": "split", "n": n, "v_cut": last, "u_cut": min(s1_list),
        "s1": len(s1_list) + len(scanned), "s2": n - len(s1_list) - len(scanned),
        "crossing_charge": charge, "crossing_edges": crossing, "crossing_ok": crossing <= charge,
        "terminals": len(terminals), "terminal_degree_ok": all(k == 1 for k in inside),
    })
    total = charge + len(terminals)
    keep_u = sorted(s1_u - set(terminals))
    total += _dnc(g, keep_u, sorted(scanned), depth + 1, trace)
    total += _dnc(g, [u for u in us if u not in s1_u], v2, depth + 1, trace)
    return total


def dnc_edge_bound(g: OBG, check: bool = True) -> BoundCertificate:
    """Upper bound on the edges by recursive halving.

    Scan V from the left, pulling each vertex and its U neighbours into the
    first part until it holds half the vertices. Edges leaving the first
    part are charged by the separator bound, the pendant vertices of the
    last scan step are charged one each and dropped, and both parts recurse.
    Charges come from the formula, never from counting the edges they cover.
    """
    if check and not is_prbg(g):
        raise PreconditionError("certificate needs a path-restricted graph")
    trace: list = []
    total = _dnc(g, list(range(g.u_count)), list(range(g.v_count)), 0, trace)
    return BoundCertificate(total, len(g.edges), g.n, trace)


# -- dense construction ---------------------------------------------------

MAX_GENERATOR_K = 12


def gen_lower_bound_prbg(k: int) -> OBG:
    """A path-restricted graph on 2**k vertices per side by doubling.

    Each step puts one copy on (low U, high V) and one on (high U, low V),
    which no increasing path can join, and adds the matching u_i -- v_i on
    the low halves. The count obeys e(2m) = 2 e(m) + m.
    """
    if not 0 <= k <= MAX_GENERATOR_K:
        raise ValueError(f"k must be in 0..{MAX_GENERATOR_K}")
    edges = np.array([[0, 0]], dtype=np.int64)
    m = 1
    for _ in range(k):
        low = np.arange(m)
        edges = np.concatenate([
            edges + [0, m],
            edges + [m, 0],
            np.stack([low, low], axis=1),
        ])
        m *= 2
    return OBG(m, m, frozenset(map(tuple, edges.tolist())))


def generator_edge_count(k: int) -> int:
    m = 2 ** k
    return m * k // 2 + m


# -- exact maximum --------------------------------------------------------

EXACT_LIMIT = 16
FIXTURE = "exact_max.json"


class ExactTable:
    """Exact maxima z(a, b) for all a x b up to a size, built smallest first.

    Each search bounds unplaced rows by the already known smaller maxima,
    and z(a, b) = z(b, a) because swapping the sides preserves the property.
    """

    def __init__(self):
        self.values: dict[tuple[int, int], int] = {}
        self.witness: dict[tuple[int, int], list[int]] = {}

    def get(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.values[(max(a, b), min(a, b))]

    def solve(self, nu: int, nv: int) -> int:
        for s in range(2, nu + nv + 1):
            for a in range(max(nu, nv), 0, -1):
                b = s - a
                if 1 <= b <= a and b <= min(nu, nv) and (a, b) not in self.values:
                    self._solve_one(a, b)
        return self.get(nu, nv)

    def _solve_one(self, a: int, b: int) -> None:
        # rows are the larger side; every smaller size is already known
        table = [[self.get(k, c) for c in range(b + 1)] for k in range(a)]
        # one size smaller plus an isolated vertex is admissible, so the
        # search only has to find a graph beating that count minus one
        floor = max(self.get(a - 1, b), self.get(a, b - 1))
        best, rows = kernels.max_prbg_search(a, b, table, max(0, floor - 1))
        if rows is None:
            raise AssertionError(f"exact search found nothing on {a}x{b} above the known floor")
        self.values[(a, b)] = best
        self.witness[(a, b)] = [(u, v) for u in range(a) for v in range(b) if rows[u] >> v & 1]

    def graph(self, nu: int, nv: int) -> OBG:
        if nu >= nv:
            return OBG(nu, nv, frozenset(self.witness[(nu, nv)]))
        return OBG(nu, nv, frozenset((u, v) for v, u in self.witness[(nv, nu)]))


_TABLE = ExactTable()


def max_prbg_edges_exact(nu: int, nv: int) -> tuple[int, OBG]:
    """Largest edge count of a path-restricted graph on nu x nv, with a witness."""
    if nu < 0 or nv < 0:
        raise ValueError("sizes must be nonnegative")
    if nu + nv > EXACT_LIMIT:
        raise ValueError(f"exact search is limited to nu + nv <= {EXACT_LIMIT}")
    if nu == 0 or nv == 0:
        return 0, OBG(nu, nv)
    best = _TABLE.solve(nu, nv)
    g = _TABLE.graph(nu, nv)
    assert len(g.edges) == best and is_prbg(g), "exact search witness failed verification"
    return best, g


@dataclass(frozen=True)
class ExactFixture:
    values: dict
    witnesses: dict

    def value(self, nu: int, nv: int) -> int:
        return self.values[(max(nu, nv), min(nu, nv))]

    def graph(self, nu: int, nv: int) -> OBG:
        if nu >= nv:
            return OBG(nu, nv, frozenset(tuple(e) for e in self.witnesses[(nu, nv)]))
        return OBG(nu, nv, frozenset((u, v) for v, u in self.witnesses[(nv, nu)]))


@lru_cache(maxsize=1)
def load_exact_fixture() -> ExactFixture:
    """Frozen exact maxima with witnesses, computed once by the search above."""
    text = resources.files("prbg").joinpath("fixtures", FIXTURE).read_text()
    raw = json.loads(text)
    values = {}
    witnesses = {}
    for item in raw["entries"]:
        key = (item["nu"], item["nv"])
        values[key] = item["max_edges"]
        witnesses[key] = [(u - 1, v - 1) for u, v in item["witness"]]
    return ExactFixture(values, witnesses)


def exact_fixture_payload(size: int) -> dict:
    """Run the exact search for every a >= b up to ``size`` and package the result."""
    table = ExactTable()
    table.solve(size, size)
    entries = []
    for (a, b) in sorted(table.values):
        g = table.graph(a, b)
        if len(g.edges) != table.values[(a, b)] or not is_prbg(g):
            raise AssertionError(f"witness for {a}x{b} failed verification")
        entries.append({"nu": a, "nv": b, "max_edges": table.values[(a, b)],
                        "witness": [[u + 1, v + 1] for u, v in sorted(g.edges)]})
    return {"size": size, "entries": entries}
