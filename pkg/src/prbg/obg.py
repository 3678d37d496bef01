"""Ordered bipartite graphs, forward paths and the path-restricted property.

Indices are 0-based internally; the JSON form is 1-based. A forward path is
always handled in its increasing orientation: a decreasing forward path is
the same vertex sequence read backwards.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from . import kernels

LEFTWARD = "leftward"  # towards higher order
RIGHTWARD = "rightward"  # towards lower order
DIRECTIONS = (LEFTWARD, RIGHTWARD)

BRUTE_FORCE_LIMIT = 40


class OBGError(ValueError):
    pass


class PreconditionError(OBGError):
    """A lemma check was asked for on a graph that is not path restricted."""


class Vertex(NamedTuple):
    side: str  # "u" or "v"
    index: int

    def __str__(self):
        return f"{self.side}{self.index + 1}"

    @property
    def code(self) -> tuple[int, int]:
        return (0 if self.side == "u" else 1, self.index)


def U(i: int) -> Vertex:
    return Vertex("u", i)


def V(j: int) -> Vertex:
    return Vertex("v", j)


def _from_code(c) -> Vertex:
    return Vertex("u" if c[0] == 0 else "v", int(c[1]))


def _edge_of(x: Vertex, y: Vertex) -> tuple[int, int]:
    return (x.index, y.index) if x.side == "u" else (y.index, x.index)


@dataclass(frozen=True)
class OrderedBipartiteGraph:
    u_count: int
    v_count: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.u_count < 0 or self.v_count < 0:
            raise OBGError("side counts must be nonnegative")
        clean = set()
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < self.u_count and 0 <= v < self.v_count):
                raise OBGError(f"edge {(u, v)} out of range for {self.u_count}x{self.v_count}")
            if (u, v) in clean:
                raise OBGError(f"duplicate edge {(u, v)}")
            clean.add((u, v))
        object.__setattr__(self, "edges", frozenset(clean))

    @classmethod
    def from_adjacency(cls, adj) -> "OrderedBipartiteGraph":
        a = np.asarray(adj)
        us, vs = np.nonzero(a)
        return cls(a.shape[0], a.shape[1], frozenset(zip(us.tolist(), vs.tolist())))

    @property
    def n(self) -> int:
        return self.u_count + self.v_count

    def __len__(self):
        return len(self.edges)

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.u_count, self.v_count), dtype=np.uint8)
        for u, v in self.edges:
            a[u, v] = 1
        return a

    @cached_property
    def _nbrs(self) -> tuple[list[list[int]], list[list[int]]]:
        nu: list[list[int]] = [[] for _ in range(self.u_count)]
        nv: list[list[int]] = [[] for _ in range(self.v_count)]
        for u, v in sorted(self.edges):
            nu[u].append(v)
            nv[v].append(u)
        for lst in nv:
            lst.sort()
        return nu, nv

    def neighbors(self, x: Vertex) -> list[Vertex]:
        if x.side == "u":
            return [V(v) for v in self._nbrs[0][x.index]]
        return [U(u) for u in self._nbrs[1][x.index]]

    def nbr_u(self, u: int) -> list[int]:
        return self._nbrs[0][u]

    def nbr_v(self, v: int) -> list[int]:
        return self._nbrs[1][v]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def vertices(self) -> list[Vertex]:
        return [U(i) for i in range(self.u_count)] + [V(j) for j in range(self.v_count)]

    def reversed(self) -> "OrderedBipartiteGraph":
        """Both orders flipped."""
        nu, nv = self.u_count, self.v_count
        return OrderedBipartiteGraph(nu, nv, frozenset((nu - 1 - u, nv - 1 - v) for u, v in self.edges))

    def flip_vertex(self, x: Vertex) -> Vertex:
        return Vertex(x.side, (self.u_count if x.side == "u" else self.v_count) - 1 - x.index)

    def transposed(self) -> "OrderedBipartiteGraph":
        return OrderedBipartiteGraph(self.v_count, self.u_count, frozenset((v, u) for u, v in self.edges))

    def with_edges(self, edges: Iterable[Sequence[int]]) -> "OrderedBipartiteGraph":
        return OrderedBipartiteGraph(self.u_count, self.v_count, frozenset(tuple(e) for e in edges))

    def without(self, removed: Iterable[tuple[int, int]]) -> "OrderedBipartiteGraph":
        return OrderedBipartiteGraph(self.u_count, self.v_count, self.edges - set(removed))

    def induced(self, us: Iterable[int], vs: Iterable[int]):
        """Subgraph on the given vertices, relabelled in order.

        Returns the graph and the two lists mapping new to old indices.
        """
        us = sorted(set(us))
        vs = sorted(set(vs))
        ru = {u: i for i, u in enumerate(us)}
        rv = {v: j for j, v in enumerate(vs)}
        edges = frozenset((ru[u], rv[v]) for u, v in self.edges if u in ru and v in rv)
        return OrderedBipartiteGraph(len(us), len(vs), edges), us, vs


OBG = OrderedBipartiteGraph


class PathRange(NamedTuple):
    u_lo: int
    u_hi: int
    v_lo: int
    v_hi: int


def _check_alternating(seq: Sequence[Vertex]) -> None:
    if len(seq) < 2:
        raise OBGError("a path needs at least two vertices")
    for x, y in zip(seq, seq[1:]):
        if x.side == y.side:
            raise OBGError(f"path does not alternate sides at {x}, {y}")


def _strictly(seq: list[int], increasing: bool) -> bool:
    if increasing:
        return all(a < b for a, b in zip(seq, seq[1:]))
    return all(a > b for a, b in zip(seq, seq[1:]))


def is_forward_path(g: OBG, seq: Sequence[Vertex]) -> bool:
    seq = [Vertex(*x) for x in seq]
    _check_alternating(seq)
    if any(not g.has_edge(*_edge_of(x, y)) for x, y in zip(seq, seq[1:])):
        return False
    us = [x.index for x in seq if x.side == "u"]
    vs = [x.index for x in seq if x.side == "v"]
    return any(_strictly(us, inc) and _strictly(vs, inc) for inc in (True, False))


def increasing(seq: Sequence[Vertex]) -> tuple[Vertex, ...]:
    """The increasing orientation of a forward path."""
    seq = tuple(Vertex(*x) for x in seq)
    first_u = [x.index for x in seq if x.side == "u"]
    first_v = [x.index for x in seq if x.side == "v"]
    if (len(first_u) > 1 and first_u[0] > first_u[-1]) or (len(first_v) > 1 and first_v[0] > first_v[-1]):
        return seq[::-1]
    return seq


def path_range(seq: Sequence[Vertex]) -> PathRange:
    us = [x.index for x in seq if x.side == "u"]
    vs = [x.index for x in seq if x.side == "v"]
    return PathRange(min(us), max(us), min(vs), max(vs))


def back_edges(g: OBG, path: Sequence[Vertex]) -> list[tuple[int, int]]:
    """Back edges of a forward path, as (u, v) index pairs."""
    if not is_forward_path(g, path):
        raise OBGError("not a forward path of this graph")
    inc = increasing(path)
    return kernels.path_back_edges(g.adjacency.tolist(), [x.code for x in inc])


class PRBGResult(NamedTuple):
    ok: bool
    path: tuple[Vertex, ...] | None = None
    back_edge: tuple[int, int] | None = None

    def __bool__(self):
        return self.ok


def _continue_to(g: OBG, prefix: list[Vertex], need_side: str, need: int) -> list[Vertex]:
    """Shortest increasing extension of ``prefix`` reaching ``need`` on a side."""
    def done(x: Vertex) -> bool:
        return any(y.side == need_side and y.index >= need for y in [x])

    if any(done(x) for x in prefix):
        return list(prefix)
    last_u = max((x.index for x in prefix if x.side == "u"), default=-1)
    last_v = max((x.index for x in prefix if x.side == "v"), default=-1)
    start = (prefix[-1], last_u, last_v)
    parent = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        x, lu, lv = state
        for y in g.neighbors(x):
            if y.side == "u" and y.index <= lu or y.side == "v" and y.index <= lv:
                continue
            nxt = (y, y.index if y.side == "u" else lu, y.index if y.side == "v" else lv)
            if nxt in parent:
                continue
            parent[nxt] = state
            if done(y):
                tail = []
                s = nxt
                while s != start:
                    tail.append(s[0])
                    s = parent[s]
                return list(prefix) + tail[::-1]
            queue.append(nxt)
    raise AssertionError("reachability table promised an extension that does not exist")


def is_prbg(g: OBG, engine: str = "fast") -> PRBGResult:
    """Check the path-restricted property.

    ``engine="brute"`` enumerates every forward path (size-guarded) and is
    the oracle for ``engine="fast"``, which uses reachability tables.
    """
    if g.u_count == 0 or g.v_count == 0 or not g.edges:
        return PRBGResult(True)
    if engine == "brute":
        if g.n > BRUTE_FORCE_LIMIT:
            raise OBGError(f"brute-force engine is limited to {BRUTE_FORCE_LIMIT} vertices, got {g.n}")
        hit = kernels.brute_violation(g.adjacency)
        if hit is None:
            return PRBGResult(True)
        path, edge = hit
        return PRBGResult(False, tuple(_from_code(c) for c in path), tuple(edge))
    if engine != "fast":
        raise ValueError(f"unknown engine {engine!r}")
    hit = kernels.fast_violation(g.adjacency)
    if hit is None:
        return PRBGResult(True)
    prefix, edge, need_side, need = hit
    path = _continue_to(g, [_from_code(c) for c in prefix], "u" if need_side == 0 else "v", need)
    return PRBGResult(False, tuple(path), tuple(edge))


# -- forward reachability -------------------------------------------------

@dataclass
class Reach:
    root: Vertex
    vertices: set = field(default_factory=set)
    edges: set = field(default_factory=set)
    path_count: dict = field(default_factory=dict)  # vertex -> number of paths, capped at 2


def _reach_leftward(g: OBG, root: Vertex, exclude: Vertex | None = None) -> Reach:
    """Union of all increasing forward paths that start at ``root``."""
    out = Reach(root, {root}, set(), {root: 1})
    start = (root, -1)
    counts = {start: 1}
    # states advance strictly in (vertex index + previous index)
    frontier = [start]
    seen = {start}
    order = []
    while frontier:
        nxt = []
        for st in frontier:
            order.append(st)
            x, prev = st
            for y in g.neighbors(x):
                if y.index <= prev or y == exclude:
                    continue
                s2 = (y, x.index)
                out.edges.add(_edge_of(x, y))
                out.vertices.add(y)
                if s2 not in seen:
                    seen.add(s2)
                    nxt.append(s2)
        frontier = nxt
    order.sort(key=lambda s: s[0].index + s[1])
    for st in order:
        c = counts.get(st, 0)
        if not c:
            continue
        x, prev = st
        for y in g.neighbors(x):
            if y.index <= prev or y == exclude:
                continue
            s2 = (y, x.index)
            counts[s2] = min(2, counts.get(s2, 0) + c)
    for (x, _), c in counts.items():
        if x != root:
            out.path_count[x] = min(2, out.path_count.get(x, 0) + c)
    return out


def forward_reach(g: OBG, root: Vertex, direction: str = LEFTWARD, exclude: Vertex | None = None) -> Reach:
    if direction == LEFTWARD:
        return _reach_leftward(g, root, exclude)
    if direction != RIGHTWARD:
        raise ValueError(f"unknown direction {direction!r}")
    r = g.reversed()
    res = _reach_leftward(r, r.flip_vertex(root), None if exclude is None else r.flip_vertex(exclude))
    nu, nv = g.u_count, g.v_count
    return Reach(
        root,
        {r.flip_vertex(x) for x in res.vertices},
        {(nu - 1 - u, nv - 1 - v) for u, v in res.edges},
        {r.flip_vertex(x): c for x, c in res.path_count.items()},
    )


class TreeViolation(OBGError):
    """The union of forward paths from a vertex is not a tree."""

    def __init__(self, root: Vertex, direction: str, vertices, edges, meeting: Vertex | None):
        self.root = root
        self.direction = direction
        self.vertices = vertices
        self.edges = edges
        self.meeting = meeting
        super().__init__(
            f"forward paths from {root} ({direction}) meet again at {meeting}: "
            f"{len(edges)} edges on {len(vertices)} vertices"
        )


@dataclass(frozen=True)
class MonotoneTree:
    root: Vertex
    direction: str
    vertices: frozenset
    edges: frozenset
    parent: dict

    def children(self, x: Vertex) -> list[Vertex]:
        return sorted((c for c, p in self.parent.items() if p == x), key=lambda c: (c.side, c.index))

    def leaves(self) -> list[Vertex]:
        inner = set(self.parent.values())
        return sorted((x for x in self.vertices if x not in inner), key=lambda c: (c.side, c.index))

    def path_to(self, x: Vertex) -> list[Vertex]:
        out = [x]
        while out[-1] != self.root:
            out.append(self.parent[out[-1]])
        return out[::-1]


def monotone_tree(g: OBG, root: Vertex, direction: str = LEFTWARD) -> MonotoneTree:
    """The union of all forward paths from ``root`` in one direction.

    Raises TreeViolation if two of those paths meet again.
    """
    root = Vertex(*root)
    reach = forward_reach(g, root, direction)
    meeting = next((x for x, c in sorted(reach.path_count.items()) if c > 1), None)
    if meeting is not None or len(reach.edges) != len(reach.vertices) - 1:
        raise TreeViolation(root, direction, reach.vertices, reach.edges, meeting)
    parent: dict[Vertex, Vertex] = {}
    adj: dict[Vertex, list[Vertex]] = {}
    for u, v in reach.edges:
        adj.setdefault(U(u), []).append(V(v))
        adj.setdefault(V(v), []).append(U(u))
    queue = deque([root])
    seen = {root}
    while queue:
        x = queue.popleft()
        for y in sorted(adj.get(x, [])):
            if y not in seen:
                seen.add(y)
                parent[y] = x
                queue.append(y)
    return MonotoneTree(root, direction, frozenset(reach.vertices), frozenset(reach.edges), parent)


def iter_forward_paths(g: OBG, root: Vertex, direction: str = LEFTWARD, maximal: bool = True) -> Iterator[tuple[Vertex, ...]]:
    """Forward paths starting at ``root`` in one direction (exponential)."""
    step = 1 if direction == LEFTWARD else -1

    def ok(y: Vertex, lu: int | None, lv: int | None) -> bool:
        last = lu if y.side == "u" else lv
        return last is None or (y.index - last) * step > 0

    def rec(path, lu, lv):
        nxt = [y for y in g.neighbors(path[-1]) if ok(y, lu, lv)]
        if len(path) > 1 and (not maximal or not nxt):
            yield tuple(path)
        for y in nxt:
            path.append(y)
            yield from rec(path, y.index if y.side == "u" else lu, y.index if y.side == "v" else lv)
            path.pop()

    root = Vertex(*root)
    yield from rec([root], root.index if root.side == "u" else None, root.index if root.side == "v" else None)


# -- structural lemma checks ----------------------------------------------

TREE_EDGES = "TreeEdges"
DISJOINT_RANGES = "DisjointRanges"
NEVER_MEET = "NeverMeet"
SINGLE_INCIDENCE = "SingleIncidence"
STRUCTURE_LEMMAS = (TREE_EDGES, DISJOINT_RANGES, NEVER_MEET, SINGLE_INCIDENCE)


@dataclass
class LemmaReport:
    lemma: str
    passed: bool
    checks: int = 0
    counterexample: object = None

    def __bool__(self):
        return self.passed


def _check_tree_edges(g: OBG) -> LemmaReport:
    checks = 0
    for x in g.vertices():
        reach = forward_reach(g, x, RIGHTWARD)
        us = {y.index for y in reach.vertices if y.side == "u"}
        vs = {y.index for y in reach.vertices if y.side == "v"}
        induced = [(u, v) for u, v in g.edges if u in us and v in vs]
        checks += 1
        if len(induced) != len(reach.vertices) - 1:
            extra = sorted(set(induced) - reach.edges)
            return LemmaReport(TREE_EDGES, False, checks, {
                "root": str(x), "tree_vertices": len(reach.vertices),
                "induced_edges": len(induced), "extra_edges": extra,
            })
    return LemmaReport(TREE_EDGES, True, checks)


def _interval(idx: list[int]):
    return (min(idx), max(idx)) if idx else None


def _apart(a, b) -> bool:
    return a is None or b is None or a[1] < b[0] or b[1] < a[0]


def _ranges_disjoint(p: Sequence[Vertex], q: Sequence[Vertex]) -> bool:
    pu = _interval([x.index for x in p if x.side == "u"])
    pv = _interval([x.index for x in p if x.side == "v"])
    qu = _interval([x.index for x in q if x.side == "u"])
    qv = _interval([x.index for x in q if x.side == "v"])
    return _apart(pu, qu) and _apart(pv, qv)


MAX_PATHS_PER_ROOT = 5000


def _check_disjoint_ranges(g: OBG) -> LemmaReport:
    """Two maximal leftward paths from a root, after they part, have disjoint ranges."""
    checks = 0
    for x in g.vertices():
        paths = []
        for p in iter_forward_paths(g, x, LEFTWARD):
            paths.append(p)
            if len(paths) > MAX_PATHS_PER_ROOT:
                raise OBGError(f"too many forward paths from {x} for the disjoint-range check")
        for i in range(len(paths)):
            for j in range(i + 1, len(paths)):
                p, q = paths[i], paths[j]
                k = 0
                while k < min(len(p), len(q)) and p[k] == q[k]:
                    k += 1
                checks += 1
                if not _ranges_disjoint(p[k:], q[k:]):
                    return LemmaReport(DISJOINT_RANGES, False, checks, {
                        "root": str(x), "paths": [[str(y) for y in p], [str(y) for y in q]],
                        "split_after": str(p[k - 1]),
                    })
    return LemmaReport(DISJOINT_RANGES, True, checks)


def _check_never_meet(g: OBG) -> LemmaReport:
    checks = 0
    for x in g.vertices():
        for d in DIRECTIONS:
            reach = forward_reach(g, x, d)
            checks += 1
            bad = [y for y, c in reach.path_count.items() if c > 1]
            if bad:
                return LemmaReport(NEVER_MEET, False, checks, {"root": str(x), "direction": d, "vertex": str(min(bad))})
    return LemmaReport(NEVER_MEET, True, checks)


def _check_single_incidence(g: OBG) -> LemmaReport:
    """No vertex outside a forward path has two edges into it.

    Two neighbours y1 < y2 of x lie on a common forward path avoiding x iff
    y2 is reachable from y1 by an increasing path that skips x.
    """
    checks = 0
    for x in g.vertices():
        nbrs = g.neighbors(x)
        for i, y1 in enumerate(nbrs):
            if i == len(nbrs) - 1:
                break
            reach = forward_reach(g, y1, LEFTWARD, exclude=x)
            for y2 in nbrs[i + 1:]:
                checks += 1
                if y2 in reach.vertices:
                    return LemmaReport(SINGLE_INCIDENCE, False, checks, {
                        "outside": str(x), "path_vertices": [str(y1), str(y2)],
                    })
    return LemmaReport(SINGLE_INCIDENCE, True, checks)


_CHECKS = {
    TREE_EDGES: _check_tree_edges,
    DISJOINT_RANGES: _check_disjoint_ranges,
    NEVER_MEET: _check_never_meet,
    SINGLE_INCIDENCE: _check_single_incidence,
}


def verify_structure(g: OBG, lemma: str, assume_prbg: bool = False) -> LemmaReport:
    """Run one structural lemma over every vertex of a path-restricted graph."""
    if lemma not in _CHECKS:
        raise ValueError(f"unknown lemma {lemma!r}; choose from {STRUCTURE_LEMMAS}")
    if not assume_prbg and not is_prbg(g):
        raise PreconditionError("graph is not path restricted; lemma does not apply")
    return _CHECKS[lemma](g)
