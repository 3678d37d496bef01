"""Structure specific to bipartite graphs cut from convex unit distance graphs.

Two small patterns that unit distances rule out, a greedy split into
modules (a monotone core tree plus auxiliary edges), how two modules sit
relative to each other, and checks of the counting lemmas over modules.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .geom import squared_distance
from .obg import OBG, LEFTWARD, PreconditionError, U, V, Vertex, is_prbg, monotone_tree, TreeViolation

MAX_OCCURRENCES = 100
U_PAIR = "u-pair"
V_PAIR = "v-pair"


def _increasing_path(first: list[list[int]], second: list[list[int]], start: int, goal: int,
                     bound: int) -> list[int] | None:
    """Increasing path start, y1, x1, y2, ..., goal with every y below ``bound``.

    ``first[x]`` lists the neighbours of x on the other side and ``second[y]``
    those of y back on the first side. Returns the alternating index list.
    """
    dead: set[tuple[int, int]] = set()

    def walk(x: int, last_y: int) -> list[int] | None:
        for y in first[x]:
            if y <= last_y or y >= bound:
                continue
            for x2 in second[y]:
                if x2 <= x or x2 > goal or (x2, y) in dead:
                    continue
                if x2 == goal:
                    return [y, x2]
                rest = walk(x2, y)
                if rest is not None:
                    return [y, x2] + rest
                dead.add((x2, y))
        return None

    tail = walk(start, -1)
    return None if tail is None else [start] + tail


def detect_forbidden_udg_patterns(g: OBG, limit: int = MAX_OCCURRENCES) -> list[dict]:
    """Occurrences of the two patterns, at most ``limit`` of them.

    u-pair: u1 < u2 are joined by an increasing forward path whose V
    vertices all lie below some neighbour v2 of u2, and u1, u2 share a
    neighbour v4 > v2. v-pair is the same with the sides swapped. The
    shortest case, a path u1, vx, u2, is a 4-cycle plus the edge u2 v2.
    """
    found: list[dict] = []
    nu = [g.nbr_u(u) for u in range(g.u_count)]
    nv = [g.nbr_v(v) for v in range(g.v_count)]
    for side in (U_PAIR, V_PAIR):
        first, second = (nu, nv) if side == U_PAIR else (nv, nu)
        for far in range(len(second)):
            sharers = second[far]
            for i, a in enumerate(sharers):
                for b in sharers[i + 1:]:
                    for step in first[b]:
                        if step >= far:
                            break
                        path = _increasing_path(first, second, a, b, step)
                        if path is None:
                            continue
                        if side == U_PAIR:
                            found.append({"pattern": side, "u1": a, "u2": b, "vx": path[1], "v2": step,
                                          "v4": far, "path": path})
                        else:
                            found.append({"pattern": side, "v1": a, "v2": b, "ux": path[1], "u2": step,
                                          "u4": far, "path": path})
                        if len(found) >= limit:
                            return found
                        break
    return found


# -- modules --------------------------------------------------------------

@dataclass
class ModuleRecord:
    v0: int
    u0: int
    core_vertices: frozenset
    core_edges: frozenset
    aux_edges: frozenset
    aux_vertices: frozenset
    full_tree: bool = True  # the core is the whole union of forward paths from v0

    @property
    def vertices(self) -> frozenset:
        return self.core_vertices | self.aux_vertices

    def side(self, s: str, core_only: bool = False) -> list[int]:
        pool = self.core_vertices if core_only else self.vertices
        return sorted(x.index for x in pool if x.side == s)

    @property
    def edge_count(self) -> int:
        return len(self.core_edges) + len(self.aux_edges)

    @property
    def density(self) -> float:
        return self.edge_count / max(1, len(self.vertices))


@dataclass
class ModuleSplit:
    modules: list[ModuleRecord]
    pool_edges: frozenset  # edges not inside any module
    pool_vertices: frozenset

    def owner(self) -> dict:
        out = {}
        for k, m in enumerate(self.modules):
            for x in m.vertices:
                out[x] = k
        return out


def _forward_tree(adj: dict, root: Vertex, allowed: set) -> tuple[dict, set]:
    """Depth-first tree of increasing paths from root, each vertex visited once."""
    parent: dict[Vertex, Vertex] = {}
    seen = {root}
    stack = [(root, -1, iter(sorted(adj.get(root, ()))))]
    edges = set()
    while stack:
        x, prev, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            continue
        if nxt in seen or nxt not in allowed or nxt.index <= prev:
            continue
        seen.add(nxt)
        parent[nxt] = x
        edges.add((x.index, nxt.index) if x.side == "u" else (nxt.index, x.index))
        stack.append((nxt, x.index, iter(sorted(adj.get(nxt, ())))))
    return parent, edges


def detect_modules(g: OBG, check: bool = True) -> ModuleSplit:
    """Greedy modules: lowest remaining V vertex with a free neighbour first.

    The core is the leftward tree of forward paths from v0 inside the
    unassigned vertices (a visit-once depth-first tree when those paths
    meet again); every edge from a core vertex to a still unassigned vertex
    becomes auxiliary and claims that vertex.
    """
    if check and not is_prbg(g):
        raise PreconditionError("modules are defined for path-restricted graphs")
    adj: dict[Vertex, set] = {}
    for u, v in g.edges:
        adj.setdefault(U(u), set()).add(V(v))
        adj.setdefault(V(v), set()).add(U(u))
    free = set(g.vertices())
    modules = []
    while True:
        roots = [x for x in free if x.side == "v" and any(y in free for y in adj.get(x, ()))]
        if not roots:
            break
        v0 = min(roots)
        sub = g.induced([x.index for x in free if x.side == "u"], [x.index for x in free if x.side == "v"])
        full = True
        try:
            h, us, vs = sub
            tree = monotone_tree(h, V(vs.index(v0.index)), LEFTWARD)
            core_edges = {(us[a], vs[b]) for a, b in tree.edges}
        except TreeViolation:
            full = False
            _, core_edges = _forward_tree(adj, v0, free)
        core = {v0} | {U(a) for a, _ in core_edges} | {V(b) for _, b in core_edges}
        free -= core
        aux_edges = set()
        aux_vertices = set()
        for x in sorted(core):
            for y in sorted(adj.get(x, ())):
                if y in free:
                    aux_vertices.add(y)
                    aux_edges.add((x.index, y.index) if x.side == "u" else (y.index, x.index))
        free -= aux_vertices
        u0 = min(x.index for x in core if x.side == "u")
        modules.append(ModuleRecord(v0.index, u0, frozenset(core), frozenset(core_edges),
                                    frozenset(aux_edges), frozenset(aux_vertices), full))
    inside = set()
    for m in modules:
        inside |= m.core_edges | m.aux_edges
    return ModuleSplit(modules, frozenset(g.edges - inside), frozenset(free))


class SeparabilityClass(Enum):
    LINEAR = "Linear"
    PARTIAL_LINEAR = "PartialLinear"
    CROSS = "Cross"
    OVERLAPPING = "Overlapping"


def _order(a: list[int], b: list[int]) -> int:
    """+1 if every a is above every b, -1 if below, 0 otherwise."""
    if not a or not b:
        return 0
    if min(a) > max(b):
        return 1
    if max(a) < min(b):
        return -1
    return 0


def _linear(ua, va, ub, vb) -> bool:
    su, sv = _order(ua, ub), _order(va, vb)
    return su != 0 and su == sv


def separability(a: ModuleRecord, b: ModuleRecord) -> SeparabilityClass:
    if a.vertices & b.vertices:
        raise ValueError("modules share vertices")
    ua, va, ub, vb = a.side("u"), a.side("v"), b.side("u"), b.side("v")
    if _linear(ua, va, ub, vb):
        return SeparabilityClass.LINEAR
    su, sv = _order(ua, ub), _order(va, vb)
    if su != 0 and sv == -su:
        return SeparabilityClass.CROSS
    if _linear(a.side("u", True), a.side("v", True), ub, vb) or _linear(b.side("u", True), b.side("v", True), ua, va):
        return SeparabilityClass.PARTIAL_LINEAR
    return SeparabilityClass.OVERLAPPING


# -- module lemmas --------------------------------------------------------

FUSING_MATCHING = "FusingMatching"
LINEAR_SEPARABLE_LINK = "LinearSeparableLink"
FUSING_TOTAL_LINEAR = "FusingTotalLinear"
PARTITION = "Partition"
DISTANCE_WITNESS = "DistanceWitness"
MODULE_LEMMAS = (FUSING_MATCHING, LINEAR_SEPARABLE_LINK, FUSING_TOTAL_LINEAR, PARTITION, DISTANCE_WITNESS)

FUSING_CONSTANT = 2.0


@dataclass
class ModuleLemmaReport:
    lemma: str
    passed: bool
    checks: int = 0
    value: float | None = None  # e.g. the observed constant
    counterexample: object = None

    def __bool__(self):
        return self.passed


def _between(g: OBG, a: ModuleRecord, b: ModuleRecord, a_side: str) -> list[tuple[int, int]]:
    """Edges joining a's ``a_side`` vertices to b's other-side vertices."""
    out = []
    for x in a.vertices:
        if x.side != a_side:
            continue
        for u, v in g.edges:
            if a_side == "v" and v == x.index and U(u) in b.vertices:
                out.append((u, v))
            if a_side == "u" and u == x.index and V(v) in b.vertices:
                out.append((u, v))
    return sorted(out)


def _fusing_matching(g: OBG, split: ModuleSplit) -> ModuleLemmaReport:
    checks = 0
    mods = split.modules
    for i, a in enumerate(mods):
        for j, b in enumerate(mods):
            if i == j or separability(a, b) is not SeparabilityClass.CROSS:
                continue
            # orient so that a holds the higher U and the lower V
            if _order(a.side("u"), b.side("u")) != 1:
                continue
            edges = _between(g, a, b, "v")
            checks += 1
            deg: dict[Vertex, list[Vertex]] = {}
            for u, v in edges:
                deg.setdefault(V(v), []).append(U(u))
                deg.setdefault(U(u), []).append(V(v))
            for x, ys in sorted(deg.items()):
                owner = a if x.side == "v" else b
                other = b if owner is a else a
                if len(ys) > 1 and not all(y in other.core_vertices for y in ys):
                    return ModuleLemmaReport(FUSING_MATCHING, False, checks, counterexample={
                        "modules": (i, j), "vertex": str(x), "neighbours": [str(y) for y in ys]})
    return ModuleLemmaReport(FUSING_MATCHING, True, checks)


def _linear_link(g: OBG, split: ModuleSplit) -> ModuleLemmaReport:
    checks = 0
    mods = split.modules
    for i, a in enumerate(mods):
        for j, b in enumerate(mods):
            if i == j:
                continue
            kind = separability(a, b)
            if kind not in (SeparabilityClass.LINEAR, SeparabilityClass.PARTIAL_LINEAR):
                continue
            # b is the module whose core sits higher
            if _order(b.side("u", True), a.side("u", True)) != 1 or _order(b.side("v", True), a.side("v", True)) != 1:
                continue
            checks += 1
            to_core = set()
            to_aux: dict[Vertex, int] = {}
            for x in a.vertices:
                for y in (U(u) for u in g.nbr_v(x.index)) if x.side == "v" else (V(v) for v in g.nbr_u(x.index)):
                    if y in b.core_vertices:
                        to_core.add(x)
                    elif y in b.aux_vertices:
                        to_aux[x] = to_aux.get(x, 0) + 1
            linked = to_core | set(to_aux)
            if len(to_core) > 1 or (len(linked) > 1 and any(c > 1 for c in to_aux.values())):
                return ModuleLemmaReport(LINEAR_SEPARABLE_LINK, False, checks, counterexample={
                    "modules": (i, j), "to_core": sorted(str(x) for x in to_core),
                    "to_aux": {str(x): c for x, c in sorted(to_aux.items())}})
    return ModuleLemmaReport(LINEAR_SEPARABLE_LINK, True, checks)


def _fusing_total(g: OBG, split: ModuleSplit, constant: float) -> ModuleLemmaReport:
    n = max(1, g.n)
    c = len(split.pool_edges) / n
    return ModuleLemmaReport(FUSING_TOTAL_LINEAR, c <= constant, 1, value=c)


def _is_forward_forest(edges: Iterable[tuple[int, int]]) -> bool:
    """Each component is a tree whose root paths are increasing forward paths."""
    adj: dict[Vertex, list[Vertex]] = {}
    for u, v in edges:
        adj.setdefault(U(u), []).append(V(v))
        adj.setdefault(V(v), []).append(U(u))
    seen: set = set()
    for start in sorted(adj):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        n_edges = sum(len(adj[x]) for x in comp) // 2
        if n_edges != len(comp) - 1:
            return False
        if not any(_rooted_increasing(adj, r, comp) for r in sorted(comp)):
            return False
    return True


def _rooted_increasing(adj: dict, root: Vertex, comp: set) -> bool:
    stack = [(root, None, -1, -1)]
    while stack:
        x, parent, lu, lv = stack.pop()
        for y in adj[x]:
            if y == parent:
                continue
            last = lu if y.side == "u" else lv
            if y.index <= last:
                return False
            stack.append((y, x, y.index if y.side == "u" else lu, y.index if y.side == "v" else lv))
    return True


def _partition(g: OBG, split: ModuleSplit) -> ModuleLemmaReport:
    checks = 0
    for k, m in enumerate(split.modules):
        us = m.side("u", True)
        vs = m.side("v", True)
        for su in range(min(us, default=0), max(us, default=0) + 2):
            for sv in range(min(vs, default=0), max(vs, default=0) + 2):
                left, right, crossing = [], [], []
                for u, v in m.core_edges:
                    lu, lv = u >= su, v >= sv
                    (left if lu and lv else right if not lu and not lv else crossing).append((u, v))
                checks += 1
                for part in (left, right, crossing):
                    if not _is_forward_forest(part):
                        return ModuleLemmaReport(PARTITION, False, checks, counterexample={
                            "module": k, "line": (su, sv), "part": sorted(part)})
    return ModuleLemmaReport(PARTITION, True, checks)


def _distance_witness(g: OBG, split: ModuleSplit, points, u_points, v_points) -> ModuleLemmaReport:
    """A core and an auxiliary U vertex of one module facing a V vertex below it.

    When the core vertex reaches v but the auxiliary one does not, the
    auxiliary one must be closer than unit distance to v.
    """
    if points is None:
        raise PreconditionError("the distance witness needs the source points")
    checks = 0
    for k, m in enumerate(split.modules):
        lowest_v = min(m.side("v"), default=None)
        if lowest_v is None:
            continue
        cores = [x.index for x in m.core_vertices if x.side == "u"]
        auxes = [x.index for x in m.aux_vertices if x.side == "u"]
        for v in range(lowest_v):
            for u1 in cores:
                if not g.has_edge(u1, v):
                    continue
                for u2 in auxes:
                    if g.has_edge(u2, v):
                        continue
                    checks += 1
                    d = squared_distance(points[u_points[u2]], points[v_points[v]])
                    if not d < 1:
                        return ModuleLemmaReport(DISTANCE_WITNESS, False, checks, counterexample={
                            "module": k, "core": u1, "aux": u2, "v": v, "squared_distance": str(d)})
    return ModuleLemmaReport(DISTANCE_WITNESS, True, checks)


def verify_module_lemma(g: OBG, split: ModuleSplit, lemma: str, constant: float = FUSING_CONSTANT,
                        points=None, u_points=None, v_points=None) -> ModuleLemmaReport:
    if lemma == FUSING_MATCHING:
        return _fusing_matching(g, split)
    if lemma == LINEAR_SEPARABLE_LINK:
        return _linear_link(g, split)
    if lemma == FUSING_TOTAL_LINEAR:
        return _fusing_total(g, split, constant)
    if lemma == PARTITION:
        return _partition(g, split)
    if lemma == DISTANCE_WITNESS:
        return _distance_witness(g, split, points, u_points, v_points)
    raise ValueError(f"unknown lemma {lemma!r}; choose from {MODULE_LEMMAS}")
