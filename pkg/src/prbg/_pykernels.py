"""Pure-Python kernels; the compiled ``_ckernels`` module mirrors this API.

Vertices are ``(side, index)`` pairs with side 0 for U and 1 for V. All
paths are increasing forward paths. ``adj`` is an (nU, nV) 0/1 array.
"""
from __future__ import annotations

U_SIDE = 0
V_SIDE = 1


def _rows(adj):
    return [[int(x) for x in row] for row in adj.tolist()] if hasattr(adj, "tolist") else [list(r) for r in adj]


def reach_tables(adj):
    """Largest U and V index reachable by extending an increasing path.

    State (u, v, at=U) is a path whose last edge is (u, v) and which ends at
    u; (u, v, at=V) ends at v. Entries for non-edges are -1.
    Returns (mu_u, mu_v, mv_u, mv_v) as nested lists indexed [u][v].
    """
    a = _rows(adj)
    nu = len(a)
    nv = len(a[0]) if nu else 0
    mu_u = [[-1] * nv for _ in range(nu)]
    mu_v = [[-1] * nv for _ in range(nu)]
    mv_u = [[-1] * nv for _ in range(nu)]
    mv_v = [[-1] * nv for _ in range(nu)]
    # best over u' > u of the at=U tables, per column
    col_mu = [-1] * nv
    col_mv = [-1] * nv
    for u in range(nu - 1, -1, -1):
        row = a[u]
        for v in range(nv):
            if row[v]:
                mu_v[u][v] = max(u, col_mu[v])
                mv_v[u][v] = max(v, col_mv[v])
        run_mu = -1
        run_mv = -1
        for v in range(nv - 1, -1, -1):
            if row[v]:
                mu_u[u][v] = max(u, run_mu)
                mv_u[u][v] = max(v, run_mv)
                run_mu = max(run_mu, mu_v[u][v])
                run_mv = max(run_mv, mv_v[u][v])
        for v in range(nv):
            if row[v]:
                col_mu[v] = max(col_mu[v], mu_u[u][v])
                col_mv[v] = max(col_mv[v], mv_u[u][v])
    return mu_u, mu_v, mv_u, mv_v


def _succ(sorted_list, x):
    for y in sorted_list:
        if y > x:
            return y
    return -1


def fast_violation(adj):
    """Find a forward path with a back edge by reachability tables.

    Returns ``None`` or ``(prefix, back_edge, need_side, need)``: the first
    vertices of a violating path, the back edge ``(u, v)``, and the side
    and index the path must reach (at least) to make the edge a back edge.
    """
    a = _rows(adj)
    nu = len(a)
    nv = len(a[0]) if nu else 0
    if nu == 0 or nv == 0:
        return None
    mu_u, mu_v, mv_u, mv_v = reach_tables(a)
    nbr_u = [[v for v in range(nv) if a[u][v]] for u in range(nu)]
    nbr_v = [[u for u in range(nu) if a[u][v]] for v in range(nv)]

    # path u_a, v_c, u2, ... with a later neighbour of v_c inside the U range
    for vc in range(nv):
        ns = nbr_v[vc]
        for t in range(1, len(ns) - 1):
            u2, nxt = ns[t], ns[t + 1]
            if nxt <= mu_u[u2][vc]:
                prefix = ((U_SIDE, ns[t - 1]), (V_SIDE, vc), (U_SIDE, u2))
                return prefix, (nxt, vc), U_SIDE, nxt
    # path v_c, u_a, v2, ... with a later neighbour of u_a inside the V range
    for ua in range(nu):
        ns = nbr_u[ua]
        for t in range(1, len(ns) - 1):
            v2, nxt = ns[t], ns[t + 1]
            if nxt <= mv_v[ua][v2]:
                prefix = ((V_SIDE, ns[t - 1]), (U_SIDE, ua), (V_SIDE, v2))
                return prefix, (ua, nxt), V_SIDE, nxt
    for ua in range(nu):
        for vc in nbr_u[ua]:
            # v_c, u_a, v2, u2, ...
            for v2 in nbr_u[ua]:
                if v2 <= vc:
                    continue
                for u2 in nbr_v[v2]:
                    if u2 <= ua:
                        continue
                    s = _succ(nbr_v[vc], u2)
                    if s >= 0 and s <= mu_u[u2][v2]:
                        prefix = ((V_SIDE, vc), (U_SIDE, ua), (V_SIDE, v2), (U_SIDE, u2))
                        return prefix, (s, vc), U_SIDE, s
            # u_a, v_c, u2, v2, ...
            for u2 in nbr_v[vc]:
                if u2 <= ua:
                    continue
                for v2 in nbr_u[u2]:
                    if v2 <= vc:
                        continue
                    s = _succ(nbr_u[ua], v2)
                    if s >= 0 and s <= mv_v[u2][v2]:
                        prefix = ((U_SIDE, ua), (V_SIDE, vc), (U_SIDE, u2), (V_SIDE, v2))
                        return prefix, (ua, s), V_SIDE, s
    return None


def path_back_edges(a, path):
    """Back edges of an increasing forward path, read straight off the rule.

    Corner vertices are the lowest U and lowest V on the path. A back edge
    joins one corner to a vertex of the other side lying beyond that side's
    second path vertex but within the path's range, provided the second
    vertex is incident to two path edges.
    """
    us = [i for s, i in path if s == U_SIDE]
    vs = [i for s, i in path if s == V_SIDE]
    if not us or not vs:
        return []
    on_path = set()
    deg: dict[tuple[int, int], int] = {}
    for x, y in zip(path, path[1:]):
        e = (x[1], y[1]) if x[0] == U_SIDE else (y[1], x[1])
        on_path.add(e)
        deg[x] = deg.get(x, 0) + 1
        deg[y] = deg.get(y, 0) + 1
    ua, vc = us[0], vs[0]
    found = []
    if len(us) >= 2 and deg.get((U_SIDE, us[1]), 0) == 2:
        for ui in range(us[1] + 1, us[-1] + 1):
            if a[ui][vc] and (ui, vc) not in on_path:
                found.append((ui, vc))
    if len(vs) >= 2 and deg.get((V_SIDE, vs[1]), 0) == 2:
        for vj in range(vs[1] + 1, vs[-1] + 1):
            if a[ua][vj] and (ua, vj) not in on_path:
                found.append((ua, vj))
    return found


def brute_violation(adj):
    """Enumerate increasing forward paths depth-first; shortest witness wins.

    Returns ``None`` or ``(path, back_edge)``.
    """
    a = _rows(adj)
    nu = len(a)
    nv = len(a[0]) if nu else 0
    if nu == 0 or nv == 0:
        return None
    nbr = [[[v for v in range(nv) if a[u][v]] for u in range(nu)],
           [[u for u in range(nu) if a[u][v]] for v in range(nv)]]
    best: list = [None]

    def extend(path, last_u, last_v):
        if best[0] is not None and len(path) >= len(best[0][0]):
            return
        if len(path) >= 2:
            hits = path_back_edges(a, path)
            if hits:
                best[0] = (tuple(path), hits[0])
                return
        side, idx = path[-1]
        if side == U_SIDE:
            for v in nbr[0][idx]:
                if v > last_v:
                    path.append((V_SIDE, v))
                    extend(path, last_u, v)
                    path.pop()
        else:
            for u in nbr[1][idx]:
                if u > last_u:
                    path.append((U_SIDE, u))
                    extend(path, u, last_v)
                    path.pop()

    for u in range(nu):
        extend([(U_SIDE, u)], u, -1)
    for v in range(nv):
        extend([(V_SIDE, v)], -1, v)
    return best[0]


def _block_violates(grid, r):
    return fast_violation(grid[r:]) is not None


def max_prbg_search(nu, nv, bound_table, initial_best=0):
    """Row-by-row branch and bound for the densest path-restricted graph.

    Rows are placed from the highest U index down. ``bound_table[k][c]``
    must bound the edges of any valid graph on k rows and c columns, for
    k < nu and c <= nv. A column whose single edge from a new lower row
    already breaks the placed block stays unusable for every later row.
    Returns ``(best, rows)`` with rows as bitmasks, or ``(initial_best,
    None)`` if nothing beats ``initial_best``.
    """
    if nu == 0 or nv == 0:
        return initial_best, None
    masks = sorted(range(1 << nv), key=lambda m: (-bin(m).count("1"), m))
    pops = [bin(m).count("1") for m in masks]
    grid = [[0] * nv for _ in range(nu)]
    rows = [0] * nu
    best = [initial_best, None]

    def live_columns(r):
        live = 0
        for v in range(nv):
            grid[r - 1][v] = 1
            if not _block_violates(grid, r - 1):
                live += 1
            grid[r - 1][v] = 0
        return live

    def place(r, count):
        if r < 0:
            if count > best[0]:
                best[0], best[1] = count, list(rows)
            return
        for m, p in zip(masks, pops):
            if count + p + bound_table[r][nv] <= best[0]:
                break
            grid[r] = [(m >> v) & 1 for v in range(nv)]
            if _block_violates(grid, r):
                continue
            if r > 0 and count + p + bound_table[r][live_columns(r)] <= best[0]:
                continue
            rows[r] = m
            place(r - 1, count + p)
        grid[r] = [0] * nv
        rows[r] = 0

    place(nu - 1, 0)
    return best[0], best[1]
