# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same API and results as ``_pykernels``."""
from libc.stdlib cimport malloc, free

import numpy as np

cdef int U_SIDE = 0
cdef int V_SIDE = 1


cdef inline int imax(int a, int b) nogil:
    return a if a > b else b


cdef void _tables(const unsigned char* a, int nu, int nv,
                  int* mu_u, int* mu_v, int* mv_u, int* mv_v,
                  int* col_mu, int* col_mv) noexcept nogil:
    cdef int u, v, k, run_mu, run_mv
    for k in range(nu * nv):
        mu_u[k] = -1
        mu_v[k] = -1
        mv_u[k] = -1
        mv_v[k] = -1
    for v in range(nv):
        col_mu[v] = -1
        col_mv[v] = -1
    for u in range(nu - 1, -1, -1):
        for v in range(nv):
            if a[u * nv + v]:
                mu_v[u * nv + v] = imax(u, col_mu[v])
                mv_v[u * nv + v] = imax(v, col_mv[v])
        run_mu = -1
        run_mv = -1
        for v in range(nv - 1, -1, -1):
            k = u * nv + v
            if a[k]:
                mu_u[k] = imax(u, run_mu)
                mv_u[k] = imax(v, run_mv)
                run_mu = imax(run_mu, mu_v[k])
                run_mv = imax(run_mv, mv_v[k])
        for v in range(nv):
            k = u * nv + v
            if a[k]:
                col_mu[v] = imax(col_mu[v], mu_u[k])
                col_mv[v] = imax(col_mv[v], mv_u[k])


cdef int _fast(const unsigned char* a, int nu, int nv, int* out) noexcept nogil:
    """Return 0 if no violation, else the case number with details in ``out``.

    out = [p0, p1, p2, p3, back_u, back_v, need]; cases 1 and 3 need a U
    index, cases 2 and 4 a V index.
    """
    cdef int size = nu * nv
    cdef int* buf = <int*> malloc(sizeof(int) * (4 * size + 2 * nv + 2 * nu))
    cdef int* mu_u = buf
    cdef int* mu_v = buf + size
    cdef int* mv_u = buf + 2 * size
    cdef int* mv_v = buf + 3 * size
    cdef int* col_mu = buf + 4 * size
    cdef int* col_mv = col_mu + nv
    cdef int* prev = col_mv + nv
    cdef int ua, vc, u2, v2, s, found = 0
    _tables(a, nu, nv, mu_u, mu_v, mv_u, mv_v, col_mu, col_mv)

    # u_a, v_c, u2 with a later neighbour of v_c inside the U range
    for vc in range(nv):
        if found:
            break
        prev[0] = -1
        prev[1] = -1
        for s in range(nu):
            if not a[s * nv + vc]:
                continue
            if prev[0] >= 0 and s <= mu_u[prev[1] * nv + vc]:
                out[0] = prev[0]; out[1] = vc; out[2] = prev[1]
                out[4] = s; out[5] = vc; out[6] = s
                found = 1
                break
            prev[0] = prev[1]
            prev[1] = s
    if not found:
        for ua in range(nu):
            if found:
                break
            prev[0] = -1
            prev[1] = -1
            for s in range(nv):
                if not a[ua * nv + s]:
                    continue
                if prev[0] >= 0 and prev[1] >= 0 and s <= mv_v[ua * nv + prev[1]]:
                    out[0] = prev[0]; out[1] = ua; out[2] = prev[1]
                    out[4] = ua; out[5] = s; out[6] = s
                    found = 2
                    break
                prev[0] = prev[1]
                prev[1] = s
    if not found:
        for ua in range(nu):
            if found:
                break
            for vc in range(nv):
                if found:
                    break
                if not a[ua * nv + vc]:
                    continue
                # v_c, u_a, v2, u2
                for v2 in range(vc + 1, nv):
                    if found:
                        break
                    if not a[ua * nv + v2]:
                        continue
                    for u2 in range(ua + 1, nu):
                        if not a[u2 * nv + v2]:
                            continue
                        s = u2 + 1
                        while s < nu and not a[s * nv + vc]:
                            s += 1
                        if s < nu and s <= mu_u[u2 * nv + v2]:
                            out[0] = vc; out[1] = ua; out[2] = v2; out[3] = u2
                            out[4] = s; out[5] = vc; out[6] = s
                            found = 3
                            break
                if found:
                    break
                # u_a, v_c, u2, v2
                for u2 in range(ua + 1, nu):
                    if found:
                        break
                    if not a[u2 * nv + vc]:
                        continue
                    for v2 in range(vc + 1, nv):
                        if not a[u2 * nv + v2]:
                            continue
                        s = v2 + 1
                        while s < nv and not a[ua * nv + s]:
                            s += 1
                        if s < nv and s <= mv_v[u2 * nv + v2]:
                            out[0] = ua; out[1] = vc; out[2] = u2; out[3] = v2
                            out[4] = ua; out[5] = s; out[6] = s
                            found = 4
                            break
    free(buf)
    return found


cdef unsigned char[:, ::1] _as_array(adj):
    return np.ascontiguousarray(np.asarray(adj, dtype=np.uint8))


def reach_tables(adj):
    cdef unsigned char[:, ::1] a = _as_array(adj)
    cdef int nu = a.shape[0]
    cdef int nv = a.shape[1] if nu else 0
    tabs = np.full((4, nu, nv), -1, dtype=np.intc)
    cdef int[:, :, ::1] t = tabs
    cdef int* cols = <int*> malloc(sizeof(int) * (2 * nv + 1))
    if nu and nv:
        _tables(&a[0, 0], nu, nv, &t[0, 0, 0], &t[1, 0, 0], &t[2, 0, 0], &t[3, 0, 0], cols, cols + nv)
    free(cols)
    return tuple(x.tolist() for x in tabs)


def fast_violation(adj):
    cdef unsigned char[:, ::1] a = _as_array(adj)
    cdef int nu = a.shape[0]
    if nu == 0:
        return None
    cdef int nv = a.shape[1]
    if nv == 0:
        return None
    cdef int out[7]
    cdef int case = _fast(&a[0, 0], nu, nv, out)
    if case == 0:
        return None
    back = (out[4], out[5])
    if case == 1:
        return ((U_SIDE, out[0]), (V_SIDE, out[1]), (U_SIDE, out[2])), back, U_SIDE, out[6]
    if case == 2:
        return ((V_SIDE, out[0]), (U_SIDE, out[1]), (V_SIDE, out[2])), back, V_SIDE, out[6]
    if case == 3:
        return ((V_SIDE, out[0]), (U_SIDE, out[1]), (V_SIDE, out[2]), (U_SIDE, out[3])), back, U_SIDE, out[6]
    return ((U_SIDE, out[0]), (V_SIDE, out[1]), (U_SIDE, out[2]), (V_SIDE, out[3])), back, V_SIDE, out[6]


# -- brute force -----------------------------------------------------------

cdef struct Brute:
    const unsigned char* a
    int nu
    int nv
    int* path_side
    int* path_idx
    int best_len
    int* best_side
    int* best_idx
    int back_u
    int back_v


cdef int _first_back_edge(Brute* b, int length, int* eu, int* ev) noexcept nogil:
    """Literal back-edge rule on the current path; 1 if one exists."""
    cdef int k, ua = -1, vc = -1, u_second = -1, v_second = -1, u_hi = -1, v_hi = -1
    cdef int nu_seen = 0, nv_seen = 0, x, pos_u2 = -1, pos_v2 = -1, ui, vj, nv = b.nv
    for k in range(length):
        x = b.path_idx[k]
        if b.path_side[k] == 0:
            if nu_seen == 0:
                ua = x
            elif nu_seen == 1:
                u_second = x
                pos_u2 = k
            u_hi = x
            nu_seen += 1
        else:
            if nv_seen == 0:
                vc = x
            elif nv_seen == 1:
                v_second = x
                pos_v2 = k
            v_hi = x
            nv_seen += 1
    if nu_seen == 0 or nv_seen == 0:
        return 0
    # second vertex is non-terminal iff it is not the last path vertex
    if nu_seen >= 2 and pos_u2 < length - 1:
        for ui in range(u_second + 1, u_hi + 1):
            if b.a[ui * nv + vc] and not _on_path(b, length, ui, vc):
                eu[0] = ui
                ev[0] = vc
                return 1
    if nv_seen >= 2 and pos_v2 < length - 1:
        for vj in range(v_second + 1, v_hi + 1):
            if b.a[ua * nv + vj] and not _on_path(b, length, ua, vj):
                eu[0] = ua
                ev[0] = vj
                return 1
    return 0


cdef int _on_path(Brute* b, int length, int u, int v) noexcept nogil:
    cdef int k, x, y
    for k in range(length - 1):
        if b.path_side[k] == 0:
            x = b.path_idx[k]
            y = b.path_idx[k + 1]
        else:
            x = b.path_idx[k + 1]
            y = b.path_idx[k]
        if x == u and y == v:
            return 1
    return 0


cdef void _extend(Brute* b, int length, int last_u, int last_v) noexcept nogil:
    cdef int eu, ev, k, side, idx, y
    if b.best_len > 0 and length >= b.best_len:
        return
    if length >= 2 and _first_back_edge(b, length, &eu, &ev):
        b.best_len = length
        for k in range(length):
            b.best_side[k] = b.path_side[k]
            b.best_idx[k] = b.path_idx[k]
        b.back_u = eu
        b.back_v = ev
        return
    side = b.path_side[length - 1]
    idx = b.path_idx[length - 1]
    if side == 0:
        for y in range(last_v + 1, b.nv):
            if b.a[idx * b.nv + y]:
                b.path_side[length] = 1
                b.path_idx[length] = y
                _extend(b, length + 1, last_u, y)
    else:
        for y in range(last_u + 1, b.nu):
            if b.a[y * b.nv + idx]:
                b.path_side[length] = 0
                b.path_idx[length] = y
                _extend(b, length + 1, y, last_v)


def brute_violation(adj):
    cdef unsigned char[:, ::1] a = _as_array(adj)
    cdef int nu = a.shape[0]
    if nu == 0 or a.shape[1] == 0:
        return None
    cdef int nv = a.shape[1]
    cdef int cap = nu + nv + 1
    cdef Brute b
    cdef int k
    b.a = &a[0, 0]
    b.nu = nu
    b.nv = nv
    b.best_len = 0
    b.path_side = <int*> malloc(sizeof(int) * 4 * cap)
    b.path_idx = b.path_side + cap
    b.best_side = b.path_side + 2 * cap
    b.best_idx = b.path_side + 3 * cap
    with nogil:
        for k in range(nu):
            b.path_side[0] = 0
            b.path_idx[0] = k
            _extend(&b, 1, k, -1)
        for k in range(nv):
            b.path_side[0] = 1
            b.path_idx[0] = k
            _extend(&b, 1, -1, k)
    try:
        if b.best_len == 0:
            return None
        path = tuple((b.best_side[k], b.best_idx[k]) for k in range(b.best_len))
        return path, (b.back_u, b.back_v)
    finally:
        free(b.path_side)


# -- exact maximum ---------------------------------------------------------
#
# Rows are placed from the highest U index down. Extensions of increasing
# paths only move to higher indices, so the reach tables of placed rows are
# final, and a new lowest row can only create violations whose lowest U
# vertex is that row.

cdef struct Search:
    int nu
    int nv
    int nmasks
    int* masks
    int* pops
    int* bound
    unsigned char* a       # nu * nv
    int* mu_u
    int* mu_v
    int* mv_u
    int* mv_v
    int* nxt_col           # next placed row below in the same column, or nu
    int* col_mu            # per level copies, (nu + 1) * nv
    int* col_mv
    int* top_col
    int* rows
    int* best_rows
    int best
    int found


cdef int _row_violates(Search* s, int r) noexcept nogil:
    """Fill row r's tables and report whether row r closes a back edge."""
    cdef int nv = s.nv, nu = s.nu, v, k, run_mu, run_mv, u2, v2, vc, w, prev0, prev1
    cdef unsigned char* a = s.a
    cdef int* cm = s.col_mu + (r + 1) * nv
    cdef int* cv = s.col_mv + (r + 1) * nv
    cdef int* tc = s.top_col + (r + 1) * nv
    for v in range(nv):
        k = r * nv + v
        s.nxt_col[k] = tc[v]
        if a[k]:
            s.mu_v[k] = imax(r, cm[v])
            s.mv_v[k] = imax(v, cv[v])
        else:
            s.mu_v[k] = -1
            s.mv_v[k] = -1
    run_mu = -1
    run_mv = -1
    for v in range(nv - 1, -1, -1):
        k = r * nv + v
        if a[k]:
            s.mu_u[k] = imax(r, run_mu)
            s.mv_u[k] = imax(v, run_mv)
            run_mu = imax(run_mu, s.mu_v[k])
            run_mv = imax(run_mv, s.mv_v[k])
        else:
            s.mu_u[k] = -1
            s.mv_u[k] = -1
    # r, v_c, u2, next neighbour of v_c
    for vc in range(nv):
        if a[r * nv + vc]:
            u2 = tc[vc]
            if u2 < nu:
                w = s.nxt_col[u2 * nv + vc]
                if w < nu and w <= s.mu_u[u2 * nv + vc]:
                    return 1
    # v_c, r, v2, next neighbour of r
    prev0 = -1
    prev1 = -1
    for v in range(nv):
        if a[r * nv + v]:
            if prev0 >= 0 and v <= s.mv_v[r * nv + prev1]:
                return 1
            prev0 = prev1
            prev1 = v
    for vc in range(nv):
        if not a[r * nv + vc]:
            continue
        # v_c, r, v2, u2: a lower-than-reach neighbour of v_c beyond u2
        for v2 in range(vc + 1, nv):
            if not a[r * nv + v2]:
                continue
            u2 = tc[v2]
            while u2 < nu:
                w = u2 + 1
                while w < nu and not a[w * nv + vc]:
                    w += 1
                if w < nu and w <= s.mu_u[u2 * nv + v2]:
                    return 1
                u2 = s.nxt_col[u2 * nv + v2]
        # r, v_c, u2, v2: a neighbour of r beyond v2 within reach
        u2 = tc[vc]
        while u2 < nu:
            for v2 in range(vc + 1, nv):
                if a[u2 * nv + v2]:
                    w = v2 + 1
                    while w < nv and not a[r * nv + w]:
                        w += 1
                    if w < nv and w <= s.mv_v[u2 * nv + v2]:
                        return 1
            u2 = s.nxt_col[u2 * nv + vc]
    return 0


cdef int _live_columns(Search* s, int r) noexcept nogil:
    """Columns a single edge of a new row below row r could still use.

    Rows in between are empty and do not matter, so a dead column stays dead
    for every row placed later.
    """
    cdef int v, live = 0, nv = s.nv
    for v in range(nv):
        s.a[(r - 1) * nv + v] = 1
        if not _row_violates(s, r - 1):
            live += 1
        s.a[(r - 1) * nv + v] = 0
    return live


cdef void _place(Search* s, int r, int count) noexcept nogil:
    cdef int i, m, p, v, k, nv = s.nv, bw = s.nv + 1
    cdef int* cm
    cdef int* cv
    cdef int* tc
    if r < 0:
        if count > s.best:
            s.best = count
            s.found = 1
            for i in range(s.nu):
                s.best_rows[i] = s.rows[i]
        return
    cm = s.col_mu + r * nv
    cv = s.col_mv + r * nv
    tc = s.top_col + r * nv
    for i in range(s.nmasks):
        m = s.masks[i]
        p = s.pops[i]
        # rows 0..r-1 remain after this one
        if count + p + s.bound[r * bw + nv] <= s.best:
            break
        for v in range(nv):
            s.a[r * nv + v] = (m >> v) & 1
        if _row_violates(s, r):
            continue
        for v in range(nv):
            k = r * nv + v
            cm[v] = s.col_mu[(r + 1) * nv + v]
            cv[v] = s.col_mv[(r + 1) * nv + v]
            tc[v] = s.top_col[(r + 1) * nv + v]
            if s.a[k]:
                cm[v] = imax(cm[v], s.mu_u[k])
                cv[v] = imax(cv[v], s.mv_u[k])
                tc[v] = r
        if r > 0 and count + p + s.bound[r * bw + _live_columns(s, r)] <= s.best:
            continue
        s.rows[r] = m
        _place(s, r - 1, count + p)
    for v in range(nv):
        s.a[r * nv + v] = 0
    s.rows[r] = 0


def max_prbg_search(int nu, int nv, bound_table, int initial_best=0):
    """Row-by-row branch and bound for the densest path-restricted graph.

    ``bound_table[k][c]`` must bound the edges of any valid graph on k rows
    and c columns, for k < nu and c <= nv. Returns ``(best, rows)`` with rows
    as bitmasks, or ``(initial_best, None)`` if nothing beats
    ``initial_best``.
    """
    if nu == 0 or nv == 0:
        return initial_best, None
    masks = sorted(range(1 << nv), key=lambda m: (-bin(m).count("1"), m))
    cdef int[::1] mk = np.asarray(masks, dtype=np.intc)
    cdef int[::1] pp = np.asarray([bin(m).count("1") for m in masks], dtype=np.intc)
    table = np.asarray([list(row)[: nv + 1] for row in list(bound_table)[:nu]], dtype=np.intc)
    if table.shape != (nu, nv + 1):
        raise ValueError("bound_table must have nu rows of nv + 1 entries")
    cdef int[::1] bd = np.ascontiguousarray(table.ravel())
    cdef int size = nu * nv
    cdef unsigned char[::1] a = np.zeros(size, dtype=np.uint8)
    cdef int[:, ::1] tabs = np.full((5, size), -1, dtype=np.intc)
    cdef int[:, ::1] cols = np.full((2, (nu + 1) * nv), -1, dtype=np.intc)
    cdef int[::1] top = np.full((nu + 1) * nv, nu, dtype=np.intc)
    cdef int[::1] rows = np.zeros(nu, dtype=np.intc)
    cdef int[::1] best_rows = np.zeros(nu, dtype=np.intc)
    cdef Search s
    s.nu = nu
    s.nv = nv
    s.nmasks = len(masks)
    s.masks = &mk[0]
    s.pops = &pp[0]
    s.bound = &bd[0]
    s.a = &a[0]
    s.mu_u = &tabs[0, 0]
    s.mu_v = &tabs[1, 0]
    s.mv_u = &tabs[2, 0]
    s.mv_v = &tabs[3, 0]
    s.nxt_col = &tabs[4, 0]
    s.col_mu = &cols[0, 0]
    s.col_mv = &cols[1, 0]
    s.top_col = &top[0]
    s.rows = &rows[0]
    s.best_rows = &best_rows[0]
    s.best = initial_best
    s.found = 0
    with nogil:
        _place(&s, nu - 1, 0)
    if not s.found:
        return initial_best, None
    return s.best, [int(x) for x in best_rows]
