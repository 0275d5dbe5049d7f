"""numba kernel for the flit-level simulator.

Port numbering: router r owns network ports ``ptr[r]..ptr[r+1]-1`` in CSR
order of its neighbours; the same global index names both the input port
fed by that neighbour and the output port toward it, and ``rev[g]`` is the
matching port at the neighbour. Injection input / ejection output of endpoint
``e`` have local index ``deg + e % p`` at router ``e // p``.

A flit sitting in network VC ``v`` has already taken ``v + 1`` hops, so its
position on the route is implied by the VC and need not be stored.
"""

from __future__ import annotations

import numpy as np
from numba import njit

POLICY_CODES = {"min": 0, "valiant": 1, "ugal": 2, "ugal_pf": 3, "compact_valiant": 4, "ugal_g": 5}
STATUS_OK, STATUS_AUDIT, STATUS_DEADLOCK, STATUS_POOL = 0, 1, 2, 3
MAX_ROUTE = 16

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def _next_u64(state, i):
    z = state[i] + _GOLDEN
    state[i] = z
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _uniform(state, i):
    return float(_next_u64(state, i) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def _randint(state, i, n):
    k = int(_uniform(state, i) * n)
    return k if k < n else n - 1


@njit(cache=True)
def _draw_dest(kind, perm, R, p, e, state):
    r = e // p
    if kind == 0:
        d = _randint(state, e, R - 1)
        if d >= r:
            d += 1
        return d * p + _randint(state, e, p)
    return perm[r] * p + e % p


@njit(cache=True)
def draw_destinations(kind, perm, R, p, e, seed_state, n):
    """Draw ``n`` destination endpoints for endpoint ``e`` (test hook).

    ``seed_state`` holds one RNG word per endpoint, as passed to ``simulate``.
    """
    if e < 0 or e >= len(seed_state):
        raise ValueError("seed_state needs one entry per endpoint")
    state = seed_state.copy()
    out = np.empty(n, dtype=np.int64)
    for k in range(n):
        out[k] = _draw_dest(kind, perm, R, p, e, state)
    return out


@njit(cache=True)
def _append_min(nxt, s, t, path, k):
    v = s
    while v != t:
        v = nxt[v, t]
        path[k] = v
        k += 1
    return k


@njit(cache=True)
def _simplify(path, n):
    m = 0
    for i in range(n):
        v = path[i]
        j = -1
        for a in range(m):
            if path[a] == v:
                j = a
                break
        if j >= 0:
            m = j + 1
        else:
            path[m] = v
            m += 1
    return m


@njit(cache=True)
def _valiant(nxt, R, s, t, path, state, e):
    r = _randint(state, e, R - 2)
    lo, hi = min(s, t), max(s, t)
    if r >= lo:
        r += 1
    if r >= hi:
        r += 1
    path[0] = s
    k = _append_min(nxt, s, r, path, 1)
    k = _append_min(nxt, r, t, path, k)
    return _simplify(path, k)


@njit(cache=True)
def _compact(nxt, ptr, nbr, s, t, path, state, e):
    """Detour through a random neighbour of s whose minimal route avoids s."""
    chosen = -1
    seen = 0
    for a in range(ptr[s], ptr[s + 1]):
        r = nbr[a]
        if r == t:
            continue
        v = r
        ok = True
        while v != t:
            v = nxt[v, t]
            if v == s:
                ok = False
                break
        if ok:
            seen += 1
            if _randint(state, e, seen) == 0:
                chosen = r
    if chosen < 0:
        path[0] = s
        return _append_min(nxt, s, t, path, 1)
    path[0] = s
    path[1] = chosen
    return _append_min(nxt, chosen, t, path, 2)


@njit(cache=True)
def _first_port(ptr, port_of, path):
    return ptr[path[0]] + port_of[path[0], path[1]]


@njit(cache=True)
def _path_backlog(ptr, port_of, credits, C, path, n):
    """Flits queued ahead along a route (VC = hop index) plus one per hop."""
    total = 0
    for h in range(n - 1):
        g = ptr[path[h]] + port_of[path[h], path[h + 1]]
        total += C - credits[g, h] + 1
    return total


@njit(cache=True)
def _route(policy, nxt, dist, ptr, nbr, port_of, credits, C, R, s, t, out, tmp, state, e, pf_threshold):
    """Fill ``out`` with the router sequence for a packet; return its length."""
    out[0] = s
    if s == t:
        return 1
    if policy == 0:
        return _append_min(nxt, s, t, out, 1)
    if policy == 1:
        return _valiant(nxt, R, s, t, out, state, e)
    if policy == 4:
        if dist[s, t] == 1:
            return _valiant(nxt, R, s, t, out, state, e)
        return _compact(nxt, ptr, nbr, s, t, out, state, e)
    n_min = _append_min(nxt, s, t, out, 1)
    q_min = (C - credits[_first_port(ptr, port_of, out), 0]) / C
    if policy == 5:
        # global-knowledge oracle: whole-path backlog instead of the local queue
        n_val = _valiant(nxt, R, s, t, tmp, state, e)
        if _path_backlog(ptr, port_of, credits, C, out, n_min) <= \
                _path_backlog(ptr, port_of, credits, C, tmp, n_val):
            return n_min
    elif policy == 2:
        n_val = _valiant(nxt, R, s, t, tmp, state, e)
        q_val = (C - credits[_first_port(ptr, port_of, tmp), 0]) / C
        if q_min * (n_min - 1) <= q_val * (n_val - 1):
            return n_min
    else:
        if q_min <= pf_threshold:
            return n_min
        # compact detours are only defined for non-adjacent pairs
        if dist[s, t] == 1:
            n_val = _valiant(nxt, R, s, t, tmp, state, e)
        else:
            n_val = _compact(nxt, ptr, nbr, s, t, tmp, state, e)
    for k in range(n_val):
        out[k] = tmp[k]
    return n_val


@njit(cache=True)
def simulate(ptr, nbr, rev, port_of, nxt, dist, p, ps, V, C, D, rate, kind, perm, policy,
             pf_threshold, warmup, measure, drain, Q, audit_every, watchdog, seeds, hist_bins):
    R = ptr.shape[0] - 1
    G = ptr[R]
    E = R * p
    pkt_prob = rate / ps

    buf_pkt = np.zeros((G, V, C), dtype=np.int32)
    buf_flit = np.zeros((G, V, C), dtype=np.int32)
    buf_ready = np.zeros((G, V, C), dtype=np.int64)
    buf_head = np.zeros((G, V), dtype=np.int64)
    buf_cnt = np.zeros((G, V), dtype=np.int64)
    credits = np.full((G, V), C, dtype=np.int64)
    cred_ret = np.zeros((G, V), dtype=np.int64)
    owner = np.full((G, V), -1, dtype=np.int64)
    in_rr = np.zeros(G, dtype=np.int64)
    out_rr = np.zeros(G + E, dtype=np.int64)

    sq_time = np.zeros((E, Q), dtype=np.int64)
    sq_dst = np.zeros((E, Q), dtype=np.int64)
    sq_head = np.zeros(E, dtype=np.int64)
    sq_cnt = np.zeros(E, dtype=np.int64)
    cur_pkt = np.full(E, -1, dtype=np.int64)
    cur_sent = np.zeros(E, dtype=np.int64)

    P = G * V * C + E + 1
    pkt_route = np.zeros((P, MAX_ROUTE), dtype=np.int64)
    pkt_hops = np.zeros(P, dtype=np.int64)
    pkt_dst = np.zeros(P, dtype=np.int64)
    pkt_time = np.zeros(P, dtype=np.int64)
    free = np.arange(P - 1, -1, -1).astype(np.int64)
    n_free = P

    state = seeds.copy()
    tmp = np.zeros(MAX_ROUTE, dtype=np.int64)
    hist = np.zeros(hist_bins, dtype=np.int64)
    link_flits = np.zeros(G, dtype=np.int64)
    hop_hist = np.zeros(MAX_ROUTE, dtype=np.int64)

    maxdeg = 0
    for r in range(R):
        maxdeg = max(maxdeg, ptr[r + 1] - ptr[r])
    L = maxdeg + p
    req_out = np.zeros(L, dtype=np.int64)
    req_ovc = np.zeros(L, dtype=np.int64)
    req_vc = np.zeros(L, dtype=np.int64)
    best_in = np.zeros(L, dtype=np.int64)
    best_d = np.zeros(L, dtype=np.int64)

    gen_flits = 0
    drop_pkts = 0
    off_flits = 0
    inj_flits = 0
    del_flits = 0
    acc_flits = 0
    in_buffers = 0
    outstanding = 0
    lat_sum = 0
    lat_n = 0
    lat_min = np.int64(1) << 62
    status = STATUS_OK
    status_cycle = -1
    idle = 0
    end_measure = warmup + measure
    horizon = end_measure + drain
    now = 0

    while now < horizon:
        measuring = warmup <= now and now < end_measure

        for e in range(E):
            if _uniform(state, e) < pkt_prob:
                gen_flits += ps
                if measuring:
                    off_flits += ps
                d = _draw_dest(kind, perm, R, p, e, state)
                if sq_cnt[e] < Q:
                    slot = (sq_head[e] + sq_cnt[e]) % Q
                    sq_time[e, slot] = now
                    sq_dst[e, slot] = d
                    sq_cnt[e] += 1
                    if measuring:
                        outstanding += 1
                else:
                    drop_pkts += 1

        moved = 0
        for r in range(R):
            base = ptr[r]
            deg = ptr[r + 1] - base
            nin = deg + p
            for o in range(nin):
                best_in[o] = -1
                best_d[o] = L + 1
            for i in range(nin):
                req_out[i] = -1
                if i < deg:
                    g = base + i
                    for j in range(V):
                        v = (in_rr[g] + j) % V
                        if buf_cnt[g, v] == 0:
                            continue
                        slot = buf_head[g, v]
                        if buf_ready[g, v, slot] > now:
                            continue
                        pk = buf_pkt[g, v, slot]
                        fi = buf_flit[g, v, slot]
                        k = v + 1
                        if k == pkt_hops[pk]:
                            o = deg + pkt_dst[pk] % p
                        else:
                            o = port_of[r, pkt_route[pk, k + 1]]
                            go = base + o
                            if credits[go, k] <= 0:
                                continue
                            if fi == 0 and owner[go, k] != -1:
                                continue
                        req_out[i] = o
                        req_ovc[i] = k
                        req_vc[i] = v
                        break
                else:
                    e = r * p + (i - deg)
                    if cur_pkt[e] < 0:
                        if sq_cnt[e] == 0 or n_free == 0:
                            if n_free == 0 and sq_cnt[e] > 0:
                                status = STATUS_POOL
                            continue
                        h = sq_head[e]
                        n_free -= 1
                        pk = free[n_free]
                        pkt_time[pk] = sq_time[e, h]
                        pkt_dst[pk] = sq_dst[e, h]
                        sq_head[e] = (h + 1) % Q
                        sq_cnt[e] -= 1
                        n = _route(policy, nxt, dist, ptr, nbr, port_of, credits, C, R,
                                   r, pkt_dst[pk] // p, pkt_route[pk], tmp, state, e, pf_threshold)
                        pkt_hops[pk] = n - 1
                        cur_pkt[e] = pk
                        cur_sent[e] = 0
                    pk = cur_pkt[e]
                    if pkt_hops[pk] == 0:
                        o = deg + pkt_dst[pk] % p
                    else:
                        o = port_of[r, pkt_route[pk, 1]]
                        go = base + o
                        if credits[go, 0] <= 0:
                            continue
                        if cur_sent[e] == 0 and owner[go, 0] != -1:
                            continue
                    req_out[i] = o
                    req_ovc[i] = 0
                # output arbitration: closest requester after the pointer wins
                o = req_out[i]
                if o >= 0:
                    gout = base + o if o < deg else G + r * p + (o - deg)
                    dd = (i - out_rr[gout]) % nin
                    if dd < best_d[o]:
                        best_d[o] = dd
                        best_in[o] = i

            for o in range(nin):
                i = best_in[o]
                if i < 0:
                    continue
                moved += 1
                k = req_ovc[i]
                if i < deg:
                    g = base + i
                    v = req_vc[i]
                    slot = buf_head[g, v]
                    pk = buf_pkt[g, v, slot]
                    fi = buf_flit[g, v, slot]
                    buf_head[g, v] = (slot + 1) % C
                    buf_cnt[g, v] -= 1
                    in_buffers -= 1
                    cred_ret[rev[g], v] += 1
                    in_rr[g] = (v + 1) % V
                else:
                    e = r * p + (i - deg)
                    pk = cur_pkt[e]
                    fi = cur_sent[e]
                    cur_sent[e] += 1
                    inj_flits += 1
                    if fi == ps - 1:
                        cur_pkt[e] = -1
                if o < deg:
                    go = base + o
                    out_rr[go] = (i + 1) % nin
                    dn = rev[go]
                    slot = (buf_head[dn, k] + buf_cnt[dn, k]) % C
                    buf_pkt[dn, k, slot] = pk
                    buf_flit[dn, k, slot] = fi
                    buf_ready[dn, k, slot] = now + D
                    buf_cnt[dn, k] += 1
                    in_buffers += 1
                    credits[go, k] -= 1
                    owner[go, k] = -1 if fi == ps - 1 else pk
                    if measuring:
                        link_flits[go] += 1
                else:
                    out_rr[G + r * p + (o - deg)] = (i + 1) % nin
                    del_flits += 1
                    if measuring:
                        acc_flits += 1
                    if fi == ps - 1:
                        t0 = pkt_time[pk]
                        if warmup <= t0 and t0 < end_measure:
                            lat = now + D - t0
                            lat_sum += lat
                            lat_n += 1
                            lat_min = min(lat_min, lat)
                            hist[min(lat, hist_bins - 1)] += 1
                            hop_hist[pkt_hops[pk]] += 1
                            outstanding -= 1
                        free[n_free] = pk
                        n_free += 1

        for g in range(G):
            for v in range(V):
                if cred_ret[g, v] != 0:
                    credits[g, v] += cred_ret[g, v]
                    cred_ret[g, v] = 0

        if audit_every > 0 and now % audit_every == 0:
            total = 0
            for g in range(G):
                for v in range(V):
                    total += buf_cnt[g, v]
                    if credits[g, v] != C - buf_cnt[rev[g], v]:
                        status = STATUS_AUDIT
            queued = 0
            for e in range(E):
                queued += sq_cnt[e] * ps
                if cur_pkt[e] >= 0:
                    queued += ps - cur_sent[e]
            if total != in_buffers or inj_flits != del_flits + total \
                    or gen_flits != inj_flits + queued + drop_pkts * ps:
                status = STATUS_AUDIT
            if status != STATUS_OK:
                status_cycle = now
                break

        if moved == 0 and in_buffers > 0:
            idle += 1
            if idle > watchdog:
                status = STATUS_DEADLOCK
                status_cycle = now
                break
        else:
            idle = 0
        if status == STATUS_POOL:
            status_cycle = now
            break
        now += 1
        if now >= end_measure and outstanding == 0:
            break

    counters = np.array([gen_flits, off_flits, inj_flits, del_flits, acc_flits, lat_sum, lat_n,
                         outstanding, drop_pkts, status, status_cycle, now, lat_min, in_buffers])
    return counters, hist, link_flits, hop_hist
