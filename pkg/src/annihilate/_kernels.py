"""Jitted trajectory kernels.

Same mechanics and same splitmix64 draw order as the reference engine in
``state``; the lockstep-equivalence tests in ``tests/test_dynamics.py``
compare full recorded trajectories between the two.  Keep both in sync.

Colors: red=0, blue=1.  Sites 0..2n-1; star core is site 2n.
"""

from __future__ import annotations

import numpy as np
from numba import int64, njit, uint64

U64 = np.uint64
_GOLDEN = U64(0x9E3779B97F4A7C15)
_MIX1 = U64(0xBF58476D1CE4E5B9)
_MIX2 = U64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / 9007199254740992.0


@njit(cache=True, nogil=True, inline="always")
def _next64(state):
    state[0] = state[0] + _GOLDEN
    z = state[0]
    z = (z ^ (z >> U64(30))) * _MIX1
    z = (z ^ (z >> U64(27))) * _MIX2
    return z ^ (z >> U64(31))


@njit(cache=True, nogil=True, inline="always")
def _u01(state):
    return (_next64(state) >> U64(11)) * _INV_2_53


@njit(cache=True, nogil=True, inline="always")
def _below(state, m):
    # uniform in [0, m); m == 1 consumes no draw (mirrors SplitMix64.below)
    if m <= 1:
        return int64(0)
    mask = uint64(m - 1)
    mask |= mask >> U64(1)
    mask |= mask >> U64(2)
    mask |= mask >> U64(4)
    mask |= mask >> U64(8)
    mask |= mask >> U64(16)
    mask |= mask >> U64(32)
    while True:
        v = _next64(state) & mask
        if v < uint64(m):
            return int64(v)


@njit(cache=True, nogil=True)
def _rng_selftest(seed, count):
    """Expose the raw stream so tests can match it against the Python twin."""
    state = np.empty(1, np.uint64)
    state[0] = U64(seed)
    out = np.empty(count, np.uint64)
    for i in range(count):
        out[i] = _next64(state)
    return out


@njit(cache=True, nogil=True)
def _rng_below_selftest(seed, m, count):
    state = np.empty(1, np.uint64)
    state[0] = U64(seed)
    out = np.empty(count, np.int64)
    for i in range(count):
        out[i] = _below(state, m)
    return out


# -- configuration surgery (same structure as state.Configuration) --------


@njit(cache=True, nogil=True, inline="always")
def _detach(c, k, pos, nxt, prv, head, scnt, scol):
    s = pos[c, k]
    pk = prv[c, k]
    nk = nxt[c, k]
    if pk == -1:
        head[s] = nk
    else:
        nxt[c, pk] = nk
    if nk != -1:
        prv[c, nk] = pk
    scnt[s] -= 1
    if scnt[s] == 0:
        scol[s] = -1


@njit(cache=True, nogil=True, inline="always")
def _attach(c, k, site, pos, nxt, prv, head, scnt, scol):
    pos[c, k] = site
    h = head[site]
    nxt[c, k] = h
    prv[c, k] = -1
    if h != -1:
        prv[c, h] = k
    head[site] = k
    scol[site] = c
    scnt[site] += 1


@njit(cache=True, nogil=True, inline="always")
def _swap_remove(c, k, cnt, pos, nxt, prv, head):
    last = cnt[c] - 1
    if k != last:
        pos[c, k] = pos[c, last]
        nxt[c, k] = nxt[c, last]
        prv[c, k] = prv[c, last]
        pl = prv[c, k]
        if pl == -1:
            head[pos[c, k]] = k
        else:
            nxt[c, pl] = k
        nl = nxt[c, k]
        if nl != -1:
            prv[c, nl] = k
    cnt[c] = last


@njit(cache=True, nogil=True)
def _setup(state, n, star, two_type, shuffle, pos, nxt, prv, cnt, head, scnt, scol):
    """One particle per vertex/leaf; two-type colors by parity or shuffled."""
    for s in range(2 * n):
        if two_type:
            c = s & 1  # alternating: even red, odd blue
        else:
            c = 0
        scol[s] = c
    if two_type and shuffle:
        for i in range(2 * n - 1, 0, -1):
            j = _below(state, i + 1)
            tmp = scol[i]
            scol[i] = scol[j]
            scol[j] = tmp
    for s in range(2 * n):
        c = scol[s]
        k = cnt[c]
        cnt[c] = k + 1
        pos[c, k] = s
        nxt[c, k] = -1
        prv[c, k] = -1
        head[s] = k
        scnt[s] = 1


@njit(cache=True, nogil=True, inline="always")
def _step(state, n, star, two_type, p, pos, nxt, prv, cnt, head, scnt, scol):
    """One sampling step.  Returns (z, collided, from_core, occ_at_dest).

    z is +1/-1 for blue/red (0 one-type); occ_at_dest is the destination
    count after a non-colliding move (0 otherwise), for max-occupancy
    tracking.
    """
    if two_type:
        if _u01(state) < p:
            c = 1
            z = 1
        else:
            c = 0
            z = -1
    else:
        c = 0
        z = 0
    k = _below(state, cnt[c])
    s0 = pos[c, k]
    core = 2 * n
    if star:
        from_core = s0 == core
        d = _below(state, 2 * n) if from_core else core
    else:
        from_core = False
        d = _below(state, 2 * n)
        if d == s0:
            return z, False, False, int64(0)
    collided = scnt[d] > 0 and ((not two_type) or scol[d] != c)
    if collided:
        cr = scol[d]
        j = head[d]
        _detach(c, k, pos, nxt, prv, head, scnt, scol)
        _detach(cr, j, pos, nxt, prv, head, scnt, scol)
        if cr == c:  # one-type: both removals from one registry
            hi = k if k > j else j
            lo = j if k > j else k
            _swap_remove(cr, hi, cnt, pos, nxt, prv, head)
            _swap_remove(cr, lo, cnt, pos, nxt, prv, head)
        else:
            _swap_remove(c, k, cnt, pos, nxt, prv, head)
            _swap_remove(cr, j, cnt, pos, nxt, prv, head)
        return z, True, from_core, int64(0)
    _detach(c, k, pos, nxt, prv, head, scnt, scol)
    _attach(c, k, d, pos, nxt, prv, head, scnt, scol)
    return z, False, from_core, int64(scnt[d])


@njit(cache=True, nogil=True)
def run_summary(seed, n, star, two_type, p, shuffle, max_steps):
    """Trajectory without series. Returns
    (steps, reached, final_m, collisions, max_occ, m_at_2n, w_at_2n)."""
    nsites = 2 * n + 1 if star else 2 * n
    pos = np.empty((2, 2 * n), np.int32)
    nxt = np.empty((2, 2 * n), np.int32)
    prv = np.empty((2, 2 * n), np.int32)
    cnt = np.zeros(2, np.int64)
    head = np.full(nsites, -1, np.int32)
    scnt = np.zeros(nsites, np.int32)
    scol = np.full(nsites, -1, np.int8)
    state = np.empty(1, np.uint64)
    state[0] = U64(seed)
    _setup(state, n, star, two_type, shuffle, pos, nxt, prv, cnt, head, scnt, scol)
    a = 2 * n
    t = int64(0)
    m = int64(0)
    w = int64(0)
    colls = int64(0)
    maxocc = int64(1)
    m2n = int64(0)
    w2n = int64(0)
    while a > 0 and t < max_steps:
        t += 1
        z, collided, from_core, occ = _step(
            state, n, star, two_type, p, pos, nxt, prv, cnt, head, scnt, scol
        )
        if collided:
            a -= 2
            colls += 1
        elif from_core:
            m += 1
        if occ > maxocc:
            maxocc = occ
        w += z
        if t == 2 * n or (a == 0 and t < 2 * n):
            m2n = m
            w2n = w
    if t < 2 * n:  # max_steps hit before 2n
        m2n = m
        w2n = w
    return t, a == 0, m, colls, maxocc, m2n, w2n


@njit(cache=True, nogil=True)
def run_batch(seeds, n, star, two_type, p, shuffle, max_steps,
              steps, reached, final_m, collisions, max_occ, m_at_2n, w_at_2n):
    """Fill per-trial summary arrays; trial i depends only on seeds[i]."""
    for i in range(seeds.shape[0]):
        t, ok, m, c, mo, m2, w2 = run_summary(
            seeds[i], n, star, two_type, p, shuffle, max_steps
        )
        steps[i] = t
        reached[i] = 1 if ok else 0
        final_m[i] = m
        collisions[i] = c
        max_occ[i] = mo
        m_at_2n[i] = m2
        w_at_2n[i] = w2


@njit(cache=True, nogil=True)
def _grow_i32(arr, need):
    if need <= arr.shape[0]:
        return arr
    cap = arr.shape[0]
    while cap < need:
        cap *= 2
    out = np.empty(cap, np.int32)
    out[: arr.shape[0]] = arr
    return out


@njit(cache=True, nogil=True)
def _grow_i8(arr, need):
    if need <= arr.shape[0]:
        return arr
    cap = arr.shape[0]
    while cap < need:
        cap *= 2
    out = np.empty(cap, np.int8)
    out[: arr.shape[0]] = arr
    return out


@njit(cache=True, nogil=True)
def run_full(seed, n, star, two_type, p, shuffle, max_steps):
    """Trajectory with per-step series.  Returns the summary tuple plus
    (a_series, c_series, m_series, signs, collided_flags, from_core_flags);
    series have length steps+1, per-step flags length steps."""
    nsites = 2 * n + 1 if star else 2 * n
    pos = np.empty((2, 2 * n), np.int32)
    nxt = np.empty((2, 2 * n), np.int32)
    prv = np.empty((2, 2 * n), np.int32)
    cnt = np.zeros(2, np.int64)
    head = np.full(nsites, -1, np.int32)
    scnt = np.zeros(nsites, np.int32)
    scol = np.full(nsites, -1, np.int8)
    state = np.empty(1, np.uint64)
    state[0] = U64(seed)
    _setup(state, n, star, two_type, shuffle, pos, nxt, prv, cnt, head, scnt, scol)
    cap = 4 * n + 1024
    a_series = np.empty(cap, np.int32)
    c_series = np.empty(cap, np.int32)
    m_series = np.empty(cap, np.int32)
    signs = np.empty(cap, np.int8)
    coll_flags = np.empty(cap, np.int8)
    core_flags = np.empty(cap, np.int8)
    core = 2 * n
    a = 2 * n
    t = int64(0)
    m = int64(0)
    w = int64(0)
    colls = int64(0)
    maxocc = int64(1)
    m2n = int64(0)
    w2n = int64(0)
    a_series[0] = a
    c_series[0] = 0
    m_series[0] = 0
    while a > 0 and t < max_steps:
        t += 1
        if t + 1 > a_series.shape[0]:
            a_series = _grow_i32(a_series, t + 1)
            c_series = _grow_i32(c_series, t + 1)
            m_series = _grow_i32(m_series, t + 1)
            signs = _grow_i8(signs, t + 1)
            coll_flags = _grow_i8(coll_flags, t + 1)
            core_flags = _grow_i8(core_flags, t + 1)
        z, collided, from_core, occ = _step(
            state, n, star, two_type, p, pos, nxt, prv, cnt, head, scnt, scol
        )
        if collided:
            a -= 2
            colls += 1
        elif from_core:
            m += 1
        if occ > maxocc:
            maxocc = occ
        w += z
        if t == 2 * n or (a == 0 and t < 2 * n):
            m2n = m
            w2n = w
        a_series[t] = a
        c_series[t] = scnt[core] if star else 0
        m_series[t] = m
        signs[t - 1] = z
        coll_flags[t - 1] = 1 if collided else 0
        core_flags[t - 1] = 1 if from_core else 0
    if t < 2 * n:
        m2n = m
        w2n = w
    return (
        t, a == 0, m, colls, maxocc, m2n, w2n,
        a_series[: t + 1].copy(),
        c_series[: t + 1].copy(),
        m_series[: t + 1].copy(),
        signs[:t].copy(),
        coll_flags[:t].copy(),
        core_flags[:t].copy(),
    )
