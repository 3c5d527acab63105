"""Jitted simulation kernel.

Compiles the inner loops of the imitation dynamics with numba.  The RNG, the
draw order, the fitness formula, and the Fermi clamp are the same as in
``dynamics``; the test suite holds both paths to bit-identical trajectories.
The kernel additionally keeps per-node unsafe-neighbour counts so one
asynchronous step costs O(1) plus O(k) on an accepted flip.

Both evolvers record, for generation g = 0..G (row 0 is the initial state),

* the number of AU nodes overall,
* the number of AU nodes that are not zealots,
* the number of AU nodes per degree class (LOW/MEDIUM/HIGH codes 0/1/2),

and return the final RNG state so callers can keep consuming the stream.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_GOLD = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_U01 = 1.0 / 9007199254740992.0  # 2**-53
_CLAMP = 700.0


@njit(cache=True, inline="always")
def _next_u64(state):
    state = state + _GOLD
    z = state
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    z = z ^ (z >> _S31)
    return state, z


@njit(cache=True, inline="always")
def _u01(z):
    return (z >> _S11) * _U01


@njit(cache=True, inline="always")
def _below(u, n):
    j = int(u * n)
    if j >= n:
        j = n - 1
    return j


@njit(cache=True, inline="always")
def _fitness(k, n_au, s, m00, m01, m10, m11, normalized, bonus):
    if s == 0:
        f = (k - n_au) * m00 + n_au * m01
    else:
        f = (k - n_au) * m10 + n_au * m11
    if normalized:
        f = f / k
    return f + bonus


@njit(cache=True, inline="always")
def _fermi(x):
    if x >= _CLAMP:
        return 0.0
    if x <= -_CLAMP:
        return 1.0
    return 1.0 / (1.0 + math.exp(x))


@njit(cache=True)
def _count_au_neighbours(indptr, indices, strategies):
    n = strategies.shape[0]
    au_nbr = np.zeros(n, dtype=np.int64)
    for i in range(n):
        acc = 0
        for jj in range(indptr[i], indptr[i + 1]):
            if strategies[indices[jj]] == 1:
                acc += 1
        au_nbr[i] = acc
    return au_nbr


@njit(cache=True)
def _record(strategies, zealot, class_of, row, au_all_out, au_nz_out, au_cls_out):
    au_all = 0
    au_nz = 0
    c0 = 0
    c1 = 0
    c2 = 0
    for i in range(strategies.shape[0]):
        if strategies[i] == 1:
            au_all += 1
            if zealot[i] < 0:
                au_nz += 1
            c = class_of[i]
            if c == 0:
                c0 += 1
            elif c == 1:
                c1 += 1
            else:
                c2 += 1
    au_all_out[row] = au_all
    au_nz_out[row] = au_nz
    au_cls_out[row, 0] = c0
    au_cls_out[row, 1] = c1
    au_cls_out[row, 2] = c2


@njit(cache=True)
def evolve_async(indptr, indices, strategies, zealot, interference,
                 m00, m01, m10, m11, normalized, beta,
                 rng_state, generations, class_of,
                 au_all_out, au_nz_out, au_cls_out):
    n = strategies.shape[0]
    state = rng_state
    au_nbr = _count_au_neighbours(indptr, indices, strategies)
    _record(strategies, zealot, class_of, 0, au_all_out, au_nz_out, au_cls_out)
    au_all = au_all_out[0]
    au_nz = au_nz_out[0]
    c0 = au_cls_out[0, 0]
    c1 = au_cls_out[0, 1]
    c2 = au_cls_out[0, 2]
    for g in range(generations):
        for _step in range(n):
            state, z = _next_u64(state)
            a = _below(_u01(z), n)
            ka = indptr[a + 1] - indptr[a]
            state, z = _next_u64(state)
            b = indices[indptr[a] + _below(_u01(z), ka)]
            state, z = _next_u64(state)
            u = _u01(z)
            if zealot[a] >= 0:
                continue
            sa = strategies[a]
            sb = strategies[b]
            if sa == sb:
                continue
            fa = _fitness(ka, au_nbr[a], sa, m00, m01, m10, m11,
                          normalized, interference[a])
            kb = indptr[b + 1] - indptr[b]
            fb = _fitness(kb, au_nbr[b], sb, m00, m01, m10, m11,
                          normalized, interference[b])
            if u < _fermi(beta * (fa - fb)):
                strategies[a] = sb
                d = 1 if sb == 1 else -1
                for jj in range(indptr[a], indptr[a + 1]):
                    au_nbr[indices[jj]] += d
                au_all += d
                au_nz += d
                c = class_of[a]
                if c == 0:
                    c0 += d
                elif c == 1:
                    c1 += d
                else:
                    c2 += d
        au_all_out[g + 1] = au_all
        au_nz_out[g + 1] = au_nz
        au_cls_out[g + 1, 0] = c0
        au_cls_out[g + 1, 1] = c1
        au_cls_out[g + 1, 2] = c2
    return state


@njit(cache=True)
def evolve_sync(indptr, indices, strategies, zealot, interference,
                m00, m01, m10, m11, normalized, beta,
                rng_state, generations, class_of,
                au_all_out, au_nz_out, au_cls_out):
    n = strategies.shape[0]
    state = rng_state
    _record(strategies, zealot, class_of, 0, au_all_out, au_nz_out, au_cls_out)
    old = np.empty(n, dtype=np.uint8)
    for g in range(generations):
        old[:] = strategies
        au_nbr = _count_au_neighbours(indptr, indices, old)
        for i in range(n):
            ki = indptr[i + 1] - indptr[i]
            state, z = _next_u64(state)
            b = indices[indptr[i] + _below(_u01(z), ki)]
            state, z = _next_u64(state)
            u = _u01(z)
            if zealot[i] >= 0:
                continue
            si = old[i]
            sb = old[b]
            if si == sb:
                continue
            fi = _fitness(ki, au_nbr[i], si, m00, m01, m10, m11,
                          normalized, interference[i])
            kb = indptr[b + 1] - indptr[b]
            fb = _fitness(kb, au_nbr[b], sb, m00, m01, m10, m11,
                          normalized, interference[b])
            if u < _fermi(beta * (fi - fb)):
                strategies[i] = sb
        _record(strategies, zealot, class_of, g + 1,
                au_all_out, au_nz_out, au_cls_out)
    return state
