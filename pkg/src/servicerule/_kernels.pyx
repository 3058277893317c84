# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; same contracts and outputs as ``_fallback``."""

import numpy as np

from libc.stdint cimport int8_t, int16_t, int32_t, int64_t, uint8_t, uint64_t

NAME = "cython"

cdef enum:
    SR = 0
    CR = 1
    TRA = 2
    TRB = 3
    AR = 4
    FIXED = 5
    C_EXHAUSTED = 2

EXHAUSTED = C_EXHAUSTED

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double uniform(uint64_t key, int64_t j) noexcept nogil:
    return <double>(mix64(key + <uint64_t>(j + 1) * GOLDEN) >> 11) * (1.0 / 9007199254740992.0)


cdef inline int8_t next_server(int rule, int8_t point_winner, int64_t x, int64_t y,
                               int64_t served, int64_t k, const int8_t[::1] pattern) noexcept nogil:
    if rule == SR:
        return point_winner
    if rule == CR:
        return 1 - point_winner
    if rule == TRA or rule == TRB:
        if x < y:
            return 0
        if y < x:
            return 1
        return point_winner if rule == TRB else 1 - point_winner
    if rule == AR:
        return 0 if served < k + 1 else 1
    return pattern[served % pattern.shape[0]]


def schedule_outcomes(int rule, int k, pattern=None):
    cdef int64_t n = 1 << (2 * k + 1)
    cdef const int8_t[::1] pat = np.zeros(1, np.int8) if pattern is None else np.ascontiguousarray(pattern, np.int8)
    winner_arr = np.empty(n, np.int8)
    length_arr = np.empty(n, np.int16)
    sa_arr = np.empty(n, np.int16)
    sb_arr = np.empty(n, np.int16)
    cdef int8_t[::1] winner = winner_arr
    cdef int16_t[::1] length = length_arr
    cdef int16_t[::1] sa = sa_arr
    cdef int16_t[::1] sb = sb_arr
    cdef int64_t mask, j, x, y, ia, ib, bit
    cdef int8_t server, pw
    cdef bint won
    with nogil:
        for mask in range(n):
            x = 0
            y = 0
            ia = 0
            ib = 0
            server = pat[0] if rule == FIXED else 0
            winner[mask] = -1
            for j in range(2 * k + 1):
                if server == 0:
                    if ia > k:
                        winner[mask] = C_EXHAUSTED
                        length[mask] = j
                        break
                    bit = ia
                    ia += 1
                else:
                    if ib >= k:
                        winner[mask] = C_EXHAUSTED
                        length[mask] = j
                        break
                    bit = k + 1 + ib
                    ib += 1
                won = (mask >> bit) & 1
                pw = server if won else 1 - server
                if pw == 0:
                    x += 1
                else:
                    y += 1
                if x == k + 1 or y == k + 1:
                    winner[mask] = 0 if x == k + 1 else 1
                    length[mask] = j + 1
                    break
                server = next_server(rule, pw, x, y, j + 1, k, pat)
            sa[mask] = ia
            sb[mask] = ib
    return winner_arr, length_arr, sa_arr, sb_arr


def simulate_block(int rule, int64_t points_to_win, int64_t win_by, double p, double q,
                   p_seq, q_seq, pattern, int first_server, uint64_t seed,
                   int64_t start, int64_t stop, int64_t cap):
    cdef int64_t n = stop - start
    cdef int64_t k = points_to_win - 1
    cdef const double[::1] ps_arr = np.ascontiguousarray(p_seq, np.float64)
    cdef const double[::1] qs_arr = np.ascontiguousarray(q_seq, np.float64)
    cdef const int8_t[::1] pat = np.ascontiguousarray(pattern, np.int8) if len(pattern) else np.zeros(1, np.int8)
    cdef int64_t lp = ps_arr.shape[0]
    cdef int64_t lq = qs_arr.shape[0]
    winner_arr = np.empty(n, np.int8)
    length_arr = np.empty(n, np.int32)
    tied_arr = np.empty(n, np.uint8)
    cdef int8_t[::1] winner = winner_arr
    cdef int32_t[::1] length = length_arr
    cdef uint8_t[::1] tied = tied_arr
    cdef uint64_t seed_key = mix64(seed)
    cdef uint64_t key
    cdef int64_t i, j, x, y, na, nb
    cdef int8_t server, pw
    cdef double prob
    with nogil:
        for i in range(n):
            key = mix64(seed_key ^ mix64(<uint64_t>(start + i)))
            x = 0
            y = 0
            na = 0
            nb = 0
            server = first_server
            winner[i] = -1
            length[i] = cap
            tied[i] = k == 0
            for j in range(cap):
                if server == 0:
                    prob = ps_arr[na] if na < lp else p
                    na += 1
                else:
                    prob = qs_arr[nb] if nb < lq else q
                    nb += 1
                pw = server if uniform(key, j) < prob else 1 - server
                if pw == 0:
                    x += 1
                else:
                    y += 1
                if x >= points_to_win and x - y >= win_by:
                    winner[i] = 0
                    length[i] = j + 1
                    break
                if y >= points_to_win and y - x >= win_by:
                    winner[i] = 1
                    length[i] = j + 1
                    break
                if x == k and y == k:
                    tied[i] = 1
                server = next_server(rule, pw, x, y, j + 1, k, pat)
    return winner_arr, length_arr, tied_arr
