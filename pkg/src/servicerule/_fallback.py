"""Numpy implementations of the hot kernels.

Used when the compiled extension is unavailable, and as the reference the
compiled kernels are tested against: both must return identical arrays.
"""

from __future__ import annotations

import numpy as np

NAME = "python"

SR, CR, TRA, TRB, AR, FIXED = range(6)
EXHAUSTED = 2

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))
_INV53 = 1.0 / 9007199254740992.0


def mix64(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer on uint64 arrays (wrapping arithmetic)."""
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def trial_keys(seed: int, trials: np.ndarray) -> np.ndarray:
    seed_key = mix64(np.array([seed], dtype=np.uint64))
    return mix64(seed_key ^ mix64(trials.astype(np.uint64)))


def uniforms(keys: np.ndarray, point_index: int) -> np.ndarray:
    step = np.uint64(((point_index + 1) * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF)
    return (mix64(keys + step) >> _S11).astype(np.float64) * _INV53


def _next_server(rule, server, point_winner, x, y, served, k, pattern):
    """Vectorized server for point index ``served``."""
    if rule == SR:
        return point_winner
    if rule == CR:
        return 1 - point_winner
    if rule in (TRA, TRB):
        at_tie = point_winner if rule == TRB else 1 - point_winner
        return np.where(x < y, 0, np.where(y < x, 1, at_tie)).astype(np.int8)
    if rule == AR:
        return np.where(served < k + 1, 0, 1).astype(np.int8)
    return pattern[served % len(pattern)]


def schedule_outcomes(rule: int, k: int, pattern=None):
    """Play every serving schedule of a best-of-(2k+1) game.

    Bit ``i`` of the schedule mask is A's (i+1)-th serve result, bit
    ``k+1+j`` is B's (j+1)-th; a set bit means the server won. Returns
    ``(winner, length, serves_a, serves_b)``; winner is 0 (A), 1 (B), or
    ``EXHAUSTED`` when the rule asked for a serve the schedule lacks.
    """
    n = 1 << (2 * k + 1)
    masks = np.arange(n, dtype=np.int64)
    pattern = np.zeros(1, np.int8) if pattern is None else np.asarray(pattern, np.int8)
    x = np.zeros(n, np.int16)
    y = np.zeros(n, np.int16)
    server = np.full(n, pattern[0] if rule == FIXED else 0, np.int8)
    ia = np.zeros(n, np.int16)
    ib = np.zeros(n, np.int16)
    winner = np.full(n, -1, np.int8)
    length = np.zeros(n, np.int16)
    active = np.arange(n)
    for j in range(2 * k + 1):
        if active.size == 0:
            break
        srv = server[active]
        a_turn = srv == 0
        over_a = a_turn & (ia[active] > k)
        over_b = ~a_turn & (ib[active] >= k)
        over = over_a | over_b
        if over.any():
            gone = active[over]
            winner[gone] = EXHAUSTED
            length[gone] = j
            active = active[~over]
            srv, a_turn = srv[~over], a_turn[~over]
        bit = np.where(a_turn, ia[active], k + 1 + ib[active]).astype(np.int64)
        server_won = ((masks[active] >> bit) & 1).astype(bool)
        ia[active] += a_turn
        ib[active] += ~a_turn
        pw = np.where(server_won, srv, 1 - srv).astype(np.int8)
        x[active] += pw == 0
        y[active] += pw == 1
        xa, ya = x[active], y[active]
        done = (xa == k + 1) | (ya == k + 1)
        if done.any():
            fin = active[done]
            winner[fin] = np.where(xa[done] == k + 1, 0, 1)
            length[fin] = j + 1
        keep = ~done
        active = active[keep]
        server[active] = _next_server(rule, srv[keep], pw[keep], xa[keep], ya[keep], j + 1, k, pattern)
    return winner, length, ia, ib


def simulate_block(rule, points_to_win, win_by, p, q, p_seq, q_seq, pattern, first_server, seed, start, stop, cap):
    """Play trials ``start..stop-1`` point by point.

    Returns ``(winner, length, tied)``: winner 0 (A), 1 (B) or -1 when the
    game hit ``cap`` points undecided; ``tied`` marks games that reached
    (k, k) with k = points_to_win - 1.
    """
    n = stop - start
    k = points_to_win - 1
    p_seq = np.asarray(p_seq, np.float64)
    q_seq = np.asarray(q_seq, np.float64)
    pattern = np.asarray(pattern, np.int8) if len(pattern) else np.zeros(1, np.int8)
    keys = trial_keys(seed, np.arange(start, stop, dtype=np.uint64))
    x = np.zeros(n, np.int64)
    y = np.zeros(n, np.int64)
    server = np.full(n, first_server, np.int8)
    na = np.zeros(n, np.int64)
    nb = np.zeros(n, np.int64)
    winner = np.full(n, -1, np.int8)
    length = np.full(n, cap, np.int32)
    tied = np.full(n, k == 0, np.uint8)
    active = np.arange(n)
    j = 0
    while active.size and j < cap:
        u = uniforms(keys[active], j)
        srv = server[active]
        a_turn = srv == 0
        ca = na[active]
        cb = nb[active]
        ps = np.where(a_turn, p, q)
        if p_seq.size:
            use = a_turn & (ca < p_seq.size)
            ps = np.where(use, p_seq[np.minimum(ca, p_seq.size - 1)], ps)
        if q_seq.size:
            use = ~a_turn & (cb < q_seq.size)
            ps = np.where(use, q_seq[np.minimum(cb, q_seq.size - 1)], ps)
        na[active] = ca + a_turn
        nb[active] = cb + ~a_turn
        pw = np.where(u < ps, srv, 1 - srv).astype(np.int8)
        xa = x[active] + (pw == 0)
        ya = y[active] + (pw == 1)
        x[active] = xa
        y[active] = ya
        a_won = (xa >= points_to_win) & (xa - ya >= win_by)
        b_won = (ya >= points_to_win) & (ya - xa >= win_by)
        tie_now = (xa == k) & (ya == k)
        if tie_now.any():
            tied[active[tie_now]] = 1
        done = a_won | b_won
        if done.any():
            fin = active[done]
            winner[fin] = np.where(a_won[done], 0, 1)
            length[fin] = j + 1
        keep = ~done
        active = active[keep]
        server[active] = _next_server(rule, srv[keep], pw[keep], xa[keep], ya[keep], j + 1, k, pattern)
        j += 1
    return winner, length, tied
