"""Compiled depth-first search kernels.

Both kernels walk the search tree in lexicographic order of the choice
sequence and can be resumed from any *cursor*: a consistent partial
assignment whose subtree has not been explored yet.  A cursor longer than
``fixed_len`` may be backtracked past down to ``fixed_len``; positions
below ``fixed_len`` are never revisited.

Return codes are the ``FOUND``/``EXHAUSTED``/``BUDGET``/``ABORTED``
constants below.  On ``BUDGET`` the output buffer holds a cursor to resume
from; on ``FOUND`` it holds the witness.
"""

import numpy as np
from numba import njit

FOUND = 0
EXHAUSTED = 1
BUDGET = 2
ABORTED = 3

# coloring modes
MODE_AP = 0  # color c may not contain a lengths[c]-AP with difference <= maxd[c]
MODE_COLOR_AP = 1  # no k-AP whose colors form an arithmetic sequence
MODE_BLOCK = 2  # residue-coloring triples (AP / ap+ / ap-), k = 3 only

# set modes
SET_GAPS = 0  # x_1 = 1, consecutive gaps in [1, s]
SET_BLOCKS = 1  # x_i in [(i-1)s, is-1]

_POLL = 4096


@njit(cache=True, nogil=True)
def _bump(forb, nforb, j, c, s, sign):
    idx = j * s + c
    if sign > 0:
        forb[idx] += 1
        if forb[idx] == 1:
            nforb[j] += 1
            if nforb[j] == s:
                return True
    else:
        forb[idx] -= 1
        if forb[idx] == 0:
            nforb[j] -= 1
    return False


@njit(cache=True, nogil=True)
def _apply_color(mode, s, lengths, maxd, n, col, forb, nforb, p, c, sign):
    """Add (sign=+1) or retract (sign=-1) the forward forbids caused by col[p]=c.

    Only structures whose penultimate element is p are touched; their last
    element is the single unassigned one.  Returns True on a domain wipeout.
    """
    wipe = False
    if mode == MODE_AP:
        L = lengths[c]
        md = maxd[c]
        if L == 2:
            d = 1
            while p + d < n and (md == 0 or d <= md):
                if _bump(forb, nforb, p + d, c, s, sign):
                    wipe = True
                d += 1
        elif L >= 3:
            d = 1
            while p + d < n and p - (L - 2) * d >= 0 and (md == 0 or d <= md):
                ok = True
                for t in range(1, L - 1):
                    if col[p - t * d] != c:
                        ok = False
                        break
                if ok:
                    if _bump(forb, nforb, p + d, c, s, sign):
                        wipe = True
                d += 1
    elif mode == MODE_COLOR_AP:
        L = lengths[0]
        d = 1
        while p + d < n and p - (L - 2) * d >= 0:
            if L == 2:
                for cc in range(s):
                    if _bump(forb, nforb, p + d, cc, s, sign):
                        wipe = True
            else:
                delta = c - col[p - d]
                ok = True
                for t in range(2, L - 1):
                    if col[p - t * d] != c - t * delta:
                        ok = False
                        break
                if ok:
                    nc = c + delta
                    if 0 <= nc < s:
                        if _bump(forb, nforb, p + d, nc, s, sign):
                            wipe = True
            d += 1
    else:
        # p is the middle element b of a triple a < b < c
        d = 1
        while p - d >= 0:
            ca = col[p - d]
            if p + d - 1 >= n:
                break
            j = p + d
            if j < n:
                v = 2 * c - ca
                if 0 <= v < s:
                    if _bump(forb, nforb, j, v, s, sign):
                        wipe = True
            if j + 1 < n and ca < c:
                v = 2 * c - ca
                if v >= s:
                    if _bump(forb, nforb, j + 1, v - s, s, sign):
                        wipe = True
            if d >= 2 and j - 1 < n and ca > c:
                v = 2 * c - ca
                if v < 0:
                    if _bump(forb, nforb, j - 1, v + s, s, sign):
                        wipe = True
            d += 1
    return wipe


@njit(cache=True, nogil=True)
def color_search(mode, s, lengths, maxd, group_prev, first_max, n, cursor, cursor_len,
                 fixed_len, skip_cursor, node_limit, stop, my_index, out):
    """Lexicographic DFS over s-colorings of n positions.

    A color c with group_prev[c] >= 0 may only be used once color
    group_prev[c] has appeared; position 0 takes colors <= first_max.
    Returns (status, length of out, nodes expanded).
    """
    col = np.full(max(n, 1), -1, dtype=np.int64)
    forb = np.zeros(max(n, 1) * s, dtype=np.int32)
    nforb = np.zeros(max(n, 1), dtype=np.int32)
    used = np.zeros(s, dtype=np.int64)
    # colors with a 1-term requirement may never appear
    if mode == MODE_AP:
        for c in range(s):
            if lengths[c] <= 1:
                for j in range(n):
                    _bump(forb, nforb, j, c, s, 1)
    nodes = 0

    p = 0
    start = 0
    need_undo = False
    descend = True
    for q in range(min(cursor_len, n)):
        c = cursor[q]
        col[q] = c
        used[c] += 1
        dead = forb[q * s + c] > 0
        if not dead:
            dead = _apply_color(mode, s, lengths, maxd, n, col, forb, nforb, q, c, 1)
            need_undo = True
        else:
            need_undo = False
        p = q + 1
        if dead:
            p = q
            start = c + 1
            descend = False
            if not need_undo:
                used[c] -= 1
                col[q] = -1
            break
    else:
        if skip_cursor and p > 0:
            p -= 1
            start = col[p] + 1
            need_undo = True
            descend = False

    if not descend:
        if p < fixed_len:
            return EXHAUSTED, 0, nodes
        if need_undo:
            _apply_color(mode, s, lengths, maxd, n, col, forb, nforb, p, col[p], -1)
            used[col[p]] -= 1
            col[p] = -1

    while True:
        if descend:
            if p >= n:
                for q in range(n):
                    out[q] = col[q]
                return FOUND, n, nodes
            if nodes >= node_limit:
                for q in range(p):
                    out[q] = col[q]
                return BUDGET, p, nodes
            nodes += 1
            if (nodes & (_POLL - 1)) == 0 and stop[0] < my_index:
                return ABORTED, 0, nodes
            start = 0
        placed = False
        for c in range(start, s):
            if p == 0 and c > first_max:
                break
            if forb[p * s + c] > 0:
                continue
            g = group_prev[c]
            if g >= 0 and used[g] == 0:
                continue
            col[p] = c
            if _apply_color(mode, s, lengths, maxd, n, col, forb, nforb, p, c, 1):
                _apply_color(mode, s, lengths, maxd, n, col, forb, nforb, p, c, -1)
                col[p] = -1
                continue
            used[c] += 1
            placed = True
            break
        if placed:
            p += 1
            descend = True
            continue
        if p <= fixed_len:
            return EXHAUSTED, 0, nodes
        p -= 1
        c = col[p]
        _apply_color(mode, s, lengths, maxd, n, col, forb, nforb, p, c, -1)
        used[c] -= 1
        col[p] = -1
        start = c + 1
        descend = False


@njit(cache=True, nogil=True)
def _value_of(mode, s, p, prev, choice):
    if mode == SET_GAPS:
        if p == 0:
            return 1
        return prev + 1 + choice
    return p * s + choice


@njit(cache=True, nogil=True)
def _apply_value(mode, k, s, n, vals, inset, vforb, bforb, maxval, p, v, sign):
    """Forward forbids for sets: v is the penultimate term of a k-AP."""
    wipe = False
    for q in range(p):
        u = vals[q]
        d = v - u
        ok = True
        for t in range(2, k - 1):
            w = v - t * d
            if w < 0 or inset[w] == 0:
                ok = False
                break
        if not ok:
            continue
        w = v + d
        if w > maxval:
            continue
        if sign > 0:
            vforb[w] += 1
            if vforb[w] == 1 and mode == SET_BLOCKS:
                b = w // s
                bforb[b] += 1
                if bforb[b] == s and b < n:
                    wipe = True
        else:
            vforb[w] -= 1
            if vforb[w] == 0 and mode == SET_BLOCKS:
                bforb[w // s] -= 1
    return wipe


@njit(cache=True, nogil=True)
def set_search(mode, k, s, n, cursor, cursor_len, fixed_len, skip_cursor,
               node_limit, stop, my_index, out):
    """Lexicographic DFS over gap/offset choice sequences (k >= 3).

    ``cursor`` and ``out`` hold choice indices in [0, s-1], not values.
    """
    if mode == SET_GAPS:
        maxval = 1 + max(n - 1, 0) * s
    else:
        maxval = max(n, 1) * s - 1
    size = max(n, 1)
    vals = np.zeros(size, dtype=np.int64)
    choice = np.zeros(size, dtype=np.int64)
    inset = np.zeros(maxval + 2, dtype=np.int8)
    vforb = np.zeros(maxval + 2, dtype=np.int32)
    bforb = np.zeros(maxval // s + 2, dtype=np.int32)
    nodes = 0

    p = 0
    start = 0
    descend = True
    need_undo = False
    for q in range(min(cursor_len, n)):
        ch = cursor[q]
        prev = vals[q - 1] if q > 0 else 0
        v = _value_of(mode, s, q, prev, ch)
        choice[q] = ch
        vals[q] = v
        dead = vforb[v] > 0
        if not dead:
            inset[v] = 1
            dead = _apply_value(mode, k, s, n, vals, inset, vforb, bforb, maxval, q, v, 1)
            need_undo = True
        else:
            need_undo = False
        p = q + 1
        if dead:
            p = q
            start = ch + 1
            descend = False
            break
    else:
        if skip_cursor and p > 0:
            p -= 1
            start = choice[p] + 1
            need_undo = True
            descend = False

    if not descend:
        if p < fixed_len:
            return EXHAUSTED, 0, nodes
        if need_undo:
            v = vals[p]
            _apply_value(mode, k, s, n, vals, inset, vforb, bforb, maxval, p, v, -1)
            inset[v] = 0

    while True:
        if descend:
            if p >= n:
                for q in range(n):
                    out[q] = choice[q]
                return FOUND, n, nodes
            if nodes >= node_limit:
                for q in range(p):
                    out[q] = choice[q]
                return BUDGET, p, nodes
            nodes += 1
            if (nodes & (_POLL - 1)) == 0 and stop[0] < my_index:
                return ABORTED, 0, nodes
            start = 0
        nopts = 1 if (mode == SET_GAPS and p == 0) else s
        prev = vals[p - 1] if p > 0 else 0
        placed = False
        for ch in range(start, nopts):
            v = _value_of(mode, s, p, prev, ch)
            if vforb[v] > 0:
                continue
            vals[p] = v
            choice[p] = ch
            inset[v] = 1
            if _apply_value(mode, k, s, n, vals, inset, vforb, bforb, maxval, p, v, 1):
                _apply_value(mode, k, s, n, vals, inset, vforb, bforb, maxval, p, v, -1)
                inset[v] = 0
                continue
            placed = True
            break
        if placed:
            p += 1
            descend = True
            continue
        if p <= fixed_len:
            return EXHAUSTED, 0, nodes
        p -= 1
        v = vals[p]
        _apply_value(mode, k, s, n, vals, inset, vforb, bforb, maxval, p, v, -1)
        inset[v] = 0
        start = choice[p] + 1
        descend = False


@njit(cache=True, nogil=True)
def _closes_ap(k, inset, x):
    """True if x would be the last term of a k-AP inside inset."""
    d = 1
    while x - (k - 1) * d >= 1:
        ok = True
        for t in range(1, k):
            if inset[x - t * d] == 0:
                ok = False
                break
        if ok:
            return True
        d += 1
    return False


@njit(cache=True, nogil=True)
def r_search(k, n, rtab, inset, tried, state, best_set, node_limit):
    """Resumable branch and bound for the largest k-AP-free subset of [1, n].

    Positions are decided left to right, "take" before "skip".  A partial
    set of size t at position x is pruned when t + rtab[n - x + 1] cannot
    beat the incumbent, rtab[m] being the known maximum for [1, m].  All
    search state lives in ``inset``/``tried``/``state`` so a call that hits
    ``node_limit`` can be resumed by calling again.
    """
    x = state[0]
    size = state[1]
    best = state[2]
    desc = state[3]
    nodes = 0
    while True:
        if desc == 1:
            if x > n:
                if size > best:
                    best = size
                    for i in range(n + 1):
                        best_set[i] = inset[i]
                desc = 0
                x -= 1
                continue
            if size + rtab[n - x + 1] <= best:
                desc = 0
                x -= 1
                continue
            if nodes >= node_limit:
                state[0] = x
                state[1] = size
                state[2] = best
                state[3] = desc
                return BUDGET, nodes
            nodes += 1
            if _closes_ap(k, inset, x):
                tried[x] = 2
            else:
                inset[x] = 1
                size += 1
                tried[x] = 1
            x += 1
        else:
            if x <= 0:
                state[0] = 0
                state[1] = 0
                state[2] = best
                state[3] = 0
                return EXHAUSTED, nodes
            if tried[x] == 1:
                inset[x] = 0
                size -= 1
                tried[x] = 2
                x += 1
                desc = 1
            else:
                x -= 1
