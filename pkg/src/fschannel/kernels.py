"""Hot numeric kernels.

Every kernel exists twice: a numba-compiled loop (``*_jit``) and a
vectorised numpy version (``*_np``). The public name is bound to one of the
two at import time according to :data:`fschannel._accel.USE_JIT`; both stay
importable so tests and the benchmark can compare them directly.

Integer tables use ``NEG`` as minus infinity and ``BIG`` as plus infinity.
"""
import numpy as np

from ._accel import USE_JIT, njit

NEG = np.int64(-(2**62))
BIG = np.int64(2**62)


# ---------------------------------------------------------------- max-plus walks

@njit
def max_plus_table_jit(src, dst, weight, n_states, n_steps, init):
    table = np.full((n_steps + 1, n_states), NEG, dtype=np.int64)
    table[0, :] = init
    for k in range(1, n_steps + 1):
        prev = table[k - 1]
        row = table[k]
        for e in range(src.shape[0]):
            base = prev[src[e]]
            if base == NEG:
                continue
            cand = base + weight[e]
            if cand > row[dst[e]]:
                row[dst[e]] = cand
    return table


def max_plus_table_np(src, dst, weight, n_states, n_steps, init):
    table = np.full((n_steps + 1, n_states), NEG, dtype=np.int64)
    table[0, :] = init
    for k in range(1, n_steps + 1):
        base = table[k - 1, src]
        ok = base != NEG
        np.maximum.at(table[k], dst[ok], base[ok] + weight[ok])
    return table


# ------------------------------------------------------------- min-plus (gains)

@njit
def min_gain_row_jit(src, dst, gain, n_states, n_steps):
    cur = np.zeros(n_states, dtype=np.int64)
    nxt = np.empty(n_states, dtype=np.int64)
    for _ in range(n_steps):
        nxt[:] = BIG
        for e in range(src.shape[0]):
            cand = cur[dst[e]] + gain[e]
            if cand < nxt[src[e]]:
                nxt[src[e]] = cand
        cur, nxt = nxt, cur
    return cur


def min_gain_row_np(src, dst, gain, n_states, n_steps):
    cur = np.zeros(n_states, dtype=np.int64)
    for _ in range(n_steps):
        nxt = np.full(n_states, BIG, dtype=np.int64)
        np.minimum.at(nxt, src, cur[dst] + gain)
        cur = nxt
    return cur


# ------------------------------------------------------------- power iteration

@njit
def power_iterate_jit(mat, x0, tol, max_iter):
    x = x0.copy()
    lam = np.inf
    for it in range(1, max_iter + 1):
        y = mat @ x
        rq = np.dot(x, y) / np.dot(x, x)
        lo = np.inf
        hi = -np.inf
        for i in range(x.shape[0]):
            r = y[i] / x[i]
            if r < lo:
                lo = r
            if r > hi:
                hi = r
        x = y / np.max(y)
        if abs(rq - lam) < 0.5 * tol and hi - lo <= tol:
            return rq, x, it, True
        lam = rq
    return lam, x, max_iter, False


def power_iterate_np(mat, x0, tol, max_iter):
    x = x0.copy()
    lam = np.inf
    for it in range(1, max_iter + 1):
        y = mat @ x
        rq = float(x @ y) / float(x @ x)
        ratios = y / x
        x = y / y.max()
        if abs(rq - lam) < 0.5 * tol and ratios.max() - ratios.min() <= tol:
            return rq, x, it, True
        lam = rq
    return lam, x, max_iter, False


# ------------------------------------------------------------- channel outputs

@njit
def output_codes_jit(words, noise, q, erasure):
    n_words, length = words.shape
    n_noise = noise.shape[0]
    base = q + 1 if erasure else q
    out = np.empty((n_words, n_noise), dtype=np.int64)
    for i in range(n_words):
        for j in range(n_noise):
            code = 0
            for t in range(length):
                v = noise[j, t]
                if erasure:
                    y = words[i, t] if v == 0 else q
                else:
                    y = (words[i, t] + v) % q
                code = code * base + y
            out[i, j] = code
    return out


def output_codes_np(words, noise, q, erasure, chunk=256):
    n_words, length = words.shape
    base = q + 1 if erasure else q
    powers = base ** np.arange(length - 1, -1, -1, dtype=np.int64)
    out = np.empty((n_words, noise.shape[0]), dtype=np.int64)
    for lo in range(0, n_words, chunk):
        w = words[lo:lo + chunk, None, :]
        if erasure:
            y = np.where(noise[None, :, :] == 0, w, q)
        else:
            y = (w + noise[None, :, :]) % q
        out[lo:lo + chunk] = y @ powers
    return out


@njit
def collision_adjacency_jit(codes):
    n_words, n_noise = codes.shape
    flat = codes.ravel()
    order = np.argsort(flat, kind="mergesort")
    adj = np.zeros((n_words, n_words), dtype=np.bool_)
    total = flat.shape[0]
    start = 0
    while start < total:
        stop = start + 1
        code = flat[order[start]]
        while stop < total and flat[order[stop]] == code:
            stop += 1
        if stop - start > 1:
            for a in range(start, stop):
                wa = order[a] // n_noise
                for b in range(a + 1, stop):
                    wb = order[b] // n_noise
                    adj[wa, wb] = True
                    adj[wb, wa] = True
        start = stop
    for i in range(n_words):
        adj[i, i] = False
    return adj


def collision_adjacency_np(codes):
    n_words, n_noise = codes.shape
    flat = codes.ravel()
    word_of = np.repeat(np.arange(n_words), n_noise)
    order = np.argsort(flat, kind="stable")
    sorted_codes = flat[order]
    bounds = np.flatnonzero(np.diff(sorted_codes)) + 1
    starts = np.concatenate(([0], bounds))
    stops = np.concatenate((bounds, [flat.size]))
    adj = np.zeros((n_words, n_words), dtype=bool)
    for lo, hi in zip(starts[stops - starts > 1], stops[stops - starts > 1]):
        group = word_of[order[lo:hi]]
        adj[np.ix_(group, group)] = True
    np.fill_diagonal(adj, False)
    return adj


# ------------------------------------------------- difference-structured adjacency
#
# Both channel kinds are translation invariant, so x ~ x' depends only on a
# per-pair key: the support mask of x - x' (erasure) or the digit code of
# x - x' mod q (additive). ``table[key]`` says whether that key is confusable.

@njit
def difference_adjacency_jit(words, q, table, support):
    n_words, length = words.shape
    adj = np.zeros((n_words, n_words), dtype=np.bool_)
    if q == 2:
        # binary: support mask and difference code are both the XOR of word codes
        codes = np.zeros(n_words, dtype=np.int64)
        for i in range(n_words):
            for t in range(length):
                codes[i] = codes[i] * 2 + words[i, t]
        for i in range(n_words):
            for j in range(i + 1, n_words):
                if table[codes[i] ^ codes[j]]:
                    adj[i, j] = True
                    adj[j, i] = True
        return adj
    for i in range(n_words):
        for j in range(i + 1, n_words):
            key = 0
            for t in range(length):
                if support:
                    key = key * 2 + (1 if words[i, t] != words[j, t] else 0)
                else:
                    key = key * q + (words[i, t] - words[j, t]) % q
            if table[key]:
                adj[i, j] = True
                # the additive table is closed under negation, so symmetry holds
                adj[j, i] = True
    return adj


def difference_adjacency_np(words, q, table, support):
    n_words, length = words.shape
    if q == 2:
        codes = words @ (2 ** np.arange(length - 1, -1, -1, dtype=np.int64))
        adj = table[np.bitwise_xor.outer(codes, codes)]
        np.fill_diagonal(adj, False)
        return adj
    key = np.zeros((n_words, n_words), dtype=np.int64)
    for t in range(length):
        col = words[:, t]
        if support:
            key = key * 2 + (col[:, None] != col[None, :])
        else:
            key = key * q + (col[:, None] - col[None, :]) % q
    adj = table[key]
    np.fill_diagonal(adj, False)
    return adj


@njit
def difference_table_jit(noise, q):
    n_noise, length = noise.shape
    table = np.zeros(q ** length, dtype=np.bool_)
    if q == 2:
        codes = np.zeros(n_noise, dtype=np.int64)
        for a in range(n_noise):
            for t in range(length):
                codes[a] = codes[a] * 2 + noise[a, t]
        for a in range(n_noise):
            for b in range(a, n_noise):
                table[codes[a] ^ codes[b]] = True
        return table
    for a in range(n_noise):
        for b in range(n_noise):
            key = 0
            for t in range(length):
                key = key * q + (noise[a, t] - noise[b, t]) % q
            table[key] = True
    return table


def difference_table_np(noise, q, chunk=512):
    n_noise, length = noise.shape
    table = np.zeros(q ** length, dtype=bool)
    powers = q ** np.arange(length - 1, -1, -1, dtype=np.int64)
    if q == 2:
        codes = noise @ powers
        for lo in range(0, n_noise, chunk):
            table[(codes[lo:lo + chunk, None] ^ codes[None, :]).ravel()] = True
        return table
    for lo in range(0, n_noise, chunk):
        diff = (noise[lo:lo + chunk, None, :] - noise[None, :, :]) % q
        table[(diff @ powers).ravel()] = True
    return table


# ------------------------------------------------------ exact independent set
#
# Branch and bound over <= 64 vertices held as bitsets. Branches include-first
# on the lowest candidate and prunes with a greedy clique cover, so the first
# set found at the maximum size is the lexicographically first one. Returns
# the bitset of the best set strictly larger than ``lower`` (0 if none).

@njit
def _lowest_index(x):
    i = 0
    while (x >> np.uint64(i)) & np.uint64(1) == 0:
        i += 1
    return i


@njit
def max_independent_set_jit(nbrs, n_vertices, lower):
    one = np.uint64(1)
    zero = np.uint64(0)
    if n_vertices == 64:
        full = ~zero
    else:
        full = (one << np.uint64(n_vertices)) - one
    depth_cap = 2 * n_vertices + 2
    st_cand = np.empty(depth_cap, dtype=np.uint64)
    st_chosen = np.empty(depth_cap, dtype=np.uint64)
    st_size = np.empty(depth_cap, dtype=np.int64)
    cliques = np.empty(max(n_vertices, 1), dtype=np.uint64)
    best_size = lower
    best = zero
    st_cand[0] = full
    st_chosen[0] = zero
    st_size[0] = 0
    top = 1
    while top > 0:
        top -= 1
        cand = st_cand[top]
        chosen = st_chosen[top]
        size = st_size[top]
        if cand == zero:
            if size > best_size:
                best_size = size
                best = chosen
            continue
        k = 0
        rest = cand
        while rest != zero:
            low = rest & (~rest + one)
            v = _lowest_index(low)
            rest ^= low
            placed = False
            for i in range(k):
                if cliques[i] & ~nbrs[v] == zero:
                    cliques[i] |= low
                    placed = True
                    break
            if not placed:
                cliques[k] = low
                k += 1
        if size + k <= best_size:
            continue
        low = cand & (~cand + one)
        v = _lowest_index(low)
        st_cand[top] = cand & ~low
        st_chosen[top] = chosen
        st_size[top] = size
        st_cand[top + 1] = cand & ~nbrs[v] & ~low
        st_chosen[top + 1] = chosen | low
        st_size[top + 1] = size + 1
        top += 2
    return best


def _clique_cover_size(cand, nbrs):
    cliques = []
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        for i, cl in enumerate(cliques):
            if cl & ~nbrs[v] == 0:
                cliques[i] = cl | low
                break
        else:
            cliques.append(low)
    return len(cliques)


def max_independent_set_py(nbrs, n_vertices, lower):
    nbrs = [int(x) for x in nbrs]
    best = [lower, 0]

    def expand(cand, chosen, size):
        if not cand:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + _clique_cover_size(cand, nbrs) <= best[0]:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        expand(cand & ~nbrs[v] & ~low, chosen | low, size + 1)
        expand(cand & ~low, chosen, size)

    expand((1 << n_vertices) - 1, 0, 0)
    return np.uint64(best[1])


if USE_JIT:
    max_plus_table = max_plus_table_jit
    min_gain_row = min_gain_row_jit
    power_iterate = power_iterate_jit
    output_codes = output_codes_jit
    collision_adjacency = collision_adjacency_jit
    difference_adjacency = difference_adjacency_jit
    difference_table = difference_table_jit
    max_independent_set = max_independent_set_jit
else:
    max_plus_table = max_plus_table_np
    min_gain_row = min_gain_row_np
    power_iterate = power_iterate_np
    output_codes = output_codes_np
    collision_adjacency = collision_adjacency_np
    difference_adjacency = difference_adjacency_np
    difference_table = difference_table_np
    max_independent_set = max_independent_set_py

BACKEND = "numba" if USE_JIT else "numpy"
