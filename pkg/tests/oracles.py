"""Independent brute-force oracles used by the tests.

None of these call into the package's algorithms; they work from the raw
edge list so they can catch mistakes in the DP, spectral and search code.
"""
import itertools
import math
from fractions import Fraction

import numpy as np

from fschannel.graph import ChannelMachine, Kind


def simple_cycles(machine):
    """Every simple cycle as a list of edges (parallel edges give distinct cycles)."""
    out = {s: [] for s in range(machine.num_states)}
    for e in machine.edges:
        out[e[0]].append(e)
    cycles = []

    def dfs(start, node, path, seen):
        for e in out[node]:
            nxt = e[1]
            if nxt == start:
                cycles.append(path + [e])
            elif nxt > start and nxt not in seen:
                seen.add(nxt)
                dfs(start, nxt, path + [e], seen)
                seen.discard(nxt)

    for s in range(machine.num_states):
        dfs(s, s, [], {s})
    return cycles


def max_cycle_ratio(machine):
    return max(Fraction(sum(1 for e in c if e[2] != 0), len(c)) for c in simple_cycles(machine))


def walks(machine, s0, n):
    """Every length-n walk from s0 as a tuple of edges."""
    out = {s: [] for s in range(machine.num_states)}
    for e in machine.edges:
        out[e[0]].append(e)
    result = []

    def rec(node, path):
        if len(path) == n:
            result.append(tuple(path))
            return
        for e in out[node]:
            path.append(e)
            rec(e[1], path)
            path.pop()

    rec(s0, [])
    return result


def state_walk_count(adj, s0, n):
    """Count state sequences of length n+1 from s0 by plain recursion."""
    size = len(adj)

    def rec(node, k):
        if k == 0:
            return 1
        return sum(rec(t, k - 1) for t in range(size) if adj[node][t])

    return rec(s0, n)


def max_errors_bruteforce(machine, s0, n):
    return max(sum(1 for e in w if e[2] != 0) for w in walks(machine, s0, n))


def charpoly_exact(mat):
    """Characteristic polynomial coefficients (highest first) by Faddeev-LeVerrier."""
    size = len(mat)
    a = [[Fraction(int(x)) for x in row] for row in mat]
    coeffs = [Fraction(1)]
    m = [[Fraction(0)] * size for _ in range(size)]
    for k in range(1, size + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        am = [[sum(a[i][l] * m[l][j] for l in range(size)) for j in range(size)]
              for i in range(size)]
        m = [[am[i][j] + (coeffs[-1] if i == j else 0) for j in range(size)]
             for i in range(size)]
        amk = [[sum(a[i][l] * m[l][j] for l in range(size)) for j in range(size)]
               for i in range(size)]
        c = -sum(amk[i][i] for i in range(size)) / k
        coeffs.append(c)
    return [float(c) for c in coeffs]


def perron_by_roots(mat):
    roots = np.roots(charpoly_exact(mat))
    return float(max(abs(r) for r in roots))


def output_union_bruteforce(machine, word):
    outs = set()
    for s0 in range(machine.num_states):
        for w in walks(machine, s0, len(word)):
            y = []
            for x, e in zip(word, w):
                v = e[2]
                if machine.kind is Kind.ERASURE:
                    y.append(x if v == 0 else "*")
                else:
                    y.append((x + v) % machine.q)
            outs.add(tuple(y))
    return outs


def confusability_bruteforce(machine, n):
    words = list(itertools.product(range(machine.q), repeat=n))
    outs = [output_union_bruteforce(machine, w) for w in words]
    size = len(words)
    adj = np.zeros((size, size), dtype=bool)
    for i in range(size):
        for j in range(i + 1, size):
            if outs[i] & outs[j]:
                adj[i, j] = adj[j, i] = True
    return words, adj


def max_independent_bruteforce(adj):
    size = len(adj)
    best = 0
    for mask in range(1 << size):
        members = [i for i in range(size) if mask >> i & 1]
        if len(members) <= best:
            continue
        if all(not adj[i][j] for i, j in itertools.combinations(members, 2)):
            best = len(members)
    return best


def hamming_volume(n, r, q):
    return sum(math.comb(n, i) * (q - 1) ** i for i in range(min(n, r) + 1))


def ring_machine(num_states, extras, q=2, kind=Kind.ERASURE):
    """Cycle 0 -> 1 -> ... -> 0 on noise 0 plus ``extras`` (from, to, noise != 0)."""
    edges = [(i, (i + 1) % num_states, 0) for i in range(num_states)]
    return ChannelMachine(num_states, tuple(edges) + tuple(extras), q, kind)
