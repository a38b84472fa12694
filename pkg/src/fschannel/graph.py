"""Channel state machines and the graph analyses run on them.

A channel machine is a directed multigraph whose vertices are channel states
and whose edges carry the noise symbol emitted on that transition. Noise 0
means an error-free use of the channel; any other symbol is an "error edge"
(an erasure for erasure channels, an additive offset for additive ones).
"""
from __future__ import annotations

import enum
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from . import kernels
from .errors import (
    DanglingState,
    DuplicateNoiseEdge,
    InvalidMachine,
    NoConvergence,
    NoiseOutOfRange,
    NotIrreducible,
    NotStronglyConnected,
    SizeCap,
)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10**6
DEFAULT_SEQUENCE_CAP = 10**7


class Kind(str, enum.Enum):
    ERASURE = "erasure"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class ChannelMachine:
    """Finite-state noise machine of a channel.

    ``edges`` holds ``(from_state, to_state, noise)`` triples; state indices
    run over ``range(num_states)``. ``names`` are display labels and
    ``family`` is the family spec string the machine was built from, if any.
    """

    num_states: int
    edges: tuple
    q: int
    kind: Kind
    names: tuple = None
    family: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        edges = tuple((int(a), int(b), int(v)) for a, b, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.num_states < 1:
            raise InvalidMachine("a machine needs at least one state")
        if self.q < 2:
            raise InvalidMachine(f"alphabet size must be >= 2, got {self.q}")
        for a, b, _ in edges:
            if not (0 <= a < self.num_states and 0 <= b < self.num_states):
                raise InvalidMachine(f"edge ({a}, {b}) references an unknown state")
        if self.names is None:
            names = tuple(f"s{i + 1}" for i in range(self.num_states))
        else:
            names = tuple(str(n) for n in self.names)
            if len(names) != self.num_states or len(set(names)) != len(names):
                raise InvalidMachine("state names must be unique, one per state")
        object.__setattr__(self, "names", names)

    @property
    def max_noise(self):
        return 1 if self.kind is Kind.ERASURE else self.q - 1

    @cached_property
    def out_edges(self):
        """``out_edges[s]`` maps noise symbol -> target state."""
        table = [dict() for _ in range(self.num_states)]
        for a, b, v in self.edges:
            table[a].setdefault(v, b)
        return tuple(table)

    @cached_property
    def arrays(self):
        """``(src, dst, noise)`` as int64 arrays, in edge order."""
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty.copy(), empty.copy()
        arr = np.asarray(self.edges, dtype=np.int64)
        return (np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1]),
                np.ascontiguousarray(arr[:, 2]))

    @property
    def error_weights(self):
        return (self.arrays[2] != 0).astype(np.int64)

    def step(self, state, noise):
        """Next state after emitting ``noise`` from ``state`` (KeyError if absent)."""
        return self.out_edges[state][noise]


@dataclass(frozen=True)
class CycleStats:
    tau: Fraction
    witness_cycle: tuple

    @property
    def length(self):
        return len(self.witness_cycle)

    @property
    def errors(self):
        return sum(1 for _, _, v in self.witness_cycle if v != 0)


# ------------------------------------------------------------------ validation

def _reaches_all(num_states, succ):
    seen = {0}
    todo = deque([0])
    while todo:
        s = todo.popleft()
        for t in succ[s]:
            if t not in seen:
                seen.add(t)
                todo.append(t)
    return len(seen) == num_states


def is_strongly_connected(num_states, pairs):
    fwd = [set() for _ in range(num_states)]
    rev = [set() for _ in range(num_states)]
    for a, b in pairs:
        fwd[a].add(b)
        rev[b].add(a)
    return _reaches_all(num_states, fwd) and _reaches_all(num_states, rev)


def validate(machine: ChannelMachine) -> ChannelMachine:
    """Check every machine invariant; return the machine or raise.

    Raises NoiseOutOfRange, DuplicateNoiseEdge, DanglingState or
    NotStronglyConnected (checked in that order).
    """
    seen = set()
    for a, b, v in machine.edges:
        if not 0 <= v <= machine.max_noise:
            raise NoiseOutOfRange(
                f"noise {v} on edge {machine.names[a]}->{machine.names[b]} is outside "
                f"0..{machine.max_noise} for a {machine.kind.value} channel")
        if (a, v) in seen:
            raise DuplicateNoiseEdge(
                f"state {machine.names[a]} has two outgoing edges with noise {v}")
        seen.add((a, v))
    sources = {a for a, _, _ in machine.edges}
    for s in range(machine.num_states):
        if s not in sources:
            raise DanglingState(f"state {machine.names[s]} has no outgoing edge")
    if not is_strongly_connected(machine.num_states, [(a, b) for a, b, _ in machine.edges]):
        raise NotStronglyConnected("state graph is not strongly connected")
    return machine


# ------------------------------------------------------------------ spectra

def adjacency(machine: ChannelMachine) -> np.ndarray:
    """0/1 state-transition matrix; parallel edges collapse to a single 1."""
    adj = np.zeros((machine.num_states, machine.num_states), dtype=np.int64)
    for a, b, _ in machine.edges:
        adj[a, b] = 1
    return adj


def edge_multiplicity(machine: ChannelMachine) -> np.ndarray:
    """Like :func:`adjacency` but counting parallel edges."""
    mult = np.zeros((machine.num_states, machine.num_states), dtype=np.int64)
    for a, b, _ in machine.edges:
        mult[a, b] += 1
    return mult


def perron_eigenvalue(adj, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> float:
    """Perron root of an irreducible nonnegative matrix.

    Power iteration runs on ``adj + I``, which is primitive whenever ``adj``
    is irreducible, so periodic graphs converge too. Iteration stops once
    successive Rayleigh quotients agree to ``tol/2`` and the Collatz-Wielandt
    bracket ``min(Ax/x) <= rho <= max(Ax/x)`` is narrower than ``tol``; the
    bracket makes the returned value accurate to ``tol``.
    """
    mat = np.asarray(adj, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
        raise ValueError("adjacency must be a non-empty square matrix")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if (mat < 0).any():
        raise NotIrreducible("matrix has negative entries")
    pairs = list(zip(*np.nonzero(mat)))
    if not is_strongly_connected(mat.shape[0], pairs):
        raise NotIrreducible("matrix is reducible (its graph is not strongly connected)")
    shifted = np.ascontiguousarray(mat + np.eye(mat.shape[0]))
    x0 = np.ones(mat.shape[0])
    lam, _, iters, converged = kernels.power_iterate(shifted, x0, float(tol), int(max_iter))
    if not converged:
        raise NoConvergence(f"power iteration did not converge in {iters} iterations")
    return float(lam) - 1.0


def topological_entropy(machine: ChannelMachine, tol=DEFAULT_TOL) -> float:
    """``log_q`` of the Perron root of the state-transition matrix."""
    lam = perron_eigenvalue(adjacency(machine), tol=tol)
    return max(0.0, math.log(lam) / math.log(machine.q))


# ------------------------------------------------------------------ cycle ratio

def _karp_max_mean(machine):
    n = machine.num_states
    src, dst, _ = machine.arrays
    table = kernels.max_plus_table(src, dst, machine.error_weights, n, n,
                                   np.zeros(n, dtype=np.int64))
    best = None
    for v in range(n):
        if table[n, v] == kernels.NEG:
            continue
        worst = None
        for k in range(n):
            if table[k, v] == kernels.NEG:
                continue
            r = Fraction(int(table[n, v] - table[k, v]), n - k)
            if worst is None or r < worst:
                worst = r
        if worst is not None and (best is None or worst > best):
            best = worst
    return best


def _critical_edges(machine, tau):
    # Edges lying on some cycle of mean tau: tight under longest-path
    # potentials for weights den*w - num (no positive cycles exist).
    num, den = tau.numerator, tau.denominator
    weights = [den * (1 if v else 0) - num for _, _, v in machine.edges]
    pot = [0] * machine.num_states
    for _ in range(machine.num_states + 1):
        changed = False
        for (a, b, _), w in zip(machine.edges, weights):
            if pot[a] + w > pot[b]:
                pot[b] = pot[a] + w
                changed = True
        if not changed:
            break
    return [i for i, ((a, b, _), w) in enumerate(zip(machine.edges, weights))
            if pot[a] + w == pot[b]]


def _shortest_cycles(num_states, edges, edge_ids):
    out = [[] for _ in range(num_states)]
    for i in edge_ids:
        out[edges[i][0]].append(i)
    best_len = None
    for s in range(num_states):
        dist = {s: 0}
        todo = deque([s])
        found = None
        while todo and found is None:
            u = todo.popleft()
            for i in out[u]:
                t = edges[i][1]
                if t == s:
                    found = dist[u] + 1
                    break
                if t not in dist:
                    dist[t] = dist[u] + 1
                    todo.append(t)
        if found is not None and (best_len is None or found < best_len):
            best_len = found
    if best_len is None:
        return []
    cycles = []

    def extend(start, node, path, visited):
        if len(path) == best_len:
            return
        for i in out[node]:
            t = edges[i][1]
            if t == start and len(path) + 1 == best_len:
                cycles.append(path + [i])
            elif t > start and t not in visited:
                visited.add(t)
                extend(start, t, path + [i], visited)
                visited.discard(t)

    for s in range(num_states):
        extend(s, s, [], {s})
    return cycles


def maximal_ratio(machine: ChannelMachine) -> CycleStats:
    """Maximum over cycles of (error edges)/(cycle length), exactly.

    Karp's dynamic programme gives the maximum cycle mean; the witness is the
    shortest cycle attaining it, ties broken by its edge-index sequence
    rotated to start at its smallest edge index.
    """
    tau = _karp_max_mean(machine)
    if tau is None:
        raise InvalidMachine("machine has no cycle")
    cycles = _shortest_cycles(machine.num_states, machine.edges,
                              _critical_edges(machine, tau))

    def canonical(cyc):
        k = cyc.index(min(cyc))
        return tuple(cyc[k:] + cyc[:k])

    best = min(canonical(c) for c in cycles)
    return CycleStats(tau=tau, witness_cycle=tuple(machine.edges[i] for i in best))


def max_errors_table(machine: ChannelMachine, s0: int, n: int) -> np.ndarray:
    """Row k holds the max number of error edges over length-k walks from s0 ending at each state."""
    init = np.full(machine.num_states, kernels.NEG, dtype=np.int64)
    init[s0] = 0
    src, dst, _ = machine.arrays
    return kernels.max_plus_table(src, dst, machine.error_weights, machine.num_states, n, init)


# ------------------------------------------------------------------ walk counting

def _int_matmul(a, b):
    size = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(size) if a[i][k]) for j in range(size)]
            for i in range(size)]


def matrix_power_exact(mat, n):
    """``mat**n`` with Python integers (no overflow)."""
    size = len(mat)
    result = [[int(i == j) for j in range(size)] for i in range(size)]
    base = [[int(x) for x in row] for row in np.asarray(mat)]
    while n:
        if n & 1:
            result = _int_matmul(result, base)
        n >>= 1
        if n:
            base = _int_matmul(base, base)
    return result


def count_walks(adj, s0: int, n: int) -> int:
    """Number of length-n walks leaving ``s0``: row sum of ``adj**n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sum(matrix_power_exact(adj, n)[s0])


def count_noise_sequences(machine: ChannelMachine, s0: int, n: int) -> int:
    """Number of length-n noise sequences realisable from ``s0`` (exact)."""
    counts = [1] * machine.num_states
    for _ in range(n):
        nxt = [0] * machine.num_states
        for a, b, _ in machine.edges:
            nxt[a] += counts[b]
        counts = nxt
    return counts[s0]


def enumerate_noise_sequences(machine: ChannelMachine, s0: int, n: int,
                              cap: int = DEFAULT_SEQUENCE_CAP) -> set:
    """All noise sequences of length ``n`` a walk from ``s0`` can emit (DFS)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = count_noise_sequences(machine, s0, n)
    if total > cap:
        raise SizeCap(f"{total} noise sequences of length {n} exceed the cap of {cap}")
    found = set()
    stack = [(s0, ())]
    while stack:
        state, prefix = stack.pop()
        if len(prefix) == n:
            found.add(prefix)
            continue
        for v, t in machine.out_edges[state].items():
            stack.append((t, prefix + (v,)))
    return found


def noise_sequence_array(machine: ChannelMachine, starts, n: int,
                         cap: int = DEFAULT_SEQUENCE_CAP) -> np.ndarray:
    """Distinct noise sequences of length ``n`` from any state in ``starts``.

    Vectorised breadth-first expansion over (state, prefix-code) pairs;
    returns an ``(count, n)`` int64 digit array in lexicographic order.
    """
    base = machine.max_noise + 1
    if base ** n * machine.num_states >= 2**62:
        raise SizeCap(f"length {n} is too long for integer-coded enumeration")
    src, dst, noise = machine.arrays
    order = np.argsort(src, kind="stable")
    src, dst, noise = src[order], dst[order], noise[order]
    outdeg = np.bincount(src, minlength=machine.num_states)
    offsets = np.concatenate(([0], np.cumsum(outdeg)[:-1]))
    states = np.unique(np.asarray(list(starts), dtype=np.int64))
    codes = np.zeros(states.shape, dtype=np.int64)
    for _ in range(n):
        counts = outdeg[states]
        total = int(counts.sum())
        if total > cap:
            raise SizeCap(f"frontier of {total} prefixes exceeds the cap of {cap}")
        owner = np.repeat(np.arange(states.size), counts)
        within = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        eidx = offsets[states][owner] + within
        new_codes = codes[owner] * base + noise[eidx]
        key = np.unique(new_codes * machine.num_states + dst[eidx])
        states = key % machine.num_states
        codes = key // machine.num_states
    codes = np.unique(codes)
    if codes.size > cap:
        raise SizeCap(f"{codes.size} sequences exceed the cap of {cap}")
    digits = np.empty((codes.size, n), dtype=np.int64)
    rest = codes.copy()
    for t in range(n - 1, -1, -1):
        digits[:, t] = rest % base
        rest //= base
    return digits


# ------------------------------------------------------------------ file format

def machine_to_dict(machine: ChannelMachine) -> dict:
    doc = {
        "kind": machine.kind.value,
        "q": machine.q,
        "states": list(machine.names),
        "edges": [{"from": machine.names[a], "to": machine.names[b], "noise": v}
                  for a, b, v in machine.edges],
    }
    if machine.family:
        doc["family"] = machine.family
    return doc


def machine_from_dict(doc: dict) -> ChannelMachine:
    try:
        names = [str(s) for s in doc["states"]]
        index = {name: i for i, name in enumerate(names)}
        edges = [(index[e["from"]], index[e["to"]], int(e["noise"])) for e in doc["edges"]]
        machine = ChannelMachine(len(names), tuple(edges), int(doc["q"]), Kind(doc["kind"]),
                                 names=tuple(names), family=doc.get("family"))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidMachine):
            raise
        raise InvalidMachine(f"malformed channel document: {exc!r}") from exc
    return validate(machine)


def dumps_machine(machine: ChannelMachine) -> str:
    return json.dumps(machine_to_dict(machine), indent=2) + "\n"


def loads_machine(text: str) -> ChannelMachine:
    return machine_from_dict(json.loads(text))


def load_machine(path) -> ChannelMachine:
    return loads_machine(Path(path).read_text())


def save_machine(machine: ChannelMachine, path) -> None:
    Path(path).write_text(dumps_machine(machine))
