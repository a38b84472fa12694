"""Zero-error block codes found by brute force.

Two input words are confusable when some pair of initial states and
admissible noise sequences maps them to the same output word (an erasure
mark is an ordinary output symbol here). Zero-error codes are exactly the
independent sets of the resulting confusability graph.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .channels import format_word, output_union
from .errors import SizeCap
from .graph import ChannelMachine, Kind, noise_sequence_array

DEFAULT_WORD_CAP = 4096
DEFAULT_EXACT_CAP = 64
# words x noise-sequences product allowed when building output codes
_OUTPUT_CELL_CAP = 60_000_000


@dataclass(frozen=True)
class ConfusabilityGraph:
    words: np.ndarray      # (count, n) digit array, lexicographic order
    adjacency: np.ndarray  # symmetric bool matrix, empty diagonal
    q: int

    @property
    def n(self):
        return self.words.shape[1]

    def __len__(self):
        return self.words.shape[0]

    def word(self, i):
        return tuple(int(s) for s in self.words[i])


@dataclass(frozen=True)
class Codebook:
    blocklength: int
    words: tuple
    q: int
    exact: bool = True

    @property
    def size(self):
        return len(self.words)

    @property
    def rate(self):
        """``log_q |words| / blocklength`` in q-ary symbols per channel use."""
        if not self.words or self.blocklength == 0:
            return 0.0
        return math.log(len(self.words)) / math.log(self.q) / self.blocklength

    def dumps(self):
        return "".join(format_word(w) + "\n" for w in self.words)


def all_words(q: int, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64)


def _erasure_cover_table(noise):
    """``table[mask]``: some admissible erasure pattern covers every position in ``mask``."""
    length = noise.shape[1]
    table = np.zeros(2 ** length, dtype=bool)
    table[(noise != 0).astype(np.int64) @ (2 ** np.arange(length - 1, -1, -1))] = True
    for bit in range(length):
        view = table.reshape(-1, 2, 2 ** bit)
        view[:, 0, :] |= view[:, 1, :]
    return table


def confusability(machine: ChannelMachine, n: int, cap: int = DEFAULT_WORD_CAP,
                  noise_cap: int = 10**7, method: str = "difference") -> ConfusabilityGraph:
    """Confusability graph on all ``q**n`` input words.

    ``method="difference"`` uses translation invariance: erasure words clash
    when one admissible erasure pattern covers every position where they
    differ, additive words clash when ``x - x'`` is a difference of two
    admissible noise sequences. ``method="outputs"`` compares output words
    directly and serves as the cross-check.
    """
    count = machine.q ** n
    if count > cap:
        raise SizeCap(f"{count} words of length {n} exceed the word cap of {cap}")
    if (machine.q + 1) ** n >= 2**62:
        raise SizeCap(f"length {n} is too long for integer-coded outputs")
    words = all_words(machine.q, n)
    noise = noise_sequence_array(machine, range(machine.num_states), n, cap=noise_cap)
    erasure = machine.kind is Kind.ERASURE
    if method == "difference":
        if erasure:
            table = _erasure_cover_table(noise)
        else:
            table = kernels.difference_table(noise, machine.q)
        adj = kernels.difference_adjacency(words, machine.q, table, erasure)
    elif method == "outputs":
        if count * noise.shape[0] > _OUTPUT_CELL_CAP:
            raise SizeCap(f"{count} words x {noise.shape[0]} noise sequences is too large")
        codes = kernels.output_codes(words, noise, machine.q, erasure)
        adj = kernels.collision_adjacency(codes)
    else:
        raise ValueError(f"method must be 'difference' or 'outputs', not {method!r}")
    return ConfusabilityGraph(words=words, adjacency=adj, q=machine.q)


# ------------------------------------------------------------------ independent sets

def _bitsets(adj):
    return np.array([sum(1 << int(j) for j in np.flatnonzero(row)) for row in adj],
                    dtype=np.uint64)


def max_independent_set_exact(adj) -> list:
    """Lexicographically first maximum independent set (at most 64 vertices)."""
    size = len(adj)
    if size > 64:
        raise SizeCap(f"exact search handles at most 64 vertices, got {size}")
    if size == 0:
        return []
    greedy = greedy_independent_set(adj)
    mask = int(kernels.max_independent_set(_bitsets(adj), size, len(greedy) - 1))
    return [i for i in range(size) if mask >> i & 1]


def greedy_independent_set(adj) -> list:
    """Maximal independent set: repeatedly take the lowest-degree remaining vertex."""
    adj = np.asarray(adj, dtype=bool)
    alive = np.ones(len(adj), dtype=bool)
    degree = adj.sum(axis=1).astype(np.int64)
    chosen = []
    while alive.any():
        isolated = alive & (degree == 0)
        if isolated.any():
            # isolated vertices never affect anyone else; take them all at once
            chosen.extend(np.flatnonzero(isolated).tolist())
            alive &= ~isolated
            continue
        masked = np.where(alive, degree, np.iinfo(np.int64).max)
        v = int(np.argmin(masked))  # argmin takes the lowest index on ties
        chosen.append(v)
        removed = alive & (adj[v] | (np.arange(len(adj)) == v))
        alive &= ~removed
        degree -= adj[:, removed].sum(axis=1)
    return sorted(chosen)


def is_independent(adj, chosen) -> bool:
    idx = np.asarray(chosen, dtype=np.int64)
    return not np.asarray(adj)[np.ix_(idx, idx)].any()


def max_zero_error_code(graph: ConfusabilityGraph, mode: str = "exact",
                        exact_cap: int = DEFAULT_EXACT_CAP) -> Codebook:
    if mode == "exact":
        if len(graph) > exact_cap:
            raise SizeCap(f"exact search limited to {exact_cap} words, graph has {len(graph)}")
        chosen = max_independent_set_exact(graph.adjacency)
    elif mode == "greedy":
        chosen = greedy_independent_set(graph.adjacency)
    else:
        raise ValueError(f"mode must be 'exact' or 'greedy', not {mode!r}")
    if not is_independent(graph.adjacency, chosen):
        raise AssertionError("independent-set search returned adjacent words")
    return Codebook(blocklength=graph.n, words=tuple(graph.word(i) for i in chosen),
                    q=graph.q, exact=(mode == "exact"))


def certify_codebook(machine: ChannelMachine, codebook: Codebook) -> bool:
    """Re-check a codebook straight from channel outputs (no confusability graph)."""
    owner = {}
    for word in codebook.words:
        for y in output_union(machine, word):
            if owner.setdefault(y, word) != word:
                return False
    return True


# ------------------------------------------------------------------ scans

@dataclass(frozen=True)
class ScanRow:
    n: int
    size: int
    rate: float
    exact: bool
    best_rate: float


def max_blocklength(q: int, word_cap: int = DEFAULT_WORD_CAP) -> int:
    n = 0
    while q ** (n + 1) <= word_cap:
        n += 1
    return n


def rate_scan(machine: ChannelMachine, n_max: int, exact_cap: int = DEFAULT_EXACT_CAP,
              word_cap: int = DEFAULT_WORD_CAP, n_min: int = 1) -> list:
    """Best code size for every blocklength ``n_min..n_max``.

    Exact search while ``q**n <= exact_cap``, greedy beyond. ``best_rate`` is
    the running maximum: a zero-error code can be repeated block after block,
    so any rate found at a shorter length stays achievable.
    """
    if machine.q ** n_max > word_cap:
        raise SizeCap(f"q**n_max = {machine.q ** n_max} exceeds the word cap of {word_cap}")
    rows = []
    best = 0.0
    for n in range(n_min, n_max + 1):
        graph = confusability(machine, n, cap=word_cap)
        mode = "exact" if len(graph) <= exact_cap else "greedy"
        book = max_zero_error_code(graph, mode, exact_cap=exact_cap)
        best = max(best, book.rate)
        rows.append(ScanRow(n, book.size, book.rate, book.exact, best))
    return rows


def best_code(machine: ChannelMachine, n_max: int, exact_cap: int = DEFAULT_EXACT_CAP,
              word_cap: int = DEFAULT_WORD_CAP) -> Codebook:
    """Codebook with the highest rate over blocklengths ``1..n_max``."""
    best = None
    for n in range(1, n_max + 1):
        graph = confusability(machine, n, cap=word_cap)
        mode = "exact" if len(graph) <= exact_cap else "greedy"
        book = max_zero_error_code(graph, mode, exact_cap=exact_cap)
        if best is None or book.rate > best.rate + 1e-12:
            best = book
    return best


def scan_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "size", "rate", "exact_flag"])
    for r in rows:
        writer.writerow([r.n, r.size, f"{r.rate:.12f}", int(r.exact)])
    return buf.getvalue()
