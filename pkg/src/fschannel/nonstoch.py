"""Uncertain-variable brute force: joint ranges, overlap partitions, maximin information."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channels import output_union
from .codes import all_words, confusability, max_zero_error_code
from .errors import SizeCap


@dataclass(frozen=True)
class JointRange:
    pairs: frozenset
    q: int

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("joint range is empty")
        if len({len(x) for x, _ in self.pairs}) != 1 or len({len(y) for _, y in self.pairs}) != 1:
            raise ValueError("joint range mixes word lengths")

    @property
    def inputs(self):
        return frozenset(x for x, _ in self.pairs)

    def conditional_ranges(self):
        """``{y: set of inputs that can produce y}``."""
        out = {}
        for x, y in self.pairs:
            out.setdefault(y, set()).add(x)
        return out


@dataclass(frozen=True)
class OverlapPartition:
    blocks: tuple

    def __len__(self):
        return len(self.blocks)


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller representative wins so block order is deterministic
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), set()).add(x)
        return out


def joint_range(machine, input_set, cap: int = 10**7) -> JointRange:
    words = [tuple(x) for x in input_set]
    if not words:
        raise ValueError("input set is empty")
    pairs = frozenset((x, y) for x in words for y in output_union(machine, x, cap=cap))
    return JointRange(pairs, machine.q)


def overlap_partition(jr: JointRange) -> OverlapPartition:
    uf = UnionFind(sorted(jr.inputs))
    for members in jr.conditional_ranges().values():
        it = iter(members)
        first = next(it)
        for x in it:
            uf.union(first, x)
    blocks = sorted((frozenset(g) for g in uf.groups().values()), key=min)
    return OverlapPartition(tuple(blocks))


def maximin_info(jr: JointRange) -> float:
    return math.log(len(overlap_partition(jr))) / math.log(jr.q)


@dataclass(frozen=True)
class MaximinReport:
    word_length: int
    q: int
    m_star: int
    code: tuple
    info_on_code: float
    max_info_subsets: float
    subsets_checked: int
    exhaustive: bool

    @property
    def log_m_star(self):
        return math.log(self.m_star) / math.log(self.q)

    @property
    def holds(self):
        """Code information equals ``log_q M*`` and no subset beats it."""
        return (abs(self.info_on_code - self.log_m_star) < 1e-12
                and abs(self.max_info_subsets - self.log_m_star) < 1e-12)


def verify_maximin_capacity(machine, n: int, subsets: int = 1000, seed: int = 0,
                            full_limit: int = 2**16, exact_cap: int = 64) -> MaximinReport:
    """Compare the best zero-error code at word length ``n + 1`` with maximin information.

    Every input subset is tried when there are at most ``full_limit`` of them;
    otherwise ``subsets`` random subsets (seeded) plus the optimal code.
    """
    length = n + 1
    graph = confusability(machine, length, cap=exact_cap)
    book = max_zero_error_code(graph, "exact", exact_cap=exact_cap)
    info_code = maximin_info(joint_range(machine, book.words))

    words = [tuple(int(s) for s in w) for w in all_words(machine.q, length)]
    outs = {w: output_union(machine, w) for w in words}

    def info_of(chosen):
        pairs = frozenset((x, y) for x in chosen for y in outs[x])
        return maximin_info(JointRange(pairs, machine.q))

    total = 2 ** len(words) - 1
    best = 0.0
    if total <= full_limit:
        exhaustive = True
        checked = 0
        for mask in range(1, total + 1):
            chosen = [w for i, w in enumerate(words) if mask >> i & 1]
            best = max(best, info_of(chosen))
            checked += 1
    else:
        if len(words) > 4096:
            raise SizeCap(f"{len(words)} input words is too many for subset sampling")
        exhaustive = False
        rng = np.random.default_rng(seed)
        checked = 0
        for _ in range(subsets):
            keep = rng.random(len(words)) < 0.5
            chosen = list(itertools.compress(words, keep)) or [words[0]]
            best = max(best, info_of(chosen))
            checked += 1
        best = max(best, info_of(book.words))
        checked += 1
    return MaximinReport(word_length=length, q=machine.q, m_star=book.size, code=book.words,
                         info_on_code=info_code, max_info_subsets=best,
                         subsets_checked=checked, exhaustive=exhaustive)
