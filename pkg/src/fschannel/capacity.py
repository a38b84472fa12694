"""Capacity values and bounds.

All logarithms are base ``q``, so every rate is in q-ary symbols per channel
use. Lower bounds are clipped at zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .channels import SlidingWindowSpec, family_params, hamming_ball
from .errors import KindMismatch
from .graph import (DEFAULT_TOL, ChannelMachine, Kind, max_errors_table, maximal_ratio,
                    topological_entropy)

DEFAULT_K_MAX = 3000

TAG_TAU = "max cycle ratio"
TAG_H = "log_q Perron root"
TAG_C0F_ERASURE = "1 - tau"
TAG_C0F_ADDITIVE = "1 - h_ch"
TAG_LOWER_ERASURE = "1 - tau - h_ch"
TAG_LOWER_ADDITIVE = "1 - 2 h_ch"
TAG_SW_ERASURE_LOWER = "1 - log_q V(w,d) / w"
TAG_SW_SYM_LOWER = "1 - log_q V(w,2d) / w"
TAG_SW_SYM_UPPER = "1 - (d/w) log_q(q-1)"
TAG_BRUTE = "brute-force"


def _require(machine, kind):
    if machine.kind is not kind:
        raise KindMismatch(f"needs an {kind.value} channel, got {machine.kind.value}")


def _log_q(x, q):
    return math.log(x) / math.log(q)


def c0f_erasure_dp(machine: ChannelMachine, k_max: int = DEFAULT_K_MAX) -> float:
    """Feedback capacity from the gain recursion, in the log domain.

    ``L_k(s) = min over edges s -> t of L_{k-1}(t) + gain``, gain 1 for a
    clear use and 0 for an erasure; the estimate is ``min_s L_k(s) / k``.
    """
    _require(machine, Kind.ERASURE)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    src, dst, _ = machine.arrays
    gain = 1 - machine.error_weights
    row = kernels.min_gain_row(src, dst, gain, machine.num_states, int(k_max))
    return float(row.min()) / k_max


def c0f_exact(machine: ChannelMachine) -> Fraction:
    _require(machine, Kind.ERASURE)
    return 1 - maximal_ratio(machine).tau


def bounds_erasure(machine: ChannelMachine, tol=DEFAULT_TOL):
    """``(max(0, 1 - tau - h_ch), 1 - tau)``; the upper value is exact."""
    _require(machine, Kind.ERASURE)
    upper = 1 - maximal_ratio(machine).tau
    h = topological_entropy(machine, tol=tol)
    return max(0.0, float(upper) - h), upper


def bounds_additive(machine: ChannelMachine, tol=DEFAULT_TOL):
    _require(machine, Kind.ADDITIVE)
    h = topological_entropy(machine, tol=tol)
    return max(0.0, 1 - 2 * h), max(0.0, 1 - h)


def sw_erasure_lower(spec: SlidingWindowSpec) -> float:
    return max(0.0, 1 - _log_q(hamming_ball(spec.w, spec.d, spec.q), spec.q) / spec.w)


def sw_symmetric_bounds(spec: SlidingWindowSpec):
    w, d, q = spec.w, spec.d, spec.q
    if 2 * d >= w:
        return 0.0, 0.0
    lower = max(0.0, 1 - _log_q(hamming_ball(w, 2 * d, q), q) / w)
    upper = 1 - d / w * _log_q(q - 1, q)
    return lower, upper


def shannon_uniform_lower(adj, q_block: int) -> float:
    """``-log_{q_block}`` of the confusable-pair fraction under a uniform input."""
    a = np.asarray(adj)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError("confusability matrix must be square and non-empty")
    if not np.array_equal(a, a.T):
        raise ValueError("confusability matrix is not symmetric")
    if not np.all(np.diag(a) == 1):
        raise ValueError("confusability matrix needs ones on the diagonal")
    m = a.shape[0]
    frac = float(np.count_nonzero(a)) / (m * m)
    return -_log_q(frac, q_block)


def lifted_block_confusability(spec: SlidingWindowSpec, kind=Kind.ERASURE) -> np.ndarray:
    """Confusability of ``w``-blocks when each block independently suffers <= d errors.

    Built from output sets directly; row sums are Hamming-ball volumes.
    """
    kind = Kind(kind)
    w, d, q = spec.w, spec.d, spec.q
    words = list(np.ndindex(*(q,) * w))
    patterns = [p for p in np.ndindex(*(q if kind is Kind.ADDITIVE else 2,) * w)
                if sum(1 for v in p if v) <= d]

    def outputs(x):
        if kind is Kind.ERASURE:
            return {tuple(-1 if v else s for s, v in zip(x, p)) for p in patterns}
        return {tuple((s + v) % q for s, v in zip(x, p)) for p in patterns}

    outs = [outputs(x) for x in words]
    size = len(words)
    adj = np.zeros((size, size), dtype=np.int64)
    for i in range(size):
        for j in range(i, size):
            if outs[i] & outs[j]:
                adj[i, j] = adj[j, i] = 1
    return adj


def max_erasures(machine: ChannelMachine, s0: int, n: int) -> int:
    """Most error edges on any length-n walk from ``s0``."""
    return int(max_errors_table(machine, s0, n)[-1].max())


# ------------------------------------------------------------------ report

@dataclass
class CapacityReport:
    kind: Kind
    q: int
    tau: Fraction
    h_ch: float
    c0f: object
    c0_lower: float
    c0_upper: object
    bruteforce_rate: float | None = None
    bruteforce_n: int | None = None
    method_tags: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)  # name -> value, family-specific bounds

    def best_lower(self):
        vals = [self.c0_lower] + [v for k, v in self.extras.items() if k.endswith("_lower")]
        if self.bruteforce_rate is not None:
            vals.append(self.bruteforce_rate)
        return max(vals)

    def best_upper(self):
        vals = [float(self.c0_upper)] + [float(v) for k, v in self.extras.items()
                                         if k.endswith("_upper")]
        return min(vals)

    def rows(self):
        """``(name, value, tag)`` in display order."""
        out = [("tau", self.tau, self.method_tags.get("tau")),
               ("h_ch", self.h_ch, self.method_tags.get("h_ch")),
               ("c0f", self.c0f, self.method_tags.get("c0f")),
               ("c0_lower", self.c0_lower, self.method_tags.get("c0_lower")),
               ("c0_upper", self.c0_upper, self.method_tags.get("c0_upper"))]
        for name, value in self.extras.items():
            out.append((name, value, self.method_tags.get(name)))
        if self.bruteforce_rate is not None:
            out.append(("bruteforce_rate", self.bruteforce_rate, self.method_tags.get(
                "bruteforce_rate")))
        return out


def format_value(value, q=2, rate=False):
    if isinstance(value, Fraction):
        text = f"{value}" if value.denominator == 1 else f"{value} = {float(value):.12g}"
    else:
        text = f"{value:.12g}"
    if rate and q != 2:
        text += f" [{float(value) * math.log2(q):.12g} bits/use]"
    return text


def format_report(rep: CapacityReport) -> str:
    lines = []
    for name, value, tag in rep.rows():
        lines.append(f"{name} = {format_value(value, rep.q, name != 'tau')} ({tag})")
    return "\n".join(lines) + "\n"


def report(machine: ChannelMachine, bruteforce_n: int | None = None, tol=DEFAULT_TOL,
           exact_cap: int = 64, word_cap: int = 4096) -> CapacityReport:
    tau = maximal_ratio(machine).tau
    h = topological_entropy(machine, tol=tol)
    tags = {"tau": TAG_TAU, "h_ch": TAG_H}
    if machine.kind is Kind.ERASURE:
        c0f = 1 - tau
        lower = max(0.0, float(c0f) - h)
        upper = c0f
        tags.update(c0f=TAG_C0F_ERASURE, c0_lower=TAG_LOWER_ERASURE, c0_upper=TAG_C0F_ERASURE)
    else:
        lower = max(0.0, 1 - 2 * h)
        upper = max(0.0, 1 - h)
        c0f = upper
        tags.update(c0f=TAG_C0F_ADDITIVE, c0_lower=TAG_LOWER_ADDITIVE, c0_upper=TAG_C0F_ADDITIVE)
    rep = CapacityReport(kind=machine.kind, q=machine.q, tau=tau, h_ch=h, c0f=c0f,
                         c0_lower=lower, c0_upper=upper, method_tags=tags)

    name, params = family_params(machine.family)
    if name in ("sw-erasure", "sw-symmetric"):
        spec = SlidingWindowSpec(int(params["w"]), int(params["d"]), int(params.get("q", 2)))
        if name == "sw-erasure":
            rep.extras["sw_lower"] = sw_erasure_lower(spec)
            tags["sw_lower"] = TAG_SW_ERASURE_LOWER
        else:
            lo, hi = sw_symmetric_bounds(spec)
            rep.extras["sw_lower"] = lo
            rep.extras["sw_upper"] = hi
            tags["sw_lower"] = TAG_SW_SYM_LOWER
            tags["sw_upper"] = TAG_SW_SYM_UPPER if 2 * spec.d < spec.w else "2d >= w"

    if bruteforce_n:
        from .codes import rate_scan
        rows = rate_scan(machine, bruteforce_n, exact_cap=exact_cap, word_cap=word_cap)
        rep.bruteforce_rate = rows[-1].best_rate
        rep.bruteforce_n = bruteforce_n
        tags["bruteforce_rate"] = f"{TAG_BRUTE}, n <= {bruteforce_n}"
    return rep
