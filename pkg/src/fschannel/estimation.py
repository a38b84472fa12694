"""Scalar state estimation over a zero-error channel.

The coder works in epochs of ``n`` channel uses. At each epoch boundary the
encoder quantizes the normalized error ``E / delta``, sends the cell index
with the rate-2/3 parity code and both ends update

    Xhat <- a**n * (Xhat + delta * q)
    delta <- delta * q**((h_lin - C0) * n) + delta_star

The error is tracked in its own coordinates (``E(t+1) = a E(t) + V(t)``)
because ``X`` and ``Xhat`` grow like ``a**t`` and their difference would
otherwise lose every significant digit within a few epochs.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .channels import ERASED, transfer
from .errors import (KindMismatch, NoSuchNoiseEdge, PolicyViolation, QuantizerSaturation,
                     TooManyErasures)
from .graph import ChannelMachine, Kind, max_errors_table


@dataclass(frozen=True)
class PlantSpec:
    a: float
    process_noise_bound: float = 1.0
    initial_bound: float = 1.0

    def __post_init__(self):
        if not self.a > 1:
            raise ValueError(f"pole magnitude must exceed 1, got {self.a}")
        if self.process_noise_bound <= 0 or self.initial_bound <= 0:
            raise ValueError("noise and initial bounds must be positive")

    def h_lin(self, q: int = 2) -> float:
        return math.log(self.a) / math.log(q)


def accumulated_noise_bound(plant: PlantSpec, n: int) -> float:
    """Largest ``|sum_k a**(n-1-k) V(k)|`` over one epoch."""
    return plant.process_noise_bound * (plant.a ** n - 1) / (plant.a - 1)


@dataclass(frozen=True)
class CoderConfig:
    epoch_length: int = 15
    code_rate: float = 2 / 3
    delta_star: float | None = None
    q: int = 2

    @property
    def info_symbols(self) -> int:
        return int(math.floor(self.code_rate * self.epoch_length + 1e-9))

    @property
    def quantizer_levels(self) -> int:
        return self.q ** self.info_symbols

    def resolved_delta_star(self, plant: PlantSpec) -> float:
        if self.delta_star is not None:
            return float(self.delta_star)
        return default_delta_star(plant, self.epoch_length, self.q)


def default_delta_star(plant: PlantSpec, n: int, q: int = 2) -> float:
    """``2 * max(q**(h_lin n), one epoch of accumulated process noise)``.

    Both terms matter: the first is the constraint the update needs, the
    second keeps the next normalized error inside the quantizer range.
    """
    return 2.0 * max(q ** (plant.h_lin(q) * n), accumulated_noise_bound(plant, n))


# ------------------------------------------------------------------ verdicts

class Verdict(str, enum.Enum):
    SUFFICIENT = "sufficient"
    NECESSITY_VIOLATED = "necessity-violated"
    INDETERMINATE = "indeterminate"


def _verdict(sufficient, violated):
    if sufficient:
        return Verdict.SUFFICIENT
    if violated:
        return Verdict.NECESSITY_VIOLATED
    return Verdict.INDETERMINATE


def check_conditions(plant: PlantSpec, report) -> dict:
    """Verdicts for uniformly bounded estimation.

    ``"data-rate"`` compares ``h_lin`` with the best known bracket on C0
    (including a brute-force rate when the report has one). ``"erasure"``
    and ``"additive"`` are the closed-form sufficient conditions for the
    matching channel kind; their necessity side is ``h_lin <= C0f``.
    """
    h = plant.h_lin(report.q)
    tau = float(report.tau)
    out = {"data-rate": _verdict(h < report.best_lower(), h > report.best_upper())}
    if report.kind is Kind.ERASURE:
        out["erasure"] = _verdict(h + report.h_ch + tau < 1, h > 1 - tau)
    else:
        out["additive"] = _verdict(h + 2 * report.h_ch < 1, h > 1 - report.h_ch)
    return out


# ------------------------------------------------------------------ parity code

def parity_encode(info) -> tuple:
    """Pairs of information bits ``b1 b2`` become triples ``b1 b2 (b1 xor b2)``."""
    info = tuple(int(b) for b in info)
    if len(info) % 2:
        raise ValueError(f"need an even number of information bits, got {len(info)}")
    if any(b not in (0, 1) for b in info):
        raise ValueError("information bits must be 0 or 1")
    out = []
    for i in range(0, len(info), 2):
        b1, b2 = info[i], info[i + 1]
        out += [b1, b2, b1 ^ b2]
    return tuple(out)


def parity_decode(received) -> tuple:
    received = tuple(received)
    if len(received) % 3:
        raise ValueError(f"received length {len(received)} is not a multiple of 3")
    info = []
    for i in range(0, len(received), 3):
        triple = list(received[i:i + 3])
        missing = [k for k, s in enumerate(triple) if s == ERASED]
        if len(missing) > 1:
            raise TooManyErasures(f"triple at position {i} has {len(missing)} erasures")
        if missing:
            k = missing[0]
            others = [triple[j] for j in range(3) if j != k]
            triple[k] = others[0] ^ others[1]
        info += triple[:2]
    return tuple(info)


def supports_parity_code(machine: ChannelMachine) -> bool:
    """Binary erasure channel with at most one erasure in any three consecutive uses."""
    if machine.kind is not Kind.ERASURE or machine.q != 2:
        return False
    return all(max_errors_table(machine, s, 3)[-1].max() <= 1
               for s in range(machine.num_states))


# ------------------------------------------------------------------ quantizer

def quantize(eps: float, levels: int) -> int:
    """Mid-rise cell index of ``eps`` in ``[-1, 1]``."""
    if not abs(eps) <= 1:
        raise QuantizerSaturation(f"normalized error {eps!r} is outside [-1, 1]")
    width = 2.0 / levels
    return min(int((eps + 1.0) // width), levels - 1)


def cell_center(index: int, levels: int) -> float:
    return -1.0 + (index + 0.5) * 2.0 / levels


def index_to_bits(index: int, width: int) -> tuple:
    return tuple((index >> (width - 1 - k)) & 1 for k in range(width))


def bits_to_index(bits) -> int:
    value = 0
    for b in bits:
        value = value * 2 + int(b)
    return value


# ------------------------------------------------------------------ policies

class MaxErasureNoise:
    """Take the largest available noise symbol (an erasure when there is one)."""

    def reset(self):
        pass

    def __call__(self, machine, state):
        return max(machine.out_edges[state])


class ZeroNoise:
    def reset(self):
        pass

    def __call__(self, machine, state):
        return min(machine.out_edges[state])


class RandomNoise:
    def __init__(self, seed=0):
        self.seed = seed
        self.reset()

    def reset(self):
        self.rng = np.random.default_rng(self.seed)

    def __call__(self, machine, state):
        choices = sorted(machine.out_edges[state])
        return choices[int(self.rng.integers(len(choices)))]


def noise_policy_max_erasure(machine: ChannelMachine):
    if machine.kind is not Kind.ERASURE:
        raise KindMismatch("max-erasure policy needs an erasure channel")
    return MaxErasureNoise()


def noise_walk(machine, policy, s0, n):
    """Noise sequence the policy emits over ``n`` uses from ``s0``."""
    out = []
    state = s0
    for _ in range(n):
        v = policy(machine, state)
        out.append(v)
        state = machine.step(state, v)
    return tuple(out)


def _sign(x):
    return 1.0 if x >= 0 else -1.0


class WorstDisturbance:
    """Push the current estimation error outward: ``0.99 * bound * sign(E)``, sign(0) = +1."""

    def __init__(self, plant: PlantSpec):
        self.mag = 0.99 * plant.process_noise_bound

    def reset(self):
        pass

    def __call__(self, t, error):
        return self.mag * _sign(error)


class ZeroDisturbance:
    def __init__(self, plant: PlantSpec = None):
        pass

    def reset(self):
        pass

    def __call__(self, t, error):
        return 0.0


class AlternatingDisturbance:
    def __init__(self, plant: PlantSpec):
        self.mag = 0.99 * plant.process_noise_bound

    def reset(self):
        pass

    def __call__(self, t, error):
        return self.mag if t % 2 == 0 else -self.mag


class RandomDisturbance:
    def __init__(self, plant: PlantSpec, seed=0):
        self.mag = 0.99 * plant.process_noise_bound
        self.seed = seed
        self.reset()

    def reset(self):
        self.rng = np.random.default_rng(self.seed)

    def __call__(self, t, error):
        return float(self.rng.uniform(-self.mag, self.mag))


def disturbance_policy_worst(plant: PlantSpec):
    return WorstDisturbance(plant)


NOISE_POLICIES = {
    "max-erasure": lambda seed: MaxErasureNoise(),
    "zero": lambda seed: ZeroNoise(),
    "random": lambda seed: RandomNoise(seed),
}

DISTURBANCE_POLICIES = {
    "worst": lambda plant, seed: WorstDisturbance(plant),
    "zero": lambda plant, seed: ZeroDisturbance(plant),
    "alternating": lambda plant, seed: AlternatingDisturbance(plant),
    "random": lambda plant, seed: RandomDisturbance(plant, seed),
}


# ------------------------------------------------------------------ simulation

@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    t: int
    x: float
    xhat: float
    error: float
    delta: float
    erasures: int


@dataclass
class EstimationTrace:
    records: list = field(default_factory=list)
    delta_star: float = 0.0
    contraction: float = 0.0

    @property
    def errors(self):
        return np.array([r.error for r in self.records])

    @property
    def deltas(self):
        return np.array([r.delta for r in self.records])

    def fixed_point(self):
        """Limit of the delta recursion, or ``inf`` when it diverges."""
        if self.contraction >= 1:
            return math.inf
        return self.delta_star / (1 - self.contraction)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["epoch", "t", "X", "Xhat", "E", "delta", "erasures_this_epoch"])
        for r in self.records:
            writer.writerow([r.epoch, r.t, repr(r.x), repr(r.xhat), repr(r.error),
                             repr(r.delta), r.erasures])
        return buf.getvalue()


def run_estimation(plant: PlantSpec, machine: ChannelMachine, coder: CoderConfig,
                   noise_policy, disturbance_policy, epochs: int, x0: float | None = None,
                   s0: int = 0) -> EstimationTrace:
    """Simulate ``epochs`` epochs of the coder-estimator.

    Record ``i`` holds the state at the boundary ``t = i * n`` after both
    ends have applied the update for that boundary (record 0 is the initial
    condition). ``erasures_this_epoch`` counts the erasures that hit the
    word sent during the epoch ending at that boundary.
    """
    n, q = coder.epoch_length, coder.q
    if not supports_parity_code(machine):
        raise KindMismatch("the parity coder needs a binary erasure channel with at most "
                           "one erasure in any three consecutive uses")
    if n % 3 or coder.info_symbols != 2 * n // 3:
        raise ValueError("epoch length must be a multiple of 3 and the code rate 2/3")
    levels = coder.quantizer_levels
    width = coder.info_symbols
    a = plant.a
    an = a ** n
    contraction = an / levels
    delta_star = coder.resolved_delta_star(plant)
    if x0 is None:
        x0 = 0.99 * plant.initial_bound
    noise_policy.reset()
    disturbance_policy.reset()

    x, xhat, delta = float(x0), 0.0, 1.0
    error = x - xhat
    state = s0
    trace = EstimationTrace(delta_star=delta_star, contraction=contraction)
    trace.records.append(EpochRecord(0, 0, x, xhat, error, delta, 0))
    for i in range(1, epochs + 1):
        eps = error / delta
        try:
            index = quantize(eps, levels)
        except QuantizerSaturation as exc:
            raise QuantizerSaturation(f"epoch {i - 1}: {exc}") from None
        center = cell_center(index, levels)
        word = parity_encode(index_to_bits(index, width))

        # error relative to the prediction that already includes this epoch's correction
        resid = error - delta * center
        received = []
        erasures = 0
        t0 = (i - 1) * n
        for k in range(n):
            v_noise = noise_policy(machine, state)
            try:
                y, state = transfer(machine, state, word[k], v_noise)
            except NoSuchNoiseEdge as exc:
                raise PolicyViolation(str(exc)) from None
            received.append(y)
            erasures += y == ERASED
            v = disturbance_policy(t0 + k, resid)
            if abs(v) >= plant.process_noise_bound:
                raise PolicyViolation(f"disturbance {v} breaks the bound")
            x = a * x + v
            resid = a * resid + v
        decoded = bits_to_index(parity_decode(received))
        if decoded != index:
            raise PolicyViolation(f"epoch {i}: decoded cell {decoded}, sent {index}")
        xhat = an * (xhat + delta * cell_center(decoded, levels))
        error = resid
        delta = delta * contraction + delta_star
        trace.records.append(EpochRecord(i, i * n, x, xhat, error, delta, erasures))
    return trace
