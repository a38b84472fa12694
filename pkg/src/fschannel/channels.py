"""Channel families and channel transfer semantics.

Window-based families keep the last ``w`` noise symbols as the state
(oldest first). State names spell the window with ``o`` for an error-free
use, ``*`` for an erasure and the digit ``k`` for an additive swap by ``k``.
Only states that are mutually reachable with the all-clear state are kept.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass

from .errors import NoSuchNoiseEdge
from .graph import ChannelMachine, Kind, enumerate_noise_sequences, validate

ERASED = "*"


def hamming_ball(n: int, r: int, q: int) -> int:
    """Number of q-ary words within Hamming distance ``r`` of a fixed word of length ``n``."""
    return sum(math.comb(n, i) * (q - 1) ** i for i in range(min(r, n) + 1))


@dataclass(frozen=True)
class SlidingWindowSpec:
    w: int
    d: int
    q: int = 2

    def __post_init__(self):
        if self.w < 1 or not 0 <= self.d <= self.w or self.q < 2:
            raise ValueError(f"need w >= 1, 0 <= d <= w, q >= 2; got {self}")


@dataclass(frozen=True)
class GilbertElliotSpec:
    N: int
    B: int
    W: int
    q: int = 2

    def __post_init__(self):
        if not 0 <= self.N <= self.B <= self.W or self.W < 1 or self.q < 2:
            raise ValueError(f"need 0 <= N <= B <= W, W >= 1, q >= 2; got {self}")


def _window_name(window, erasure):
    if erasure:
        return "".join("*" if v else "o" for v in window)
    return "".join(str(v) if v else "o" for v in window)


def _window_machine(w, symbols, allowed, kind, q, family):
    """Machine over length-w noise windows.

    ``allowed(window, v)`` says whether noise ``v`` may follow ``window``.
    """
    start = (0,) * w
    index = {start: 0}
    order = [start]
    edges = []
    todo = deque([start])
    while todo:
        win = todo.popleft()
        for v in symbols:
            if not allowed(win, v):
                continue
            nxt = win[1:] + (v,)
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                todo.append(nxt)
            edges.append((index[win], index[nxt], v))
    # keep the states that can get back to the all-clear window
    back = {0}
    changed = True
    while changed:
        changed = False
        for a, b, _ in edges:
            if b in back and a not in back:
                back.add(a)
                changed = True
    keep = [i for i in range(len(order)) if i in back]
    remap = {old: new for new, old in enumerate(keep)}
    kept_edges = tuple((remap[a], remap[b], v) for a, b, v in edges if a in back and b in back)
    names = tuple(_window_name(order[i], kind is Kind.ERASURE) for i in keep)
    return validate(ChannelMachine(len(keep), kept_edges, q, kind, names=names, family=family))


def _runs(window):
    runs = []
    prev = 0
    for i, v in enumerate(window):
        if v and not prev:
            runs.append([i, i])
        elif v:
            runs[-1][1] = i
        prev = v
    return runs


def build_sliding_window_erasure(spec: SlidingWindowSpec) -> ChannelMachine:
    """At most ``d`` erasures in every ``w`` consecutive uses."""
    d = spec.d
    return _window_machine(
        spec.w, (0, 1), lambda win, v: sum(win[1:]) + v <= d, Kind.ERASURE, spec.q,
        f"sw-erasure:w={spec.w},d={spec.d},q={spec.q}")


def build_sliding_window_symmetric(spec: SlidingWindowSpec) -> ChannelMachine:
    """At most ``d`` symbol swaps in every ``w`` consecutive uses (additive noise)."""
    d = spec.d

    def allowed(win, v):
        return sum(1 for s in win[1:] if s) + (v != 0) <= d

    return _window_machine(spec.w, tuple(range(spec.q)), allowed, Kind.ADDITIVE, spec.q,
                           f"sw-symmetric:w={spec.w},d={spec.d},q={spec.q}")


def build_bursty(w: int, d: int, q: int = 2) -> ChannelMachine:
    """Erasures arrive as one burst of at most ``d`` per window of ``w``.

    A burst may only start from an all-clear window and, once it stops, no
    erasure is allowed until the window has cleared again.
    """
    if not 0 <= d < w:
        raise ValueError(f"need 0 <= d < w, got w={w}, d={d}")

    def allowed(win, v):
        if not v:
            return True
        if not any(win):
            return d >= 1
        trailing = 0
        for s in reversed(win):
            if not s:
                break
            trailing += 1
        return trailing > 0 and trailing < d and trailing == sum(win)

    return _window_machine(w, (0, 1), allowed, Kind.ERASURE, q, f"bursty:w={w},d={d},q={q}")


def build_guard_space(max_burst: int, guard: int, q: int = 2,
                      kind: Kind = Kind.ERASURE) -> ChannelMachine:
    """Bursts of at most ``max_burst`` errors separated by at least ``guard`` clear uses.

    States: ``idle`` (errors allowed), ``e1..eB`` (inside a burst) and
    ``g1..g{guard-1}`` (guard countdown); ``max_burst + guard`` states total.
    """
    if max_burst < 1 or guard < 1:
        raise ValueError("max_burst and guard must both be >= 1")
    kind = Kind(kind)
    names = ["idle"] + [f"e{i}" for i in range(1, max_burst + 1)] + \
        [f"g{j}" for j in range(1, guard)]
    idx = {name: i for i, name in enumerate(names)}
    after_burst = idx["g1"] if guard > 1 else idx["idle"]
    edges = [(0, 0, 0), (0, idx["e1"], 1)]
    for i in range(1, max_burst + 1):
        if i < max_burst:
            edges.append((idx[f"e{i}"], idx[f"e{i + 1}"], 1))
        edges.append((idx[f"e{i}"], after_burst, 0))
    for j in range(1, guard):
        nxt = idx[f"g{j + 1}"] if j + 1 < guard else 0
        edges.append((idx[f"g{j}"], nxt, 0))
    family = f"guard:b={max_burst},g={guard},q={q}"
    if kind is Kind.ADDITIVE:
        family += ",kind=additive"
    return validate(ChannelMachine(len(names), tuple(edges), q, kind, names=tuple(names),
                                   family=family))


def build_gilbert_elliot(spec: GilbertElliotSpec) -> ChannelMachine:
    """Every window of ``W`` holds either <= N scattered erasures or one burst of <= B."""
    N, B = spec.N, spec.B

    def ok(win):
        marks = sum(win)
        if marks <= N:
            return True
        runs = _runs(win)
        return len(runs) == 1 and marks <= B

    return _window_machine(spec.W, (0, 1), lambda win, v: ok(win[1:] + (v,)), Kind.ERASURE,
                           spec.q, f"ge:N={spec.N},B={spec.B},W={spec.W},q={spec.q}")


def build_noiseless(q: int = 2, kind: Kind = Kind.ERASURE) -> ChannelMachine:
    family = f"noiseless:q={q}"
    if Kind(kind) is Kind.ADDITIVE:
        family += ",kind=additive"
    return validate(ChannelMachine(1, ((0, 0, 0),), q, kind, names=("o",), family=family))


def build_no_consecutive(q: int = 2, kind: Kind = Kind.ERASURE) -> ChannelMachine:
    """Two-state machine that never emits two errors in a row."""
    family = f"no-consecutive:q={q}"
    if Kind(kind) is Kind.ADDITIVE:
        family += ",kind=additive"
    return validate(ChannelMachine(2, ((0, 0, 0), (0, 1, 1), (1, 0, 0)), q, kind,
                                   names=("s1", "s2"), family=family))


# ------------------------------------------------------------------ transfer

def transfer(machine: ChannelMachine, state: int, symbol: int, noise: int):
    """One channel use: ``(output, next_state)``."""
    if not 0 <= symbol < machine.q:
        raise ValueError(f"input symbol {symbol} outside 0..{machine.q - 1}")
    try:
        nxt = machine.out_edges[state][noise]
    except KeyError:
        raise NoSuchNoiseEdge(
            f"state {machine.names[state]} has no edge with noise {noise}") from None
    if machine.kind is Kind.ERASURE:
        out = symbol if noise == 0 else ERASED
    else:
        out = (symbol + noise) % machine.q
    return out, nxt


def transmit(machine: ChannelMachine, state: int, word, noise):
    """Fold :func:`transfer` over a word; returns ``(output_word, final_state)``."""
    if len(word) != len(noise):
        raise ValueError("word and noise sequence differ in length")
    out = []
    for x, v in zip(word, noise):
        y, state = transfer(machine, state, x, v)
        out.append(y)
    return tuple(out), state


def output_set(machine: ChannelMachine, s0: int, word, cap: int = 10**7) -> set:
    """All output words the channel can produce for ``word`` from state ``s0``."""
    word = tuple(word)
    return {transmit(machine, s0, word, v)[0]
            for v in enumerate_noise_sequences(machine, s0, len(word), cap=cap)}


def output_union(machine: ChannelMachine, word, cap: int = 10**7) -> set:
    """Outputs of ``word`` over every possible initial state."""
    outs = set()
    for s0 in range(machine.num_states):
        outs |= output_set(machine, s0, word, cap=cap)
    return outs


def format_word(word) -> str:
    return "".join(str(s) for s in word)


def parse_word(text: str) -> tuple:
    return tuple(ERASED if ch == ERASED else int(ch) for ch in text.strip())


# ------------------------------------------------------------------ family strings

_FAMILY_RE = re.compile(r"^\s*([a-z][a-z-]*)\s*(?::(.*))?$")

_FAMILIES = {
    "sw-erasure": ({"w", "d"}, {"q"}),
    "sw-symmetric": ({"w", "d"}, {"q"}),
    "bursty": ({"w", "d"}, {"q"}),
    "guard": ({"b", "g"}, {"q", "kind"}),
    "ge": ({"N", "B", "W"}, {"q"}),
    "noiseless": (set(), {"q", "kind"}),
    "no-consecutive": (set(), {"q", "kind"}),
}


def parse_family(text: str) -> ChannelMachine:
    """Build a machine from a family string such as ``"sw-erasure:w=3,d=1,q=2"``."""
    m = _FAMILY_RE.match(text)
    if not m or m.group(1) not in _FAMILIES:
        raise ValueError(f"unknown channel family in {text!r}; "
                         f"expected one of {', '.join(sorted(_FAMILIES))}")
    name, body = m.group(1), m.group(2) or ""
    required, optional = _FAMILIES[name]
    params = {}
    for item in filter(None, (s.strip() for s in body.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key in params:
            raise ValueError(f"bad parameter {item!r} in {text!r}")
        if key not in required | optional:
            raise ValueError(f"unknown parameter {key!r} for family {name!r}")
        params[key] = value.strip()
    missing = required - params.keys()
    if missing:
        raise ValueError(f"family {name!r} needs {', '.join(sorted(missing))}")
    kind = Kind(params.pop("kind", "erasure"))
    ints = {k: int(v) for k, v in params.items()}
    q = ints.pop("q", 2)
    if name == "sw-erasure":
        return build_sliding_window_erasure(SlidingWindowSpec(ints["w"], ints["d"], q))
    if name == "sw-symmetric":
        return build_sliding_window_symmetric(SlidingWindowSpec(ints["w"], ints["d"], q))
    if name == "bursty":
        return build_bursty(ints["w"], ints["d"], q)
    if name == "guard":
        return build_guard_space(ints["b"], ints["g"], q, kind)
    if name == "ge":
        return build_gilbert_elliot(GilbertElliotSpec(ints["N"], ints["B"], ints["W"], q))
    if name == "noiseless":
        return build_noiseless(q, kind)
    return build_no_consecutive(q, kind)


def family_params(family: str | None) -> tuple:
    """``(name, {param: value})`` for a family string, or ``(None, {})``."""
    if not family:
        return None, {}
    m = _FAMILY_RE.match(family)
    if not m:
        return None, {}
    params = {}
    for item in filter(None, (s.strip() for s in (m.group(2) or "").split(","))):
        key, _, value = item.partition("=")
        params[key.strip()] = value.strip()
    return m.group(1), params
