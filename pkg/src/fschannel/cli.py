"""Command-line front end: ``fschannel <command> --channel SPEC ...``.

``SPEC`` is a family string such as ``sw-erasure:w=3,d=1,q=2`` or the path
of a JSON channel file. Usage errors exit with status 2, computation errors
with status 1 and a one-line diagnostic naming the error class.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

from . import capacity, codes, estimation, nonstoch
from .channels import format_word, parse_family, parse_word
from .errors import ChannelError
from .graph import (DEFAULT_TOL, Kind, dumps_machine, load_machine, maximal_ratio,
                    topological_entropy)


class UsageError(Exception):
    pass


def _load_channel(spec):
    if spec.endswith(".json") or os.path.isfile(spec):
        return load_machine(spec)
    try:
        return parse_family(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(value):
    return capacity.format_value(value)


# ------------------------------------------------------------------ commands

def cmd_build(args):
    machine = _load_channel(args.channel)
    _emit(dumps_machine(machine) + "\n", args.out)


def cmd_entropy(args):
    machine = _load_channel(args.channel)
    h = topological_entropy(machine, tol=args.tol)
    _emit(f"h_ch = {_fmt(h)} ({capacity.TAG_H})\n", args.out)


def cmd_tau(args):
    machine = _load_channel(args.channel)
    stats = maximal_ratio(machine)
    names = [machine.names[a] for a, _, _ in stats.witness_cycle]
    names.append(names[0])
    text = (f"tau = {_fmt(stats.tau)} ({capacity.TAG_TAU})\n"
            f"witness = {' -> '.join(names)} (errors on {stats.errors} of {stats.length} uses)\n")
    _emit(text, args.out)


def cmd_c0f(args):
    machine = _load_channel(args.channel)
    if machine.kind is Kind.ERASURE:
        lines = [f"c0f = {_fmt(capacity.c0f_exact(machine))} ({capacity.TAG_C0F_ERASURE})"]
        if args.k_max:
            dp = capacity.c0f_erasure_dp(machine, args.k_max)
            lines.append(f"c0f_dp = {_fmt(dp)} (gain recursion, k = {args.k_max})")
    else:
        _, upper = capacity.bounds_additive(machine, tol=args.tol)
        lines = [f"c0f = {_fmt(upper)} ({capacity.TAG_C0F_ADDITIVE})"]
    _emit("\n".join(lines) + "\n", args.out)


def cmd_bounds(args):
    machine = _load_channel(args.channel)
    rep = capacity.report(machine, bruteforce_n=args.bruteforce_n, tol=args.tol,
                          exact_cap=args.exact_cap, word_cap=args.word_cap)
    _emit(capacity.format_report(rep), args.out)


def cmd_codesearch(args):
    machine = _load_channel(args.channel)
    rows = codes.rate_scan(machine, args.n_max, exact_cap=args.exact_cap,
                           word_cap=args.word_cap, n_min=args.n_min)
    _emit(codes.scan_to_csv(rows), args.out)
    if args.codebook:
        best = max(rows, key=lambda r: (r.rate, -r.n))
        graph = codes.confusability(machine, best.n, cap=args.word_cap)
        mode = "exact" if best.exact else "greedy"
        book = codes.max_zero_error_code(graph, mode, exact_cap=args.exact_cap)
        if not codes.certify_codebook(machine, book):
            raise ChannelError("codebook failed output-level certification")
        with open(args.codebook, "w", encoding="utf-8") as fh:
            fh.write(book.dumps())


def cmd_maximin(args):
    machine = _load_channel(args.channel)
    if args.words:
        words = [parse_word(w) for w in args.words.split(",")]
        if any(len(w) != args.n + 1 for w in words):
            raise UsageError(f"every word must have length n + 1 = {args.n + 1}")
    else:
        if machine.q ** (args.n + 1) > args.word_cap:
            raise UsageError("input space exceeds --word-cap; pass --words")
        words = [tuple(int(s) for s in w) for w in codes.all_words(machine.q, args.n + 1)]
    jr = nonstoch.joint_range(machine, words)
    part = nonstoch.overlap_partition(jr)
    lines = [f"inputs = {len(jr.inputs)}", f"blocks = {len(part)}"]
    for block in part.blocks:
        lines.append("block = " + " ".join(format_word(w) for w in sorted(block)))
    lines.append(f"I_* = {_fmt(nonstoch.maximin_info(jr))} (log_q overlap-partition size)")
    _emit("\n".join(lines) + "\n", args.out)


def cmd_verify(args):
    machine = _load_channel(args.channel)
    rep = nonstoch.verify_maximin_capacity(machine, args.n, subsets=args.subsets,
                                           seed=args.seed, exact_cap=args.exact_cap)
    mode = "all subsets" if rep.exhaustive else f"{rep.subsets_checked} sampled subsets"
    text = (f"word_length = {rep.word_length}\n"
            f"m_star = {rep.m_star} ({capacity.TAG_BRUTE})\n"
            f"log_q m_star = {_fmt(rep.log_m_star)} ({capacity.TAG_BRUTE})\n"
            f"I_* on code = {_fmt(rep.info_on_code)} (maximin information)\n"
            f"max I_* = {_fmt(rep.max_info_subsets)} (maximin information, {mode})\n"
            f"holds = {'yes' if rep.holds else 'no'}\n")
    _emit(text, args.out)
    return 0 if rep.holds else 1


def cmd_simulate(args):
    machine = _load_channel(args.channel)
    if (args.a is None) == (args.a_exponent is None):
        raise UsageError("give exactly one of --a and --a-exponent")
    a = args.a if args.a is not None else machine.q ** args.a_exponent
    plant = estimation.PlantSpec(a)
    coder = estimation.CoderConfig(epoch_length=args.epoch_length, code_rate=args.code_rate,
                                   delta_star=args.delta_star, q=machine.q)
    noise = estimation.NOISE_POLICIES[args.adversary](args.seed)
    dist = estimation.DISTURBANCE_POLICIES[args.disturbance](plant, args.seed)
    trace = estimation.run_estimation(plant, machine, coder, noise, dist, args.epochs,
                                      s0=args.start_state)
    _emit(trace.to_csv(), args.out)


# ------------------------------------------------------------------ parser

def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonneg(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="fschannel",
                                     description="Zero-error capacity of finite-state channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--channel", required=True, help="family string or JSON channel file")
        p.add_argument("--out", help="write output here instead of stdout")
        p.set_defaults(func=func)
        return p

    add("build", cmd_build, "write a channel file")
    p = add("entropy", cmd_entropy, "topological entropy h_ch")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    add("tau", cmd_tau, "maximal cycle ratio and a witness cycle")
    p = add("c0f", cmd_c0f, "zero-error feedback capacity")
    p.add_argument("--k-max", type=_nonneg, default=0,
                   help="also run the gain recursion for this many steps")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p = add("bounds", cmd_bounds, "capacity report with every applicable bound")
    p.add_argument("--bruteforce-n", type=_nonneg, default=0,
                   help="add the best code rate over blocklengths up to this")
    p.add_argument("--exact-cap", type=_positive, default=codes.DEFAULT_EXACT_CAP)
    p.add_argument("--word-cap", type=_positive, default=codes.DEFAULT_WORD_CAP)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p = add("codesearch", cmd_codesearch, "best zero-error codes per blocklength (CSV)")
    p.add_argument("--n-max", type=_positive, required=True)
    p.add_argument("--n-min", type=_positive, default=1)
    p.add_argument("--exact-cap", type=_positive, default=codes.DEFAULT_EXACT_CAP)
    p.add_argument("--word-cap", type=_positive, default=codes.DEFAULT_WORD_CAP)
    p.add_argument("--codebook", help="write the highest-rate codebook here")
    p = add("maximin", cmd_maximin, "overlap partition and maximin information")
    p.add_argument("--n", type=_nonneg, required=True, help="words have length n + 1")
    p.add_argument("--words", help="comma-separated input words (default: all)")
    p.add_argument("--word-cap", type=_positive, default=codes.DEFAULT_WORD_CAP)
    p = add("verify", cmd_verify, "compare maximin information with the best code size")
    p.add_argument("--n", type=_nonneg, required=True, help="words have length n + 1")
    p.add_argument("--subsets", type=_positive, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact-cap", type=_positive, default=codes.DEFAULT_EXACT_CAP)
    p = add("simulate", cmd_simulate, "coder-estimator simulation (CSV trace)")
    p.add_argument("--a", type=float, help="plant pole magnitude")
    p.add_argument("--a-exponent", type=float, help="pole as q**exponent")
    p.add_argument("--epochs", type=_positive, default=100)
    p.add_argument("--epoch-length", type=_positive, default=15)
    p.add_argument("--code-rate", type=float, default=2 / 3)
    p.add_argument("--delta-star", type=float)
    p.add_argument("--adversary", choices=sorted(estimation.NOISE_POLICIES), default="max-erasure")
    p.add_argument("--disturbance", choices=sorted(estimation.DISTURBANCE_POLICIES),
                   default="worst")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start-state", type=_nonneg, default=0)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tol", 1.0) <= 0 or not math.isfinite(getattr(args, "tol", 1.0)):
        parser.error("--tol must be a positive number")
    try:
        status = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ChannelError, ValueError, OSError) as exc:
        print(f"fschannel: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
