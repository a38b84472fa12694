"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both versions are imported directly, so the FSCHANNEL_NO_JIT flag does not
matter here. Each row checks that the two outputs agree before timing.
"""
import argparse
import time

import numpy as np

from fschannel import kernels
from fschannel.channels import SlidingWindowSpec, build_sliding_window_erasure, parse_family
from fschannel.codes import (_bitsets, _erasure_cover_table, all_words, confusability,
                             greedy_independent_set)
from fschannel.graph import adjacency, noise_sequence_array


def best_time(fn, args, repeat):
    fn(*args)  # warm-up, and JIT compile on first call
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a[:2], b[:2]))
    return np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def cases():
    big = build_sliding_window_erasure(SlidingWindowSpec(7, 3))
    src, dst, _ = big.arrays
    init = np.full(big.num_states, kernels.NEG, dtype=np.int64)
    init[0] = 0
    yield ("max_plus_table sw(7,3) n=2000", kernels.max_plus_table_jit, kernels.max_plus_table_np,
           (src, dst, big.error_weights, big.num_states, 2000, init))
    yield ("min_gain_row sw(7,3) k=3000", kernels.min_gain_row_jit, kernels.min_gain_row_np,
           (src, dst, 1 - big.error_weights, big.num_states, 3000))
    mat = adjacency(big).astype(float) + np.eye(big.num_states)
    yield ("power_iterate sw(7,3)", kernels.power_iterate_jit, kernels.power_iterate_np,
           (mat, np.ones(big.num_states), 1e-12, 100000))

    m = parse_family("sw-erasure:w=5,d=2,q=2")
    words = all_words(2, 10)
    noise = noise_sequence_array(m, range(m.num_states), 10)
    yield ("output_codes sw(5,2) n=10", kernels.output_codes_jit, kernels.output_codes_np,
           (words, noise, 2, True))
    codes = kernels.output_codes_jit(words, noise, 2, True)
    yield ("collision_adjacency sw(5,2) n=10", kernels.collision_adjacency_jit,
           kernels.collision_adjacency_np, (codes,))
    table = _erasure_cover_table(noise)
    yield ("difference_adjacency sw(5,2) n=10", kernels.difference_adjacency_jit,
           kernels.difference_adjacency_np, (words, 2, table, True))

    sym = parse_family("sw-symmetric:w=4,d=1,q=3")
    words3 = all_words(3, 6)
    noise3 = noise_sequence_array(sym, range(sym.num_states), 6)
    yield ("difference_table sw-sym(4,1,3) n=6", kernels.difference_table_jit,
           kernels.difference_table_np, (noise3, 3))

    adj = confusability(parse_family("sw-erasure:w=5,d=1,q=2"), 6).adjacency
    nbrs = _bitsets(adj)
    lower = len(greedy_independent_set(adj)) - 1
    yield ("max_independent_set sw(5,1) n=6", kernels.max_independent_set_jit,
           kernels.max_independent_set_py, (nbrs, len(adj), lower))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(f"{'kernel':40s} {'numba [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s}")
    for name, fast, slow, fargs in cases():
        if not same(fast(*fargs), slow(*fargs)):
            raise SystemExit(f"{name}: backends disagree")
        t_fast = best_time(fast, fargs, args.repeat)
        t_slow = best_time(slow, fargs, args.repeat)
        print(f"{name:40s} {t_fast:11.5f} {t_slow:11.5f} {t_slow / t_fast:7.1f}x")


if __name__ == "__main__":
    main()
