"""Time the Gain^d scoring pass on both kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Every case scores all unordered state pairs of one automaton, which is what
a reduction does on its first iteration.  Both backends must return the same
scores; the script checks that before reporting timings.
"""
import argparse
import random
import time

import numpy as np

from procred import kernel
from procred.automata import lift_nfa
from procred.generators import counter_word_nfa, figure1_nfa, from_edges, random_nfa
from procred.search import SearchConfig, reduce


def cases():
    yield "figure1", lift_nfa(figure1_nfa()), 10, None
    yield "x a^100 y, d=10", lift_nfa(counter_word_nfa(100)), 10, None
    yield "x a^100 y, d=49", lift_nfa(counter_word_nfa(100)), 49, None
    a = lift_nfa(random_nfa(13, 3, 0.25, random.Random(5)))
    yield f"random, {len(a.states)} states", a, 10, None
    partly, _ = reduce(random_nfa(40, 3, 0.06, random.Random(9)), SearchConfig(max_iterations=3))
    yield f"random, {len(partly.states)} states, 3 procedures", partly, 10, None
    rng = random.Random(1)
    edges = {(rng.randrange(150), rng.choice("abcd"), rng.randrange(150)) for _ in range(500)}
    a = lift_nfa(from_edges(sorted(edges), {0}, {149}))
    # large inputs run with a lowered per-root budget, as reduce() does
    yield f"sparse random, {len(a.states)} states, budget 2000", a, 10, 2000


def run(k, depth, budget, name):
    roots = np.stack(np.triu_indices(k.n, 1), axis=1).astype(np.int64)
    started = time.perf_counter()
    scores, hits = kernel.score_roots(k, roots, depth, budget, name)
    return time.perf_counter() - started, np.asarray(scores), np.asarray(hits, dtype=bool)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--budget", type=int, default=100_000)
    args = parser.parse_args()
    names = sorted(kernel.BACKENDS)
    if "compiled" not in names:
        print("compiled backend not available; timing the Python fallback only")
    print(f"{'case':42} {'roots':>7} " + " ".join(f"{n + ' [s]':>14}" for n in names) + "   speedup")
    for label, a, depth, budget in cases():
        k = kernel.prepare(a)
        best = {}
        results = {}
        for name in names:
            times = []
            for _ in range(args.repeat):
                elapsed, scores, hits = run(k, depth, budget or args.budget, name)
                times.append(elapsed)
            best[name] = min(times)
            results[name] = (scores, hits)
        ref = results[names[0]]
        for name in names[1:]:
            assert np.array_equal(results[name][0], ref[0]) and np.array_equal(results[name][1], ref[1]), label
        speedup = best["python"] / best["compiled"] if "compiled" in best and best["compiled"] > 0 else float("nan")
        n_roots = k.n * (k.n - 1) // 2
        print(f"{label:42} {n_roots:7d} " + " ".join(f"{best[n]:14.4f}" for n in names) + f"   {speedup:7.1f}x")


if __name__ == "__main__":
    main()
