"""Compare the pure-Python and compiled bit-matrix kernels.

Times a full law sweep, a random-model law batch, and batched star and
compose calls on each importable backend, printing the ratio when both
are available. The backends' results are asserted equal as a side
effect, so a timing run doubles as an agreement check.

Run from a checkout or an installed environment:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeat 5 --star-size 512
"""

import argparse
import random
import time

from exegete import _purekernels

BACKENDS = [("pure", _purekernels)]
try:
    from exegete import _bitkernels
except ImportError:
    _bitkernels = None
else:
    BACKENDS.append(("compiled", _bitkernels))


def _normalize(result):
    if isinstance(result, tuple):
        return tuple(_normalize(part) for part in result)
    if isinstance(result, list):
        return [_normalize(part) for part in result]
    return result


def _time_best(fn, repeat):
    best = None
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        elapsed = time.perf_counter() - start
        if best is None or elapsed < best:
            best = elapsed
    return best, result


def _workloads(args):
    rng = random.Random(args.seed)
    batch = [
        (rng.getrandbits(36), rng.getrandbits(6), rng.getrandbits(6))
        for _ in range(args.batch)
    ]
    n = args.star_size
    mats = [
        [rng.getrandbits(n) for _ in range(n)] for _ in range(args.star_count)
    ]
    pairs = list(zip(mats, mats[1:] + mats[:1]))
    return [
        (
            f"law sweep over every size-{args.sweep_size} model",
            lambda mod: mod.sweep_exhaustive(args.sweep_size, 0),
        ),
        (
            f"law batch of {args.batch} random size-6 models",
            lambda mod: mod.sweep_models(6, batch, 0),
        ),
        (
            f"star of {args.star_count} random size-{n} relations",
            lambda mod: [mod.star(m, n) for m in mats],
        ),
        (
            f"compose of {args.star_count} random size-{n} pairs",
            lambda mod: [mod.compose(a, b, n) for a, b in pairs],
        ),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="time the kernel backends against each other"
    )
    parser.add_argument(
        "--repeat", type=int, default=3, help="keep the best of N runs"
    )
    parser.add_argument(
        "--sweep-size",
        type=int,
        default=3,
        help="state count for the exhaustive law sweep",
    )
    parser.add_argument(
        "--batch",
        type=int,
        default=10000,
        help="model count for the random size-6 law batch",
    )
    parser.add_argument(
        "--star-size",
        type=int,
        default=128,
        help="state count for the star and compose batches",
    )
    parser.add_argument(
        "--star-count",
        type=int,
        default=50,
        help="relation count for the star and compose batches",
    )
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    names = ", ".join(name for name, _ in BACKENDS)
    print(f"backends: {names} (best of {args.repeat})")
    if _bitkernels is None:
        print("compiled extension not importable, timing the pure backend only")

    for label, work in _workloads(args):
        print(label)
        timings = []
        results = []
        for name, mod in BACKENDS:
            elapsed, result = _time_best(lambda m=mod: work(m), args.repeat)
            timings.append((name, elapsed))
            results.append(_normalize(result))
            print(f"  {name:<9} {elapsed:8.4f}s")
        if len(results) == 2:
            assert results[0] == results[1], f"backends disagree on: {label}"
            ratio = timings[0][1] / timings[1][1]
            print(f"  compiled is {ratio:.1f}x faster")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
