#!/usr/bin/env python3
"""Parser robustness experiment: hammer parse_trig with mutated documents.

Every input must either parse or raise ParseError; anything else (crash,
hang) is a bug. Prints throughput and the slowest single parse.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "tests"))

from corpusgen import FUZZ_SNIPPETS, mutate_text  # noqa: E402

from fdokit.trig import ParseError, parse_trig  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--inputs", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--hang-threshold", type=float, default=5.0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    started = time.perf_counter()
    parsed = errored = 0
    worst = 0.0
    worst_input = ""
    for _ in range(args.inputs):
        text = mutate_text(rng, rng.choice(FUZZ_SNIPPETS))
        begun = time.perf_counter()
        try:
            parse_trig(text)
            parsed += 1
        except ParseError:
            errored += 1
        took = time.perf_counter() - begun
        if took > worst:
            worst, worst_input = took, text

    elapsed = time.perf_counter() - started
    print(
        f"{args.inputs} inputs in {elapsed:.1f}s "
        f"({args.inputs / elapsed:,.0f}/s): {parsed} parsed, {errored} rejected"
    )
    print(f"slowest parse: {worst * 1000:.2f}ms on {worst_input[:60]!r}")
    if worst > args.hang_threshold:
        print("HANG suspected", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
