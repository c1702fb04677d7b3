#!/usr/bin/env python3
"""Standalone fuzz harness: pipeline vs the independent deciders.

Draws random CBoxes, classifies them through the full reduction in both
modes, and compares every name pair against the completion oracle; every
fifth draw instead exercises the extended language (guards, n-ary roles,
restrictions) with a mode-agreement and bounded-countermodel check.
Failing seeds are printed so they can be replayed.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import replace

from loctame import oracle, pipeline, randgen
from loctame import reduce as red


def check_seed(seed: int) -> list[str]:
    failures: list[str] = []
    rng = random.Random(seed)
    if seed % 5 == 4:
        cbox = randgen.extended_cbox(rng)
        query = randgen.random_query(rng, cbox)
        chase = pipeline.check_subsumption(cbox, query, mode=red.CHASE)
        inst = pipeline.check_subsumption(cbox, query, mode=red.INSTANTIATE)
        if chase.subsumed != inst.subsumed:
            failures.append(f"seed {seed}: modes disagree on {query}")
        if chase.subsumed:
            probe = replace(cbox, queries=(query,))
            model = oracle.bounded_model_search(probe, query, max_size=3)
            if model is not None:
                failures.append(f"seed {seed}: countermodel for {query}")
        return failures

    cbox = randgen.normal_cbox(rng)
    subs = oracle.completion_classify(cbox)
    for mode in (red.CHASE, red.INSTANTIATE):
        cls = pipeline.classify(cbox, mode=mode)
        for a in cls.names:
            below = subs[a]
            inconsistent = oracle.BOT_KEY in below
            for b in cls.names:
                if cls.holds(a, b) != (b in below or inconsistent):
                    failures.append(
                        f"seed {seed}: {mode} disagrees with completion "
                        f"on {a} sub {b}")
    return failures


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=200,
                        help="number of random instances (default 200)")
    parser.add_argument("--seed", type=int, default=0,
                        help="first seed; instances use seed..seed+samples-1")
    args = parser.parse_args(argv)

    start = time.perf_counter()
    failures: list[str] = []
    for seed in range(args.seed, args.seed + args.samples):
        failures.extend(check_seed(seed))
    secs = time.perf_counter() - start

    for line in failures:
        print(line, file=sys.stderr)
    verdict = "PASS" if not failures else "FAIL"
    print(f"cross-check {verdict}: {args.samples} instances, "
          f"{len(failures)} failures, {secs:.1f}s")
    return 0 if not failures else 1


if __name__ == "__main__":
    raise SystemExit(main())
