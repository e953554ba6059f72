"""Hypervolume over time: the weighted-sum solver vs a random-search control.

Runs both on the same instance with the same wall-clock budget, normalizes
with the union of the objective ranges both runs observed, and prints the
solver's per-checkpoint hypervolume next to the control's final value.

Usage: python scripts/anytime_comparison.py --instance a280ish.ttp \
           --time-limit 60 --seed 1
"""

import argparse
import time

from bittp import ObjectiveBounds, WsmConfig, hypervolume, load_instance, normalize, random_search, run
from bittp.cli import _TraceRecorder


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instance", required=True)
    parser.add_argument("--time-limit", type=float, default=60.0)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    inst = load_instance(args.instance)
    print(f"{inst.name}: n={inst.n} m={inst.m}")

    tracer = _TraceRecorder(interval=1.0)
    started = time.perf_counter()
    archive = run(inst, WsmConfig(time_limit=args.time_limit, seed=args.seed), on_cycle=tracer)
    tracer.finalize(time.perf_counter() - started, archive)
    baseline = random_search(inst, seed=args.seed + 1, time_limit=args.time_limit)

    bounds = ObjectiveBounds()
    bounds.merge(archive.bounds)
    bounds.merge(baseline.bounds)

    print(f"{'t[s]':>8}  {'hypervolume':>12}")
    for t, points in tracer.snapshots:
        hv = hypervolume(normalize(points, bounds))
        print(f"{t:8.1f}  {hv:12.6f}")

    hv_solver = hypervolume(normalize(archive.points(), bounds))
    hv_random = hypervolume(normalize(baseline.points(), bounds))
    print(f"\nsolver  front {len(archive):4d}  hv {hv_solver:.6f}")
    print(f"random  front {len(baseline):4d}  hv {hv_random:.6f}")
    if hv_random > 0:
        print(f"ratio {hv_solver / hv_random:.2f}x")


if __name__ == "__main__":
    main()
