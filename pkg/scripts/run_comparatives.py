#!/usr/bin/env python3
"""Comparative statics experiments.

Checks reflexivity of the tolerance orders, agreement between the two
routes to shared optimal perceptions (value linearity along the mixture
segment versus overlapping argmax sets), and the benefit order between a
family and a coarsening of it.
"""

import argparse
import sys

import numpy as np

from ambicap import (
    dominates_benefit,
    more_tolerant_ambiguity,
    more_tolerant_ea_randomization,
    shares_optimal_perception_detail,
)
from ambicap.sampling import LotterySampler
from ambicap.stock import model_5051, random_box_5051_family


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=500)
    parser.add_argument("--pairs", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    failures = 0

    model = model_5051(grid_resolution=9)

    sampler = LotterySampler(model.states, seed=args.seed)
    for name, fn in (("ea-randomization", more_tolerant_ea_randomization),
                     ("ambiguity", more_tolerant_ambiguity)):
        verdict = fn(model, model, sampler, args.samples)
        print(f"more-tolerant-{name} reflexive: {verdict.holds} "
              f"({verdict.samples_used} samples)")
        failures += 0 if verdict.holds else 1

    pair_sampler = LotterySampler(model.states, seed=args.seed + 1)
    agree = 0
    for _ in range(args.pairs):
        P, Q = pair_sampler.pair()
        linear, intersects = shares_optimal_perception_detail(model, P, Q)
        agree += linear == intersects
    rate = agree / args.pairs
    print(f"linearity vs argmax overlap: {agree}/{args.pairs} agree ({rate:.2%})")
    failures += 0 if rate >= 0.999 else 1

    rng = np.random.default_rng(args.seed)
    fine = random_box_5051_family(rng, n_members=8)
    coarse = fine[:3]
    benefit_sampler = LotterySampler(model.states, seed=args.seed + 2)
    holds = dominates_benefit(fine, coarse, benefit_sampler, args.pairs)
    print(f"family dominates its own coarsening: {holds}")
    failures += 0 if holds else 1

    print("all clean" if failures == 0 else f"{failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
