#!/usr/bin/env python3
"""Monte Carlo check of the brute-force trial law against exact binomials.

For each desk-scale parameter row, lock fresh vaults, run the attack, and
compare the measured mean trial count with C(r,k)/C(t,k).

Usage: python scripts/attack_trial_law.py [--runs N] [--workers W]
"""

import argparse
import math
import multiprocessing
import random
import statistics

from fuzzyvault import Secret, VaultParams, brute_force_attack, gen_template, lock

ROWS = [
    dict(r=20, t=8, k=3, D=6),
    dict(r=30, t=8, k=3, D=6),
    dict(r=40, t=10, k=4, D=7),
    dict(r=60, t=15, k=6, D=9),
]


def one_run(config):
    row, index = config
    bits = 16 * row["k"] - 8
    template = gen_template(row["t"], seed=1000 + index)
    secret = Secret.random(bits, random.Random(2000 + index))
    params = VaultParams(k=row["k"], t=row["t"], r=row["r"])
    vault, _ = lock(template, secret, params, seed=index)
    exact = math.comb(row["r"], row["k"]) / math.comb(row["t"], row["k"])
    report = brute_force_attack(
        vault, D=row["D"], budget=int(60 * exact) + 100, bits=bits, seed=index
    )
    return report.trials if report.success else None


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--runs", type=int, default=200)
    parser.add_argument("--workers", type=int, default=2)
    args = parser.parse_args()

    print(f"{'r':>4} {'t':>4} {'k':>3} {'exact':>10} {'measured':>10} {'rel err':>8}")
    for row in ROWS:
        exact = math.comb(row["r"], row["k"]) / math.comb(row["t"], row["k"])
        configs = [(row, i) for i in range(args.runs)]
        with multiprocessing.get_context("fork").Pool(args.workers) as pool:
            trials = pool.map(one_run, configs, chunksize=4)
        assert all(t is not None for t in trials), "an attack exhausted its budget"
        mean = statistics.mean(trials)
        print(
            f"{row['r']:>4} {row['t']:>4} {row['k']:>3} {exact:>10.2f} "
            f"{mean:>10.2f} {abs(mean - exact) / exact:>7.1%}"
        )


if __name__ == "__main__":
    main()
