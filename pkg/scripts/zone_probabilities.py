"""Monte Carlo zone probabilities P(C_k in zone (i, j)) for the chain process.

    python scripts/zone_probabilities.py --n 10002 --trials 20000 --seed 0
"""

import argparse
import itertools

from gxsperner.probe.chain import ZoneIndex, chain_length, estimate_zone_probs, zone_radius


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=10002)
    parser.add_argument("--trials", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    K = chain_length(args.n)
    radius = zone_radius(args.n)
    ks = sorted({0, K // 2, K})
    print(f"n={args.n} K={K} zone radius={radius} trials={args.trials}")
    print("i,j," + ",".join(f"k={k}" for k in ks))
    for i, j in itertools.product(range(-radius, radius + 1), repeat=2):
        probs = estimate_zone_probs(args.n, ZoneIndex(args.n, i, j), ks, args.trials, args.seed)
        print(f"{i},{j}," + ",".join(f"{probs[k][0]:.4f}+-{probs[k][1]:.4f}" for k in ks))


if __name__ == "__main__":
    main()
