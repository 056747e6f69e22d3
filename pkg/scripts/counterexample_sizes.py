"""Sizes of the counterexample family against binom(n, n/2) for several beta."""

import argparse
from fractions import Fraction

from gxsperner.families import count_counterexample
from gxsperner.lattice import binomial


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, nargs="+", default=[16, 100, 400, 1600, 6400])
    parser.add_argument("--beta", nargs="+", default=["1/2", "1", "2"])
    args = parser.parse_args()

    print("n,beta,size,size/binom(n,n/2)")
    for n in args.n:
        middle = binomial(n, n // 2)
        for beta in args.beta:
            size = count_counterexample(n, Fraction(beta))
            print(f"{n},{beta},{size},{size / middle:.6g}")


if __name__ == "__main__":
    main()
