#!/usr/bin/env python3
"""Wasserstein error of the damped estimate as the degree grows.

Builds a random symmetric matrix with a known spectrum, runs the idealized
and perturbation-robust constructions across degrees, and prints a small
table of W1 errors against the 18/N and 36/N budgets. Useful as a sanity
study of how loose the worst-case rates are on typical spectra.

    python scripts/accuracy_vs_degree.py --n 300 --seed 1
"""

import argparse

import numpy as np

from specden import (
    dense_eigenvalues,
    exact_moments,
    exact_oracle,
    full_kpm,
    idealized_kpm,
    jackson_coefficients,
    perturbed_moments,
    w1_density_vs_spectrum,
)
from specden.moments import MomentVector
from specden.oracles import SymmetricMatrix


def run():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=300)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--degrees", type=int, nargs="+",
                        default=[8, 16, 32, 64, 128, 256])
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    lam = rng.uniform(-1.0, 1.0, args.n)
    basis, _ = np.linalg.qr(rng.standard_normal((args.n, args.n)))
    matrix = SymmetricMatrix.from_dense((basis * lam) @ basis.T)
    truth = dense_eigenvalues(matrix)

    top = max(args.degrees)
    full = exact_moments(exact_oracle(matrix), top)
    print(f"n={args.n}; degrees {args.degrees}")
    print(f"{'N':>5} {'W1 ideal':>10} {'18/N':>8} {'W1 perturbed':>13} {'36/N':>8}")
    for degree in sorted(args.degrees):
        moments = MomentVector(degree=degree, values=full.values[:degree],
                               provenance="exact")
        coeffs = jackson_coefficients(degree)
        ideal = w1_density_vs_spectrum(idealized_kpm(moments, coeffs), truth)
        noisy = perturbed_moments(moments, 1.0 / degree**2, signs=np.ones(degree))
        robust = w1_density_vs_spectrum(full_kpm(noisy, coeffs), truth)
        print(f"{degree:>5} {ideal:>10.5f} {18 / degree:>8.4f} "
              f"{robust:>13.5f} {36 / degree:>8.4f}")


if __name__ == "__main__":
    run()
