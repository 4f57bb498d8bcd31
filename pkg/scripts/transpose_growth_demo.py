#!/usr/bin/env python3
"""Demonstration: the transposition map is contractive on ell^1-valued
sequences at every exponent, yet no fixed constant K can make the rank
comparison  n <= K n^(1/p)  hold for all n once p > 1.

The first part samples sequence ratios through the toolkit; the second is
plain arithmetic on rank-n projection norms |Q_n|_q = n^(1/q), printed so
the growth of the mismatch is visible.
"""

import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from nclp.algebra import Element, ToleranceConfig, matrix_algebra
from nclp.certify import l1_ratio_lower
from nclp.lp import lp_norm
from nclp.maps import transpose_map


def main() -> int:
    cfg = ToleranceConfig(seed=7)

    print("sampled sequence ratios for blockwise transposition (all <= 1):")
    for p in (1.5, 2.0, 3.0):
        T = transpose_map(matrix_algebra(3), p)
        best, info = l1_ratio_lower(T, p, cfg, budget=25)
        print(f"  p = {p:>3}: best ratio {best:.12f} over {info['samples']} samples")

    print("\nrank-n projection norms in M_64 (weight 1): |Q_n|_q = n^(1/q)")
    alg = matrix_algebra(64)
    worst = 0.0
    for n in (1, 2, 8, 32, 64):
        qn = Element(alg, [np.diag(np.concatenate([np.ones(n), np.zeros(64 - n)]))])
        for q in (1.5, 2.0, 3.0):
            got = lp_norm(qn, q)
            want = n ** (1.0 / q)
            worst = max(worst, abs(got - want) / want)
            print(f"  n={n:3d} q={q:>3}: computed {got:.12f}  analytic {want:.12f}")
    print(f"  worst relative deviation: {worst:.2e}")

    print("\nno fixed K bounds n by K n^(1/p): the first failing n per K")
    for p in (1.5, 2.0, 3.0):
        row = []
        for K in (1.0, 2.0, 5.0, 10.0, 100.0, 1000.0):
            n_star = int(np.ceil(K ** (p / (p - 1.0)))) + 1
            assert n_star > K * n_star ** (1.0 / p)
            row.append(f"K={K:g}: n={n_star}")
        print(f"  p = {p:>3}: " + ", ".join(row))
    return 0


if __name__ == "__main__":
    sys.exit(main())
