#!/usr/bin/env python3
"""How hard can the coupling push the low spectral subspace?

Scans ||W|| over several decades on a fixed subordinated problem and prints
the projection difference against its universal ceiling sqrt(2)/2 together
with the angular-operator norm against its ceiling 1.  Both saturate from
below and never cross.
"""

import numpy as np

from blockdiag.bounds import DAVIS_KAHAN_BOUND, davis_kahan_check
from blockdiag.generate import random_subordinated_problem
from blockdiag.model import assemble


def main():
    rng = np.random.default_rng(12)
    base = random_subordinated_problem(rng, 4, 3, 1.0, 1.0)
    print(f"{'|W|':>10} {'proj_diff':>14} {'sqrt2/2':>10} {'|X|':>14}")
    for scale in np.logspace(-3, 3, 13):
        p = assemble(base.a0, base.a1, scale * base.w)
        rep = davis_kahan_check(p)
        print(f"{scale:>10.3g} {rep.proj_diff:>14.10f} {DAVIS_KAHAN_BOUND:>10.7f} "
              f"{rep.x_norm:>14.10f}")
        assert rep.bound_satisfied and rep.contractive


if __name__ == "__main__":
    main()
