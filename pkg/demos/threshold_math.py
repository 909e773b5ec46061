"""
The closed forms behind the two thresholds
==========================================

Every user self-tests two numbers: its serving-link gain against eta_tr and
the interference it would generate against eta_I. Both tests have exact
probability laws, and those laws say how the thresholds should scale. This
script walks through them with no Monte Carlo at all, then cross-checks one
corner with simulation.
"""

import math

import numpy as np

from dossim import (
    DosParams,
    all_fail_trend,
    chi2_cdf,
    chi2_cdf_poly_bound,
    eta_tr_for,
    mc_at_least_one,
    prob_at_least_one,
    qualification_probability,
)

# The serving gain is Exp(1), so P(pass signal) = exp(-eta_tr). Choosing
# eta_tr = epsilon * ln N makes that probability N^(-epsilon): strict
# enough to keep only strong users, loose enough that someone remains.
for N in (100, 1_000, 10_000):
    eta = eta_tr_for(N, 0.5)
    print(f"N={N:6d}: eta_tr={eta:5.2f}, pass probability {math.exp(-eta):.4f}")

# The generated interference is a sum of K-1 independent Exp(1) gains; its
# CDF is the chi-square law with 2(K-1) degrees of freedom at twice the
# argument. Near zero it behaves like a polynomial of degree K-1, and a
# simple coefficient makes that a rigorous lower bound on [0, 2).
print("\ninterference-sum CDF and its polynomial floor, K=3:")
for x in (0.1, 0.5, 1.0, 1.9):
    print(
        f"  x={x:3.1f}: cdf={chi2_cdf(3, x):.5f}  "
        f"floor={chi2_cdf_poly_bound(3, x):.5f}"
    )

# Both tests together: per-user pass probability, then the chance that a
# cell of N users has at least one qualifier.
params = DosParams(eta_tr=eta_tr_for(100, 0.5), eta_I=0.5)
snr = 10.0
q = qualification_probability(3, snr, params)
p_any = prob_at_least_one(3, 100, snr, params)
print(f"\nK=3, N=100, snr={snr:g}: per-user q={q:.5f}, at-least-one={p_any:.4f}")

freq = mc_at_least_one(3, 100, snr, params, 20_000, np.random.default_rng(1))
print(f"simulated at-least-one over 20000 trials: {freq:.4f}")

# Why the scaling law holds: with x users each passing at rate f(x), the
# no-qualifier probability is (1 - f(x))^x. It dies out exactly when
# x * f(x) grows; f(x) = 1/x is the knife edge, stuck at 1/e forever.
grid = 10.0 ** np.arange(1, 7)
print("\nno-qualifier probability as the user count grows:")
for label, f in (
    ("f=1/x      ", lambda v: 1.0 / v),
    ("f=2/x      ", lambda v: 2.0 / v),
    ("f=x^(-1/2) ", lambda v: v**-0.5),
):
    t = all_fail_trend(f, grid)
    print(f"  {label}: {t.all_fail_prob[0]:.3g} -> {t.all_fail_prob[-1]:.3g}")
