"""Private randomness certified from steering data by semidefinite program.

At the maximally entangled point the two-setting qutrit protocol certifies
log2(3) = 1.585 bits per round -- above the one-bit ceiling of projective
qubit measurements.  At the experimental visibility 0.987 the
violation-constrained program still certifies 1.11 bits.
"""

import numpy as np

from quditsteer import (
    assemblage,
    correlations,
    fourier_mub,
    guessing_probability,
    isotropic,
    lhs_membership,
    steering_functional_two_mubs,
)

mubs = [fourier_mub(3, 1), fourier_mub(3, 2)]
functional = steering_functional_two_mubs(3)

print("visibility   H_min (full table)   H_min (violation only)")
for p in (1.0, 0.987, 0.95, 0.9, 0.8, 0.7):
    table = correlations(isotropic(3, p), mubs, mubs)
    full = guessing_probability(table, 0, bob=mubs, mode="full-table")
    sonly = guessing_probability(
        table, 0, bob=mubs, functional=functional, mode="violation-only"
    )
    print(f"  {p:5.3f}        {full.h_min:8.5f}             {sonly.h_min:8.5f}")

print(f"\none-bit qubit ceiling: 1.0; qutrit maximum: log2(3) = {np.log2(3):.5f}")

p = 0.5
asm = assemblage(isotropic(3, p), mubs)
decision = lhs_membership(asm)
res = guessing_probability(asm, 0)
print(f"\nat p = {p} the assemblage is {'LHS' if decision.is_lhs else 'steerable'}:")
print(f"  Eve guesses perfectly -> P_guess = {res.p_guess:.6f}, no certified bits")
