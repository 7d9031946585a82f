"""Momentum-space wave functions of the anisotropic scatterer.

The wave operator maps a localized particle at site x to a pair of momentum
functions: the transmitted or reflected particle amplitude and the hole
amplitude created by the anisotropic bond.  Here the closed form is compared
with the time-dependent definition evaluated on a finite lattice.
"""
import numpy as np

from nessxy import oracle, scattering

gamma, x, a = 0.8, -5, 0
img = scattering.wave_apply(gamma, x, a)
k, p, h = img.on_grid(16)
print(f"closed-form image of site {x} at gamma = {gamma}")
print(f"{'k':>8} {'|particle|':>11} {'|hole|':>9}")
for ki, pi, hi in zip(k, p, h):
    print(f"{ki:8.4f} {abs(pi):11.6f} {abs(hi):9.6f}")

# Missing norm is the weight of the bound states at site x.
print(f"\nnorm of the image: {img.norm():.10f}")
states = oracle.bound_states(gamma, 200, a=a)
weight = sum(abs(vec[x + 200]) ** 2 for _, vec in states)
print(f"sqrt(1 - bound-state weight): {np.sqrt(1 - weight):.10f} ({len(states)} bound states)")

# The finite-time lattice image converges slowly: modes near the band edges
# have small group velocity and reach the scatterer late.
for T, trunc in ((25, 100), (50, 200), (100, 400)):
    kk, pn, hn, _ = oracle.numerical_wave_apply(gamma, x, a, T=T, trunc=trunc)
    dist = np.sqrt(np.mean(np.abs(pn - img.particle(kk)) ** 2 + np.abs(hn - img.hole(kk)) ** 2))
    print(f"T = {T:4d}, lattice +-{trunc}: L2 distance {dist:.4f}")
