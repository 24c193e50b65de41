"""What the increment-ratio statistic measures.

The statistic averages psi(d_k, d_{k+1}) = |d_k + d_{k+1}| / (|d_k| + |d_{k+1}|)
over consecutive increments of a sampled path.  Aligned consecutive
increments give 1, cancelling ones give 0, so the average is a roughness
score in [0, 1]: 1 for smooth or monotone paths, lower the rougher the
path.
"""

import numpy as np

import roughir as ri

n = 4096
t = np.arange(n + 1) / n
rng = np.random.default_rng(7)

paths = {
    "straight line": ri.SampledPath(2.0 * t - 1.0),
    "smooth sine": ri.SampledPath(np.sin(4 * np.pi * t)),
    "Brownian motion": ri.sim_brownian(n, seed=1),
    "rough fBm (H=0.2)": ri.sim_fbm(n, 0.2, seed=2),
    "smooth fBm (H=0.8)": ri.sim_fbm(n, 0.8, seed=3),
    "iid noise samples": ri.SampledPath(np.concatenate([[0.0], rng.standard_normal(n)])),
}

print(f"{'path':<22} {'first-order':>12} {'second-order':>13}")
for name, p in paths.items():
    r1 = ri.r_pn(p, 1)
    r2 = ri.r_pn(p, 2)
    print(f"{name:<22} {r1.value:>12.4f} {r2.value:>13.4f}")

print()
print("The second-order statistic of fBm has the closed-form limit "
      "Lambda_2(H):")
for H in (0.2, 0.5, 0.8):
    print(f"  H={H}: limit {ri.Lambda_p(2, H):.4f}")

print()
print("Scale and sign never matter (the ratio is 0-homogeneous):")
p = ri.sim_fbm(n, 0.4, seed=4)
print(f"  R2(X)     = {ri.r_pn(p, 2).value:.6f}")
print(f"  R2(-8*X)  = {ri.r_pn(ri.SampledPath(-8.0 * p.values), 2).value:.6f}")

print()
print("Degenerate inputs are flagged instead of silently scored:")
const = ri.r_pn(ri.SampledPath(np.full(101, 3.0)), 1)
print(f"  constant path: value={const.value}, 0/0 terms={const.zero_over_zero}"
      f"/{const.terms}, degenerate={const.degenerate}")
