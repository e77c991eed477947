"""The truncated duality at one point, step by step.

Run: python3 demos/duality_walkthrough.py [m n f]   (default 2 3 1)
"""

import sys

from bmw_duality.rep_sp import RepContext
from bmw_duality.schur_weyl import (bmw_ideal, cyclic_bmw_span, duality_report,
                                    harmonic_tensors, image_algebra, maximal_vectors,
                                    osc_mult, pi_f, truncation, w_subspace, weyl_dim,
                                    z_candidates)

m, n, f = map(int, sys.argv[1:4]) if len(sys.argv) > 3 else (2, 3, 1)
ctx = RepContext(m, n)
print(f"V^(x){n} for Sp({2 * m}), total dimension {ctx.dim}")

B = image_algebra(ctx)
print(f"image of the BMW algebra: dim {B.dim}")
for g in range(n // 2 + 2):
    print(f"  ideal B^({g}): dim {bmw_ideal(ctx, g).dim}, "
          f"W_{g} = V B^({g}): dim {w_subspace(ctx, g).dim}")

print("\nweights allowed in layer f:", [lam.parts for lam in pi_f(n, f, m)])
W = w_subspace(ctx, f)
T = truncation(ctx, f)
print(f"truncation to those weights has dim {T.dim}; equal to W_{f}: {T == W}")

print("\nmaximal vectors in the top layer of W_f:")
for lam in pi_f(n, f, m):
    if lam.size != n - 2 * f:
        continue
    mv = maximal_vectors(ctx, lam)
    print(f"  lambda={lam.parts}: dim {mv.dim}, oscillating tableaux {osc_mult(lam.parts, n, m)}, "
          f"Weyl module dim {weyl_dim(lam.parts, m)}")
    for c in z_candidates(ctx, f, lam):
        tag = "ok" if c.ok else ("zero" if not c.nonzero else "not maximal")
        print(f"    candidate {c.label!r}: {tag}")
        if c.ok:
            print(f"    its cyclic BMW span equals the maximal vectors: "
                  f"{cyclic_bmw_span(ctx, c.vector) == mv}")

print("\nharmonic layers:", [harmonic_tensors(ctx, g).dim for g in range(n // 2 + 1)])

r = duality_report(ctx, f)
print("\nreport:")
for k, v in r.as_dict().items():
    print(f"  {k:<24} {v}")
