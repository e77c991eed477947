"""The same dimensions over six fields: Q(q), F_5(q), F_7(q) and q = 2, 3, 5/3.

Run: python3 demos/cross_field.py
"""

import time

from bmw_duality.rep_sp import RepContext
from bmw_duality.scalars import FieldSpec
from bmw_duality.schur_weyl import duality_report, harmonic_tensors, w_subspace

FIELDS = [FieldSpec.generic(), FieldSpec.modp(5), FieldSpec.modp(7),
          FieldSpec.specialized(2), FieldSpec.specialized(3), FieldSpec.specialized(5, 3)]

print(f"{'field':<10} {'W_1':>4} {'quot':>5} {'HT_0':>5} {'image':>6} {'comm':>5} {'secs':>6}")
for F in FIELDS:
    t0 = time.time()
    ctx = RepContext(2, 3, F)
    r = duality_report(ctx, 1)
    print(f"{F.descriptor:<10} {r.dim_W:>4} {r.dim_quotient:>5} "
          f"{harmonic_tensors(ctx, 0).dim:>5} {r.dim_image_phi_f:>6} "
          f"{r.dim_commutant_quotient:>5} {time.time() - t0:>6.2f}")

print("\n(m, n) = (2, 4) at the specialized fields, W_f for f = 0, 1, 2:")
for F in FIELDS[1:]:
    ctx = RepContext(2, 4, F)
    print(f"  {F.descriptor:<10}", [w_subspace(ctx, f).dim for f in range(3)])
