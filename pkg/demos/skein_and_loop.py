"""Tangles to matrices: the closed loop, the skein relation and the two kinks.

Run: python3 demos/skein_and_loop.py
"""

from bmw_duality import tangles as tg
from bmw_duality.linalg import Mat
from bmw_duality.rep_sp import RepContext, rt_eval
from bmw_duality.scalars import format_scalar

for m in (1, 2):
    ctx = RepContext(m, 2)
    F = ctx.field
    print(f"== Sp(2m) with m={m}, dim V = {ctx.D}")

    loop = rt_eval(ctx, tg.parse("A ; U"))
    print("closed loop A ; U        =", format_scalar(loop.to_dense()[0][0]))
    print("loop value x             =", format_scalar(ctx.x))

    lhs = rt_eval(ctx, tg.parse("X + {-1}.Xi"))
    rhs = rt_eval(ctx, tg.parse("{q - q^-1}.(I * I) + {q^-1 - q}.(U ; A)"))
    print("X - Xi = (q-q^-1)(1 - E) :", lhs == rhs)

    one = Mat.identity(ctx.D, F)
    for name, text in [("positive kink", "I * A ; X * I ; I * U"),
                       ("negative kink", "I * A ; Xi * I ; I * U")]:
        K = rt_eval(ctx, tg.parse(text))
        c = K.to_dense()[0][0]
        print(f"{name:<25}= {format_scalar(c)} * id  (scalar: {K == one.scale(c)})")
    print("r                        =", format_scalar(ctx.r))
    print()
