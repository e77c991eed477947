"""Relation suites: BMW presentation, tangle moves under F, quantum group commutation.

Each suite returns a list of ``CheckResult``; a family passes only if every
instance in it is an exact matrix identity.
"""

from dataclasses import dataclass

from .linalg import Mat, vec_apply
from .rep_sp import (RepContext, bmw_generators, bmw_inverse_generators,
                     build_beta_gamma, rt_eval, uq_generators)
from . import tangles as tg


@dataclass(frozen=True)
class CheckResult:
    suite: str
    family: str
    m: int
    n: int
    field: str
    passed: bool
    instances: int
    detail: str = ""

    def as_dict(self):
        return {"suite": self.suite, "family": self.family, "m": self.m, "n": self.n,
                "field": self.field, "passed": self.passed, "instances": self.instances,
                "detail": self.detail}


class _Collector:
    def __init__(self, suite, ctx, families=()):
        self.suite, self.ctx = suite, ctx
        # families listed up front are reported even when vacuous (0 instances)
        self.fam = {f: [True, 0, []] for f in families}

    def check(self, family, ok, label=""):
        self.fam.setdefault(family, [True, 0, []])
        self.fam[family][1] += 1
        if not ok:
            self.fam[family][0] = False
            self.fam[family][2].append(label)

    def results(self):
        c = self.ctx
        return [CheckResult(self.suite, fam, c.m, c.n, c.field.descriptor, ok, cnt,
                            "failed: " + ", ".join(f) if f else "")
                for fam, (ok, cnt, f) in self.fam.items()]


BMW_FAMILIES = (
    "inverse", "skein", "E^2 = xE", "braid", "far commuting",
    "EEE = E", "TTE = EE", "ET = TE = r^-1 E", "ETE = rE", "far commuting with E",
)


def bmw_relations(ctx):
    """The defining relations of the BMW algebra for (beta'_i, gamma'_i)."""
    col = _Collector("relations", ctx, BMW_FAMILIES)
    F = ctx.field
    gens = bmw_generators(ctx)
    T = [b for b, _ in gens]
    E = [g for _, g in gens]
    Ti = bmw_inverse_generators(ctx)
    x, r = ctx.x, ctx.r
    rinv = F.one / r
    qq = F.q - F.q_power(-1)
    one = Mat.identity(ctx.dim, F)
    k = len(T)
    for i in range(k):
        col.check("inverse", T[i] @ Ti[i] == one and Ti[i] @ T[i] == one, f"T{i + 1}")
        col.check("skein", T[i] - Ti[i] == (one - E[i]).scale(qq), f"T{i + 1}")
        col.check("E^2 = xE", E[i] @ E[i] == E[i].scale(x), f"E{i + 1}")
        TE = T[i] @ E[i]
        col.check("ET = TE = r^-1 E", TE == E[i].scale(rinv) and E[i] @ T[i] == TE, f"{i + 1}")
        for j in range(i + 2, k):
            col.check("far commuting", T[i] @ T[j] == T[j] @ T[i], f"T{i + 1}T{j + 1}")
            col.check("far commuting with E",
                      T[i] @ E[j] == E[j] @ T[i] and E[i] @ T[j] == T[j] @ E[i]
                      and E[i] @ E[j] == E[j] @ E[i], f"{i + 1},{j + 1}")
    for i in range(k - 1):
        a, b = i, i + 1
        col.check("braid", T[a] @ T[b] @ T[a] == T[b] @ T[a] @ T[b], f"{a + 1}")
        col.check("EEE = E", E[a] @ E[b] @ E[a] == E[a] and E[b] @ E[a] @ E[b] == E[b], f"{a + 1}")
        col.check("TTE = EE", T[a] @ T[b] @ E[a] == E[b] @ E[a]
                  and T[b] @ T[a] @ E[b] == E[a] @ E[b], f"{a + 1}")
        col.check("ETE = rE", E[a] @ T[b] @ E[a] == E[a].scale(r)
                  and E[b] @ T[a] @ E[b] == E[b].scale(r), f"{a + 1}")
    return col.results()


def _on_strands(core, i, n):
    return tg.tensor(tg.identity(i), core, tg.identity(n - i - core.src))


def _kinks():
    # positive and negative curl, each 1 -> 1
    k1 = tg.compose(tg.tensor(tg.I, tg.A), tg.tensor(tg.X, tg.I), tg.tensor(tg.I, tg.U))
    k2 = tg.compose(tg.tensor(tg.I, tg.A), tg.tensor(tg.Xi, tg.I), tg.tensor(tg.I, tg.U))
    return k1, k2


def tangle_relations(ctx):
    """Skein, closed loop, Reidemeister II/III and kinks, evaluated through F."""
    col = _Collector("tangle", ctx)
    F = ctx.field
    x, r = ctx.x, ctx.r
    n = max(ctx.n, 2)
    ev = lambda e: rt_eval(ctx, e)
    loop = ev(tg.compose(tg.A, tg.U))
    col.check("Q4 closed loop = x", loop == Mat.identity(1, F).scale(x))
    qq = tg.parse("{q - q^-1}.(I * I) + {q^-1 - q}.(U ; A)")
    skein = tg.Sum((tg.X, tg.Scale(-1, tg.Xi)))
    ident_n = ev(tg.identity(n))
    for i in range(n - 1):
        col.check("Q1 skein", ev(_on_strands(skein, i, n)) == ev(_on_strands(qq, i, n)), f"{i + 1}")
        col.check("RII", ev(_on_strands(tg.Compose(tg.X, tg.Xi), i, n)) == ident_n
                  and ev(_on_strands(tg.Compose(tg.Xi, tg.X), i, n)) == ident_n, f"{i + 1}")
    lhs = tg.parse("X * I ; I * X ; X * I")
    rhs = tg.parse("I * X ; X * I ; I * X")
    for i in range(n - 2):
        col.check("RIII", ev(_on_strands(lhs, i, n)) == ev(_on_strands(rhs, i, n)), f"{i + 1}")
    k1, k2 = _kinks()
    one = Mat.identity(ctx.D, F)
    vals = {ev(k1), ev(k2)}
    want = {one.scale(r), one.scale(F.one / r)}
    col.check("kink pair = {r, r^-1}", len(vals) == 2 and vals == want)
    col.check("zig-zag", ev(tg.dual(tg.I)) == one
              and ev(tg.compose(tg.tensor(tg.A, tg.I), tg.tensor(tg.I, tg.U))) == one)
    return col.results()


def uq_commute(ctx):
    """Quantum group generators commute with the BMW generators; alpha is trivial."""
    col = _Collector("uq-commute", ctx)
    ops = uq_generators(ctx)
    bmw = bmw_generators(ctx)
    for kind in ("E", "F", "K", "Kinv"):
        for i, M in enumerate(ops[kind]):
            if kind.startswith("K"):
                col.check("K diagonal", M.is_diagonal(), f"{kind}{i + 1}")
            for j, (B, G) in enumerate(bmw):
                col.check("commutes with beta'", M @ B == B @ M, f"{kind}{i + 1},{j + 1}")
                col.check("commutes with gamma'", M @ G == G @ M, f"{kind}{i + 1},{j + 1}")
    c2 = RepContext(ctx.m, 2, ctx.field)
    alpha = build_beta_gamma(c2).alpha
    ops2 = uq_generators(c2)
    for kind in ("E", "F", "K"):
        for i, M in enumerate(ops2[kind]):
            want = alpha if kind == "K" else {}
            col.check("alpha trivial", vec_apply(alpha, M) == want, f"{kind}{i + 1}")
    return col.results()


SUITES = {"relations": bmw_relations, "tangle": tangle_relations, "uq-commute": uq_commute}


def run_suite(name, ctx):
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return fn(ctx)
