import itertools
import random

import pytest

from bmw_duality import tangles as tg
from bmw_duality.linalg import Mat, rref, vec_apply
from bmw_duality.rep_sp import (RepContext, alpha_power, beta_inverse, bmw_generators,
                                build_beta_gamma, calibrate, hom_shift, rt_eval, uq_convention,
                                uq_generators, weight_space)
from bmw_duality.scalars import FieldSpec, loop_value
from bmw_duality.suites import run_suite

G = FieldSpec.generic()


def test_context_data():
    ctx = RepContext(3, 2)
    assert ctx.rho == [3, 2, 1, -1, -2, -3]
    assert ctx.eps == [1, 1, 1, -1, -1, -1]
    for i in range(6):
        assert ctx.rho[ctx.prime(i)] == -ctx.rho[i]
        assert ctx.eps[ctx.prime(i)] == -ctx.eps[i]
    assert ctx.basis_tuple(ctx.basis_index((5, 0))) == (5, 0)


def test_alpha_m1():
    cc = build_beta_gamma(RepContext(1, 2))
    # v1 (x) v2 has index 1, v2 (x) v1 index 2
    assert cc.alpha == {1: G.q_power(-1), 2: -G.q}


@pytest.mark.parametrize("m", [1, 2, 3])
def test_gamma_structure(m):
    ctx = RepContext(m, 2)
    cc = build_beta_gamma(ctx)
    x = loop_value(m, G)
    assert vec_apply(cc.alpha, cc.gamma) == {k: v * x for k, v in cc.alpha.items()}
    assert rref(cc.gamma).dim == 1
    # gamma' is the cap followed by the cup
    assert cc.E_functional @ cc.C == cc.gamma
    assert (cc.C @ cc.E_functional).to_dense() == [[x]]
    ident = Mat.identity(ctx.D ** 2, G)
    assert cc.beta @ beta_inverse(ctx) == ident
    assert cc.beta - beta_inverse(ctx) == (ident - cc.gamma).scale(G.q - G.q_power(-1))


def test_gamma_entries_against_formula():
    # oracle: entries of sum_{i,j} q^(rho_j - rho_i) eps_i eps_j E_{i,j'} (x) E_{i',j}
    ctx = RepContext(2, 2)
    D, rho, eps, pr = ctx.D, ctx.rho, ctx.eps, ctx.prime
    gamma = build_beta_gamma(ctx).gamma
    for i, j in itertools.product(range(D), repeat=2):
        # E_{i,j'} (x) E_{i',j} sends v_{j'} (x) v_j to v_i (x) v_{i'}
        want = G.q_power(rho[j] - rho[i]) * (eps[i] * eps[j])
        assert gamma.rows[pr(j) * D + j][i * D + pr(i)] == want


def test_bmw_generators_n2_is_gamma():
    ctx = RepContext(2, 2)
    assert bmw_generators(ctx)[0][1] == build_beta_gamma(ctx).gamma


@pytest.mark.parametrize("m,n", [(1, 4), (2, 3), (2, 4)])
def test_relations_sample(m, n):
    assert all(r.passed for r in run_suite("relations", RepContext(m, n)))


def test_closed_loop_and_skein():
    ctx = RepContext(1, 2)
    loop = rt_eval(ctx, tg.parse("A ; U"))
    assert loop.to_dense() == [[-(G.q_power(2) + G.q_power(-2))]]
    lhs = rt_eval(ctx, tg.parse("X + {-1}.Xi"))
    rhs = rt_eval(ctx, tg.parse("{q - q^-1}.(I * I + {-1}.(U ; A))"))
    assert lhs == rhs


def test_braid_words_at_2_3():
    ctx = RepContext(2, 3)
    a = rt_eval(ctx, tg.bmw_word(3, ["T1", "T2", "T1"]))
    b = rt_eval(ctx, tg.bmw_word(3, ["T2", "T1", "T2"]))
    assert a == b


def test_word_evaluation_matches_generators():
    ctx = RepContext(2, 3)
    gens = bmw_generators(ctx)
    M = rt_eval(ctx, tg.bmw_word(3, ["T1", "E2", "T2^-1"]))
    T2inv = rt_eval(ctx, tg.bmw_word(3, ["T2^-1"]))
    assert M == gens[0][0] @ gens[1][1] @ T2inv
    assert rt_eval(ctx, tg.bmw_word(2, ["T1", "T1^-1"])) == Mat.identity(16, G)


def _random_tangles(rng, count, max_width=4):
    out = []
    while len(out) < count:
        e = tg.random_tangle(rng, max_width=max_width)
        if e.src + e.dst <= 4:
            out.append(e)
    return out


@pytest.mark.parametrize("fieldname", ["generic", "zeta:3"])
def test_functoriality_on_random_tangles(fieldname):
    ctx = RepContext(1, 2, FieldSpec.from_descriptor(fieldname))
    rng = random.Random(11)
    for a in _random_tangles(rng, 25):
        b = tg.random_tangle(rng, src=a.dst, depth=2, max_width=4)
        assert rt_eval(ctx, tg.Compose(a, b)) == rt_eval(ctx, a) @ rt_eval(ctx, b)
        assert rt_eval(ctx, tg.Tensor(a, b)) == rt_eval(ctx, a).kron(rt_eval(ctx, b))


def test_double_dual_on_20_random():
    ctx = RepContext(1, 2)
    rng = random.Random(3)
    for e in _random_tangles(rng, 20):
        assert rt_eval(ctx, tg.dual(tg.dual(e))) == rt_eval(ctx, e)


def test_dual_of_identity_and_cap():
    ctx = RepContext(2, 2)
    assert rt_eval(ctx, tg.dual(tg.I)) == Mat.identity(4, G)
    assert rt_eval(ctx, tg.dual(tg.U)).shape == (1, 16)


def test_rt_eval_shapes():
    ctx = RepContext(2, 1)
    assert rt_eval(ctx, tg.parse("A")).shape == (1, 16)
    assert rt_eval(ctx, tg.parse("U")).shape == (16, 1)
    assert rt_eval(ctx, tg.parse("I^0")).to_dense() == [[1]]


@pytest.mark.parametrize("m", [1, 2])
def test_hom_shift_inverse(m):
    ctx = RepContext(m, 1)
    rng = random.Random(m)
    D = ctx.D
    for n, s, t in itertools.product(range(4), repeat=3):
        if n + s + t > 4 or t == 0:
            continue
        M = Mat.from_dense([[G(rng.randint(-2, 2)) for _ in range(D ** (s + t))]
                            for _ in range(D ** n)], G)
        N = Mat.from_dense([[G(rng.randint(-2, 2)) for _ in range(D ** s)]
                            for _ in range(D ** (n + t))], G)
        assert hom_shift(ctx, hom_shift(ctx, M, "FU", t), "FA", t) == M
        assert hom_shift(ctx, hom_shift(ctx, N, "FA", t), "FU", t) == N


def test_hom_shift_trivial_and_errors():
    ctx = RepContext(1, 1)
    ident = Mat.identity(2, G)
    assert hom_shift(ctx, ident, "FU", 0) == ident
    with pytest.raises(ValueError):
        hom_shift(ctx, ident, "FU", 2)
    with pytest.raises(ValueError):
        hom_shift(ctx, ident, "sideways", 1)


def test_uq_k_diagonal_and_commuting():
    ctx = RepContext(2, 3)
    ops = uq_generators(ctx)
    assert all(K.is_diagonal() for K in ops["K"])
    assert all(r.passed for r in run_suite("uq-commute", ctx))


def test_alpha_is_trivial():
    ctx = RepContext(2, 2)
    ops = uq_generators(ctx)
    alpha = build_beta_gamma(ctx).alpha
    for E, F, K in zip(ops["E"], ops["F"], ops["K"]):
        assert vec_apply(alpha, E) == {} and vec_apply(alpha, F) == {}
        assert vec_apply(alpha, K) == alpha


def test_uq_serre_type_relation_on_v():
    # [E_i, F_i] = (K_i - K_i^-1)/(q_i - q_i^-1) on the natural module
    ctx = RepContext(2, 1)
    ops = uq_generators(ctx)
    for i in range(2):
        qi = G.q if i < 1 else G.q_power(2)
        lhs = ops["F"][i] @ ops["E"][i] - ops["E"][i] @ ops["F"][i]
        rhs = (ops["K"][i] - ops["Kinv"][i]).scale(G.one / (qi - qi.inverse()))
        # row convention reverses products, so [E,F] appears as F@E - E@F
        assert lhs == rhs


def test_calibration_same_across_fields():
    conv = {calibrate(2, FieldSpec.from_descriptor(d))[0]
            for d in ["generic", "modp:5", "zeta:2", "zeta:5/3"]}
    assert conv == {"K-left"}
    assert uq_convention(RepContext(1, 2))["sign"] == -1


def test_weight_spaces():
    ctx = RepContext(2, 3)
    top = weight_space(ctx, (3, 0))
    assert top.dim == 1 and top.rows[0] == {0: G.one}
    total = sum(weight_space(ctx, w).dim for w in set(ctx.weights))
    assert total == 64
    assert weight_space(RepContext(1, 2), (0,)).dim == 2
    with pytest.raises(ValueError):
        weight_space(ctx, (1, 0, 0))


def test_alpha_power():
    ctx = RepContext(1, 4)
    a2 = alpha_power(ctx, 2)
    assert len(a2) == 4
    assert a2[ctx.basis_index((0, 1, 0, 1))] == G.q_power(-2)
