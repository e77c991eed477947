import itertools

import pytest
from hypothesis import given, strategies as st

from bmw_duality.linalg import (NotInvariantError, Subspace, commutant, rref, saturate,
                                vec_apply)
from bmw_duality.rep_sp import RepContext, uq_generator_list, uq_generators
from bmw_duality.scalars import FieldSpec
from bmw_duality.schur_weyl import (Partition, bmw_ideal, bmw_ideal_image, cyclic_bmw_span,
                                    dominance_leq, duality_report, harmonic_tensors,
                                    image_algebra, image_sum_check, maximal_vectors, osc_mult,
                                    partitions, pi_f, truncation, w_subspace, weyl_dim,
                                    z_candidates, z_vector)

Z = FieldSpec.specialized(2)


def brute_partitions(k, m):
    out = set()
    for t in itertools.product(range(k + 1), repeat=m):
        if sum(t) == k and list(t) == sorted(t, reverse=True):
            out.add(tuple(p for p in t if p))
    return out


def brute_dominance(lam, mu, bound=14):
    """Oracle: search coefficients of simple roots e_i - e_(i+1), 2e_m."""
    m = len(lam)
    for c in itertools.product(range(bound), repeat=m):
        v = list(lam)
        for i in range(m - 1):
            v[i] += c[i]
            v[i + 1] -= c[i]
        v[m - 1] += 2 * c[m - 1]
        if tuple(v) == tuple(mu):
            return True
    return False


def brute_walks(n, m):
    """Oracle: enumerate every up-down walk explicitly."""
    def steps(shape):
        rows = list(shape)
        for i in range(len(rows) + 1):
            new = rows + [0]
            new[i] += 1
            new = [p for p in new if p]
            if new == sorted(new, reverse=True) and len(new) <= m:
                yield tuple(new)
        for i in range(len(rows)):
            new = rows[:]
            new[i] -= 1
            new = [p for p in new if p]
            if new == sorted(new, reverse=True):
                yield tuple(new)
    walks = [((),)]
    for _ in range(n):
        walks = [w + (s,) for w in walks for s in set(steps(w[-1]))]
    counts = {}
    for w in walks:
        counts[w[-1]] = counts.get(w[-1], 0) + 1
    return counts


# -- partitions and weights --------------------------------------------------

def test_partition_basics():
    lam = Partition((3, 1))
    assert lam.size == 4 and lam.length == 2
    assert lam.conjugate() == Partition((2, 1, 1))
    assert lam.conjugate().conjugate() == lam
    with pytest.raises(ValueError):
        Partition((1, 2))


@given(st.integers(0, 8))
def test_conjugation_involution(k):
    for lam in partitions(k):
        assert lam.conjugate().conjugate() == lam
        assert lam.conjugate().size == k


@pytest.mark.parametrize("k,m", [(4, 2), (5, 3), (6, 2), (3, 1)])
def test_partitions_match_brute_force(k, m):
    assert {p.parts for p in partitions(k, m)} == brute_partitions(k, m)


def test_pi_f_examples():
    assert {p.parts for p in pi_f(4, 1, 2)} == {(2,), (1, 1), ()}
    assert {p.parts for p in pi_f(4, 1, 5)} == {(2,), (1, 1), ()}
    assert {p.parts for p in pi_f(3, 1, 2)} == {(1,)}
    assert {p.parts for p in pi_f(6, 3, 2)} == {()}
    with pytest.raises(ValueError):
        pi_f(3, 2, 2)


@pytest.mark.parametrize("n,m", [(4, 2), (5, 2), (6, 3)])
def test_pi_f_nested(n, m):
    for f in range(n // 2):
        assert set(pi_f(n, f + 1, m)) <= set(pi_f(n, f, m))


def test_dominance_examples():
    assert dominance_leq((2, 0), (2, 0))
    assert dominance_leq((1, 1), (2, 0))
    assert not dominance_leq((2, 0), (1, 1))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_dominance_matches_brute_force(m):
    weights = [w for k in range(5) for w in itertools.product(range(-2, 3), repeat=m)
               if sum(map(abs, w)) == k]
    for lam in weights:
        for mu in weights:
            assert dominance_leq(lam, mu) == brute_dominance(lam, mu), (lam, mu)


@pytest.mark.parametrize("n,m", [(4, 2), (5, 2), (6, 3), (5, 1)])
def test_lower_layers_never_dominate(n, m):
    for a, b in itertools.combinations(range(n // 2 + 1), 2):
        for lam in partitions(n - 2 * a, m):
            for mu in partitions(n - 2 * b, m):
                assert not dominance_leq(lam.weight(m), mu.weight(m))


# -- combinatorial oracles ---------------------------------------------------

def test_weyl_dim_examples():
    assert weyl_dim((1,), 2) == 4
    assert weyl_dim((1, 1), 2) == 5
    assert weyl_dim((2,), 2) == 10
    assert weyl_dim((), 3) == 1


@pytest.mark.parametrize("lam", [(1,), (1, 1), (2,)])
def test_weyl_dim_is_dimension_of_generated_module(lam):
    # the uq-submodule generated by a maximal vector of weight lam
    ctx = RepContext(2, sum(lam))
    ops = uq_generators(ctx)
    v = maximal_vectors(ctx, lam).rows[0]
    span = saturate([v], ops["F"] + ops["E"], ctx.dim, ctx.field)
    assert span.dim == weyl_dim(lam, 2)


def test_osc_mult_example():
    assert osc_mult((1,), 3, 2) == 3


@pytest.mark.parametrize("n,m", [(3, 2), (4, 2), (5, 1), (4, 3)])
def test_osc_mult_matches_walk_enumeration(n, m):
    counts = brute_walks(n, m)
    for shape, c in counts.items():
        assert osc_mult(shape, n, m) == c


@pytest.mark.parametrize("n,m", [(2, 1), (3, 2), (4, 2), (5, 3), (6, 2)])
def test_dimension_count(n, m):
    total = sum(osc_mult(lam, n, m) * weyl_dim(lam, m)
                for f in range(n // 2 + 1) for lam in partitions(n - 2 * f, m))
    assert total == (2 * m) ** n


# -- ideals and images -------------------------------------------------------

def test_ideal_conventions():
    ctx = RepContext(2, 3)
    J0, W0 = bmw_ideal_image(ctx, 0)
    assert J0 == image_algebra(ctx) and W0.dim == 64
    J2, W2 = bmw_ideal_image(ctx, 2)
    assert J2.dim == 0 and W2.dim == 0


def test_w1_at_2_3():
    ctx = RepContext(2, 3)
    _, W = bmw_ideal_image(ctx, 1)
    assert W.dim == 12
    assert W == w_subspace(ctx, 1)


@pytest.mark.parametrize("m,n", [(1, 2), (1, 3), (2, 2), (2, 3), (1, 4)])
def test_saturation_equals_module_span(m, n):
    ctx = RepContext(m, n)
    for f in range(n // 2 + 2):
        assert bmw_ideal_image(ctx, f)[1] == w_subspace(ctx, f)


def test_image_sum_check():
    assert image_sum_check(RepContext(1, 2), 1)
    ctx = RepContext(2, 3)
    assert image_sum_check(ctx, 1)
    assert w_subspace(ctx, 1).dim == 12
    assert image_sum_check(ctx, 0)


def test_truncation_examples():
    ctx = RepContext(2, 3)
    full = Subspace.full(ctx.dim, ctx.field)
    assert truncation(ctx, 0) == full
    W = w_subspace(ctx, 1)
    assert truncation(ctx, 1, W) == W
    assert truncation(ctx, 1).dim == 12


def test_truncation_refuses_unstable_subspace():
    ctx = RepContext(1, 2)
    S = rref([{1: ctx.field.one}], ctx.dim, ctx.field)
    with pytest.raises(NotInvariantError):
        truncation(ctx, 1, S)


def test_maximal_vector_examples():
    ctx = RepContext(2, 3)
    top = maximal_vectors(ctx, (3,))
    assert top.dim == 1 and top.rows[0] == {0: ctx.field.one}
    assert maximal_vectors(ctx, (1, 0)).dim == 3


@pytest.mark.parametrize("m,n", [(1, 2), (1, 3), (2, 2), (2, 3)])
def test_double_centralizer_count(m, n):
    ctx = RepContext(m, n)
    total = sum(maximal_vectors(ctx, lam).dim ** 2
                for f in range(n // 2 + 1) for lam in partitions(n - 2 * f, m))
    assert total == commutant(uq_generator_list(ctx)).dim


@pytest.mark.parametrize("m,n", [(1, 3), (2, 3), (2, 4), (3, 3)])
def test_multiplicities_match_oscillating_tableaux(m, n):
    ctx = RepContext(m, n, Z)
    for f in range(n // 2 + 1):
        for lam in partitions(n - 2 * f, m):
            assert maximal_vectors(ctx, lam).dim == osc_mult(lam, n, m)


# -- z vectors ---------------------------------------------------------------

def test_z_top_row():
    ctx = RepContext(2, 3)
    z = z_vector(ctx, 0, (3,))
    assert z == {0: ctx.field.one}


def test_z_two_boxes_one_column():
    ctx = RepContext(2, 2)
    z = z_vector(ctx, 0, (1, 1))
    assert z and set(z) <= {ctx.basis_index((0, 1)), ctx.basis_index((1, 0))}
    for E in uq_generators(ctx)["E"]:
        assert vec_apply(z, E) == {}


def test_z_alpha_times_v1():
    ctx = RepContext(2, 3)
    z = z_vector(ctx, 1, (1,))
    assert cyclic_bmw_span(ctx, z) == maximal_vectors(ctx, (1, 0))
    assert cyclic_bmw_span(ctx, z).dim == 3


def test_z_candidates_reported():
    ctx = RepContext(2, 3)
    cands = {c.label: c for c in z_candidates(ctx, 0, (2, 1))}
    assert not cands["identity"].nonzero
    assert cands["column reading"].ok
    with pytest.raises(ValueError):
        z_vector(ctx, 0, (2, 1), w="identity")


def test_cyclic_span_of_zero():
    ctx = RepContext(1, 2)
    assert cyclic_bmw_span(ctx, {}).dim == 0


# -- harmonic tensors and reports --------------------------------------------

def test_harmonic_examples():
    ctx = RepContext(2, 3)
    assert harmonic_tensors(ctx, 0).dim == 52
    assert harmonic_tensors(ctx, 1) == w_subspace(ctx, 1)


@pytest.mark.parametrize("m,n", [(1, 2), (1, 3), (2, 2), (2, 3), (1, 4)])
def test_harmonic_layer_identity(m, n):
    ctx = RepContext(m, n)
    for f in range(n // 2 + 1):
        HT = harmonic_tensors(ctx, f)
        assert HT.dim == w_subspace(ctx, f).dim - w_subspace(ctx, f + 1).dim
        assert w_subspace(ctx, f).contains(HT)


def test_harmonic_definition_directly():
    # brute force: v in W_f with v M = 0 for every M in a basis of J_(f+1)
    ctx = RepContext(1, 4)
    HT = harmonic_tensors(ctx, 1)
    J2 = bmw_ideal(ctx, 2)
    for v in HT.rows:
        for M in J2.matrices(ctx.dim):
            assert vec_apply(v, M) == {}


@pytest.mark.parametrize("m,n,f,want", [
    (2, 2, 1, dict(dim_quotient=15, dim_commutant_quotient=2, dim_image_phi_f=2)),
    (2, 3, 1, dict(dim_quotient=52, dim_commutant_quotient=5, dim_image_phi_f=5, dim_W=12)),
    (1, 3, 1, dict(dim_quotient=4, dim_commutant_quotient=1, dim_image_phi_f=1)),
])
def test_duality_examples(m, n, f, want):
    r = duality_report(RepContext(m, n), f)
    for k, v in want.items():
        assert getattr(r, k) == v
    assert r.surjective and r.truncation_match and r.hom_vanishing
    assert r.dim_W + r.dim_quotient == r.dim_total


def test_phi_1_kernel_at_2_3():
    # B / B^(1) has dimension 15 - 9 = 6 and the image is 5-dimensional
    r = duality_report(RepContext(2, 3), 1)
    assert r.dim_algebra - r.dim_ideal == 5
    assert r.dim_image_phi_f == 5


def test_report_key_order():
    r = duality_report(RepContext(1, 2), 1).as_dict()
    assert list(r) == ["m", "n", "f", "field", "dim_total", "dim_algebra", "dim_ideal", "dim_W",
                       "dim_quotient", "dim_HT", "dim_image_phi_f", "dim_commutant_quotient",
                       "surjective", "truncation_match", "hom_vanishing"]


def test_report_range():
    with pytest.raises(ValueError):
        duality_report(RepContext(1, 2), 0)
