"""Ideals of the BMW algebra on tensor space, truncation, harmonic tensors and phi_f.

Notation: ``W_f`` is the image ``V^(x)n B^(f)`` of the f-th ideal, ``J_f`` the
ideal itself inside the image algebra, ``g_f = gamma'_1 gamma'_3 ... gamma'_(2f-1)``.

Two facts keep the computations small.  ``V B g B = (V g) B`` because the
algebra is unital, so ``W_f`` is the saturation of the row space of ``g_f``
under the generators and needs no d^2-sized closure.  And ``v J_(f+1) = 0``
iff ``v a g_(f+1) = 0`` for every ``a``, i.e. ``v`` is orthogonal to the
saturation of the column space of ``g_(f+1)`` under the transposed
generators.
"""

from dataclasses import dataclass, asdict
from fractions import Fraction
import itertools

from .linalg import (Mat, Subspace, NotInvariantError, algebra_closure, commutant,
                     intertwiners, left_kernel, module_span, quotient_action, restricted_action,
                     rref, saturate, two_sided_ideal, vec_apply, axpy)
from .rep_sp import (alpha_power, bmw_generators, bmw_generator_list,
                     tensor_vectors, uq_generators, weight_space)


# -- partitions and weights ---------------------------------------------------

@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts if p)
        if any(p < 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"not a partition: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self):
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    @property
    def length(self):
        return len(self.parts)

    def conjugate(self):
        if not self.parts:
            return self
        return Partition([sum(1 for p in self.parts if p > i) for i in range(self.parts[0])])

    def weight(self, m):
        if len(self.parts) > m:
            raise ValueError(f"{self} has more than {m} parts")
        return self.parts + (0,) * (m - len(self.parts))

    def __iter__(self):
        return iter(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")" if self.parts else "()"


def partitions(k, max_len=None):
    """Partitions of k in reverse lexicographic order."""
    def gen(k, largest, slots):
        if k == 0:
            yield ()
            return
        if slots == 0:
            return
        for p in range(min(k, largest), 0, -1):
            for rest in gen(k - p, p, slots - 1):
                yield (p,) + rest
    slots = k if max_len is None else max_len
    return [Partition(p) for p in gen(k, k, slots)]


@dataclass(frozen=True)
class WeightSet:
    n: int
    f: int
    m: int
    weights: tuple

    def __contains__(self, lam):
        if isinstance(lam, Partition):
            lam = lam.weight(self.m)
        return tuple(lam) in {w.weight(self.m) for w in self.weights}

    def __iter__(self):
        return iter(self.weights)

    def __len__(self):
        return len(self.weights)


def pi_f(n, f, m):
    """Dominant weights of V^(x)(n-2f): partitions of n-2f-2r with at most m parts."""
    if not 0 <= f <= n // 2:
        raise ValueError(f"f={f} outside 0..{n // 2}")
    out = []
    for r in range((n - 2 * f) // 2 + 1):
        out += partitions(n - 2 * f - 2 * r, m)
    return WeightSet(n, f, m, tuple(out))


def dominance_leq(lam, mu):
    """True iff ``lam <= mu``: ``mu - lam`` is a nonnegative integer sum of simple roots.

    Simple roots are e_i - e_(i+1) and 2 e_m, so the coefficients are the partial
    sums of ``mu - lam`` except the last, which is half the total.
    """
    lam, mu = tuple(lam), tuple(mu)
    k = max(len(lam), len(mu))
    lam += (0,) * (k - len(lam))
    mu += (0,) * (k - len(mu))
    acc = 0
    for a, b in zip(mu[:-1], lam[:-1]):
        acc += a - b
        if acc < 0:
            return False
    total = sum(mu) - sum(lam)
    return total >= 0 and total % 2 == 0


# -- combinatorial oracles ----------------------------------------------------

def weyl_dim(lam, m):
    """Dimension of the irreducible sp_2m module of highest weight ``lam``."""
    lam = Partition(lam) if not isinstance(lam, Partition) else lam
    l = [a + m - i for i, a in enumerate(lam.weight(m))]
    rho = [m - i for i in range(m)]
    num = den = 1
    for i in range(m):
        num *= l[i]
        den *= rho[i]
        for j in range(i + 1, m):
            num *= (l[i] - l[j]) * (l[i] + l[j])
            den *= (rho[i] - rho[j]) * (rho[i] + rho[j])
    out = Fraction(num, den)
    assert out.denominator == 1
    return int(out)


def osc_mult(lam, n, m):
    """Number of length-n walks from the empty shape to ``lam``, adding or
    removing one box per step, through shapes with at most m rows."""
    lam = Partition(lam) if not isinstance(lam, Partition) else lam
    if lam.length > m:
        raise ValueError(f"{lam} has more than {m} rows")
    counts = {(): 1}
    for _ in range(n):
        nxt = {}
        for shape, c in counts.items():
            for s in _neighbours(shape, m):
                nxt[s] = nxt.get(s, 0) + c
        counts = nxt
    return counts.get(lam.parts, 0)


def _neighbours(shape, m):
    rows = list(shape) + [0]
    for i in range(min(len(rows), m)):
        if i == 0 or rows[i - 1] > rows[i]:
            new = rows[:]
            new[i] += 1
            yield tuple(p for p in new if p)
    for i in range(len(shape)):
        if i == len(shape) - 1 or shape[i] > shape[i + 1]:
            new = list(shape)
            new[i] -= 1
            yield tuple(p for p in new if p)


# -- ideals and their images --------------------------------------------------

def image_algebra(ctx):
    """phi(B): the span of all words in beta'_i, gamma'_i (flattened)."""
    if "algebra" not in ctx._cache:
        gens = bmw_generator_list(ctx)
        ctx._cache["algebra"] = algebra_closure(gens, d=ctx.dim, field=ctx.field)
    return ctx._cache["algebra"]


def ideal_generator(ctx, f):
    """g_f = gamma'_1 gamma'_3 ... gamma'_(2f-1); identity for f=0, zero past n/2."""
    F = ctx.field
    if f == 0:
        return Mat.identity(ctx.dim, F)
    if 2 * f > ctx.n:
        return Mat.zero(ctx.dim, ctx.dim, F)
    gens = bmw_generators(ctx)
    out = gens[0][1]
    for k in range(1, f):
        out = out @ gens[2 * k][1]
    return out


def bmw_ideal(ctx, f):
    """J_f: the two-sided ideal of phi(B) generated by g_f."""
    key = ("ideal", f)
    if key not in ctx._cache:
        ctx._cache[key] = two_sided_ideal(image_algebra(ctx), ideal_generator(ctx, f))
    return ctx._cache[key]


def w_subspace(ctx, f):
    """W_f = V^(x)n B^(f), as the generator saturation of the row space of g_f."""
    key = ("W", f)
    if key not in ctx._cache:
        if 2 * f > ctx.n:
            ctx._cache[key] = Subspace.zero(ctx.dim, ctx.field)
        elif f == 0:
            ctx._cache[key] = Subspace.full(ctx.dim, ctx.field)
        else:
            g = ideal_generator(ctx, f)
            ctx._cache[key] = saturate(rref(g), bmw_generator_list(ctx))
    return ctx._cache[key]


def bmw_ideal_image(ctx, f):
    """(J_f, W_f) with W_f computed as the span of all v M, M in J_f."""
    if not 0 <= f <= ctx.n // 2 + 1:
        raise ValueError(f"f={f} outside 0..{ctx.n // 2 + 1}")
    J = bmw_ideal(ctx, f)
    W = module_span(Subspace.full(ctx.dim, ctx.field), J)
    return J, W


def image_sum_check(ctx, f):
    """span{(alpha^f (x) v) b} over v in V^(x)(n-2f), b in phi(B), compared with W_f."""
    if f == 0:
        return w_subspace(ctx, 0) == Subspace.full(ctx.dim, ctx.field)
    if 2 * f > ctx.n:
        return w_subspace(ctx, f).dim == 0
    a = alpha_power(ctx, f)
    rest = ctx.D ** (ctx.n - 2 * f)
    one = ctx.field.one
    seeds = [tensor_vectors(a, {j: one}, rest) for j in range(rest)]
    lhs = saturate(seeds, bmw_generator_list(ctx), ctx.dim, ctx.field)
    _, W = bmw_ideal_image(ctx, f)
    return lhs == W


# -- highest weight theory ----------------------------------------------------

def _check_stable(ctx, M, ops):
    for G in ops:
        for v in M.rows:
            if M.reduce(vec_apply(v, G)):
                raise NotInvariantError("subspace is not stable under the quantum group")


def _weight_part(ctx, M, lam):
    """M_lam, the weight-lam part of a K-stable subspace (a coordinate projection)."""
    idx = {i for i, w in enumerate(ctx.weights) if w == lam}
    rows = [{j: x for j, x in v.items() if j in idx} for v in M.rows]
    return rref(rows, ctx.dim, ctx.field)


def _killed_by(ctx, S, ops):
    """{v in S : v G = 0 for all G in ops}."""
    if S.dim == 0:
        return S
    width = ctx.dim
    rows = []
    for v in S.rows:
        row = {}
        for k, G in enumerate(ops):
            for j, x in vec_apply(v, G).items():
                row[k * width + j] = x
        rows.append(row)
    coeffs = left_kernel(Mat(S.dim, width * len(ops), rows, ctx.field))
    out = []
    for c in coeffs.rows:
        acc = {}
        for k, x in c.items():
            axpy(acc, x, S.rows[k])
        out.append(acc)
    return rref(out, ctx.dim, ctx.field)


def maximal_vectors(ctx, lam, M=None):
    """Weight-lam vectors of M (default V^(x)n) killed by every E_i."""
    lam = lam.weight(ctx.m) if isinstance(lam, Partition) else tuple(lam) + (0,) * (ctx.m - len(lam))
    S = weight_space(ctx, lam) if M is None else _weight_part(ctx, M, lam)
    return _killed_by(ctx, S, uq_generators(ctx)["E"])


def truncation(ctx, f, M=None):
    """O_{pi_f}(M): the submodule generated by maximal vectors of M with weights in pi_f."""
    ops = uq_generators(ctx)
    M = Subspace.full(ctx.dim, ctx.field) if M is None else M
    _check_stable(ctx, M, ops["E"] + ops["F"] + ops["K"])
    seeds = []
    for lam in pi_f(ctx.n, f, ctx.m):
        seeds += maximal_vectors(ctx, lam, M).rows
    return saturate(seeds, ops["E"] + ops["F"], ctx.dim, ctx.field)


# -- the vectors z_{f,lambda} -------------------------------------------------

def _apply_word(ctx, v, word):
    """v T_{i1} T_{i2} ... for 0-based positions i."""
    gens = bmw_generators(ctx)
    for i in word:
        v = vec_apply(v, gens[i][0])
    return v


def _reduced_word(perm):
    """A reduced word (0-based adjacent transpositions) for a permutation."""
    perm = list(perm)
    word = []
    changed = True
    while changed:
        changed = False
        for i in range(len(perm) - 1):
            if perm[i] > perm[i + 1]:
                perm[i], perm[i + 1] = perm[i + 1], perm[i]
                word.append(i)
                changed = True
    return word[::-1]


def _young_sum(ctx, v, blocks, offset):
    """v Y where Y = sum over the Young subgroup of (-q)^(-l(w)) T_w."""
    F = ctx.field
    mq_inv = -F.q_power(-1)
    ranges, start = [], offset
    for b in blocks:
        ranges.append(list(range(start, start + b)))
        start += b
    out = {}
    for perms in itertools.product(*[itertools.permutations(range(len(r))) for r in ranges]):
        word = []
        for r, p in zip(ranges, perms):
            word += [r[0] + i for i in _reduced_word(p)]
        axpy(out, mq_inv ** len(word) if word else F.one, _apply_word(ctx, v, word))
    return out


def _bubble_word(seq):
    """Adjacent swaps sorting ``seq`` ascending, in the order performed."""
    seq = list(seq)
    word = []
    for end in range(len(seq) - 1, 0, -1):
        for i in range(end):
            if seq[i] > seq[i + 1]:
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
                word.append(i)
    return word


@dataclass
class ZCandidate:
    label: str
    word: tuple
    vector: dict
    nonzero: bool
    maximal: bool

    @property
    def ok(self):
        return self.nonzero and self.maximal


def z_candidates(ctx, f, lam):
    """Every candidate z_{f,lam} with its maximality verdict."""
    lam = Partition(lam) if not isinstance(lam, Partition) else lam
    k = ctx.n - 2 * f
    if lam.size != k or lam.length > ctx.m:
        raise ValueError(f"{lam} is not a partition of {k} with at most {ctx.m} parts")
    off = 2 * f
    cells = [(r, c) for r, p in enumerate(lam.parts) for c in range(p)]
    col_order = sorted(cells, key=lambda rc: (rc[1], rc[0]))
    rank = {cell: i for i, cell in enumerate(col_order)}
    seq = [rank[c] for c in cells]
    base = {ctx.basis_index([r for r, _ in cells]): ctx.field.one}
    a = alpha_power(ctx, f)
    head = tensor_vectors(a, base, ctx.D ** k)
    blocks = list(lam.conjugate().parts)
    E = uq_generators(ctx)["E"]
    weight = lam.weight(ctx.m)
    out = []
    for label, word in (("identity", ()), ("column reading", tuple(_bubble_word(seq)))):
        v = _apply_word(ctx, head, [off + i for i in word])
        z = _young_sum(ctx, v, blocks, off)
        maximal = all(not vec_apply(z, G) for G in E) and all(
            ctx.weights[j] == weight for j in z)
        out.append(ZCandidate(label, word, z, bool(z), maximal))
    return out


def z_vector(ctx, f, lam, w=None):
    """alpha^f (x) v_lam T_w Y_lam'; the first candidate that is a nonzero maximal vector."""
    cands = z_candidates(ctx, f, lam)
    if w is not None:
        cands = [c for c in cands if c.label == w or c.word == tuple(w)]
    for c in cands:
        if c.ok:
            return c.vector
    raise ValueError(f"no candidate z_{{{f},{lam}}} is a nonzero maximal vector")


def cyclic_bmw_span(ctx, z):
    """span{z M : M in phi(B)}."""
    if not z:
        return Subspace.zero(ctx.dim, ctx.field)
    return saturate([z], bmw_generator_list(ctx), ctx.dim, ctx.field)


# -- harmonic tensors ---------------------------------------------------------

def _annihilator_of_ideal(ctx, f):
    """C_f: saturation of the column space of g_f under transposed generators."""
    key = ("colsat", f)
    if key not in ctx._cache:
        if 2 * f > ctx.n:
            ctx._cache[key] = Subspace.zero(ctx.dim, ctx.field)
        else:
            g = ideal_generator(ctx, f).transpose()
            gens = [G.transpose() for G in bmw_generator_list(ctx)]
            ctx._cache[key] = saturate(rref(g), gens)
    return ctx._cache[key]


def harmonic_tensors(ctx, f):
    """HT_f = {v in W_f : v x = 0 for all x in J_(f+1)}."""
    key = ("HT", f)
    if key in ctx._cache:
        return ctx._cache[key]
    W = w_subspace(ctx, f)
    C = _annihilator_of_ideal(ctx, f + 1)
    if C.dim == 0 or W.dim == 0:
        out = W
    else:
        cols = C.as_mat().transpose()
        coeffs = left_kernel(Mat(W.dim, ctx.dim, W.rows, ctx.field) @ cols)
        vecs = []
        for c in coeffs.rows:
            acc = {}
            for k, x in c.items():
                axpy(acc, x, W.rows[k])
            vecs.append(acc)
        out = rref(vecs, ctx.dim, ctx.field)
    ctx._cache[key] = out
    return out


# -- the duality report -------------------------------------------------------

REPORT_KEYS = ("m", "n", "f", "field", "dim_total", "dim_algebra", "dim_ideal", "dim_W",
               "dim_quotient", "dim_HT", "dim_image_phi_f", "dim_commutant_quotient",
               "surjective", "truncation_match", "hom_vanishing")


@dataclass
class DualityReport:
    m: int
    n: int
    f: int
    field: str
    dim_total: int
    dim_algebra: int
    dim_ideal: int
    dim_W: int
    dim_quotient: int
    dim_HT: int
    dim_image_phi_f: int
    dim_commutant_quotient: int
    surjective: bool
    truncation_match: bool
    hom_vanishing: bool

    def as_dict(self):
        d = asdict(self)
        return {k: d[k] for k in REPORT_KEYS}

    @property
    def dims(self):
        return {k: v for k, v in self.as_dict().items() if k.startswith("dim_")}


def phi_f_image(ctx, f, W=None):
    """Image of phi_f: the algebra generated by the induced BMW generators on V^(x)n / W_f."""
    W = w_subspace(ctx, f) if W is None else W
    gens = [quotient_action(W, G) for G in bmw_generator_list(ctx)]
    dq = ctx.dim - W.dim
    return algebra_closure(gens, d=dq, field=ctx.field)


def quotient_commutant(ctx, f, W=None):
    """End_U(V^(x)n / W_f)."""
    W = w_subspace(ctx, f) if W is None else W
    ops = uq_generators(ctx)
    gens = [quotient_action(W, G) for G in ops["E"] + ops["F"] + ops["K"]]
    return commutant(gens, d=ctx.dim - W.dim, field=ctx.field)


def hom_to_quotient(ctx, f, W=None):
    """Hom_U(W_f, V^(x)n / W_f) as a space of matrices."""
    W = w_subspace(ctx, f) if W is None else W
    ops = uq_generators(ctx)
    gens = ops["E"] + ops["F"] + ops["K"]
    src = [restricted_action(W, G) for G in gens]
    dst = [quotient_action(W, G) for G in gens]
    return intertwiners(src, dst, W.dim, ctx.dim - W.dim, ctx.field)


def duality_report(ctx, f):
    if not 1 <= f <= ctx.n // 2:
        raise ValueError(f"f={f} outside 1..{ctx.n // 2}")
    W = w_subspace(ctx, f)
    algebra = image_algebra(ctx)
    J = bmw_ideal(ctx, f)
    image = phi_f_image(ctx, f, W)
    comm = quotient_commutant(ctx, f, W)
    hom = hom_to_quotient(ctx, f, W)
    return DualityReport(
        m=ctx.m, n=ctx.n, f=f, field=ctx.field.descriptor,
        dim_total=ctx.dim,
        dim_algebra=algebra.dim,
        dim_ideal=J.dim,
        dim_W=W.dim,
        dim_quotient=ctx.dim - W.dim,
        dim_HT=harmonic_tensors(ctx, f).dim,
        dim_image_phi_f=image.dim,
        dim_commutant_quotient=comm.dim,
        surjective=image.dim == comm.dim,
        truncation_match=truncation(ctx, f) == W,
        hom_vanishing=hom.dim == 0,
    )
