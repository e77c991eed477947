"""The symplectic tensor space, its BMW operators and the quantum group action.

Basis vectors of V are indexed 0..2m-1 internally (``v_1..v_2m`` in the usual
numbering).  A basis tensor ``v_{i1} (x) ... (x) v_{in}`` has flat index
``sum_k i_k (2m)^(n-k)`` so that Kronecker products realize the tensor product.

Every operator is stored as a ``Mat`` whose row ``i`` is the image of basis
vector ``i``; applying an operator to a vector is ``vec_apply(v, M)`` and
"first A, then B" is ``A @ B``.  The BMW generators act on the right in this
way, and the quantum group generators are stored in the same orientation.
"""

from dataclasses import dataclass
from functools import lru_cache
import itertools

from .linalg import Mat, Subspace, kron_all, vec_apply
from .scalars import FieldSpec, loop_value, r_value, specialize
from . import tangles as tg


class CalibrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class CupCapData:
    alpha: dict       # vector in V (x) V
    E_functional: Mat  # 4m^2 x 1
    C: Mat            # 1 x 4m^2, the cup 1 -> alpha
    beta: Mat
    gamma: Mat


class RepContext:
    """Fixed rank m, degree n and coefficient field, with cached operators."""

    def __init__(self, m, n, field=None):
        if m < 1 or n < 0:
            raise ValueError("need m >= 1 and n >= 0")
        self.m, self.n = m, n
        self.field = field if field is not None else FieldSpec.generic()
        self.D = 2 * m
        self.dim = self.D ** n
        self.rho = [m - i for i in range(m)] + [-(k + 1) for k in range(m)]
        self.eps = [1 if r > 0 else -1 for r in self.rho]
        self._cache = {}

    def prime(self, i):
        return self.D - 1 - i

    def __repr__(self):
        return f"RepContext(m={self.m}, n={self.n}, field={self.field.descriptor})"

    # basis bookkeeping
    def basis_index(self, tup):
        idx = 0
        for i in tup:
            idx = idx * self.D + i
        return idx

    def basis_tuple(self, idx, n=None):
        n = self.n if n is None else n
        out = []
        for _ in range(n):
            idx, r = divmod(idx, self.D)
            out.append(r)
        return tuple(reversed(out))

    def vector_weight(self, i):
        w = [0] * self.m
        if i < self.m:
            w[i] = 1
        else:
            w[self.prime(i)] = -1
        return tuple(w)

    @property
    def weights(self):
        """Weight of every basis tensor of V^(x)n, by flat index."""
        if "weights" not in self._cache:
            wv = [self.vector_weight(i) for i in range(self.D)]
            out = []
            for tup in itertools.product(range(self.D), repeat=self.n):
                out.append(tuple(sum(wv[i][k] for i in tup) for k in range(self.m)))
            self._cache["weights"] = out
        return self._cache["weights"]

    def with_degree(self, n):
        return RepContext(self.m, n, self.field)

    @property
    def x(self):
        return loop_value(self.m, self.field)

    @property
    def r(self):
        return r_value(self.m, self.field)


def tensor_vectors(u, v, dv):
    """Kronecker product of sparse vectors; ``dv`` is the dimension of v."""
    return {i * dv + j: a * b for i, a in u.items() for j, b in v.items()}


def build_beta_gamma(ctx):
    """alpha, the calibrated cap functional, the cup, beta' and gamma'."""
    if "cupcap" in ctx._cache:
        return ctx._cache["cupcap"]
    F, D, rho, eps, pr = ctx.field, ctx.D, ctx.rho, ctx.eps, ctx.prime
    q, qi = F.q, F.q_power(-1)
    d2 = D * D
    one = F.one

    alpha = {}
    for k in range(D):
        alpha[k * D + pr(k)] = F.q_power(-rho[k]) * (one if eps[k] > 0 else -one)

    E_rows = []
    for a in range(D):
        for b in range(D):
            if b == pr(a):
                c = F.q_power(-rho[a])
                E_rows.append({0: c if eps[b] > 0 else -c})
            else:
                E_rows.append({})
    E = Mat(d2, 1, E_rows, F)
    C = Mat(1, d2, [dict(alpha)], F)

    beta_rows = [{} for _ in range(d2)]
    gamma_rows = [{} for _ in range(d2)]

    def add(rows, i, j, k, l, c):
        # the term E_{ij} (x) E_{kl} sends v_j (x) v_l to c * v_i (x) v_k
        row = rows[j * D + l]
        col = i * D + k
        t = row.get(col)
        t = c if t is None else t + c
        if t:
            row[col] = t
        else:
            row.pop(col, None)

    qq = q - qi
    for i in range(D):
        add(beta_rows, i, i, i, i, q)
        add(beta_rows, i, pr(i), pr(i), i, qi)
        for j in range(D):
            if j != i and j != pr(i):
                add(beta_rows, i, j, j, i, one)
            s = F.q_power(rho[j] - rho[i])
            s = s if eps[i] * eps[j] > 0 else -s
            add(gamma_rows, i, pr(j), pr(i), j, s)
            if i < j:
                add(beta_rows, i, i, j, j, qq)
                add(beta_rows, i, pr(j), pr(i), j, -qq * s)
    beta = Mat(d2, d2, beta_rows, F)
    gamma = Mat(d2, d2, gamma_rows, F)
    out = CupCapData(alpha, E, C, beta, gamma)
    ctx._cache["cupcap"] = out
    return out


def beta_inverse(ctx):
    """beta'^-1 = beta' - (q - q^-1)(1 - gamma')."""
    if "beta_inv" not in ctx._cache:
        cc = build_beta_gamma(ctx)
        F = ctx.field
        ident = Mat.identity(ctx.D ** 2, F)
        ctx._cache["beta_inv"] = cc.beta - (ident - cc.gamma).scale(F.q - F.q_power(-1))
    return ctx._cache["beta_inv"]


def place(ctx, op, i, k, n=None):
    """``op`` on tensor factors i..i+k-1 (0-based) of V^(x)n."""
    n = ctx.n if n is None else n
    F, D = ctx.field, ctx.D
    mats = []
    if i:
        mats.append(Mat.identity(D ** i, F))
    mats.append(op)
    if n - i - k:
        mats.append(Mat.identity(D ** (n - i - k), F))
    return kron_all(mats)


def bmw_generators(ctx):
    """Pairs ``(beta'_i, gamma'_i)`` on V^(x)n for i = 1..n-1."""
    if "bmw" not in ctx._cache:
        cc = build_beta_gamma(ctx)
        ctx._cache["bmw"] = [(place(ctx, cc.beta, i, 2), place(ctx, cc.gamma, i, 2))
                             for i in range(ctx.n - 1)]
    return ctx._cache["bmw"]


def bmw_inverse_generators(ctx):
    if "bmw_inv" not in ctx._cache:
        ctx._cache["bmw_inv"] = [place(ctx, beta_inverse(ctx), i, 2) for i in range(ctx.n - 1)]
    return ctx._cache["bmw_inv"]


def bmw_generator_list(ctx):
    """Flat list ``[beta'_1, gamma'_1, beta'_2, ...]``."""
    return [M for pair in bmw_generators(ctx) for M in pair]


# -- the Reshetikhin-Turaev functor -------------------------------------------

def _gen_matrix(ctx, name):
    key = ("gen", name)
    if key not in ctx._cache:
        cc = build_beta_gamma(ctx)
        ctx._cache[key] = {
            "I": lambda: Mat.identity(ctx.D, ctx.field),
            "X": lambda: cc.beta,
            "Xi": lambda: beta_inverse(ctx),
            "A": lambda: cc.C,
            "U": lambda: cc.E_functional,
        }[name]()
    return ctx._cache[key]


def rt_eval(ctx, D):
    """F(D) as a (2m)^src x (2m)^dst matrix, rows indexed by the source."""
    memo = {}

    def ev(e):
        hit = memo.get(id(e))
        if hit is not None:
            return hit[1]
        if isinstance(e, tg.Gen):
            out = _gen_matrix(ctx, e.name)
        elif isinstance(e, tg.Empty):
            out = Mat.identity(1, ctx.field)
        elif isinstance(e, tg.Compose):
            out = ev(e.left) @ ev(e.right)
        elif isinstance(e, tg.Tensor):
            out = ev(e.left).kron(ev(e.right))
        elif isinstance(e, tg.Scale):
            out = ev(e.expr).scale(specialize(e.coeff, ctx.field))
        elif isinstance(e, tg.Sum):
            out = ev(e.terms[0])
            for t in e.terms[1:]:
                out = out + ev(t)
        else:
            raise TypeError(f"not a tangle expression: {e!r}")
        memo[id(e)] = (e, out)
        return out

    return ev(D)


def _log_dim(ctx, size):
    k = 0
    while size > 1:
        size, r = divmod(size, ctx.D)
        if r:
            raise ValueError("matrix size is not a power of dim V")
        k += 1
    return k


def hom_shift(ctx, M, direction, t):
    """The mutually inverse shifts between H(n, s+t) and H(n+t, s).

    ``FU``: M in H(n, s+t) goes to (M (x) 1_t) then (1_s (x) F(U_t)).
    ``FA``: N in H(n+t, s) goes to (1_n (x) F(A_t)) then (N (x) 1_t).
    """
    F = ctx.field
    if t == 0:
        return M
    n_src, n_dst = _log_dim(ctx, M.nrows), _log_dim(ctx, M.ncols)
    It = Mat.identity(ctx.D ** t, F)
    if direction == "FU":
        s = n_dst - t
        if s < 0:
            raise ValueError(f"target degree {n_dst} is smaller than t={t}")
        Ut = rt_eval(ctx, tg.cap_cup_chain(t, "U"))
        return M.kron(It) @ Mat.identity(ctx.D ** s, F).kron(Ut)
    if direction == "FA":
        n = n_src - t
        if n < 0:
            raise ValueError(f"source degree {n_src} is smaller than t={t}")
        At = rt_eval(ctx, tg.cap_cup_chain(t, "A"))
        return Mat.identity(ctx.D ** n, F).kron(At) @ M.kron(It)
    raise ValueError(f"unknown direction {direction!r}")


# -- quantum group ------------------------------------------------------------

def _natural_ops(ctx, s):
    """Chevalley generators on V as {basis: [(image, coeff)]} plus K eigenvalues."""
    F, m, pr = ctx.field, ctx.m, ctx.prime
    one = F.one
    Es, Fs, Ks = [], [], []
    for i in range(m):
        if i < m - 1:
            E = {i + 1: [(i, one)], pr(i): [(pr(i + 1), s)]}
            Fo = {i: [(i + 1, one)], pr(i + 1): [(pr(i), one / s)]}
        else:
            E = {pr(i): [(i, one)]}
            Fo = {i: [(pr(i), one)]}
        kv = []
        for j in range(ctx.D):
            w = ctx.vector_weight(j)
            e = w[i] - w[i + 1] if i < m - 1 else 2 * w[i]
            kv.append(F.q_power(e))
        Es.append(E)
        Fs.append(Fo)
        Ks.append(kv)
    return Es, Fs, Ks


def _tensor_action(ctx, op, left, right, n):
    """sum_k left^(k) (x) op (x) right^(n-k-1); ``left``/``right`` are diagonals or None."""
    F, D = ctx.field, ctx.D
    d = D ** n
    rows = [{} for _ in range(d)]
    for idx, tup in enumerate(itertools.product(range(D), repeat=n)):
        row = rows[idx]
        for k, i in enumerate(tup):
            imgs = op.get(i)
            if not imgs:
                continue
            c0 = F.one
            if left is not None:
                for l in tup[:k]:
                    c0 = c0 * left[l]
            if right is not None:
                for l in tup[k + 1:]:
                    c0 = c0 * right[l]
            step = D ** (n - 1 - k)
            for j, c in imgs:
                col = idx + (j - i) * step
                v = c0 * c
                t = row.get(col)
                t = v if t is None else t + v
                if t:
                    row[col] = t
                else:
                    row.pop(col, None)
    return Mat(d, d, rows, F)


def _diag(ctx, vals, n):
    F, D = ctx.field, ctx.D
    rows = []
    for tup in itertools.product(range(D), repeat=n):
        c = F.one
        for i in tup:
            c = c * vals[i]
        rows.append({len(rows): c})
    return Mat(D ** n, D ** n, rows, F)


def _build_uq(ctx, conv, n):
    coproduct, s = conv
    Es, Fs, Ks = _natural_ops(ctx, s)
    out = {"E": [], "F": [], "K": [], "Kinv": []}
    for E, Fo, kv in zip(Es, Fs, Ks):
        kinv = [ctx.field.one / x for x in kv]
        if coproduct == "K-left":
            out["E"].append(_tensor_action(ctx, E, kv, None, n))
            out["F"].append(_tensor_action(ctx, Fo, None, kinv, n))
        else:
            out["E"].append(_tensor_action(ctx, E, None, kv, n))
            out["F"].append(_tensor_action(ctx, Fo, kinv, None, n))
        out["K"].append(_diag(ctx, kv, n))
        out["Kinv"].append(_diag(ctx, kinv, n))
    return out


def _candidates(field):
    q = field.q
    qi = field.q_power(-1)
    one = field.one
    for coproduct in ("K-left", "K-right"):
        for s in (-one, one, -q, -qi, q, qi):
            yield coproduct, s


def _violations(ctx2, ops):
    cc = build_beta_gamma(ctx2)
    bad = []
    for kind in ("E", "F", "K", "Kinv"):
        for i, M in enumerate(ops[kind]):
            for name, B in (("beta'", cc.beta), ("gamma'", cc.gamma)):
                if M @ B != B @ M:
                    bad.append(f"{kind}_{i + 1} does not commute with {name}")
            img = vec_apply(cc.alpha, M)
            want = cc.alpha if kind in ("K", "Kinv") else {}
            if img != want:
                bad.append(f"{kind}_{i + 1} does not act trivially on alpha")
    return bad


@lru_cache(maxsize=None)
def calibrate(m, field):
    """First coproduct/sign convention passing the calibration invariants on V (x) V."""
    ctx2 = RepContext(m, 2, field)
    first = None
    for conv in _candidates(field):
        bad = _violations(ctx2, _build_uq(ctx2, conv, 2))
        if not bad:
            return conv
        first = first or bad
    raise CalibrationError("no quantum group convention passed calibration; "
                           f"first candidate failed: {first[0]}")


def uq_convention(ctx):
    coproduct, s = calibrate(ctx.m, ctx.field)
    return {"coproduct": coproduct, "sign": s}


def uq_generators(ctx):
    """Calibrated {"E": [...], "F": [...], "K": [...], "Kinv": [...]} on V^(x)n."""
    if "uq" not in ctx._cache:
        ctx._cache["uq"] = _build_uq(ctx, calibrate(ctx.m, ctx.field), ctx.n)
    return ctx._cache["uq"]


def uq_generator_list(ctx):
    ops = uq_generators(ctx)
    return ops["E"] + ops["F"] + ops["K"]


def weight_space(ctx, lam):
    """Span of the basis tensors of weight ``lam``."""
    lam = tuple(lam) + (0,) * (ctx.m - len(lam))
    if len(lam) != ctx.m:
        raise ValueError(f"weight {lam} has more than m={ctx.m} entries")
    one = ctx.field.one
    idx = [i for i, w in enumerate(ctx.weights) if w == lam]
    return Subspace(ctx.dim, [{i: one} for i in idx], idx, ctx.field)


def alpha_power(ctx, f):
    """alpha^(x)f as a vector in V^(x)2f."""
    cc = build_beta_gamma(ctx)
    out = {0: ctx.field.one}
    for _ in range(f):
        out = tensor_vectors(out, cc.alpha, ctx.D ** 2)
    return out
