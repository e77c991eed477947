"""Sparse exact linear algebra over a :class:`~bmw_duality.scalars.FieldSpec`.

Vectors are ``dict`` objects mapping column index to a nonzero scalar.
Matrices use the row-vector convention throughout: row ``i`` of a ``Mat`` is
the image of basis vector ``i``, so applying ``A`` then ``B`` is ``A @ B``.
Flattening a ``d x e`` matrix to a vector is row-major (``i * e + j``).
"""

from collections import deque
import json

from .scalars import FieldSpec, format_scalar, parse_scalar

GENERIC_SIZE_LIMIT = 4000


class DimensionError(ValueError):
    """Operands have incompatible shapes or ambient spaces."""


class NotInvariantError(ValueError):
    """A subspace is not stable under an operator that must preserve it."""


class SizeGuardError(ValueError):
    """The instance is too large for elimination over Q(q)."""


def axpy(acc, x, v):
    """``acc += x * v`` in place, dropping cancelled entries."""
    for j, y in v.items():
        t = acc.get(j)
        if t is None:
            acc[j] = x * y
        else:
            t = t + x * y
            if t:
                acc[j] = t
            else:
                del acc[j]
    return acc


def vec_apply(v, M):
    """Row vector times matrix."""
    acc = {}
    rows = M.rows
    for k, a in v.items():
        axpy(acc, a, rows[k])
    return acc


def vec_scale(v, x):
    if not x:
        return {}
    return {j: x * y for j, y in v.items()}


class Mat:
    __slots__ = ("nrows", "ncols", "rows", "field")

    def __init__(self, nrows, ncols, rows, field):
        if len(rows) != nrows:
            raise DimensionError(f"expected {nrows} rows, got {len(rows)}")
        self.nrows, self.ncols, self.rows, self.field = nrows, ncols, rows, field

    @classmethod
    def identity(cls, n, field):
        one = field.one
        return cls(n, n, [{i: one} for i in range(n)], field)

    @classmethod
    def zero(cls, nrows, ncols, field):
        return cls(nrows, ncols, [{} for _ in range(nrows)], field)

    @classmethod
    def from_entries(cls, nrows, ncols, entries, field):
        rows = [{} for _ in range(nrows)]
        for (i, j), x in entries.items():
            x = field(x) if not field.contains(x) else x
            if x:
                rows[i][j] = x
        return cls(nrows, ncols, rows, field)

    @classmethod
    def from_dense(cls, data, field):
        data = [list(r) for r in data]
        ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            row = {}
            for j, x in enumerate(r):
                x = x if field.contains(x) else field(x)
                if x:
                    row[j] = x
            rows.append(row)
        return cls(len(rows), ncols, rows, field)

    @classmethod
    def from_flat(cls, vec, nrows, ncols, field):
        rows = [{} for _ in range(nrows)]
        for k, x in vec.items():
            i, j = divmod(k, ncols)
            rows[i][j] = x
        return cls(nrows, ncols, rows, field)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def entries(self):
        return {(i, j): x for i, row in enumerate(self.rows) for j, x in row.items()}

    def nnz(self):
        return sum(len(r) for r in self.rows)

    def flatten(self):
        c = self.ncols
        return {i * c + j: x for i, row in enumerate(self.rows) for j, x in row.items()}

    def to_dense(self):
        z = self.field.zero
        return [[row.get(j, z) for j in range(self.ncols)] for row in self.rows]

    def _check_field(self, other):
        if other.field != self.field:
            raise DimensionError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other):
        self._check_field(other)
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other.rows
        out = []
        for row in self.rows:
            acc = {}
            for k, a in row.items():
                axpy(acc, a, orows[k])
            out.append(acc)
        return Mat(self.nrows, other.ncols, out, self.field)

    def __add__(self, other):
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        one = self.field.one
        return Mat(self.nrows, self.ncols,
                   [axpy(dict(a), one, b) for a, b in zip(self.rows, other.rows)], self.field)

    def __neg__(self):
        return Mat(self.nrows, self.ncols, [{j: -x for j, x in r.items()} for r in self.rows],
                   self.field)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, x):
        return Mat(self.nrows, self.ncols, [vec_scale(r, x) for r in self.rows], self.field)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(r.items())) for r in self.rows)))

    def is_zero(self):
        return not any(self.rows)

    def transpose(self):
        rows = [{} for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, x in row.items():
                rows[j][i] = x
        return Mat(self.ncols, self.nrows, rows, self.field)

    def kron(self, other):
        self._check_field(other)
        oc = other.ncols
        rows = []
        for ra in self.rows:
            for rb in other.rows:
                row = {}
                for ja, a in ra.items():
                    base = ja * oc
                    for jb, b in rb.items():
                        row[base + jb] = a * b
                rows.append(row)
        return Mat(self.nrows * other.nrows, self.ncols * oc, rows, self.field)

    def is_diagonal(self):
        return all(not r or (len(r) == 1 and i in r) for i, r in enumerate(self.rows))

    def diagonal(self):
        z = self.field.zero
        return [r.get(i, z) for i, r in enumerate(self.rows)]

    def apply(self, v):
        return vec_apply(v, self)

    def __repr__(self):
        return f"Mat({self.nrows}x{self.ncols}, nnz={self.nnz()}, field={self.field})"


def kron_all(mats):
    out = mats[0]
    for m in mats[1:]:
        out = out.kron(m)
    return out


class _Echelon:
    """Incrementally maintained fully reduced row form.

    ``leftmost`` pivoting keeps the canonical RREF; ``cheap`` pivoting picks
    the entry of least size, which is only used where the reduced form is an
    internal intermediate.
    """

    def __init__(self, ambient, field, pivoting="leftmost"):
        self.ambient = ambient
        self.field = field
        self.piv = {}
        self.pivoting = pivoting

    @property
    def rank(self):
        return len(self.piv)

    def reduce(self, v):
        v = dict(v)
        piv = self.piv
        for c in [c for c in v if c in piv]:
            x = v.get(c)
            if x:
                axpy(v, -x, piv[c])
        return v

    def add(self, v):
        v = self.reduce(v)
        if not v:
            return False
        if self.pivoting == "leftmost":
            c = min(v)
        else:
            size = self.field.complexity
            c = min(v, key=lambda j: (size(v[j]), len(v), j))
        inv = 1 / v[c]
        if inv != 1:
            v = {j: inv * x for j, x in v.items()}
        for row in self.piv.values():
            x = row.get(c)
            if x:
                axpy(row, -x, v)
        self.piv[c] = v
        return True

    def subspace(self):
        if self.pivoting != "leftmost":
            return rref(self.piv.values(), self.ambient, self.field)
        cols = sorted(self.piv)
        return Subspace(self.ambient, [self.piv[c] for c in cols], cols, self.field)


class Subspace:
    """A subspace given by its canonical reduced row echelon basis."""

    __slots__ = ("ambient_dim", "rows", "pivots", "field", "_pivset")

    def __init__(self, ambient_dim, rows, pivots, field):
        self.ambient_dim = ambient_dim
        self.rows = tuple(rows)
        self.pivots = tuple(pivots)
        self.field = field
        self._pivset = None

    @classmethod
    def zero(cls, ambient_dim, field):
        return cls(ambient_dim, [], [], field)

    @classmethod
    def full(cls, ambient_dim, field):
        one = field.one
        return cls(ambient_dim, [{i: one} for i in range(ambient_dim)], range(ambient_dim), field)

    @property
    def dim(self):
        return len(self.rows)

    @property
    def basis(self):
        return self.rows

    def __len__(self):
        return len(self.rows)

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")
        if self.field != other.field:
            raise DimensionError(f"field mismatch: {self.field} vs {other.field}")

    def reduce(self, v):
        """Normal form of ``v`` modulo this subspace (zero at every pivot)."""
        v = dict(v)
        for c, row in zip(self.pivots, self.rows):
            x = v.get(c)
            if x:
                axpy(v, -x, row)
        return v

    def contains_vector(self, v):
        return not self.reduce(v)

    def coordinates(self, v):
        """Coefficients of ``v`` in this basis; raises if ``v`` lies outside."""
        if self.reduce(v):
            raise NotInvariantError("vector does not lie in the subspace")
        z = self.field.zero
        return [v.get(c, z) for c in self.pivots]

    def sum(self, other):
        self._check(other)
        return rref(list(self.rows) + list(other.rows), self.ambient_dim, self.field)

    __add__ = sum

    def intersect(self, other):
        # Zassenhaus: rows (a | a) and (b | 0); rows with empty left half span the meet
        self._check(other)
        D = self.ambient_dim
        ech = _Echelon(2 * D, self.field)
        for a in self.rows:
            ech.add({**a, **{D + j: x for j, x in a.items()}})
        for b in other.rows:
            ech.add(b)
        rows = [{j - D: x for j, x in ech.piv[c].items()} for c in sorted(ech.piv) if c >= D]
        out = Subspace(D, rows, [min(r) for r in rows], self.field)
        assert out.dim + self.sum(other).dim == self.dim + other.dim
        return out

    def contains(self, other):
        self._check(other)
        return all(not self.reduce(v) for v in other.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.pivots == other.pivots
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots))

    def complement_columns(self):
        """Non-pivot coordinates; their unit vectors give a basis of the quotient."""
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]

    def as_mat(self):
        return Mat(self.dim, self.ambient_dim, [dict(r) for r in self.rows], self.field)

    def matrices(self, nrows, ncols=None):
        ncols = nrows if ncols is None else ncols
        if nrows * ncols != self.ambient_dim:
            raise DimensionError("basis vectors do not have matrix size")
        return [Mat.from_flat(r, nrows, ncols, self.field) for r in self.rows]

    def orthogonal_complement(self):
        """``{w : sum_j v_j w_j = 0 for every v in the subspace}``."""
        return kernel(self.as_mat())

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, field={self.field})"


def rref(vectors, ambient_dim=None, field=None):
    """Canonical row space of the given vectors (or of a ``Mat``)."""
    if isinstance(vectors, Mat):
        ambient_dim, field = vectors.ncols, vectors.field
        vectors = vectors.rows
    ech = _Echelon(ambient_dim, field)
    for v in vectors:
        ech.add(v)
    return ech.subspace()


def _kernel(equations, columns, ambient_dim, field):
    ech = _Echelon(ambient_dim, field, pivoting="cheap")
    for eq in equations:
        ech.add(eq)
    pivots = set(ech.piv)
    free = [c for c in columns if c not in pivots]
    vecs = {f: {f: field.one} for f in free}
    for p, row in ech.piv.items():
        for j, x in row.items():
            if j != p:
                vecs[j][p] = -x
    return rref(vecs.values(), ambient_dim, field)


def kernel(M):
    """Right null space ``{x : M x = 0}`` of a ``Mat``."""
    out = _kernel(M.rows, range(M.ncols), M.ncols, M.field)
    assert out.dim + rref(M).dim == M.ncols
    return out


def left_kernel(M):
    """``{v : v @ M = 0}``."""
    return kernel(M.transpose())


def _guard(d, field, what):
    if field.kind == "generic" and d > GENERIC_SIZE_LIMIT:
        raise SizeGuardError(
            f"{what} on a {d}-dimensional space over Q(q) is refused; "
            "use a specialized field such as zeta:2 or modp:5")


def algebra_closure(gens, include_identity=True, d=None, field=None):
    """Span of all words in ``gens`` as flattened ``d*d`` vectors.

    Words are generated breadth first by length, so the basis order and the
    resulting echelon form are reproducible.
    """
    if gens:
        d, field = gens[0].nrows, gens[0].field
    if any(G.shape != (d, d) for G in gens):
        raise DimensionError("generators must be square of equal size")
    _guard(d, field, "algebra closure")
    ech = _Echelon(d * d, field)
    queue = deque()
    start = ([Mat.identity(d, field)] if include_identity else []) + list(gens)
    for M in start:
        if ech.add(M.flatten()):
            queue.append(M)
    while queue:
        M = queue.popleft()
        for G in gens:
            P = M @ G
            if ech.add(P.flatten()):
                queue.append(P)
    return ech.subspace()


def two_sided_ideal(algebra, g):
    """Span of ``a @ g @ b`` over basis elements ``a, b`` of ``algebra`` and 1."""
    d = g.nrows
    if algebra.ambient_dim != d * d:
        raise DimensionError("algebra and generator sizes differ")
    if algebra.reduce(g.flatten()):
        raise ValueError("ideal generator does not lie in the algebra")
    _guard(d, g.field, "ideal computation")
    mats = [Mat.identity(d, g.field)] + algebra.matrices(d)
    left = _Echelon(d * d, g.field)
    for a in mats:
        left.add((a @ g).flatten())
    lmats = left.subspace().matrices(d)
    ech = _Echelon(d * d, g.field)
    for x in lmats:
        for b in mats:
            ech.add((x @ b).flatten())
    return ech.subspace()


def intertwiners(src_gens, dst_gens, d_src=None, d_dst=None, field=None):
    """Solutions ``X`` of ``A_k @ X == X @ B_k`` for paired generators.

    Returned as flattened ``d_src x d_dst`` matrices.  Pairs of diagonal
    generators are used first to restrict the unknowns to entries whose
    diagonal values agree; that restriction is exactly what those equations
    impose, so the solution space is unchanged.
    """
    if len(src_gens) != len(dst_gens):
        raise DimensionError("generator lists differ in length")
    if src_gens:
        d_src, d_dst, field = src_gens[0].nrows, dst_gens[0].nrows, src_gens[0].field
    for A, B in zip(src_gens, dst_gens):
        if A.shape != (d_src, d_src) or B.shape != (d_dst, d_dst):
            raise DimensionError("generator sizes are inconsistent")
    diag, rest = [], []
    for A, B in zip(src_gens, dst_gens):
        (diag if A.is_diagonal() and B.is_diagonal() else rest).append((A, B))
    src_sig = list(zip(*[A.diagonal() for A, _ in diag])) if diag else [()] * d_src
    dst_sig = list(zip(*[B.diagonal() for _, B in diag])) if diag else [()] * d_dst
    by_sig = {}
    for j, s in enumerate(dst_sig):
        by_sig.setdefault(s, []).append(j)
    unknowns = [i * d_dst + j for i, s in enumerate(src_sig) for j in by_sig.get(s, ())]
    _guard(max(d_src, d_dst), field, "intertwiner solve")
    equations = []
    for A, B in rest:
        At = A.transpose().rows
        eqs = {}
        for u in unknowns:
            l, j = divmod(u, d_dst)
            for i, a in At[l].items():
                e = eqs.setdefault(i * d_dst + j, {})
                t = e.get(u)
                e[u] = a if t is None else t + a
            for j2, b in B.rows[j].items():
                e = eqs.setdefault(l * d_dst + j2, {})
                t = e.get(u)
                e[u] = -b if t is None else t - b
        for e in eqs.values():
            e = {k: x for k, x in e.items() if x}
            if e:
                equations.append(e)
    return _kernel(equations, unknowns, d_src * d_dst, field)


def commutant(gens, d=None, field=None):
    """All ``X`` with ``X @ G == G @ X`` for every generator."""
    return intertwiners(gens, gens, d, d, field)


def module_span(vectors, operators, d=None):
    """Span of ``v @ M`` for basis vectors ``v`` and operator basis matrices ``M``."""
    d = vectors.ambient_dim
    if operators.ambient_dim != d * d:
        raise DimensionError("operators do not act on the vector space")
    mats = operators.matrices(d)
    ech = _Echelon(d, vectors.field)
    for M in mats:
        for v in vectors.rows:
            ech.add(vec_apply(v, M))
    return ech.subspace()


def saturate(vectors, gens, ambient_dim=None, field=None):
    """Smallest subspace containing ``vectors`` and stable under ``v -> v @ G``."""
    if isinstance(vectors, Subspace):
        ambient_dim, field = vectors.ambient_dim, vectors.field
        vectors = vectors.rows
    ech = _Echelon(ambient_dim, field)
    queue = deque()
    for v in vectors:
        if ech.add(v):
            queue.append(v)
    while queue:
        v = queue.popleft()
        for G in gens:
            w = vec_apply(v, G)
            if w and ech.add(w):
                queue.append(w)
    return ech.subspace()


def is_invariant(sub, M):
    return all(not sub.reduce(vec_apply(v, M)) for v in sub.rows)


def restricted_action(sub, M):
    """Matrix of ``M`` on an invariant subspace, in its echelon basis."""
    rows = []
    for v in sub.rows:
        w = vec_apply(v, M)
        if sub.reduce(w):
            raise NotInvariantError("operator does not preserve the subspace")
        rows.append({k: w[c] for k, c in enumerate(sub.pivots) if c in w})
    return Mat(sub.dim, sub.dim, rows, sub.field)


def quotient_action(sub, M):
    """Induced matrix on ``V / sub`` in the basis of complement unit vectors."""
    cols = sub.complement_columns()
    index = {c: k for k, c in enumerate(cols)}
    one = sub.field.one
    rows = []
    for c in cols:
        w = sub.reduce(vec_apply({c: one}, M))
        rows.append({index[j]: x for j, x in w.items()})
    return Mat(len(cols), len(cols), rows, sub.field)


# -- serialization ----------------------------------------------------------

def subspace_to_json(sub):
    """Deterministic JSON text: sorted sparse triples with canonical scalars."""
    triples = [[k, j, format_scalar(x)] for k, row in enumerate(sub.rows)
               for j, x in sorted(row.items())]
    payload = {
        "ambient_dim": sub.ambient_dim,
        "field": sub.field.descriptor,
        "pivots": list(sub.pivots),
        "entries": triples,
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def subspace_from_json(text):
    payload = json.loads(text)
    field = FieldSpec.from_descriptor(payload["field"])
    rows = [{} for _ in payload["pivots"]]
    for k, j, s in payload["entries"]:
        rows[k][j] = parse_scalar(s, field)
    sub = Subspace(payload["ambient_dim"], rows, payload["pivots"], field)
    for c, row in zip(sub.pivots, sub.rows):
        if row.get(c) != field.one or min(row) != c:
            raise ValueError("serialized basis is not in reduced echelon form")
    return sub
