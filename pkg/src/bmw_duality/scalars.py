"""Exact coefficient fields: Q(q), F_p(q) and Q with q specialized to a rational.

Generic elements are stored as ``q**e * N(q) / D(q)`` with ``N, D`` ordinary
polynomials (FLINT ``fmpz_poly`` over Z, ``nmod_poly`` over F_p), both with
nonzero constant term, coprime, and ``D`` normalized (positive leading
coefficient over Z, monic over F_p).  That form is unique, so equality is
structural.  Specialized elements are plain ``flint.fmpq`` rationals.
"""

from dataclasses import dataclass
from fractions import Fraction
import re

from flint import fmpq, fmpz_poly, nmod_poly


class FieldMismatchError(TypeError):
    """Operands come from different coefficient fields."""


class SpecializationError(ArithmeticError):
    """A denominator vanishes under the requested specialization."""


def _poly(coeffs, p):
    if p:
        return nmod_poly([c % p for c in coeffs], p)
    return fmpz_poly(coeffs)


def _valuation(f):
    for i, c in enumerate(f.coeffs()):
        if c != 0:
            return i
    return 0


def _is_one(f):
    return f.degree() == 0 and f[0] == 1


class LaurentPoly:
    """Element of Z[q, q^-1] or F_p[q, q^-1].

    ``terms`` is the canonical sorted tuple of ``(exponent, coefficient)``
    pairs; the zero polynomial has no terms.
    """

    __slots__ = ("_f", "_e", "_p")

    def __init__(self, terms=(), p=0):
        terms = dict(terms) if not isinstance(terms, dict) else terms
        self._p = p
        terms = {e: (c % p if p else c) for e, c in terms.items()}
        terms = {e: c for e, c in terms.items() if c != 0}
        if not terms:
            self._f, self._e = _poly([], p), 0
            return
        lo, hi = min(terms), max(terms)
        self._f = _poly([terms.get(lo + i, 0) for i in range(hi - lo + 1)], p)
        self._e = lo

    @classmethod
    def _raw(cls, f, e, p):
        self = cls.__new__(cls)
        if not f:
            e = 0
        else:
            v = _valuation(f)
            if v:
                f = f.right_shift(v)
                e += v
        self._f, self._e, self._p = f, e, p
        return self

    @classmethod
    def q(cls, p=0):
        return cls({1: 1}, p)

    @property
    def terms(self):
        return tuple(
            (self._e + i, int(c)) for i, c in enumerate(self._f.coeffs()) if c != 0
        )

    @property
    def modulus(self):
        return self._p

    def degree_span(self):
        if not self._f:
            return (0, -1)
        return (self._e, self._e + self._f.degree())

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other._p != self._p:
                raise FieldMismatchError("Laurent polynomials over different base rings")
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other}, self._p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self, other
        if a._e > b._e:
            a, b = b, a
        return LaurentPoly._raw(a._f + b._f.left_shift(b._e - a._e), a._e, self._p)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(-self._f, self._e, self._p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly._raw(self._f * other._f, self._e + other._e, self._p)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if self._f.degree() != 0 or (not self._p and abs(int(self._f[0])) != 1):
                raise ArithmeticError("only units of the Laurent ring can be inverted")
            c = int(self._f[0])
            inv = pow(c, -1, self._p) if self._p else c
            return LaurentPoly({-self._e * -k: inv ** -k}, self._p)
        out = LaurentPoly({0: 1}, self._p)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._e == other._e and self._f == other._f

    def __hash__(self):
        return hash(("L", self._p, self.terms))

    def __bool__(self):
        return bool(self._f)

    def __call__(self, value):
        return self._f(value) * value ** self._e

    def __repr__(self):
        return f"LaurentPoly({_format_terms(self.terms)!r})"

    def __str__(self):
        return _format_terms(self.terms)


def _format_terms(terms):
    if not terms:
        return "0"
    out = []
    for e, c in sorted(terms, reverse=True):
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if e == 0:
            body = str(c)
        else:
            mono = "q" if e == 1 else f"q^{e}"
            body = mono if c == 1 else f"{c}*{mono}"
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


class RatFunc:
    """Element of Q(q) (``p == 0``) or F_p(q)."""

    __slots__ = ("_n", "_d", "_e", "_p")

    @classmethod
    def _make(cls, n, d, e, p):
        # general normalization; callers on fast paths build via _raw
        if not n:
            return cls._raw(_poly([], p), _poly([1], p), 0, p)
        v = _valuation(n)
        if v:
            n = n.right_shift(v)
            e += v
        v = _valuation(d)
        if v:
            d = d.right_shift(v)
            e -= v
        if d.degree() > 0 or not _is_one(d):
            g = n.gcd(d)
            if not _is_one(g):
                n = n // g
                d = d // g
            lc = d.leading_coefficient()
            if p:
                if int(lc) != 1:
                    inv = pow(int(lc), -1, p)
                    n = n * inv
                    d = d * inv
            elif lc < 0:
                n, d = -n, -d
        return cls._raw(n, d, e, p)

    @classmethod
    def _raw(cls, n, d, e, p):
        self = cls.__new__(cls)
        self._n, self._d, self._e, self._p = n, d, e, p
        return self

    @classmethod
    def from_int(cls, c, p=0):
        return cls._make(_poly([c], p), _poly([1], p), 0, p)

    @classmethod
    def from_laurent(cls, num, den=None):
        p = num.modulus
        if den is None:
            return cls._raw(num._f, _poly([1], p), num._e, p) if num else cls.from_int(0, p)
        if not den:
            raise ZeroDivisionError("zero denominator")
        return cls._make(num._f * 1, den._f * 1, num._e - den._e, p)

    @classmethod
    def q_power(cls, k, p=0):
        return cls._raw(_poly([1], p), _poly([1], p), k, p)

    @property
    def num(self):
        return LaurentPoly._raw(self._n, self._e, self._p)

    @property
    def den(self):
        return LaurentPoly._raw(self._d, 0, self._p)

    @property
    def modulus(self):
        return self._p

    def is_laurent(self):
        return _is_one(self._d)

    def complexity(self):
        return self._n.degree() + self._d.degree() + 1

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other._p != self._p:
                raise FieldMismatchError(
                    f"mixing elements of characteristic {self._p} and {other._p}"
                )
            return other
        if isinstance(other, int):
            return RatFunc.from_int(other, self._p)
        if isinstance(other, LaurentPoly):
            if other.modulus != self._p:
                raise FieldMismatchError("Laurent polynomial over a different base ring")
            return RatFunc.from_laurent(other)
        raise FieldMismatchError(f"cannot combine a rational function with {type(other).__name__}")

    def __add__(self, o):
        o = self._coerce(o)
        if not o._n:
            return self
        if not self._n:
            return o
        a, b = (self, o) if self._e <= o._e else (o, self)
        shift = b._e - a._e
        p = self._p
        if _is_one(a._d) and _is_one(b._d):
            n = a._n + b._n.left_shift(shift)
            if not n:
                return RatFunc.from_int(0, p)
            return RatFunc._make(n, a._d, a._e, p)
        if a._d == b._d:
            n = a._n + b._n.left_shift(shift)
            return RatFunc._make(n, a._d, a._e, p)
        n = a._n * b._d + (b._n * a._d).left_shift(shift)
        return RatFunc._make(n, a._d * b._d, a._e, p)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self._n, self._d, self._e, self._p)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._coerce(o)
        p = self._p
        if not self._n or not o._n:
            return RatFunc.from_int(0, p)
        if _is_one(self._d) and _is_one(o._d):
            return RatFunc._raw(self._n * o._n, self._d, self._e + o._e, p)
        n1, d1, n2, d2 = self._n, self._d, o._n, o._d
        g = n1.gcd(d2)
        if not _is_one(g):
            n1, d2 = n1 // g, d2 // g
        g = n2.gcd(d1)
        if not _is_one(g):
            n2, d1 = n2 // g, d1 // g
        n, d = n1 * n2, d1 * d2
        lc = d.leading_coefficient()
        if p:
            if int(lc) != 1:
                inv = pow(int(lc), -1, p)
                n, d = n * inv, d * inv
        elif lc < 0:
            n, d = -n, -d
        return RatFunc._raw(n, d, self._e + o._e, p)

    __rmul__ = __mul__

    def inverse(self):
        if not self._n:
            raise ZeroDivisionError("inverse of zero")
        n, d, p = self._d, self._n, self._p
        lc = d.leading_coefficient()
        if p:
            if int(lc) != 1:
                inv = pow(int(lc), -1, p)
                n, d = n * inv, d * inv
        elif lc < 0:
            n, d = -n, -d
        return RatFunc._raw(n, d, -self._e, p)

    def __truediv__(self, o):
        return self * self._coerce(o).inverse()

    def __rtruediv__(self, o):
        return self._coerce(o) * self.inverse()

    def __pow__(self, k):
        base = self if k >= 0 else self.inverse()
        out = RatFunc.from_int(1, self._p)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, o):
        if isinstance(o, int):
            o = RatFunc.from_int(o, self._p)
        if not isinstance(o, RatFunc) or o._p != self._p:
            return False
        return self._e == o._e and self._n == o._n and self._d == o._d

    def __hash__(self):
        return hash((self._p, self._e, tuple(int(c) for c in self._n.coeffs()),
                     tuple(int(c) for c in self._d.coeffs())))

    def __bool__(self):
        return bool(self._n)

    def __repr__(self):
        return f"RatFunc({format_scalar(self)!r}, p={self._p})"

    def __str__(self):
        return format_scalar(self)


def format_scalar(x):
    """Canonical text in the scalar grammar; ``parse_scalar`` inverts it."""
    if isinstance(x, RatFunc):
        num = _format_terms(_signed_terms(x.num))
        if x.is_laurent():
            return num
        return f"({num})/({_format_terms(_signed_terms(x.den))})"
    if isinstance(x, LaurentPoly):
        return _format_terms(_signed_terms(x))
    x = fmpq(x)
    return str(x.p) if x.q == 1 else f"{x.p}/{x.q}"


def _signed_terms(lp):
    # F_p coefficients print in the symmetric range so that -1 stays -1
    p = lp.modulus
    if not p:
        return lp.terms
    return tuple((e, c - p if c > p // 2 else c) for e, c in lp.terms)


@dataclass(frozen=True)
class FieldSpec:
    """One of the supported coefficient fields.

    ``kind`` is ``"generic"`` (Q(q)), ``"modp"`` (F_p(q), q transcendental) or
    ``"zeta"`` (Q with q -> a/b).  Specializations at roots of unity are
    rejected at construction.
    """

    kind: str
    p: int = 0
    zeta: tuple = (0, 1)

    def __post_init__(self):
        if self.kind == "generic":
            return
        if self.kind == "modp":
            if self.p < 2 or any(self.p % k == 0 for k in range(2, int(self.p ** 0.5) + 1)):
                raise ValueError(f"modulus {self.p} is not prime")
            return
        if self.kind == "zeta":
            a, b = self.zeta
            if b == 0:
                raise ValueError("zero denominator in specialization")
            fr = Fraction(a, b)
            a, b = fr.numerator, fr.denominator
            object.__setattr__(self, "zeta", (a, b))
            if fr in (0, 1, -1) or abs(a) == abs(b):
                raise ValueError(f"q = {fr} is zero or a root of unity")
            return
        raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def generic(cls):
        return cls("generic")

    @classmethod
    def modp(cls, p):
        return cls("modp", p=p)

    @classmethod
    def specialized(cls, a, b=1):
        return cls("zeta", zeta=(a, b))

    @classmethod
    def from_descriptor(cls, text):
        text = text.strip()
        if text == "generic":
            return cls.generic()
        if text.startswith("modp:"):
            return cls.modp(int(text[5:]))
        if text.startswith("zeta:"):
            fr = Fraction(text[5:])
            return cls.specialized(fr.numerator, fr.denominator)
        raise ValueError(f"unrecognized field descriptor {text!r}")

    @property
    def descriptor(self):
        if self.kind == "generic":
            return "generic"
        if self.kind == "modp":
            return f"modp:{self.p}"
        a, b = self.zeta
        return f"zeta:{a}" if b == 1 else f"zeta:{a}/{b}"

    def __str__(self):
        return self.descriptor

    @property
    def is_specialized(self):
        return self.kind == "zeta"

    @property
    def characteristic(self):
        return self.p if self.kind == "modp" else 0

    def __call__(self, value):
        """Coerce an int, str, Fraction, or generic rational function."""
        if isinstance(value, str):
            return parse_scalar(value, self)
        if isinstance(value, (RatFunc, LaurentPoly)):
            return specialize(value, self)
        if self.kind == "zeta":
            if isinstance(value, Fraction):
                return fmpq(value.numerator, value.denominator)
            return fmpq(value)
        if isinstance(value, Fraction):
            return self(value.numerator) / self(value.denominator)
        return RatFunc.from_int(int(value), self.characteristic)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def q(self):
        if self.kind == "zeta":
            return fmpq(*self.zeta)
        return RatFunc.q_power(1, self.characteristic)

    def q_power(self, k):
        if self.kind == "zeta":
            return fmpq(*self.zeta) ** k
        return RatFunc.q_power(k, self.characteristic)

    def contains(self, x):
        if self.kind == "zeta":
            return isinstance(x, fmpq)
        return isinstance(x, RatFunc) and x.modulus == self.characteristic

    def complexity(self, x):
        """Size measure used to pick elimination pivots."""
        if self.kind == "zeta":
            return int(x.p).bit_length() + int(x.q).bit_length()
        return x.complexity()


def specialize(x, target):
    """Image of a generic element of Z[q, q^-1] or Q(q) in ``target``."""
    if isinstance(x, int):
        return target(x)
    if isinstance(x, LaurentPoly):
        x = RatFunc.from_laurent(x)
    if not isinstance(x, RatFunc):
        if target.contains(x):
            return x
        raise FieldMismatchError(f"cannot specialize {type(x).__name__}")
    if x.modulus:
        if target.kind == "modp" and target.p == x.modulus:
            return x
        raise FieldMismatchError("only characteristic-0 elements can be specialized")
    if target.kind == "generic":
        return x
    num, den = x.num, x.den
    if target.kind == "modp":
        p = target.p
        n = LaurentPoly(dict(num.terms), p)
        d = LaurentPoly(dict(den.terms), p)
        if not d:
            raise SpecializationError(f"denominator {den} vanishes modulo {p}")
        return RatFunc.from_laurent(n, d)
    z = fmpq(*target.zeta)
    dv = den(z)
    if dv == 0:
        raise SpecializationError(f"denominator {den} vanishes at q = {z}")
    return fmpq(num(z)) / dv


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "eq": lambda a, b: a == b,
}


def scalar_arith(a, b, op):
    """Apply ``op`` to field elements; ``neg`` and ``inv`` ignore ``b``."""
    if op == "neg":
        return -a
    if op == "inv":
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a
    if type(a) is not type(b) or (isinstance(a, RatFunc) and a.modulus != b.modulus):
        raise FieldMismatchError("operands belong to different fields")
    if op == "div" and not b:
        raise ZeroDivisionError("division by zero")
    return _OPS[op](a, b)


def loop_value(m, field):
    """Closed-loop value x = 1 + (r - 1/r)/(q - 1/q) at r = -q^(2m+1)."""
    if m < 1:
        raise ValueError("rank m must be positive")
    q = field.q
    r = -field.q_power(2 * m + 1)
    return 1 + (r - 1 / r) / (q - 1 / q)


def r_value(m, field):
    return -field.q_power(2 * m + 1)


# -- textual syntax ---------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(\^)|([-+*/()]))")


class ScalarSyntaxError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _tokenize(text):
    toks, pos = [], 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        mo = _TOKEN.match(text, pos)
        if not mo:
            raise ScalarSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = mo.start(mo.lastindex)
        toks.append((mo.group(mo.lastindex), start))
        pos = mo.end()
    toks.append(("", len(text)))
    return toks


class _ScalarParser:
    def __init__(self, text, field):
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field

    def peek(self):
        return self.toks[self.i][0]

    def take(self, expect=None):
        tok, pos = self.toks[self.i]
        if expect is not None and tok != expect:
            raise ScalarSyntaxError(f"expected {expect!r}, found {tok or 'end of input'!r}", pos)
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek() in ("+", "-"):
            if self.take() == "+":
                val = val + self.term()
            else:
                val = val - self.term()
        return val

    def term(self):
        val = self.unary()
        while self.peek() in ("*", "/"):
            if self.take() == "*":
                val = val * self.unary()
            else:
                pos = self.toks[self.i][1]
                rhs = self.unary()
                if not rhs:
                    raise ZeroDivisionError(f"division by zero at position {pos}")
                val = val / rhs
        return val

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() in ("-", "+"):
                sign = -1 if self.take() == "-" else 1
            tok, pos = self.toks[self.i]
            if not tok.isdigit():
                raise ScalarSyntaxError("expected integer exponent", pos)
            self.take()
            k = sign * int(tok)
            if k < 0 and not base:
                raise ZeroDivisionError(f"negative power of zero at position {pos}")
            base = base ** k
        return base

    def atom(self):
        tok, pos = self.toks[self.i]
        if tok.isdigit():
            self.take()
            return self.field(int(tok))
        if tok == "q":
            self.take()
            return self.field.q
        if tok == "(":
            self.take()
            val = self.expr()
            self.take(")")
            return val
        raise ScalarSyntaxError(f"unexpected {tok or 'end of input'!r}", pos)


def parse_scalar(text, field=None):
    """Parse ``text`` (integers, ``q``, ``^``, ``+ - * /``, parentheses)."""
    field = field or FieldSpec.generic()
    parser = _ScalarParser(text, field)
    val = parser.expr()
    tok, pos = parser.toks[parser.i]
    if tok:
        raise ScalarSyntaxError(f"trailing input {tok!r}", pos)
    return val
