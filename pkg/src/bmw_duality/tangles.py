"""Framed tangle expressions: arity-checked trees, a parser and a printer.

Grammar (``;`` composes left-to-right, ``*`` is tensor, ``+`` is a linear sum)::

    sum    := comp ('+' comp)*
    comp   := term (';' term)*
    term   := factor ('*' factor)*
    factor := GEN | GEN '^' INT | scalar '.' factor | '(' sum ')'
    GEN    := 'I' | 'X' | 'Xi' | 'A' | 'U'
    scalar := INT | 'q' | 'q^' ['-'] INT | '{' scalar-expression '}'

``A`` is the cup (0 -> 2) and ``U`` the cap (2 -> 0); ``U ; A`` is the
contraction generator on two strands.  ``GEN^k`` is the k-fold tensor power,
with ``GEN^0`` the empty diagram.
"""

from dataclasses import dataclass, field as dc_field
import random
import re

from .scalars import RatFunc, format_scalar, parse_scalar, FieldSpec

ARITY = {"I": (1, 1), "X": (2, 2), "Xi": (2, 2), "A": (0, 2), "U": (2, 0)}
NAMES = {"I": "Id", "X": "Cross", "Xi": "CrossInv", "A": "Cup", "U": "Cap"}


class ArityError(ValueError):
    pass


class TangleSyntaxError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


class TangleExpr:
    src: int
    dst: int

    def __mul__(self, other):
        return Tensor(self, other)

    def __rshift__(self, other):
        # a >> b reads "a, then b"
        return Compose(self, other)

    def __add__(self, other):
        return Sum((self, other))

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Gen(TangleExpr):
    name: str

    def __post_init__(self):
        if self.name not in ARITY:
            raise ValueError(f"unknown elementary tangle {self.name!r}")

    @property
    def src(self):
        return ARITY[self.name][0]

    @property
    def dst(self):
        return ARITY[self.name][1]


@dataclass(frozen=True, eq=True)
class Empty(TangleExpr):
    """The empty diagram, identity of the object 0."""

    src = 0
    dst = 0


@dataclass(frozen=True, eq=True)
class Compose(TangleExpr):
    left: TangleExpr
    right: TangleExpr
    src: int = dc_field(init=False, compare=False)
    dst: int = dc_field(init=False, compare=False)

    def __post_init__(self):
        if self.left.dst != self.right.src:
            raise ArityError(
                f"cannot compose: left side has {self.left.dst} outputs, "
                f"right side expects {self.right.src} inputs")
        object.__setattr__(self, "src", self.left.src)
        object.__setattr__(self, "dst", self.right.dst)


@dataclass(frozen=True, eq=True)
class Tensor(TangleExpr):
    left: TangleExpr
    right: TangleExpr
    src: int = dc_field(init=False, compare=False)
    dst: int = dc_field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "src", self.left.src + self.right.src)
        object.__setattr__(self, "dst", self.left.dst + self.right.dst)


@dataclass(frozen=True, eq=True)
class Scale(TangleExpr):
    coeff: RatFunc
    expr: TangleExpr
    src: int = dc_field(init=False, compare=False)
    dst: int = dc_field(init=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.coeff, RatFunc):
            object.__setattr__(self, "coeff", FieldSpec.generic()(self.coeff))
        object.__setattr__(self, "src", self.expr.src)
        object.__setattr__(self, "dst", self.expr.dst)


@dataclass(frozen=True, eq=True)
class Sum(TangleExpr):
    terms: tuple
    src: int = dc_field(init=False, compare=False)
    dst: int = dc_field(init=False, compare=False)

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ArityError("empty sum has no arity")
        arities = {(t.src, t.dst) for t in terms}
        if len(arities) != 1:
            raise ArityError(f"summands have different arities: {sorted(arities)}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "src", terms[0].src)
        object.__setattr__(self, "dst", terms[0].dst)


I, X, Xi, A, U = (Gen(n) for n in ("I", "X", "Xi", "A", "U"))
EMPTY = Empty()


def tensor(*parts):
    parts = [p for p in parts if not isinstance(p, Empty)]
    if not parts:
        return EMPTY
    out = parts[0]
    for p in parts[1:]:
        out = Tensor(out, p)
    return out


def compose(*parts):
    parts = [p for p in parts if not isinstance(p, Empty)]
    if not parts:
        return EMPTY
    out = parts[0]
    for p in parts[1:]:
        out = Compose(out, p)
    return out


def identity(k):
    return tensor(*([I] * k))


def cap_cup_chain(n, kind):
    """Nested caps ``U_n`` (2n -> 0) or nested cups ``A_n`` (0 -> 2n)."""
    if n < 1:
        raise ValueError("chain length must be positive")
    if kind in ("U", "U_n", "cap"):
        return compose(*[tensor(identity(k), U, identity(k)) for k in range(n - 1, -1, -1)])
    if kind in ("A", "A_n", "cup"):
        return compose(*[tensor(identity(k), A, identity(k)) for k in range(n)])
    raise ValueError(f"unknown chain kind {kind!r}")


def dual(D):
    """The rotated diagram ``D*``: t -> s for ``D``: s -> t."""
    s, t = D.src, D.dst
    parts = [tensor(identity(t), cap_cup_chain(s, "A")) if s else identity(t),
             tensor(identity(t), D, identity(s)),
             tensor(cap_cup_chain(t, "U"), identity(s)) if t else identity(s)]
    if s == 0 and t == 0:
        return D
    return compose(*parts)


_LETTER = re.compile(r"^(T|E)(\d+)(\^-1|inv)?$")


def _letter(item):
    if isinstance(item, tuple):
        kind, i = item
        kind = {"T": "T", "Tinv": "Tinv", "T^-1": "Tinv", "E": "E"}[kind]
        return kind, int(i)
    mo = _LETTER.match(item.replace(" ", ""))
    if not mo:
        raise ValueError(f"cannot read BMW letter {item!r}")
    kind = mo.group(1)
    if mo.group(3):
        if kind == "E":
            raise ValueError("E_i has no inverse")
        kind = "Tinv"
    return kind, int(mo.group(2))


def bmw_word(n, word):
    """Diagram of a word in ``T_i``, ``T_i^-1``, ``E_i`` on n strands.

    Letters are ``"T2"``, ``"T2^-1"``, ``"E1"`` or pairs like ``("E", 1)``;
    they are composed in the order given.
    """
    parts = []
    for item in word:
        kind, i = _letter(item)
        if not 1 <= i <= n - 1:
            raise ValueError(f"index {i} out of range for {n} strands")
        core = {"T": X, "Tinv": Xi, "E": Compose(U, A)}[kind]
        parts.append(tensor(identity(i - 1), core, identity(n - 1 - i)))
    if not parts:
        return identity(n)
    return compose(*parts)


# -- printing ---------------------------------------------------------------

_PLAIN_SCALAR = re.compile(r"^(\d+|q|q\^-?\d+)$")


def _scalar_text(c):
    text = format_scalar(c)
    return text if _PLAIN_SCALAR.match(text.replace(" ", "")) else "{" + text + "}"


def to_text(e, level=0):
    """Print ``e`` in the tangle grammar; ``parse(to_text(e)) == e``."""
    if isinstance(e, Gen):
        return e.name
    if isinstance(e, Empty):
        return "I^0"
    if isinstance(e, Sum):
        out = " + ".join(to_text(t, 1) for t in e.terms)
        lvl = 0
    elif isinstance(e, Compose):
        out = f"{to_text(e.left, 1)} ; {to_text(e.right, 2)}"
        lvl = 1
    elif isinstance(e, Tensor):
        out = f"{to_text(e.left, 2)} * {to_text(e.right, 3)}"
        lvl = 2
    elif isinstance(e, Scale):
        return f"{_scalar_text(e.coeff)}.{to_text(e.expr, 3)}"
    else:
        raise TypeError(f"not a tangle expression: {e!r}")
    return f"({out})" if level > lvl else out


# -- parsing ----------------------------------------------------------------

_TOK = re.compile(r"\s*(?:(Xi|X|I|A|U)|(q)|(\d+)|(\{[^{}]*\})|([;*+().^-]))")


def _tokenize(text):
    toks, pos = [], 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        mo = _TOK.match(text, pos)
        if not mo:
            raise TangleSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kinds = ("gen", "q", "int", "brace", "op")
        kind = kinds[mo.lastindex - 1]
        toks.append((kind, mo.group(mo.lastindex), mo.start(mo.lastindex)))
        pos = mo.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            found = tok[1] or "end of input"
            raise TangleSyntaxError(f"expected {value!r}, found {found!r}", tok[2])
        self.i += 1
        return tok

    def sum(self):
        terms = [self.comp()]
        plus = []
        while self.peek()[1] == "+":
            plus.append(self.take()[2])
            terms.append(self.comp())
        if len(terms) == 1:
            return terms[0]
        for t, pos in zip(terms[1:], plus):
            if (t.src, t.dst) != (terms[0].src, terms[0].dst):
                raise TangleSyntaxError(
                    f"arity mismatch at '+': {terms[0].src}->{terms[0].dst} "
                    f"vs {t.src}->{t.dst}", pos)
        return Sum(tuple(terms))

    def comp(self):
        out = self.term()
        while self.peek()[1] == ";":
            pos = self.take()[2]
            rhs = self.term()
            if out.dst != rhs.src:
                raise TangleSyntaxError(
                    f"arity mismatch at ';': left side has {out.dst} outputs "
                    f"but right side expects {rhs.src} inputs ({out.dst} != {rhs.src})", pos)
            out = Compose(out, rhs)
        return out

    def term(self):
        out = self.factor()
        while self.peek()[1] == "*":
            self.take()
            out = Tensor(out, self.factor())
        return out

    def scalar(self):
        kind, val, pos = self.take()
        try:
            if kind == "int":
                return parse_scalar(val)
            if kind == "brace":
                return parse_scalar(val[1:-1])
            # 'q' optionally followed by ^ [-] INT
            if self.peek()[1] == "^":
                self.take()
                sign = -1 if self.peek()[1] == "-" else 1
                if sign < 0:
                    self.take()
                k, kval, kpos = self.take()
                if k != "int":
                    raise TangleSyntaxError("expected integer exponent", kpos)
                return FieldSpec.generic().q_power(sign * int(kval))
            return FieldSpec.generic().q
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, TangleSyntaxError):
                raise
            raise TangleSyntaxError(f"bad scalar literal: {exc}", pos) from None

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "gen":
            self.take()
            g = Gen(val)
            if self.peek()[1] == "^":
                self.take()
                k, kval, kpos = self.take()
                if k != "int":
                    raise TangleSyntaxError("expected tensor power", kpos)
                k = int(kval)
                if k == 0:
                    return EMPTY
                out = g
                for _ in range(k - 1):
                    out = Tensor(out, g)
                return out
            return g
        if kind in ("int", "q", "brace"):
            c = self.scalar()
            self.take(".")
            return Scale(c, self.factor())
        if val == "(":
            self.take()
            out = self.sum()
            self.take(")")
            return out
        raise TangleSyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse(text):
    """Parse tangle syntax into an arity-checked expression."""
    p = _Parser(text)
    out = p.sum()
    kind, val, pos = p.peek()
    if kind != "end":
        raise TangleSyntaxError(f"trailing input {val!r}", pos)
    return out


# -- random well-typed expressions -------------------------------------------

def random_tangle(rng=None, src=None, depth=3, max_width=4, scalars=True):
    """Random well-typed expression, used for round-trip and functoriality tests."""
    rng = rng or random.Random()
    if src is None:
        src = rng.randint(0, max_width)
    return _random_from(rng, src, depth, max_width, scalars)


def _random_layer(rng, src, max_width):
    # one horizontal slice of generators consuming exactly `src` strands
    parts, left = [], src
    width_out = 0
    while left > 0 or (not parts and rng.random() < 0.3):
        choices = ["I"] if left else []
        if left >= 2:
            choices += ["X", "Xi", "U"]
        if width_out + left + 2 <= max_width:
            choices.append("A")
        if not choices:
            break
        name = rng.choice(choices)
        g = Gen(name)
        parts.append(g)
        left -= g.src
        width_out += g.dst
        if left == 0 and rng.random() < 0.7:
            break
    return tensor(*parts) if parts else EMPTY


def _random_from(rng, src, depth, max_width, scalars):
    if depth <= 0:
        return _random_layer(rng, src, max_width)
    r = rng.random()
    if r < 0.35:
        a = _random_from(rng, src, depth - 1, max_width, scalars)
        b = _random_from(rng, a.dst, depth - 1, max_width, scalars)
        return compose(a, b) if not isinstance(a, Empty) and not isinstance(b, Empty) else (
            a if isinstance(b, Empty) else b)
    if r < 0.55 and src >= 1:
        k = rng.randint(0, src)
        a = _random_from(rng, k, depth - 1, max_width, scalars)
        b = _random_from(rng, src - k, depth - 1, max_width, scalars)
        if a.dst + b.dst <= max_width and not isinstance(a, Empty) and not isinstance(b, Empty):
            return Tensor(a, b)
    if scalars and r < 0.65:
        c = rng.choice(["2", "q", "q^-1", "-1", "q - q^-1", "(q^2+1)/(q-2)", "1/3"])
        return Scale(parse_scalar(c), _random_from(rng, src, depth - 1, max_width, scalars))
    if scalars and r < 0.72:
        a = _random_from(rng, src, depth - 1, max_width, scalars)
        b = _random_from(rng, src, depth - 1, max_width, scalars)
        if (a.src, a.dst) == (b.src, b.dst):
            return Sum((a, b))
        return a
    return _random_layer(rng, src, max_width)
