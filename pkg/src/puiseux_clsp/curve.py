"""Exact bivariate polynomials f(z, w) = a_0(z) + a_1(z) w + ... + a_n(z) w^n.

All coefficients are :class:`fractions.Fraction`.  Nothing in this module
touches floating point except :meth:`Curve.evaluate`, which accepts whatever
numeric type the caller hands it (Fraction, complex, gmpy2.mpc).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import gmpy2

__all__ = [
    "Curve",
    "UniPoly",
    "ParseError",
    "NonPolynomialError",
    "CurveError",
    "parse_curve",
    "differentiate",
    "resultant_w",
    "reverse_at_infinity",
    "evaluate",
    "format_curve",
    "discriminant_locus",
    "is_squarefree_in_w",
]


class CurveError(ValueError):
    """Invalid curve (zero degree in w, not squarefree, ...)."""


class ParseError(ValueError):
    """Syntax error in a curve expression; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NonPolynomialError(ParseError):
    """The expression is well formed but not a polynomial in z and w."""


# --------------------------------------------------------------------------
# univariate polynomials over Q


def _trim(cs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial over Q, ascending powers.

    The zero polynomial has an empty coefficient tuple.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(tuple(Fraction(c) for c in self.coeffs)))

    @classmethod
    def monomial(cls, k: int, c=1) -> UniPoly:
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: UniPoly) -> UniPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    def __neg__(self) -> UniPoly:
        return UniPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: UniPoly) -> UniPoly:
        return self + (-other)

    def __mul__(self, other) -> UniPoly:
        if not isinstance(other, UniPoly):
            return UniPoly(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UniPoly(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> UniPoly:
        return UniPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db, lb = other.degree, other.leading
        q = [Fraction(0)] * max(len(r) - db, 0)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k] / lb
            if c:
                q[k - db] = c
                for j, b in enumerate(other.coeffs):
                    r[k - db + j] -= c * b
        return UniPoly(tuple(q)), UniPoly(tuple(r[:db]))

    def __floordiv__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[0]

    def __mod__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[1]

    def monic(self) -> UniPoly:
        return self * (1 / self.leading) if self.coeffs else self

    def gcd(self, other: UniPoly) -> UniPoly:
        """Monic gcd (heuristic integer gcd, verified, with a PRS fallback)."""
        return _gcd(self, other)

    def squarefree_part(self) -> UniPoly:
        """p / gcd(p, p'), made monic."""
        if self.degree < 1:
            return self.monic()
        return (self // self.gcd(self.derivative())).monic()

    def to_integer(self) -> tuple[list[int], int]:
        """Return (integer coefficients, L) with self = ints / L, L > 0."""
        lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in self.coeffs), 1)
        return [int(c * lcm) for c in self.coeffs], lcm

    def __str__(self) -> str:
        return _format_univariate(self.coeffs, "z") or "0"


# --------------------------------------------------------------------------
# integer polynomial helpers (Kronecker packing on gmpy2 integers)


def _pack(cs: Sequence[int], bits: int) -> int:
    acc = gmpy2.mpz(0)
    for c in reversed(cs):
        acc = (acc << bits) + c
    return acc


def _unpack(value: int, bits: int) -> list[int]:
    """Inverse of :func:`_pack` for balanced digits |c| < 2^(bits-1)."""
    out = []
    v = gmpy2.mpz(value)
    base = gmpy2.mpz(1) << bits
    half = base >> 1
    mask = base - 1
    while v:
        d = v & mask
        if d >= half:
            d -= base
        out.append(int(d))
        v = (v - d) >> bits
    return out


def _int_content(cs: Iterable[int]) -> int:
    g = 0
    for c in cs:
        g = math.gcd(g, c)
    return g


def _int_exact_div(a: list[int], b: list[int]) -> list[int] | None:
    """a / b over Z if exact, else None."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(a) - 1 < db:
        return None if any(a) else []
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        if a[k] % lb:
            return None
        c = a[k] // lb
        q[k - db] = c
        if c:
            for j, x in enumerate(b):
                a[k - db + j] -= c * x
    return q if not any(a[:db]) else None


def _gcd_heuristic(a: list[int], b: list[int]) -> list[int] | None:
    """GCDHEU: gcd of values at a large integer point, unpacked and verified."""
    ca, cb = _int_content(a), _int_content(b)
    pa = [x // ca for x in a]
    pb = [x // cb for x in b]
    bound = min(max(abs(x) for x in pa), max(abs(x) for x in pb))
    bits = 2 * bound.bit_length() + 32
    for _ in range(6):
        h = gmpy2.gcd(_pack(pa, bits), _pack(pb, bits))
        g = _unpack(h, bits)
        if g:
            g = [x // _int_content(g) for x in g]
            if g[-1] < 0:
                g = [-x for x in g]
            if _int_exact_div(pa, g) is not None and _int_exact_div(pb, g) is not None:
                return g
        bits = bits * 2 + 7
    return None


def _gcd_prs(a: list[int], b: list[int]) -> list[int]:
    """Primitive polynomial remainder sequence over Z."""

    def prim(p):
        c = _int_content(p)
        return [x // c for x in p] if c else p

    def strip(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    a, b = prim(strip(list(a))), prim(strip(list(b)))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = list(a)
        lb, db = b[-1], len(b) - 1
        while len(r) - 1 >= db and r:
            lr = r[-1]
            shift = len(r) - 1 - db
            r = [x * lb for x in r]
            for j, x in enumerate(b):
                r[shift + j] -= lr * x
            strip(r)
        a, b = b, prim(r)
    return a


def _gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    if p.degree == 0 or q.degree == 0:
        return UniPoly((1,))
    a, _ = p.to_integer()
    b, _ = q.to_integer()
    g = _gcd_heuristic(a, b)
    if g is None:
        g = _gcd_prs(a, b)
    return UniPoly(tuple(Fraction(x) for x in g)).monic()


# --------------------------------------------------------------------------
# the curve


@dataclass(frozen=True)
class Curve:
    """f(z, w) = sum_i a_i(z) w^i with exact rational coefficients."""

    coeffs: tuple[UniPoly, ...]

    def __post_init__(self):
        cs = [c if isinstance(c, UniPoly) else UniPoly(tuple(c)) for c in self.coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], Fraction]) -> Curve:
        """Build from {(z_power, w_power): coefficient}."""
        n = max((j for (_, j), c in terms.items() if c), default=-1)
        rows: list[list[Fraction]] = [[] for _ in range(n + 1)]
        for (i, j), c in terms.items():
            if not c:
                continue
            row = rows[j]
            if len(row) <= i:
                row.extend([Fraction(0)] * (i + 1 - len(row)))
            row[i] += c
        return cls(tuple(UniPoly(tuple(r)) for r in rows))

    @property
    def degree_w(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree_z(self) -> int:
        return max((a.degree for a in self.coeffs), default=-1)

    @property
    def leading(self) -> UniPoly:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> dict[tuple[int, int], Fraction]:
        return {
            (i, j): c for j, a in enumerate(self.coeffs) for i, c in enumerate(a.coeffs) if c
        }

    def differentiate(self, var: str) -> Curve:
        return differentiate(self, var)

    def evaluate(self, z, w):
        return evaluate(self, z, w)

    def fiber(self, z) -> list:
        """Coefficients of f(z, .) in w, ascending, evaluated at z."""
        return [a(z) for a in self.coeffs]

    def validate(self) -> Curve:
        """Check n >= 1 and that f has no repeated factor in w."""
        if self.degree_w < 1:
            raise CurveError("curve has zero degree in w")
        if not is_squarefree_in_w(self):
            raise CurveError("curve is not squarefree in w: gcd(f, f_w) is nontrivial")
        return self

    def __str__(self) -> str:
        return format_curve(self)


def differentiate(c: Curve, var: str) -> Curve:
    """Exact partial derivative with respect to ``'z'`` or ``'w'``."""
    if var == "z":
        return Curve(tuple(a.derivative() for a in c.coeffs))
    if var == "w":
        return Curve(tuple(a * j for j, a in enumerate(c.coeffs) if j))
    raise ValueError(f"unknown variable {var!r}")


def evaluate(f: Curve, z, w):
    """Horner in w of Horner-evaluated a_i(z)."""
    acc = 0
    for a in reversed(f.coeffs):
        acc = acc * w + a(z)
    return acc


def reverse_at_infinity(f: Curve) -> Curve:
    """g(z, w) = z^d f(1/z, w) with d = degree_z(f)."""
    d = f.degree_z
    rows = []
    for a in f.coeffs:
        cs = list(a.coeffs) + [Fraction(0)] * (d + 1 - len(a.coeffs))
        rows.append(UniPoly(tuple(reversed(cs))))
    return Curve(tuple(rows))


# --------------------------------------------------------------------------
# resultant


def _bareiss_det(m: list[list[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [[gmpy2.mpz(x) for x in row] for row in m]
    sign = 1
    prev = gmpy2.mpz(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * rowk[j]) // prev
            ai[k] = 0
        prev = akk
    return int(sign * a[n - 1][n - 1])


def _sylvester(p: list, q: list) -> list[list]:
    """Sylvester matrix for p, q given as ascending coefficient lists in w."""
    n, m = len(p) - 1, len(q) - 1
    size = n + m
    rows = []
    for k in range(m):
        row = [0] * size
        for i, c in enumerate(reversed(p)):
            row[k + i] = c
        rows.append(row)
    for k in range(n):
        row = [0] * size
        for i, c in enumerate(reversed(q)):
            row[k + i] = c
        rows.append(row)
    return rows


def resultant_w(f: Curve, g: Curve) -> UniPoly:
    """Res_w(f, g) as an exact polynomial in z.

    The Sylvester determinant is taken over Z after clearing denominators
    and substituting z = 2^b, with b large enough that the coefficients of
    the result can be read back as balanced base-2^b digits.
    """
    if f.is_zero() or g.is_zero():
        raise CurveError("resultant of a zero curve")
    n, m = f.degree_w, g.degree_w
    if n == 0 and m == 0:
        raise CurveError("both inputs are constant in w")
    if m == 0:
        return _unipoly_pow(g.coeffs[0], n)
    if n == 0:
        return _unipoly_pow(f.coeffs[0], m)

    fi, lf = _integer_rows(f)
    gi, lg = _integer_rows(g)
    # coefficient bound: product over Sylvester rows of the row's l1 mass
    row_mass = [sum(sum(abs(c) for c in a) for a in fi)] * m + [
        sum(sum(abs(c) for c in a) for a in gi)
    ] * n
    bits = sum(max(x, 1).bit_length() for x in row_mass) + 2
    zval = gmpy2.mpz(1) << bits
    fv = [_pack(a, bits) if a else 0 for a in fi]
    gv = [_pack(a, bits) if a else 0 for a in gi]
    det = _bareiss_det(_sylvester(fv, gv))
    cs = _unpack(det, bits)
    del zval
    scale = Fraction(1, lf**m * lg**n)
    return UniPoly(tuple(Fraction(c) * scale for c in cs))


def _integer_rows(f: Curve) -> tuple[list[list[int]], int]:
    lcm = 1
    for a in f.coeffs:
        for c in a.coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return [[int(c * lcm) for c in a.coeffs] for a in f.coeffs], lcm


def _unipoly_pow(p: UniPoly, k: int) -> UniPoly:
    out = UniPoly((1,))
    for _ in range(k):
        out = out * p
    return out


def is_squarefree_in_w(f: Curve) -> bool:
    """True when f and f_w share no factor of positive w-degree."""
    if f.degree_w < 1:
        return False
    return not resultant_w(f, differentiate(f, "w")).is_zero()


def discriminant_locus(f: Curve) -> UniPoly:
    """Squarefree part of Res_w(f, f_w)."""
    return resultant_w(f, differentiate(f, "w")).squarefree_part()


# --------------------------------------------------------------------------
# printing


def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_univariate(cs: Sequence[Fraction], var: str) -> str:
    parts = []
    for k, c in enumerate(cs):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        if not mono:
            body = _format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_rational(mag)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def format_curve(c: Curve) -> str:
    """Canonical text: ascending w-power, each a_i(z) ascending in z."""
    chunks = []
    for j, a in enumerate(c.coeffs):
        if a.is_zero():
            continue
        body = f"({_format_univariate(a.coeffs, 'z')})"
        if j == 1:
            body += "*w"
        elif j > 1:
            body += f"*w^{j}"
        chunks.append(body)
    return " + ".join(chunks) if chunks else "0"


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<var>[zw])|(?P<op>\*\*|[-+*/^()])|(?P<bad>\S))"
)


class _Parser:
    """Recursive descent over + - * / ^ with implicit multiplication.

    Values are polynomials as {(z_power, w_power): Fraction}.
    """

    def __init__(self, text: str):
        self.text = text.replace("−", "-")
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(self.text):
            m = _TOKEN.match(self.text, pos)
            if m is None or m.end() == pos:
                break
            kind = m.lastgroup
            if kind == "bad":
                raise ParseError(f"unexpected character {m.group(kind)!r}", m.start(kind))
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}", pos)

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression", 0)
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return p

    def expr(self):
        acc = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            acc = _padd(acc, rhs if op == "+" else _pscale(rhs, -1))
        return acc

    def term(self):
        acc = self.unary()
        while True:
            kind, val, pos = self.peek()
            if val == "*":
                self.take()
                acc = _pmul(acc, self.unary())
            elif val == "/":
                self.take()
                rhs = self.unary()
                if set(rhs) - {(0, 0)}:
                    raise NonPolynomialError("division by a non-constant", pos)
                d = rhs.get((0, 0), Fraction(0))
                if d == 0:
                    raise ParseError("division by zero", pos)
                acc = _pscale(acc, 1 / d)
            elif kind in ("num", "var") or val == "(":
                acc = _pmul(acc, self.power())
            else:
                return acc

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return _pscale(self.unary(), -1)
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            _, _, pos = self.take()
            k = self.exponent(pos)
            out = {(0, 0): Fraction(1)}
            for _ in range(k):
                out = _pmul(out, base)
            return out
        return base

    def exponent(self, pos):
        kind, val, p = self.peek()
        neg = False
        if val in ("-", "+"):
            neg = val == "-"
            self.take()
            kind, val, p = self.peek()
        if kind == "num":
            self.take()
            if "." in val:
                raise NonPolynomialError("non-integer exponent", p)
            k = int(val)
        elif val == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            if set(e) - {(0, 0)}:
                raise NonPolynomialError("non-constant exponent", p)
            c = e.get((0, 0), Fraction(0))
            if c.denominator != 1:
                raise NonPolynomialError("non-integer exponent", p)
            k = int(c)
        else:
            raise ParseError("expected exponent", p)
        if neg:
            k = -k
        if k < 0:
            raise NonPolynomialError("negative exponent", pos)
        return k

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return {(0, 0): Fraction(val)}
        if kind == "var":
            return {(1, 0) if val == "z" else (0, 1): Fraction(1)}
        if val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {val!r}", pos)


def _padd(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + v
    return {k: v for k, v in out.items() if v}


def _pscale(a, s):
    return {k: v * s for k, v in a.items() if v * s}


def _pmul(a, b):
    out: dict = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v}


def parse_curve(text: str) -> Curve:
    """Parse an expression in z and w into a :class:`Curve`.

    >>> parse_curve("w^2 - z").degree_w
    2
    """
    curve = Curve.from_terms(_Parser(text).parse())
    if curve.degree_w < 1:
        raise CurveError("expression has zero degree in w")
    return curve
