"""Dense univariate polynomials over exact coefficient domains.

One class covers every layer of the tower used by the package: a
``UniPoly`` holds coefficients that are either ``Fraction`` or again
``UniPoly``, so Q[s], Q[s][t] and Q[s][t][X] are all instances of the same
type, nested.  Trivariate family polynomials f(s, t, X) are represented with
X outermost, then t, then s, and that fixed nesting order is what the parser
produces (``TriPoly`` is an alias documenting the convention).

On top of the ring arithmetic this module provides subresultant-PRS
resultants and discriminants, rational root extraction, coefficient-valuation
Newton polygons, and the text parser for the manifest polynomial syntax
(`+ - * ^`, implicit multiplication, variables s, t, X).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import INFINITY, factorint


def _coerce(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    if isinstance(c, UniPoly):
        return c
    raise TypeError(f"unsupported coefficient {c!r}")


class UniPoly:
    """Polynomial in one variable, lowest-degree coefficient first.

    The zero polynomial has an empty coefficient tuple.  Binary operations
    require equal variable tags; ints and Fractions are accepted wherever a
    coefficient-ring scalar makes sense.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs, var: str):
        cc = [_coerce(c) for c in coeffs]
        while cc and not cc[-1]:
            cc.pop()
        self.coeffs = tuple(cc)
        self.var = var

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, value, var: str) -> "UniPoly":
        return cls([value], var)

    @classmethod
    def gen(cls, var: str, one=Fraction(1)) -> "UniPoly":
        return cls([one * 0, one], var)

    # -- structure ---------------------------------------------------------

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self._zero_scalar()

    def _zero_scalar(self):
        if self.coeffs and isinstance(self.coeffs[0], UniPoly):
            return UniPoly((), self.coeffs[0].var)
        return Fraction(0)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.lc() == 1

    def order_at_zero(self) -> int:
        """Multiplicity of 0 as a root (the variable-adic valuation)."""
        if not self.coeffs:
            raise ValueError("zero polynomial")
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise AssertionError

    # -- ring operations ---------------------------------------------------

    def _wrap(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly([other], self.var)
        if isinstance(other, UniPoly):
            if other.var != self.var:
                raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if len(self.coeffs) > 1:
                return False
            val = self.coeffs[0] if self.coeffs else self._zero_scalar()
            return val == Fraction(other) if isinstance(val, Fraction) else val == other
        if isinstance(other, UniPoly):
            return self.var == other.var and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly([c * other for c in self.coeffs], self.var)
        if isinstance(other, UniPoly) and other.var != self.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        if not self or not other:
            return UniPoly((), self.var)
        out = [self._zero_scalar()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out, self.var)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c) -> "UniPoly":
        """Multiply every coefficient by a coefficient-domain scalar."""
        return UniPoly([a * c for a in self.coeffs], self.var)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = UniPoly([_one_like(self._zero_scalar())], self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __divmod__(self, other):
        """Quotient and remainder; every leading-coefficient division must be
        exact in the coefficient domain (always true over Fraction, and used
        over polynomial coefficients only where divisibility is guaranteed)."""
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly((), self.var), self
        quot = [self._zero_scalar()] * (dq + 1)
        glc = other.lc()
        for k in range(dq, -1, -1):
            top = rem[k + other.degree()]
            if not top:
                continue
            q = _exact_div(top, glc)
            quot[k] = q
            for j, c in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - q * c
        return UniPoly(quot, self.var), UniPoly(rem, self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "UniPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    def derivative(self) -> "UniPoly":
        return UniPoly(
            [i * c for i, c in enumerate(self.coeffs)][1:] or (), self.var
        )

    def evaluate(self, value):
        """Horner evaluation; the result lives one nesting level down when
        `value` is a scalar."""
        if not self.coeffs:
            return self._zero_scalar() * 0 if isinstance(value, UniPoly) else Fraction(0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * value + c
        return acc

    def bind(self, var: str, value):
        """Substitute a scalar for `var` anywhere in the nesting."""
        if self.var == var:
            return self.evaluate(value)
        return UniPoly(
            [c.bind(var, value) if isinstance(c, UniPoly) else c for c in self.coeffs],
            self.var,
        )

    def variables(self) -> set[str]:
        out = {self.var}
        for c in self.coeffs:
            if isinstance(c, UniPoly):
                out |= c.variables()
        return out

    def degree_in(self, var: str) -> int:
        """Total view: the highest power of `var` appearing anywhere."""
        if self.var == var:
            return self.degree()
        best = -1
        for c in self.coeffs:
            if isinstance(c, UniPoly):
                best = max(best, c.degree_in(var))
        return best

    def monic(self) -> "UniPoly":
        if not self:
            raise ValueError("zero polynomial")
        c = self.lc()
        if c == 1:
            return self
        return UniPoly([_exact_div(a, c) for a in self.coeffs], self.var)

    def __repr__(self):
        return f"UniPoly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


#: Trivariate family polynomials use a fixed nesting: X over t over s.
TriPoly = UniPoly


def _one_like(zero):
    if isinstance(zero, UniPoly):
        return UniPoly([_one_like(zero._zero_scalar())], zero.var)
    return Fraction(1)


def _exact_div(a, b):
    if isinstance(a, Fraction) and isinstance(b, (int, Fraction)):
        return a / b
    if isinstance(a, UniPoly):
        if isinstance(b, (int, Fraction)):
            return a if b == 1 else a * (Fraction(1) / Fraction(b))
        return a.exact_div(b)
    if isinstance(b, UniPoly) and isinstance(a, Fraction):
        if not a:
            return UniPoly((), b.var)
        raise ArithmeticError("scalar not divisible by a nonconstant polynomial")
    raise TypeError(f"cannot divide {a!r} by {b!r}")


# -- parsing and printing ---------------------------------------------------

VARS = ("s", "t", "X")


def _nested_const(value) -> UniPoly:
    p = UniPoly([Fraction(value)], "s")
    p = UniPoly([p], "t")
    return UniPoly([p], "X")


def _nested_var(name: str) -> UniPoly:
    s0 = UniPoly([Fraction(0)], "s")
    s1 = UniPoly([Fraction(1)], "s")
    if name == "s":
        inner = UniPoly([Fraction(0), Fraction(1)], "s")
        return UniPoly([UniPoly([inner], "t")], "X")
    if name == "t":
        return UniPoly([UniPoly([s0, s1], "t")], "X")
    if name == "X":
        zero_t = UniPoly([s0], "t")
        one_t = UniPoly([s1], "t")
        return UniPoly([zero_t, one_t], "X")
    raise ValueError(f"unknown variable {name!r}")


class PolyParseError(ValueError):
    pass


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            # rational literal a/b
            if j < len(text) and text[j] == "/":
                k = j + 1
                while k < len(text) and text[k].isdigit():
                    k += 1
                if k == j + 1:
                    raise PolyParseError(f"bad rational literal near {text[i:k]!r}")
                tokens.append(("num", Fraction(num, int(text[j + 1 : k]))))
                i = k
            else:
                tokens.append(("num", Fraction(num)))
                i = j
            continue
        if ch in VARS:
            tokens.append(("var", ch))
            i += 1
            continue
        if ch in "+-*^()":
            tokens.append((ch, ch))
            i += 1
            continue
        raise PolyParseError(f"unexpected character {ch!r} at position {i}")
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expr(self) -> UniPoly:
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        elif self.peek() == "+":
            self.take()
        result = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            result = result + t if op == "+" else result - t
        return result

    def term(self) -> UniPoly:
        result = self.factor()
        while True:
            nxt = self.peek()
            if nxt == "*":
                self.take()
                result = result * self.factor()
            elif nxt in ("num", "var", "("):
                result = result * self.factor()
            else:
                return result

    def factor(self) -> UniPoly:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            kind, val = self.take() if self.pos < len(self.tokens) else (None, None)
            if kind != "num" or val.denominator != 1 or val < 0:
                raise PolyParseError("exponent must be a non-negative integer")
            return base ** int(val)
        return base

    def atom(self) -> UniPoly:
        if self.peek() is None:
            raise PolyParseError("unexpected end of input")
        kind, val = self.take()
        if kind == "num":
            return _nested_const(val)
        if kind == "var":
            return _nested_var(val)
        if kind == "(":
            inner = self.expr()
            if self.peek() != ")":
                raise PolyParseError("missing closing parenthesis")
            self.take()
            return inner
        raise PolyParseError(f"unexpected token {val!r}")


def parse_poly(text: str) -> TriPoly:
    """Parse an expression in s, t, X into the nested representation."""
    parser = _Parser(_tokenize(text))
    result = parser.expr()
    if parser.pos != len(parser.tokens):
        raise PolyParseError(f"trailing input at token {parser.pos}")
    return result


def format_poly(p) -> str:
    """Human-readable form, highest degree first, parseable back."""
    if isinstance(p, Fraction):
        from .arith import format_rat

        return format_rat(p)
    if not p:
        return "0"
    parts = []
    for i in range(p.degree(), -1, -1):
        c = p.coeff(i)
        if not c:
            continue
        if i == 0:
            mono = ""
        elif i == 1:
            mono = p.var
        else:
            mono = f"{p.var}^{i}"
        if isinstance(c, UniPoly):
            cs = format_poly(c)
            if c.degree() > 0 or (c.degree() == 0 and not _scalar_like(c)):
                cs = f"({cs})"
            text = f"{cs}*{mono}" if mono else cs
        else:
            if c == 1 and mono:
                text = mono
            elif c == -1 and mono:
                text = f"-{mono}"
            else:
                from .arith import format_rat

                text = f"{format_rat(c)}*{mono}" if mono else format_rat(c)
        parts.append(text)
    out = parts[0]
    for part in parts[1:]:
        out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
    return out


def _scalar_like(c: UniPoly) -> bool:
    while isinstance(c, UniPoly):
        if c.degree() > 0:
            return False
        c = c.coeff(0) if c.coeffs else Fraction(0)
    return True


def constant_value(p) -> Fraction:
    """Collapse a polynomial that is constant in every variable to a Fraction."""
    while isinstance(p, UniPoly):
        if p.degree() > 0:
            raise ValueError(f"{p} is not constant")
        p = p.coeff(0) if p.coeffs else Fraction(0)
    return p


# -- specialization ----------------------------------------------------------


def specialize(f: TriPoly, bindings: dict):
    """Bind some of s, t to rationals; binding X is rejected."""
    if "X" in bindings:
        raise ValueError("X is never specialized")
    out = f
    for var, value in bindings.items():
        if var not in ("s", "t"):
            raise ValueError(f"unknown variable {var!r}")
        out = out.bind(var, Fraction(value))
    return out


def x_poly_coeffs(f) -> list[Fraction]:
    """Coefficient list of a fully bound polynomial in X over Q."""
    return [constant_value(f.coeff(i)) for i in range(f.degree() + 1)]


# -- pseudo-division, resultants, discriminants ------------------------------


def pseudo_rem(f: UniPoly, g: UniPoly) -> UniPoly:
    """prem(f, g): remainder of lc(g)^(deg f - deg g + 1) * f by g."""
    if not g:
        raise ZeroDivisionError
    d = f.degree() - g.degree()
    if d < 0:
        return f
    lc = g.lc()
    r = f
    e = d + 1
    while r and r.degree() >= g.degree():
        shift = r.degree() - g.degree()
        top = r.lc()
        r = r.scale(lc) - UniPoly([r._zero_scalar()] * shift + [top], f.var) * g
        e -= 1
    if e > 0:
        r = r.scale(lc**e)
    return r


def resultant(f: UniPoly, g: UniPoly):
    """Res(f, g) by the subresultant PRS; exact over nested domains.

    Zero iff f and g share a root in an algebraic closure (for nonzero
    inputs of positive degree).
    """
    if isinstance(f, UniPoly) and isinstance(g, UniPoly) and f.var != g.var:
        raise ValueError(f"variable mismatch: {f.var} vs {g.var}")
    if not f or not g:
        return Fraction(0) if not isinstance(f, UniPoly) else f._zero_scalar()
    sign = 1
    A, B = f, g
    if A.degree() < B.degree():
        if A.degree() % 2 == 1 and B.degree() % 2 == 1:
            sign = -sign
        A, B = B, A
    if B.degree() == 0:
        return sign * B.lc() ** A.degree() if A.degree() > 0 else _one_like(A._zero_scalar()) * sign
    g_coef = _one_like(A._zero_scalar())
    h_coef = g_coef
    while True:
        delta = A.degree() - B.degree()
        if A.degree() % 2 == 1 and B.degree() % 2 == 1:
            sign = -sign
        R = pseudo_rem(A, B)
        A = B
        if not R:
            # positive-degree common factor
            return A._zero_scalar()
        denom = g_coef * h_coef**delta
        B = UniPoly([_exact_div(c, denom) for c in R.coeffs], R.var)
        g_coef = A.lc()
        if delta == 0:
            pass  # h unchanged
        elif delta == 1:
            h_coef = g_coef
        else:
            h_coef = _exact_div(g_coef**delta, h_coef ** (delta - 1))
        if B.degree() == 0:
            h_final = _exact_div(B.lc() ** A.degree(), h_coef ** (A.degree() - 1))
            return sign * h_final


def sylvester_resultant(f: UniPoly, g: UniPoly):
    """Resultant as the Sylvester determinant (reference implementation).

    Intended for small degrees; used to cross-check the PRS code path.
    Requires Fraction coefficients.
    """
    m, n = f.degree(), g.degree()
    if m < 0 or n < 0:
        return Fraction(0)
    if m == 0 and n == 0:
        return Fraction(1)
    size = m + n
    rows = []
    fc = [Fraction(c) for c in f.coeffs]
    gc = [Fraction(c) for c in g.coeffs]
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(fc)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(gc)):
            row[i + j] = c
        rows.append(row)
    # fraction-based Gaussian elimination
    det = Fraction(1)
    for col in range(size):
        pivot = None
        for r in range(col, size):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, size):
            if rows[r][col]:
                factor = rows[r][col] * inv
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


def discriminant_in(f: UniPoly, var: str):
    """disc(f) = (-1)^(n(n-1)/2) * Res(f, f') / lc(f), taken in `var`.

    `var` must be the outermost variable of the nesting.  The sign convention
    is fixed project-wide; downstream checks only ever use vanishing loci and
    valuations of the result.
    """
    if f.var != var:
        raise ValueError(f"{var} is not the outer variable of {f.var}-poly")
    n = f.degree()
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    res = resultant(f, f.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * _exact_div(res, f.lc())


# -- content, rational roots -------------------------------------------------


def fraction_poly(coeffs) -> UniPoly:
    """Build a Q-coefficient polynomial in X from a coefficient list."""
    return UniPoly([Fraction(c) for c in coeffs], "X")


def integer_normalize(f: UniPoly) -> tuple[Fraction, list[int]]:
    """Write f = content * primitive with primitive integral, lc > 0.

    Returns (content, primitive coefficient list).  Fraction coefficients
    only.
    """
    if not f:
        return Fraction(0), []
    den = math.lcm(*(c.denominator for c in f.coeffs))
    nums = [int(c * den) for c in f.coeffs]
    g = math.gcd(*nums)
    if nums[-1] < 0:
        g = -g
    return Fraction(g, den), [n // g for n in nums]


def rational_roots(f: UniPoly) -> list[tuple[Fraction, int]]:
    """All rational roots with multiplicities, sorted; Fraction coefficients.

    Uses the rational root theorem on the primitive integer form, with the
    divisor sets of the outer coefficients obtained by exact factorization.
    """
    if not f:
        raise ValueError("zero polynomial has every root")
    if f.degree() == 0:
        return []
    _, prim = integer_normalize(f)
    roots: list[tuple[Fraction, int]] = []
    ord0 = next(i for i, c in enumerate(prim) if c)
    if ord0:
        roots.append((Fraction(0), ord0))
        prim = prim[ord0:]
    if len(prim) > 1:
        candidates = set()
        for d in _divisors(abs(prim[0])):
            for q in _divisors(abs(prim[-1])):
                if math.gcd(d, q) == 1:
                    candidates.add(Fraction(d, q))
                    candidates.add(Fraction(-d, q))
        work = UniPoly(prim, f.var)
        for r in sorted(candidates):
            if work.degree() < 1:
                break
            mult = 0
            lin = UniPoly([-r, 1], f.var)
            while work.evaluate(r) == 0:
                work = work.exact_div(lin)
                mult += 1
            if mult:
                roots.append((r, mult))
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    if n == 0:
        raise ValueError("zero has no divisor list")
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


# -- gcd machinery -----------------------------------------------------------


def gcd_field(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd over Fraction coefficients."""
    a, b = f, g
    while b:
        a, b = b, a % b
    if not a:
        return a
    return a.monic()


def content_in_coeffs(f: UniPoly) -> UniPoly:
    """gcd of the (polynomial) coefficients of f; monic."""
    acc = None
    for c in f.coeffs:
        if not c:
            continue
        acc = c if acc is None else gcd_field(acc, c)
        if acc.degree() == 0:
            break
    if acc is None:
        raise ValueError("zero polynomial")
    return acc.monic()


def primitive_part(f: UniPoly) -> UniPoly:
    cont = content_in_coeffs(f)
    if cont == 1:
        return f
    return UniPoly([_exact_div(c, cont) for c in f.coeffs], f.var)


def gcd_over_poly_coeffs(f: UniPoly, g: UniPoly) -> UniPoly:
    """Primitive gcd in the outer variable over Q[s] coefficients.

    Subresultant PRS: exact coefficient divisions control growth without the
    per-step content gcds of the primitive PRS.
    """
    if not f:
        return primitive_part(g) if g else g
    if not g:
        return primitive_part(f)
    a, b = f, g
    if a.degree() < b.degree():
        a, b = b, a
    if b.degree() == 0:
        return UniPoly([_one_like(a._zero_scalar())], a.var)
    g_coef = _one_like(a._zero_scalar())
    h_coef = g_coef
    while True:
        delta = a.degree() - b.degree()
        r = pseudo_rem(a, b)
        a = b
        if not r:
            break
        denom = g_coef * h_coef**delta
        b = UniPoly([_exact_div(c, denom) for c in r.coeffs], r.var)
        if b.degree() == 0:
            return UniPoly([_one_like(a._zero_scalar())], a.var)
        g_coef = a.lc()
        if delta == 1:
            h_coef = g_coef
        elif delta > 1:
            h_coef = _exact_div(g_coef**delta, h_coef ** (delta - 1))
    out = primitive_part(a)
    lead = out.lc()
    if isinstance(lead, UniPoly) and lead.degree() == 0:
        out = UniPoly([_exact_div(c, lead) for c in out.coeffs], out.var)
    return out


def squarefree_part(f: UniPoly) -> UniPoly:
    """f divided by gcd(f, f'); works over Fraction or Q[s] coefficients."""
    if f.degree() < 1:
        return f
    if isinstance(f.coeffs[0], UniPoly) or any(
        isinstance(c, UniPoly) for c in f.coeffs
    ):
        g = gcd_over_poly_coeffs(f, f.derivative())
        if g.degree() == 0:
            return f
        return primitive_part(f).exact_div(g)
    g = gcd_field(f, f.derivative())
    if g.degree() == 0:
        return f
    return f.exact_div(g)


# -- Newton polygons ---------------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    """Faces as (slope, horizontal length), slopes strictly increasing.

    The slope convention is root valuations: a face (lam, ell) certifies ell
    roots of valuation lam (counted in the algebraic closure).  Roots at 0
    itself (infinite valuation) are not faces; their count is the order of
    vanishing at 0 and is excluded from the degree span.
    """

    faces: tuple


def lower_hull_vertices(points: list[tuple[int, Fraction]]) -> list:
    """Vertices of the lower convex hull, left to right; collinear interior
    points are dropped, so consecutive vertices span maximal faces."""
    pts = sorted(points)
    hull = [pts[0]]
    for p in pts[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep only strictly convex turns
            if (y2 - y1) * (p[0] - x2) >= (p[1] - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def lower_hull(points: list[tuple[int, Fraction]]) -> list[tuple[Fraction, int]]:
    """Lower convex hull of (i, v) points: [(slope, length)] increasing."""
    hull = lower_hull_vertices(points)
    faces = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        faces.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return faces


def newton_polygon(f: UniPoly, val) -> NewtonPolygon:
    """Polygon of f under a coefficient valuation oracle.

    `val` maps each coefficient to a rational (or INFINITY for zero).
    """
    if not f:
        raise ValueError("zero polynomial has no Newton polygon")
    points = []
    for i, c in enumerate(f.coeffs):
        v = val(c)
        if v == INFINITY:
            continue
        points.append((i, Fraction(v)))
    if not points:
        raise ValueError("all coefficients have infinite valuation")
    if len(points) == 1:
        return NewtonPolygon(())
    faces = [(-s, l) for s, l in lower_hull(points)]
    faces.reverse()
    return NewtonPolygon(tuple(faces))
