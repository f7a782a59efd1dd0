"""Factorization over prime fields and their finite extensions.

Two layers.  The bottom layer is a small field protocol (FpField and
ExtField) plus polynomial helpers that work over any such field; extension
fields nest, so towers F_p ⊂ k_1 ⊂ k_2 ⊂ … built one augmentation at a time
are supported directly.  The top layer is the mod-p interface used by the
rest of the package: FpPoly, complete factorization, and squarefree degree
sequences for Frobenius fingerprints.

Equal-degree splitting is randomized (Cantor-Zassenhaus, with the trace
construction in characteristic 2) but seeded, and factor lists are sorted
canonically, so every public result is deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .arith import NonPrimeError, _check_prime


class FpField:
    """The prime field F_p with int elements in [0, p)."""

    __slots__ = ("p", "size", "degree")

    def __init__(self, p: int):
        _check_prime(p)
        self.p = p
        self.size = p
        self.degree = 1  # over F_p

    def zero(self):
        return 0

    def one(self):
        return 1

    def embed(self, n: int):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, n: int):
        return pow(a, n % (self.p - 1) if a % self.p else n, self.p)

    def pth_root(self, a):
        return a  # Frobenius is the identity on F_p

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def __eq__(self, other):
        return isinstance(other, FpField) and other.p == self.p

    def __hash__(self):
        return hash(("FpField", self.p))

    def __repr__(self):
        return f"FpField({self.p})"


class ExtField:
    """base[y]/(modulus): elements are tuples over the base field.

    `modulus` is a monic irreducible polynomial over `base`, given as a
    coefficient tuple lowest-first including the leading 1.  Bases may
    themselves be extensions, so arbitrary towers are supported.
    """

    __slots__ = ("base", "modulus", "p", "degree", "size")

    def __init__(self, base, modulus):
        modulus = poly_trim(list(modulus))
        if len(modulus) < 2 or modulus[-1] != base.one():
            raise ValueError("modulus must be monic of degree >= 1")
        self.base = base
        self.modulus = tuple(modulus)
        self.p = base.p
        self.degree = len(modulus) - 1
        self.size = base.size**self.degree

    def zero(self):
        return (self.base.zero(),) * self.degree

    def one(self):
        return tuple(
            self.base.one() if i == 0 else self.base.zero()
            for i in range(self.degree)
        )

    def gen(self):
        """The class of y; equals a root of the modulus."""
        if self.degree == 1:
            # y = -c0 for modulus y + c0
            return (self.base.neg(self.modulus[0]),)
        return tuple(
            self.base.one() if i == 1 else self.base.zero()
            for i in range(self.degree)
        )

    def embed(self, a):
        """Lift a base-field element (or plain integer) into this field."""
        if isinstance(a, int):
            a = self.base.embed(a)
        pad = (self.base.zero(),) * (self.degree - 1)
        return (a,) + pad

    def _from_list(self, cs):
        cs = list(cs)[: self.degree]
        cs += [self.base.zero()] * (self.degree - len(cs))
        return tuple(cs)

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        prod = poly_mul(self.base, list(a), list(b))
        return self._from_list(poly_mod(self.base, prod, list(self.modulus)))

    def inv(self, a):
        g, u, _ = poly_xgcd(self.base, poly_trim(list(a)), list(self.modulus))
        if len(g) != 1:
            raise ZeroDivisionError("not invertible (zero or modulus reducible)")
        ginv = self.base.inv(g[0])
        return self._from_list([self.base.mul(c, ginv) for c in u])

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one()
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def pth_root(self, a):
        # Frobenius x -> x^p generates Gal; its inverse is x -> x^(size/p)
        return self.pow(a, self.size // self.p)

    def random(self, rng: random.Random):
        return tuple(self.base.random(rng) for _ in range(self.degree))

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("ExtField", self.base, self.modulus))

    def __repr__(self):
        return f"ExtField(size={self.size})"


def field_elt_key(a):
    """Total order on field elements of one field, for canonical sorting."""
    if isinstance(a, int):
        return (a,)
    out = []
    for c in a:
        out.extend(field_elt_key(c))
    return tuple(out)


# -- polynomials over a field: plain lists, lowest degree first, trimmed ----


def poly_trim(cs: list) -> list:
    while cs and not _is_nonzero(cs[-1]):
        cs.pop()
    return cs


def _is_nonzero(a) -> bool:
    if isinstance(a, int):
        return a != 0
    return any(_is_nonzero(c) for c in a)


def poly_add(K, a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = K.add(out[i], c)
    return poly_trim(out)


def poly_sub(K, a: list, b: list) -> list:
    out = list(a) + [K.zero()] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = K.sub(out[i], c)
    return poly_trim(out)


def poly_scale(K, a: list, c) -> list:
    return poly_trim([K.mul(x, c) for x in a])


def poly_mul(K, a: list, b: list) -> list:
    if not a or not b:
        return []
    if isinstance(K, FpField):
        p = K.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        return poly_trim(out)
    out = [K.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if _is_nonzero(x):
            for j, y in enumerate(b):
                out[i + j] = K.add(out[i + j], K.mul(x, y))
    return poly_trim(out)


def poly_divmod(K, a: list, b: list) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], list(a)
    inv_lc = K.inv(b[-1])
    rem = list(a)
    quot = [K.zero()] * (len(a) - len(b) + 1)
    if isinstance(K, FpField):
        p = K.p
        for k in range(len(quot) - 1, -1, -1):
            top = rem[k + len(b) - 1]
            if top:
                q = top * inv_lc % p
                quot[k] = q
                for j, c in enumerate(b):
                    rem[k + j] = (rem[k + j] - q * c) % p
        return poly_trim(quot), poly_trim(rem)
    for k in range(len(quot) - 1, -1, -1):
        top = rem[k + len(b) - 1]
        if _is_nonzero(top):
            q = K.mul(top, inv_lc)
            quot[k] = q
            for j, c in enumerate(b):
                rem[k + j] = K.sub(rem[k + j], K.mul(q, c))
    return poly_trim(quot), poly_trim(rem)


def poly_mod(K, a: list, b: list) -> list:
    return poly_divmod(K, a, b)[1]


def poly_monic(K, a: list) -> list:
    if not a:
        return a
    if a[-1] == K.one():
        return list(a)
    return poly_scale(K, a, K.inv(a[-1]))


def poly_gcd(K, a: list, b: list) -> list:
    while b:
        a, b = b, poly_mod(K, a, b)
    return poly_monic(K, a)


def poly_xgcd(K, a: list, b: list) -> tuple[list, list, list]:
    """g, u, v with u*a + v*b = g, g monic."""
    r0, r1 = list(a), list(b)
    u0, u1 = [K.one()], []
    v0, v1 = [], [K.one()]
    while r1:
        q, r = poly_divmod(K, r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, poly_sub(K, u0, poly_mul(K, q, u1))
        v0, v1 = v1, poly_sub(K, v0, poly_mul(K, q, v1))
    if r0:
        c = K.inv(r0[-1])
        r0 = poly_scale(K, r0, c)
        u0 = poly_scale(K, u0, c)
        v0 = poly_scale(K, v0, c)
    return r0, u0, v0


def poly_deriv(K, a: list) -> list:
    out = []
    for i in range(1, len(a)):
        out.append(K.mul(a[i], K.embed(i)))
    return poly_trim(out)


def poly_pow_mod(K, base: list, n: int, mod: list) -> list:
    result = [K.one()]
    base = poly_mod(K, base, mod)
    while n:
        if n & 1:
            result = poly_mod(K, poly_mul(K, result, base), mod)
        n >>= 1
        if n:
            base = poly_mod(K, poly_mul(K, base, base), mod)
    return result


def poly_eval(K, a: list, x):
    acc = K.zero()
    for c in reversed(a):
        acc = K.add(K.mul(acc, x), c)
    return acc


def poly_key(a: list):
    return (len(a), tuple(field_elt_key(c) for c in a))


# -- factorization over any finite field -------------------------------------


def squarefree_decomposition(K, f: list) -> list[tuple[list, int]]:
    """Monic squarefree factors with multiplicities; f monic, degree >= 1."""
    p = K.p
    out: dict[tuple, tuple[list, int]] = {}

    def record(g: list, mult: int):
        if len(g) <= 1:
            return
        key = poly_key(g)
        if key in out:
            out[key] = (g, out[key][1] + mult)
        else:
            out[key] = (g, mult)

    def walk(f: list, mult: int):
        if len(f) <= 1:
            return
        fd = poly_deriv(K, f)
        if not fd:
            # every exponent divisible by p: take the p-th root
            walk(_poly_pth_root(K, f), mult * p)
            return
        c = poly_gcd(K, f, fd)
        w = poly_divmod(K, f, c)[0]
        i = 1
        while len(w) > 1:
            y = poly_gcd(K, w, c)
            z = poly_divmod(K, w, y)[0]
            record(z, mult * i)
            w = y
            c = poly_divmod(K, c, y)[0]
            i += 1
        if len(c) > 1:
            walk(_poly_pth_root(K, c), mult * p)

    walk(poly_monic(K, f), 1)
    return sorted(out.values(), key=lambda fm: poly_key(fm[0]))


def _poly_pth_root(K, f: list) -> list:
    p = K.p
    out = []
    for i in range(0, len(f), p):
        out.append(K.pth_root(f[i]))
    for i, c in enumerate(f):
        if i % p and _is_nonzero(c):
            raise ValueError("not a p-th power")
    return poly_trim(out)


def distinct_degree(K, f: list) -> list[tuple[list, int]]:
    """Split monic squarefree f into products of same-degree irreducibles.

    Returns [(product, d)] with d strictly increasing.
    """
    out = []
    x = [K.zero(), K.one()]
    h = list(x)
    d = 0
    while len(f) - 1 > 2 * d:
        d += 1
        h = poly_pow_mod(K, h, K.size, f)
        g = poly_gcd(K, poly_sub(K, h, x), f)
        if len(g) > 1:
            out.append((g, d))
            f = poly_divmod(K, f, g)[0]
            h = poly_mod(K, h, f)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def equal_degree(K, f: list, d: int, rng: random.Random) -> list[list]:
    """Split a monic product of distinct degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = poly_trim([K.random(rng) for _ in range(n)])
        if not a:
            continue
        if K.p == 2:
            # trace map over F_2: sum of a^(2^i), i < k*d where size = 2^k
            k = K.size.bit_length() - 1
            t = list(a)
            acc = list(a)
            for _ in range(k * d - 1):
                t = poly_pow_mod(K, t, 2, f)
                acc = poly_add(K, acc, t)
            g = poly_gcd(K, acc, f)
        else:
            e = (K.size**d - 1) // 2
            b = poly_pow_mod(K, a, e, f)
            g = poly_gcd(K, poly_sub(K, b, [K.one()]), f)
        if 1 < len(g) < len(f):
            h = poly_divmod(K, f, g)[0]
            return sorted(
                equal_degree(K, g, d, rng) + equal_degree(K, h, d, rng),
                key=poly_key,
            )


def factor_poly(K, f: list, seed: int = 0):
    """Complete factorization over K: (unit, [(monic irreducible, mult)])."""
    f = poly_trim(list(f))
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    unit = f[-1]
    f = poly_monic(K, f)
    rng = random.Random(seed)
    factors = []
    for g, mult in squarefree_decomposition(K, f):
        for prod, d in distinct_degree(K, g):
            for irr in equal_degree(K, prod, d, rng):
                factors.append((irr, mult))
    factors.sort(key=lambda fm: poly_key(fm[0]))
    return unit, factors


# -- the mod-p interface ------------------------------------------------------


@dataclass(frozen=True)
class FpPoly:
    """Coefficients mod p, lowest degree first, trailing zeros trimmed."""

    p: int
    coeffs: tuple

    def __post_init__(self):
        _check_prime(self.p)
        cs = [c % self.p for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree(), -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = "X" if i == 1 else f"X^{i}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)


class NotSquarefree(Exception):
    """The reduction has a repeated factor; degree data is not a cycle type."""


class NotPIntegral(Exception):
    """A coefficient has p in its denominator; no reduction mod p exists."""


def reduce_mod_p(coeffs, p: int) -> FpPoly:
    """Reduce rational coefficients mod p; denominators must be prime to p."""
    out = []
    for c in coeffs:
        c = Fraction(c)
        if c.denominator % p == 0:
            raise NotPIntegral(f"{c} is not p-integral at {p}")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    return FpPoly(p, tuple(out))


@dataclass(frozen=True)
class FactorizationModP:
    p: int
    unit: int
    factors: tuple  # ((FpPoly, multiplicity), ...) canonically sorted

    def product(self) -> FpPoly:
        """unit times the product of factor^multiplicity; equals the input."""
        K = FpField(self.p)
        acc = [self.unit % self.p]
        for g, mult in self.factors:
            for _ in range(mult):
                acc = poly_mul(K, acc, list(g.coeffs))
        return FpPoly(self.p, tuple(acc))


def factor_mod_p(f: FpPoly, seed: int = 0) -> FactorizationModP:
    """Monic-irreducible factorization with multiplicities; deterministic."""
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    K = FpField(f.p)
    unit, factors = factor_poly(K, list(f.coeffs), seed=seed)
    wrapped = tuple((FpPoly(f.p, tuple(g)), m) for g, m in factors)
    return FactorizationModP(f.p, unit, wrapped)


def degree_sequence(f: FpPoly) -> list[int]:
    """Sorted degrees of the irreducible factors of a squarefree f mod p.

    Distinct-degree splitting alone determines the multiset, so no
    randomized stage is involved.  Raises NotSquarefree when f has a
    repeated factor (the caller treats that prime as ramified or bad).
    """
    if not f:
        raise ValueError("zero polynomial")
    if f.degree() == 0:
        return []
    K = FpField(f.p)
    cs = poly_monic(K, list(f.coeffs))
    der = poly_deriv(K, cs)
    if not der or len(poly_gcd(K, cs, der)) > 1:
        raise NotSquarefree(f"repeated factor mod {f.p}")
    out = []
    for prod, d in distinct_degree(K, cs):
        out.extend([d] * ((len(prod) - 1) // d))
    return sorted(out)
