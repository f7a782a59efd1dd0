"""Exact integer and rational arithmetic: valuations, CRT, primality.

Rational numbers are ``fractions.Fraction`` throughout the package; this
module adds the number-theoretic layer on top (p-adic valuations, congruence
classes with a Chinese-remainder merge, deterministic primality, Legendre
symbols, and small-integer factorization used for certificate bookkeeping).

The base field is Q.  Extending to a general number field would replace
`valuation` and `Congruence` with prime-ideal analogues; nothing else in this
module bakes in more than that.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

INFINITY = float("inf")

#: Residue arithmetic is kept within native word range.
PRIME_LIMIT = 2**31


class NonPrimeError(ValueError):
    pass


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise NonPrimeError(f"{p} is not prime")
    if p >= PRIME_LIMIT:
        raise NonPrimeError(f"prime {p} exceeds the supported limit 2^31")


def valuation(x, p: int):
    """p-adic valuation of a rational (or integer) x; +inf for x = 0."""
    _check_prime(p)
    x = Fraction(x)
    if x == 0:
        return INFINITY
    v = 0
    num = x.numerator
    while num % p == 0:
        num //= p
        v += 1
    den = x.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(x, p: int) -> Fraction:
    """x / p^valuation(x, p); undefined (raises) for x = 0."""
    x = Fraction(x)
    if x == 0:
        raise ZeroDivisionError("zero has no unit part")
    v = valuation(x, p)
    return x / Fraction(p) ** v


@dataclass(frozen=True)
class Congruence:
    """The class of integers congruent to `residue` mod `modulus`."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus <= 0:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def contains(self, n: int) -> bool:
        return n % self.modulus == self.residue

    def __str__(self):
        return f"{self.residue} mod {self.modulus}"


class InconsistentCongruences(ValueError):
    pass


def crt(congruences) -> Congruence:
    """Merge congruences into one; moduli need not be coprime.

    Overlapping moduli are allowed when the residues agree on the overlap;
    otherwise InconsistentCongruences is raised.
    """
    congruences = list(congruences)
    if not congruences:
        return Congruence(0, 1)
    r, m = congruences[0].residue, congruences[0].modulus
    for c in congruences[1:]:
        g = math.gcd(m, c.modulus)
        if (c.residue - r) % g != 0:
            raise InconsistentCongruences(
                f"no integer is {r} mod {m} and {c.residue} mod {c.modulus}"
            )
        lcm = m // g * c.modulus
        # r + m*k == c.residue (mod c.modulus), solved for k mod c.modulus/g
        k = ((c.residue - r) // g * pow(m // g, -1, c.modulus // g)) % (c.modulus // g)
        r = (r + m * k) % lcm
        m = lcm
    return Congruence(r, m)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@functools.lru_cache(maxsize=1 << 16)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, b in enumerate(sieve) if b]


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for odd prime p: 1, -1, or 0."""
    _check_prime(p)
    if p == 2:
        raise ValueError("Legendre symbol needs an odd prime")
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def legendre_rat(x, p: int) -> int:
    """Legendre symbol of a p-integral rational: (num * den | p)."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not {p}-integral")
    return legendre(x.numerator * x.denominator, p)


def _pollard_rho(n: int) -> int:
    # Brent's cycle-finding variant; n odd, composite, not a prime power issue
    # for callers since they recurse on the returned factor.
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise RuntimeError(f"rho failed to split {n}")


def factorint(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; n must be nonzero."""
    if n == 0:
        raise ValueError("cannot factor zero")
    n = abs(n)
    out: dict[int, int] = {}
    for q in (2, 3, 5):
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    q = 7
    # trial division by a 2,4-wheel up to 2^20, then rho on what is left
    step = 4
    while q * q <= n and q < 1 << 20:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += step
        step = 6 - step
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return out


def prime_divisors(x) -> list[int]:
    """Primes dividing numerator or denominator of a nonzero rational."""
    x = Fraction(x)
    if not x:
        raise ValueError("zero has every prime divisor")
    out = set(factorint(abs(x.numerator)))
    out.update(factorint(x.denominator))
    return sorted(out)


def parse_rat(text: str) -> Fraction:
    """Parse "a" or "a/b" with the sign on the numerator."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        den = den.strip()
        if den.startswith("-"):
            raise ValueError(f"negative denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rat(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
