"""Arithmetic in GF(q), q = p^m.

Elements are plain ints in ``range(q)``. The base-``p`` digits of an element
are its polynomial coefficients, constant term first, so ``a = sum(c_i p^i)``.
For ``m == 1`` this is just the residue mod ``p``. The integer order is the
canonical element order used everywhere else (point ordering, vertex IDs).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NotPrime, NotPrimePower, PolarFlyError, ZeroInverse

MAX_TABLE_ORDER = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``; raise NotPrimePower otherwise."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            break
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, m


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except NotPrimePower:
        return False
    return True


# -- polynomials over GF(p): lists of ints, constant term first -------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def poly_divmod(a, b, p):
    """Long division over GF(p); returns (quotient, remainder)."""
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        c = rem[-1] * inv_lead % p
        quot[shift] = c
        for i, y in enumerate(b):
            rem[shift + i] = (rem[shift + i] - c * y) % p
        rem = _trim(rem)
    return _trim(quot), rem


def monic_polys(p, degree):
    """All monic polynomials of the given degree, in lexicographic order of
    their coefficient tuples (constant term first)."""
    for low in itertools.product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(poly, p) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim(poly)
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for f in monic_polys(p, d):
            if not poly_divmod(poly, f, p)[1]:
                return False
    return True


def smallest_irreducible(p, m):
    for f in monic_polys(p, m):
        if is_irreducible(f, p):
            return tuple(f)
    raise PolarFlyError(f"no irreducible polynomial of degree {m} over GF({p})")


# -- the field -------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """GF(p^m). ``modulus`` holds m+1 coefficients (constant first) when m > 1."""

    p: int
    m: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.m < 1:
            raise PolarFlyError("extension degree must be >= 1")
        if self.m == 1:
            object.__setattr__(self, "modulus", None)
        elif self.modulus is None:
            object.__setattr__(self, "modulus", smallest_irreducible(self.p, self.m))
        else:
            mod = tuple(int(c) % self.p for c in self.modulus)
            if len(mod) != self.m + 1 or mod[-1] != 1 or not is_irreducible(mod, self.p):
                raise PolarFlyError(f"{self.modulus} is not a monic irreducible of degree {self.m}")
            object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p ** self.m

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={list(self.modulus)})"

    def elements(self):
        return range(self.q)

    # coefficient view
    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            raise PolarFlyError("too many coefficients")
        a = 0
        for c in reversed(coeffs):
            a = a * self.p + (int(c) % self.p)
        return a

    def _check(self, a):
        if not 0 <= a < self.q:
            raise PolarFlyError(f"{a} is not an element of {self!r}")

    # arithmetic
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        return self.from_coeffs((x + y) % self.p for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self.from_coeffs((-x) % self.p for x in self.coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        prod = poly_mul(_trim(self.coeffs(a)), _trim(self.coeffs(b)), self.p)
        return self.from_coeffs(poly_divmod(prod, self.modulus, self.p)[1])

    def inv(self, a: int) -> int:
        """Multiplicative inverse by the extended Euclidean algorithm."""
        self._check(a)
        if a == 0:
            raise ZeroInverse(f"0 has no inverse in {self!r}")
        if self.m == 1:
            r0, r1, t0, t1 = self.p, a, 0, 1
            while r1:
                k = r0 // r1
                r0, r1 = r1, r0 - k * r1
                t0, t1 = t1, t0 - k * t1
            return t0 % self.p
        p = self.p
        r0, r1 = list(self.modulus), _trim(self.coeffs(a))
        t0, t1 = [], [1]
        while r1:
            k, r = poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            t0, t1 = t1, poly_sub(t0, poly_mul(k, t1, p), p)
        # r0 is a nonzero constant since the modulus is irreducible
        c = pow(r0[0], -1, p)
        return self.from_coeffs([x * c % p for x in t0])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # lookup tables for vectorised use
    @cached_property
    def add_table(self) -> np.ndarray:
        q, p = self.q, self.p
        if q > MAX_TABLE_ORDER:
            raise PolarFlyError(f"table arithmetic supports q <= {MAX_TABLE_ORDER}")
        x = np.arange(q)
        out = np.zeros((q, q), dtype=np.int64)
        scale = 1
        for _ in range(self.m):
            dx = (x // scale) % p
            out += ((dx[:, None] + dx[None, :]) % p) * scale
            scale *= p
        return out

    @cached_property
    def mul_table(self) -> np.ndarray:
        q = self.q
        if q > MAX_TABLE_ORDER:
            raise PolarFlyError(f"table arithmetic supports q <= {MAX_TABLE_ORDER}")
        x = np.arange(q)
        if self.m == 1:
            return (x[:, None] * x[None, :]) % q
        g = self.primitive_element()
        exp = np.empty(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        v = 1
        for i in range(q - 1):
            exp[i] = exp[i + q - 1] = v
            log[v] = i
            v = self.mul(v, g)
        out = np.zeros((q, q), dtype=np.int64)
        out[1:, 1:] = exp[log[1:, None] + log[None, 1:]]
        return out

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(a) for a in range(self.q)], dtype=np.int64)

    @cached_property
    def inv_table(self) -> np.ndarray:
        """``inv_table[0]`` is 0 as a placeholder; callers must not rely on it."""
        return np.array([0] + [self.inv(a) for a in range(1, self.q)], dtype=np.int64)

    def primitive_element(self) -> int:
        order = self.q - 1
        factors = {d for d in range(2, order + 1) if order % d == 0 and is_prime(d)}
        for g in range(2 if self.q > 2 else 1, self.q):
            if all(self.pow(g, order // f) != 1 for f in factors):
                return g
        return 1


def make_field(p: int, m: int = 1) -> FieldSpec:
    """GF(p^m) with the lexicographically smallest monic irreducible modulus."""
    return FieldSpec(p, m)


def field_for_order(q: int) -> FieldSpec:
    p, m = prime_power(q)
    return FieldSpec(p, m)
