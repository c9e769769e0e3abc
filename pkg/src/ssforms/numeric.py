"""Integer, prime-field and F_p[X] arithmetic.

Field elements are plain Python ints reduced into [0, p).  Polynomials are
immutable ``PolyFp`` values holding ascending coefficient tuples with no
trailing zeros; the empty tuple is the zero polynomial.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd, isqrt

from .errors import DomainError, ModulusMismatch

# Deterministic Miller-Rabin: these bases are exact below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
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
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, v in enumerate(sieve) if v]


def _check_odd_prime(p: int) -> None:
    if p % 2 == 0 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    _check_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for a prime n, including n = 2."""
    if n == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    return legendre(d, n)


def mod_sqrt(a: int, p: int) -> int | None:
    """Square root of a mod p, the representative in [0, p/2], or None.

    Tonelli-Shanks; p must be prime.
    """
    if p == 2:
        return a % 2
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        x = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while legendre(z, p) != -1:
            z += 1
        m, c, t, x = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, x = t * c % p, x * b % p
    return min(x, p - x)


def sqrt_mod_n(a: int, n: int) -> list[int]:
    """All x in [0, n) with x^2 = a mod n, by scanning.  Small n only."""
    a %= n
    return [x for x in range(n) if x * x % n == a]


def smallest_nonresidue(p: int) -> int:
    z = 2
    while legendre(z, p) != -1:
        z += 1
    return z


def inv_mod(a: int, p: int) -> int:
    if a % p == 0:
        raise ZeroDivisionError(f"{a} is not invertible mod {p}")
    return pow(a, -1, p)


# ---------------------------------------------------------------------------
# coefficient-list kernels (ascending order, trimmed)


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _mul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _trim([x % p for x in out])


def _divmod(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return [], r
    inv = pow(g[-1], -1, p)
    q = [0] * (len(r) - dg)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k] % p
        if c:
            c = c * inv % p
            q[k - dg] = c
            for i in range(dg + 1):
                r[k - dg + i] -= c * g[i]
    return _trim(q), _trim([x % p for x in r[:dg]])


def _mod(f: list[int], g: list[int], p: int) -> list[int]:
    return _divmod(f, g, p)[1]


def _sub(f: list[int], g: list[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    out = [((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)]
    return _trim(out)


def _add(f: list[int], g: list[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    out = [((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)]
    return _trim(out)


def _monic(f: list[int], p: int) -> list[int]:
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def _gcd(f: list[int], g: list[int], p: int) -> list[int]:
    while g:
        f, g = g, _mod(f, g, p)
    return _monic(f, p)


def _xgcd(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int], list[int]]:
    """(d, s, t) with s*f + t*g = d, d monic."""
    r0, r1 = f, g
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(q, s1, p), p)
        t0, t1 = t1, _sub(t0, _mul(q, t1, p), p)
    if not r0:
        return [], s0, t0
    inv = pow(r0[-1], -1, p)
    return ([c * inv % p for c in r0], [c * inv % p for c in s0], [c * inv % p for c in t0])


def _powmod(f: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _mod(f, m, p)
    while e:
        if e & 1:
            result = _mod(_mul(result, base, p), m, p)
        e >>= 1
        if e:
            base = _mod(_mul(base, base, p), m, p)
    return _mod(result, m, p)


@dataclass(frozen=True)
class PolyFp:
    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        c = [x % self.p for x in self.coeffs]
        object.__setattr__(self, "coeffs", tuple(_trim(c)))

    @classmethod
    def x(cls, p: int) -> "PolyFp":
        return cls((0, 1), p)

    @classmethod
    def const(cls, c: int, p: int) -> "PolyFp":
        return cls((c,), p)

    @classmethod
    def from_roots(cls, roots, p: int) -> "PolyFp":
        f = [1]
        for r in roots:
            f = _mul(f, [-r % p, 1], p)
        return cls(tuple(f), p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def _other(self, g) -> list[int]:
        if isinstance(g, int):
            return _trim([g % self.p])
        if g.p != self.p:
            raise ModulusMismatch(f"moduli {self.p} and {g.p} differ")
        return list(g.coeffs)

    def __add__(self, g):
        return PolyFp(tuple(_add(list(self.coeffs), self._other(g), self.p)), self.p)

    __radd__ = __add__

    def __sub__(self, g):
        return PolyFp(tuple(_sub(list(self.coeffs), self._other(g), self.p)), self.p)

    def __neg__(self):
        return PolyFp(tuple(-c for c in self.coeffs), self.p)

    def __mul__(self, g):
        return PolyFp(tuple(_mul(list(self.coeffs), self._other(g), self.p)), self.p)

    __rmul__ = __mul__

    def __divmod__(self, g):
        q, r = _divmod(list(self.coeffs), self._other(g), self.p)
        return PolyFp(tuple(q), self.p), PolyFp(tuple(r), self.p)

    def __floordiv__(self, g):
        return divmod(self, g)[0]

    def __mod__(self, g):
        return divmod(self, g)[1]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def monic(self) -> "PolyFp":
        return PolyFp(tuple(_monic(list(self.coeffs), self.p)), self.p)

    def derivative(self) -> "PolyFp":
        return PolyFp(tuple(i * c for i, c in enumerate(self.coeffs) if i), self.p)

    def powmod(self, e: int, m: "PolyFp") -> "PolyFp":
        return PolyFp(tuple(_powmod(list(self.coeffs), e, self._other(m), self.p)), self.p)

    def roots(self) -> list[int]:
        """Distinct roots in F_p, ascending."""
        return poly_roots(self)

    def __str__(self) -> str:
        return format_poly(list(self.coeffs))


def poly_gcd(f: PolyFp, g: PolyFp) -> PolyFp:
    """Monic gcd; zero iff both inputs are zero."""
    if f.p != g.p:
        raise ModulusMismatch(f"moduli {f.p} and {g.p} differ")
    return PolyFp(tuple(_gcd(list(f.coeffs), list(g.coeffs), f.p)), f.p)


def poly_inverse_mod(f: PolyFp, m: PolyFp) -> PolyFp:
    d, s, _ = _xgcd(list(f.coeffs), list(m.coeffs), f.p)
    if d != [1]:
        raise ZeroDivisionError("element is not a unit modulo m")
    return PolyFp(tuple(s), f.p) % m


def _split_linear(f: list[int], p: int, rng: random.Random) -> list[int]:
    """Roots of a monic squarefree f that splits into distinct linear factors."""
    if len(f) == 1:
        return []
    if len(f) == 2:
        return [-f[0] * pow(f[1], -1, p) % p]
    if p == 2:
        return [x for x in range(2) if sum(c * x**i for i, c in enumerate(f)) % 2 == 0]
    while True:
        a = rng.randrange(p)
        h = _powmod([a, 1], (p - 1) // 2, f, p)
        g = _gcd(f, _sub(h, [1], p), p)
        if 1 < len(g) < len(f):
            rest = _divmod(f, g, p)[0]
            return _split_linear(g, p, rng) + _split_linear(_monic(rest, p), p, rng)


def poly_roots(f: PolyFp) -> list[int]:
    if f.is_zero():
        raise DomainError("the zero polynomial has every element as a root")
    p = f.p
    c = _monic(list(f.coeffs), p)
    if len(c) <= 1:
        return []
    xp = _powmod([0, 1], p, c, p)
    lin = _gcd(c, _sub(xp, [0, 1], p), p)
    return sorted(_split_linear(lin, p, random.Random(p)))


def format_poly(coeffs: list[int], var: str = "X") -> str:
    """Human-readable polynomial, highest degree first: 'X^2 - 3*X + 1'."""
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def content(*xs: int) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
