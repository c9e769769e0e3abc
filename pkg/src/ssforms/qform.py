"""Positive definite binary quadratic forms.

Composition goes through the ideal dictionary: a form (a, b, c) of
discriminant D corresponds to the lattice [a, (-b + sqrt D)/2] in the order of
discriminant D, products of lattices are put in Hermite normal form, and the
result is read back as a form and reduced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .errors import BoundError, DomainError
from .numeric import is_prime, kronecker, legendre

DEFAULT_PRIME_CEILING = 10**6


@dataclass(frozen=True, order=True)
class BQF:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.discriminant >= 0:
            raise DomainError(f"{self} is not positive definite")

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"

    def __iter__(self):
        yield from (self.a, self.b, self.c)

    def __mul__(self, other: "BQF") -> "BQF":
        return compose(self, other)

    def __pow__(self, n: int) -> "BQF":
        return power(self, n)


_FORM_RE = re.compile(r"^\s*\(?\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)?\s*$")


def parse_form(text: str) -> BQF:
    m = _FORM_RE.match(text)
    if not m:
        raise DomainError(f"cannot parse form literal {text!r}")
    return BQF(*(int(g) for g in m.groups()))


def _check_disc(D: int) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise DomainError(f"{D} is not a negative discriminant")


def principal_form(D: int) -> BQF:
    _check_disc(D)
    k = D % 2
    return BQF(1, k, (k - D) // 4)


def is_reduced(f: BQF) -> bool:
    a, b, c = f
    return -a < b <= a and a <= c and not (a == c and b < 0)


def reduce(f: BQF) -> BQF:
    """The unique reduced form equivalent to f."""
    if not f.is_primitive():
        raise DomainError(f"{f} is not primitive")
    return reduce_with_witness(f)[0]


def reduce_with_witness(f: BQF) -> tuple[BQF, tuple[int, int, int, int]]:
    """Reduced form g and (m, n, r, s) in SL2(Z) with g(X,Y) = f(mX+nY, rX+sY)."""
    a, b, c = f
    m, n, r, s = 1, 0, 0, 1
    while True:
        # translate b into (-a, a]
        k = (a - b) // (2 * a)
        if k:
            c = a * k * k + b * k + c
            b = b + 2 * a * k
            n, s = n + k * m, s + k * r
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            m, n, r, s = n, -m, s, -r
            continue
        return BQF(a, b, c), (m, n, r, s)


def is_equivalent(f: BQF, g: BQF) -> bool:
    return f.discriminant == g.discriminant and reduce(f) == reduce(g)


# ---------------------------------------------------------------------------
# ideal dictionary


@dataclass(frozen=True)
class IdealRep:
    """The lattice Z*a + Z*(-b + sqrt D)/2."""

    a: int
    b: int
    D: int

    def __post_init__(self):
        if (self.b * self.b - self.D) % (4 * self.a):
            raise DomainError(f"b^2 != D mod 4a for {self}")

    @classmethod
    def from_form(cls, f: BQF) -> "IdealRep":
        return cls(f.a, f.b, f.discriminant)

    def to_form(self) -> BQF:
        return BQF(self.a, self.b, (self.b * self.b - self.D) // (4 * self.a))

    def basis(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Generators as (x, y) meaning x + y*w, with w = (d + sqrt D)/2, d = D mod 2."""
        d = self.D % 2
        return (self.a, 0), ((-self.b - d) // 2, 1)


def _omega_mul(u: tuple[int, int], v: tuple[int, int], D: int) -> tuple[int, int]:
    # w^2 = d*w + (D - d)/4
    d = D % 2
    x1, y1 = u
    x2, y2 = v
    ww = y1 * y2
    return (x1 * x2 + ww * (D - d) // 4, x1 * y2 + x2 * y1 + ww * d)


def _hnf(vectors: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Lattice spanned by vectors as (e, f, n): basis (e, 0), (f, n), 0 <= f < e."""
    n = 0
    for _, y in vectors:
        n = gcd(n, y)
    # find a vector combination with y = n via extended Euclid on y coordinates
    cur = (0, 0)
    for x, y in vectors:
        g, s, t = _egcd(cur[1], y)
        cur = (s * cur[0] + t * x, g)
    if cur[1] < 0:
        cur = (-cur[0], -cur[1])
    e = 0
    for x, y in vectors:
        k = y // n
        e = gcd(e, x - k * cur[0])
    return e, cur[0] % e, n


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def ideal_multiply(I: IdealRep, J: IdealRep) -> tuple[IdealRep, int]:
    """Primitive ideal in the class of I*J, with the stripped integer content."""
    if I.D != J.D:
        raise DomainError(f"discriminant mismatch {I.D} vs {J.D}")
    D = I.D
    gens = [_omega_mul(u, v, D) for u in I.basis() for v in J.basis()]
    e, f, n = _hnf(gens)
    a = e // n
    d = D % 2
    # f/n + w = (2f/n + d + sqrt D)/2  ->  b = -(2f/n + d)
    b = -(2 * (f // n) + d)
    b %= 2 * a
    if b > a:
        b -= 2 * a
    return IdealRep(a, b, D), n


def compose(f: BQF, g: BQF) -> BQF:
    """Reduced representative of the product class."""
    if f.discriminant != g.discriminant:
        raise DomainError(f"discriminant mismatch: {f} and {g}")
    if not (f.is_primitive() and g.is_primitive()):
        raise DomainError("composition needs primitive forms")
    prod, _ = ideal_multiply(IdealRep.from_form(f), IdealRep.from_form(g))
    return reduce(prod.to_form())


def inverse(f: BQF) -> BQF:
    return reduce(BQF(f.a, -f.b, f.c))


def power(f: BQF, n: int) -> BQF:
    base = reduce(f) if n >= 0 else inverse(f)
    n = abs(n)
    result = principal_form(f.discriminant)
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def order(f: BQF) -> int:
    one = principal_form(f.discriminant)
    g, k = reduce(f), 1
    while g != one:
        g = compose(g, f)
        k += 1
    return k


@dataclass(frozen=True)
class ClassGroup:
    D: int
    forms: tuple[BQF, ...]

    @property
    def h(self) -> int:
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)

    def __len__(self):
        return len(self.forms)

    def __contains__(self, f):
        return f in self.forms


@lru_cache(maxsize=4096)
def enumerate_reduced(D: int) -> ClassGroup:
    """All primitive reduced forms of discriminant D, sorted."""
    _check_disc(D)
    out = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                out.append(BQF(a, b, c))
    return ClassGroup(D, tuple(sorted(out)))


def class_number(D: int) -> int:
    return enumerate_reduced(D).h


def _unit_count(D: int) -> int:
    return {-3: 6, -4: 4}.get(D, 2)


def class_number_formula(D: int, m: int) -> Fraction:
    """h(m^2 D) predicted from h(D) by the conductor formula."""
    _check_disc(D)
    if m < 1:
        raise DomainError("m must be positive")
    val = Fraction(class_number(D) * m, Fraction(_unit_count(D), _unit_count(m * m * D)))
    for ell in _prime_factors(m):
        val *= 1 - Fraction(kronecker(D, ell), ell)
    return val


def class_number_relation_check(D: int, m: int) -> bool:
    return class_number_formula(D, m) == class_number(m * m * D)


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# representation and genus theory


def represents(f: BQF, m: int) -> bool:
    if m <= 0:
        raise DomainError("m must be positive")
    return find_representation(f, m) is not None


def find_representation(f: BQF, m: int) -> tuple[int, int] | None:
    g, (m11, m12, m21, m22) = reduce_with_witness(f) if f.is_primitive() else (f, (1, 0, 0, 1))
    a, b, c = g
    D = -g.discriminant
    # g(x, y) >= (D / 4a) y^2 bounds |y|; then solve the quadratic in x
    ymax = isqrt(4 * a * m // D) + 1
    for y in range(0, ymax + 1):
        disc = b * b * y * y - 4 * a * (c * y * y - m)
        if disc < 0:
            continue
        r = isqrt(disc)
        if r * r != disc:
            continue
        for num in (-b * y + r, -b * y - r):
            if num % (2 * a) == 0:
                x = num // (2 * a)
                if g(x, y) == m:
                    return (m11 * x + m12 * y, m21 * x + m22 * y)
    return None


def represented_values(f: BQF, bound: int) -> list[int]:
    """Sorted distinct values 0 < f(x, y) <= bound."""
    g = reduce(f) if f.is_primitive() else f
    a, b, c = g
    D = -g.discriminant
    vals = set()
    ymax = isqrt(4 * a * bound // D) + 1
    for y in range(0, ymax + 1):
        xmax = isqrt(bound // a) + abs(b) * y // a + 2
        for x in range(-xmax, xmax + 1):
            v = g(x, y)
            if 0 < v <= bound:
                vals.add(v)
    return sorted(vals)


def _disc_prime(f: BQF) -> int:
    D = f.discriminant
    if D % 16 or not is_prime(-D // 16) or -D // 16 < 5:
        raise DomainError(f"{f} does not have discriminant -16p")
    return -D // 16


def assigned_characters(f: BQF, bound: int = 10**5) -> tuple[int, int]:
    """(chi, delta) evaluated on an odd value represented by f, coprime to p."""
    p = _disc_prime(f)
    top = 64
    while True:
        top = min(top, bound)
        for m in represented_values(f, top):
            if m % 2 and m % p:
                return legendre(m, p), (-1) ** ((m - 1) // 2)
        if top >= bound:
            raise BoundError(f"no odd value coprime to {2 * p} represented by {f} below {bound}")
        top *= 8


def is_principal_genus(f: BQF) -> bool:
    return assigned_characters(f) == (1, 1)


def non_principal_forms(p: int) -> list[BQF]:
    return [f for f in enumerate_reduced(-16 * p) if not is_principal_genus(f)]


# ---------------------------------------------------------------------------
# transformations between discriminants


@dataclass(frozen=True)
class Transform2x2:
    alpha: int
    beta: int
    gamma: int
    delta: int

    @property
    def det(self) -> int:
        return self.alpha * self.delta - self.beta * self.gamma


def apply_transform(f: BQF, S: Transform2x2) -> BQF:
    """S^T f S, of discriminant D * det(S)^2."""
    if S.det <= 0:
        raise DomainError("transformation determinant must be positive")
    a, b, c = f
    al, be, ga, de = S.alpha, S.beta, S.gamma, S.delta
    return BQF(
        a * al * al + b * al * ga + c * ga * ga,
        b * (al * de + be * ga) + 2 * (a * al * be + c * ga * de),
        a * be * be + b * be * de + c * de * de,
    )


def canonical_transforms(s: int) -> list[Transform2x2]:
    """Right-coset representatives: diag(1, s) first, then [[s, i], [0, 1]]."""
    return [Transform2x2(1, 0, 0, s)] + [Transform2x2(s, i, 0, 1) for i in range(s)]


def derive_forms(f: BQF, s: int) -> list[BQF]:
    if not is_prime(s):
        raise DomainError(f"{s} is not prime")
    return [apply_transform(f, S) for S in canonical_transforms(s)]


def lift_to_16p(f: BQF) -> list[BQF]:
    """Primitive reduced discriminant -16p forms derived from a discriminant -p form."""
    p = -f.discriminant
    if p % 4 != 3 or not is_prime(p):
        raise DomainError(f"{f} does not have discriminant -p with p = 3 mod 4")
    out: list[BQF] = []
    for g in derive_forms(f, 2):
        for h in derive_forms(g, 2):
            if h.is_primitive():
                r = reduce(h)
                if r not in out:
                    out.append(r)
    return out


# ---------------------------------------------------------------------------
# Ibukiyama primes


def is_ibukiyama_prime(q: int, p: int) -> bool:
    return q % 8 == 3 and is_prime(q) and legendre(p, q) == -1


def find_ibukiyama_prime(f: BQF, p: int, ceiling: int = DEFAULT_PRIME_CEILING) -> tuple[int, int]:
    """Smallest prime q = 3 mod 8 with (p/q) = -1 represented by f, and r.

    For discriminant -p the returned r is the least r >= 0 with
    r^2 + p = 0 mod 4q; for -16p it is the least r >= 0 with r^2 + p = 0 mod q.
    """
    D = f.discriminant
    if D == -p:
        modulus = 4
    elif D == -16 * p:
        modulus = 1
    else:
        raise DomainError(f"{f} has neither discriminant -p nor -16p for p = {p}")
    bound = 64
    while True:
        top = min(bound, ceiling)
        for q in represented_values(f, top):
            if is_ibukiyama_prime(q, p):
                n = modulus * q
                r = next(x for x in range(n) if (x * x + p) % n == 0)
                return q, r
        if top >= ceiling:
            raise BoundError(f"no admissible prime represented by {f} below {ceiling}")
        bound *= 8
