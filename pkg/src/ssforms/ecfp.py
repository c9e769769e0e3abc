"""Elliptic curves over F_p and their F_p-rational isogenies.

Curves are short Weierstrass ``y^2 = x^3 + A x + B``.  Horizontal isogeny
kernels are located through the Frobenius eigenvalue: for a prime ell with
(-p/ell) = 1, Frobenius acts on E[ell] with eigenvalues +-sqrt(-p) mod ell, and
the kernel polynomial of the eigenspace for lambda is

    gcd(psi_ell, x^p - X_lambda, f^((p-1)/2) - Y_lambda)

where (X_lambda, y * Y_lambda) is [lambda] of the generic point (x, y) taken
in F_p[x]/(psi_ell).  The y-test separates lambda from -lambda, which the
x-coordinate alone cannot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .errors import BoundError, DomainError, SplitError, TheoremViolation
from .numeric import (
    PolyFp,
    _add,
    _divmod,
    _gcd,
    _monic,
    _mod,
    _mul,
    _powmod,
    _sub,
    _xgcd,
    inv_mod,
    is_prime,
    legendre,
    mod_sqrt,
    poly_roots,
    smallest_nonresidue,
)

NAIVE_COUNT_LIMIT = 10**5
COUNT_LIMIT = 10**7
DIVISION_POLY_LIMIT = 50


class Level(str, enum.Enum):
    SURFACE = "surface"
    FLOOR = "floor"


@dataclass(frozen=True)
class Curve:
    p: int
    A: int
    B: int
    # y^2 = x^3 + a2 x^2 + a4 x when built from a Montgomery-like model
    a2: int | None = field(default=None, compare=False)
    a4: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "A", self.A % self.p)
        object.__setattr__(self, "B", self.B % self.p)
        if (4 * self.A**3 + 27 * self.B**2) % self.p == 0:
            raise DomainError(f"singular curve y^2 = x^3 + {self.A}x + {self.B} over F_{self.p}")

    @property
    def j(self) -> int:
        return j_invariant(self)

    def rhs(self, x: int) -> int:
        return (x * x * x + self.A * x + self.B) % self.p

    def rhs_poly(self) -> list[int]:
        return _trim_list([self.B, self.A, 0, 1])

    def contains(self, P) -> bool:
        if P is None:
            return True
        x, y = P
        return (y * y - self.rhs(x)) % self.p == 0

    def __str__(self) -> str:
        if self.a2 is not None:
            return f"y^2 = x^3 + {self.a2}x^2 + {self.a4}x"
        return f"y^2 = x^3 + {self.A}x + {self.B}"

    def as_dict(self) -> dict:
        if self.a2 is not None:
            return {"a2": self.a2, "a4": self.a4, "A": self.A, "B": self.B}
        return {"A": self.A, "B": self.B}


def _trim_list(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def j_invariant(E: Curve) -> int:
    p = E.p
    num = 4 * pow(E.A, 3, p)
    return 1728 * num * inv_mod(num + 27 * E.B * E.B, p) % p


def curve_from_paper_model(a2: int, a4: int, p: int) -> Curve:
    """Depress y^2 = x^3 + a2 x^2 + a4 x by x -> x - a2/3."""
    i3 = inv_mod(3, p)
    A = (a4 - a2 * a2 * i3) % p
    B = (2 * pow(a2, 3, p) * inv_mod(27, p) - a2 * a4 * i3) % p
    return Curve(p, A, B, a2, a4)


def curve_with_j(j: int, p: int) -> Curve:
    """Deterministic base curve with the given j-invariant."""
    j %= p
    if j == 0:
        return Curve(p, 0, 1)
    if j == 1728 % p:
        return Curve(p, -1, 0)
    k = j * inv_mod(1728 - j, p) % p
    return Curve(p, 3 * k, 2 * k)


def twist(E: Curve, mu: int) -> Curve:
    """Quadratic twist by a non-square mu."""
    p = E.p
    if legendre(mu, p) != -1:
        raise DomainError(f"{mu} is a square mod {p}")
    if E.j == 1728 % p:
        return Curve(p, E.A * mu, 0)
    return Curve(p, E.A * mu * mu, E.B * mu**3)


def twist_parameter(p: int) -> int:
    return p - 1 if p % 4 == 3 else smallest_nonresidue(p)


def iso_class_key(E: Curve) -> tuple[int, int]:
    """(j, c): two curves are F_p-isomorphic iff their keys agree."""
    p = E.p
    j = E.j
    base = curve_with_j(j, p)
    if j == 0:
        ratio, k = E.B * inv_mod(base.B, p), gcd(6, p - 1)
    elif j == 1728 % p:
        ratio, k = E.A * inv_mod(base.A, p), gcd(4, p - 1)
    else:
        # A = u^4 A0, B = u^6 B0  =>  (B A0)/(B0 A) = u^2
        ratio, k = E.B * base.A * inv_mod(base.B * E.A, p), 2
    return j, pow(ratio % p, (p - 1) // k, p)


def is_isomorphic(E1: Curve, E2: Curve) -> bool:
    return E1.p == E2.p and iso_class_key(E1) == iso_class_key(E2)


def find_isomorphism(E1: Curve, E2: Curve) -> int | None:
    """u with (x, y) -> (u^2 x, u^3 y) mapping E1 onto E2, by scanning F_p."""
    p = E1.p
    for u in range(1, p):
        u2 = u * u % p
        if (pow(u2, 2, p) * E1.A - E2.A) % p == 0 and (pow(u2, 3, p) * E1.B - E2.B) % p == 0:
            return u
    return None


# ---------------------------------------------------------------------------
# points


def point_neg(E: Curve, P):
    return None if P is None else (P[0], -P[1] % E.p)


def point_add(E: Curve, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    p = E.p
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + E.A) * inv_mod(2 * y1, p) % p
    else:
        lam = (y2 - y1) * inv_mod(x2 - x1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def point_mul(E: Curve, n: int, P):
    if n < 0:
        return point_mul(E, -n, point_neg(E, P))
    R = None
    while n:
        if n & 1:
            R = point_add(E, R, P)
        P = point_add(E, P, P)
        n >>= 1
    return R


def points(E: Curve) -> list:
    """All affine points plus None for infinity.  Small p only."""
    p = E.p
    out = [None]
    for x in range(p):
        r = E.rhs(x)
        y = mod_sqrt(r, p)
        if y is None:
            continue
        out.append((x, y))
        if y:
            out.append((x, p - y))
    return out



# ---------------------------------------------------------------------------
# point counting


@lru_cache(maxsize=64)
def _residue_table(p: int) -> np.ndarray:
    chi = -np.ones(p, dtype=np.int64)
    sq = (np.arange(p, dtype=np.int64) ** 2) % p
    chi[sq] = 1
    chi[0] = 0
    return chi


def _count_naive(E: Curve) -> int:
    p = E.p
    chi = _residue_table(p)
    x = np.arange(p, dtype=np.int64)
    vals = (x * x % p * x + E.A * x + E.B) % p
    return p + 1 + int(chi[vals].sum())


def _count_bsgs(E: Curve) -> int:
    p = E.p
    lo = p + 1 - 2 * isqrt(p) - 2
    hi = p + 1 + 2 * isqrt(p) + 2
    candidates = None
    x = 0
    for _ in range(40):
        while True:
            y = mod_sqrt(E.rhs(x), p)
            x += 1
            if y:
                break
        P = (x - 1, y)
        found = set(_orders_in_interval(E, P, lo, hi))
        candidates = found if candidates is None else candidates & found
        if len(candidates) == 1:
            return candidates.pop()
    raise BoundError(f"point count of {E} not pinned down by baby-step giant-step")


def _orders_in_interval(E: Curve, P, lo: int, hi: int) -> list[int]:
    m = isqrt(hi - lo) + 1
    baby = {}
    R = None
    for i in range(m + 1):
        baby.setdefault(R, []).append(i)
        R = point_add(E, R, P)
    step = point_neg(E, point_mul(E, m, P))
    G = point_mul(E, lo, P)
    out = []
    for k in range(m + 2):
        # lo + k m + i : G + k*(-mP) ... solve [lo + k m]P = -[i]P
        target = point_neg(E, G) if G is not None else None
        for i in baby.get(target, []):
            n = lo + k * m + i
            if lo <= n <= hi:
                out.append(n)
        G = point_add(E, G, point_neg(E, step))
    return out


def count_points(E: Curve) -> int:
    if E.p > COUNT_LIMIT:
        raise BoundError(f"p = {E.p} above the point-counting limit {COUNT_LIMIT}")
    if E.p < NAIVE_COUNT_LIMIT:
        return _count_naive(E)
    return _count_bsgs(E)


def trace(E: Curve) -> int:
    return E.p + 1 - count_points(E)


def is_supersingular(E: Curve) -> bool:
    return trace(E) % E.p == 0


# ---------------------------------------------------------------------------
# two-torsion and levels


def two_torsion_roots(E: Curve) -> list[int]:
    return poly_roots(PolyFp((E.B, E.A, 0, 1), E.p))


def level(E: Curve) -> Level:
    """Surface iff the 2-division cubic splits; every curve is floor for p = 1 mod 4."""
    if E.p % 4 == 1:
        return Level.FLOOR
    n = len(two_torsion_roots(E))
    if n == 3:
        return Level.SURFACE
    if n == 1:
        return Level.FLOOR
    raise TheoremViolation(f"{E}: {n} rational 2-torsion roots, impossible for supersingular p = 3 mod 4")


# ---------------------------------------------------------------------------
# division polynomials


def _division_list(E: Curve, n: int) -> list[list[int]]:
    """Reduced division polynomials f_0..f_n (psi_k = f_k for odd k, 2y f_k for even k)."""
    p, A, B = E.p, E.A, E.B
    F = E.rhs_poly()
    F2x16 = [16 * c % p for c in _mul(F, F, p)]
    f = [
        [],
        [1],
        [1],
        _trim_list([(-A * A) % p, 12 * B % p, 6 * A % p, 0, 3]),
        _trim_list(
            [(-2 * A**3 - 16 * B * B) % p, (-8 * A * B) % p, (-10 * A * A) % p, 40 * B % p, 10 * A % p, 0, 2]
        ),
    ]
    cache = {i: f[i] for i in range(5)}

    def get(k):
        if k in cache:
            return cache[k]
        m = k // 2
        if k % 2:
            a = _mul(get(m + 2), _mul(get(m), _mul(get(m), get(m), p), p), p)
            b = _mul(get(m - 1), _mul(get(m + 1), _mul(get(m + 1), get(m + 1), p), p), p)
            if m % 2 == 0:
                a = _mul(F2x16, a, p)
            else:
                b = _mul(F2x16, b, p)
            val = _sub(a, b, p)
        else:
            a = _mul(get(m + 2), _mul(get(m - 1), get(m - 1), p), p)
            b = _mul(get(m - 2), _mul(get(m + 1), get(m + 1), p), p)
            val = _mul(get(m), _sub(a, b, p), p)
        cache[k] = val
        return val

    return [get(k) for k in range(n + 1)]


def division_poly(E: Curve, ell: int) -> PolyFp:
    """psi_ell for odd ell, of degree (ell^2 - 1)/2 and leading coefficient ell."""
    if ell % 2 == 0 or ell < 3:
        raise DomainError("division_poly expects an odd ell >= 3")
    if ell > DIVISION_POLY_LIMIT:
        raise BoundError(f"ell = {ell} above {DIVISION_POLY_LIMIT}")
    return PolyFp(tuple(_division_list(E, ell)[ell]), E.p)


# ---------------------------------------------------------------------------
# generic point arithmetic in F_p[x]/(M), point (X, Y) meaning (X, Y*y)


class _Generic:
    def __init__(self, E: Curve, M: list[int]):
        self.p = E.p
        self.A = E.A
        self.M = M
        self.F = _mod(E.rhs_poly(), M, E.p)

    def mul(self, u, v):
        return _mod(_mul(u, v, self.p), self.M, self.p)

    def inv(self, u):
        d, s, _ = _xgcd(u, self.M, self.p)
        if d != [1]:
            raise ZeroDivisionError("non-unit in F_p[x]/(M)")
        return _mod(s, self.M, self.p)

    def double(self, P):
        X, Y = P
        p = self.p
        num = _add([3 * c % p for c in self.mul(X, X)], [self.A % p], p)
        s = self.mul(num, self.inv(self.mul([2 * c % p for c in Y], self.F)))
        X3 = _sub(self.mul(self.mul(s, s), self.F), [2 * c % p for c in X], p)
        Y3 = _sub(self.mul(s, _sub(X, X3, p)), Y, p)
        return X3, Y3

    def add(self, P, Q):
        (X1, Y1), (X2, Y2) = P, Q
        p = self.p
        s = self.mul(_sub(Y2, Y1, p), self.inv(_sub(X2, X1, p)))
        X3 = _sub(_sub(self.mul(self.mul(s, s), self.F), X1, p), X2, p)
        Y3 = _sub(self.mul(s, _sub(X1, X3, p)), Y1, p)
        return X3, Y3

    def generic(self):
        return _mod([0, 1], self.M, self.p), [1]

    def small_multiple(self, k: int):
        """[k] of the generic point for 1 <= k; valid while no x-collision occurs."""
        P1 = self.generic()
        if k == 1:
            return P1
        R = self.double(P1)
        for _ in range(k - 2):
            R = self.add(R, P1)
        return R

    def frobenius(self):
        p = self.p
        Xp = _powmod([0, 1], p, self.M, p)
        Yp = _powmod(self.F, (p - 1) // 2, self.M, p)
        return Xp, Yp


def kernel_polynomial(E: Curve, ell: int, lam: int) -> PolyFp:
    """Kernel polynomial of the Frobenius eigenspace {P in E[ell] : pi P = [lam] P}."""
    p = E.p
    if ell == 2 or not is_prime(ell) or ell == p:
        raise DomainError(f"kernel_polynomial expects an odd prime ell != p, got {ell}")
    lam %= ell
    if lam == 0 or (lam * lam + p) % ell:
        raise SplitError(f"{lam} is not a Frobenius eigenvalue mod {ell} for p = {p}")
    psi = _monic(list(division_poly(E, ell).coeffs), p)
    G = _Generic(E, psi)
    half = (ell - 1) // 2
    k, sign = (lam, 1) if lam <= half else (ell - lam, -1)
    Xk, Yk = G.small_multiple(k)
    if sign < 0:
        Yk = [-c % p for c in Yk]
    Xp, Yp = G.frobenius()
    K = _gcd(psi, _sub(Xp, Xk, p), p)
    K = _gcd(K, _mod(_sub(Yp, Yk, p), K, p) if len(K) > 1 else [], p)
    if len(K) - 1 != half:
        raise SplitError(f"eigenvalue {lam} kernel for ell = {ell} has degree {len(K) - 1}, expected {half}")
    return PolyFp(tuple(K), p)


def horizontal_two_kernel(E: Curve, b: int) -> PolyFp:
    """x - x0 for the 2-torsion point killed by (pi - b)/2.

    P = (x0, 0) qualifies iff pi Q = [b] Q for the halvings Q of P, which on
    the generic halving point reads x^p = x and f^((p-1)/2) = +-1.
    """
    p = E.p
    if (b * b + p) % 8:
        raise SplitError(f"b = {b} does not satisfy b^2 = -p mod 8")
    target = [1] if b % 4 == 1 else [p - 1]
    F = E.rhs_poly()
    hits = []
    for x0 in two_torsion_roots(E):
        # numerator of x(2Q) - x0
        h = _sub(_trim_list([E.A * E.A % p, (-8 * E.B) % p, (-2 * E.A) % p, 0, 1]), [4 * x0 * c % p for c in F], p)
        dh = _trim_list([(i * c) % p for i, c in enumerate(h)][1:])
        g = _gcd(h, dh, p)
        if len(g) < 2:
            continue
        Xp = _powmod([0, 1], p, g, p)
        Yp = _powmod(_mod(F, g, p), (p - 1) // 2, g, p)
        if Xp == _mod([0, 1], g, p) and Yp == _mod(target, g, p):
            hits.append(x0)
    if len(hits) != 1:
        raise SplitError(f"{len(hits)} horizontal 2-kernels for b = {b} on {E}")
    return PolyFp((-hits[0] % p, 1), p)


# ---------------------------------------------------------------------------
# Velu


def _power_sums(K: list[int], p: int) -> tuple[int, int, int]:
    d = len(K) - 1
    c = lambda i: K[d - i] if d - i >= 0 else 0  # noqa: E731
    e1, e2, e3 = -c(1) % p, c(2) % p, -c(3) % p
    p1 = e1
    p2 = e1 * e1 - 2 * e2
    p3 = e1**3 - 3 * e1 * e2 + 3 * e3
    return p1 % p, p2 % p, p3 % p


def velu(E: Curve, kernel: PolyFp, ell: int) -> Curve:
    """Codomain of the normalized isogeny with the given kernel polynomial."""
    p, A, B = E.p, E.A, E.B
    K = list(kernel.monic().coeffs)
    if ell == 2:
        if len(K) != 2 or E.rhs(-K[0] % p) != 0:
            raise DomainError("2-isogeny kernel must be x - x0 with (x0, 0) on E")
        x0 = -K[0] % p
        v = (3 * x0 * x0 + A) % p
        return Curve(p, A - 5 * v, B - 7 * x0 * v)
    d = (ell - 1) // 2
    if len(K) - 1 != d:
        raise DomainError(f"kernel degree {len(K) - 1} != {d}")
    if _divmod(_monic(list(division_poly(E, ell).coeffs), p), K, p)[1]:
        raise DomainError("kernel polynomial does not divide the division polynomial")
    p1, p2, p3 = _power_sums(K, p)
    v = 6 * p2 + 2 * A * d
    w = 10 * p3 + 6 * A * p1 + 4 * B * d
    return Curve(p, A - 5 * v, B - 7 * w)


@dataclass(frozen=True)
class IsogenyStep:
    domain: Curve
    ell: int
    kernel: PolyFp
    codomain: Curve
    eigenvalue: int | None = None

    def __call__(self, P):
        return evaluate_isogeny(self.domain, self.kernel, self.ell, P)


def evaluate_isogeny(E: Curve, kernel: PolyFp, ell: int, P):
    if P is None:
        return None
    p = E.p
    x, y = P
    K = kernel.monic()
    if K(x) == 0:
        return None
    f = E.rhs(x)
    f1 = (3 * x * x + E.A) % p
    if ell == 2:
        x0 = -K.coeffs[0] % p
        v = (3 * x0 * x0 + E.A) % p
        t = inv_mod(x - x0, p)
        return (x + v * t) % p, y * (1 - v * t * t) % p
    K1 = K.derivative()
    K2 = K1.derivative()
    K3 = K2.derivative()
    k0, k1, k2, k3 = K(x), K1(x), K2(x), K3(x)
    ik = inv_mod(k0, p)
    L = k1 * ik % p
    L1 = (k2 * k0 - k1 * k1) * ik * ik % p
    L2 = (k3 * k0 * k0 - 3 * k0 * k1 * k2 + 2 * k1**3) * pow(ik, 3, p) % p
    S1, S2, S3 = L, -L1 % p, L2 * inv_mod(2, p) % p
    p1, _, _ = _power_sums(list(K.coeffs), p)
    X = (ell * x - 2 * p1 - 2 * f1 * S1 + 4 * f * S2) % p
    dX = (ell - 12 * x * S1 + 6 * f1 * S2 - 8 * f * S3) % p
    return X, y * dX % p


def isogeny_step(E: Curve, ell: int, lam: int) -> IsogenyStep:
    K = kernel_polynomial(E, ell, lam)
    return IsogenyStep(E, ell, K, velu(E, K, ell), lam % ell)


def two_isogenies(E: Curve) -> list[IsogenyStep]:
    out = []
    for x0 in two_torsion_roots(E):
        K = PolyFp((-x0 % E.p, 1), E.p)
        out.append(IsogenyStep(E, 2, K, velu(E, K, 2)))
    return out


def ideal_eigenvalue(ell: int, b: int, lvl: Level) -> int:
    """Frobenius eigenvalue on the kernel of the ideal with parameter b.

    Surface: [ell, (-b + sqrt(-p))/2] kills pi = [b].  Floor:
    [ell, -b + 2 sqrt(-p)] kills pi = [b/2].
    """
    if lvl is Level.SURFACE:
        return b % ell
    return b * inv_mod(2, ell) % ell


def kernel_for_ideal(E: Curve, ell: int, b: int, lvl: Level | None = None) -> IsogenyStep:
    """The F_p-isogeny of degree ell whose kernel is cut out by the ideal for b."""
    p = E.p
    lvl = lvl or level(E)
    if ell == 2:
        if lvl is Level.SURFACE:
            K = horizontal_two_kernel(E, b)
            return IsogenyStep(E, 2, K, velu(E, K, 2), b % 4)
        if p % 4 != 1:
            raise SplitError("no horizontal 2-isogeny on the floor for p = 3 mod 4")
        (step,) = two_isogenies(E)
        return step
    if lvl is Level.SURFACE:
        if (b * b + p) % (4 * ell):
            raise SplitError(f"b = {b}: b^2 != -p mod {4 * ell}")
    elif (b * b + 4 * p) % ell:
        raise SplitError(f"b = {b}: b^2 != -4p mod {ell}")
    return isogeny_step(E, ell, ideal_eigenvalue(ell, b, lvl))


# ---------------------------------------------------------------------------
# supersingular classes and graphs


def supersingular_j_invariants(p: int) -> list[int]:
    """Brute force: j in F_p whose curve has p + 1 points."""
    if not is_prime(p) or p < 5:
        raise DomainError(f"{p} must be a prime > 3")
    if p > 20000:
        return sorted(j for j in range(p) if count_points(curve_with_j(j, p)) == p + 1)
    chi = _residue_table(p)
    x = np.arange(p, dtype=np.int64)
    x3 = x * x % p * x % p
    out = []
    js = np.arange(p, dtype=np.int64)
    special = {0, 1728 % p}
    for start in range(0, p, 256):
        jj = js[start : start + 256]
        mask = np.array([j not in special for j in jj.tolist()])
        jj = jj[mask]
        if not len(jj):
            continue
        k = np.array([int(j) * inv_mod(1728 - int(j), p) % p for j in jj], dtype=np.int64)
        vals = (x3[None, :] + (3 * k[:, None] % p) * x[None, :] + 2 * k[:, None]) % p
        counts = p + 1 + chi[vals].sum(axis=1)
        out.extend(int(j) for j, c in zip(jj, counts) if c == p + 1)
    for j in special:
        if count_points(curve_with_j(j, p)) == p + 1:
            out.append(j)
    return sorted(out)


@lru_cache(maxsize=256)
def enumerate_fp_classes(p: int) -> tuple[Curve, ...]:
    """One curve per F_p-isomorphism class of supersingular curves, twist after base."""
    out = []
    for j in supersingular_j_invariants(p):
        E = curve_with_j(j, p)
        if j == 1728 % p:
            out.extend([E, Curve(p, 4, 0)])
        else:
            out.extend([E, twist(E, twist_parameter(p))])
    return tuple(out)


def class_index(p: int) -> dict[tuple[int, int], int]:
    return {iso_class_key(E): i for i, E in enumerate(enumerate_fp_classes(p))}


def locate(E: Curve) -> int:
    try:
        return class_index(E.p)[iso_class_key(E)]
    except KeyError:
        raise TheoremViolation(f"{E} is not among the supersingular classes of F_{E.p}") from None


def split_eigenvalues(p: int, ell: int) -> list[int]:
    """Sorted roots of lam^2 = -p mod ell (empty unless ell splits)."""
    return sorted(x for x in range(1, ell) if (x * x + p) % ell == 0)


@dataclass
class IsogenyGraph:
    p: int
    ell: int
    vertices: tuple[Curve, ...]
    edges: list[tuple[int, int, int | None]]  # (u, v, eigenvalue on u's side)

    def degree(self, u: int) -> int:
        return sum((a == u) + (b == u) for a, b, _ in self.edges)

    def neighbours(self, u: int) -> list[int]:
        out = []
        for a, b, _ in self.edges:
            if a == u:
                out.append(b)
            if b == u and a != u:
                out.append(a)
        return out

    def components(self) -> list[list[int]]:
        seen, comps = set(), []
        for s in range(len(self.vertices)):
            if s in seen:
                continue
            stack, comp = [s], []
            seen.add(s)
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in self.neighbours(u):
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            comps.append(sorted(comp))
        return comps


def isogeny_graph(p: int, ell: int) -> IsogenyGraph:
    """Multigraph of F_p-rational ell-isogenies between supersingular F_p-classes."""
    verts = enumerate_fp_classes(p)
    edges: list[tuple[int, int, int | None]] = []
    if ell == 2:
        arcs: dict[tuple[int, int], int] = {}
        for u, E in enumerate(verts):
            for step in two_isogenies(E):
                v = locate(step.codomain)
                arcs[(u, v)] = arcs.get((u, v), 0) + 1
        for (u, v), n in sorted(arcs.items()):
            if u < v:
                edges.extend([(u, v, None)] * max(n, arcs.get((v, u), 0)))
            elif u == v:
                edges.extend([(u, u, None)] * ((n + 1) // 2))
        return IsogenyGraph(p, ell, verts, edges)
    lams = split_eigenvalues(p, ell)
    if not lams:
        return IsogenyGraph(p, ell, verts, edges)
    lam = lams[0]
    for u, E in enumerate(verts):
        step = isogeny_step(E, ell, lam)
        edges.append((u, locate(step.codomain), lam))
    return IsogenyGraph(p, ell, verts, edges)
