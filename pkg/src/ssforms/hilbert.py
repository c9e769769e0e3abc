"""Hilbert class polynomials from the complex j-function.

j(tau) is evaluated as E4(q)^3 / Delta(q) with q = exp(2 pi i tau), using
Euler's pentagonal series for prod(1 - q^n).  The roots j(tau_f) over all
reduced forms f of discriminant D are multiplied out at a working precision
sized from the coefficient-height bound and rounded to integers.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from pathlib import Path

import mpmath

from .errors import DomainError, PrecisionError, TheoremViolation
from .numeric import PolyFp, format_poly, poly_gcd
from .qform import BQF, enumerate_reduced, is_reduced

GUARD_DIGITS = 20
ROUNDING_TOLERANCE = 1e-5
MAX_RETRIES = 3
CACHE_ENV = "SSFORMS_CACHE"
CACHE_FILE = "hilbert.txt"


@dataclass(frozen=True)
class PrecisionBudget:
    digits: int
    terms: int

    def __post_init__(self):
        if self.digits <= 0 or self.terms <= 0:
            raise DomainError("precision budget must be positive")


@dataclass(frozen=True)
class HilbertPoly:
    D: int
    coeffs: tuple[int, ...]  # ascending, monic

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def mod_p(self, p: int) -> PolyFp:
        return PolyFp(self.coeffs, p)

    def __str__(self) -> str:
        return format_poly(list(self.coeffs))


def default_budget(D: int) -> PrecisionBudget:
    forms = enumerate_reduced(D).forms
    height = math.pi * math.sqrt(-D) / math.log(10) * sum(1.0 / f.a for f in forms)
    digits = math.ceil(height) + GUARD_DIGITS
    return PrecisionBudget(digits, _terms_for(D, forms, digits))


def _terms_for(D: int, forms, digits: int) -> int:
    # |q| = exp(-pi sqrt|D| / a) is largest for the largest a
    amax = max(f.a for f in forms)
    decay = math.pi * math.sqrt(-D) / amax
    return int((digits + 10) * math.log(10) / decay) + 5


def _j_series(q, terms: int):
    # E4 = 1 + 240 sum sigma_3(n) q^n ; eta-product via pentagonal numbers
    qn = mpmath.mpf(1)
    lambert = mpmath.mpc(0)
    for n in range(1, terms + 1):
        qn = qn * q
        lambert += n**3 * qn / (1 - qn)
    e4 = 1 + 240 * lambert
    prod = mpmath.mpc(1)
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 > terms:
            break
        e2 = k * (3 * k + 1) // 2
        sign = -1 if k % 2 else 1
        prod += sign * (q**e1 + (q**e2 if e2 <= terms else 0))
        k += 1
    delta = q * prod**24
    return e4**3 / delta


def j_tau(f: BQF, budget: PrecisionBudget):
    """j((-b + i sqrt|D|) / 2a) as an mpmath complex number."""
    if not is_reduced(f):
        raise DomainError(f"{f} is not reduced")
    with mpmath.workdps(budget.digits):
        D = f.discriminant
        tau = mpmath.mpc(-f.b, mpmath.sqrt(-D)) / (2 * f.a)
        q = mpmath.exp(2j * mpmath.pi * tau)
        return +_j_series(q, budget.terms)


def _product(D: int, budget: PrecisionBudget) -> list:
    forms = enumerate_reduced(D).forms
    with mpmath.workdps(budget.digits):
        roots = []
        done = set()
        for f in forms:
            if f in done:
                continue
            j = j_tau(f, budget)
            conj = BQF(f.a, -f.b, f.c)
            if conj != f and conj in forms:
                roots.append(("pair", j))
                done.add(conj)
            else:
                roots.append(("single", j))
            done.add(f)
        poly = [mpmath.mpc(1)]
        for kind, j in roots:
            if kind == "pair":
                # (X - j)(X - conj j) = X^2 - 2 Re j X + |j|^2
                factor = [abs(j) ** 2, -2 * j.real, mpmath.mpf(1)]
            else:
                factor = [-j, mpmath.mpf(1)]
            out = [mpmath.mpc(0)] * (len(poly) + len(factor) - 1)
            for i, u in enumerate(poly):
                for k, v in enumerate(factor):
                    out[i + k] += u * v
            poly = out
        return poly


def _round(poly, D: int, digits: int) -> tuple[int, ...]:
    coeffs = []
    worst = 0.0
    for c in poly:
        # a coefficient wider than the working precision rounds trivially
        size = mpmath.log10(abs(c.real) + 1)
        if size > digits - GUARD_DIGITS // 2:
            raise PrecisionError(f"H_{D}: {digits} digits cannot hold a {int(size)}-digit coefficient")
        n = int(mpmath.nint(c.real))
        resid = float(abs(c.real - n)) + float(abs(c.imag))
        worst = max(worst, resid)
        coeffs.append(n)
    if worst >= ROUNDING_TOLERANCE:
        raise PrecisionError(f"H_{D}: rounding residual {worst:.3g} exceeds tolerance")
    return tuple(coeffs)


def compute_hilbert(D: int, budget: PrecisionBudget | None = None) -> HilbertPoly:
    """Compute H_D without the cache, retrying with doubled digits on failure."""
    if D >= 0 or D % 4 not in (0, 1):
        raise DomainError(f"{D} is not a negative discriminant")
    budget = budget or default_budget(D)
    forms = enumerate_reduced(D).forms
    for attempt in range(MAX_RETRIES + 1):
        try:
            with mpmath.workdps(budget.digits):
                coeffs = _round(_product(D, budget), D, budget.digits)
        except PrecisionError:
            if attempt == MAX_RETRIES:
                raise
            digits = budget.digits * 2
            budget = PrecisionBudget(digits, _terms_for(D, forms, digits))
            continue
        if coeffs[-1] != 1 or len(coeffs) - 1 != len(forms):
            raise TheoremViolation(f"H_{D} is not monic of degree h(D)")
        return HilbertPoly(D, coeffs)
    raise AssertionError("unreachable")


class HilbertCache:
    """In-memory table of H_D, optionally persisted to ``<dir>/hilbert.txt``.

    One record per line, ``D;c_0,c_1,...,c_h`` in ascending degree.
    """

    def __init__(self, directory: str | os.PathLike | None = None):
        self._lock = threading.Lock()
        self._table: dict[int, HilbertPoly] = {}
        self.path = Path(directory) / CACHE_FILE if directory else None
        if self.path and self.path.exists():
            self._table.update(load_cache_file(self.path))

    def get(self, D: int) -> HilbertPoly:
        H = self._table.get(D)
        if H is not None:
            return H
        H = compute_hilbert(D)
        with self._lock:
            if D not in self._table:
                self._table[D] = H
                if self.path:
                    self.path.parent.mkdir(parents=True, exist_ok=True)
                    with open(self.path, "a") as fh:
                        fh.write(format_record(H) + "\n")
        return H

    def __contains__(self, D: int) -> bool:
        return D in self._table

    def __len__(self) -> int:
        return len(self._table)


def format_record(H: HilbertPoly) -> str:
    return f"{H.D};" + ",".join(str(c) for c in H.coeffs)


def parse_record(line: str) -> HilbertPoly:
    head, _, body = line.strip().partition(";")
    return HilbertPoly(int(head), tuple(int(c) for c in body.split(",")))


def load_cache_file(path) -> dict[int, HilbertPoly]:
    out = {}
    with open(path) as fh:
        for line in fh:
            if line.strip():
                H = parse_record(line)
                out[H.D] = H
    return out


_default_cache: HilbertCache | None = None


def default_cache() -> HilbertCache:
    global _default_cache
    if _default_cache is None:
        _default_cache = HilbertCache(os.environ.get(CACHE_ENV) or None)
    return _default_cache


def set_default_cache(cache: HilbertCache) -> None:
    global _default_cache
    _default_cache = cache


def hilbert_class_poly(D: int, cache: HilbertCache | None = None) -> HilbertPoly:
    return (cache or default_cache()).get(D)


def mod_p(H: HilbertPoly, p: int) -> PolyFp:
    return H.mod_p(p)


def common_root(D1: int, D2: int, p: int, cache: HilbertCache | None = None) -> int | None:
    """The unique F_p-root shared by H_D1 and H_D2 mod p, or None if coprime.

    A gcd of degree above one, or one without an F_p root, raises
    TheoremViolation.
    """
    g = poly_gcd(hilbert_class_poly(D1, cache).mod_p(p), hilbert_class_poly(D2, cache).mod_p(p))
    if g.degree == 0:
        return None
    if g.degree > 1:
        raise TheoremViolation(f"gcd(H_{D1}, H_{D2}) mod {p} has degree {g.degree}")
    return -g.coeffs[0] % p


def gcd_degree(D1: int, D2: int, p: int, cache: HilbertCache | None = None) -> int:
    g = poly_gcd(hilbert_class_poly(D1, cache).mod_p(p), hilbert_class_poly(D2, cache).mod_p(p))
    return g.degree
