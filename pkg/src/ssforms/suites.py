"""Verification suites run by ``ssforms verify`` and the acceptance tests."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .correspondence import (
    Level,
    admissible_bs,
    check_action_compatibility,
    check_vertical,
    count_formula,
    orient,
)
from .ecfp import supersingular_j_invariants
from .errors import DomainError, SSFormsError
from .hilbert import compute_hilbert, default_budget, gcd_degree, PrecisionBudget, _terms_for
from .numeric import is_prime, legendre, primes_up_to
from .qform import (
    class_number,
    class_number_formula,
    enumerate_reduced,
    is_principal_genus,
    lift_to_16p,
    non_principal_forms,
)

SUITES = ("counts", "uniqueness", "compatibility", "vertical", "classnumber", "hilbert")
COMPAT_ELLS = (2, 3, 5, 7)


@dataclass
class SuiteResult:
    suite: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0
    per_prime: dict[int, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: "SuiteResult") -> None:
        self.checked += other.checked
        self.failures.extend(other.failures)
        self.per_prime.update(other.per_prime)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        d["per_prime"] = {str(k): v for k, v in self.per_prime.items()}
        return d


def _counts(p: int) -> SuiteResult:
    r = SuiteResult("counts", 1)
    want, got = count_formula(p), len(supersingular_j_invariants(p))
    r.per_prime[p] = got
    if want != got:
        r.failures.append(f"p={p}: formula {want}, brute force {got}")
    return r


def _uniqueness(p: int) -> SuiteResult:
    r = SuiteResult("uniqueness")
    pairs = []
    if p % 4 == 3:
        pairs += [(f, -4 * f.a, -4 * f.c) for f in enumerate_reduced(-p)]
    pairs += [(f, -f.a, -f.c) for f in non_principal_forms(p)]
    for f, d1, d2 in pairs:
        r.checked += 1
        deg = gcd_degree(d1, d2, p)
        if deg != 1:
            r.failures.append(f"p={p} {f}: gcd(H_{d1}, H_{d2}) has degree {deg}")
    r.per_prime[p] = len(pairs)
    return r


def compat_ells(p: int, divides: bool = True) -> list[int]:
    out = []
    for ell in COMPAT_ELLS:
        if divides and (p + 1) % ell:
            continue
        if ell == 2 or legendre(-p, ell) == 1:
            out.append(ell)
    return out


def _compatibility(p: int) -> SuiteResult:
    r = SuiteResult("compatibility")
    table = orient(p)
    ells = compat_ells(p) or compat_ells(p, divides=False)
    for ell in ells:
        for rec in table:
            for b in admissible_bs(ell, rec.level, p):
                r.checked += 1
                if not check_action_compatibility(table, rec, ell, b):
                    r.failures.append(f"p={p} {rec.name} ell={ell} b={b}")
    r.per_prime[p] = r.checked
    return r


def expected_lift_count(p: int) -> int:
    return 3 if p % 8 == 3 else 1


def _vertical(p: int) -> SuiteResult:
    r = SuiteResult("vertical")
    if p % 4 != 3:
        return r
    table = orient(p)
    for rec in table:
        if rec.level is not Level.SURFACE:
            continue
        r.checked += 1
        lifts = [g for g in lift_to_16p(rec.form) if not is_principal_genus(g)]
        if len(lifts) != expected_lift_count(p):
            r.failures.append(f"p={p} {rec.name}: {len(lifts)} non-principal lifts")
        elif not check_vertical(table, rec):
            r.failures.append(f"p={p} {rec.name}: down-neighbours differ from lifts")
    r.per_prime[p] = r.checked
    return r


PER_PRIME = {
    "counts": _counts,
    "uniqueness": _uniqueness,
    "compatibility": _compatibility,
    "vertical": _vertical,
}


def _guarded(args):
    name, p = args
    try:
        return PER_PRIME[name](p)
    except SSFormsError as exc:
        return SuiteResult(name, 1, [f"p={p}: {type(exc).__name__}: {exc}"])


def class_number_pairs(limit: int = 10**4, count: int = 50) -> list[tuple[int, int]]:
    """Deterministic spread of (D, m), m >= 2, |m^2 D| <= limit, fundamental D first."""
    out = []
    for D in range(-3, -limit, -1):
        if D % 4 not in (0, 1):
            continue
        for m in range(2, 40):
            if m * m * -D > limit:
                break
            out.append((D, m))
    step = max(1, len(out) // count)
    return out[::step][:count]


def run_classnumber(limit: int = 10**4, count: int = 50) -> SuiteResult:
    r = SuiteResult("classnumber")
    for D, m in class_number_pairs(limit, count):
        r.checked += 1
        want = class_number_formula(D, m)
        got = class_number(m * m * D)
        if want != got:
            r.failures.append(f"h({m}^2*{D}) = {got}, formula {want}")
    return r


def run_hilbert(max_abs: int = 300) -> SuiteResult:
    r = SuiteResult("hilbert")
    for D in range(-3, -max_abs - 1, -1):
        if D % 4 not in (0, 1):
            continue
        r.checked += 1
        H = compute_hilbert(D)
        if H.degree != class_number(D):
            r.failures.append(f"deg H_{D} = {H.degree} != h = {class_number(D)}")
            continue
        b = default_budget(D)
        digits = 2 * b.digits
        forms = enumerate_reduced(D).forms
        H2 = compute_hilbert(D, PrecisionBudget(digits, _terms_for(D, forms, digits)))
        if H2.coeffs != H.coeffs:
            r.failures.append(f"H_{D} changes at doubled precision")
    if compute_hilbert(-4).coeffs != (-1728, 1) or compute_hilbert(-3).coeffs != (0, 1):
        r.failures.append("H_-4 or H_-3 wrong")
    return r


def prime_list(p: int | None = None, p_max: int | None = None) -> list[int]:
    if p is not None:
        if not is_prime(p) or p <= 3:
            raise DomainError(f"{p} must be a prime > 3")
        return [p]
    if p_max is None:
        raise DomainError("give --p or --p-max")
    return [q for q in primes_up_to(p_max) if q > 3]


def run_suite(name: str, primes: list[int], jobs: int = 1) -> SuiteResult:
    t0 = time.perf_counter()
    if name == "classnumber":
        res = run_classnumber()
    elif name == "hilbert":
        res = run_hilbert()
    elif name in PER_PRIME:
        res = SuiteResult(name)
        work = [(name, p) for p in primes]
        if jobs > 1:
            with ProcessPoolExecutor(jobs) as ex:
                parts = list(ex.map(_guarded, work))
        else:
            parts = [_guarded(w) for w in work]
        for part in parts:
            res.merge(part)
    else:
        raise DomainError(f"unknown suite {name!r}")
    res.seconds = time.perf_counter() - t0
    return res


def expand_suites(names: list[str]) -> list[str]:
    out = []
    for n in names:
        for s in SUITES if n == "all" else [n]:
            if s not in SUITES:
                raise DomainError(f"unknown suite {s!r}; choose from {', '.join(SUITES)} or all")
            if s not in out:
                out.append(s)
    return out
