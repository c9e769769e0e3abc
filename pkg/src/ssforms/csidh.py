"""Toy CSIDH over p = 4 * l_1 * ... * l_k - 1 and its form-side shortcut.

The honest exchange walks Velu isogenies from E0: y^2 = x^3 + x.  The
shortcut recovers the shared j from the table forms f_A, f_B of the public
curves alone: E_AB has form (4,0,p) f_A f_B, read up to the sign of each
factor, so four candidate forms are mapped to j-invariants and one of them is
the honest answer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import prod

from .correspondence import CorrespondenceTable, form_to_j_floor, orient
from .ecfp import Curve, Level, kernel_for_ideal, locate
from .errors import DomainError, TheoremViolation
from .hilbert import HilbertCache
from .numeric import is_prime
from .qform import BQF, compose, inverse, reduce


@dataclass(frozen=True)
class CsidhParams:
    ells: tuple[int, ...]
    bound: int = 1

    def __post_init__(self):
        if len(set(self.ells)) != len(self.ells) or any(l % 2 == 0 or not is_prime(l) for l in self.ells):
            raise DomainError(f"{self.ells} must be distinct odd primes")
        if not is_prime(self.p):
            raise DomainError(f"4 * prod{self.ells} - 1 = {self.p} is not prime")
        if self.bound < 0:
            raise DomainError("exponent bound must be non-negative")

    @property
    def p(self) -> int:
        return 4 * prod(self.ells) - 1

    def start(self) -> Curve:
        return Curve(self.p, 1, 0)

    def random_key(self, rng: random.Random) -> tuple[int, ...]:
        return tuple(rng.randint(-self.bound, self.bound) for _ in self.ells)


def act(params: CsidhParams, key: tuple[int, ...], E: Curve) -> Curve:
    """[a]E for the exponent vector key: e_i steps of eigenvalue sign(e_i)."""
    if len(key) != len(params.ells):
        raise DomainError("key length does not match the prime list")
    for ell, e in zip(params.ells, key):
        # ell | p + 1, so the Frobenius eigenvalues mod ell are +1 and -1
        b = 2 if e > 0 else -2
        for _ in range(abs(e)):
            E = kernel_for_ideal(E, ell, b, Level.FLOOR).codomain
    return E


@dataclass
class Transcript:
    p: int
    key_a: tuple[int, ...]
    key_b: tuple[int, ...]
    j_a: int
    j_b: int
    j_shared: int
    form_a: BQF
    form_b: BQF
    candidates: list[tuple[BQF, int]] = field(default_factory=list)
    matched: int | None = None

    @property
    def ok(self) -> bool:
        return self.matched is not None

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "key_a": list(self.key_a),
            "key_b": list(self.key_b),
            "j_a": self.j_a,
            "j_b": self.j_b,
            "j_shared": self.j_shared,
            "form_a": list(self.form_a),
            "form_b": list(self.form_b),
            "candidates": [{"form": list(f), "j": j} for f, j in self.candidates],
            "matched": self.matched,
        }


def recovery_candidates(p: int, fa: BQF, fb: BQF, cache: HilbertCache | None = None) -> list[tuple[BQF, int]]:
    """Distinct forms (4,0,p) fa^+-1 fb^+-1 with their j-invariants."""
    g0 = BQF(4, 0, p)
    out: list[tuple[BQF, int]] = []
    for x in (fa, inverse(fa)):
        for y in (fb, inverse(fb)):
            f = reduce(compose(g0, compose(x, y)))
            if all(f != g for g, _ in out):
                out.append((f, form_to_j_floor(f, p, cache)))
    return out


def exchange(
    params: CsidhParams,
    key_a: tuple[int, ...],
    key_b: tuple[int, ...],
    table: CorrespondenceTable | None = None,
    cache: HilbertCache | None = None,
) -> Transcript:
    p = params.p
    table = table or orient(p, cache)
    E0 = params.start()
    EA, EB = act(params, key_a, E0), act(params, key_b, E0)
    shared = act(params, key_a, EB)
    if locate(shared) != locate(act(params, key_b, EA)):
        raise TheoremViolation("the two sides of the exchange disagree")
    fa, fb = table.form_of(EA), table.form_of(EB)
    tr = Transcript(p, tuple(key_a), tuple(key_b), EA.j, EB.j, shared.j, fa, fb)
    tr.candidates = recovery_candidates(p, fa, fb, cache)
    want = table.form_of(shared)
    for i, (f, j) in enumerate(tr.candidates):
        if f == want and j == shared.j:
            tr.matched = i
            break
    return tr


def run_trials(params: CsidhParams, trials: int, seed: int = 0, cache: HilbertCache | None = None) -> list[Transcript]:
    rng = random.Random(seed)
    table = orient(params.p, cache)
    return [
        exchange(params, params.random_key(rng), params.random_key(rng), table, cache) for _ in range(trials)
    ]
