"""Oriented bijection between supersingular F_p-classes and reduced forms.

Surface classes (p = 3 mod 4, full rational 2-torsion) correspond to reduced
forms of discriminant -p, floor classes to the non-principal reduced forms of
discriminant -16p.  The form of a class is pinned to its j-invariant through
Hilbert class polynomial gcds; which member of an inverse pair it receives is
fixed by walking ell-isogenies from an anchor, composing with l^2 per step.
"""

from __future__ import annotations

import csv
import io
import json
from collections import deque
from dataclasses import dataclass, field

from .ecfp import (
    Curve,
    Level,
    curve_with_j,
    enumerate_fp_classes,
    iso_class_key,
    kernel_for_ideal,
    level,
    locate,
    supersingular_j_invariants,
    twist,
    twist_parameter,
    two_isogenies,
)
from .errors import DomainError, SplitError, TheoremViolation
from .hilbert import HilbertCache, common_root
from .numeric import inv_mod, is_prime, legendre, mod_sqrt, primes_up_to
from .qform import (
    BQF,
    class_number,
    compose,
    enumerate_reduced,
    find_ibukiyama_prime,
    inverse,
    is_principal_genus,
    lift_to_16p,
    non_principal_forms,
    principal_form,
    reduce,
)

MAX_WALK_ELL = 60


@dataclass(frozen=True)
class OrderTag:
    q: int
    r: int
    kind: str  # "O'" (surface) or "O" (floor)

    def __post_init__(self):
        if self.kind not in ("O", "O'"):
            raise DomainError(f"unknown order kind {self.kind!r}")

    def as_dict(self) -> dict:
        return {"q": self.q, "r": self.r, "kind": self.kind}


@dataclass(frozen=True)
class ClassRecord:
    index: int
    name: str
    curve: Curve
    j: int
    level: Level
    form: BQF
    tag: OrderTag

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "j": self.j,
            "level": self.level.value,
            "form": list(self.form),
            "tag": self.tag.as_dict(),
            "curve": model_dict(self.curve),
        }


@dataclass
class CorrespondenceTable:
    p: int
    records: list[ClassRecord]
    flipped: bool = False
    walk_ells: tuple[int, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def record_of(self, E: Curve) -> ClassRecord:
        return self.records[locate(E)]

    def form_of(self, E: Curve) -> BQF:
        return self.record_of(E).form

    def by_form(self) -> dict[BQF, ClassRecord]:
        return {r.form: r for r in self.records}

    def flip(self) -> "CorrespondenceTable":
        """The other global orientation: every form replaced by its inverse."""
        recs = [
            ClassRecord(r.index, r.name, r.curve, r.j, r.level, inverse(r.form), r.tag) for r in self.records
        ]
        return CorrespondenceTable(self.p, recs, not self.flipped, self.walk_ells)

    def to_json(self) -> str:
        return json.dumps([r.as_dict() for r in self.records], indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "j", "level", "a", "b", "c", "q", "r", "kind", "curve"])
        for r in self.records:
            w.writerow([r.name, r.j, r.level.value, *r.form, r.tag.q, r.tag.r, r.tag.kind, model_str(r.curve)])
        return buf.getvalue()

    def to_text(self) -> str:
        rows = [(r.name, str(r.j), r.level.value, str(r.form), f"{r.tag.kind}({r.tag.q},{r.tag.r})", model_str(r.curve))
                for r in self.records]
        head = ("class", "j", "level", "form", "order", "curve")
        widths = [max(len(x[i]) for x in rows + [head]) for i in range(len(head))]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        return "\n".join(fmt.format(*x).rstrip() for x in [head, *rows])


# ---------------------------------------------------------------------------
# curve models for output


def montgomery_model(E: Curve) -> tuple[int, int] | None:
    """(a2, a4) with a4 = +-1 and E ~ y^2 = x^3 + a2 x^2 + a4 x, |a2| minimal."""
    from .ecfp import two_torsion_roots

    p = E.p
    best = None
    for r in two_torsion_roots(E):
        a2, a4 = 3 * r % p, (3 * r * r + E.A) % p
        for target in (1, p - 1):
            # x = s x', s = u^2:  a2' = a2 / s, a4' = a4 / s^2
            s2 = a4 * inv_mod(target, p) % p
            s = mod_sqrt(s2, p)
            if s is None:
                continue
            for cand in {s, p - s}:
                if cand == 0 or legendre(cand, p) != 1:
                    continue
                b2 = a2 * inv_mod(cand, p) % p
                b2 = b2 - p if b2 > p // 2 else b2
                t = -1 if target == p - 1 else 1
                key = (abs(b2), -b2, t)
                if best is None or key < best[0]:
                    best = (key, (b2, t))
    return best[1] if best else None


def model_dict(E: Curve) -> dict:
    if E.a2 is not None:
        return {"a2": E.a2, "a4": E.a4}
    m = montgomery_model(E)
    if m is not None:
        return {"a2": m[0], "a4": m[1]}
    return {"A": E.A, "B": E.B}


def model_str(E: Curve) -> str:
    d = model_dict(E)
    if "a2" in d:
        return _poly_rhs([(3, 1), (2, d["a2"]), (1, d["a4"])])
    return _poly_rhs([(3, 1), (1, d["A"]), (0, d["B"])])


def _poly_rhs(terms) -> str:
    out = "y^2 = "
    first = True
    for k, c in terms:
        if c == 0:
            continue
        mono = {3: "x^3", 2: "x^2", 1: "x", 0: ""}[k]
        body = mono if abs(c) == 1 and mono else f"{abs(c)}{mono}"
        if first:
            out += ("-" if c < 0 else "") + body
            first = False
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


# ---------------------------------------------------------------------------
# forms -> j


def form_to_j_surface(f: BQF, p: int, cache: HilbertCache | None = None) -> int:
    if p % 4 != 3:
        raise DomainError(f"no surface for p = {p}")
    if f.discriminant != -p:
        raise DomainError(f"{f} does not have discriminant -{p}")
    j = common_root(-4 * f.a, -4 * f.c, p, cache)
    if j is None:
        raise TheoremViolation(f"H_{-4 * f.a} and H_{-4 * f.c} share no root mod {p}")
    return j


def form_to_j_floor(f: BQF, p: int, cache: HilbertCache | None = None) -> int:
    if f.discriminant != -16 * p:
        raise DomainError(f"{f} does not have discriminant -16*{p}")
    if is_principal_genus(f):
        raise DomainError(f"{f} lies in the principal genus")
    if f.a == 3:
        return 0
    if f.a == 4:
        return 1728 % p
    j = common_root(-f.a, -f.c, p, cache)
    if j is None:
        raise TheoremViolation(f"H_{-f.a} and H_{-f.c} share no root mod {p}")
    return j


def form_to_j(f: BQF, p: int, cache: HilbertCache | None = None) -> int:
    if f.discriminant == -p:
        return form_to_j_surface(f, p, cache)
    return form_to_j_floor(f, p, cache)


def level_forms(p: int, lvl: Level) -> list[BQF]:
    if lvl is Level.SURFACE:
        return list(enumerate_reduced(-p).forms)
    return non_principal_forms(p)


def j_to_form_pair(j: int, lvl: Level, p: int, cache: HilbertCache | None = None) -> tuple[BQF, BQF]:
    """The forms (a, +-b, c) attached to j on a level, a then c minimal."""
    hits = [f for f in level_forms(p, lvl) if form_to_j(f, p, cache) == j % p]
    if not hits:
        raise DomainError(f"no {lvl.value} form for j = {j} mod {p}")
    f = min(hits, key=lambda g: (g.a, g.c, -g.b))
    return f, inverse(f)


def order_tag(f: BQF, p: int) -> OrderTag:
    q, r = find_ibukiyama_prime(f, p)
    return OrderTag(q, r, "O'" if f.discriminant == -p else "O")


# ---------------------------------------------------------------------------
# ideals of norm ell


def surface_b(ell: int, p: int) -> int | None:
    """Least odd b > 0 with b^2 = -p mod 4 ell."""
    n = 4 * ell
    return next((b for b in range(1, n, 2) if (b * b + p) % n == 0), None)


def floor_b(ell: int, p: int) -> int | None:
    return next((b for b in range(ell) if (b * b + 4 * p) % ell == 0), None) if ell % 2 else None


def ell_form(ell: int, b: int, lvl: Level, p: int) -> BQF:
    """The form l attached to the ideal of norm ell with parameter b."""
    if lvl is Level.SURFACE:
        if (b * b + p) % (4 * ell):
            raise SplitError(f"b = {b} is not admissible for ell = {ell}")
        return BQF(ell, b, (b * b + p) // (4 * ell))
    if ell == 2:
        if p % 4 != 1:
            raise SplitError("the floor has no horizontal 2-isogenies for p = 3 mod 4")
        return BQF(8, -4, (p + 1) // 2)
    if (b * b + 4 * p) % ell:
        raise SplitError(f"b = {b} is not admissible for ell = {ell}")
    return BQF(ell, 2 * b, (b * b + 4 * p) // ell)


def step_form(form: BQF, ell: int, b: int, lvl: Level, p: int) -> BQF:
    l = ell_form(ell, b, lvl, p)
    return reduce(compose(form, compose(l, l)))


def admissible_bs(ell: int, lvl: Level, p: int) -> list[int]:
    """Both signs of the ideal parameter, empty if ell does not act on this level."""
    if lvl is Level.SURFACE:
        if ell == 2 and p % 8 != 7:
            return []
        b = surface_b(ell, p)
        return [] if b is None else [b, -b]
    if ell == 2:
        return [1] if p % 4 == 1 else []
    b = floor_b(ell, p)
    if b is None or b == 0:
        return []
    return [b, -b]


def walk_moves(p: int) -> list[int]:
    """Split primes usable for propagation, ell = 3 (or the least split one) first."""
    out = []
    for ell in primes_up_to(MAX_WALK_ELL):
        if ell == p:
            continue
        if ell == 2:
            if p % 8 == 7 or p % 4 == 1:
                out.append(2)
            continue
        if legendre(-p, ell) == 1:
            out.append(ell)
    odd = [e for e in out if e != 2]
    return odd + [e for e in out if e == 2]


# ---------------------------------------------------------------------------
# orientation


def _anchor_choices(p: int, cache) -> list[dict[int, BQF]]:
    """Candidate anchor assignments, tried in order.

    For p = 3 mod 4 the classes of x^3 - x and x^3 + 4x carry the two
    self-inverse forms.  Otherwise the least non-principal form (a, |b|),
    b >= 0, goes to one of the two classes with its j; the base curve is
    tried first and the twist only if the walk contradicts the j-invariants.
    """
    if p % 4 == 3:
        return [{locate(Curve(p, -1, 0)): principal_form(-p), locate(Curve(p, 4, 0)): BQF(4, 0, p)}]
    cands = [f for f in non_principal_forms(p) if f.b >= 0]
    f = min(cands, key=lambda g: (g.a, abs(g.b)))
    E = curve_with_j(form_to_j_floor(f, p, cache), p)
    return [{locate(E): f}, {locate(twist(E, twist_parameter(p))): f}]


def _propagate(p: int, anchors: dict[int, BQF], classes, levels) -> tuple[dict[int, BQF], list[int]]:
    forms = dict(anchors)
    used: list[int] = []

    def assign(v: int, g: BQF, why: str) -> bool:
        old = forms.get(v)
        if old is None:
            forms[v] = g
            return True
        if old != g:
            raise TheoremViolation(f"class {v}: {why} gives {g}, already {old}")
        return False

    for ell in walk_moves(p):
        used.append(ell)
        queue = deque(sorted(forms))
        while queue:
            u = queue.popleft()
            E, lvl, F = classes[u], levels[u], forms[u]
            if E.j != 1728 % p:
                v = locate(twist(E, twist_parameter(p)))
                if assign(v, inverse(F), "twist"):
                    queue.append(v)
            for e in used:
                for b in admissible_bs(e, lvl, p):
                    step = kernel_for_ideal(E, e, b, lvl)
                    v = locate(step.codomain)
                    if levels[v] is not lvl:
                        raise TheoremViolation(f"horizontal {e}-isogeny left the {lvl.value}")
                    if assign(v, step_form(F, e, b, lvl, p), f"{e}-isogeny b={b}"):
                        queue.append(v)
        if len(forms) == len(classes):
            return forms, used
    raise TheoremViolation(f"propagation reached {len(forms)} of {len(classes)} classes")


def _check_forms(p: int, forms: dict[int, BQF], classes, levels, cache) -> None:
    for i, E in enumerate(classes):
        f = forms[i]
        want = -p if levels[i] is Level.SURFACE else -16 * p
        if f.discriminant != want:
            raise TheoremViolation(f"class {i} on the {levels[i].value} got {f}")
        j = form_to_j(f, p, cache)
        if j != E.j:
            raise TheoremViolation(f"form {f} gives j = {j}, curve has j = {E.j}")


def orient(p: int, cache: HilbertCache | None = None) -> CorrespondenceTable:
    """Build the oriented table for p by anchor-plus-propagation."""
    if not is_prime(p) or p <= 3:
        raise DomainError(f"{p} must be a prime > 3")
    classes = enumerate_fp_classes(p)
    levels = [level(E) for E in classes]
    failure = None
    for anchors in _anchor_choices(p, cache):
        try:
            forms, used = _propagate(p, anchors, classes, levels)
            _check_forms(p, forms, classes, levels, cache)
        except TheoremViolation as exc:
            failure = exc
            continue
        records = [
            ClassRecord(i, _class_name(E), E, E.j, levels[i], forms[i], order_tag(forms[i], p))
            for i, E in enumerate(classes)
        ]
        table = CorrespondenceTable(p, records, walk_ells=tuple(used))
        _check_bijective(table)
        return table
    raise failure


def _class_name(E: Curve) -> str:
    base = curve_with_j(E.j, E.p)
    twisted = iso_class_key(E) != iso_class_key(base)
    return f"{'E~' if twisted else 'E'}({E.j})"


def _check_bijective(table: CorrespondenceTable) -> None:
    p = table.p
    want = set(non_principal_forms(p))
    if p % 4 == 3:
        want |= set(enumerate_reduced(-p).forms)
    got = [r.form for r in table]
    if len(set(got)) != len(got) or set(got) != want:
        raise TheoremViolation("form column is not a bijection onto the admissible forms")


# ---------------------------------------------------------------------------
# checks


def check_action_compatibility(table: CorrespondenceTable, rec: ClassRecord, ell: int, b: int) -> bool:
    """Form of the codomain of the ideal step equals rec.form * l^2."""
    p = table.p
    step = kernel_for_ideal(rec.curve, ell, b, rec.level)
    return table.form_of(step.codomain) == step_form(rec.form, ell, b, rec.level, p)


def check_vertical(table: CorrespondenceTable, rec: ClassRecord) -> bool:
    """Floor neighbours of a surface class carry exactly its non-principal lifts."""
    if rec.level is not Level.SURFACE:
        raise DomainError("check_vertical expects a surface record")
    down = []
    for step in two_isogenies(rec.curve):
        r = table.record_of(step.codomain)
        if r.level is Level.FLOOR:
            down.append(r.form)
    lifts = [g for g in lift_to_16p(rec.form) if not is_principal_genus(g)]
    return sorted(down) == sorted(lifts)


def count_formula(p: int) -> int:
    if p % 4 == 1:
        return class_number(-4 * p) // 2
    if p % 8 == 7:
        return class_number(-p)
    return 2 * class_number(-p)


def verify_count(p: int) -> bool:
    return count_formula(p) == len(supersingular_j_invariants(p))


def flip_normalize(assign: dict, reference: dict) -> tuple[dict, bool]:
    """Return assign or its global inverse, whichever agrees with reference."""
    if all(assign[k] == reference[k] for k in reference):
        return assign, False
    flipped = {k: inverse(v) for k, v in assign.items()}
    return flipped, True


# ---------------------------------------------------------------------------
# annotated graphs


def edge_ideal_form(ell: int, lam: int, lvl: Level, p: int) -> BQF:
    """Reduced l for the kernel with Frobenius eigenvalue lam on a level."""
    if lvl is Level.SURFACE:
        b = next(b for b in range(1, 4 * ell, 2) if (b - lam) % ell == 0 and (b * b + p) % (4 * ell) == 0)
    else:
        b = 2 * lam % ell
    return reduce(ell_form(ell, b, lvl, p))


def graph_report(p: int, ell: int, table: CorrespondenceTable | None = None) -> dict:
    """Vertices with (name, j, level, form); edges with the composing form l^2.

    Horizontal arcs are oriented so that the annotation l has b >= 0:
    target form = reduce(source form * l^2).
    """
    from .ecfp import isogeny_graph

    table = table or orient(p)
    G = isogeny_graph(p, ell)
    verts = [
        {"id": r.index, "name": r.name, "j": r.j, "level": r.level.value, "form": list(r.form)} for r in table
    ]
    edges = []
    for u, v, lam in G.edges:
        ru, rv = table.records[u], table.records[v]
        l = None
        if lam is not None:
            l = edge_ideal_form(ell, lam, ru.level, p)
        elif ru.level is rv.level:
            # horizontal 2-isogeny: find its ideal among the admissible ones
            for b in admissible_bs(2, ru.level, p):
                if step_form(ru.form, 2, b, ru.level, p) == rv.form:
                    l = reduce(ell_form(2, b, ru.level, p))
                    break
        if l is not None and l.b < 0:
            u, v, l = v, u, inverse(l)
        edges.append({"source": u, "target": v, "annotation": f"{l}^2" if l else None})
    return {"p": p, "ell": ell, "vertices": verts, "edges": edges}


def graph_to_dot(report: dict) -> str:
    lines = [f'digraph "isogeny_{report["p"]}_{report["ell"]}" {{']
    for v in report["vertices"]:
        form = "(" + ",".join(map(str, v["form"])) + ")"
        lines.append(f'  {v["id"]} [label="{v["name"]}\\nj={v["j"]}\\n{form}", level="{v["level"]}"];')
    for e in report["edges"]:
        attr = f'label="{e["annotation"]}"' if e["annotation"] else "dir=none"
        lines.append(f'  {e["source"]} -> {e["target"]} [{attr}];')
    lines.append("}")
    return "\n".join(lines)
