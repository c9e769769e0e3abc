import csv
import io
import json

import pytest

import ssforms.correspondence as corr
from ssforms.correspondence import (
    Level,
    admissible_bs,
    check_action_compatibility,
    check_vertical,
    count_formula,
    ell_form,
    form_to_j,
    form_to_j_floor,
    form_to_j_surface,
    graph_report,
    graph_to_dot,
    j_to_form_pair,
    montgomery_model,
    order_tag,
    orient,
    step_form,
    verify_count,
)
from ssforms.ecfp import Curve, curve_from_paper_model, supersingular_j_invariants, twist, twist_parameter
from ssforms.errors import DomainError, SplitError, TheoremViolation
from ssforms.qform import (
    BQF,
    class_number,
    enumerate_reduced,
    inverse,
    is_ibukiyama_prime,
    is_principal_genus,
    non_principal_forms,
    principal_form,
    represented_values,
)

F = BQF


@pytest.fixture(scope="module")
def t83():
    return orient(83)


def test_form_to_j_examples():
    assert form_to_j_surface(F(1, 1, 21), 83) == 68
    assert form_to_j_surface(F(3, 1, 7), 83) == 50
    assert form_to_j_surface(F(3, -1, 7), 83) == 50
    assert form_to_j_floor(F(4, 0, 83), 83) == 68
    assert form_to_j_floor(F(3, 2, 111), 83) == 0
    assert form_to_j_floor(F(11, 6, 31), 83) == curve_from_paper_model(-11, 1, 83).j == 17


def test_form_to_j_preconditions():
    with pytest.raises(DomainError):
        form_to_j_floor(F(1, 0, 332), 83)  # principal genus
    with pytest.raises(DomainError):
        form_to_j_surface(F(1, 1, 8), 29)  # no surface for p = 1 mod 4
    with pytest.raises(DomainError):
        form_to_j_surface(F(1, 1, 21), 7)


def test_j_to_form_pair():
    assert set(j_to_form_pair(68, Level.SURFACE, 83)) == {F(1, 1, 21)}
    assert set(j_to_form_pair(50, Level.SURFACE, 83)) == {F(3, 1, 7), F(3, -1, 7)}
    assert set(j_to_form_pair(0, Level.FLOOR, 83)) == {F(3, 2, 111), F(3, -2, 111)}
    with pytest.raises(DomainError):
        j_to_form_pair(1, Level.SURFACE, 83)


def test_order_tags():
    t = order_tag(F(3, 1, 7), 83)
    assert (t.q, t.r, t.kind) == (3, 1, "O'")
    t = order_tag(F(3, 2, 111), 83)
    assert (t.q, t.r, t.kind) == (3, 1, "O")
    t = order_tag(F(1, 1, 21), 83)
    assert t.kind == "O'" and (t.r**2 + 83) % (4 * t.q) == 0


def test_table_83_matches_example(t83):
    expected = {
        (0, -1): F(1, 1, 21), (0, 1): F(4, 0, 83),
        (13, -1): F(3, 1, 7), (-13, -1): F(3, -1, 7),
        (11, 1): F(11, -6, 31), (-11, 1): F(11, 6, 31),
        (12, 1): F(7, 4, 48), (-12, 1): F(7, -4, 48),
        (6, 1): F(16, -12, 23), (-6, 1): F(16, 12, 23),
        (-13, 1): F(3, -2, 111), (13, 1): F(3, 2, 111),
    }
    assert len(t83) == 12
    got = {k: t83.form_of(curve_from_paper_model(*k, 83)) for k in expected}
    flipped = {k: inverse(v) for k, v in got.items()}
    assert got == expected or flipped == expected


def test_montgomery_models_83(t83):
    models = {tuple(corr.model_dict(r.curve).values()) for r in t83}
    assert models == {(0, -1), (0, 1), (13, -1), (-13, -1), (11, 1), (-11, 1), (12, 1), (-12, 1),
                      (6, 1), (-6, 1), (-13, 1), (13, 1)}
    assert montgomery_model(Curve(83, -1, 0)) == (0, -1)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23, 29, 31, 43, 47, 53, 59, 61, 71, 73, 79, 83, 89, 103, 107, 131])
def test_table_invariants(p):
    T = orient(p)
    forms = [r.form for r in T]
    want = set(non_principal_forms(p))
    if p % 4 == 3:
        want |= set(enumerate_reduced(-p))
    assert sorted(forms) == sorted(want)
    for r in T:
        assert r.form.discriminant == (-p if r.level is Level.SURFACE else -16 * p)
        assert form_to_j(r.form, p) == r.j == r.curve.j
        if r.level is Level.FLOOR:
            assert not is_principal_genus(r.form)
        if r.j != 1728 % p:
            assert T.form_of(twist(r.curve, twist_parameter(p))) == inverse(r.form)
    nsurf = sum(r.level is Level.SURFACE for r in T)
    assert nsurf == (class_number(-p) if p % 4 == 3 else 0)
    assert len(T) - nsurf == class_number(-16 * p) // 2


def test_small_tables():
    assert len(orient(7)) == 2
    T5 = orient(5)
    assert {r.j for r in T5} == {0}
    assert len(orient(419)) == 4 * class_number(-419)


def test_anchor_forms(t83):
    assert t83.form_of(Curve(83, -1, 0)) == principal_form(-83)
    assert t83.form_of(Curve(83, 1, 0)) == F(4, 0, 83)


def test_compatibility_examples(t83):
    E0 = t83.record_of(Curve(83, -1, 0))
    assert check_action_compatibility(t83, E0, 3, 1)
    assert step_form(E0.form, 3, 1, Level.SURFACE, 83) == F(3, -1, 7)
    G0 = t83.record_of(Curve(83, 1, 0))
    assert ell_form(3, 1, Level.FLOOR, 83) == F(3, 2, 111)
    assert check_action_compatibility(t83, G0, 3, 1)
    assert check_action_compatibility(t83, G0, 3, -1)
    # the principal form squared fixes a class
    f = E0.form
    e = principal_form(-83)
    assert corr.reduce(corr.compose(f, corr.compose(e, e))) == f


def test_compatibility_all_83(t83):
    for ell in (3, 7):
        for r in t83:
            for b in admissible_bs(ell, r.level, 83):
                assert check_action_compatibility(t83, r, ell, b)


def test_flip_breaks_compatibility(t83):
    # the orientation is not cosmetic: inverting every form breaks the kernel/ideal match
    flipped = t83.flip()
    E1 = flipped.record_of(curve_from_paper_model(13, -1, 83))
    assert not check_action_compatibility(flipped, E1, 3, 1)
    assert not check_action_compatibility(flipped, E1, 3, -1)
    assert flipped.flip().form_of(E1.curve) == t83.form_of(E1.curve)


def test_ell_form_rules():
    assert ell_form(2, 1, Level.FLOOR, 29) == F(8, -4, 15)
    with pytest.raises(SplitError):
        ell_form(2, 1, Level.FLOOR, 83)
    with pytest.raises(SplitError):
        ell_form(3, 2, Level.SURFACE, 83)
    assert admissible_bs(2, Level.SURFACE, 83) == []
    assert admissible_bs(2, Level.SURFACE, 431) == [1, -1]


def test_vertical_examples(t83):
    E0 = t83.record_of(Curve(83, -1, 0))
    assert check_vertical(t83, E0)
    E1 = t83.record_of(curve_from_paper_model(13, -1, 83))
    assert check_vertical(t83, E1)
    with pytest.raises(DomainError):
        check_vertical(t83, t83.record_of(Curve(83, 1, 0)))
    T7 = orient(7)
    assert check_vertical(T7, T7.record_of(Curve(7, -1, 0)))


def test_verify_count_examples():
    assert count_formula(83) == 6 and verify_count(83)
    assert count_formula(13) == 1 and verify_count(13)
    assert count_formula(7) == 1 and verify_count(7)
    assert count_formula(5) == len(supersingular_j_invariants(5)) == 1


def test_tag_consistency():
    # two different Ibukiyama primes represented by one form point to the same j
    for p in (83, 107, 131):
        T = orient(p)
        for r in T:
            qs = [q for q in represented_values(r.form, 4000) if is_ibukiyama_prime(q, p)][:2]
            assert len(qs) == 2
            assert r.tag.q == qs[0]
            assert form_to_j(r.form, p) == r.j


def test_theorem_violation_aborts(monkeypatch):
    monkeypatch.setattr(corr, "common_root", lambda *a, **k: 1)
    with pytest.raises(TheoremViolation):
        orient(83)


def test_exports(t83):
    data = json.loads(t83.to_json())
    assert len(data) == 12
    rec = next(d for d in data if d["form"] == [1, 1, 21])
    assert rec == {"name": "E(68)", "j": 68, "level": "surface", "form": [1, 1, 21],
                   "tag": {"q": 131, "r": 21, "kind": "O'"}, "curve": {"a2": 0, "a4": -1}}
    rows = list(csv.DictReader(io.StringIO(t83.to_csv())))
    assert len(rows) == 12 and rows[0].keys() >= {"j", "level", "a", "b", "c", "q", "r", "kind"}
    assert "(3,1,7)" in t83.to_text()


def test_graph_report_83():
    rep = graph_report(83, 3)
    anns = {e["annotation"] for e in rep["edges"]}
    assert anns == {"(3,1,7)^2", "(3,2,111)^2"}
    forms = {v["id"]: F(*v["form"]) for v in rep["vertices"]}
    for e in rep["edges"]:
        a, b, c = (int(x) for x in e["annotation"][1:-3].split(","))
        l = F(a, b, c)
        src, dst = forms[e["source"]], forms[e["target"]]
        assert corr.reduce(corr.compose(src, corr.compose(l, l))) == dst
    dot = graph_to_dot(rep)
    assert dot.startswith('digraph "isogeny_83_3"') and dot.count("->") == 12
    rep2 = graph_report(83, 2)
    assert all(e["annotation"] is None for e in rep2["edges"]) and len(rep2["edges"]) == 9
