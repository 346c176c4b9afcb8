"""Measure solving, evaluation and the axiom checker."""

from fractions import Fraction
from math import factorial

import pytest

from oligoperm.coeff import RATIONAL, Scalar, falling_factorial, one
from oligoperm.errors import UnknownAtom
from oligoperm.gset import LINE, SYM, preset_backend
from oligoperm.measure import (
    Measure,
    check_measure_axioms,
    classify_measure,
    solve_measures,
)


@pytest.fixture(scope="module")
def sym_family():
    return solve_measures(SYM, 4)


@pytest.fixture(scope="module")
def line_family():
    return solve_measures(LINE, 4)


@pytest.fixture(scope="module")
def s3():
    return preset_backend("S3")


@pytest.fixture(scope="module")
def s3_measure(s3):
    return solve_measures(s3, 6).generic()


def count_injective_tuples(n_points, arity):
    return factorial(n_points) // factorial(n_points - arity)


def test_sym_family_is_falling_factorials(sym_family):
    assert sym_family.parameters == ("t",)
    assert sym_family.residual == ()
    t = Scalar.variable(sym_family.field)
    for n in range(5):
        atom = SYM.atom_of_arity(n)
        assert sym_family.atom_values[atom] == falling_factorial(sym_family.field, t, n)


def test_sym_family_counting_oracle(sym_family):
    # specializing the parameter to N recovers counting in the N-point model
    for n_points in (5, 7):
        measure = sym_family.specialize(n_points)
        for arity in range(5):
            expected = Fraction(count_injective_tuples(n_points, arity))
            got = measure.mu_atom(SYM.atom_of_arity(arity))
            assert got == Scalar.from_fraction(RATIONAL, expected)


def test_line_unique_measure(line_family):
    assert line_family.parameters == ()
    assert line_family.residual == ()
    for n in range(5):
        value = line_family.atom_values[LINE.atom_of_arity(n)]
        assert value == Scalar.from_int(line_family.field, (-1) ** n)
    assert line_family.fiber_values["ray"] == Scalar.from_int(line_family.field, -1)
    assert line_family.fiber_values["interval"] == Scalar.from_int(line_family.field, -1)


def test_line_hand_oracle_equations(line_family):
    # the three point-cut decompositions, checked by hand:
    #   line = ray . point . ray, ray = ray . point . interval,
    #   interval = interval . point . interval
    m = line_family.atom_values[LINE.atom_of_arity(1)]
    r = line_family.fiber_values["ray"]
    i = line_family.fiber_values["interval"]
    unit = one(line_family.field)
    assert m == r + r + unit
    assert r == r + i + unit
    assert i == i + i + unit


def test_finite_measure_is_counting(s3, s3_measure):
    family = solve_measures(s3, 6)
    assert family.parameters == ()
    assert family.residual == ()
    for atom in s3.atoms_up_to(6):
        assert s3_measure.mu_atom(atom) == Scalar.from_int(s3_measure.field, atom.degree)


def test_mu_object_examples(sym_family, line_family):
    mu_t = sym_family.generic()
    t = Scalar.variable(sym_family.field)
    assert mu_t.mu_atom(SYM.atom_of_arity(2)) == t * (t - 1)
    two_points = SYM.object_of([SYM.atom_of_arity(1), SYM.atom_of_arity(1)])
    assert mu_t.mu_object(two_points) == 2 * t

    mu_line = line_family.generic()
    assert mu_line.mu_atom(LINE.atom_of_arity(2)) == one(line_family.field)


def test_mu_map_examples(sym_family, line_family):
    mu_t = sym_family.generic()
    t = Scalar.variable(sym_family.field)
    a2, a1 = SYM.atom_of_arity(2), SYM.atom_of_arity(1)
    select_first = [m for m in SYM.hom_atoms(a2, a1) if m.data == (1,)][0]
    assert mu_t.mu_map(select_first) == t - 1
    assert mu_t.mu_map(SYM.identity_map(a2)) == one(sym_family.field)

    mu_line = line_family.generic()
    b3, b2 = LINE.atom_of_arity(3), LINE.atom_of_arity(2)
    drop_middle = [m for m in LINE.hom_atoms(b3, b2) if m.data == (1, 3)][0]
    assert mu_line.mu_map(drop_middle) == Scalar.from_int(line_family.field, -1)


def test_mu_map_chain_rule(sym_family):
    mu_t = sym_family.generic()
    a3, a2, a1 = (SYM.atom_of_arity(k) for k in (3, 2, 1))
    for f in SYM.hom_atoms(a3, a2):
        for g in SYM.hom_atoms(a2, a1):
            composite = SYM.compose_maps(g, f)
            assert mu_t.mu_map(composite) == mu_t.mu_map(f) * mu_t.mu_map(g)


def test_axioms_pass(sym_family, line_family, s3, s3_measure):
    assert check_measure_axioms(sym_family.generic(), 4).passed
    assert check_measure_axioms(line_family.generic(), 4).passed
    assert check_measure_axioms(s3_measure, 6).passed


def test_axioms_pass_after_specialization(sym_family):
    assert check_measure_axioms(sym_family.specialize(7), 4).passed


def test_perturbed_measure_fails_with_product_witness(sym_family):
    mu_t = sym_family.generic()
    delta = one(sym_family.field)
    mutant = mu_t.with_perturbed_atom(SYM.atom_of_arity(2), delta)
    report = check_measure_axioms(mutant, 3)
    assert not report.passed
    failures = [r for r in report.results
                if not r.passed and r.name.startswith("product")]
    witness = failures[0].witness
    t = Scalar.variable(sym_family.field)
    assert witness["pair"] == "sym:inj[1] x sym:inj[1]"
    assert witness["lhs"] == (t * t).render()
    assert witness["rhs"] == (t + t * (t - 1) + 1).render()


def test_counting_measure_passes_for_c2_on_four_points():
    backend = preset_backend("C2x4")
    family = solve_measures(backend, 4)
    assert family.parameters == ()
    assert check_measure_axioms(family.generic(), 4).passed


def test_classification(sym_family, line_family):
    assert classify_measure(sym_family.generic(), 3) == {
        "regular": True, "normal_within_bound": True}
    at_two = sym_family.specialize(2)
    verdict = classify_measure(at_two, 4)
    assert verdict["regular"] is False
    assert classify_measure(line_family.generic(), 3)["regular"] is True


def test_inconsistent_system_raises():
    # a backend whose point-cut relations force 0 = 1 has no measure
    from oligoperm.errors import InconsistentSystem
    from oligoperm.gset.base import Backend, LinearRelation

    class Contradictory(Backend):
        backend_id = "bad"

        def fiber_classes(self, depth):
            return ["c"]

        def fiber_decompositions(self, depth):
            return [LinearRelation("c", (("c", 1),), 1)]

    with pytest.raises(InconsistentSystem):
        solve_measures(Contradictory(), 2)


def test_unknown_atom_extension(sym_family):
    # lazy chain extension fills atoms beyond the solved table, and reports
    # UNKNOWN_ATOM when the fiber table runs out
    mu_t = sym_family.generic()
    deep = SYM.atom_of_arity(8)
    value = mu_t.mu_atom(deep)
    t = Scalar.variable(sym_family.field)
    assert value == falling_factorial(sym_family.field, t, 8)

    small = Measure(SYM, sym_family.field,
                    {}, {"omega-minus[0]": t})
    with pytest.raises(UnknownAtom):
        small.mu_atom(SYM.atom_of_arity(3))
