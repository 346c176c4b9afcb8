"""Axiom checker: the finite backend passes everything, the symmetric
fragment fails exactly effectivity with the coordinate-swap witness."""

import pytest

from oligoperm.gset import LINE, SYM, preset_backend
from oligoperm.gset.pregalois import (
    internal_equivalence_relations,
    pregalois_check,
    quotient_of_relation,
)


@pytest.fixture(scope="module")
def sym_report():
    return pregalois_check(SYM, 3)


@pytest.fixture(scope="module")
def line_report():
    return pregalois_check(LINE, 3)


@pytest.fixture(scope="module")
def finite_report():
    return pregalois_check(preset_backend("S3"), 6)


def test_finite_passes_all(finite_report):
    assert finite_report.passed, [r.name for r in finite_report.failures()]


def test_sym_fails_exactly_effectivity(sym_report):
    failing = [r.name for r in sym_report.failures()]
    assert failing == ["h-effective-equivalence-relations"]


def test_sym_witness_is_swap_relation(sym_report):
    witness = sym_report.result("h-effective-equivalence-relations").witness
    assert witness["atom"] == "sym:inj[2]"
    assert witness["relation-orbits"] == "[1>1,2>2], [1>2,2>1]"


def test_line_first_seven_axioms_pass(line_report):
    for r in line_report.results:
        if not r.name.startswith("h-"):
            assert r.passed, r.name


def test_sym_relations_on_pairs():
    x = SYM.atom_of_arity(2)
    relations = set(internal_equivalence_relations(SYM, x))
    assert frozenset({"[1>1,2>2]"}) in relations  # the diagonal
    assert frozenset({"[1>1,2>2]", "[1>2,2>1]"}) in relations  # same set
    assert frozenset({"[1>1]", "[1>1,2>2]"}) in relations  # equal first coord
    full = frozenset(o.label for o in SYM.product_decompose(x, x))
    assert full in relations


def test_sym_quotients():
    x = SYM.atom_of_arity(2)
    diag = frozenset({"[1>1,2>2]"})
    found = quotient_of_relation(SYM, x, diag)
    assert found is not None and found[0].degree == 2  # the identity map

    same_first = frozenset({"[1>1,2>2]", "[1>1]"})
    found = quotient_of_relation(SYM, x, same_first)
    assert found is not None and found[0].degree == 1

    swap = frozenset({"[1>1,2>2]", "[1>2,2>1]"})
    assert quotient_of_relation(SYM, x, swap) is None


def test_finite_relations_all_effective():
    backend = preset_backend("S3")
    regular = backend.atoms_up_to(6)[-1]
    for relation in internal_equivalence_relations(backend, regular):
        assert quotient_of_relation(backend, regular, relation) is not None


def test_finite_relation_count_matches_subgroups():
    # relations on the regular orbit = overgroups of the point stabilizer;
    # for the regular G-set that is all subgroups of S3
    backend = preset_backend("S3")
    regular = backend.atoms_up_to(6)[-1]
    assert len(internal_equivalence_relations(backend, regular)) == 6
