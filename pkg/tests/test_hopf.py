"""Tests for the box-structure diagram checkers: positive runs on the
circle homology of exterior coalgebras and on the cofree tensor
example, plus fault injections confirming that each family of checks
actually catches a broken structure map."""

import pytest

from cohh import hopf, structure as st
from cohh.coalgebra import exterior_coalgebra, polynomial_coalgebra
from cohh.comodule import BoxStructure, polynomial_multiplication, \
    tensor_box_structure
from cohh.fields import GF, QQ
from cohh.graded import GradedMap


@pytest.fixture(scope="module")
def box_q():
    D = exterior_coalgebra([3], QQ)
    box, cs, ok = st.cohh_box_structure(D, 3, 12, with_antipode=True)
    assert ok
    return box


@pytest.fixture(scope="module")
def box_f2():
    D = exterior_coalgebra([3], GF(2))
    box, cs, ok = st.cohh_box_structure(D, 3, 12, with_antipode=True)
    assert ok
    return box


def clone_map(m: GradedMap) -> GradedMap:
    out = GradedMap(m.source, m.target)
    for label, col in m.columns.items():
        out.set_column(label, dict(col))
    return out


def clone_box(box: BoxStructure) -> BoxStructure:
    return BoxStructure(
        base=box.base, carrier=box.carrier,
        comult=clone_map(box.comult), counit=clone_map(box.counit),
        unit=clone_map(box.unit), mult=clone_map(box.mult),
        antipode=clone_map(box.antipode) if box.antipode else None,
        name=box.name)


def test_circle_homology_is_a_box_hopf_algebra(box_q, box_f2):
    for box in (box_q, box_f2):
        report = hopf.full_hopf_report(box, max_degree=12, s_max=3)
        assert report.ok, str(report)


def test_two_generator_circle_homology_passes_mod_2():
    D = exterior_coalgebra([3, 5], GF(2))
    box, cs, ok = st.cohh_box_structure(D, 2, 10, with_antipode=True)
    assert ok
    report = hopf.full_hopf_report(box, max_degree=10, s_max=2)
    assert report.ok, str(report)


def test_cofree_tensor_box_structure_passes():
    C = exterior_coalgebra([3], GF(3))
    D2 = polynomial_coalgebra([2], GF(3), truncation=6)
    box = tensor_box_structure(C, D2, polynomial_multiplication(D2))
    report = hopf.full_hopf_report(box, max_degree=6)
    assert report.ok, str(report)


def test_fault_broken_comultiplication_is_caught(box_f2):
    bad = clone_box(box_f2)
    one = ("h", 0, 0, 0)
    sx = ("h", 1, 3, 0)
    col = dict(bad.comult.column(sx))
    # spurious non-primitive term of the right degree
    col[(("h", 0, 3, 0), one)] = GF(2).one
    bad.comult.set_column(sx, col)
    report = hopf.check_box_coalgebra(bad, max_degree=12)
    assert not report.ok


def test_fault_broken_counit_is_caught(box_f2):
    bad = clone_box(box_f2)
    bad.counit.set_column(("h", 0, 3, 0), {})
    report = hopf.check_box_coalgebra(bad, max_degree=12)
    names = [c.name for c in report.failures]
    assert any("counit law" in n for n in names)


def test_fault_broken_multiplication_is_caught(box_f2):
    bad = clone_box(box_f2)
    sx = ("h", 1, 3, 0)
    bad.mult.set_column((sx, sx), {})
    report = hopf.check_box_bialgebra(bad, max_degree=12, s_max=3)
    assert not report.ok


def test_fault_broken_unit_is_caught(box_q):
    bad = clone_box(box_q)
    bad.unit.set_column("x3", {("h", 0, 3, 0): QQ.coerce(2)})
    algebra = hopf.check_box_algebra(bad, max_degree=12, s_max=3)
    bialgebra = hopf.check_box_bialgebra(bad, max_degree=12, s_max=3)
    assert not algebra.ok or not bialgebra.ok


def test_fault_broken_antipode_is_caught(box_q):
    bad = clone_box(box_q)
    # the identity is not the antipode in characteristic zero
    bad.antipode = GradedMap.identity(bad.carrier.space, QQ)
    report = hopf.check_antipode(bad, max_degree=12)
    assert not report.ok


def test_fault_sign_error_in_antipode_is_caught(box_q):
    bad = clone_box(box_q)
    f = QQ
    sx = ("h", 1, 3, 0)
    # flip the sign on one suspension class only
    bad.antipode.set_column(sx, {sx: f.one})
    report = hopf.check_antipode(bad, max_degree=12)
    assert not report.ok


def test_leibniz_holds_for_the_zero_differential(box_f2):
    report = hopf.check_leibniz(box_f2, lambda h: {}, max_degree=12, s_max=3)
    assert report.ok


def test_regular_structure_on_the_base_itself_passes():
    from cohh.comodule import regular_comodule
    from cohh.graded import tensor_space

    D = exterior_coalgebra([3, 5], GF(2))
    f = D.field
    carrier = regular_comodule(D)
    space = carrier.space
    pair_space = tensor_space(space, space, D.max_degree)
    comult = GradedMap(space, pair_space)
    counit = GradedMap(space, D.space)
    unit = GradedMap(D.space, space)
    mult = GradedMap(pair_space, space)
    for d in space.degree_of:
        comult.set_column(d, dict(D.comult_of(d)))
        counit.set_column(d, {d: f.one})
        unit.set_column(d, {d: f.one})
    for (a, b) in pair_space.degree_of:
        e = D.counit_of(a)
        mult.set_column((a, b), {b: e} if e else {})
    box = BoxStructure(D, carrier, comult=comult, counit=counit,
                       unit=unit, mult=mult, name=D.name)
    report = hopf.full_hopf_report(box)
    assert report.ok, str(report)


def test_co_leibniz_holds_for_the_zero_differential(box_f2):
    report = hopf.check_co_leibniz(box_f2, lambda h: {}, max_degree=12)
    assert report.ok


def test_co_leibniz_rejects_a_broken_differential(box_f2):
    f = GF(2)

    def fake_diff(h):
        # a primitive target for a non-primitively-coacting source
        if h == ("h", 1, 6, 0):
            return {("h", 1, 3, 0): f.one}
        return {}

    report = hopf.check_co_leibniz(box_f2, fake_diff, max_degree=12)
    assert not report.ok


def test_leibniz_rejects_a_non_derivation(box_f2):
    f = GF(2)
    one = ("h", 0, 0, 0)

    def fake_diff(h):
        # sends the suspension class to the unit class: cannot be a
        # derivation against the free multiplication
        if h == ("h", 1, 3, 0):
            return {("h", 0, 3, 0): f.one}
        return {}

    report = hopf.check_leibniz(box_f2, fake_diff, max_degree=12, s_max=3)
    assert not report.ok
