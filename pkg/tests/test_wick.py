import pytest

from causalqed.wick import (ONE, ZERO, ContractionError, Factor, FieldLeg,
                            WickMonomial, WickPolynomial, free_field,
                            operator_product, pair_factor, qed_vertex,
                            scalar_vertex, vacuum_expectation, wick_product)


def test_free_field_has_two_legs():
    phi = free_field("scalar", "x")
    assert len(phi) == 2
    assert {m.legs[0].character for m in phi.terms} == {"cre", "ann"}


def test_unknown_field_rejected():
    with pytest.raises(ValueError):
        free_field("gluon", "x")


def test_wick_product_multiplies_kernels_without_contraction():
    phi = free_field("scalar", "x")
    sq = wick_product([phi, phi])
    # :phi^2: has cre-cre, cre-ann (merged), ann-ann -> 3 monomials
    assert len(sq) == 3
    assert all(not m.factors for m in sq.terms)


def test_two_point_function_is_single_pairing():
    phi_x = free_field("scalar", "x")
    phi_y = free_field("scalar", "y")
    prod = operator_product(phi_x, phi_y)
    vac = vacuum_expectation(prod)
    assert len(vac) == 1
    (term,) = vac.terms
    assert term.coeff == pytest.approx(1.0)
    assert term.factors == (Factor("pair", "D+", ("x", "y", "", "")),)


def test_fermion_pairings_are_directional():
    psi, psibar = free_field("psi", "x"), free_field("psibar", "y")
    vac1 = vacuum_expectation(operator_product(psi, psibar))
    vac2 = vacuum_expectation(operator_product(psibar, free_field("psi", "y")))
    assert vac1.terms[0].factors[0].name == "S+"
    assert vac2.terms[0].factors[0].name == "Sbar+"


def test_incompatible_contraction_raises():
    a = FieldLeg("scalar", "ann", "x")
    b = FieldLeg("photon", "cre", "y")
    with pytest.raises(ContractionError):
        pair_factor(a, b)


def test_identical_fermi_legs_vanish():
    leg = FieldLeg("psi", "cre", "x", "a")
    poly = WickPolynomial([WickMonomial(1.0, (), (leg, leg))])
    assert poly.is_zero()


def test_qed_vertex_structure():
    v = qed_vertex("x")
    assert len(v) == 8  # 2^3 emission/absorption choices
    assert all(any(f.name == "gamma" for f in m.factors) for m in v.terms)
    assert all(len(m.legs) == 3 for m in v.terms)


def test_scalar_vertex_factorial():
    v = scalar_vertex("x", power=3)
    # the pure-emission monomial keeps the bare 1/3! kernel; mixed
    # monomials are merged with their multinomial multiplicity
    pure = [m for m in v.terms
            if all(l.character == "cre" for l in m.legs) and len(m.legs) == 3]
    assert len(pure) == 1
    assert pure[0].coeff == pytest.approx(1.0 / 6.0)
    mixed = max(abs(m.coeff) for m in v.terms)
    assert mixed == pytest.approx(3.0 / 6.0)


def test_polynomial_algebra():
    phi = free_field("scalar", "x")
    assert (phi - phi).is_zero()
    assert (phi + phi) == phi.scaled(2.0)
    assert ZERO.is_zero()
    assert len(ONE) == 1


def test_relabel_moves_slots_and_factor_args():
    prod = operator_product(free_field("scalar", "x"), free_field("scalar", "y"))
    renamed = prod.relabel({"x": "u", "y": "v"})
    direct = operator_product(free_field("scalar", "u"), free_field("scalar", "v"))
    assert renamed == direct


def test_json_roundtrip():
    prod = operator_product(qed_vertex("x"), qed_vertex("y"))
    again = WickPolynomial.from_json(prod.to_json())
    assert again == prod


def test_chopped_drops_residue():
    phi = free_field("scalar", "x")
    noisy = phi + phi.scaled(1e-15)
    cleaned = noisy.chopped(1e-12)
    assert cleaned == phi.scaled(1.0 + 1e-15).chopped(0.0)
    tiny = phi.scaled(1e-15) - phi.scaled(1e-15)
    assert tiny.is_zero()


def test_operator_product_distributes_over_sums():
    a = free_field("scalar", "x")
    b = free_field("scalar", "y")
    c = free_field("scalar", "z")
    lhs = operator_product(a, b + c)
    rhs = operator_product(a, b) + operator_product(a, c)
    assert lhs == rhs
