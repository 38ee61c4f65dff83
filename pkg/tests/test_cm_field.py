from fractions import Fraction

import pytest

from _specs import random_specs
from icosa_cm.cm_field import (
    STANDARD_J,
    CMFieldSpec,
    InvalidFieldSpec,
    classify,
    closed_form_gram,
    field_invariants,
    integral_basis,
    pfaffian,
    riemann_gram,
    zeta_for_kappa,
    zeta_principal,
)
from icosa_cm.qfield import QuartElem, trace

M2 = [[0, 0, 1, 0], [0, 0, 1, 1], [-1, -1, 0, 0], [0, -1, 0, 0]]
M5 = [[0, 0, 1, 1], [0, 0, 1, 2], [-1, -1, 0, 1], [-1, -2, -1, 0]]


@pytest.mark.parametrize("spec,case", [
    ((-1, 1, 2, 5), "ii"),
    ((-37, 2, 1, 5), "v"),
    ((-1, 2, 1, 5), "v"),
    ((-3, 2, 1, 5), "iii"),
    ((-1, 1, 1, 2), "i"),
    ((-3, 2, 1, 5), "iii"),
])
def test_classify(spec, case):
    assert classify(CMFieldSpec(*spec)) == case


@pytest.mark.parametrize("bad", [(-2, 1, 2, 5), (-9, 1, 2, 5), (-5, 1, 2, 5), (-1, 1, 2, 6),
                                 (-1, 3, 3, 18), (-1, 0, 1, 1)])
def test_invalid_specs_rejected(bad):
    with pytest.raises(InvalidFieldSpec):
        classify(CMFieldSpec(*bad))


def test_non_cm_rejected_when_required():
    with pytest.raises(InvalidFieldSpec):
        CMFieldSpec(3, 1, 2, 5).validate(require_cm=True)


def test_field_invariants():
    inv = field_invariants(CMFieldSpec(-37, 2, 1, 5))
    assert (inv.conductor, inv.discriminant) == (185, 171125)
    inv = field_invariants(CMFieldSpec(-1, 1, 2, 5))
    assert (inv.conductor, inv.discriminant) == (40, 8000)
    assert field_invariants(CMFieldSpec(-1, 2, 1, 5)).conductor == 5


def test_integral_basis_tables():
    f = (-1, 1, 2, 5)
    h, q = Fraction(1, 2), Fraction(1, 4)
    assert [b.coords for b in integral_basis(CMFieldSpec(*f))] == [
        (1, 0, 0, 0), (h, h, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    assert [b.coords for b in integral_basis(CMFieldSpec(-37, 2, 1, 5))] == [
        (1, 0, 0, 0), (h, h, 0, 0), (q, q, q, -q), (q, -q, q, q)]
    assert [b.coords for b in integral_basis(CMFieldSpec(-1, 1, 1, 2))] == [
        (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]


@pytest.mark.parametrize("case", ["i", "ii", "iii", "iv", "v"])
def test_basis_products_have_integral_traces(case):
    for spec in random_specs(case, 5, seed=11):
        basis = integral_basis(spec)
        for x in basis:
            for y in basis:
                assert trace(x * y).denominator == 1


def test_zeta_principal_values():
    z = zeta_principal(CMFieldSpec(-1, 1, 2, 5))
    assert z.kappa == 20 and z.zeta == QuartElem.alpha((-1, 1, 2, 5)) / 20
    assert zeta_principal(CMFieldSpec(-37, 2, 1, 5)).kappa == 185
    with pytest.raises(NotImplementedError):
        zeta_principal(CMFieldSpec(-1, 1, 4, 17))


def test_principal_gram_matrices():
    s2, s5 = CMFieldSpec(-1, 1, 2, 5), CMFieldSpec(-37, 2, 1, 5)
    assert riemann_gram(integral_basis(s2), zeta_principal(s2)) == M2
    assert riemann_gram(integral_basis(s5), zeta_principal(s5)) == M5
    assert pfaffian(M2) == 1 and pfaffian(M5) == 1


def test_non_integral_gram_raises():
    s = CMFieldSpec(-1, 1, 2, 5)
    with pytest.raises(ValueError):
        riemann_gram(integral_basis(s), zeta_for_kappa(s, 7))


def test_pfaffian():
    assert pfaffian(STANDARD_J) == 1
    assert pfaffian([[2 * v for v in r] for r in STANDARD_J]) == 4
    with pytest.raises(ValueError):
        pfaffian([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


@pytest.mark.parametrize("case", ["i", "ii", "iii", "iv", "v"])
def test_gram_matches_closed_form_for_random_kappa(case):
    for i, spec in enumerate(random_specs(case, 15, seed=3)):
        kappa = Fraction((-1) ** i * (i + 2), 3 + i)
        basis = integral_basis(spec)
        assert riemann_gram(basis, zeta_for_kappa(spec, kappa), exact=True) == closed_form_gram(spec, kappa)


def test_case_iv_does_not_occur_for_delta_5():
    # (B, C) = (2, 1) needs A = C (mod 4) and A + B = 1 (mod 4) at once
    cases = {classify(CMFieldSpec(A, B, C, 5))
             for A in range(-399, 0, 2) if A % 5 and all(A % (p * p) for p in (3, 7, 11, 13, 17, 19))
             for B, C in ((1, 2), (2, 1))}
    assert cases == {"ii", "iii", "v"}


@pytest.mark.parametrize("case", ["ii", "iii", "v"])
def test_principal_pfaffian_for_delta_5(case):
    for spec in random_specs(case, 20, seed=5, delta5=True):
        M = riemann_gram(integral_basis(spec), zeta_principal(spec))
        assert M == [[int(v) for v in r] for r in closed_form_gram(spec, zeta_principal(spec).kappa)]
        assert pfaffian(M) == 1


def test_conductor_primes_divide_discriminant():
    for case in ("i", "ii", "iii", "iv", "v"):
        for spec in random_specs(case, 10, seed=9):
            inv = field_invariants(spec)
            n = inv.conductor
            for p in range(2, 400):
                if n % p == 0:
                    assert inv.discriminant % p == 0
