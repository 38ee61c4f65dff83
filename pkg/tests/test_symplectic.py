import random

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EXAMPLE_1, EXAMPLE_2, example_1_taus, example_2_taus
from icosa_cm.cm_field import STANDARD_J, CMFieldSpec, integral_basis, riemann_gram, zeta_principal
from icosa_cm.symplectic import (
    N5_RELATION,
    HilbertPoint,
    NormalizationError,
    NotPrincipalError,
    PeriodMatrix,
    PeriodMatrixError,
    Sp4Element,
    apply_sp4,
    change_basis,
    generators,
    hilbert_from_N5,
    lattice_vectors,
    mu5,
    normalize_to_N5,
    period_matrix,
    relation_discriminant,
    relation_value,
    search_gamma,
    singular_relation,
    symplectic_reduce,
    transform_relation,
)

J = [list(r) for r in STANDARD_J]


def gram(spec):
    return riemann_gram(integral_basis(spec), zeta_principal(spec))


def congruent(U, M):
    return [[sum(U[a][i] * M[a][b] * U[b][j] for a in range(4) for b in range(4))
             for j in range(4)] for i in range(4)]


def omega(spec, U, prec=128):
    return period_matrix(change_basis(lattice_vectors(integral_basis(spec), prec + 32), U, prec), prec)


def test_reduce_standard_form_is_identity():
    assert symplectic_reduce(J) == [[int(i == j) for j in range(4)] for i in range(4)]


@pytest.mark.parametrize("ex", [EXAMPLE_1, EXAMPLE_2])
def test_reduce_and_witness_basis_are_symplectic(ex):
    M = gram(ex["spec"])
    assert congruent(symplectic_reduce(M), M) == J
    assert congruent(ex["basis_change"], M) == J


def test_reduce_rejects_non_principal():
    with pytest.raises(NotPrincipalError):
        symplectic_reduce([[2 * v for v in r] for r in J])


def _random_sp4(rng, length=6):
    gens = generators()
    g = Sp4Element.identity()
    for _ in range(length):
        g = rng.choice(gens) @ g
    return g


def test_reduce_random_congruent_forms():
    rng = random.Random(4)
    for _ in range(30):
        g = _random_sp4(rng, 8)
        # M = g^T J g is again unimodular skew
        M = congruent(g.m, J)
        assert congruent(symplectic_reduce(M), M) == J


def test_sp4_element_validation_and_inverse():
    with pytest.raises(ValueError):
        Sp4Element.from_flat([1] * 16)
    g = Sp4Element.from_flat(EXAMPLE_2["gamma"])
    assert g @ g.inverse() == Sp4Element.identity()


def test_period_matrix_example_1(prec128):
    Om = omega(EXAMPLE_1["spec"], EXAMPLE_1["basis_change"])
    assert abs(Om.t2.mid - Om.t2.mid) == 0
    assert Om.is_positive()


def test_period_matrix_wrong_order_detected(prec128):
    U = EXAMPLE_1["basis_change"]
    swapped = [[r[2], r[1], r[0], r[3]] for r in U]
    with pytest.raises(PeriodMatrixError):
        omega(EXAMPLE_1["spec"], swapped)


def test_witness_gamma_example_1(prec128):
    Om = omega(EXAMPLE_1["spec"], EXAMPLE_1["basis_change"])
    out, _ = normalize_to_N5(Om, gamma=Sp4Element.from_flat(EXAMPLE_1["gamma"]), prec=128)
    for got, want in zip((out.t1, out.t2, out.t3), example_1_taus()):
        assert abs(got.mid - want) < 1e-20
    assert abs(out.humbert_residual().mid) < 1e-30


def test_witness_gamma_example_2(prec128):
    Om = omega(EXAMPLE_2["spec"], EXAMPLE_2["basis_change"])
    out, _ = normalize_to_N5(Om, gamma=Sp4Element.from_flat(EXAMPLE_2["gamma"]), prec=128)
    for got, want in zip((out.t1, out.t2, out.t3), example_2_taus()):
        assert abs(got.mid - want) < 1e-20
    z = hilbert_from_N5(out, 128)
    assert z.z1.mid.imag > 0 and z.z2.mid.imag > 0


def test_wrong_gamma_reports_residual(prec128):
    Om = omega(EXAMPLE_1["spec"], EXAMPLE_1["basis_change"])
    with pytest.raises(NormalizationError) as err:
        normalize_to_N5(Om, gamma=Sp4Element.from_flat(EXAMPLE_2["gamma"]), prec=128)
    assert err.value.best_residual > 1e-3


def test_apply_identity_and_composition(prec128):
    rng = random.Random(1)
    Om = omega(EXAMPLE_2["spec"], EXAMPLE_2["basis_change"])
    assert abs(apply_sp4(Om, Sp4Element.identity(), 128).t2.mid - Om.t2.mid) < 1e-35
    for _ in range(5):
        g1, g2 = _random_sp4(rng, 3), _random_sp4(rng, 3)
        a = apply_sp4(apply_sp4(Om, g1, 128), g2, 128)
        b = apply_sp4(Om, g2 @ g1, 128)
        for k in ("t1", "t2", "t3"):
            assert abs(getattr(a, k).mid - getattr(b, k).mid) < 1e-25


def test_relation_transforms_with_gamma(prec128):
    Om = omega(EXAMPLE_2["spec"], EXAMPLE_2["basis_change"])
    rel = singular_relation(Om, 128)
    assert relation_discriminant(rel) == 5
    for g in generators():
        image = apply_sp4(Om, g, 128)
        assert abs(relation_value(transform_relation(rel, g), image).mid) < 1e-25


def test_search_reaches_target_relation():
    rng = random.Random(7)
    for _ in range(10):
        g = _random_sp4(rng, 5)
        rel = transform_relation(N5_RELATION, g)
        h = search_gamma(rel, depth=10)
        img = transform_relation(rel, h)
        assert img in (N5_RELATION, tuple(-x for x in N5_RELATION))


def test_search_rejects_wrong_discriminant():
    with pytest.raises(NormalizationError):
        search_gamma((1, 0, 1, 0, 0))


@pytest.mark.parametrize("spec", [CMFieldSpec(-1, 1, 2, 5), CMFieldSpec(-37, 2, 1, 5),
                                  CMFieldSpec(-3, 2, 1, 5), CMFieldSpec(-7, 1, 2, 5),
                                  CMFieldSpec(-11, 2, 1, 5), CMFieldSpec(-13, 2, 1, 5)])
def test_automatic_normalization(spec, prec128):
    M = gram(spec)
    Om = omega(spec, symplectic_reduce(M))
    out, g = normalize_to_N5(Om, prec=128)
    assert abs(out.humbert_residual().mid) < 1e-30
    z = hilbert_from_N5(out, 128)
    assert z.z1.mid.imag > 0 and z.z2.mid.imag > 0


def test_already_on_N5_returns_identity(prec128):
    z = HilbertPoint.from_values(mp.mpc(0.1, 1.2), mp.mpc(-0.3, 0.8))
    Om = mu5(z, 128)
    out, g = normalize_to_N5(Om, prec=128)
    assert g == Sp4Element.identity()


def test_mu5_diagonal_and_hilbert_of_diagonal(prec128):
    z = mp.mpc("0.2", "1.3")
    Om = mu5(HilbertPoint.from_values(z, z), 128)
    assert abs(Om.t2.mid) < 1e-35
    assert abs(Om.t1.mid - z) < 1e-35 and abs(Om.t3.mid - z) < 1e-35
    back = hilbert_from_N5(PeriodMatrix.from_values(z, 0, z), 128)
    assert abs(back.z1.mid - z) < 1e-35 and abs(back.z2.mid - z) < 1e-35


coord = st.floats(min_value=-3, max_value=3)
height = st.floats(min_value=0.1, max_value=4)


@settings(max_examples=30, deadline=None)
@given(coord, height, coord, height)
def test_mu5_round_trip(x1, y1, x2, y2):
    with mp.workprec(128):
        z = HilbertPoint.from_values(mp.mpc(x1, y1), mp.mpc(x2, y2))
        Om = mu5(z, 128)
        assert abs(Om.humbert_residual().mid) < mp.ldexp(1, -124) * 8
        back = hilbert_from_N5(Om, 128)
        tol = mp.ldexp(1, -120) * (1 + abs(z.z1.mid) + abs(z.z2.mid))
        assert abs(back.z1.mid - z.z1.mid) < tol and abs(back.z2.mid - z.z2.mid) < tol


def test_hilbert_from_off_locus_raises(prec128):
    with pytest.raises(NormalizationError):
        hilbert_from_N5(PeriodMatrix.from_values(mp.mpc(0, 2), mp.mpc(0, 0.1), mp.mpc(0, 1)), 128)
