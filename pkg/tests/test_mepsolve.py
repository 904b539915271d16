"""Tests for the matrix polynomial, its solvers and the realization driver."""
import numpy as np
import pytest

from src.errors import InvalidInputError, NoRealSolutionError
from src.mepsolve import (
    AffineSpectrum,
    MatrixPolynomial,
    assemble_direct,
    build_block_macaulay,
    build_matrix_polynomial,
    linearize,
    monomials,
    realize,
    solve_block_macaulay,
    solve_univariate
)
from src.mepsolve import realization as realization_module
from src.mepsolve.macaulay import GapInfo, find_gap, increment_stable
from src.mepsolve.matrix_polynomial import monomial_count
from src.optimality import RankDiagnostic, filtered_hankel_rank
from src.signalmodel import FixedPoleSet, ModelPoly, poly_from_roots, poly_mul
from tests.conftest import best_single_pole, geometric


def test_monomials_are_graded():
    assert monomials(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert len(monomials(3, 4)) == monomial_count(3, 4) == 35


@pytest.mark.parametrize("q, fixed", [
    (1, ()),
    (1, (0.5,)),
    (2, ()),
    (2, (0.6 + 0.3j, 0.6 - 0.3j)),
])
def test_expansion_matches_direct_assembly(rng, q, fixed):
    y = rng.standard_normal(13)
    c = poly_from_roots(FixedPoleSet(fixed))
    mp = build_matrix_polynomial(y, c, q)
    n = q + len(fixed)
    assert mp.shape == (13 - n, 13 - 2 * n + len(fixed) + 1)
    assert mp.degree == 3

    for _ in range(3):
        u = rng.standard_normal(q)
        np.testing.assert_allclose(
            mp.evaluate(u), assemble_direct(y, c, ModelPoly.monic(u)), rtol=1e-10, atol=1e-10
        )


def test_derivative_matches_finite_difference(rng):
    y = rng.standard_normal(11)
    mp = build_matrix_polynomial(y, ModelPoly.unit(), 2)
    u = rng.standard_normal(2)
    step = 1e-5
    for var in range(2):
        delta = np.zeros(2)
        delta[var] = step
        numeric = (mp.evaluate(u + delta) - mp.evaluate(u - delta)) / (2 * step)
        np.testing.assert_allclose(mp.derivative(var, u), numeric, rtol=1e-6, atol=1e-6)


def test_problem_size_checks(motivational):
    with pytest.raises(InvalidInputError):
        realize(motivational, 4)
    with pytest.raises(InvalidInputError):
        realize(motivational, 1, FixedPoleSet((0.5,)))
    with pytest.raises(InvalidInputError):
        realize(motivational, 2, FixedPoleSet((0.5 + 0.5j,)))


def test_linearization_size(motivational):
    mp = build_matrix_polynomial(motivational, poly_from_roots(FixedPoleSet((-0.9557,))), 1)
    pencil_a, pencil_b = linearize(mp)
    assert pencil_a.shape == pencil_b.shape == (3 * (7 - 2) - 2, 3 * (7 - 2) - 2)


def test_univariate_eigenvalues_drop_the_rank(motivational):
    mp = build_matrix_polynomial(motivational, ModelPoly.unit(), 1)
    spectrum = solve_univariate(mp)
    assert isinstance(spectrum, AffineSpectrum)
    assert spectrum.eigenvalues.shape[1] == 1
    for eigenvalue, vector in spectrum.pairs():
        if abs(eigenvalue[0]) > 10:
            continue
        matrix = mp.evaluate(eigenvalue)
        residual = np.linalg.norm(matrix @ vector) / (np.linalg.norm(matrix) * np.linalg.norm(vector))
        assert residual <= 1e-6


def test_order_one_fit_of_the_motivational_data(motivational):
    result = realize(motivational, 1)
    pole, misfit = best_single_pole(motivational.values)
    assert result.solver == "companion"
    assert result.best.poles[0].real == pytest.approx(pole, abs=1e-5)
    assert result.best.misfit_sq == pytest.approx(misfit, rel=1e-8)
    assert pole == pytest.approx(0.9557, abs=5e-4)
    assert misfit == pytest.approx(6.2872, abs=5e-4)


def test_order_one_candidates_contain_the_true_pole():
    y = geometric(-0.8, 9, scale=1.5)
    result = realize(y, 1)
    assert min(abs(point.poles[0] + 0.8) for point in result.candidates) <= 1e-6


def test_fixed_pole_fit_of_the_motivational_data(motivational):
    result = realize(motivational, 2, FixedPoleSet((-0.9557,)))
    best = result.best

    assert result.n_affine == 13
    assert result.n_real == 1
    assert best.unknowns[0] == pytest.approx(-0.9538, abs=5e-4)
    assert best.misfit_sq == pytest.approx(5.9112, abs=5e-4)
    np.testing.assert_allclose(best.a.coeffs, [-0.9116, 0.0019, 1.0], atol=5e-4)

    poles = sorted(p.real for p in best.poles)
    assert poles[0] == pytest.approx(-0.9557, abs=1e-9)
    assert poles[1] == pytest.approx(0.9538, abs=5e-4)


def test_fixed_pole_candidates_are_critical_points(motivational):
    y = motivational
    result = realize(y, 2, FixedPoleSet((-0.9557,)))
    tol = 1e-6 * np.linalg.norm(y.values)
    for point in result.candidates:
        assert point.fonc.passes(tol)
        assert point.rank_drop <= 1e-8
        assert point.b.leading == 1.0
        np.testing.assert_allclose(point.a.coeffs, poly_mul(point.b, result.c).coeffs)


def test_candidates_sorted_by_misfit(rng):
    y = geometric(0.7, 10).values + 0.3 * rng.standard_normal(10)
    result = realize(y, 2, FixedPoleSet((-0.4,)))
    misfits = [point.misfit_sq for point in result.candidates]
    assert misfits == sorted(misfits)
    assert result.global_index == 0


def test_third_order_example_affine_count(example_clean, example_pair, rng):
    y = example_clean.values + 0.1 * rng.standard_normal(16)
    result = realize(y, 3, example_pair)
    assert result.n_affine == 37
    assert result.q == 1


def test_noise_free_data_is_recovered(example_clean, example_pair):
    result = realize(example_clean, 3, example_pair)
    assert result.best.misfit_sq <= 1e-12 * example_clean.norm_sq()
    assert min(abs(p + 0.75) for p in result.best.poles) <= 1e-6


def test_geometric_signal_is_fitted_exactly():
    y = geometric(0.6, 8, scale=2.0)
    result = realize(y, 1)
    assert result.best.poles[0].real == pytest.approx(0.6, abs=1e-10)
    assert result.best.misfit_sq <= 1e-18


def test_repeated_runs_are_identical(motivational):
    first = realize(motivational, 2, FixedPoleSet((-0.9557,)))
    second = realize(motivational, 2, FixedPoleSet((-0.9557,)))
    assert [p.misfit_sq for p in first.candidates] == [p.misfit_sq for p in second.candidates]
    np.testing.assert_array_equal(first.best.a.coeffs, second.best.a.coeffs)


def test_no_real_eigenvalue_is_reported(monkeypatch, motivational):
    spectrum = AffineSpectrum(
        eigenvalues=np.array([[0.2 + 0.5j], [0.2 - 0.5j]]),
        vectors=np.ones((4, 2), dtype=complex)
    )
    monkeypatch.setattr(realization_module, "solve_spectrum", lambda mp, max_degree=None: (spectrum, "companion"))
    with pytest.raises(NoRealSolutionError) as info:
        realize(motivational, 2, FixedPoleSet((-0.9557,)))
    assert len(info.value.eigenvalues) == 2


def test_find_gap():
    assert find_gap([1, 3, 4, 4, 5]) == GapInfo(degree=2, affine_count=4)
    assert find_gap([1, 3, 6]) is None


def test_nullity_increment_stabilizes():
    assert not increment_stable([(3, 10), (4, 14)])
    assert not increment_stable([(3, 10), (4, 14), (5, 19)])
    assert increment_stable([(3, 10), (4, 14), (5, 19), (6, 24)])
    assert increment_stable([(2, 4), (3, 4), (4, 4)])


def test_block_macaulay_shape(rng):
    mp = build_matrix_polynomial(rng.standard_normal(9), ModelPoly.unit(), 2)
    macaulay = build_block_macaulay(mp, 4)
    rows, cols = mp.shape
    assert macaulay.matrix.shape == (monomial_count(2, 1) * rows, monomial_count(2, 4) * cols)
    with pytest.raises(InvalidInputError):
        build_block_macaulay(mp, 2)


def test_block_macaulay_on_a_scalar_system():
    # u1**2 - 3 u1 + 2 = 0 and u2**2 - 5 u2 + 4 = 0: four affine solutions
    blocks = {
        (0, 0): np.array([[2.0], [4.0]]),
        (1, 0): np.array([[-3.0], [0.0]]),
        (0, 1): np.array([[0.0], [-5.0]]),
        (2, 0): np.array([[1.0], [0.0]]),
        (0, 2): np.array([[0.0], [1.0]]),
    }
    spectrum = solve_block_macaulay(MatrixPolynomial(var_count=2, blocks=blocks))
    found = sorted((round(e[0].real, 8), round(e[1].real, 8)) for e in spectrum.eigenvalues)
    assert found == [(1.0, 1.0), (1.0, 4.0), (2.0, 1.0), (2.0, 4.0)]
    assert np.max(np.abs(spectrum.eigenvalues.imag)) <= 1e-8
    assert spectrum.n_infinite == 0
    nullities = [nullity for _, nullity in spectrum.nullity_history]
    assert nullities[-1] - nullities[-2] == nullities[-2] - nullities[-3]


@pytest.mark.slow
def test_order_two_fit_of_the_motivational_data(motivational):
    result = realize(motivational, 2)
    assert result.solver == "block-macaulay"
    poles = sorted(p.real for p in result.best.poles)
    assert poles[0] == pytest.approx(-0.5351, abs=5e-4)
    assert poles[1] == pytest.approx(0.9194, abs=5e-4)
    assert result.best.misfit_sq == pytest.approx(3.8836, abs=5e-4)


@pytest.mark.slow
def test_fixing_the_optimal_pole_recovers_the_other(motivational):
    result = realize(motivational, 2, FixedPoleSet((-0.5351,)))
    free = [p for p in result.best.poles if abs(p + 0.5351) > 1e-6]
    assert free[0].real == pytest.approx(0.9194, abs=1e-3)
    assert result.best.misfit_sq == pytest.approx(3.8836, abs=1e-3)


@pytest.mark.slow
def test_fixed_pole_fit_never_beats_the_unconstrained_fit(motivational):
    free = realize(motivational, 2).best.misfit_sq
    fixed = realize(motivational, 2, FixedPoleSet((-0.9557,))).best.misfit_sq
    assert free <= fixed + 1e-9


@pytest.mark.expensive
def test_unconstrained_third_order_example(example_clean, example_pair, rng):
    y = example_clean.values + 0.05 * rng.standard_normal(16)
    free = realize(y, 3)
    fixed = realize(y, 3, example_pair)
    assert free.best.misfit_sq <= fixed.best.misfit_sq + 1e-9


def test_filtered_hankel_rank_at_the_candidates(motivational, rng):
    fixed = FixedPoleSet((-0.9557,))
    result = realize(motivational, 2, fixed)
    best = result.best
    assert best.hankel_rank == 1
    assert best.hankel_rank_full
    assert filtered_hankel_rank(best.yhat, result.c, 1) == 1

    for _ in range(5):
        y = geometric(0.7, 11).values + 0.3 * rng.standard_normal(11)
        point = realize(y, 2, FixedPoleSet((-0.4,))).best
        assert point.hankel_rank_full


def test_rank_loss_is_reported(monkeypatch, motivational):
    monkeypatch.setattr(
        realization_module, "filtered_hankel_diagnostic",
        lambda yhat, c, q: RankDiagnostic(rank=0, singular_values=[0.0], borderline=False)
    )
    result = realize(motivational, 2, FixedPoleSet((-0.9557,)))
    assert not result.best.hankel_rank_full
    assert any("filtered Hankel rank 0" in w for w in result.warnings)


@pytest.mark.slow
def test_free_fit_bounds_the_fixed_fit_on_random_instances():
    rng = np.random.default_rng(77)
    for _ in range(50):
        length = int(rng.integers(5, 8))
        poles = rng.uniform(-0.9, 0.9, size=2)
        y = sum(p ** np.arange(length) for p in poles) + 0.2 * rng.standard_normal(length)
        fixed = FixedPoleSet((float(rng.uniform(-0.9, 0.9)),))
        free = realize(y, 2).best.misfit_sq
        constrained = realize(y, 2, fixed).best.misfit_sq
        assert free <= constrained + 1e-9
