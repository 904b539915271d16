"""Tests for the prefiltering heuristics and the grid reference search."""
import importlib

import numpy as np
import pytest

from src.baselines import BaselineMethod, grid_refine, npf, recursive_fpgor, tsd
from src.errors import DegenerateModelError, InvalidInputError, NoRealSolutionError
from src.mepsolve import realize
from src.optimality import project_misfit
from src.signalmodel import FixedPoleSet, Signal
from tests.conftest import best_single_pole, exponential_misfit, geometric

grid_module = importlib.import_module("src.baselines.grid_search")

FIXED = FixedPoleSet((-0.9557,))


def test_naive_prefilter_on_the_motivational_data(motivational):
    y = motivational.values
    k = np.arange(y.size)
    fixed_mode = (-0.9557) ** k
    residual = y - (fixed_mode @ y) / (fixed_mode @ fixed_mode) * fixed_mode
    pole, _ = best_single_pole(residual)

    result = npf(motivational, 2, FIXED)
    assert result.method is BaselineMethod.NPF
    assert result.estimated_poles[0].real == pytest.approx(pole, abs=1e-5)
    assert result.misfit_sq == pytest.approx(exponential_misfit(y, [-0.9557, pole]), rel=1e-6)
    assert pole == pytest.approx(0.9575, abs=5e-4)
    assert result.misfit_sq == pytest.approx(5.9153, abs=5e-4)


def test_deflation_on_the_motivational_data(motivational):
    y = motivational.values
    pole, _ = best_single_pole(y[1:] + 0.9557 * y[:-1])

    result = tsd(motivational, 2, FIXED)
    assert result.method is BaselineMethod.TSD
    assert result.estimated_poles[0].real == pytest.approx(pole, abs=1e-5)
    assert result.misfit_sq == pytest.approx(exponential_misfit(y, [-0.9557, pole]), rel=1e-6)
    assert pole == pytest.approx(0.9283, abs=5e-4)
    assert result.misfit_sq == pytest.approx(6.1093, abs=5e-4)


def test_combined_misfit_follows_the_estimated_pole(motivational):
    # the combined model misfit rises as the free pole leaves the fixed pole optimum
    y = motivational.values
    assert exponential_misfit(y, [-0.9557, 0.9538]) == pytest.approx(5.9112, abs=5e-4)
    assert exponential_misfit(y, [-0.9557, 0.9361]) == pytest.approx(6.0070, abs=2e-3)
    assert exponential_misfit(y, [-0.9557, 0.8630]) == pytest.approx(8.4181, abs=5e-3)


def test_heuristics_never_beat_the_global_fit(motivational):
    best = realize(motivational, 2, FIXED).best.misfit_sq
    assert best <= npf(motivational, 2, FIXED).misfit_sq + 1e-9
    assert best <= tsd(motivational, 2, FIXED).misfit_sq + 1e-9


def test_combined_model_keeps_the_fixed_pole(motivational):
    result = tsd(motivational, 2, FIXED)
    assert result.combined_model.degree == 2
    assert min(abs(p + 0.9557) for p in result.poles) <= 1e-9


def test_naive_prefilter_with_nothing_left_to_fit():
    y = geometric(-0.9557, 9)
    with pytest.raises(DegenerateModelError):
        npf(y, 2, FIXED)


@pytest.mark.parametrize("fixed", [FixedPoleSet.empty(), FixedPoleSet((0.1, 0.2))])
def test_prefilter_needs_a_proper_split(motivational, fixed):
    with pytest.raises(InvalidInputError):
        npf(motivational, 2, fixed)
    with pytest.raises(InvalidInputError):
        tsd(motivational, 2, fixed)


def test_grid_search_agrees_with_the_motivational_fit(motivational):
    result = grid_refine(motivational, 2, FIXED)
    assert result.method is BaselineMethod.GRID
    assert result.misfit_sq == pytest.approx(realize(motivational, 2, FIXED).best.misfit_sq, abs=1e-6)


def _instance(rng: np.random.Generator, q: int, m: int, length: int):
    poles = rng.uniform(-0.9, 0.9, size=q + m)
    y = sum(rng.uniform(0.5, 2.0) * p ** np.arange(length) for p in poles)
    y = y + 0.2 * rng.standard_normal(length)
    return Signal(y), FixedPoleSet(tuple(poles[:m]))


def _check_global(y: Signal, n: int, fixed: FixedPoleSet) -> None:
    gor = realize(y, n, fixed).best
    grid = grid_refine(y, n, fixed)
    assert gor.misfit_sq <= grid.misfit_sq + 1e-6
    if np.all(np.abs(gor.unknowns) < 2.0):
        assert grid.misfit_sq <= gor.misfit_sq + 1e-6


@pytest.mark.parametrize("seed", range(10))
def test_global_fit_matches_grid_search_single_unknown(seed):
    rng = np.random.default_rng(seed)
    y, fixed = _instance(rng, q=1, m=seed % 3, length=int(rng.integers(7, 13)))
    _check_global(y, 1 + fixed.m, fixed)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100, 110))
def test_global_fit_matches_grid_search_two_unknowns(seed):
    rng = np.random.default_rng(seed)
    y, fixed = _instance(rng, q=2, m=seed % 2, length=int(rng.integers(9, 13)))
    _check_global(y, 2 + fixed.m, fixed)


def test_recursive_order_increase(motivational):
    first = realize(motivational, 1).best.poles[0]
    step = realize(motivational, 2, FixedPoleSet((first,))).best

    result = recursive_fpgor(motivational, 2)
    assert result.method is BaselineMethod.RECURSIVE
    assert min(abs(p - first) for p in result.poles) <= 1e-9
    assert result.misfit_sq == pytest.approx(step.misfit_sq, rel=1e-9)
    assert result.misfit_sq <= realize(motivational, 1).best.misfit_sq + 1e-9


def test_recursive_order_one_is_the_plain_fit(motivational):
    assert recursive_fpgor(motivational, 1).misfit_sq == pytest.approx(
        realize(motivational, 1).best.misfit_sq, rel=1e-12
    )


def test_reported_misfit_is_measured_on_the_original_data(motivational):
    for result in (npf(motivational, 2, FIXED), tsd(motivational, 2, FIXED)):
        proj = project_misfit(result.combined_model, motivational)
        assert result.misfit_sq == pytest.approx(proj.misfit_sq, rel=1e-12)
        np.testing.assert_allclose(result.yhat.values, proj.yhat.values)


def test_deflation_recovers_noiseless_data():
    k = np.arange(10)
    y = 2.0 * 0.7 ** k + (-0.4) ** k
    result = tsd(y, 2, FixedPoleSet((-0.4,)))
    assert result.estimated_poles[0].real == pytest.approx(0.7, abs=1e-7)
    assert result.misfit_sq <= 1e-18


def test_grid_search_without_a_finite_misfit(motivational, monkeypatch):
    monkeypatch.setattr(grid_module, "misfit_objective", lambda values, c: lambda u: float("inf"))
    with pytest.raises(NoRealSolutionError):
        grid_refine(motivational, 2, FIXED, points=5)
