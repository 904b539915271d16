"""Shared fixtures (motivational sequence, third order example, seeded generators) and least squares oracles."""
import os

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from src.datagen import example_state_space, motivational_data, simulate
from src.signalmodel import FixedPoleSet, Signal


def pytest_collection_modifyitems(config, items):
    if os.environ.get("RUN_EXPENSIVE") == "1":
        return
    skip = pytest.mark.skip(reason="set RUN_EXPENSIVE=1 to run")
    for item in items:
        if "expensive" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def motivational() -> Signal:
    return motivational_data()


@pytest.fixture
def example_clean() -> Signal:
    return simulate(example_state_space(), 16)


@pytest.fixture
def example_pair() -> FixedPoleSet:
    pole = complex(np.cos(0.8), np.sin(0.8))
    return FixedPoleSet((pole, pole.conjugate()))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


def geometric(pole: float, length: int, scale: float = 1.0) -> Signal:
    return Signal(scale * pole ** np.arange(length))


def exponential_misfit(values, poles) -> float:
    """Least squares misfit of ``values`` against sums of ``pole**k`` sequences."""
    values = np.asarray(values, dtype=float)
    k = np.arange(values.size)
    basis = np.column_stack([np.power(complex(p), k) for p in poles])
    coef, *_ = np.linalg.lstsq(basis, values.astype(complex), rcond=None)
    residual = values - (basis @ coef).real
    return float(residual @ residual)


def best_single_pole(values, bounds=(-1.5, 1.5), points=30001):
    """Order one optimum by a dense scan of the closed form misfit, then a bounded refine."""
    values = np.asarray(values, dtype=float)
    k = np.arange(values.size)

    def misfit(pole):
        v = np.power(pole, k)
        return float(values @ values - (v @ values) ** 2 / (v @ v))

    grid = np.linspace(bounds[0], bounds[1], points)
    powers = grid[:, None] ** k[None, :]
    scan = values @ values - (powers @ values) ** 2 / np.sum(powers ** 2, axis=1)
    start = grid[int(np.argmin(scan))]
    step = grid[1] - grid[0]
    refined = minimize_scalar(misfit, bounds=(start - step, start + step), method="bounded",
                              options={"xatol": 1e-12})
    return float(refined.x), float(refined.fun)
