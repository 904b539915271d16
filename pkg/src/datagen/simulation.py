"""
Autonomous state-space models and noisy measurement generation.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from src.errors import InvalidInputError
from src.signalmodel import FixedPoleSet, Signal, poly_from_roots

# Configure module logger
logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StateSpaceModel:
    """``x(k+1) = A x(k)``, ``y(k) = C x(k)`` from the initial state ``x0``."""

    A: np.ndarray
    C: np.ndarray
    x0: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        C = np.asarray(self.C, dtype=float).reshape(-1)
        x0 = np.asarray(self.x0, dtype=float).reshape(-1)
        if A.shape[0] != A.shape[1]:
            raise InvalidInputError(f"A must be square, got shape {A.shape}")
        if C.size != A.shape[0] or x0.size != A.shape[0]:
            raise InvalidInputError(
                f"C and x0 must have length {A.shape[0]}, got {C.size} and {x0.size}"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "x0", x0)

    @property
    def order(self) -> int:
        return self.A.shape[0]

    @property
    def poles(self) -> np.ndarray:
        return np.linalg.eigvals(self.A)


def simulate(model: StateSpaceModel, N: int) -> Signal:
    """Noise-free output ``C A**k x0`` for ``k = 0 .. N-1``."""
    if N < 1:
        raise InvalidInputError(f"Need N >= 1 samples, got {N}")
    out = np.empty(N)
    state = model.x0.copy()
    for k in range(N):
        out[k] = model.C @ state
        state = model.A @ state
    return Signal(out)


def add_noise(x: Signal, sigma: float, seed: int) -> Signal:
    """
    Add white Gaussian noise of standard deviation ``sigma``.

    The generator is PCG64 seeded with ``seed``; ``sigma = 0`` returns x unchanged.
    """
    if sigma < 0 or not np.isfinite(sigma):
        raise InvalidInputError(f"Noise level must be a finite value >= 0, got {sigma}")
    rng = np.random.Generator(np.random.PCG64(seed))
    noise = rng.standard_normal(len(x))
    return Signal(x.values + sigma * noise)


def _pole_blocks(poles: FixedPoleSet) -> np.ndarray:
    # real Jordan form: 2x2 rotation blocks for conjugate pairs
    poly_from_roots(poles)
    blocks = []
    remaining = list(poles.poles)
    while remaining:
        pole = remaining.pop(0)
        if pole.imag == 0.0:
            blocks.append(np.array([[pole.real]]))
            continue
        partner = min(range(len(remaining)), key=lambda i: abs(remaining[i] - pole.conjugate()))
        remaining.pop(partner)
        re, im = pole.real, abs(pole.imag)
        blocks.append(np.array([[re, -im], [im, re]]))
    return scipy.linalg.block_diag(*blocks)


def state_space_from_poles(
    poles: Sequence[complex],
    C: Optional[Sequence[float]] = None,
    x0: Optional[Sequence[float]] = None,
    T: Optional[np.ndarray] = None
) -> StateSpaceModel:
    """
    Build ``A = T^-1 J T`` with J the real block-diagonal form of the poles.

    Args:
        poles: Conjugate-closed pole set
        C: Output vector, all twos by default
        x0: Initial state, all ones by default
        T: Similarity transform, identity by default

    Raises:
        InvalidInputError: the poles are not closed under conjugation or T is singular
    """
    pole_set = poles if isinstance(poles, FixedPoleSet) else FixedPoleSet(tuple(poles))
    J = _pole_blocks(pole_set)
    order = J.shape[0]
    if T is not None:
        T = np.asarray(T, dtype=float)
        if T.shape != (order, order):
            raise InvalidInputError(f"T must be {order}x{order}, got shape {T.shape}")
        if np.linalg.cond(T) > 1e12:
            raise InvalidInputError("Similarity transform T is singular")
        J = np.linalg.solve(T, J @ T)
    return StateSpaceModel(
        A=J,
        C=np.full(order, 2.0) if C is None else C,
        x0=np.ones(order) if x0 is None else x0
    )


def motivational_data() -> Signal:
    """The seven-sample sequence used for the order-1 and order-2 walkthrough."""
    return Signal(np.array([3.0, 5.0, 2.0, 3.0, 4.0, 2.0, 3.0]))


def example_poles() -> FixedPoleSet:
    """``{exp(0.8i), exp(-0.8i), -0.75}``"""
    pair = complex(np.cos(0.8), np.sin(0.8))
    return FixedPoleSet((pair, pair.conjugate(), -0.75))


def example_state_space(T: Optional[np.ndarray] = None) -> StateSpaceModel:
    """Third-order model with poles ``exp(+-0.8i)`` and ``-0.75``, C = [2, 2, 2], x0 = ones."""
    return state_space_from_poles(example_poles(), T=T)


def reduced_poles() -> FixedPoleSet:
    return FixedPoleSet((0.8, -0.75))


def reduced_state_space() -> StateSpaceModel:
    """Second-order model with poles 0.8 and -0.75 for quick Monte Carlo runs."""
    return state_space_from_poles(reduced_poles())
