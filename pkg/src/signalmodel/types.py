"""
Value types for signals, shift-operator polynomials and fixed pole sets.

Polynomial coefficients are stored as ``[a_n, ..., a_1, a_0]`` where ``a_0``
multiplies the highest power of the forward shift ``z``. Entry ``k`` of the
vector is therefore the coefficient of ``z**k``.
"""
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from src.errors import InvalidInputError


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class Signal:
    """A finite, real, length-N sequence of samples."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size < 1:
            raise InvalidInputError("A signal needs at least one sample")
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("Signal samples must be finite")
        object.__setattr__(self, "values", _frozen(values))

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    @property
    def N(self) -> int:
        return self.values.size

    def norm_sq(self) -> float:
        return float(self.values @ self.values)


@dataclass(frozen=True)
class ModelPoly:
    """Real polynomial in the forward shift, coefficients ``[a_n ... a_0]``."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).reshape(-1)
        if coeffs.size < 1:
            raise InvalidInputError("A polynomial needs at least one coefficient")
        if not np.all(np.isfinite(coeffs)):
            raise InvalidInputError("Polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", _frozen(coeffs))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def leading(self) -> float:
        """The ``a_0`` entry, i.e. the coefficient of ``z**degree``."""
        return float(self.coeffs[-1])

    @classmethod
    def unit(cls) -> "ModelPoly":
        return cls(np.ones(1))

    @classmethod
    def monic(cls, unknowns: Sequence[float]) -> "ModelPoly":
        """Build ``z**q + b_1 z**(q-1) + ... + b_q`` from ``(b_1, ..., b_q)``."""
        unknowns = np.asarray(unknowns, dtype=float).reshape(-1)
        return cls(np.concatenate([unknowns[::-1], [1.0]]))

    @property
    def unknowns(self) -> np.ndarray:
        """``(b_1, ..., b_q)`` after scaling the leading entry to one."""
        if self.leading == 0.0:
            raise InvalidInputError("Polynomial has a zero leading coefficient")
        return (self.coeffs[:-1] / self.leading)[::-1].copy()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModelPoly):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash(self.coeffs.tobytes())


@dataclass(frozen=True)
class FixedPoleSet:
    """Poles prescribed a priori; should be closed under conjugation."""

    poles: Tuple[complex, ...] = ()

    def __post_init__(self):
        poles = tuple(complex(p) for p in self.poles)
        if not all(np.isfinite(p.real) and np.isfinite(p.imag) for p in poles):
            raise InvalidInputError("Fixed poles must be finite")
        object.__setattr__(self, "poles", poles)

    def __len__(self) -> int:
        return len(self.poles)

    def __iter__(self):
        return iter(self.poles)

    @property
    def m(self) -> int:
        return len(self.poles)

    @classmethod
    def empty(cls) -> "FixedPoleSet":
        return cls(())

    @classmethod
    def with_conjugates(cls, poles: Iterable[Union[complex, float]]) -> "FixedPoleSet":
        """Add the missing conjugate of every non-real pole."""
        given = [complex(pole) for pole in poles]
        result = list(given)
        for pole in given:
            if pole.imag == 0.0:
                continue
            if not any(abs(other - pole.conjugate()) <= 1e-12 * (1.0 + abs(pole)) for other in result):
                result.append(pole.conjugate())
        return cls(tuple(result))


SignalLike = Union[Signal, Sequence[float], np.ndarray]
PolyLike = Union[ModelPoly, Sequence[float], np.ndarray]


def as_values(signal: SignalLike) -> np.ndarray:
    """Return the sample vector of a Signal or of any 1-D array-like."""
    if isinstance(signal, Signal):
        return signal.values
    return Signal(np.asarray(signal, dtype=float)).values


def as_poly(poly: PolyLike) -> ModelPoly:
    if isinstance(poly, ModelPoly):
        return poly
    return ModelPoly(np.asarray(poly, dtype=float))
