"""Eigenvalue sets returned by the matrix polynomial solvers."""
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class AffineSpectrum:
    """
    Affine eigenvalues of a matrix polynomial with their kernel vectors.

    Attributes:
        eigenvalues: Complex array of shape (count, q)
        vectors: Complex array of shape (l, count); column j spans the kernel
            of ``A(eigenvalues[j])`` and is not normalized
        n_infinite: Eigenvalues at infinity reported by the linearization
        nullity_history: ``(degree, nullity)`` pairs of the Macaulay iteration
        warnings: Non-fatal numerical diagnostics
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    n_infinite: int = 0
    nullity_history: List[Tuple[int, int]] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def __len__(self) -> int:
        return self.eigenvalues.shape[0]

    def pairs(self):
        """Iterate over ``(eigenvalue, eigenvector)`` pairs."""
        for j in range(len(self)):
            yield self.eigenvalues[j], self.vectors[:, j]
