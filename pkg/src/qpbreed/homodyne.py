"""Projective quadrature (homodyne) measurements on the truncated space.

A quadrature observable restricted to dim Fock levels has a discrete
spectrum; measuring it projects onto one of its dim eigenvectors. The
measured mode is always mode 1 (the first Kronecker factor).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .fock import FockConfig
from .numerics import DEFAULT_TOLERANCES, eig_hermitian_tridiagonal

RESCALE = math.sqrt(2 * math.pi)

#: Labels recognised by the post-selection machinery. C is the innermost
#: negative outcome; S1/S2 sit on the side peak of a position-type
#: distribution; S is the side peak one grid spacing out in a momentum-type
#: distribution.
PEAK_LABELS = ("C", "S1", "S2", "S")


@dataclass(frozen=True)
class QuadratureBasis:
    """Eigenvalues (ascending) and eigenvectors of one quadrature axis."""

    axis: str
    dim: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def center_index(self) -> int:
        """Index of the innermost negative eigenvalue (24 at dim 50)."""
        return self.dim // 2 - 1

    def mirror(self, index: int) -> int:
        """Index of the equal-magnitude, opposite-sign eigenvalue."""
        return self.dim - 1 - index


@dataclass(frozen=True)
class OutcomeDistribution:
    """Per-eigenvalue probabilities of one homodyne measurement."""

    axis: str
    eigenvalues: np.ndarray
    probabilities: np.ndarray
    peak_labels: dict[int, str] = field(default_factory=dict)

    @property
    def rescaled_outcomes(self) -> np.ndarray:
        return self.eigenvalues / RESCALE


@lru_cache(maxsize=None)
def quadrature_basis(cfg: FockConfig, axis: str) -> QuadratureBasis:
    """Diagonalize the q or p quadrature on the truncated Fock space.

    q is real symmetric tridiagonal in the Fock basis. p shares its spectrum
    and its eigenvectors are obtained through the Fock-diagonal phase map
    |n⟩ → iⁿ|n⟩, under which p = F q F†.
    """
    if axis not in ("q", "p"):
        raise ValueError(f"axis must be 'q' or 'p', got {axis!r}")
    offdiag = np.sqrt(np.arange(1, cfg.dim) / 2.0)
    values, vectors = eig_hermitian_tridiagonal(np.zeros(cfg.dim), offdiag)
    if axis == "p":
        vectors = (1j ** np.arange(cfg.dim))[:, None] * vectors
    vectors.setflags(write=False)
    values.setflags(write=False)
    return QuadratureBasis(axis=axis, dim=cfg.dim, eigenvalues=values, eigenvectors=vectors)


def _check_normalized(state: np.ndarray) -> None:
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"state must be normalized, got norm {norm}")


def projection_amplitudes(state2: np.ndarray, basis: QuadratureBasis) -> np.ndarray:
    """Unnormalized mode-2 amplitudes for every mode-1 outcome.

    Row i of the result is (⟨v_i| ⊗ I)|state2⟩; its squared norm is the
    outcome probability.
    """
    matrix = state2.reshape(basis.dim, basis.dim)
    return basis.eigenvectors.conj().T @ matrix


def outcome_distribution(state2: np.ndarray, basis: QuadratureBasis) -> OutcomeDistribution:
    """Probabilities of measuring each quadrature eigenvalue on mode 1."""
    _check_normalized(state2)
    amplitudes = projection_amplitudes(state2, basis)
    probabilities = np.sum(np.abs(amplitudes) ** 2, axis=1)
    return OutcomeDistribution(
        axis=basis.axis, eigenvalues=basis.eigenvalues, probabilities=probabilities
    )


def project_outcome(state2: np.ndarray, basis: QuadratureBasis, index: int):
    """Collapse mode 1 onto eigenvector ``index``.

    Returns (probability, normalized mode-2 post-state). The post-state is
    None when the outcome probability underflows double precision.
    """
    _check_normalized(state2)
    if not 0 <= index < basis.dim:
        raise ValueError(f"outcome index {index} out of range for dim {basis.dim}")
    matrix = state2.reshape(basis.dim, basis.dim)
    amplitude = basis.eigenvectors[:, index].conj() @ matrix
    probability = float(np.sum(np.abs(amplitude) ** 2))
    if probability <= DEFAULT_TOLERANCES.probability_floor:
        return probability, None
    return probability, amplitude / math.sqrt(probability)


def _negative_local_maxima(probabilities: np.ndarray, half: int) -> list[int]:
    peaks = []
    for i in range(1, half):
        if probabilities[i] > probabilities[i - 1] and probabilities[i] >= probabilities[i + 1]:
            peaks.append(i)
    return peaks


def label_peaks(dist: OutcomeDistribution) -> OutcomeDistribution:
    """Attach the C/S1/S2/S peak labels used for post-selection.

    C is always the innermost negative outcome. On a q-type distribution the
    most probable non-central local maximum of the negative half is S1 and
    its outward neighbour is S2; on a p-type distribution the local maximum
    closest to one grid spacing (rescaled outcome −1) is S. Mirror labels are
    attached to the reflected indices.
    """
    dim = len(dist.probabilities)
    half = dim // 2
    center = half - 1
    labels = {center: "C", dim - 1 - center: "mirror-C"}
    peaks = [i for i in _negative_local_maxima(dist.probabilities, half) if i != center]
    if peaks:
        if dist.axis == "q":
            s1 = max(peaks, key=lambda i: dist.probabilities[i])
            labels[s1] = "S1"
            labels[dim - 1 - s1] = "mirror-S1"
            if s1 - 1 >= 0:
                labels[s1 - 1] = "S2"
                labels[dim - s1] = "mirror-S2"
        else:
            rescaled = dist.eigenvalues / RESCALE
            s = min(peaks, key=lambda i: abs(rescaled[i] + 1.0))
            labels[s] = "S"
            labels[dim - 1 - s] = "mirror-S"
    return dataclasses.replace(dist, peak_labels=labels)
