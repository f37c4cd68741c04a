"""Reduced density matrices and their spectral functionals

Every spectral quantity goes through one Hermitian eigendecomposition
(scipy.linalg.eigh). Eigenvalues in [-1e-10, 0) are clamped to zero, more
negative ones reject the matrix.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg as la

from ..errors import DimensionMismatchError, MissingLabelsError, StateValidationError
from .engine import JointState

logger = logging.getLogger(__name__)

TOLERANCE = 1e-10
ENTROPY_CUTOFF = 1e-14


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray = field(repr=False)
    number_labels: Optional[np.ndarray] = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise StateValidationError(f"Density matrix must be square, got {entries.shape}")
        skew = float(np.max(np.abs(entries - entries.conj().T))) if entries.size else 0.0
        if skew > TOLERANCE:
            raise StateValidationError(f"Density matrix is not Hermitian ({skew:.3e})")
        trace = complex(np.trace(entries))
        if abs(trace - 1) > TOLERANCE:
            raise StateValidationError(f"Density matrix has trace {trace!r}")
        _clamped_spectrum(entries)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        if self.number_labels is not None:
            labels = np.asarray(self.number_labels, dtype=np.int64).reshape(-1)
            if labels.size != entries.shape[0]:
                raise DimensionMismatchError(
                    f"{labels.size} number labels for dimension {entries.shape[0]}"
                )
            object.__setattr__(self, "number_labels", labels)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return _clamped_spectrum(self.entries)


def _clamped_spectrum(matrix: np.ndarray) -> np.ndarray:
    vals = la.eigh(matrix, eigvals_only=True)
    if vals.size and vals.min() < -TOLERANCE:
        raise StateValidationError(
            f"Matrix is not positive semidefinite (eigenvalue {vals.min():.3e})"
        )
    return np.clip(vals, 0.0, None)


def pure_density(vector: np.ndarray, number_labels=None) -> DensityMatrix:
    vec = np.asarray(vector, dtype=np.complex128).reshape(-1)
    return DensityMatrix(np.outer(vec, vec.conj()), number_labels)


def reduce_systems(joint: JointState) -> DensityMatrix:
    """Tr_E |joint><joint|, labelled by popcount of the system bitstring"""
    m = joint.matrix()
    rho = m @ m.conj().T
    labels = np.array([bin(b).count("1") for b in range(m.shape[0])])
    return DensityMatrix(rho, labels)


def reduce_reservoir(joint: JointState) -> DensityMatrix:
    """Tr_S |joint><joint|, labelled by absolute ladder level"""
    m = joint.matrix()
    sigma = m.T @ m.conj()
    return DensityMatrix(sigma, np.arange(joint.base, joint.base + joint.dim))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) = -Tr rho ln rho in nats"""
    vals = rho.eigenvalues()
    vals = vals[vals > ENTROPY_CUTOFF]
    return float(max(0.0, -np.sum(vals * np.log(vals))))


def binary_entropy(p: float) -> float:
    """h(p) in nats"""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log(p) - (1 - p) * math.log(1 - p)


def purity(rho: DensityMatrix) -> float:
    return float(np.real(np.trace(rho.entries @ rho.entries)))


def fidelity_with_pure(rho: DensityMatrix, target: np.ndarray) -> float:
    """<target|rho|target>"""
    vec = np.asarray(target, dtype=np.complex128).reshape(-1)
    if vec.size != rho.dim:
        raise DimensionMismatchError(
            f"Target of dimension {vec.size} against density matrix of {rho.dim}"
        )
    return float(np.real(np.vdot(vec, rho.entries @ vec)))


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """(1/2) sum |eig(a - b)|"""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"Dimensions {a.dim} and {b.dim} differ")
    vals = la.eigh(a.entries - b.entries, eigvals_only=True)
    return float(0.5 * np.sum(np.abs(vals)))


def dephase_total_number(rho: DensityMatrix) -> DensityMatrix:
    """G-twirl: keep only blocks with equal total number"""
    if rho.number_labels is None:
        raise MissingLabelsError("Dephasing needs total-number labels")
    labels = rho.number_labels
    mask = labels[:, None] == labels[None, :]
    return DensityMatrix(np.where(mask, rho.entries, 0), labels)


def tensor_product(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """a (x) b with total numbers added"""
    labels = None
    if a.number_labels is not None and b.number_labels is not None:
        labels = np.add.outer(a.number_labels, b.number_labels).reshape(-1)
    return DensityMatrix(np.kron(a.entries, b.entries), labels)
