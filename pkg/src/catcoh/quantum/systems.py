"""Two-level systems and the target superposition psi(theta)"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import InvalidParameterError, StateValidationError
from .ladder import DIRICHLET_ZERO, dirichlet_overlap

logger = logging.getLogger(__name__)

SINC_SERIES_CUTOFF = 1e-2
ORTHOGONAL = 1e-12


@dataclass(frozen=True)
class QubitState:
    """a0 |psi_0> + a1 |psi_1>, basis index = excitation number"""

    amp0: complex
    amp1: complex

    def __post_init__(self):
        norm = abs(self.amp0) ** 2 + abs(self.amp1) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise StateValidationError(f"Qubit state has squared norm {norm!r}")

    def vector(self) -> np.ndarray:
        return np.array([self.amp0, self.amp1], dtype=np.complex128)


def make_psi(theta: float) -> QubitState:
    """(|psi_0> + e^{i theta}|psi_1>) / sqrt(2)"""
    root = 1 / math.sqrt(2)
    return QubitState(complex(root), complex(np.exp(1j * theta)) * root)


def psi_overlap(theta: float, phi: float) -> complex:
    return complex((1 + np.exp(1j * (phi - theta))) / 2)


def collective_overlap_magnitude(theta: float, phi: float, k: int) -> float:
    """|<Psi(theta)|Psi(phi)>| = |cos((phi - theta)/2)|^k"""
    if k < 0:
        raise InvalidParameterError(f"Number of systems must be non-negative, got {k}")
    if k == 0:
        return 1.0
    return abs(math.cos((phi - theta) / 2)) ** k


def product_target(theta: float, k: int) -> np.ndarray:
    """psi(theta)^{tensor k} as a 2^k vector, first system most significant"""
    vec = np.ones(1, dtype=np.complex128)
    single = make_psi(theta).vector()
    for _ in range(k):
        vec = np.kron(vec, single)
    return vec


def _log_abs_sinc(x: float) -> float:
    """log|sin x / x|, from its Taylor series near zero"""
    x = abs(x)
    if x < SINC_SERIES_CUTOFF:
        x2 = x * x
        return -x2 * (1 / 6 + x2 * (1 / 180 + x2 * (1 / 2835 + x2 / 37800)))
    return math.log(abs(math.sin(x)) / x)


def log_single_overlap(delta: float) -> float:
    """log|cos(delta/2)| as log1p(-2 sin^2(delta/4)); -inf at delta = pi"""
    r = math.remainder(delta, 2 * math.pi)
    drop = 2 * math.sin(r / 4) ** 2
    if drop >= 1.0:
        return -math.inf
    return math.log1p(-drop)


def log_reservoir_overlap(L: int, delta: float) -> float:
    """log|sin(L delta/2) / (L sin(delta/2))| without cancellation at small delta"""
    x = math.remainder(delta, 2 * math.pi) / 2
    return _log_abs_sinc(L * x) - _log_abs_sinc(x)


def crossover_k(L: int, delta: float) -> Optional[int]:
    """Smallest k with |cos(delta/2)|^k < |<eta(theta)|eta(theta + delta)>|

    Compared in log space, so a delta small enough for cos(delta/2) to round
    to 1 still resolves. None when the reservoir states are orthogonal.
    """
    if abs(math.sin(delta / 2)) < DIRICHLET_ZERO:
        raise InvalidParameterError(
            "delta is a multiple of 2*pi; both overlaps equal 1 and never cross"
        )
    if abs(dirichlet_overlap(L, delta)) < ORTHOGONAL:
        return None
    log_single = log_single_overlap(delta)
    if log_single == -math.inf:
        return 1
    log_reservoir = log_reservoir_overlap(L, delta)
    k = max(1, math.floor(log_reservoir / log_single) + 1)
    # the ratio can land one off after rounding
    while k > 1 and (k - 1) * log_single < log_reservoir:
        k -= 1
    while k * log_single >= log_reservoir:
        k += 1
    return k


def crossover_k_estimate(L: int, delta: float) -> Optional[int]:
    """Cross-check of crossover_k from the rounded overlaps themselves

    None when cos(delta/2) rounds to 1 and the ratio of logarithms is
    undefined.
    """
    reservoir = abs(dirichlet_overlap(L, delta))
    single = abs(math.cos(delta / 2))
    if reservoir < ORTHOGONAL:
        return None
    if single >= 1.0:
        logger.debug(f"cos(delta/2) rounds to 1 for delta={delta}; no estimate")
        return None
    if single == 0.0 or reservoir >= 1.0:
        return 1
    ratio = math.log(reservoir) / math.log(single)
    k = max(1, math.ceil(ratio))
    if single**k >= reservoir:
        k += 1
    return k
