"""Reservoir states on the energy ladder

A ladder state is a finite window [base, base + dim) of the doubly-infinite
ladder {|n>}. The shift Delta|n> = |n+1> only relabels the window, so every
operation here is exact.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import InvalidParameterError, StateValidationError

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-12
DIRICHLET_ZERO = 1e-15


@dataclass(frozen=True)
class LadderState:
    """Complex amplitudes on the levels base .. base + dim - 1"""

    base: int
    amps: np.ndarray = field(repr=False)
    normalized: bool = True

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size < 1:
            raise InvalidParameterError("Ladder state needs at least one level")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)
        object.__setattr__(self, "base", int(self.base))
        if self.normalized and abs(self.norm_squared() - 1.0) > NORM_TOLERANCE:
            raise StateValidationError(
                f"State flagged normalized has squared norm {self.norm_squared()!r}"
            )

    @property
    def dim(self) -> int:
        return self.amps.size

    @property
    def top(self) -> int:
        """Highest level in the window"""
        return self.base + self.dim - 1

    def levels(self) -> np.ndarray:
        return np.arange(self.base, self.base + self.dim)

    def norm_squared(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def embed(self, base: int, dim: int) -> np.ndarray:
        """Copy of the amplitudes placed inside a wider window"""
        offset = self.base - base
        if offset < 0 or offset + self.dim > dim:
            raise InvalidParameterError(
                f"Window [{base}, {base + dim}) does not contain "
                f"[{self.base}, {self.base + self.dim})"
            )
        out = np.zeros(dim, dtype=np.complex128)
        out[offset:offset + self.dim] = self.amps
        return out


def make_reservoir(L: int, l0: int, theta: float) -> LadderState:
    """Uniform phased superposition sum_l e^{i l theta} |l0 + l> / sqrt(L)"""
    if L < 1:
        raise InvalidParameterError(f"Reservoir width must be positive, got L={L}")
    phases = np.exp(1j * theta * np.arange(L))
    return LadderState(base=l0, amps=phases / math.sqrt(L))


def shift(s: LadderState, m: int) -> LadderState:
    """Delta^m |s>"""
    return LadderState(base=s.base + m, amps=s.amps, normalized=s.normalized)


def ladder_overlap(a: LadderState, b: LadderState) -> complex:
    """<a|b> over the intersection of the two windows"""
    lo = max(a.base, b.base)
    hi = min(a.top, b.top)
    if lo > hi:
        return 0j
    left = a.amps[lo - a.base:hi - a.base + 1]
    right = b.amps[lo - b.base:hi - b.base + 1]
    return complex(np.vdot(left, right))


def dirichlet_overlap(L: int, delta: float) -> complex:
    """Closed form of <eta_L(theta)|eta_L(theta + delta)>"""
    if L < 1:
        raise InvalidParameterError(f"Reservoir width must be positive, got L={L}")
    half = math.sin(delta / 2)
    if abs(half) < DIRICHLET_ZERO:
        return 1 + 0j
    magnitude = math.sin(L * delta / 2) / (L * half)
    phase = np.exp(0.5j * (L - 1) * delta)
    return complex(phase * magnitude)


def apply_half_shift_binomial(
    s: LadderState, k: int, direction: int = -1
) -> LadderState:
    """((1 + Delta^direction) / 2)^k |s>, returned unnormalized

    The binomial weights are symmetric, so both directions share one
    convolution and differ only in where the widened window starts.
    """
    if k < 0:
        raise InvalidParameterError(f"Power must be non-negative, got k={k}")
    if direction not in (1, -1):
        raise InvalidParameterError(f"Direction must be +1 or -1, got {direction}")
    if k == 0:
        return s
    weights = np.array([math.comb(k, a) / 2**k for a in range(k + 1)])
    amps = np.convolve(s.amps, weights)
    base = s.base - k if direction == -1 else s.base
    return LadderState(base=base, amps=amps, normalized=False)


def random_ladder_state(
    dim: int, base: int = 0, rng: Optional[np.random.Generator] = None
) -> LadderState:
    """Haar-like random normalized state, used by property checks"""
    rng = rng or np.random.default_rng()
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return LadderState(base=base, amps=amps / np.linalg.norm(amps))
