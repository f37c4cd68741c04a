"""Joint systems-plus-reservoir state and the energy-conserving dilation V(U)

The joint amplitudes form a tensor of shape (2,)*k + (dim,): one axis per
attached two-level system (first attached system first) and a final ladder
axis covering the levels base .. base + dim - 1.

V(U) = sum_{n,n'} <psi_n|U|psi_n'> |psi_n><psi_n'| (x) Delta^{n'-n}
acts on one system axis and the ladder axis. Every basis amplitude has an
integer total number popcount(b) + level, and V(U) never mixes sectors.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from ..errors import CapacityError, InvalidParameterError, StateValidationError
from .ladder import LadderState, make_reservoir
from .systems import make_psi

logger = logging.getLogger(__name__)

UNITARITY_TOLERANCE = 1e-10


class ShiftConvention(str, Enum):
    STANDARD = "standard"  # Delta^{n'-n}
    MIRRORED = "mirrored"  # Delta^{n-n'}


@dataclass(frozen=True)
class TwoLevelUnitary:
    u00: complex
    u01: complex
    u10: complex
    u11: complex

    def __post_init__(self):
        gram = self.matrix().conj().T @ self.matrix()
        deviation = float(np.max(np.abs(gram - np.eye(2))))
        if deviation > UNITARITY_TOLERANCE:
            raise StateValidationError(
                f"Matrix is not unitary: max |U^dag U - 1| = {deviation:.3e}"
            )

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.u00, self.u01], [self.u10, self.u11]], dtype=np.complex128
        )

    @classmethod
    def hadamard(cls) -> "TwoLevelUnitary":
        root = 1 / math.sqrt(2)
        return cls(root, root, root, -root)

    @classmethod
    def identity(cls) -> "TwoLevelUnitary":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, matrix) -> "TwoLevelUnitary":
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise StateValidationError(f"Expected a 2x2 matrix, got shape {m.shape}")
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))


@dataclass
class JointState:
    """Amplitudes over (k two-level systems) (x) (ladder window)"""

    base: int
    amps: np.ndarray = field(repr=False)
    k_capacity: int
    l0: int
    L: int
    convention: ShiftConvention = ShiftConvention.STANDARD

    @property
    def k(self) -> int:
        return self.amps.ndim - 1

    @property
    def dim(self) -> int:
        return self.amps.shape[-1]

    def matrix(self) -> np.ndarray:
        """Amplitudes reshaped to (2^k, dim)"""
        return self.amps.reshape(2**self.k, self.dim)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def number_grid(self) -> np.ndarray:
        """Integer total number popcount(b) + level for every amplitude"""
        grid = np.arange(self.base, self.base + self.dim).reshape(
            (1,) * self.k + (self.dim,)
        )
        for axis in range(self.k):
            shape = [1] * (self.k + 1)
            shape[axis] = 2
            grid = grid + np.arange(2).reshape(shape)
        return np.broadcast_to(grid, self.amps.shape)

    def number_support(self) -> np.ndarray:
        """Sorted total numbers that carry nonzero amplitude"""
        return np.unique(self.number_grid()[self.amps != 0])

    def number_populations(self) -> dict:
        grid = self.number_grid()
        probs = np.abs(self.amps) ** 2
        return {int(n): float(probs[grid == n].sum()) for n in np.unique(grid)}


def init_joint(
    reservoir: LadderState,
    k_capacity: int,
    convention: ShiftConvention = ShiftConvention.STANDARD,
) -> JointState:
    """Embed the reservoir in a window wide enough for k_capacity systems

    Standard convention drains the reservoir downwards, so the window grows
    below l0; the mirrored convention grows it above.
    """
    if not reservoir.normalized:
        raise StateValidationError("Reservoir state must be normalized")
    if k_capacity < 0:
        raise InvalidParameterError(f"Capacity must be non-negative, got {k_capacity}")
    dim = reservoir.dim + k_capacity
    if convention == ShiftConvention.STANDARD:
        base = reservoir.base - k_capacity
    else:
        base = reservoir.base
    return JointState(
        base=base,
        amps=reservoir.embed(base, dim),
        k_capacity=k_capacity,
        l0=reservoir.base,
        L=reservoir.dim,
        convention=ShiftConvention(convention),
    )


def _shift_ladder(arr: np.ndarray, m: int) -> np.ndarray:
    """out[..., j] = arr[..., j + m], zero filled; refuses to drop amplitude"""
    if m == 0:
        return arr
    out = np.zeros_like(arr)
    if m > 0:
        if np.any(arr[..., :m]):
            raise CapacityError("Shift would move amplitude below the window")
        out[..., :-m] = arr[..., m:]
    else:
        if np.any(arr[..., m:]):
            raise CapacityError("Shift would move amplitude above the window")
        out[..., -m:] = arr[..., :m]
    return out


def apply_dilation(
    joint: JointState, U: TwoLevelUnitary, axis: int
) -> JointState:
    """V(U) between system `axis` and the reservoir

    amps'(.. n .., j) = sum_{n'} U_{n n'} amps(.. n' .., j + n - n')
    """
    if not 0 <= axis < joint.k:
        raise InvalidParameterError(f"No system at axis {axis} (k={joint.k})")
    sign = 1 if joint.convention == ShiftConvention.STANDARD else -1
    u = U.matrix()
    moved = np.moveaxis(joint.amps, axis, 0)
    out = np.zeros_like(moved)
    for n in (0, 1):
        for n_prime in (0, 1):
            if u[n, n_prime] == 0:
                continue
            out[n] += u[n, n_prime] * _shift_ladder(moved[n_prime], sign * (n - n_prime))
    amps = np.moveaxis(out, 0, axis)
    return JointState(
        joint.base, amps, joint.k_capacity, joint.l0, joint.L, joint.convention
    )


def attach_and_interact(joint: JointState, U: TwoLevelUnitary) -> JointState:
    """Append a fresh system in |psi_0> and apply V(U) to it and the reservoir"""
    if joint.k >= joint.k_capacity:
        raise CapacityError(
            f"Window sized for {joint.k_capacity} systems is exhausted"
        )
    fresh = np.zeros(joint.amps.shape[:-1] + (2, joint.dim), dtype=np.complex128)
    fresh[..., 0, :] = joint.amps
    grown = JointState(
        joint.base, fresh, joint.k_capacity, joint.l0, joint.L, joint.convention
    )
    return apply_dilation(grown, U, axis=grown.k - 1)


def run_protocol(
    L: int,
    l0: int,
    theta: float,
    U: Optional[TwoLevelUnitary],
    k: int,
    convention: ShiftConvention = ShiftConvention.STANDARD,
) -> JointState:
    """k sequential uses of one reservoir eta_{L,l0}(theta)"""
    if k < 0:
        raise InvalidParameterError(f"Number of uses must be non-negative, got {k}")
    U = U or TwoLevelUnitary.hadamard()
    joint = init_joint(make_reservoir(L, l0, theta), k, convention)
    for _ in range(k):
        joint = attach_and_interact(joint, U)
    logger.debug(f"Protocol L={L} l0={l0} k={k} finished, norm={joint.norm():.15f}")
    return joint


def apply_group_phase(joint: JointState, phi: float) -> JointState:
    """T_phi = exp(i N phi) acting globally on systems and reservoir"""
    phases = np.exp(1j * phi * joint.number_grid())
    return JointState(
        joint.base, joint.amps * phases, joint.k_capacity, joint.l0, joint.L,
        joint.convention,
    )


def project_targets(joint: JointState, theta: float) -> LadderState:
    """(<psi(theta)|^{tensor k} (x) 1_E)|joint>, unnormalized reservoir vector"""
    bra = make_psi(theta).vector().conj()
    amps = joint.amps
    for _ in range(joint.k):
        amps = np.tensordot(bra, amps, axes=([0], [0]))
    return LadderState(base=joint.base, amps=amps, normalized=False)


def number_conserved(joint: JointState) -> bool:
    """Integer check that every populated sector lies in {l0, .., l0 + L - 1}"""
    if joint.convention != ShiftConvention.STANDARD:
        return False
    support = joint.number_support()
    return bool(
        support.size > 0
        and support.min() >= joint.l0
        and support.max() <= joint.l0 + joint.L - 1
    )
