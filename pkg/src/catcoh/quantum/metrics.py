"""Headline quantities: collective fidelity, asymmetry, discrimination, cost

Two readings of F_k are kept side by side. The Hermitian fidelity
<Psi(0)|rho'|Psi(0)> is what the simulation produces; the trace expression
Tr_E[(1 + Delta^-1)^k sigma (1 + Delta^-1)^k] / 4^k is evaluated exactly as
written and gives 1 - k/L while 2k <= L.
"""
import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np

from ..errors import DomainError, InvalidParameterError, OracleMismatchError
from ..models import FidelityReport
from .density import (
    DensityMatrix,
    dephase_total_number,
    fidelity_with_pure,
    reduce_systems,
    von_neumann_entropy,
)
from .engine import JointState, TwoLevelUnitary, project_targets, run_protocol
from .ladder import apply_half_shift_binomial, ladder_overlap, make_reservoir
from .systems import product_target

logger = logging.getLogger(__name__)

ORDERING_TOLERANCE = 1e-10
IMAGINARY_TOLERANCE = 1e-12


def collective_fidelity(joint: JointState, theta: float) -> float:
    """Squared norm of the reservoir vector left after projecting on psi(theta)^k"""
    return project_targets(joint, theta).norm_squared()


def collective_fidelity_from_density(joint: JointState, theta: float) -> float:
    """Same quantity through the reduced state of the systems"""
    return fidelity_with_pure(reduce_systems(joint), product_target(theta, joint.k))


def paper_fidelity_expression(L: int, l0: int, k: int) -> float:
    """<eta|((1 + Delta^-1)/2)^{2k}|eta> with sigma = |eta_{L,l0}(0)><eta|"""
    eta = make_reservoir(L, l0, 0.0)
    value = ladder_overlap(eta, apply_half_shift_binomial(eta, 2 * k, -1))
    if abs(value.imag) > IMAGINARY_TOLERANCE:
        raise OracleMismatchError(f"Trace expression has imaginary part {value.imag!r}")
    return value.real


def closed_form_paper(k: int, L: int) -> float:
    """1 - k/L, the linear law; the trace expression reaches it only for 2k <= L"""
    if L < 1 or k < 0:
        raise InvalidParameterError(f"Need L >= 1 and k >= 0, got L={L}, k={k}")
    if 2 * k > L:
        raise DomainError(f"Linear law holds for 2k <= L, got k={k}, L={L}")
    return 1 - k / L


def mean_abs_difference(k: int) -> Fraction:
    """E|a - b| for independent a, b ~ Binomial(k, 1/2), by integer convolution"""
    row = [math.comb(k, a) for a in range(k + 1)]
    counts = {}
    for a, wa in enumerate(row):
        for b, wb in enumerate(row):
            counts[a - b] = counts.get(a - b, 0) + wa * wb
    total = sum(abs(m) * c for m, c in counts.items())
    return Fraction(total, 4**k)


def closed_form_hermitian(k: int, L: int) -> float:
    """1 - k C(2k, k) / (4^k L), valid while k <= L"""
    if L < 1 or k < 0:
        raise InvalidParameterError(f"Need L >= 1 and k >= 0, got L={L}, k={k}")
    if k > L:
        raise DomainError(f"Overlap support truncates for k > L (k={k}, L={L})")
    closed = Fraction(k * math.comb(2 * k, k), 4**k)
    convolved = mean_abs_difference(k)
    if closed != convolved:
        raise OracleMismatchError(f"E|a-b|: closed form {closed} != convolution {convolved}")
    return float(1 - convolved / L)


def asymmetry(rho: DensityMatrix) -> float:
    """A_G(rho) = S(G[rho]) - S(rho) in nats"""
    value = von_neumann_entropy(dephase_total_number(rho)) - von_neumann_entropy(rho)
    return max(0.0, value) if value > -ORDERING_TOLERANCE else value


def joint_asymmetry(joint: JointState) -> float:
    """A_G of the global pure state: the entropy of its total-number distribution"""
    probs = np.array(list(joint.number_populations().values()))
    probs = probs[probs > 1e-14]
    return float(-np.sum(probs * np.log(probs)))


def helstrom_error(overlap_magnitude: float) -> float:
    """Minimum error probability for two equiprobable pure states"""
    c = overlap_magnitude
    if c < 0 or c > 1 + 1e-12:
        raise DomainError(f"Overlap magnitude must lie in [0, 1], got {c!r}")
    c = min(c, 1.0)
    return (1 - math.sqrt(1 - c * c)) / 2


def landauer_cost(entropy_nats: float, temperature: float) -> float:
    """Minimum work T S to erase entropy S (k_B = 1)"""
    if entropy_nats < 0 or temperature < 0:
        raise DomainError(
            f"Entropy and temperature must be non-negative, got "
            f"S={entropy_nats!r}, T={temperature!r}"
        )
    return temperature * entropy_nats


def joint_unitary(U: Optional[TwoLevelUnitary]) -> TwoLevelUnitary:
    return U if U is not None else TwoLevelUnitary.hadamard()


def transfers_phase(U: TwoLevelUnitary) -> bool:
    """True when U maps |psi_0> to psi(0), the case the ordering bound covers"""
    root = 1 / math.sqrt(2)
    return abs(U.u00 - root) < 1e-10 and abs(U.u10 - root) < 1e-10


def fidelity_report(
    L: int,
    l0: int,
    theta: float,
    U: Optional[TwoLevelUnitary],
    k: int,
    joint: Optional[JointState] = None,
) -> FidelityReport:
    """All four F_k readings for one parameter point"""
    joint = joint if joint is not None else run_protocol(L, l0, theta, U, k)
    hermitian = collective_fidelity(joint, theta)
    trace_expr = paper_fidelity_expression(L, l0, k)
    try:
        linear = closed_form_paper(k, L)
    except DomainError:
        linear = None
    try:
        combinatorial = closed_form_hermitian(k, L)
    except DomainError:
        combinatorial = None
    if transfers_phase(joint_unitary(U)) and hermitian < trace_expr - ORDERING_TOLERANCE:
        raise OracleMismatchError(
            f"Hermitian F_k={hermitian!r} below trace expression {trace_expr!r} "
            f"at L={L}, k={k}"
        )
    return FidelityReport(
        k=k,
        L=L,
        hermitian_fk=hermitian,
        paper_expression_fk=trace_expr,
        closed_form_paper=linear,
        closed_form_hermitian=combinatorial,
    )
