"""Per-grid-point computations for simulate and discriminate

Top-level functions so the sweep queue can ship them to worker processes.
"""
import logging
import math
import time
from typing import Union

from ..config import RunConfig
from ..errors import OracleMismatchError
from ..models import DiscriminationRecord, SweepRecord
from ..quantum.density import (
    reduce_reservoir,
    reduce_systems,
    trace_distance,
    von_neumann_entropy,
)
from ..quantum.engine import attach_and_interact, init_joint, run_protocol
from ..quantum.ladder import dirichlet_overlap, make_reservoir
from ..quantum.metrics import asymmetry, fidelity_report, helstrom_error, landauer_cost
from ..quantum.systems import collective_overlap_magnitude, crossover_k

logger = logging.getLogger(__name__)


def data_processing_bound(L: int, delta: float) -> float:
    """Trace distance of the two initial reservoir states"""
    overlap = min(1.0, abs(dirichlet_overlap(L, delta)))
    return math.sqrt(1 - overlap * overlap)


def check_record(
    record: Union[SweepRecord, DiscriminationRecord], atol: float = 1e-9
) -> None:
    """Reject rows with non-finite numbers or a measured value above its bound"""
    for name, value in record.model_dump().items():
        if isinstance(value, float) and not math.isfinite(value):
            raise OracleMismatchError(f"{name}={value} at L={record.L} k={record.k}")
    pairs = [("trace_distance_actual", "trace_distance_bound")]
    if isinstance(record, SweepRecord):
        pairs.append(("asymmetry_systems", "asymmetry_bound"))
    for actual, bound in pairs:
        if getattr(record, actual) > getattr(record, bound) + atol:
            raise OracleMismatchError(
                f"{actual}={getattr(record, actual)} exceeds {bound}="
                f"{getattr(record, bound)} at L={record.L} k={record.k}"
            )


def evaluate_sweep_point(config: RunConfig, L: int, k: int) -> SweepRecord:
    start = time.perf_counter()
    U = config.build_unitary()
    joint = init_joint(make_reservoir(L, config.l0, config.theta), k, config.shift_convention)
    previous = joint
    for _ in range(k):
        previous, joint = joint, attach_and_interact(joint, U)

    report = fidelity_report(L, config.l0, config.theta, U, k, joint=joint)
    entropy = von_neumann_entropy(reduce_reservoir(joint))
    entropy_before = von_neumann_entropy(reduce_reservoir(previous)) if k else 0.0
    cost = landauer_cost(entropy, config.temperature)

    rival = run_protocol(L, config.l0, config.phi, U, k, config.shift_convention)
    distance = trace_distance(reduce_systems(joint), reduce_systems(rival))

    runtime = None if config.compare else (time.perf_counter() - start) * 1000
    logger.debug(f"Sweep point L={L} k={k} took {runtime} ms")
    record = SweepRecord(
        L=L,
        k=k,
        l0=config.l0,
        theta=config.theta,
        hermitian_fk=report.hermitian_fk,
        paper_expression_fk=report.paper_expression_fk,
        closed_form_paper=report.closed_form_paper,
        closed_form_hermitian=report.closed_form_hermitian,
        fidelity_gap=report.hermitian_fk - (1 - k / L),
        asymmetry_systems=asymmetry(reduce_systems(joint)),
        asymmetry_bound=math.log(L),
        reservoir_entropy_nats=entropy,
        entropy_increment_nats=entropy - entropy_before,
        reservoir_entropy_bits=(
            entropy / math.log(2) if config.entropy_unit.value == "bits" else None
        ),
        landauer_cost=cost,
        landauer_cost_energy=cost * config.energy_spacing,
        trace_distance_actual=distance,
        trace_distance_bound=data_processing_bound(L, config.phi - config.theta),
        runtime_ms=runtime,
    )
    check_record(record)
    return record


def evaluate_discrimination_point(
    config: RunConfig, L: int, k: int
) -> DiscriminationRecord:
    start = time.perf_counter()
    delta = config.phi - config.theta
    U = config.build_unitary()
    naive = collective_overlap_magnitude(config.theta, config.phi, k)
    reservoir = min(1.0, abs(dirichlet_overlap(L, delta)))
    first = reduce_systems(run_protocol(L, config.l0, config.theta, U, k, config.shift_convention))
    second = reduce_systems(run_protocol(L, config.l0, config.phi, U, k, config.shift_convention))
    runtime = None if config.compare else (time.perf_counter() - start) * 1000
    record = DiscriminationRecord(
        L=L,
        k=k,
        theta=config.theta,
        phi=config.phi,
        delta=delta,
        naive_overlap=naive,
        reservoir_overlap=reservoir,
        crossover_k=crossover_k(L, delta),
        helstrom_naive=helstrom_error(naive),
        helstrom_reservoir=helstrom_error(reservoir),
        trace_distance_actual=trace_distance(first, second),
        trace_distance_bound=data_processing_bound(L, delta),
        runtime_ms=runtime,
    )
    check_record(record)
    return record
