"""Verification suites and their registry

Each suite is a small class with an id, a name, a tolerance and an
`evaluate` method that feeds deviations and boolean requirements into a
Tally. The registry runs suites in registration order and collects a
VerifyReport; the run passes when no suite has status FAILED.
"""
import logging
import math
import time
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Type

import numpy as np

from ..config import RunConfig
from ..errors import CatcohError, DomainError
from ..models import SuiteResult, SuiteStatus, VerifyReport
from ..quantum.density import (
    DensityMatrix,
    binary_entropy,
    dephase_total_number,
    pure_density,
    purity,
    reduce_reservoir,
    reduce_systems,
    tensor_product,
    trace_distance,
    von_neumann_entropy,
)
from ..quantum.engine import (
    ShiftConvention,
    TwoLevelUnitary,
    apply_group_phase,
    attach_and_interact,
    init_joint,
    number_conserved,
    project_targets,
    run_protocol,
)
from ..quantum.ladder import (
    LadderState,
    apply_half_shift_binomial,
    dirichlet_overlap,
    ladder_overlap,
    make_reservoir,
    random_ladder_state,
    shift,
)
from ..quantum.metrics import (
    asymmetry,
    closed_form_hermitian,
    closed_form_paper,
    collective_fidelity,
    collective_fidelity_from_density,
    joint_asymmetry,
    landauer_cost,
    paper_fidelity_expression,
)
from ..quantum.systems import (
    collective_overlap_magnitude,
    crossover_k,
    crossover_k_estimate,
    product_target,
    psi_overlap,
)
from .evaluators import data_processing_bound

logger = logging.getLogger(__name__)

SEED = 7


class Tally:
    """Accumulates the worst deviation and any failed requirement"""

    def __init__(self):
        self.worst = 0.0
        self.worst_label = ""
        self.checks = 0
        self.failures: List[str] = []

    def deviation(self, value: float, label: str = "") -> None:
        self.checks += 1
        value = float(value)
        if math.isnan(value):
            self.failures.append(f"NaN deviation at {label}")
            return
        if value > self.worst:
            self.worst = value
            self.worst_label = label

    def require(self, condition: bool, label: str) -> None:
        self.checks += 1
        if not condition:
            self.failures.append(label)


class BaseSuite(ABC):
    id: str = ""
    name: str = ""
    description: str = ""
    tolerance: float = 0.0

    def __init__(self, config: RunConfig):
        self.config = config

    @abstractmethod
    def evaluate(self, tally: Tally) -> None:
        """Feed every check of this suite into the tally"""

    def run(self) -> SuiteResult:
        tally = Tally()
        start = time.perf_counter()
        status = SuiteStatus.PASSED
        message = ""
        try:
            self.evaluate(tally)
        except DomainError as e:
            status, message = SuiteStatus.DOMAIN_ERROR, str(e)
        except CatcohError as e:
            status, message = SuiteStatus.FAILED, f"{type(e).__name__}: {e}"
        except Exception as e:
            logger.error(f"Suite {self.id} crashed: {e}")
            status, message = SuiteStatus.FAILED, f"{type(e).__name__}: {e}"
        if status == SuiteStatus.PASSED:
            if tally.failures:
                status = SuiteStatus.FAILED
                message = "; ".join(tally.failures[:3])
            elif tally.worst > self.tolerance:
                status = SuiteStatus.FAILED
                message = f"worst deviation at {tally.worst_label}"
        return SuiteResult(
            id=self.id,
            name=self.name,
            status=status,
            worst_deviation=tally.worst,
            tolerance=self.tolerance,
            checks=tally.checks,
            message=message,
            duration_ms=(time.perf_counter() - start) * 1000,
        )


class SuiteRegistry:
    def __init__(self):
        self.suites: Dict[str, Type[BaseSuite]] = {}

    def register(self, suite_cls: Type[BaseSuite]) -> Type[BaseSuite]:
        if suite_cls.id in self.suites:
            raise ValueError(f"Suite {suite_cls.id} registered twice")
        self.suites[suite_cls.id] = suite_cls
        return suite_cls

    def list_available(self) -> List[Dict[str, str]]:
        return [
            {"id": cls.id, "name": cls.name, "description": cls.description}
            for cls in self.suites.values()
        ]

    def run_all(self, config: RunConfig, only: Optional[List[str]] = None) -> VerifyReport:
        report = VerifyReport()
        for suite_id, suite_cls in self.suites.items():
            if only and suite_id not in only:
                continue
            result = suite_cls(config).run()
            log = logger.info if result.status != SuiteStatus.FAILED else logger.error
            log(
                f"Suite {suite_id}: {result.status.value} "
                f"(worst {result.worst_deviation:.3e}, tol {result.tolerance:.0e}, "
                f"{result.checks} checks)"
            )
            report.suites.append(result)
        return report


registry = SuiteRegistry()


def _number_labels(state: LadderState) -> np.ndarray:
    return state.levels()


def _popcount_labels(k: int) -> np.ndarray:
    return np.array([bin(b).count("1") for b in range(2**k)])


def _max_ladder_difference(a: LadderState, b: LadderState) -> float:
    base = min(a.base, b.base)
    dim = max(a.top, b.top) - base + 1
    return float(np.max(np.abs(a.embed(base, dim) - b.embed(base, dim))))


def _random_density(dim: int, rng: np.random.Generator) -> DensityMatrix:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.trace(rho).real, np.arange(dim) % 3)


@registry.register
class ReservoirAsymmetrySuite(BaseSuite):
    id = "reservoir_asymmetry"
    name = "A_G of the reservoir equals ln L"
    tolerance = 1e-12

    def evaluate(self, tally: Tally) -> None:
        for L in (2, 8, 64, 256):
            for l0 in (-3, 0, 7):
                for theta in (0.0, 1.1):
                    eta = make_reservoir(L, l0, theta)
                    sigma = pure_density(eta.amps, _number_labels(eta))
                    tally.deviation(
                        abs(asymmetry(sigma) - math.log(L)), f"L={L} l0={l0} theta={theta}"
                    )


@registry.register
class TraceExpressionSuite(BaseSuite):
    id = "trace_expression"
    name = "Trace expression equals 1 - k/L for 2k <= L"
    tolerance = 1e-12

    def evaluate(self, tally: Tally) -> None:
        for L in (16, 64, 256):
            for k in range(1, 9):
                if 2 * k > L:
                    continue
                for l0 in (-3, 0, 7):
                    value = paper_fidelity_expression(L, l0, k)
                    tally.deviation(abs(value - (1 - k / L)), f"L={L} k={k} l0={l0}")


@registry.register
class HermitianOracleSuite(BaseSuite):
    id = "hermitian_oracle"
    name = "Simulated F_k matches 1 - k C(2k,k) / (4^k L)"
    tolerance = 1e-10

    def evaluate(self, tally: Tally) -> None:
        for L in (8, 32, 128):
            for k in range(1, 7):
                joint = run_protocol(L, self.config.l0, 0.0, None, k)
                simulated = collective_fidelity(joint, 0.0)
                label = f"L={L} k={k}"
                tally.deviation(abs(simulated - closed_form_hermitian(k, L)), label)
                tally.deviation(
                    abs(simulated - collective_fidelity_from_density(joint, 0.0)), label
                )
                tally.require(simulated >= 1 - k / L - self.tolerance, f"F_k below 1-k/L at {label}")
                gap = simulated - (1 - k / L)
                logger.debug(f"F_k exceeds the linear law by {gap:.3e} at {label}")


@registry.register
class AsymmetryBoundSuite(BaseSuite):
    id = "asymmetry_bound"
    name = "A_G of the systems never exceeds ln L"
    tolerance = 1e-9

    def evaluate(self, tally: Tally) -> None:
        for L in (8, 32, 128):
            for k in range(1, 7):
                rho = reduce_systems(run_protocol(L, self.config.l0, 0.0, None, k))
                tally.deviation(max(0.0, asymmetry(rho) - math.log(L)), f"L={L} k={k}")


@registry.register
class GroupInvarianceSuite(BaseSuite):
    id = "group_invariance"
    name = "V(U) commutes with T_phi"
    tolerance = 1e-12

    def evaluate(self, tally: Tally) -> None:
        U = TwoLevelUnitary.hadamard()
        joint = init_joint(make_reservoir(32, self.config.l0, 0.0), 4)
        for k in range(4):
            for phi in (0.3, 1.0, 2.9):
                before = attach_and_interact(apply_group_phase(joint, phi), U)
                after = apply_group_phase(attach_and_interact(joint, U), phi)
                tally.deviation(
                    float(np.max(np.abs(before.amps - after.amps))), f"k={k} phi={phi}"
                )
            joint = attach_and_interact(joint, U)


@registry.register
class ReservoirEntropySuite(BaseSuite):
    id = "reservoir_entropy"
    name = "Reservoir entropy growth and Landauer cost"
    tolerance = 1e-10

    def evaluate(self, tally: Tally) -> None:
        for L in (2, 8, 64):
            joint = run_protocol(L, self.config.l0, 0.0, None, 1)
            entropy = von_neumann_entropy(reduce_reservoir(joint))
            tally.deviation(abs(entropy - binary_entropy(1 / (2 * L))), f"L={L} k=1")
            tally.require(landauer_cost(entropy, 1.0) == entropy, f"cost != S at L={L}")
            for k in range(2, 5):
                later = von_neumann_entropy(
                    reduce_reservoir(run_protocol(L, self.config.l0, 0.0, None, k))
                )
                tally.require(later > 0, f"zero reservoir entropy at L={L} k={k}")


@registry.register
class DiscriminationSuite(BaseSuite):
    id = "discrimination"
    name = "Systems never discriminate the phase better than the reservoir"
    tolerance = 1e-10

    def evaluate(self, tally: Tally) -> None:
        L, theta, phi = 64, 0.0, math.pi / 3
        delta = phi - theta
        bound = data_processing_bound(L, delta)
        for k in range(7):
            first = reduce_systems(run_protocol(L, 0, theta, None, k))
            second = reduce_systems(run_protocol(L, 0, phi, None, k))
            excess = trace_distance(first, second) - bound
            tally.deviation(max(0.0, excess), f"k={k}")
        reservoir = abs(dirichlet_overlap(L, delta))
        single = abs(math.cos(delta / 2))
        k_star = crossover_k(L, delta)
        tally.require(k_star is not None, "no crossover found")
        if k_star is not None:
            tally.require(single**k_star < reservoir, f"no crossover at k*={k_star}")
            tally.require(
                k_star == 1 or single ** (k_star - 1) >= reservoir,
                f"k*={k_star} is not the first crossing",
            )
            tally.require(
                crossover_k_estimate(L, delta) == k_star, "logarithmic estimate disagrees"
            )


@registry.register
class ProductDivergenceSuite(BaseSuite):
    id = "product_divergence"
    name = "A_G of psi(theta)^k grows with k"
    tolerance = 0.0

    def evaluate(self, tally: Tally) -> None:
        previous = 0.0
        for k in range(1, 11):
            rho = pure_density(product_target(0.7, k), _popcount_labels(k))
            value = asymmetry(rho)
            tally.require(value > previous, f"A_G not increasing at k={k}")
            previous = value


@registry.register
class AmplitudePathsSuite(BaseSuite):
    id = "amplitude_paths"
    name = "Projected joint state equals the binomial ladder expansion"
    tolerance = 1e-12

    def evaluate(self, tally: Tally) -> None:
        convention = ShiftConvention.STANDARD
        if self.config.inject_fault:
            logger.warning("Fault injected: protocol runs with the mirrored shift")
            convention = ShiftConvention.MIRRORED
        l0 = self.config.l0
        for L in (8, 32):
            for k in range(7):
                joint = run_protocol(L, l0, 0.0, None, k, convention)
                oracle = apply_half_shift_binomial(make_reservoir(L, l0, 0.0), k, -1)
                tally.deviation(
                    _max_ladder_difference(project_targets(joint, 0.0), oracle),
                    f"L={L} k={k}",
                )
                theta = 0.9
                rotated = LadderState(
                    base=oracle.base,
                    amps=oracle.amps * np.exp(1j * theta * (oracle.levels() - l0)),
                    normalized=False,
                )
                joint = run_protocol(L, l0, theta, None, k, convention)
                tally.deviation(
                    _max_ladder_difference(project_targets(joint, theta), rotated),
                    f"L={L} k={k} theta={theta}",
                )


@registry.register
class NumberConservationSuite(BaseSuite):
    id = "number_conservation"
    name = "Exact total-number conservation and unit norm"
    tolerance = 1e-12

    def evaluate(self, tally: Tally) -> None:
        for L in (2, 8, 32):
            for l0 in (-3, 5):
                for k in range(9):
                    joint = run_protocol(L, l0, 0.4, None, k)
                    tally.require(number_conserved(joint), f"number leak L={L} l0={l0} k={k}")
                    tally.deviation(abs(joint.norm() - 1), f"L={L} l0={l0} k={k}")


@registry.register
class DirichletOracleSuite(BaseSuite):
    id = "dirichlet_oracle"
    name = "Closed-form reservoir overlap matches the direct sum"
    tolerance = 1e-12

    def evaluate(self, tally: Tally) -> None:
        for L in range(1, 65):
            for delta in (0.0, math.pi / 7, math.pi / 3, math.pi / 2, math.pi):
                direct = ladder_overlap(make_reservoir(L, 3, 0.4), make_reservoir(L, 3, 0.4 + delta))
                tally.deviation(abs(direct - dirichlet_overlap(L, delta)), f"L={L} delta={delta}")


@registry.register
class LadderPropertiesSuite(BaseSuite):
    id = "ladder_properties"
    name = "Shift unitarity and binomial composition"
    tolerance = 1e-12

    def evaluate(self, tally: Tally) -> None:
        rng = np.random.default_rng(SEED)
        for trial in range(20):
            x = random_ladder_state(12, base=-2, rng=rng)
            y = random_ladder_state(9, base=3, rng=rng)
            m = int(rng.integers(-5, 6))
            tally.deviation(
                abs(ladder_overlap(shift(x, m), shift(y, m)) - ladder_overlap(x, y)),
                f"shift trial {trial}",
            )
            a, b = int(rng.integers(0, 5)), int(rng.integers(0, 5))
            for direction in (1, -1):
                twice = apply_half_shift_binomial(apply_half_shift_binomial(x, a, direction), b, direction)
                once = apply_half_shift_binomial(x, a + b, direction)
                tally.deviation(_max_ladder_difference(twice, once), f"compose {a}+{b}")
        for L in (1, 2, 64, 4096):
            tally.deviation(abs(make_reservoir(L, 0, 1.3).norm_squared() - 1), f"norm L={L}")


@registry.register
class SystemsPropertiesSuite(BaseSuite):
    id = "systems_properties"
    name = "Collective overlap is the k-th power of the single overlap"
    tolerance = 1e-12

    def evaluate(self, tally: Tally) -> None:
        for delta in (0.3, math.pi / 3, math.pi / 2, 2.5):
            previous = 1.0
            for k in range(65):
                value = collective_overlap_magnitude(0.2, 0.2 + delta, k)
                tally.deviation(abs(value - abs(psi_overlap(0.2, 0.2 + delta)) ** k), f"k={k}")
                tally.require(value <= previous, f"overlap grew at k={k}")
                previous = value
            tally.deviation(
                abs(psi_overlap(1.0, 1.0 + delta) - psi_overlap(-2.0, -2.0 + delta)),
                f"covariance delta={delta}",
            )


@registry.register
class DensityPropertiesSuite(BaseSuite):
    id = "density_properties"
    name = "Schmidt symmetry, triangle inequality, dephasing and purity"
    tolerance = 1e-8

    def evaluate(self, tally: Tally) -> None:
        for L in (4, 16):
            for k in range(7):
                joint = run_protocol(L, 0, 0.0, None, k)
                rho, sigma = reduce_systems(joint), reduce_reservoir(joint)
                tally.deviation(
                    abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma)), f"L={L} k={k}"
                )
                tally.require(purity(rho) <= 1 + 1e-10, f"purity above 1 at L={L} k={k}")
        rng = np.random.default_rng(SEED)
        for trial in range(10):
            a, b, c = (_random_density(6, rng) for _ in range(3))
            tally.require(
                trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-10,
                f"triangle inequality trial {trial}",
            )
            tally.require(
                von_neumann_entropy(dephase_total_number(a)) >= von_neumann_entropy(a) - 1e-10,
                f"dephasing lowered entropy trial {trial}",
            )


@registry.register
class AsymmetryAdditivitySuite(BaseSuite):
    id = "asymmetry_additivity"
    name = "Symmetric systems add no asymmetry; the global state keeps ln L"
    tolerance = 1e-10

    def evaluate(self, tally: Tally) -> None:
        for L in (2, 8):
            eta = make_reservoir(L, 1, 0.5)
            sigma = pure_density(eta.amps, _number_labels(eta))
            for k in range(1, 4):
                ground = np.zeros(2**k)
                ground[0] = 1
                rho = pure_density(ground, _popcount_labels(k))
                tally.deviation(
                    abs(asymmetry(tensor_product(rho, sigma)) - asymmetry(sigma)), f"L={L} k={k}"
                )
                joint = run_protocol(L, 1, 0.5, None, k)
                tally.deviation(abs(joint_asymmetry(joint) - math.log(L)), f"global L={L} k={k}")


@registry.register
class FidelityMonotonicitySuite(BaseSuite):
    id = "fidelity_monotonicity"
    name = "F_k falls with k and rises with L"
    tolerance = 0.0

    def evaluate(self, tally: Tally) -> None:
        values = [collective_fidelity(run_protocol(16, 0, 0.0, None, k), 0.0) for k in range(7)]
        for k in range(1, 7):
            tally.require(values[k] < values[k - 1], f"F_k not decreasing at k={k}")
        for k in (1, 3):
            by_width = [collective_fidelity(run_protocol(L, 0, 0.0, None, k), 0.0) for L in (4, 8, 16, 32)]
            tally.require(
                all(x < y for x, y in zip(by_width, by_width[1:])),
                f"F_k not increasing in L at k={k}",
            )


@registry.register
class ClosedFormDomainsSuite(BaseSuite):
    id = "closed_form_domains"
    name = "Closed forms on the configured grid"
    tolerance = 0.0

    def evaluate(self, tally: Tally) -> None:
        if not self.config.checks_closed_form:
            return
        outside = []
        for L in self.config.L:
            for k in range(self.config.k_max + 1):
                for closed_form in (closed_form_paper, closed_form_hermitian):
                    tally.checks += 1
                    try:
                        closed_form(k, L)
                    except DomainError:
                        outside.append(f"{closed_form.__name__}(k={k}, L={L})")
        if outside:
            logger.warning(f"{len(outside)} closed-form evaluations outside their domain")
            raise DomainError(f"{len(outside)} outside validity domain, first: {outside[0]}")


def run_verification(config: RunConfig, only: Optional[List[str]] = None) -> VerifyReport:
    logger.info(f"Running {len(registry.suites)} verification suites")
    return registry.run_all(config, only=only)
