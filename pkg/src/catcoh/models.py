"""Result records"""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field


class SuiteStatus(str, Enum):
    PASSED = "passed"
    FAILED = "failed"
    DOMAIN_ERROR = "domain_error"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class EntropyUnit(str, Enum):
    NATS = "nats"
    BITS = "bits"


class FidelityReport(BaseModel):
    """The four readings of F_k at one (L, k)"""

    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=0)
    L: int = Field(ge=1)
    hermitian_fk: float
    paper_expression_fk: float
    closed_form_paper: Optional[float] = None
    closed_form_hermitian: Optional[float] = None


class SweepRecord(BaseModel):
    """One (L, k) row of a simulate run; field order is the CSV column order

    The first fifteen columns up to runtime_ms are the fixed schema; the
    extra accounting columns follow it.
    """

    L: int
    k: int
    l0: int
    theta: float
    hermitian_fk: float
    paper_expression_fk: float
    closed_form_paper: Optional[float] = None
    closed_form_hermitian: Optional[float] = None
    asymmetry_systems: float
    asymmetry_bound: float
    reservoir_entropy_nats: float
    landauer_cost: float
    trace_distance_actual: float
    trace_distance_bound: float
    runtime_ms: Optional[float] = None
    fidelity_gap: float
    entropy_increment_nats: float
    reservoir_entropy_bits: Optional[float] = None
    landauer_cost_energy: float


class DiscriminationRecord(BaseModel):
    """One k row of a discriminate run"""

    L: int
    k: int
    theta: float
    phi: float
    delta: float
    naive_overlap: float
    reservoir_overlap: float
    crossover_k: Optional[int] = None
    helstrom_naive: float
    helstrom_reservoir: float
    trace_distance_actual: float
    trace_distance_bound: float
    runtime_ms: Optional[float] = None


class SuiteResult(BaseModel):
    id: str
    name: str
    status: SuiteStatus
    worst_deviation: float = 0.0
    tolerance: float = 0.0
    checks: int = 0
    message: str = ""
    duration_ms: Optional[float] = None


class VerifyReport(BaseModel):
    suites: List[SuiteResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.status != SuiteStatus.FAILED for s in self.suites)

    def counts(self) -> dict:
        counts = {status.value: 0 for status in SuiteStatus}
        for suite in self.suites:
            counts[suite.status.value] += 1
        return counts
