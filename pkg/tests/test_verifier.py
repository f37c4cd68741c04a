import pytest

from catcoh.config import build_config
from catcoh.errors import DomainError, OracleMismatchError
from catcoh.models import SuiteStatus
from catcoh.services.verifier import (
    BaseSuite,
    Tally,
    SuiteRegistry,
    registry,
    run_verification,
)


@pytest.fixture
def config():
    return build_config({"L": "4", "k_max": 5})


class Steady(BaseSuite):
    id = "steady"
    name = "steady"
    tolerance = 1e-9

    def evaluate(self, tally):
        tally.deviation(1e-12, "tiny")


class Drifting(BaseSuite):
    id = "drifting"
    name = "drifting"
    tolerance = 1e-9

    def evaluate(self, tally):
        tally.deviation(1e-3, "k=4")


class OutOfDomain(BaseSuite):
    id = "out_of_domain"
    name = "out of domain"

    def evaluate(self, tally):
        raise DomainError("k > L")


class Broken(BaseSuite):
    id = "broken"
    name = "broken"

    def evaluate(self, tally):
        raise OracleMismatchError("closed form disagrees")


class Crashing(BaseSuite):
    id = "crashing"
    name = "crashing"

    def evaluate(self, tally):
        raise ZeroDivisionError("division by zero")


def test_tally_tracks_worst():
    tally = Tally()
    tally.deviation(1e-5, "a")
    tally.deviation(1e-3, "b")
    tally.deviation(float("nan"), "c")
    tally.require(False, "d")
    assert tally.worst == 1e-3
    assert tally.worst_label == "b"
    assert tally.checks == 4
    assert tally.failures == ["NaN deviation at c", "d"]


@pytest.mark.parametrize(
    "suite_cls, status",
    [
        (Steady, SuiteStatus.PASSED),
        (Drifting, SuiteStatus.FAILED),
        (OutOfDomain, SuiteStatus.DOMAIN_ERROR),
        (Broken, SuiteStatus.FAILED),
        (Crashing, SuiteStatus.FAILED),
    ],
)
def test_suite_status(suite_cls, status, config):
    result = suite_cls(config).run()
    assert result.status == status
    assert result.id == suite_cls.id


def test_failed_suite_names_worst_point(config):
    assert Drifting(config).run().message == "worst deviation at k=4"


def test_unexpected_error_fails_suite(config):
    result = Crashing(config).run()
    assert result.status == SuiteStatus.FAILED
    assert result.message == "ZeroDivisionError: division by zero"


def test_registry_order_and_filter(config):
    local = SuiteRegistry()
    for cls in (Steady, OutOfDomain, Drifting):
        local.register(cls)
    with pytest.raises(ValueError):
        local.register(Steady)
    assert [s["id"] for s in local.list_available()] == ["steady", "out_of_domain", "drifting"]

    report = local.run_all(config, only=["steady", "out_of_domain"])
    assert report.passed
    assert report.counts() == {"passed": 1, "failed": 0, "domain_error": 1}
    assert not local.run_all(config).passed


def test_builtin_suites_registered():
    ids = [s["id"] for s in registry.list_available()]
    assert ids[:3] == ["reservoir_asymmetry", "trace_expression", "hermitian_oracle"]
    assert "closed_form_domains" in ids
    assert len(ids) == len(set(ids))


@pytest.mark.parametrize(
    "suite_id",
    [
        "reservoir_asymmetry",
        "trace_expression",
        "hermitian_oracle",
        "asymmetry_bound",
        "group_invariance",
        "reservoir_entropy",
        "discrimination",
        "product_divergence",
        "amplitude_paths",
        "number_conservation",
    ],
)
def test_core_suites_pass(suite_id, config):
    result = run_verification(config, only=[suite_id]).suites[0]
    assert result.status == SuiteStatus.PASSED, result.message
    assert result.checks > 0


def test_injected_fault_is_caught():
    config = build_config({"inject_fault": True})
    report = run_verification(config, only=["amplitude_paths"])
    assert not report.passed
    assert report.suites[0].worst_deviation > 0.1


def test_closed_form_domains(config):
    skipped = run_verification(config, only=["closed_form_domains"]).suites[0]
    assert skipped.status == SuiteStatus.PASSED and skipped.checks == 0

    checked = build_config({"L": "4", "k_max": 5, "checks_closed_form": True})
    result = run_verification(checked, only=["closed_form_domains"]).suites[0]
    assert result.status == SuiteStatus.DOMAIN_ERROR
    assert "closed_form_paper(k=3, L=4)" in result.message

    inside = build_config({"L": "16", "k_max": 8, "checks_closed_form": True})
    assert run_verification(inside, only=["closed_form_domains"]).suites[0].status == (
        SuiteStatus.PASSED
    )
