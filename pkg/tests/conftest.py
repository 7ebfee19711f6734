import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from pellsum.bigreal import GAMMA
from pellsum.pipeline import PipelineConfig, emit_report, run_pipeline
from pellsum.reduction import cf_past

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=1000, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

M_BIG = 4 * 10**43


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of an mpmath mpf."""
    sign, man, exp, _ = x._mpf_
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


@pytest.fixture(scope="session")
def gamma_cf():
    return cf_past(GAMMA, 6 * M_BIG)


@pytest.fixture(scope="session")
def certificate():
    return run_pipeline(PipelineConfig())


@pytest.fixture(scope="session")
def certificate_json(certificate):
    return emit_report(certificate, "json")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = sorted(getattr(mod, "RESULTS", []))
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
