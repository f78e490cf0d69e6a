from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

THEORIES = Path(__file__).resolve().parent.parent / "theories"

# filled by test_acceptance: criterion number -> (description, passed)
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def theories_dir() -> Path:
    return THEORIES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        desc, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {desc}")
