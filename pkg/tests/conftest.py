import json
import pathlib

import pytest

from lorenz_renorm import LorenzMap, prerenormalize, standard_family

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fixed_point():
    """Stored (01|10) fixed-point candidate at alpha = 2 (residual < 1e-6)."""
    return LorenzMap.from_json((DATA / "fixed_point_0110.json").read_text())


@pytest.fixture(scope="session")
def fp_pr(fixed_point):
    return prerenormalize(fixed_point, 6, 8)


@pytest.fixture(scope="session")
def std_map():
    # (01|10) region of the standard family
    return standard_family(0.9, 0.1, 0.5, 2.0)


# one PASS/FAIL line per acceptance criterion, repeated in the terminal summary
_ACCEPTANCE = []


@pytest.fixture(scope="session")
def acceptance_log():
    def record(number, ok, detail=""):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        print(line)
        _ACCEPTANCE.append(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)


from hypothesis import settings  # noqa: E402

settings.register_profile("default", deadline=None)
settings.load_profile("default")
