import warnings

import pytest

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def record(number: int, passed: bool, detail: str = "") -> None:
    ACCEPTANCE[number] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture(autouse=True)
def _quiet_snap_warnings():
    from fourier_moduli import ResolutionWarning, SnapWarning

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SnapWarning)
        warnings.simplefilter("ignore", ResolutionWarning)
        yield
