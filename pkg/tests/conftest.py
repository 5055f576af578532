from __future__ import annotations

import pytest

from cwilf.config import get_config, use_config


@pytest.fixture(autouse=True)
def _sequential_uncached():
    """Every test runs single-threaded with the disk cache off unless it says otherwise."""
    with use_config(get_config().with_(threads=1, cache_dir=None)):
        yield


# criterion id -> (name, "PASS"/"FAIL"), filled in by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        name, status = ACCEPTANCE[cid]
        terminalreporter.write_line(f"criterion {cid:2d} {status}  {name}")
