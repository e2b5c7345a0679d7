"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import pytest

from shallowcirc.repro import CHECKS


@pytest.mark.parametrize("check", CHECKS, ids=lambda c: f"criterion_{c.number:02d}")
def test_criterion(check, capsys):
    result = check()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
