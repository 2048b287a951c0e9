"""Acceptance gate: every headline guarantee runs as its own test and
prints a single pass/fail line with the measured value and tolerance."""

import pytest

from eulerspin.acceptance import ALL_CHECKS


@pytest.mark.parametrize("check", ALL_CHECKS, ids=lambda fn: fn.__name__)
def test_acceptance(check, capsys):
    result = check()
    with capsys.disabled():
        print(result.line())
    assert result.passed, result.line()
