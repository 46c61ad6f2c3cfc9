"""Run every numbered check of the verification suite, one test per
criterion, printing the one-line verdict for each."""

import pytest

from flatbary import selftest


@pytest.mark.parametrize("number", sorted(selftest.REGISTRY))
def test_criterion(number, capsys):
    report = selftest.REGISTRY[number]()
    with capsys.disabled():
        print(f"\n{report.line()}")
    assert report.passed, report.detail
