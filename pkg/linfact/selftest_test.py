# -*- coding: utf-8 -*-

if __name__ == "__main__":
    raise Exception(
        "Test files can't be run directly. Use `python -m pytest linfact`"
    )

import io

import pytest

from . import selftest
from .repnorm import ConvergenceError


@pytest.mark.parametrize("suite", [
    selftest.analytic_norms,
    selftest.homomorphism,
    selftest.hermitization,
    selftest.determinism,
])
def test_quick_suites(suite):
    assert isinstance(suite(0, 2), str)


def test_check():
    selftest.check(True, "unused")
    with pytest.raises(selftest.SuiteFailure) as e:
        selftest.check(False, "broken")
    assert str(e.value) == "broken"


def test_sum_of_letters():
    assert len(selftest.sum_of_letters(False).terms) == 2
    p = selftest.sum_of_letters(True)
    assert len(p.terms) == 4
    assert p.is_self_adjoint()


def test_report_format(monkeypatch):
    def fine(seed, threads):
        return f"seed {seed}"

    def broken(seed, threads):
        selftest.check(False, "off by 1")

    def diverging(seed, threads):
        raise ConvergenceError("no luck")

    monkeypatch.setattr(selftest, "SUITES", [
        ("fine", fine), ("broken", broken), ("diverging", diverging),
    ])
    out = io.StringIO()
    assert selftest.run_selftest(5, out=out) == 2
    assert out.getvalue().splitlines() == [
        "fine: ok (seed 5)",
        "broken: FAIL (SuiteFailure: off by 1)",
        "diverging: FAIL (ConvergenceError: no luck)",
        "1/3 suites passed",
    ]
