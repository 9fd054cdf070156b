import pytest

from services.verification import (
    SUITES,
    PropertyCheck,
    VerificationReport,
    verify_doubling,
    verify_laplace,
    verify_model,
    verify_reduce,
    verify_s2,
    verify_weyl,
)


def test_suites_registered():
    assert sorted(SUITES) == ["doubling", "laplace", "model", "reduce", "s2", "weyl"]


def test_report_passes_only_if_all_properties_pass():
    report = VerificationReport("x", {}, (PropertyCheck("a", True, 1.0), PropertyCheck("b", False)))
    assert not report.passed
    assert VerificationReport.from_dict(report.to_dict()) == report


def test_reduce_suite():
    report = verify_reduce(d=2, N=12)
    assert report.passed, report.to_dict()
    assert {p.name for p in report.properties} >= {"counting_identity", "spectra_match", "kernel_dimension"}


def test_reduce_suite_general_symbol():
    assert verify_reduce(d=3, N=5, gamma=0.5, b1=1.0, bm1=-0.5).passed


def test_laplace_suite():
    report = verify_laplace()
    assert report.passed, report.to_dict()
    assert len(report.properties) == 7


def test_s2_suite():
    report = verify_s2(d_values=(1, 2), gammas=(1.0,), N=6, interlace_N=64)
    assert report.passed, report.to_dict()


@pytest.mark.slow
def test_weyl_suite_gaussian():
    assert verify_weyl("gaussian").passed


@pytest.mark.slow
def test_weyl_suite_model():
    assert verify_weyl("model").passed


@pytest.mark.slow
def test_model_suite():
    report = verify_model(d=1, gamma=1.0, N=4096, k=20)
    assert report.passed
    relative = next(p for p in report.properties if p.name == "relative_decay")
    assert 0 < relative.measured <= 0.5


def test_doubling_suite_small():
    report = verify_doubling(d=1, N=128, index=6, doublings=2)
    assert report.passed
    assert [p.name for p in report.properties] == [
        "deviation_N128",
        "deviation_N256",
        "deviation_N512",
        "deviation_decreasing",
    ]
