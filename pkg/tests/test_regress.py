from graphene_cs import regress


def test_perturbed_closed_form_detected():
    result = regress.check_closed_form_coefficients(perturb=1e-3)
    assert not result.passed
    assert result.residual > 1e-4


def test_clean_closed_form_passes():
    assert regress.check_closed_form_coefficients().passed


def test_truncation_is_never_silent():
    result = regress.check_truncation_surfaced()
    assert result.passed and "cap=32:raised" in result.detail


def test_run_all_reports_errors_as_failures(monkeypatch):
    from graphene_cs.errors import NumericalError

    def boom():
        raise NumericalError("synthetic")

    monkeypatch.setitem(regress.EXTRA, "truncation_surfaced", boom)
    results = {r.name: r for r in regress.run_all()}
    assert not results["truncation_surfaced"].passed
    assert "synthetic" in results["truncation_surfaced"].detail


def test_result_line_format():
    line = regress.CheckResult("x", True, 1e-3, 1e-2, "note").line()
    assert line == "PASS x: residual=1.000e-03 threshold=1.000e-02 note"


def test_quoted_periods_shown():
    detail = regress.check_quasi_periods().detail
    assert "quoted=15.707963" in detail and "tau=15.168951" in detail
