import json

import pytest

from conifoldrh.cli import (EXIT_CHECK, EXIT_OK, EXIT_PRECONDITION,
                            EXIT_USAGE, main, parse_complex)


@pytest.mark.parametrize("text,value", [
    ("1.5", 1.5 + 0j),
    ("2i", 2j),
    ("1.5-2i", 1.5 - 2j),
    ("0.3+0.4i", 0.3 + 0.4j),
    ("-i", -1j),
    ("i", 1j),
    ("-2.5", -2.5 + 0j),
    ("1e-3+2e-2i", 0.001 + 0.02j),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("bad", ["", "abc", "1+2", "i5", "1.5 2i"])
def test_parse_complex_rejects(bad):
    from conifoldrh.cli import UsageError
    with pytest.raises(UsageError):
        parse_complex(bad)


def run_cli(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main(list(argv) + ["--out", str(out)])
    data = json.loads(out.read_text()) if out.exists() else None
    return code, data


def test_eval_qdilog_trivial(tmp_path):
    code, data = run_cli(tmp_path, "eval", "--target", "qdilog",
                         "--param", "x=0", "--param", "q=0.5")
    assert code == EXIT_OK
    assert data["schema"] == 1
    assert data["value"] == [1.0, 0.0]


def test_eval_bn_inadmissible_names_predicate(tmp_path, capsys):
    code = main(["eval", "--target", "Bn", "--param", "t=0.9+0.2i"])
    assert code == EXIT_PRECONDITION
    err = capsys.readouterr().err
    assert "Im((v+0w)/(-t)) > 0" in err


def test_eval_zcs_beta_one(tmp_path):
    code, data = run_cli(tmp_path, "eval", "--target", "Z_cs",
                         "--param", "delta=1.2+0.4i", "--param", "mu=0.8+0.3i",
                         "--param", "beta=1")
    assert code == EXIT_OK
    v = complex(*data["value"])
    assert v == v and abs(v) < 1e6   # finite


def test_eval_bernoulli(tmp_path):
    code, data = run_cli(tmp_path, "eval", "--target", "bernoulli",
                         "--param", "n=2")
    assert code == EXIT_OK
    assert abs(complex(*data["value"]) - 1 / 6) < 1e-15


def test_verify_algebra_passes(tmp_path):
    code, data = run_cli(tmp_path, "verify", "--suite", "algebra",
                         "--order-N", "3", "--order-K", "12")
    assert code == EXIT_OK
    assert data["passed"] is True
    assert data["n_failed"] == 0
    # exact checks report residual identically zero
    assert all(c["rel_err"] == 0.0 for c in data["checks"]
               if "conjugation" in c["name"])


def test_verify_exit_code_on_failure(tmp_path, monkeypatch):
    import conifoldrh.cli as cli

    def broken(order_n, qcut, tol):
        from conifoldrh.checks import Residual
        return [Residual.compare("forced failure", 1.0, 2.0, tol)]

    monkeypatch.setitem(cli._SUITE_FUNCS, "bernoulli", broken)
    code = main(["verify", "--suite", "bernoulli", "--out",
                 str(tmp_path / "x.json")])
    assert code == EXIT_CHECK


def test_sweep_qrh_limit_monotone(tmp_path):
    code, data = run_cli(tmp_path, "sweep", "--target", "qrh-limit-B",
                         "--sweep", "t:0.6:0.5:6",
                         "--param", "t=-0.755+0.655i",
                         "--param", "tau=0.05+0.14i")
    assert code == EXIT_OK
    metrics = [row["metric"] for row in data["rows"]]
    assert all(b < a for a, b in zip(metrics, metrics[1:]))


def test_sweep_csv_output(tmp_path):
    out = tmp_path / "table.csv"
    code = main(["sweep", "--target", "qrh-limit-B",
                 "--sweep", "t:0.6:0.5:3", "--param", "t=-0.755+0.655i",
                 "--param", "tau=0.05+0.14i", "--format", "csv",
                 "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().strip().splitlines()
    assert lines[0].split(",")[0] == "t"
    assert len(lines) == 4


def test_sweep_empty_schedule_usage(capsys):
    assert main(["sweep", "--target", "qrh-limit-B",
                 "--sweep", "t:0.8:0.5:0"]) == EXIT_USAGE


def test_unknown_target_rejected_before_compute(capsys):
    assert main(["eval", "--target", "nosuch"]) == EXIT_USAGE


def test_missing_parameter_is_usage(capsys):
    assert main(["eval", "--target", "qdilog"]) == EXIT_USAGE


def test_numerical_failure_exit_code(monkeypatch):
    import conifoldrh.cli as cli
    from conifoldrh.contour import QuadratureError

    def boom(*a, **k):
        raise QuadratureError("tail bound not met")

    monkeypatch.setattr(cli.multisine, "qdilog_numeric", boom)
    assert main(["eval", "--target", "qdilog", "--param", "x=0.5",
                 "--param", "q=0.5"]) == 3


def test_region_command(tmp_path):
    code, data = run_cli(tmp_path, "region", "--param", "t=0.2+0.7i")
    assert code == EXIT_OK
    assert data["n_admissible"] > 0
    assert data["n_total"] == len(data["grid"])


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "timing"}
    if isinstance(obj, list):
        return [_strip_timing(x) for x in obj]
    return obj


def test_verify_deterministic(tmp_path):
    _, a = run_cli(tmp_path, "verify", "--suite", "dilog")
    _, b = run_cli(tmp_path, "verify", "--suite", "dilog")
    assert _strip_timing(a) == _strip_timing(b)
