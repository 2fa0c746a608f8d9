import csv
import io
import json

import numpy as np
import pytest

from autodist.cli import main
from autodist.evaluation import antiderivative_eval
from autodist.series import eta_product_11


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def body(text):
    """Data rows of a CSV with ``#`` header lines."""
    rows = list(csv.reader(io.StringIO("\n".join(
        ln for ln in text.splitlines() if not ln.startswith("#")))))
    return rows[0], rows[1:]


def header(text):
    return dict(ln[2:].split("=", 1) for ln in text.splitlines() if ln.startswith("# "))


def test_coeffs_csv(capsys):
    code, out, _ = run(capsys, "coeffs", "--builtin", "eta", "--M", "1000")
    assert code == 0
    cols, rows = body(out)
    assert cols == ["n", "re", "im"]
    assert rows[0] == ["1", "1", "0"] and rows[1] == ["25", "-1", "0"]
    assert header(out)["truncation"] == "1000" and header(out)["period"] == "24"


def test_coeffs_json(capsys):
    code, out, _ = run(capsys, "coeffs", "--builtin", "theta", "--M", "20", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["config"]["M"] == 20
    assert d["c0"] == [1.0, 0.0] and [c[0] for c in d["coefficients"]] == [1, 4, 9, 16]


def test_rational_report(capsys):
    code, out, _ = run(capsys, "rational", "--builtin", "eta", "--point", "0/1", "--order", "1")
    d = json.loads(out)
    assert code == 0 and d["residual_within_bound"]
    assert d["report"]["residual"] <= d["report"]["remainder_bound"]
    assert d["classification"]["differentiable"]
    assert d["config"]["N"] == 10 ** 10


def test_irrational_convergents(capsys):
    code, out, _ = run(capsys, "irrational", "--x0", "golden", "--depth", "15")
    assert code == 0
    assert 0.9 <= float(header(out)["measure_proxy"]) <= 1.1
    cols, rows = body(out)
    assert [r[2] for r in rows[:5]] == ["1", "1", "2", "3", "5"]


def test_violation_scan_command(capsys):
    code, out, _ = run(capsys, "irrational", "--builtin", "eta", "--N", "100000000",
                       "--x0", "sqrt2", "--depth", "5", "--alpha", "0.9")
    assert code == 0 and "growth_ratio" in header(out)


def test_eval_and_hoelder(capsys):
    code, out, _ = run(capsys, "eval", "--builtin", "theta", "--M", "10000", "--points", "11")
    assert code == 0 and len(body(out)[1]) == 11
    code, out, _ = run(capsys, "hoelder", "--builtin", "theta", "--N", "100000",
                       "--scales", "4:12")
    h = header(out)
    assert code == 0 and abs(float(h["exponent"]) - 0.5) < 0.1
    assert h["predicted_class"].startswith("C^-0.5")


def test_cancel_and_kernels(capsys):
    code, out, _ = run(capsys, "cancel", "--builtin", "theta", "--N-sweep", "6:12")
    assert code == 0 and abs(float(header(out)["slope"]) - 0.5) < 0.05
    code, out, _ = run(capsys, "kernels", "--N-sweep", "4:8")
    cols, rows = body(out)
    assert code == 0 and cols == ["N", "l1", "l1_over_logN"] and len(rows) == 5


def test_fig6_spot_check(capsys):
    code, out, _ = run(capsys, "figure", "fig6", "--N", "20000", "--grid", "4000")
    assert code == 0
    cols, rows = body(out)
    assert cols == ["x", "im"] and len(rows) == 4000
    data = np.array(rows, dtype=float)
    pick = data[np.linspace(0, 3999, 10).astype(int)]
    direct = antiderivative_eval(eta_product_11(20000), 1, pick[:, 0], 20000).imag
    assert np.max(np.abs(pick[:, 1] - direct)) < 1e-12
    h = header(out)
    assert h["antiderivative_k"] == "1" and h["part"] == "im"


def test_maass_figure_with_sample(capsys):
    code, out, _ = run(capsys, "figure", "fig3", "--grid", "50", "--maass-file", "sample")
    assert code == 0 and header(out)["x_start"] == "-0.05"


def test_deterministic_bytes(capsys):
    argv = ("figure", "fig4", "--N", "2000", "--grid", "300")
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_output_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("AUTODIST_OUTPUT_DIR", str(tmp_path))
    code, out, err = run(capsys, "kernels", "--N-sweep", "4:5")
    assert code == 0 and out == ""
    assert (tmp_path / "kernels.csv").read_text().startswith("# N_sweep=4:5")


def test_explicit_output(capsys, tmp_path):
    target = tmp_path / "sub" / "c.csv"
    assert run(capsys, "coeffs", "--builtin", "theta", "--M", "9", "-o", str(target))[0] == 0
    assert target.read_text().splitlines()[-1] == "9,2,0"


@pytest.mark.parametrize("argv", [
    ("figure", "fig9"),
    ("kernels", "--N-sweep", "x"),
    ("hoelder", "--builtin", "theta", "--mode", "pointwise"),
    ("coeffs", "--builtin", "nonsense"),
    ("irrational", "--x0", "sqrt2", "--alpha", "0.9"),
])
def test_configuration_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_numeric_error(capsys):
    code, _, err = run(capsys, "eval", "--builtin", "theta", "--M", "100", "--N", "200")
    assert code == 3 and "TruncationExceeded" in err


def test_precision_error(capsys):
    code, _, err = run(capsys, "irrational", "--x0", "0.125")
    assert code == 3 and "rational" in err


def test_missing_maass_file(capsys):
    code, _, err = run(capsys, "figure", "fig1")
    assert code == 4 and "--maass-file" in err and "n re im" in err


def test_missing_coefficient_file(capsys, tmp_path):
    code, _, err = run(capsys, "coeffs", "--file", str(tmp_path / "nope.txt"))
    assert code == 4
