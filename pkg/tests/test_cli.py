import json
import subprocess
import sys
from pathlib import Path

import pytest

from cofrontal.cli import main, to_structured

EXAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def write(tmp_path, obj, name="in.json"):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


class TestAnalyze:
    def test_fold(self, capsys):
        status, out, _ = run(capsys, "analyze", "--input", str(EXAMPLES / "fold.json"))
        assert status == 0
        for line in ("verdict: both (n=m)", "fair: yes", "jacobian: x2", "QF-dim: 2"):
            assert line in out.splitlines()

    def test_sphere(self, capsys):
        status, out, _ = run(capsys, "analyze", "--input", str(EXAMPLES / "sphere.json"))
        assert status == 1
        for line in ("verdict: indeterminate", "fair: no", "jacobi ideal: (0)"):
            assert line in out.splitlines()
        assert "cofrontal" not in out.split("verdict:")[1].splitlines()[0]

    def test_cone_not_principal(self, capsys, tmp_path):
        path = write(tmp_path, {"n": 3, "m": 2, "components": ["x1", "x2^2 + x3^2"]})
        status, out, _ = run(capsys, "analyze", "--input", path)
        assert status == 1 and "principal: no" in out

    def test_kernel_field_line(self, capsys):
        status, out, _ = run(capsys, "analyze", "--input", str(EXAMPLES / "fold_suspended.json"))
        assert status == 0 and "kernel field: (0, 0, 1)" in out and "QF-dim: 2" in out

    def test_empty_file(self, capsys):
        status, _, err = run(capsys, "analyze", "--input", str(EXAMPLES / "empty.json"))
        assert status == 2 and "empty" in err

    def test_json_error_has_position(self, capsys, tmp_path):
        path = write(tmp_path, '{"n": 2,\n "m": 2,\n "components": [x1]}')
        status, _, err = run(capsys, "analyze", "--input", path)
        assert status == 2 and "line 3" in err

    def test_polynomial_error_has_position(self, capsys, tmp_path):
        path = write(tmp_path, {"n": 2, "m": 1, "components": ["x1 + *x2"]})
        status, _, err = run(capsys, "analyze", "--input", path)
        assert status == 2 and "component 1, column" in err

    def test_unknown_variable(self, capsys, tmp_path):
        path = write(tmp_path, {"n": 2, "m": 1, "components": ["x3"]})
        assert run(capsys, "analyze", "--input", path)[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "analyze", "--input", str(tmp_path / "nope.json"))[0] == 2

    def test_nonvanishing_germ(self, capsys, tmp_path):
        path = write(tmp_path, {"n": 1, "m": 1, "components": ["x1 + 1"]})
        status, _, err = run(capsys, "analyze", "--input", path)
        assert status == 2 and "origin" in err

    def test_several_germs_keep_order(self, capsys, tmp_path):
        germs = [{"n": 2, "m": 2, "components": c}
                 for c in (["x1", "x2^2"], ["x1", "x2^3 + x1*x2"], ["x1^2", "x2^2"])]
        path = write(tmp_path, germs)
        status, out, _ = run(capsys, "analyze", "--input", path, "--format", "structured")
        data = json.loads(out)
        assert status == 0
        assert [d["generator"] for d in data] == ["x2", "3*x2^2 + x1", "x1*x2"]

    def test_degree_cap_flag(self, capsys, tmp_path):
        path = write(tmp_path, {"n": 2, "m": 2, "components": ["x1", "0"]})
        status, out, _ = run(capsys, "analyze", "--input", path, "--degree-cap", "5")
        assert "QF-dim: undecided(5)" in out


class TestSymmetry:
    def test_fold(self, capsys):
        status, out, _ = run(capsys, "symmetry", "--input", str(EXAMPLES / "fold_reflection.json"))
        assert status == 0 and "verified; order 2" in out

    def test_cusp(self, capsys):
        status, out, _ = run(capsys, "symmetry", "--input", str(EXAMPLES / "cusp_reflection.json"))
        assert status == 1 and "failed at monomial x2^3" in out

    def test_swap(self, capsys):
        status, out, _ = run(capsys, "symmetry", "--input", str(EXAMPLES / "fold_swap.json"))
        assert status == 1 and "failed" in out

    def test_dimension_mismatch(self, capsys, tmp_path):
        path = write(tmp_path, {"germ": {"n": 2, "m": 2, "components": ["x1", "x2^2"]},
                                "diffeo": ["-x1"]})
        status, _, err = run(capsys, "symmetry", "--input", path)
        assert status == 2 and "dimension mismatch" in err

    def test_order_cap(self, capsys, tmp_path):
        path = write(tmp_path, {"germ": {"n": 2, "m": 2, "components": ["x2", "x2^2"]},
                                "diffeo": ["x1 + x2^2", "x2"]})
        status, out, _ = run(capsys, "symmetry", "--input", path, "--order-cap", "8")
        assert status == 0 and "order undecided (cap 8)" in out


class TestTorus:
    def test_moebius_quarter(self, capsys):
        status, out, _ = run(capsys, "torus", "--input", str(EXAMPLES / "moebius.json"),
                             "--b", "1/4")
        assert status == 0 and "1 circle, wrapping 2" in out

    def test_moebius_negative(self, capsys):
        status, out, _ = run(capsys, "torus", "--input", str(EXAMPLES / "moebius.json"),
                             "--b", "-1/4")
        assert status == 0 and "0 circles" in out

    def test_bad_symmetry(self, capsys):
        status, _, err = run(capsys, "torus", "--input", str(EXAMPLES / "bad_torus.json"),
                             "--b", "0,0")
        assert status == 2 and "failed at monomial x2^3" in err

    def test_squares(self, capsys):
        status, out, _ = run(capsys, "torus", "--input", str(EXAMPLES / "squares_torus.json"),
                             "--b", "1/4,1/4")
        assert status == 0 and "2 circles, wrapping 2 x2" in out

    def test_return_map(self, capsys):
        status, out, _ = run(capsys, "torus", "--input", str(EXAMPLES / "moebius.json"),
                             "--return-map", "--samples", "1/2;-1/4", "--step-size", "1e-2")
        assert status == 0 and "max deviation:" in out
        assert float(out.strip().splitlines()[-1].split(":")[1]) < 1e-9

    def test_bad_b(self, capsys):
        status, _, err = run(capsys, "torus", "--input", str(EXAMPLES / "moebius.json"),
                             "--b", "1/0")
        assert status == 2

    def test_needs_request(self, capsys):
        assert run(capsys, "torus", "--input", str(EXAMPLES / "moebius.json"))[0] == 2


class TestCatalog:
    def test_list(self, capsys):
        status, out, _ = run(capsys, "catalog", "--format", "structured")
        assert status == 0 and len(json.loads(out)["entries"]) == 5

    def test_fold(self, capsys):
        status, out, _ = run(capsys, "catalog", "fold")
        assert status == 0 and "(x1, x2^2)" in out and "(x1, -x2)" in out and "order 2" in out

    def test_unknown(self, capsys):
        assert run(capsys, "catalog", "nonesuch")[0] == 2


class TestFlags:
    def test_unknown_flag(self, capsys):
        assert run(capsys, "analyze", "--input", str(EXAMPLES / "fold.json"), "--bogus")[0] == 2

    def test_bad_format(self, capsys):
        assert run(capsys, "catalog", "--format", "xml")[0] == 2

    def test_defaults(self):
        from cofrontal.cli import build_parser

        args = build_parser().parse_args(["analyze", "--input", "x"])
        assert (args.degree_cap, args.order_cap, args.step_size, args.format) == \
            (16, 64, 1e-3, "text")


@pytest.mark.parametrize("argv", [
    ["analyze", "--input", str(EXAMPLES / "fold.json")],
    ["analyze", "--input", str(EXAMPLES / "sphere.json")],
    ["symmetry", "--input", str(EXAMPLES / "cusp_reflection.json")],
    ["torus", "--input", str(EXAMPLES / "squares_torus.json"), "--b", "1/4,1/4"],
    ["torus", "--input", str(EXAMPLES / "moebius.json"), "--b", "1/4", "--return-map"],
    ["catalog"],
])
def test_structured_round_trip(capsys, argv):
    _, out, _ = run(capsys, *argv, "--format", "structured")
    assert to_structured(json.loads(out)) + "\n" == out


def test_text_and_structured_share_data(capsys):
    _, text, _ = run(capsys, "analyze", "--input", str(EXAMPLES / "fold.json"))
    _, structured, _ = run(capsys, "analyze", "--input", str(EXAMPLES / "fold.json"),
                           "--format", "structured")
    data = json.loads(structured)
    assert f"jacobian: {data['generator']}" in text
    assert f"QF-dim: {data['local_algebra']['dimension']}" in text


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cofrontal.cli", "catalog", "fold"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("fold:")
