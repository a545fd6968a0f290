import json

import pytest

from propratio.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_summary(tmp_path, **overrides):
    data = {
        "n": 11, "N": 40, "P": 0.525, "x_bar_pop": 14.4,
        "rho_pb": 0.897, "c_p": 0.963, "c_x": 0.3085,
    }
    data.update(overrides)
    path = tmp_path / "summary.json"
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def pop_csv(tmp_path, capsys):
    path = str(tmp_path / "pop.csv")
    code, _, _ = run(
        capsys, "generate", "--N", "60", "--P", "0.5", "--rho", "0.8",
        "--seed", "5", "--out", path,
    )
    assert code == 0
    return path


class TestTable1:
    def test_reproduces_reference(self, capsys):
        code, out, _ = run(capsys, "table1")
        assert code == 0
        assert "100.000" in out
        assert "511.794" in out
        assert out.count("| yes") == 6  # every row within tolerance

    def test_csv_format_and_out_file(self, tmp_path, capsys):
        report = tmp_path / "t1.csv"
        code, out, _ = run(capsys, "table1", "--format", "csv", "--out", str(report))
        assert code == 0
        text = report.read_text()
        assert text.startswith("estimator,")
        assert "usual" in text


class TestTheory:
    def test_reference_summary(self, tmp_path, capsys):
        code, out, _ = run(capsys, "theory", "--summary", write_summary(tmp_path))
        assert code == 0
        assert "beats_regression" in out
        assert "t3(0,1)" in out

    def test_explicit_t3_settings(self, tmp_path, capsys):
        code, out, _ = run(
            capsys, "theory", "--summary", write_summary(tmp_path),
            "--t3", "alpha=1,beta=0", "--t3", "alpha=2,beta=1,a=2,b=5",
        )
        assert code == 0
        assert "t3(1,0)" in out
        assert "t3(2,1;a=2,b=5)" in out

    def test_census_reported(self, tmp_path, capsys):
        code, out, _ = run(
            capsys, "theory", "--summary", write_summary(tmp_path, n=40)
        )
        assert code == 0
        assert "census" in out

    def test_bad_summary_exits_2(self, tmp_path, capsys):
        code, _, err = run(
            capsys, "theory", "--summary", write_summary(tmp_path, rho_pb=1.2)
        )
        assert code == 2
        assert "error:" in err

    def test_bad_t3_option_exits_2(self, tmp_path, capsys):
        code, _, _ = run(
            capsys, "theory", "--summary", write_summary(tmp_path),
            "--t3", "gamma=1,beta=0",
        )
        assert code == 2

    def test_missing_file_exits_1(self, tmp_path, capsys):
        code, _, _ = run(capsys, "theory", "--summary", str(tmp_path / "nope.json"))
        assert code == 1


class TestGenerate:
    def test_writes_and_echoes(self, tmp_path, capsys):
        path = tmp_path / "pop.csv"
        code, out, _ = run(
            capsys, "generate", "--N", "200", "--P", "0.5", "--rho", "0.8",
            "--seed", "7", "--out", str(path),
        )
        assert code == 0
        assert path.exists()
        assert "achieved P = 0.5" in out
        assert "achieved rho_pb" in out

    def test_deterministic_output_files(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ("generate", "--N", "80", "--P", "0.4", "--rho", "0.6", "--seed", "9")
        code_a, out_a, _ = run(capsys, *args, "--out", str(a))
        code_b, out_b, _ = run(capsys, *args, "--out", str(b))
        assert code_a == code_b == 0
        assert a.read_bytes() == b.read_bytes()
        assert out_a.replace(str(a), "") == out_b.replace(str(b), "")

    def test_invalid_rho_exits_2(self, tmp_path, capsys):
        code, _, _ = run(
            capsys, "generate", "--N", "80", "--P", "0.4", "--rho", "1.0",
            "--seed", "9", "--out", str(tmp_path / "x.csv"),
        )
        assert code == 2

    def test_unwritable_path_exits_1(self, tmp_path, capsys):
        code, _, _ = run(
            capsys, "generate", "--N", "80", "--P", "0.4", "--rho", "0.6",
            "--seed", "9", "--out", str(tmp_path / "missing" / "x.csv"),
        )
        assert code == 1


class TestSimulate:
    def test_small_study(self, pop_csv, capsys):
        code, out, _ = run(
            capsys, "simulate", "--population", pop_csv, "--n", "12",
            "--reps", "2000", "--seed", "3",
        )
        assert code == 0
        assert "emp_mse" in out
        assert "t2-opt" in out
        assert "t3(0,1)" in out

    def test_seed_repeatability_across_workers(self, pop_csv, tmp_path, capsys):
        a, b = tmp_path / "a.md", tmp_path / "b.md"
        base = (
            "simulate", "--population", pop_csv, "--n", "12",
            "--reps", "3001", "--seed", "11",
        )
        code_a, _, _ = run(capsys, *base, "--workers", "1", "--out", str(a))
        code_b, _, _ = run(capsys, *base, "--workers", "8", "--out", str(b))
        assert code_a == code_b == 0
        assert a.read_bytes() == b.read_bytes()

    def test_explicit_backend(self, pop_csv, capsys):
        code, out, _ = run(
            capsys, "simulate", "--population", pop_csv, "--n", "12",
            "--reps", "500", "--seed", "3", "--backend", "python",
        )
        assert code == 0
        assert "backend=python" in out

    def test_bad_population_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("phi,x\n3,1.0\n")
        code, _, _ = run(
            capsys, "simulate", "--population", str(bad), "--n", "2",
            "--reps", "10", "--seed", "1",
        )
        assert code == 2

    def test_census_design_exits_3(self, pop_csv, capsys):
        # n = N makes the weight optimization singular (no sampling error)
        code, _, err = run(
            capsys, "simulate", "--population", pop_csv, "--n", "60",
            "--reps", "10", "--seed", "1",
        )
        assert code == 3
        assert "singular" in err


class TestEnumerate:
    def test_exact_versus_theory(self, pop_csv, capsys):
        code, out, _ = run(
            capsys, "enumerate", "--population", pop_csv, "--n", "3"
        )
        assert code == 0
        assert "mse_rel_gap" in out
        assert "enumerated 34220 samples" in out  # C(60, 3)

    def test_limit_exits_4(self, pop_csv, capsys):
        code, _, err = run(
            capsys, "enumerate", "--population", pop_csv, "--n", "10",
            "--limit", "1000",
        )
        assert code == 4
        assert "exceeds" in err
