"""End-to-end command-line checks, in-process plus one subprocess smoke test."""

import json
import subprocess
import sys

import numpy as np
import pytest

from picd.cli import main
from picd.sampling import sample_f4


@pytest.fixture
def xy(tmp_path):
    x = tmp_path / "x.txt"
    y = tmp_path / "y.txt"
    x.write_text("0.2 0.45 0.7\n")
    y.write_text("0.0 1.0\n")
    return str(x), str(y)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGammaCommand:
    def test_single_interval_with_witness(self, capsys, xy):
        x, y = xy
        code, out, err = run(capsys, ["gamma", "--x", x, "--y", y, "--witness"])
        assert code == 0 and err == ""
        assert out == "gamma=1\nby_interval=0,1,0\nwitness=0.45\n"

    def test_json_lists_indices_and_points(self, capsys, xy):
        x, y = xy
        code, out, _ = run(capsys, ["gamma", "--x", x, "--y", y, "--json"])
        assert code == 0
        doc = json.loads(out)
        assert doc["gamma"] == 1
        assert doc["witness_points"] == [0.45]
        assert doc["by_interval"] == [0, 1, 0]

    def test_y_grid_spans_data(self, capsys, xy):
        x, _ = xy
        code, out, _ = run(capsys, ["gamma", "--x", x, "--y-grid", "2"])
        assert code == 0
        assert out.startswith("gamma=3\n")

    def test_stdin_dash(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO("0.3 0.6\n"))
        code, out, _ = run(capsys, ["gamma", "--x", "-", "--y-grid", "1"])
        assert code == 0
        assert out == "gamma=2\nby_interval=0,2,0\n"

    def test_empty_data_file(self, capsys, tmp_path, xy):
        _, y = xy
        empty = tmp_path / "none.txt"
        empty.write_text("")
        code, out, _ = run(capsys, ["gamma", "--x", str(empty), "--y", y])
        assert code == 0
        assert out.startswith("gamma=0\n")

    def test_bad_expansion_is_a_usage_error(self, capsys, xy):
        x, y = xy
        code, out, err = run(capsys, ["gamma", "--x", x, "--y", y, "--r", "0.5"])
        assert code == 2
        assert out == ""
        assert "r must be >= 1" in err

    def test_missing_y_is_reported(self, capsys, xy):
        x, _ = xy
        code, _, err = run(capsys, ["gamma", "--x", x])
        assert code == 2
        assert "--y" in err


class TestArcsCommand:
    def test_counts_and_edges(self, capsys, xy):
        x, y = xy
        code, out, _ = run(capsys, ["arcs", "--x", x, "--y", y, "--edges"])
        assert code == 0
        assert out == "arcs=3\ndensity=0.500000\n1 0\n1 2\n2 1\n"

    def test_cicd_family(self, capsys, xy):
        x, y = xy
        code, out, _ = run(
            capsys, ["arcs", "--x", x, "--y", y, "--family", "cicd", "--tau", "4", "--json"]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["family"] == "cicd"
        assert doc["n"] == 3
        assert doc["arcs"] == len(doc["edges"])


class TestProbCommand:
    def test_finite_n_with_branch_tag(self, capsys):
        code, out, _ = run(capsys, ["prob", "--r", "2", "--c", "0.5", "--n", "5"])
        assert code == 0
        assert out == "0.442708\nbranch=high-c:P1:[2, inf)\n"

    def test_single_point_degenerates(self, capsys):
        code, out, _ = run(capsys, ["prob", "--r", "2", "--c", "0.5", "--n", "1"])
        assert code == 0
        assert out == "0.000000\nbranch=degenerate:n=1\n"

    def test_asymptotic_limit(self, capsys):
        code, out, _ = run(
            capsys, ["prob", "--r", str(1 / 0.7), "--c", "0.3", "--asymptotic"]
        )
        assert code == 0
        assert out == "0.588235\nbranch=asymptotic\n"

    def test_n_required_without_asymptotic(self, capsys):
        code, _, err = run(capsys, ["prob", "--r", "2", "--c", "0.5"])
        assert code == 2
        assert "--n" in err

    def test_json_branch_fields(self, capsys):
        code, out, _ = run(capsys, ["prob", "--r", "2", "--c", "0.5", "--n", "5", "--json"])
        doc = json.loads(out)
        assert doc["p"] == pytest.approx(0.4427083333333333)
        assert doc["branch"]["piece"] == "P1"


class TestPmfCommand:
    def test_two_point_support(self, capsys):
        code, out, _ = run(capsys, ["pmf", "--n", "2", "--m", "2", "--r", "2", "--c", "0.5"])
        assert code == 0
        assert out == "1:0.444444 2:0.555556\n"

    def test_json_probs_sum_to_one(self, capsys):
        code, out, _ = run(capsys, ["pmf", "--n", "4", "--m", "2", "--json"])
        doc = json.loads(out)
        assert sum(doc["probs"]) == pytest.approx(1.0, abs=1e-10)
        assert len(doc["support"]) == len(doc["probs"])
        assert doc["mean"] == pytest.approx(
            sum(q * p for q, p in zip(doc["support"], doc["probs"]))
        )


@pytest.fixture
def uniform_file(tmp_path):
    rng = np.random.default_rng(7)
    path = tmp_path / "u.txt"
    path.write_text("\n".join(f"{v:.17g}" for v in rng.random(50)))
    return str(path)


@pytest.fixture
def segregated_file(tmp_path):
    vals = sample_f4(50, 0.3 / 7, 7, np.random.default_rng(3))
    path = tmp_path / "s.txt"
    path.write_text("\n".join(f"{v:.17g}" for v in vals))
    return str(path)


class TestTestCommand:
    def test_uniform_data_accepted(self, capsys, uniform_file):
        code, out, _ = run(capsys, ["test", "--data", uniform_file, "--method", "dom-bin", "--k", "7"])
        assert code == 0
        assert "method: dom-bin" in out
        assert "reject: false" in out
        assert "p_null: 0.4443359375" in out
        pv = float(next(l.split()[1] for l in out.splitlines() if l.startswith("p_value")))
        assert 0.0 <= pv <= 1.0

    def test_segregated_data_rejected_left(self, capsys, segregated_file):
        code, out, _ = run(
            capsys,
            ["test", "--data", segregated_file, "--method", "dom-bin", "--k", "7", "--alt", "left"],
        )
        assert code == 0
        assert "statistic: 0" in out
        assert "reject: true" in out

    def test_asymptotic_null_requires_matching_r(self, capsys, uniform_file):
        code, _, err = run(
            capsys, ["test", "--data", uniform_file, "--method", "dom-asy", "--r", "2", "--c", "0.4"]
        )
        assert code == 2
        assert "r_star" in err or "r = r_star" in err or "asymptotic null" in err

    def test_mc_method_reports_critical_block(self, capsys, uniform_file):
        with pytest.warns(UserWarning, match="unstable"):
            code, out, _ = run(
                capsys,
                ["test", "--data", uniform_file, "--method", "dom-mc", "--k", "5", "--reps", "500", "--seed", "1"],
            )
        assert code == 0
        assert "critical.alpha_side" in out
        assert "critical.scale: gamma" in out

    def test_ks_json_p_value(self, capsys, uniform_file):
        code, out, _ = run(capsys, ["test", "--data", uniform_file, "--method", "ks", "--json"])
        doc = json.loads(out)
        assert doc["method"] == "ks"
        assert doc["p_value"] == pytest.approx(0.9807696170580387)
        assert doc["reject"] is False

    def test_chisq_is_right_sided_only(self, capsys, uniform_file):
        code, _, err = run(
            capsys, ["test", "--data", uniform_file, "--method", "chisq", "--alt", "left"]
        )
        assert code == 2
        assert "right-sided" in err

    def test_cdf_transform_accepts_matching_law(self, capsys, tmp_path):
        # data with CDF x^2 passes once mapped through it, fails raw
        rng = np.random.default_rng(11)
        path = tmp_path / "q.txt"
        path.write_text(" ".join(f"{v:.17g}" for v in np.sqrt(rng.random(200))))
        code, out, _ = run(
            capsys, ["test", "--data", str(path), "--method", "ks", "--cdf", "pow:p=2", "--json"]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["reject"] is False
        assert doc["params"]["transform"] == "pow(p=2)"
        code, out, _ = run(capsys, ["test", "--data", str(path), "--method", "ks", "--json"])
        assert json.loads(out)["reject"] is True

    def test_unknown_cdf_spec(self, capsys, uniform_file):
        code, _, err = run(
            capsys, ["test", "--data", uniform_file, "--method", "ks", "--cdf", "beta:a=2"]
        )
        assert code == 2
        assert "unknown cdf spec" in err

    def test_arc_density_method(self, capsys, uniform_file):
        code, out, _ = run(
            capsys,
            ["test", "--data", uniform_file, "--method", "arc-picd", "--k", "5", "--reps", "400", "--seed", "2"],
        )
        assert code == 0
        assert "method: arc-picd" in out


class TestStudyCommands:
    def test_size_csv_with_note_comments(self, capsys):
        code, out, _ = run(
            capsys,
            ["size", "--method", "dom-bin,ks", "--n", "30", "--k", "5", "--reps", "100", "--seed", "5"],
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "method,r,c,n,k,alt,param,estimate,se,reps,seed"
        # k=5 leaves no left-tail mass under alpha, so dom-bin never rejects
        assert lines[1] == "dom-bin,2,0.5,30,5,uniform,,0.000000,0.000000,100,5"
        assert lines[2] == "ks,,,30,5,uniform,,0.040000,0.019596,100,5"
        assert lines[3].startswith("# conservative: method=dom-bin")

    def test_power_requires_alt(self, capsys):
        code, _, err = run(capsys, ["power", "--n", "30", "--k", "5", "--reps", "100"])
        assert code == 2
        assert "--alt is required" in err

    def test_power_with_alt_spec(self, capsys):
        code, out, _ = run(
            capsys,
            ["power", "--n", "30", "--k", "5", "--reps", "100", "--seed", "5", "--alt", "f4:eps=0.3"],
        )
        assert code == 0
        # the param cell carries a comma, so the csv writer quotes it
        assert '"eps=0.3,k=5"' in out.splitlines()[1]

    def test_json_table(self, capsys):
        code, out, _ = run(
            capsys,
            ["size", "--method", "ks", "--n", "30", "--reps", "100", "--seed", "5", "--json"],
        )
        doc = json.loads(out)
        assert doc["kind"] == "size"
        assert doc["rows"][0]["method"] == "ks"
        assert 0.0 <= doc["rows"][0]["estimate"] <= 1.0

    def test_grid_flag_expands_product(self, capsys):
        code, out, _ = run(
            capsys,
            ["size", "--method", "dom-bin", "--grid", "r=1.5:0.5:2.0,c=0.5", "--n", "30",
             "--k", "4", "--reps", "100", "--seed", "5"],
        )
        assert code == 0
        data_lines = [l for l in out.splitlines()[1:] if l and not l.startswith("#")]
        assert [l.split(",")[1] for l in data_lines] == ["1.5", "2"]

    def test_out_flag_writes_csv(self, capsys, tmp_path):
        dest = tmp_path / "study.csv"
        code, out, _ = run(
            capsys,
            ["size", "--method", "ks", "--n", "30", "--reps", "100", "--seed", "5", "--out", str(dest)],
        )
        assert code == 0
        body = dest.read_text()
        assert body.splitlines()[0] == "method,r,c,n,k,alt,param,estimate,se,reps,seed"
        assert out.startswith(body.splitlines()[0])

    def test_config_supplies_defaults_and_flags_win(self, capsys, tmp_path):
        cfg = tmp_path / "study.cfg"
        cfg.write_text("# defaults\n[study]\nn = 40\nreps = 120\nmethod = ks\nseed = 5  # fixed\n")
        code, out, _ = run(capsys, ["size", "--config", str(cfg)])
        assert code == 0
        row = out.splitlines()[1].split(",")
        assert (row[0], row[3], row[9]) == ("ks", "40", "120")
        code, out, _ = run(capsys, ["size", "--config", str(cfg), "--n", "30"])
        assert out.splitlines()[1].split(",")[3] == "30"

    def test_missing_n_is_an_error(self, capsys):
        code, _, err = run(capsys, ["size", "--reps", "100"])
        assert code == 2
        assert "--n is required" in err


class TestEstimateCommand:
    def test_p2_estimate(self, capsys):
        code, out, _ = run(capsys, ["estimate", "--n", "5", "--reps", "2000", "--seed", "9"])
        assert code == 0
        assert out == "estimate=0.444500\nse=0.011111\n"

    def test_critical_values(self, capsys):
        code, out, _ = run(
            capsys, ["estimate", "--critical", "--n", "30", "--k", "5", "--reps", "500", "--seed", "9"]
        )
        assert code == 0
        assert out.splitlines()[0] == "left_cv=5"
        assert out.splitlines()[1] == "right_cv=9"
        assert "reps=500" in out

    def test_critical_needs_k(self, capsys):
        code, _, err = run(capsys, ["estimate", "--critical", "--n", "30"])
        assert code == 2
        assert "--k" in err

    def test_env_seed_must_be_integer(self, capsys, monkeypatch):
        monkeypatch.setenv("PICD_SEED", "abc")
        code, _, err = run(capsys, ["estimate", "--n", "5", "--reps", "2000"])
        assert code == 2
        assert "PICD_SEED" in err

    def test_env_seed_is_used(self, capsys, monkeypatch):
        code, first, _ = run(capsys, ["estimate", "--n", "5", "--reps", "1000", "--seed", "31"])
        monkeypatch.setenv("PICD_SEED", "31")
        code, second, _ = run(capsys, ["estimate", "--n", "5", "--reps", "1000"])
        assert first == second


class TestParserBehavior:
    def test_unknown_flag_exits_two(self, xy, capsys):
        x, y = xy
        with pytest.raises(SystemExit) as exc:
            main(["gamma", "--x", x, "--y", y, "--frobnicate"])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_missing_subcommand_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_installed_script_smoke(self):
        proc = subprocess.run(
            [sys.executable, "-c", "import sys; from picd.cli import main; sys.exit(main(sys.argv[1:]))",
             "prob", "--r", "2", "--c", "0.5", "--n", "5"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout == "0.442708\nbranch=high-c:P1:[2, inf)\n"
