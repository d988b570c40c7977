import json
import subprocess
import sys

import numpy as np
import pytest

from altproj.angles import angle_report
from altproj.cli import dump_system, load_system
from altproj.corpus import example3, two_lines


def run_cli(*args, **kwargs):
    return subprocess.run([sys.executable, "-m", "altproj.cli", *args],
                          capture_output=True, text=True, **kwargs)


class TestSystemFile:
    def test_dump_load_round_trip_is_exact(self):
        system = example3(12)
        again = load_system(dump_system(system))
        for a, b in zip(system.subspaces, again.subspaces):
            assert np.array_equal(a.basis, b.basis)

    def test_load_orthonormalizes_spanning_sets(self):
        doc = {"dim": 2, "subspaces": [
            {"name": "a", "vectors": [[1.0, 1.0], [2.0, 2.0]]},
            {"name": "b", "vectors": [[0.0, 1.0]]},
        ]}
        system = load_system(json.dumps(doc))
        assert system.dims == (1, 1)

    @pytest.mark.parametrize("doc", [
        "not json",
        json.dumps({"dim": 2}),
        json.dumps({"dim": 2, "subspaces": [{"name": "a", "vectors": [[1.0, 0.0]]}]}),
        json.dumps({"dim": 2, "subspaces": [
            {"name": "a", "vectors": [[1.0, 0.0, 0.0]]},
            {"name": "b", "vectors": [[0.0, 1.0]]},
        ]}),
    ])
    def test_malformed_documents_rejected(self, doc):
        with pytest.raises(ValueError):
            load_system(doc)


class TestGen:
    def test_coordinate_example_dimensions(self, tmp_path):
        out = tmp_path / "ex3.json"
        result = run_cli("gen", "--family", "example3", "--dim", "12", "-o", str(out))
        assert result.returncode == 0
        doc = json.loads(out.read_text())
        assert doc["dim"] == 12
        assert [len(s["vectors"]) for s in doc["subspaces"]] == [4, 5, 6]

    def test_two_lines_orthogonal(self):
        result = run_cli("gen", "--family", "two-lines", "--theta", "1.5707963267948966")
        assert result.returncode == 0
        system = load_system(result.stdout)
        vec = system.subspaces[1].basis[:, 0]
        assert abs(vec[0]) <= 1e-12

    def test_byte_identical_reruns(self):
        args = ("gen", "--family", "random", "--dim", "8", "--dims", "3,3,3", "--seed", "7")
        assert run_cli(*args).stdout == run_cli(*args).stdout

    def test_tilted_family(self):
        result = run_cli("gen", "--family", "tilted", "--k", "4", "--rule", "inv-k")
        assert result.returncode == 0
        system = load_system(result.stdout)
        assert system.ambient_dim == 8 and system.dims == (4, 4)

    def test_common_core_family(self):
        result = run_cli("gen", "--family", "common-core", "--dim", "6", "--dims", "2,3",
                         "--core-dim", "1", "--seed", "2")
        assert result.returncode == 0
        assert load_system(result.stdout).intersection.dim >= 1

    def test_invalid_parameters_exit_one(self):
        result = run_cli("gen", "--family", "two-lines", "--theta", "0.0")
        assert result.returncode == 1
        assert result.stderr != ""
        assert run_cli("gen", "--family", "nonsense").returncode == 1


class TestAngles:
    def test_round_trip_matches_in_process_bit_for_bit(self, tmp_path):
        path = tmp_path / "sys.json"
        run_cli("gen", "--family", "example3", "--dim", "12", "-o", str(path))
        result = run_cli("angles", str(path))
        assert result.returncode == 0
        payload = json.loads(result.stdout)
        report = angle_report(example3(12))
        assert payload["c"] == report.c
        assert payload["kappa"] == report.kappa
        assert payload["c0"] == report.c0
        assert payload["kappa0"] == report.kappa0
        assert payload["pairwise"] == [[float(v) for v in row] for row in report.pairwise_dixmier_reduced]
        assert payload["inclination"]["estimate"] == report.inclination.estimate
        assert payload["degenerate"] is False

    def test_orthogonal_pair_file(self, tmp_path):
        path = tmp_path / "orth.json"
        path.write_text(json.dumps({"dim": 2, "subspaces": [
            {"name": "a", "vectors": [[1.0, 0.0]]},
            {"name": "b", "vectors": [[0.0, 1.0]]},
        ]}))
        payload = json.loads(run_cli("angles", str(path)).stdout)
        assert payload["c"] == pytest.approx(0.0, abs=1e-12)

    def test_two_lines_sixty_degrees(self, tmp_path):
        path = tmp_path / "lines.json"
        run_cli("gen", "--family", "two-lines", "--theta", str(np.pi / 3), "-o", str(path))
        payload = json.loads(run_cli("angles", str(path)).stdout)
        assert payload["c"] == pytest.approx(0.5, abs=1e-12)

    def test_missing_file_exit_one(self):
        assert run_cli("angles", "/nonexistent/sys.json").returncode == 1

    def test_numerical_failure_exit_two(self, tmp_path):
        # nearly coincident lines sit below the tolerance policy's resolution
        eps = 1e-6
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dim": 2, "subspaces": [
            {"name": "a", "vectors": [[1.0, 0.0]]},
            {"name": "b", "vectors": [[np.cos(eps), np.sin(eps)]]},
        ]}))
        result = run_cli("angles", str(path))
        assert result.returncode == 2
        assert "numerical failure" in result.stderr


class TestIterate:
    def test_cyclic_coordinate_example(self, tmp_path):
        path = tmp_path / "sys.json"
        run_cli("gen", "--family", "example3", "--dim", "12", "-o", str(path))
        result = run_cli("iterate", str(path), "--order", "cyclic", "--iters", "50", "--seed", "1")
        lines = result.stdout.strip().splitlines()
        assert lines[0] == "n,measured"
        rows = [line.split(",") for line in lines[1:]]
        assert [int(r[0]) for r in rows] == list(range(1, 51))
        assert float(rows[-1][1]) <= 1e-10

    def test_x0_in_intersection_gives_zero_column(self, tmp_path):
        path = tmp_path / "sys.json"
        path.write_text(json.dumps({"dim": 2, "subspaces": [
            {"name": "a", "vectors": [[1.0, 0.0], [0.0, 1.0]]},
            {"name": "b", "vectors": [[1.0, 0.0]]},
        ]}))
        result = run_cli("iterate", str(path), "--x0", "3.0,0.0", "--iters", "5")
        values = [float(line.split(",")[1]) for line in result.stdout.strip().splitlines()[1:]]
        assert values == [0.0] * 5

    def test_random_order_deterministic(self, tmp_path):
        path = tmp_path / "sys.json"
        run_cli("gen", "--family", "random", "--dim", "6", "--dims", "2,2", "--seed", "3", "-o", str(path))
        args = ("iterate", str(path), "--order", "random", "--seed", "5", "--iters", "40")
        assert run_cli(*args).stdout == run_cli(*args).stdout

    def test_explicit_order_needs_indices(self, tmp_path):
        path = tmp_path / "sys.json"
        run_cli("gen", "--family", "two-lines", "--theta", "0.9", "-o", str(path))
        assert run_cli("iterate", str(path), "--order", "explicit").returncode == 1
        good = run_cli("iterate", str(path), "--order", "explicit", "--indices", "1,2,1,2", "--iters", "4")
        assert good.returncode == 0

    def test_invalid_order_exit_one(self, tmp_path):
        path = tmp_path / "sys.json"
        run_cli("gen", "--family", "two-lines", "--theta", "0.9", "-o", str(path))
        assert run_cli("iterate", str(path), "--order", "zigzag").returncode == 1


class TestBounds:
    def test_coordinate_example_report(self, tmp_path):
        path = tmp_path / "sys.json"
        run_cli("gen", "--family", "example3", "--dim", "12", "-o", str(path))
        trace = tmp_path / "trace.csv"
        result = run_cli("bounds", str(path), "--iters", "40", "--trace", str(trace))
        assert result.returncode == 0
        payload = json.loads(result.stdout)
        entries = {e["name"]: e for e in payload["entries"]}
        assert entries["corMain"]["satisfied"]
        assert "uninformative" in entries["DeHu"]["note"]
        header = trace.read_text().splitlines()[0]
        assert header == "n,measured,corMain,DeHu"

    def test_pair_reports_kw_deviation(self, tmp_path):
        path = tmp_path / "sys.json"
        run_cli("gen", "--family", "two-lines", "--theta", str(np.pi / 3), "-o", str(path))
        payload = json.loads(run_cli("bounds", str(path)).stdout)
        entries = {e["name"]: e for e in payload["entries"]}
        assert entries["KW"]["max_abs_deviation"] <= 1e-8
        assert all(e["satisfied"] for e in payload["entries"])

    def test_random_triple_all_bounds_hold(self, tmp_path):
        path = tmp_path / "sys.json"
        run_cli("gen", "--family", "random", "--dim", "9", "--dims", "3,3,3", "--seed", "7", "-o", str(path))
        payload = json.loads(run_cli("bounds", str(path), "--iters", "60").stdout)
        assert all(e["satisfied"] for e in payload["entries"])
        assert not payload["degenerate"]


class TestProbeSlow:
    def test_success_run(self, tmp_path):
        trace = tmp_path / "probe.csv"
        result = run_cli("probe-slow", "--k", "60", "--seq", "pow:0.5", "--horizon", "100",
                         "--trace", str(trace))
        assert result.returncode == 0
        payload = json.loads(result.stdout)
        assert payload["success"] is True
        assert payload["achieved_horizon"] == 100
        assert len(payload["x"]) == 120
        lines = trace.read_text().strip().splitlines()
        assert lines[0] == "n,measured,target"
        measured = np.array([float(l.split(",")[1]) for l in lines[1:]])
        target = np.array([float(l.split(",")[2]) for l in lines[1:]])
        assert (measured + 1e-12 >= target).all()

    def test_infeasible_is_informative_not_an_error(self):
        result = run_cli("probe-slow", "--k", "1", "--seq", "log", "--horizon", "100")
        assert result.returncode == 0
        payload = json.loads(result.stdout)
        assert payload["success"] is False
        assert payload["achieved_horizon"] < 100

    def test_all_zero_file_sequence(self, tmp_path):
        seq = tmp_path / "zeros.txt"
        seq.write_text("0 0 0 0 0\n")
        result = run_cli("probe-slow", "--k", "2", "--seq", f"file:{seq}", "--horizon", "5")
        payload = json.loads(result.stdout)
        assert payload["success"] is True
        assert np.linalg.norm(payload["x"]) == pytest.approx(1.0, abs=1e-12)

    def test_bad_seq_form_exit_one(self):
        assert run_cli("probe-slow", "--k", "2", "--seq", "exp", "--horizon", "5").returncode == 1
