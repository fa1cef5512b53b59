import json

import pytest

from lllshift import cli
from lllshift import serialize as ser
from lllshift.shift import BoundViolationError


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def z100_config(tmp_path):
    return write_config(
        tmp_path,
        {
            "group": {"family": "cyclic", "moduli": [100]},
            "k": 2,
            "pattern": {"support": [[0]], "values": [0]},
            "F": [[i] for i in range(8)],
        },
    )


def unsat_instance(tmp_path):
    doc = {
        "format": "lll-instance",
        "k": 2,
        "variables": {"kind": "name", "items": ["v0"]},
        "events": [
            {"domain": ["v0"], "forbidden": [[0]]},
            {"domain": ["v0"], "forbidden": [[1]]},
        ],
    }
    path = tmp_path / "unsat.json"
    path.write_text(json.dumps(doc))
    return str(path)


class TestEll0Command:
    def test_basic(self, capsys):
        code, out, _ = run(capsys, "ell0", "--k", "2", "--dsize", "1")
        assert code == 0
        assert "ell0=8 n=8" in out
        assert "straddles" not in out

    def test_degenerate_alphabet(self, capsys):
        code, out, _ = run(capsys, "ell0", "--k", "1", "--dsize", "3")
        assert code == 0
        assert "ell0=1 n=9" in out
        assert "degenerate" in out

    def test_zero_k_usage_error(self, capsys):
        code, _, _ = run(capsys, "ell0", "--k", "0", "--dsize", "1")
        assert code == 2

    def test_missing_subcommand(self, capsys):
        assert run(capsys, )[0] == 2


class TestDemoCommand:
    def test_full_pipeline(self, tmp_path, capsys):
        cfg = z100_config(tmp_path)
        out_dir = tmp_path / "out"
        code, out, err = run(
            capsys, "demo", "--config", cfg, "--seed", "7", "--out", str(out_dir)
        )
        assert code == 0
        assert "p=1/256 d=14" in out
        assert "verdict=correct" in out
        assert "ell0=8 n=8" in out
        assert "trapping: 100/100" in out
        for name in ("instance.json", "solution.json", "trap_report.json"):
            assert (out_dir / name).exists()
        report = json.loads((out_dir / "trap_report.json").read_text())
        assert report["all_trapped"] is True

    def test_byte_identical_reruns(self, tmp_path, capsys):
        cfg = z100_config(tmp_path)
        d1, d2 = tmp_path / "r1", tmp_path / "r2"
        assert run(capsys, "demo", "--config", cfg, "--seed", "3", "--out", str(d1))[0] == 0
        assert run(capsys, "demo", "--config", cfg, "--seed", "3", "--out", str(d2))[0] == 0
        for name in ("instance.json", "solution.json", "trap_report.json"):
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()

    def test_different_seeds_differ(self, tmp_path, capsys):
        cfg = z100_config(tmp_path)
        d1, d2 = tmp_path / "s1", tmp_path / "s2"
        run(capsys, "demo", "--config", cfg, "--seed", "1", "--out", str(d1))
        run(capsys, "demo", "--config", cfg, "--seed", "2", "--out", str(d2))
        assert (d1 / "solution.json").read_bytes() != (d2 / "solution.json").read_bytes()

    def test_undersized_pool_warns_but_runs(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "group": {"family": "cyclic", "moduli": [30]},
                "k": 2,
                "pattern": {"support": [[0]], "values": [0]},
                "F": [[0], [10], [20]],
            },
        )
        code, out, err = run(
            capsys, "demo", "--config", cfg, "--out", str(tmp_path / "w")
        )
        assert "warning" in err.lower() or "ell0" in err
        # trapping still holds whenever a solution was found
        if code == 0:
            report = json.loads((tmp_path / "w" / "trap_report.json").read_text())
            assert report["all_trapped"] is True

    def test_malformed_json_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, err = run(capsys, "demo", "--config", str(bad))
        assert code == 2

    def test_bound_violation_exit_3(self, tmp_path, capsys, monkeypatch):
        def boom(built):
            raise BoundViolationError("synthetic")

        monkeypatch.setattr(cli, "check_instance_bounds", boom)
        code, _, err = run(capsys, "demo", "--config", z100_config(tmp_path))
        assert code == 3
        assert "synthetic" in err


class TestBuildCommand:
    def test_writes_instance(self, tmp_path, capsys):
        cfg = z100_config(tmp_path)
        code, out, _ = run(capsys, "build", "--config", cfg, "--out", str(tmp_path))
        assert code == 0
        inst, ctx = ser.instance_from_json(ser.read_json(tmp_path / "instance.json"))
        assert len(inst.events) == 100


class TestSolveCommand:
    def test_mt_then_verify(self, tmp_path, capsys):
        cfg = z100_config(tmp_path)
        run(capsys, "build", "--config", cfg, "--out", str(tmp_path))
        inst_path = str(tmp_path / "instance.json")
        sol_path = str(tmp_path / "solution.json")
        code, out, _ = run(
            capsys, "solve", "--instance", inst_path, "--seed", "5", "--out", sol_path
        )
        assert code == 0
        assert "resamples=" in out
        code, out, _ = run(capsys, "verify", "--instance", inst_path, "--solution", sol_path)
        assert code == 0
        assert json.loads(out.splitlines()[-1]) == {"violated": []}

    def test_bt_solver(self, tmp_path, capsys):
        cfg = z100_config(tmp_path)
        run(capsys, "build", "--config", cfg, "--out", str(tmp_path))
        # 100 binary variables exceed the default backtracking cap
        code, _, err = run(
            capsys, "solve", "--instance", str(tmp_path / "instance.json"),
            "--solver", "bt", "--out", str(tmp_path / "bt.json"),
        )
        assert code == 2

    def test_bt_unsatisfiable_exit_1(self, tmp_path, capsys):
        path = unsat_instance(tmp_path)
        code, _, err = run(
            capsys, "solve", "--instance", path, "--solver", "bt",
            "--out", str(tmp_path / "s.json"),
        )
        assert code == 1
        assert "unsatisfiable" in err

    def test_mt_budget_exhausted_exit_1(self, tmp_path, capsys):
        path = unsat_instance(tmp_path)
        code, _, err = run(
            capsys, "solve", "--instance", path, "--max-resamples", "25",
            "--out", str(tmp_path / "s.json"),
        )
        assert code == 1
        assert "exhausted" in err

    def test_small_bt_solves(self, tmp_path, capsys):
        doc = {
            "format": "lll-instance",
            "k": 2,
            "variables": {"kind": "name", "items": ["v0", "v1"]},
            "events": [{"domain": ["v0"], "forbidden": [[1]]}],
        }
        path = tmp_path / "small.json"
        path.write_text(json.dumps(doc))
        out_path = tmp_path / "sol.json"
        code, _, _ = run(
            capsys, "solve", "--instance", str(path), "--solver", "bt",
            "--out", str(out_path),
        )
        assert code == 0
        assert json.loads(out_path.read_text())["values"] == {"v0": 0, "v1": 0}


class TestVerifyCommand:
    def test_violations_exit_1(self, tmp_path, capsys):
        path = unsat_instance(tmp_path)
        sol = tmp_path / "sol.json"
        sol.write_text(json.dumps({"format": "lll-assignment", "values": {"v0": 0}}))
        code, out, _ = run(capsys, "verify", "--instance", path, "--solution", str(sol))
        assert code == 1
        assert json.loads(out.splitlines()[-1]) == {"violated": [0]}


class TestSeparateCommand:
    def test_left(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "group": {"family": "lattice", "dim": 1},
                "F": [[i] for i in range(8)],
                "D": [[0], [1]],
            },
        )
        code, out, _ = run(capsys, "separate", "--config", cfg, "--side", "left")
        assert code == 0
        doc = json.loads(out)
        assert doc["subset"] == [[0], [2], [4], [6]]
        assert doc["bound_met"] is True

    def test_right(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "group": {"family": "lattice", "dim": 1},
                "F": [[i] for i in range(6)],
                "D": [[0], [2]],
            },
        )
        code, out, _ = run(capsys, "separate", "--config", cfg, "--side", "right")
        assert code == 0
        assert json.loads(out)["subset"] == [[0], [1], [4], [5]]

    def test_empty_inputs_exit_2(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path, {"group": {"family": "lattice", "dim": 1}, "F": [], "D": [[0]]}
        )
        assert run(capsys, "separate", "--config", cfg)[0] == 2
