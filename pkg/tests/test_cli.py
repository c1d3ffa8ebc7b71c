"""Command line contract: exit codes, schemas, determinism."""

import json
import math

import pytest

from shearlab import cli, report
from shearlab.constants import Signature


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


SURFACE_03 = {
    "signature": {"g": 0, "n": 3},
    "pants": [{"slots": [{"cusp": 0}, {"cusp": 1}, {"cusp": 2}]}],
    "fn": [],
}

SURFACE_11 = {
    "signature": {"g": 1, "n": 1},
    "pants": [{"slots": [{"curve": 0}, {"curve": 0}, {"cusp": 0}]}],
    "fn": [{"curve": 0, "length": 1.0, "twist": 0.3}],
}

SURFACE_04 = {
    "signature": {"g": 0, "n": 4},
    "pants": [{"slots": [{"cusp": 0}, {"cusp": 1}, {"curve": 0}]},
              {"slots": [{"curve": 0}, {"cusp": 2}, {"cusp": 3}]}],
    "fn": [{"curve": 0, "length": 2.0, "twist": 0.7}],
}


def write_surface(tmp_path, data, name="surface.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


class TestConstantsCommand:
    def test_includes_delta1(self, capsys):
        code, out = run(["constants", "--g", "0", "--n", "3"], capsys)
        data = json.loads(out)
        assert abs(data["records"][0]["delta1"] - 0.2768065) <= 1e-6
        assert data["schema"] == "shearlab-report/1"

    def test_audit_failure_exit_code(self, capsys):
        # the audit honestly reports the two collar-gap bounds as failed,
        # so the documented audit-failure code is returned
        code, out = run(["constants", "--g", "2", "--n", "0"], capsys)
        data = json.loads(out)
        assert abs(data["records"][0]["main_bound"] - 148.354) < 1e-2
        assert code == 2 and not data["records"][0]["audit"]["ok"]

    def test_invalid_signature(self, capsys):
        with pytest.raises(SystemExit) as err:
            cli.main(["constants", "--g", "0", "--n", "2"])
        assert err.value.code == 1


class TestComputeCommand:
    def test_three_cusped_sphere(self, tmp_path, capsys):
        path = write_surface(tmp_path, SURFACE_03)
        code, out = run(["compute", path], capsys)
        assert code == 0
        rec = json.loads(out)["records"][0]
        assert all(abs(v) <= 1e-9 for v in rec["shears"].values())
        assert rec["certified"] and rec["bound_satisfied"]

    def test_once_punctured_torus_relations(self, tmp_path, capsys):
        path = write_surface(tmp_path, SURFACE_11)
        code, out = run(["compute", path], capsys)
        assert code == 0
        rec = json.loads(out)["records"][0]
        assert rec["cusp_residual"] < 1e-6
        assert rec["spiral_residual"] < 1e-6

    def test_uncertified_still_reported(self, tmp_path, capsys):
        sig = Signature(1, 1)
        from shearlab.constants import area
        bad = json.loads(json.dumps(SURFACE_11))
        bad["fn"][0]["length"] = 3 * math.log(4 * area(sig))
        path = write_surface(tmp_path, bad)
        code, out = run(["compute", path], capsys)
        assert code == 0
        rec = json.loads(out)["records"][0]
        assert not rec["certified"]
        assert rec["shears"]

    def test_degenerate_trace_is_reported_not_clamped(self, tmp_path, capsys):
        # tanh(l/4) saturates in double precision around l ~ 30 and the
        # cusp trace can no longer be certified; the pipeline refuses
        sig = Signature(1, 1)
        from shearlab.constants import area
        bad = json.loads(json.dumps(SURFACE_11))
        bad["fn"][0]["length"] = 10 * math.log(4 * area(sig))
        path = write_surface(tmp_path, bad)
        assert cli.main(["compute", path]) == 3

    def test_parse_error(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert cli.main(["compute", str(path)]) == 1

    def test_geometry_error(self, tmp_path, capsys):
        bad = json.loads(json.dumps(SURFACE_11))
        bad["fn"][0]["length"] = -1.0
        path = write_surface(tmp_path, bad)
        assert cli.main(["compute", path]) == 3


class TestSampleCommand:
    def test_deterministic_bytes(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        cli.main(["sample", "--g", "1", "--n", "1", "--count", "6",
                  "--seed", "42", "--out", str(a)])
        cli.main(["sample", "--g", "1", "--n", "1", "--count", "6",
                  "--seed", "42", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_csv_header_contract(self, capsys):
        code, out = run(["sample", "--g", "0", "--n", "4", "--count", "2",
                         "--seed", "1", "--format", "csv"], capsys)
        assert code == 0
        header = out.splitlines()[0]
        assert header == ("sample,gn,seed,certified,max_shear,bound,ratio,"
                          "cusp_residual,spiral_residual,min_margin")

    def test_summary_ratio_below_one(self, capsys):
        code, out = run(["sample", "--g", "1", "--n", "2", "--count", "8",
                         "--seed", "3"], capsys)
        data = json.loads(out)
        assert data["summary"]["max_ratio_certified"] < 1.0
        assert data["summary"]["bound_violations_certified"] == 0
        assert code == 0

    def test_config_hash_present(self, capsys):
        _, out = run(["sample", "--g", "1", "--n", "1", "--count", "2",
                      "--seed", "9"], capsys)
        data = json.loads(out)
        assert len(data["config"]["hash"]) == 16


class TestOptimizeCommand:
    def test_three_cusped_sphere_trivial(self, tmp_path, capsys):
        path = write_surface(tmp_path, SURFACE_03)
        code, out = run(["optimize", path, "--budget", "10"], capsys)
        assert code == 0
        rec = json.loads(out)["records"][0]
        assert rec["best_max_shear"] == 0.0
        assert rec["flips"] == []

    def test_budget_zero_echoes(self, tmp_path, capsys):
        path = write_surface(tmp_path, SURFACE_04)
        code, out = run(["optimize", path, "--budget", "0"], capsys)
        rec = json.loads(out)["records"][0]
        assert rec["best_max_shear"] == rec["start_max_shear"]

    def test_descent_contract(self, tmp_path, capsys):
        path = write_surface(tmp_path, SURFACE_04)
        code, out = run(["optimize", path, "--budget", "60", "--seed", "5"],
                        capsys)
        rec = json.loads(out)["records"][0]
        assert rec["best_max_shear"] <= rec["start_max_shear"]
        from shearlab.constants import main_bound
        assert rec["best_max_shear"] < main_bound(Signature(0, 4))

    def test_unsupported_surface(self, tmp_path, capsys):
        path = write_surface(tmp_path, SURFACE_11)
        assert cli.main(["optimize", path]) == 4


class TestToleranceOverride:
    def test_env_tolerance_respected(self, monkeypatch):
        # an absurdly small override makes the relation check fail
        monkeypatch.setenv("SHEARLAB_TOL", "1e-30")
        assert report.relation_tolerance() == 1e-30
        from shearlab.surface import (FNCoordinates, canonical_pants_graph)
        sig = Signature(1, 1)
        pg = canonical_pants_graph(sig)
        fn = FNCoordinates({0: 1.0}, {0: 0.2})
        rec = report.run_surface(sig, pg, fn)
        assert not rec["relations_ok"]
        monkeypatch.delenv("SHEARLAB_TOL")
        rec = report.run_surface(sig, pg, fn)
        assert rec["relations_ok"]
