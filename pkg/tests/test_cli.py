import json
import math

import pytest

from inbody.cli import RunConfig, run


@pytest.fixture
def cube_file(tmp_path):
    path = tmp_path / "cube.json"
    rows = []
    for i in range(3):
        e = [0.0] * 3
        e[i] = 1.0
        rows.append({"a": e, "b": 1.0})
        rows.append({"a": [-v for v in e], "b": 0.0})
    path.write_text(json.dumps({"dim": 3, "halfspaces": rows}))
    return path


@pytest.fixture
def cantor_file(tmp_path):
    path = tmp_path / "cantor.json"
    path.write_text(json.dumps({
        "n": 1, "alphabet": ["a", "b"],
        "matrices": {"a": [[3, 2], [0, 1]], "b": [[1, 0], [2, 3]]},
        "seed_holes": [[[1 / 3], [2 / 3]]],
        "assume_measure_zero": True}))
    return path


def run_to_file(command, input_path, out, **kw):
    config = RunConfig(command=command, input_path=str(input_path),
                       output_path=str(out), **kw)
    return run(config), out


class TestCommands:
    def test_metrics_cube(self, cube_file, tmp_path):
        code, out = run_to_file("metrics", cube_file, tmp_path / "m.json")
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["volume"] == pytest.approx(1.0)
        assert rep["perimeter"] == pytest.approx(6.0)
        assert rep["inradius"] == pytest.approx(0.5)
        assert rep["satisfied"] is True
        assert rep["version"]
        assert rep["config"]["command"] == "metrics"

    def test_inner_and_bounds_alias(self, cube_file, tmp_path):
        code1, o1 = run_to_file("inner", cube_file, tmp_path / "i.json", eps=0.1)
        code2, o2 = run_to_file("bounds", cube_file, tmp_path / "b.json", eps=0.1)
        assert code1 == code2 == 0
        r1, r2 = json.loads(o1.read_text()), json.loads(o2.read_text())
        assert r1["l"] == r2["l"]
        assert r1["ok"] is True
        assert r1["l"] == pytest.approx(1 - 0.8 ** 3)

    def test_inner_requires_eps(self, cube_file, tmp_path):
        code, _ = run_to_file("inner", cube_file, tmp_path / "x.json")
        assert code == 2

    def test_profile_csv_closed_form(self, cube_file, tmp_path):
        code, out = run_to_file("profile", cube_file, tmp_path / "p.csv", grid=11)
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[1] == "eps,l_vol,g,g_over_n,chord,deriv"
        for line in lines[2:]:
            eps, l_vol = map(float, line.split(",")[:2])
            assert l_vol == pytest.approx(1 - (1 - 2 * eps) ** 3, abs=1e-9)

    def test_profile_square_closed_form(self, tmp_path):
        path = tmp_path / "square.json"
        path.write_text(json.dumps(
            {"dim": 2, "vertices": [[0, 0], [1, 0], [0, 1], [1, 1]]}))
        code, out = run_to_file("profile", path, tmp_path / "sq.csv", grid=11)
        assert code == 0
        for line in out.read_text().strip().split("\n")[2:]:
            eps, l_vol = map(float, line.split(",")[:2])
            assert l_vol == pytest.approx(1 - (1 - 2 * eps) ** 2, abs=1e-9)

    def test_oracle_verdict(self, cube_file, tmp_path):
        code, out = run_to_file("oracle", cube_file, tmp_path / "o.json",
                                samples=50_000, seed=11, eps=0.1)
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["volume_within_4_sigma"] is True
        assert rep["inner_within_4_sigma"] is True
        assert rep["mc_volume"]["samples"] == 50_000

    def test_attractor_estimate(self, cantor_file, tmp_path):
        code, out = run_to_file("attractor", cantor_file, tmp_path / "a.json",
                                max_depth=10, tol=0.01)
        assert code == 0
        rep = json.loads(out.read_text())
        target = math.log(2) / math.log(3)
        assert abs(rep["s_star"] - target) <= 0.02
        assert abs(rep["box_counting"] - target) <= 0.05
        assert rep["bracket_width"] <= 0.01
        assert rep["assume_measure_zero"] is True

    def test_norms_estimate(self, cantor_file, tmp_path):
        code, out = run_to_file("norms", cantor_file, tmp_path / "n.json",
                                max_depth=10, tol=0.01)
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["norm"] == "spectral"
        assert 0.0 <= rep["s_star"] <= 1.0


class TestDeterminism:
    def test_same_config_byte_identical(self, cube_file, tmp_path):
        _, out = run_to_file("oracle", cube_file, tmp_path / "r.json",
                             samples=50_000, seed=3)
        first = out.read_bytes()
        run_to_file("oracle", cube_file, tmp_path / "r.json",
                    samples=50_000, seed=3)
        assert out.read_bytes() == first

    def test_profile_byte_identical(self, cube_file, tmp_path):
        _, out = run_to_file("profile", cube_file, tmp_path / "p.csv", grid=9)
        first = out.read_bytes()
        run_to_file("profile", cube_file, tmp_path / "p.csv", grid=9)
        assert out.read_bytes() == first


class TestExitCodes:
    def test_missing_file_is_io_error(self, tmp_path):
        code = run(RunConfig(command="metrics",
                             input_path=str(tmp_path / "nope.json")))
        assert code == 2

    def test_malformed_json_is_parse_error(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run(RunConfig(command="metrics", input_path=str(path))) == 2

    def test_schema_violation_is_parse_error(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dim": 2}))
        assert run(RunConfig(command="metrics", input_path=str(path))) == 2

    def test_unbounded_body_is_validation_error(self, tmp_path, capsys):
        path = tmp_path / "halfline.json"
        path.write_text(json.dumps(
            {"dim": 1, "halfspaces": [{"a": [-1.0], "b": 0.0}]}))
        assert run(RunConfig(command="metrics", input_path=str(path))) == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "Unbounded"
