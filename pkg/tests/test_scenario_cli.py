import csv
import io
import json
import math
import subprocess
import sys

import pytest

from isocompare import cli, scenario as sc
from isocompare.errors import ScenarioError
from isocompare.reports import VerificationReport

SMALL = {
    "version": "v1",
    "name": "small_disk",
    "manifold": {"kind": "ModelBall", "k": 0, "n": 2, "radius": 1},
    "k": 0,
    "verifiers": [
        {"id": "isodiametric"},
        {"id": "cut_isoperimetric"},
        {"id": "tube", "params": {"rho_grid": [0.5, 1.0]}},
    ],
    "tolerances": {"default": 1e-6},
    "resolution": {"panels": 8},
}


def write(tmp_path, doc, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture(scope="module")
def small_reports():
    return sc.run(sc.scenario_from_dict(SMALL))


class TestLoad:
    def test_bundled(self):
        s = sc.load_scenario("euclidean_ball.json")
        assert s.manifold.kind == "ModelBall" and s.manifold.params == {"k": 0, "n": 3, "radius": 1}
        assert len(s.verifiers) == 6

    def test_every_bundled_scenario_loads(self):
        names = sc.bundled_scenarios()
        assert len(names) == 14
        for name in names:
            assert sc.load_scenario(name).name

    def test_unknown_theorem(self, tmp_path):
        doc = dict(SMALL, verifiers=[{"id": "thm_99"}])
        with pytest.raises(ScenarioError, match="thm_99"):
            sc.load_scenario(write(tmp_path, doc))

    def test_negative_resolution(self, tmp_path):
        doc = dict(SMALL, resolution={"panels": -4})
        with pytest.raises(ScenarioError, match="resolution.panels"):
            sc.load_scenario(write(tmp_path, doc))

    @pytest.mark.parametrize("change,match", [
        ({"version": "v2"}, "version"),
        ({"extra": 1}, "unknown fields"),
        ({"tolerances": {"default": 1e-20}}, "floor"),
        ({"tolerances": {"thm_1": 1e-3}}, "tolerances.thm_1"),
        ({"k": "zero"}, "k"),
        ({"verifiers": []}, "non-empty"),
        ({"manifold": {"kind": "Klein"}}, "manifold"),
    ])
    def test_validation(self, change, match):
        with pytest.raises(ScenarioError, match=match):
            sc.scenario_from_dict(dict(SMALL, **change))

    def test_missing_version(self):
        doc = {k: v for k, v in SMALL.items() if k != "version"}
        with pytest.raises(ScenarioError, match="version"):
            sc.scenario_from_dict(doc)

    def test_parse_error_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "version": "v1",\n  "name": \n}')
        with pytest.raises(ScenarioError, match="line 4"):
            sc.load_scenario(path)

    def test_round_trip(self):
        s = sc.scenario_from_dict(SMALL)
        again = sc.scenario_from_dict(json.loads(json.dumps(s.to_dict())))
        assert again == s and again.to_dict() == s.to_dict()

    def test_overrides(self):
        s = sc.with_overrides(sc.scenario_from_dict(SMALL), tolerance=1e-4, samples=12)
        assert s.tolerance_for("tube") == 1e-4 and s.resolution["panels"] == 12


class TestRun:
    def test_ordering_and_status(self, small_reports):
        ids = [r.theorem_id for r in small_reports]
        assert ids == sorted(ids)
        assert all(r.status == "pass" for r in small_reports)
        assert all(r.equality_satisfied for r in small_reports)
        assert sc.exit_status(small_reports) == sc.EXIT_OK

    def test_deterministic_json(self, small_reports):
        again = sc.run(sc.scenario_from_dict(SMALL), parallelism=2)
        assert sc.reports_to_json(again) == sc.reports_to_json(small_reports)

    def test_exit_codes(self):
        def rep(status):
            return VerificationReport("hkr", status=status)
        assert sc.exit_status([rep("pass"), rep("vacuous")]) == 0
        assert sc.exit_status([rep("pass"), rep("hypothesis-failure")]) == 2
        assert sc.exit_status([rep("not-applicable")]) == 2
        assert sc.exit_status([rep("hypothesis-failure"), rep("fail")]) == 1
        assert sc.exit_status([rep("fail"), rep("error")]) == 3

    def test_counterexamples(self):
        torus = sc.run(sc.load_scenario("torus_counterexample.json"))
        assert [r.status for r in torus] == ["not-applicable"]
        rev = sc.run(sc.load_scenario("revolution_counterexample.json"))
        assert rev and all(r.status == "hypothesis-failure" for r in rev)
        assert sc.exit_status(torus) == sc.exit_status(rev) == 2


class TestEmit:
    def test_json_round_trip(self, small_reports):
        text = sc.reports_to_json(small_reports)
        doc = json.loads(text)
        assert doc["version"] == "v1" and len(doc["reports"]) == len(small_reports)
        back = sc.reports_from_json(text)
        assert sc.reports_to_json(back) == text

    def test_nonfinite_floats(self):
        r = VerificationReport("cutlocus_bound", lhs=math.inf, rhs=math.nan, status="error")
        back = sc.reports_from_json(sc.reports_to_json([r]))[0]
        assert back.lhs == math.inf and math.isnan(back.rhs)

    def test_csv(self, small_reports):
        rows = list(csv.reader(io.StringIO(sc.reports_to_csv(small_reports))))
        assert rows[0] == ["theorem_id", "scenario", "lhs", "rhs", "margin", "pass", "status"]
        assert len(rows) == len(small_reports) + 1

    def test_plotdata_bishop_gromov(self):
        from isocompare import suite
        from isocompare.geometry.spec import ManifoldSpec
        S2 = ManifoldSpec.make("SpaceForm", k=1, n=2).build()
        rep = suite.verify_bishop_gromov(S2, 0.0, r_grid=[0.5, 1.0, 1.5, 2.0, 2.5], scenario="s2")
        files = sc.reports_to_plotdata([rep])
        (name,) = [n for n in files if n.endswith("_ratio.dat")]
        body = files[name]
        assert "# theorem: bishop_gromov" in body and "# scenario: s2" in body
        data = [list(map(float, ln.split())) for ln in body.splitlines() if not ln.startswith("#")]
        ratios = [row[1] for row in data]
        assert all(b < a for a, b in zip(ratios, ratios[1:]))

    def test_empty_list(self, tmp_path):
        for fn in (sc.reports_to_json, sc.reports_to_csv, sc.reports_to_plotdata):
            with pytest.raises(ValueError):
                fn([])

    def test_write_outputs(self, small_reports, tmp_path):
        paths = sc.write_outputs(small_reports, tmp_path)
        assert (tmp_path / "reports.json").exists() and (tmp_path / "reports.csv").exists()
        assert any(p.parent.name == "plotdata" for p in paths)


class TestCli:
    def test_kernels_rows(self, capsys):
        assert cli.main(["kernels", "--k", "0", "--n", "3", "--range", "1:1:1", "--rho", "0.5"]) == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert float(rows[0]["h_k"]) == pytest.approx(1 / 3)
        assert "j_k_rho=0.5" in rows[0]

    def test_kernels_hemisphere(self, capsys):
        assert cli.main(["kernels", "--k", "1", "--n", "2", "--range", "1.5707963267948966:1.6:1"]) == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert float(rows[0]["h_k"]) == pytest.approx(1.0, rel=1e-8)

    def test_kernels_domain_error(self, capsys):
        assert cli.main(["kernels", "--k", "1", "--n", "2", "--range", "3:3.5:0.25"]) == 3
        assert "error" in capsys.readouterr().err

    def test_verify_and_report(self, tmp_path, capsys):
        path = write(tmp_path, SMALL)
        out = tmp_path / "out"
        assert cli.main(["verify", "--scenario", str(path), "--out", str(out)]) == 0
        assert "exit status 0" in capsys.readouterr().out
        assert cli.main(["report", "--format", "csv", "--input", str(out / "reports.json")]) == 0
        assert capsys.readouterr().out.startswith("theorem_id,")

    def test_verify_bad_scenario(self, tmp_path, capsys):
        path = write(tmp_path, dict(SMALL, verifiers=[{"id": "thm_99"}]))
        assert cli.main(["verify", "--scenario", str(path)]) == 3

    def test_cutlocus(self, tmp_path, capsys):
        out = tmp_path / "cut.csv"
        assert cli.main(["cutlocus", "--scenario", "torus_cutlocus.json", "--point", "0,0",
                         "--out", str(out)]) == 0
        rows = list(csv.reader(out.open()))
        assert rows[0] == ["direction_index", "t", "chart_x", "chart_y"]
        assert "measure=2" in capsys.readouterr().err

    def test_fk(self, tmp_path, capsys):
        assert cli.main(["fk", "--k", "1", "chord", "--x1", "0", "--y1", "1", "--x2", "1.5707963267948966",
                         "--y2", "0", "--at", "0.5"]) == 0
        assert float(capsys.readouterr().out.splitlines()[1].split(",")[1]) == pytest.approx(math.cos(0.5))
        data = tmp_path / "f.txt"
        data.write_text("\n".join(f"{t} {t * t}" for t in (0.1, 0.5, 1.0, 1.5)))
        assert cli.main(["fk", "--k", "0", "check", str(data), "--sense", "convex"]) == 0
        assert cli.main(["fk", "--k", "0", "check", str(data), "--sense", "concave"]) == 1

    def test_console_script(self):
        proc = subprocess.run([sys.executable, "-m", "isocompare.cli", "kernels", "--k", "-1", "--n", "2",
                               "--range", "1:2:0.5"], capture_output=True, text=True)
        assert proc.returncode == 0 and len(proc.stdout.splitlines()) == 4
