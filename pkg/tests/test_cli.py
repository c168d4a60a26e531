import json

import pytest

from lawprice.cli import main


def write_json(path, blob):
    path.write_text(json.dumps(blob, indent=1))
    return str(path)


@pytest.fixture
def scenario_path(tmp_path):
    return write_json(
        tmp_path / "scenario.json",
        {"n": 2, "payoffs": {"sym": [-1.0, 1.0], "up": [1.0, 3.0]}},
    )


def base_config(tmp_path, scenario_path, **extra):
    blob = {
        "scenario": scenario_path,
        "seed": 7,
        "tolerance": 1e-9,
        "out": str(tmp_path / "report.json"),
        **extra,
    }
    return write_json(tmp_path / "config.json", blob), blob["out"]


def run(command, config):
    return main([command, "--config", config])


class TestEval:
    def test_expectation_values_and_spreads(self, tmp_path, scenario_path):
        config, out = base_config(
            tmp_path, scenario_path, functionals=[{"type": "expectation", "c": 1.0}]
        )
        assert run("eval", config) == 0
        report = json.loads(open(out).read())
        rows = {r["payoff_id"]: r for r in report["results"]}
        assert rows["up"]["value"] == 2.0
        assert rows["up"]["spread"] == 0.0
        assert rows["up"]["frictionless"] is True
        assert report["seed"] == 7 and len(report["config_hash"]) == 64

    def test_es_example(self, tmp_path, scenario_path):
        config, out = base_config(
            tmp_path, scenario_path, functionals=[{"type": "expected_shortfall", "beta": 0.5}]
        )
        assert run("eval", config) == 0
        rows = {r["payoff_id"]: r for r in json.loads(open(out).read())["results"]}
        assert rows["sym"]["value"] == 1.0 and rows["sym"]["spread"] == 2.0

    def test_malformed_json_exits_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run("eval", str(bad)) == 2

    def test_missing_scenario_exits_2(self, tmp_path):
        config = write_json(
            tmp_path / "c.json",
            {"scenario": str(tmp_path / "nope.json"), "functionals": [{"type": "gate"}]},
        )
        assert run("eval", config) == 2

    def test_space_mismatch_exits_3(self, tmp_path):
        scenario = write_json(
            tmp_path / "s.json", {"n": 2, "payoffs": {"bad": [1.0, 2.0, 3.0]}}
        )
        config, _ = base_config(tmp_path, scenario, functionals=[{"type": "gate"}])
        assert run("eval", config) == 3

    def test_nonpositive_tolerance_exits_2(self, tmp_path, scenario_path):
        config, _ = base_config(
            tmp_path, scenario_path, functionals=[{"type": "gate"}], tolerance=-1.0
        )
        assert run("eval", config) == 2


class TestCollapse:
    def test_expectation_collapse_and_landscape(self, tmp_path, scenario_path):
        config, out = base_config(
            tmp_path,
            scenario_path,
            functionals=[{"type": "expectation", "c": 1.0}],
            budget=6,
        )
        assert run("collapse", config) == 0
        report = json.loads(open(out).read())
        assert report["results"][0]["verdict"] == "COLLAPSE"
        landscape = open(out + ".landscape.csv").read().splitlines()
        assert landscape[0] == "shift,spread" and len(landscape) > 100

    def test_gate_boundary(self, tmp_path, scenario_path):
        config, out = base_config(tmp_path, scenario_path, functionals=[{"type": "gate"}], budget=6)
        assert run("collapse", config) == 0
        assert json.loads(open(out).read())["results"][0]["verdict"] == "BOUNDARY"

    def test_non_law_invariant_exits_4(self, tmp_path, scenario_path):
        config, _ = base_config(
            tmp_path, scenario_path, functionals=[{"type": "atom_value", "index": 0}]
        )
        assert run("collapse", config) == 4


class TestRisk:
    def test_expectation_acceptance_closed_form(self, tmp_path, scenario_path):
        config, out = base_config(
            tmp_path,
            scenario_path,
            market={"basis": [[1.0, 1.0]], "prices": [1.0]},
            acceptance={"type": "expectation"},
        )
        assert run("risk", config) == 0
        rows = {r["payoff_id"]: r for r in json.loads(open(out).read())["results"]}
        assert rows["up"]["value"] == pytest.approx(-2.0, abs=1e-7)
        assert rows["up"]["sentinel"] is None
        assert rows["up"]["membership_evals"] > 0

    def test_es_gauge_example(self, tmp_path):
        scenario = write_json(tmp_path / "s.json", {"n": 2, "payoffs": {"x": [-2.0, 0.0]}})
        config, out = base_config(
            tmp_path,
            scenario,
            market={"basis": [[1.0, 1.0]], "prices": [0.9]},
            acceptance={"type": "es_loss", "beta": 0.5},
        )
        assert run("risk", config) == 0
        report = json.loads(open(out).read())
        assert report["results"][0]["value"] == pytest.approx(1.8, abs=1e-7)

    def test_k4_market_exits_5(self, tmp_path):
        scenario = write_json(
            tmp_path / "s.json", {"n": 4, "payoffs": {"x": [0.0, 0.0, 0.0, 0.0]}}
        )
        config, _ = base_config(
            tmp_path,
            scenario,
            market={
                "basis": [
                    [1.0, 0.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0, 0.0],
                    [0.0, 0.0, 1.0, 0.0],
                    [0.0, 0.0, 0.0, 1.0],
                ],
                "prices": [1.0, 1.0, 1.0, 1.0],
            },
            acceptance={"type": "expectation"},
        )
        assert run("risk", config) == 5

    def test_missing_market_exits_5(self, tmp_path, scenario_path):
        config, _ = base_config(tmp_path, scenario_path, acceptance={"type": "expectation"})
        assert run("risk", config) == 5


class TestAudit:
    def test_catalog_passes(self, tmp_path, scenario_path):
        config, out = base_config(
            tmp_path,
            scenario_path,
            functionals=[
                {"type": "expectation", "c": 1.0},
                {"type": "expected_shortfall", "beta": 0.5},
                {"type": "gate"},
            ],
            acceptance=[{"type": "expectation"}, {"type": "atom_indexed"}],
        )
        assert run("audit", config) == 0
        report = json.loads(open(out).read())["results"]
        assert report["ok"] is True
        kinds = [e["kind"] for e in report["entries"]]
        assert kinds.count("flag_audit") == 3
        skipped = [e for e in report["entries"] if e.get("skipped")]
        assert len(skipped) == 1  # the non-law-invariant set has no closure contract

    def test_mislabeled_functional_fails_audit(self, tmp_path, scenario_path):
        config, out = base_config(
            tmp_path,
            scenario_path,
            functionals=[{"type": "entropic", "theta": 1.0, "flags": {"sublinear": True}}],
        )
        assert run("audit", config) == 0
        report = json.loads(open(out).read())["results"]
        assert report["ok"] is False
        statuses = report["entries"][0]["statuses"]
        assert statuses["sublinear"] == "violated"

    def test_empty_scenario_exits_2(self, tmp_path):
        scenario = write_json(tmp_path / "s.json", {"n": 3, "payoffs": {}})
        config, _ = base_config(tmp_path, scenario, functionals=[{"type": "gate"}])
        assert run("audit", config) == 2


class TestOrlicz:
    def test_power_norms_and_delta2(self, tmp_path, scenario_path):
        config, out = base_config(tmp_path, scenario_path, young={"type": "power", "p": 2})
        assert run("orlicz", config) == 0
        report = json.loads(open(out).read())["results"]
        norms = {r["payoff_id"]: r["luxemburg_norm"] for r in report["norms"]}
        assert norms["sym"] == pytest.approx(1.0, abs=1e-8)
        assert report["delta2"]["holds"] is True
        assert report["delta2"]["k"] == pytest.approx(4.0, abs=1e-9)

    def test_linf_skips_delta2(self, tmp_path, scenario_path):
        config, out = base_config(tmp_path, scenario_path, young={"type": "linf"})
        assert run("orlicz", config) == 0
        report = json.loads(open(out).read())["results"]
        assert "skipped" in report["delta2"]

    def test_missing_young_exits_2(self, tmp_path, scenario_path):
        config, _ = base_config(tmp_path, scenario_path)
        assert run("orlicz", config) == 2


class TestDeterminism:
    @pytest.mark.parametrize(
        "command,extra",
        [
            ("eval", {"functionals": [{"type": "expected_shortfall", "beta": 0.5}]}),
            ("collapse", {"functionals": [{"type": "gate"}], "budget": 6}),
            (
                "risk",
                {
                    "market": {"basis": [[1.0, 1.0]], "prices": [1.0]},
                    "acceptance": {"type": "es_loss", "beta": 0.5},
                },
            ),
            ("audit", {"functionals": [{"type": "mean_abs_dev", "lam": 0.5}]}),
            ("orlicz", {"young": {"type": "power", "p": 2}}),
        ],
    )
    def test_byte_identical_reruns(self, tmp_path, scenario_path, command, extra):
        config, out = base_config(tmp_path, scenario_path, **extra)
        assert run(command, config) == 0
        first = open(out, "rb").read()
        assert run(command, config) == 0
        second = open(out, "rb").read()
        assert first == second

    def test_seed_override_changes_hash(self, tmp_path, scenario_path):
        config, out = base_config(
            tmp_path, scenario_path, functionals=[{"type": "gate"}]
        )
        assert main(["eval", "--config", config, "--seed", "99"]) == 0
        with_seed = json.loads(open(out).read())
        assert main(["eval", "--config", config]) == 0
        without = json.loads(open(out).read())
        assert with_seed["seed"] == 99 and without["seed"] == 7
        assert with_seed["config_hash"] != without["config_hash"]
