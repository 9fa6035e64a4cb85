"""Scenario files: loading, validation errors, execution, determinism."""

import textwrap

import pytest
import yaml

from ambicap import (
    ScenarioError,
    builtin_machina_suite,
    bundled_scenario_paths,
    load_scenario,
    run_queries,
    scenario_from_dict,
)
from ambicap.scenario import _parse_affine, _parse_number


def _write(tmp_path, text, name="scenario.yaml"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return path


MINIMAL = """
name: minimal
states: [a, b]
acts:
  f: [10, 0]
  g: ["1/2", 0]
families:
  m:
    kind: finite
    members:
      - vertices: [["1/2", "1/2"]]
        cost: 0
models:
  main: {family: m, variant: cap}
queries:
  - {kind: evaluate, model: main, lottery: f, expect: {value: 5}}
"""


class TestParsers:
    def test_rational_numbers(self):
        assert _parse_number("50/101", "x") == pytest.approx(50.0 / 101.0, abs=0)
        assert _parse_number("0.25", "x") == 0.25
        assert _parse_number(3, "x") == 3.0
        with pytest.raises(ScenarioError):
            _parse_number("fifty", "x")
        with pytest.raises(ScenarioError):
            _parse_number(True, "x")

    def test_affine_expressions(self):
        const, coefs = _parse_affine("50 - 25*beta - 25*gamma", ("beta", "gamma"), "x")
        assert const == 50.0 and coefs == [-25.0, -25.0]
        const, coefs = _parse_affine("25/101 + 25/101*beta", ("beta",), "x")
        assert const == pytest.approx(25 / 101, abs=0)
        assert coefs[0] == pytest.approx(25 / 101, abs=0)
        const, coefs = _parse_affine("beta", ("beta", "gamma"), "x")
        assert const == 0.0 and coefs == [1.0, 0.0]
        const, coefs = _parse_affine("-beta + beta", ("beta",), "x")
        assert coefs == [0.0]
        const, coefs = _parse_affine(0.75, ("beta",), "x")
        assert const == 0.75 and coefs == [0.0]

    def test_affine_rejects_unknown_names(self):
        with pytest.raises(ScenarioError, match="delta"):
            _parse_affine("2*delta", ("beta",), "x")
        with pytest.raises(ScenarioError):
            _parse_affine("beta*beta*beta", ("beta",), "x")
        with pytest.raises(ScenarioError):
            _parse_affine("", ("beta",), "x")


class TestLoading:
    def test_minimal_scenario(self, tmp_path):
        scenario = load_scenario(_write(tmp_path, MINIMAL))
        assert scenario.name == "minimal"
        assert len(scenario.states) == 2
        assert scenario.acts["g"].payoffs[0] == pytest.approx(0.5, abs=0)
        report = run_queries(scenario)
        assert report.exit_code == 0

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError):
            load_scenario(tmp_path / "nope.yaml")

    def test_yaml_parse_error(self, tmp_path):
        path = _write(tmp_path, "states: [a, b\nacts: {")
        with pytest.raises(ScenarioError, match="parse error"):
            load_scenario(path)

    def test_utility_table_lookup(self, tmp_path):
        text = MINIMAL.replace(
            "acts:\n  f: [10, 0]",
            "utility_table: {win: 10}\nacts:\n  f: [win, 0]",
        )
        scenario = load_scenario(_write(tmp_path, text))
        assert scenario.acts["f"].payoffs[0] == 10.0

    @pytest.mark.parametrize(
        "breakage, path_fragment",
        [
            ("states: [a]", "states"),
            ("f: [10, 0, 3]", "acts.f"),
            ("f: [ten, 0]", "acts.f[0]"),
            ("lottery: f,", "queries[0].lottery"),
            ("model: main,", "queries[0].model"),
            ("kind: evaluate", "queries[0].kind"),
            ("variant: cap", "models.main.variant"),
            ("family: m,", "models.main.family"),
        ],
    )
    def test_path_precise_errors(self, tmp_path, breakage, path_fragment):
        replacements = {
            "states: [a]": ("states: [a, b]", "states: [a]"),
            "f: [10, 0, 3]": ("f: [10, 0]", "f: [10, 0, 3]"),
            "f: [ten, 0]": ("f: [10, 0]", "f: [ten, 0]"),
            "lottery: f,": ("lottery: f,", "lottery: missing,"),
            "model: main,": ("model: main,", "model: missing,"),
            "kind: evaluate": ("kind: evaluate", "kind: frobnicate"),
            "variant: cap": ("variant: cap", "variant: optimist"),
            "family: m,": ("family: m,", "family: missing,"),
        }
        old, new = replacements[breakage]
        path = _write(tmp_path, MINIMAL.replace(old, new))
        with pytest.raises(ScenarioError) as err:
            load_scenario(path)
        assert path_fragment in err.value.path

    def test_non_grounded_family_rejected(self, tmp_path):
        text = MINIMAL.replace("cost: 0", "cost: 3")
        with pytest.raises(ScenarioError, match="families.m"):
            load_scenario(_write(tmp_path, text))

    def test_vertex_rows_must_be_distributions(self, tmp_path):
        text = MINIMAL.replace('[["1/2", "1/2"]]', '[["1/2", "1/3"]]')
        with pytest.raises(ScenarioError, match="families.m.members"):
            load_scenario(_write(tmp_path, text))

    def test_grid_override(self, tmp_path):
        text = """
        name: parametric
        states: [a, b]
        acts: {f: [10, 0]}
        families:
          m:
            kind: parametric
            params: [t]
            grid_resolution: 11
            cost: "1 - t"
            vertices:
              - ["1/2 - 1/2*t", "1/2 + 1/2*t"]
              - ["1/2 + 1/2*t", "1/2 - 1/2*t"]
        models:
          main: {family: m, variant: cap}
        queries:
          - {kind: evaluate, model: main, lottery: f}
        """
        scenario = load_scenario(_write(tmp_path, text), grid_resolution=4)
        assert scenario.families["m"].grid_resolution == 4

    def test_unknown_axiom_in_query(self, tmp_path):
        text = MINIMAL.replace(
            "- {kind: evaluate, model: main, lottery: f, expect: {value: 5}}",
            "- {kind: axioms, model: main, axioms: [A9-novel]}",
        )
        with pytest.raises(ScenarioError, match="queries"):
            load_scenario(_write(tmp_path, text))


class TestExecution:
    def test_expect_failure_sets_exit_one(self, tmp_path):
        text = MINIMAL.replace("expect: {value: 5}", "expect: {value: 6}")
        report = run_queries(load_scenario(_write(tmp_path, text)))
        assert report.exit_code == 1
        assert report.results[0].status == "expect-failed"
        assert "value" in report.results[0].message

    def test_error_query_keeps_going(self, tmp_path):
        text = """
        name: resilient
        states: [a, b]
        acts: {f: [10, 0]}
        families:
          m: {kind: finite, members: [{vertices: [["1/2", "1/2"]], cost: 0}]}
        models:
          main: {family: m, variant: dual_self}
        queries:
          - {kind: comparatives, which: more_tolerant_ambiguity,
             model1: main, model2: main, samples: 5}
          - {kind: evaluate, model: main, lottery: f, expect: {value: 5}}
        """
        report = run_queries(load_scenario(_write(tmp_path, text)))
        assert report.exit_code == 3
        assert [r.status for r in report.results] == ["error", "ok"]
        assert report.results[0].message

    def test_machine_report_is_deterministic(self, tmp_path):
        path = _write(tmp_path, MINIMAL)
        a = run_queries(load_scenario(path)).to_machine()
        b = run_queries(load_scenario(path)).to_machine()
        assert a == b
        assert '"duration"' not in a and "duration_s" not in a

    def test_parallel_matches_sequential(self):
        for path in bundled_scenario_paths():
            scenario = load_scenario(path)
            seq = run_queries(scenario).to_machine()
            par = run_queries(scenario, parallel=True).to_machine()
            assert seq == par

    def test_human_report_includes_timing_and_summary(self, tmp_path):
        report = run_queries(load_scenario(_write(tmp_path, MINIMAL)))
        text = report.to_human()
        assert "s)" in text and "exit 0" in text

    def test_kind_filter(self, tmp_path):
        report = run_queries(
            load_scenario(_write(tmp_path, MINIMAL)), kinds=("compare",)
        )
        assert report.results == []
        assert report.exit_code == 0

    def test_seed_override_is_deterministic(self, tmp_path):
        text = MINIMAL.replace(
            "- {kind: evaluate, model: main, lottery: f, expect: {value: 5}}",
            "- {kind: axioms, model: main, trials: 30, seed: 5}",
        )
        path = _write(tmp_path, text)
        a = run_queries(load_scenario(path), seed_override=9).to_machine()
        b = run_queries(load_scenario(path), seed_override=9).to_machine()
        assert a == b


class TestRoundTrip:
    def test_serialize_load_idempotent(self, tmp_path):
        for path in bundled_scenario_paths():
            scenario = load_scenario(path)
            dumped = yaml.safe_dump(scenario.to_dict())
            reloaded = scenario_from_dict(
                yaml.safe_load(dumped), name_hint=scenario.name
            )
            assert reloaded.name == scenario.name
            assert reloaded.acts.keys() == scenario.acts.keys()
            assert run_queries(reloaded).to_machine() == run_queries(
                scenario
            ).to_machine()


class TestBundledScenarios:
    def test_five_scenarios_ship(self):
        assert len(bundled_scenario_paths()) == 5

    def test_every_bundled_scenario_passes(self):
        for path in bundled_scenario_paths():
            report = run_queries(load_scenario(path))
            assert report.exit_code == 0, (
                path.name,
                [(r.name, r.status, r.message) for r in report.results],
            )

    def test_builtin_suite_aggregates(self):
        report = builtin_machina_suite()
        assert report.exit_code == 0
        assert report.scenario == "builtin-machina-suite"
        assert len(report.results) == 33
