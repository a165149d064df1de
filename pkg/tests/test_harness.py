import io
import json
from pathlib import Path

import jsonschema
import pytest

from tsineq.errors import ParseError, ValidationError
from tsineq.harness import (
    CHECKS,
    CSV_COLUMNS,
    PROFILES,
    Scenario,
    SuiteReport,
    dump_scenario,
    emit_report,
    generate_scenarios,
    is_finite_record,
    load_report,
    load_scenario,
    parse_scenario,
    reduction_check,
    run_suite,
)

DOCS = Path(__file__).resolve().parents[1] / "docs"
SCHEMA = json.loads((DOCS / "scenario.schema.json").read_text())

MINIMAL = """\
id: square
timescale: [[0, 1]]
window: [0, 1]
functions: {f: t^2}
lambda: 0
checks: [pach1.1]
"""


def scenario(**over):
    d = {"id": "s", "timescale": [[0, 1]], "window": [0, 1], "functions": {"f": "t^2"},
         "lambda": 0, "checks": ["pach1.1"]}
    d.update(over)
    return d


class TestLoad:
    def test_minimal(self, tmp_path):
        path = tmp_path / "s.yaml"
        path.write_text(MINIMAL)
        s = load_scenario(path)
        assert s.id == "square" and s.window == (0.0, 1.0) and s.checks == ("pach1.1",)
        assert s.functions == {"f": "t^2", "w": "t"}

    @pytest.mark.parametrize("over, field", [
        ({"lambda": 1.5}, "lambda"),
        ({"lambda": True}, "lambda"),
        ({"window": [0, 2]}, "window"),
        ({"window": [1, 0]}, "window"),
        ({"window": [0]}, "window"),
        ({"id": ""}, "id"),
        ({"timescale": [[1, 0]]}, "timescale"),
        ({"timescale": []}, "timescale"),
        ({"checks": ["thm9.9"]}, "checks"),
        ({"checks": []}, "checks"),
        ({"checks": ["thm3.7"]}, "functions.p"),
        ({"functions": {"f": "tan(t)"}}, "functions.f"),
        ({"functions": {"f": "t", "g": "t"}}, "functions.g"),
        ({"psi": {"kind": "power"}}, "psi"),
        ({"psi": {"kind": "constant", "value": 2}}, "psi"),
        ({"quadrature": {"panels_per_unit": 4}}, "quadrature"),
        ({"colour": "red"}, "colour"),
    ])
    def test_validation_names_field(self, over, field):
        with pytest.raises(ValidationError) as info:
            Scenario.from_dict(scenario(**over))
        assert info.value.field == field

    def test_parse_error_location(self):
        with pytest.raises(ParseError) as info:
            parse_scenario("id: x\ntimescale: [[0, 1]\nwindow: [0, 1]\n", "bad.yaml")
        assert str(info.value).startswith("bad.yaml:3:")

    def test_not_a_mapping(self):
        with pytest.raises(ValidationError):
            parse_scenario("- 1\n- 2\n")

    def test_dump_roundtrip(self, tmp_path):
        s = generate_scenarios(3, 1, "mixed")[0]
        dump_scenario(s, tmp_path / "s.yaml")
        assert load_scenario(tmp_path / "s.yaml") == s

    @pytest.mark.parametrize("path", sorted((DOCS / "examples").glob("*.yaml")), ids=lambda p: p.name)
    def test_shipped_examples_validate(self, path):
        import yaml

        jsonschema.validate(yaml.safe_load(path.read_text()), SCHEMA)
        load_scenario(path)


class TestGenerate:
    def test_deterministic(self):
        assert generate_scenarios(7, 3, "discrete") == generate_scenarios(7, 3, "discrete")
        assert generate_scenarios(7, 3, "discrete") != generate_scenarios(8, 3, "discrete")

    @pytest.mark.parametrize("profile", PROFILES)
    def test_valid_and_schema_conformant(self, profile):
        for s in generate_scenarios(11, 40, profile):
            d = s.to_dict()
            jsonschema.validate(d, SCHEMA)
            assert Scenario.from_dict(d) == s

    def test_discrete_shape(self):
        for s in generate_scenarios(5, 50, "discrete"):
            pairs = s.timescale.to_pairs()
            assert 3 <= len(pairs) <= 12
            assert all(lo == hi and lo == int(lo) for lo, hi in pairs)

    def test_continuous_shape(self):
        for s in generate_scenarios(5, 50, "continuous"):
            (lo, hi), = s.timescale.to_pairs()
            assert 0.5 - 1e-9 <= hi - lo <= 4 + 1e-9

    def test_mixed_has_scattered_point_inside(self):
        for s in generate_scenarios(5, 200, "mixed"):
            a, b = s.window
            pts = s.timescale.scattered_points(a, b)
            assert any(a < p < b for p in pts), s.id
            segs = sum(1 for lo, hi in s.timescale.to_pairs() if hi > lo)
            assert 1 <= segs <= 3

    def test_increasing_weights(self):
        for s in generate_scenarios(2, 100, "mixed"):
            s.kernel()  # NonPositiveWeight would raise

    def test_rejects(self):
        with pytest.raises(ValueError):
            generate_scenarios(1, 0, "mixed")
        with pytest.raises(ValueError):
            generate_scenarios(1, 1, "lattice")


class TestRunSuite:
    def test_empty(self):
        r = run_suite([])
        assert r.records == []
        assert r.summary == {"records": 0, "passed": 0, "failed": 0, "errors": 0, "worst_margin": None, "seed": None}

    def test_pachpatte_record(self):
        (rec,) = run_suite([Scenario.from_dict(scenario())]).records
        assert rec["theorem_id"] == "pach1.1" and rec["error"] is None and rec["pass"]
        assert rec["lhs"] == pytest.approx(1 / 6, abs=1e-12)
        assert rec["rhs"] == pytest.approx(4 / 3, abs=1e-12)

    def test_hypothesis_gap_is_not_a_failure(self):
        # psi = 1/2 puts both shift points at 1/2, between the points of the scale
        s = Scenario.from_dict({
            "id": "gap", "timescale": [[0, 0], [1, 1], [2, 2]], "window": [0, 2], "functions": {"f": "t"},
            "lambda": 0.5, "psi": {"kind": "constant", "value": 0.5}, "checks": ["cor3.4", "thm3.2"],
        })
        report = run_suite([s])
        gap, thm = report.records
        assert gap["error"] == "ShiftNotInScale" and "message" in gap
        assert thm["error"] is None
        assert report.summary["errors"] == 1 and report.summary["failed"] == 0
        assert report.failures == []

    def test_summary_tallies(self):
        scenarios = generate_scenarios(4, 20, "mixed", checks=("thm3.2", "thm3.7", "cor3.3"))
        report = run_suite(scenarios, seed=4)
        s = report.summary
        assert s["records"] == len(report.records) == 60
        assert s["passed"] + s["failed"] + s["errors"] == s["records"]
        assert s["errors"] == 20  # cor3.3 needs a real interval
        assert s["failed"] == len(report.failures)
        assert s["seed"] == 4

    def test_parallel_equals_serial(self):
        scenarios = generate_scenarios(9, 12, "discrete", checks=("thm3.2", "lemma3.1"))
        serial, parallel = run_suite(scenarios), run_suite(scenarios, parallelism=2)
        assert serial.records == parallel.records

    def test_every_check_dispatches(self):
        s = Scenario.from_dict({
            "id": "all", "timescale": [[0, 4]], "window": [0, 3], "functions": {"f": "t^2", "p": "t", "q": "sin(t)"},
            "lambda": 0, "checks": list(CHECKS),
        })
        report = run_suite([s])
        by_id = {r["theorem_id"]: r for r in report.records}
        assert by_id["cor3.6"]["error"] == "NotIntegerScale"
        assert by_id["cor3.9"]["error"] == "NotIntegerScale"
        ok = [c for c in CHECKS if c not in ("cor3.6", "cor3.9")]
        assert all(by_id[c]["error"] is None and by_id[c]["pass"] for c in ok)


class TestReduction:
    @pytest.mark.parametrize("check", ["pach1.1", "pach1.2"])
    def test_passes_on_line(self, check):
        s = Scenario.from_dict(scenario(
            window=[0, 1], functions={"f": "exp(t) - t^2", "p": "t", "q": "cos(t)"}, checks=["thm3.2"],
            psi={"kind": "power", "exponent": 3}, **{"lambda": 0.7},
        ))
        r = reduction_check(s, check)
        assert r["pass"] and r["factor"] == 2.0

    def test_needs_interval(self):
        s = Scenario.from_dict(scenario(timescale=[[0, 0], [1, 1]], checks=["thm3.2"]))
        with pytest.raises(Exception, match="real interval"):
            reduction_check(s, "pach1.1")


class TestReports:
    def report(self):
        scenarios = generate_scenarios(1, 6, "mixed", checks=("thm3.2", "cor3.4", "lemma3.1"))
        return run_suite(scenarios, seed=1)

    def test_json_roundtrip_bit_exact(self, tmp_path):
        rep = self.report()
        emit_report(rep, "json", tmp_path / "r.ndjson")
        back = load_report(tmp_path / "r.ndjson")
        assert back.records == rep.records and back.seed == 1
        for a, b in zip(rep.records, back.records):
            for k in ("lhs", "rhs", "margin"):
                if k in a:
                    assert a[k].hex() == b[k].hex()

    def test_json_lines(self):
        rep = self.report()
        buf = io.StringIO()
        emit_report(rep, "json", stream=buf)
        lines = buf.getvalue().splitlines()
        assert len(lines) == len(rep.records) + 1
        assert json.loads(lines[-1]) == {"summary": rep.summary}

    def test_csv(self, tmp_path):
        rep = self.report()
        emit_report(rep, "csv", tmp_path / "r.csv")
        rows = (tmp_path / "r.csv").read_text().splitlines()
        assert rows[0] == ",".join(CSV_COLUMNS)
        assert len(rows) == len(rep.records) + 1
        first = rows[1].split(",")
        assert first[5] in ("True", "False", "")

    def test_empty_csv(self):
        buf = io.StringIO()
        emit_report(SuiteReport(), "csv", stream=buf)
        assert buf.getvalue() == ",".join(CSV_COLUMNS) + "\n"

    def test_bad_format(self):
        with pytest.raises(ValueError):
            emit_report(SuiteReport(), "xml", stream=io.StringIO())

    def test_finite(self):
        rep = self.report()
        assert all(is_finite_record(r) for r in rep.records if r["error"] is None)
        assert not is_finite_record({"error": "ShiftNotInScale"})
