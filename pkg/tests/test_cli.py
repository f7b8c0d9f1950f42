from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from trinomial_workbench.cli import (COMMANDS, SchemaError, UnknownCommand, emit_report, main,
                                     parse_spec_file, run_command)
from trinomial_workbench.parsing import PolynomialSyntaxError, UnknownVariable

from suite import CENSUS_INSTANCES, CUBIC, RIGIDITY_TABLE, SEARCH_INSTANCES

DAN = {"type": 1, "m": 0, "blocks": [{"l": [1, 1]}, {"l": [2]}], "A": ["0", "1"]}


def data_spec(data, **extra):
    if data.variety_type == 1:
        A = [str(a) for a in data.constants]
    else:
        A = [[str(a) for a in row] for row in data.constants]
    doc = {"type": data.variety_type, "m": data.m, "blocks": [{"l": list(l)} for l in data.exponents],
           "A": A}
    doc.update(extra)
    return doc


@pytest.fixture
def write(tmp_path):
    def _write(doc, name="spec.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return _write


def run(write, cmd, doc, **overrides):
    return run_command(cmd, parse_spec_file(write(doc)), overrides)


class TestParse:
    def test_danielewski(self, write):
        spec = parse_spec_file(write(DAN))
        assert spec.data.exponents == ((1, 1), (2,))

    def test_missing_a(self, write):
        doc = {k: v for k, v in DAN.items() if k != "A"}
        with pytest.raises(SchemaError) as info:
            parse_spec_file(write(doc))
        assert info.value.path == "/A"

    def test_bad_type(self, write):
        with pytest.raises(SchemaError) as info:
            parse_spec_file(write(dict(DAN, type=3)))
        assert info.value.path == "/type"

    def test_unknown_variable(self, write):
        with pytest.raises(UnknownVariable):
            parse_spec_file(write(dict(DAN, derivations={"D": {"T[9][9]": "1"}})))

    def test_syntax_error_has_location(self, write):
        with pytest.raises(PolynomialSyntaxError) as info:
            parse_spec_file(write(dict(DAN, derivations={"D": {"T[1][1]": "2*"}})))
        assert "/derivations/D/T[1][1]" in str(info.value)

    def test_points_must_be_complete(self, write):
        doc = dict(DAN, points={"alpha": {"T[1][1]": 0}, "beta": {"T[1][1]": 0}})
        with pytest.raises(SchemaError) as info:
            parse_spec_file(write(doc))
        assert info.value.path.startswith("/points/alpha/")

    def test_not_json(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text("{")
        with pytest.raises(SchemaError):
            parse_spec_file(str(p))


class TestCommands:
    def test_rigidity(self, write):
        report, code = run(write, "rigidity", DAN)
        assert code == 0
        assert report["result"]["X"]["clause"] == "type1-clause2"
        assert report["result"]["X"]["witness"]["blocks"] == [2]

    def test_census_cubic(self, write):
        report, code = run(write, "census", data_spec(CUBIC), pairs=3)
        assert code == 0 and report["result"]["open_part_verdict"] == "hypothesis-fails"
        assert len(report["result"]["strata"]) == 4

    def test_lnd_check_euler(self, write):
        doc = dict(DAN, derivations={"E": {"T[1][1]": "T[1][1]", "T[1][2]": "T[1][2]", "T[2][1]": "T[2][1]"}})
        report, code = run(write, "lnd-check", doc)
        assert code == 2
        assert report["result"]["derivations"]["E"]["error"] == "IdealNotPreserved"

    def test_lnd_check_and_exp(self, write):
        doc = dict(DAN, derivations={"D": {"T[1][1]": "2*T[2][1]", "T[2][1]": "T[1][2]"}})
        report, code = run(write, "lnd-check", doc)
        assert code == 0
        d = report["result"]["derivations"]["D"]
        assert d["type"]["kind"] == "horizontal" and d["degree"] == [-1]
        report, code = run(write, "exp", doc)
        assert code == 0 and report["result"]["derivations"]["D"]["composition_law"]

    def test_exp_not_lnd(self, write):
        doc = dict(DAN, m=1, derivations={"L": {"S[1]": "S[1]"}})
        report, code = run(write, "exp", doc, cap=4)
        assert code == 2 and report["result"]["derivations"]["L"]["error"] == "NotLND"

    def test_search(self, write):
        report, code = run(write, "lnd-search", DAN, degree=(-1,))
        assert code == 0 and report["result"]["count"] == 1

    def test_search_needs_degree(self, write):
        with pytest.raises(SchemaError):
            run(write, "lnd-search", DAN)

    def test_transport_points(self, write):
        doc = {"type": 1, "blocks": [{"l": [1, 1]}, {"l": [2]}], "A": ["0", "-1"],
               "points": {"alpha": {"T[1][1]": 0, "T[1][2]": 2, "T[2][1]": 1},
                          "beta": {"T[1][1]": [0, 0], "T[1][2]": 5, "T[2][1]": 1}}}
        report, code = run(write, "transport", doc)
        cert = report["result"]["certificate"]
        assert code == 0 and [s["kind"] for s in cert["steps"]] == ["lambda"]

    def test_transport_different_strata(self, write):
        doc = {"type": 1, "blocks": [{"l": [1, 1]}, {"l": [2]}], "A": ["0", "-1"],
               "points": {"alpha": {"T[1][1]": 0, "T[1][2]": 2, "T[2][1]": 1},
                          "beta": {"T[1][1]": 2, "T[1][2]": 0, "T[2][1]": 1}}}
        _, code = run(write, "transport", doc)
        assert code == 2

    def test_example_hypersurface(self, write):
        doc = {"hypersurface": {"k": 1, "b": [2], "c": [3], "p": 1, "r": [1]}}
        report, code = run(write, "example-hypersurface", doc)
        assert code == 0
        assert report["result"]["check"]["type"]["kind"] == "horizontal"
        assert report["result"]["exp"]["relations_map_to_zero"]

    def test_validate_reports_violations(self, write):
        report, code = run(write, "validate", dict(DAN, A=["1", "1"]))
        assert code == 2 and report["result"]["violations"][0]["code"] == "DuplicateConstant"

    def test_unknown_command(self, write):
        with pytest.raises(UnknownCommand):
            run(write, "frobnicate", DAN)


class TestEmit:
    def test_deterministic_and_round_trip(self, write, tmp_path):
        spec = parse_spec_file(write(DAN))
        for cmd in ("rigidity", "grading", "strata", "census"):
            a = emit_report(run_command(cmd, spec, {"pairs": 3})[0], tmp_path / "a.json")
            b = emit_report(run_command(cmd, spec, {"pairs": 3})[0], tmp_path / "b.json")
            assert a == b
            assert emit_report(json.loads(a), tmp_path / "c.json") == a

    def test_rationals_as_strings(self, write):
        doc = dict(DAN, A=["1/2", "3"])
        report, _ = run(write, "grading", doc)
        text = emit_report(report, None)
        assert '"T[1][1]*T[1][2] - T[2][1]^2 - 5/2"' in text

    def test_empty_strata_list(self):
        import io
        from contextlib import redirect_stdout

        buf = io.StringIO()
        with redirect_stdout(buf):
            emit_report({"strata": []})
        assert '"strata": []' in buf.getvalue()


class TestMain:
    def test_exit_codes(self, write, capsys):
        assert main(["rigidity", "--spec", write(DAN)]) == 0
        assert main(["nope", "--spec", write(DAN)]) == 1
        assert main(["rigidity", "--spec", "/nonexistent.json"]) == 1
        capsys.readouterr()

    def test_out_file(self, write, tmp_path):
        out = tmp_path / "r.json"
        assert main(["strata", "--spec", write(DAN), "--out", str(out)]) == 0
        assert json.loads(out.read_text())["result"]["strata"][0]["pattern"] == ["T[1][1]"]

    def test_unwritable_out(self, write, capsys):
        assert main(["strata", "--spec", write(DAN), "--out", "/nonexistent/dir/r.json"]) == 1
        assert "IoError" in capsys.readouterr().err

    def test_seed_from_environment(self, write, tmp_path, monkeypatch):
        path = write(DAN)
        monkeypatch.setenv("WORKBENCH_SEED", "42")
        main(["census", "--spec", path, "--pairs", "2", "--out", str(tmp_path / "a.json")])
        main(["census", "--spec", path, "--pairs", "2", "--out", str(tmp_path / "b.json")])
        assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()

    @pytest.mark.skipif(shutil.which("workbench") is None, reason="console script not installed")
    def test_console_script(self, write):
        proc = subprocess.run(["workbench", "rigidity", "--spec", write(DAN)], capture_output=True, text=True)
        assert proc.returncode == 0 and json.loads(proc.stdout)["command"] == "rigidity"

    def test_module_entry(self, write):
        proc = subprocess.run([sys.executable, "-m", "trinomial_workbench.cli", "strata", "--spec", write(DAN)],
                              capture_output=True, text=True)
        assert proc.returncode == 0


SUITE = [d for d, *_ in RIGIDITY_TABLE] + CENSUS_INSTANCES


@pytest.mark.parametrize("index", range(len(SUITE)))
def test_suite_end_to_end(write, tmp_path, index):
    data = SUITE[index]
    path = write(data_spec(data))
    for cmd in ("validate", "rigidity", "grading", "strata", "census", "transport"):
        assert main([cmd, "--spec", path, "--pairs", "2", "--out", str(tmp_path / f"{cmd}.json")]) == 0, cmd


@pytest.mark.parametrize("data, degrees, bound", SEARCH_INSTANCES, ids=lambda x: "")
def test_search_suite_end_to_end(write, tmp_path, data, degrees, bound):
    path = write(data_spec(data))
    for g0 in degrees:
        deg = ",".join(map(str, g0))
        assert main(["lnd-search", "--spec", path, f"--degree={deg}", "--max-image-degree", str(bound),
                     "--out", str(tmp_path / "s.json")]) == 0


def test_every_command_is_dispatched():
    assert len(COMMANDS) == 10
