import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

from hocat import __version__
from hocat.cli import SCHEMA, JobConfig, exact, main, run
from hocat.presets import one_loop


def invoke(*args):
    result = CliRunner().invoke(main, list(args))
    return result.exit_code, result.stdout


@pytest.mark.parametrize(
    "args,code,verdict",
    [
        (["build", "preset:arrow"], 0, "OK"),
        (["check-interval", "preset:arrow"], 1, "FAILED"),
        (["check-interval", "w:2"], 0, "CERTIFIED-UP-TO"),
        (["check-interval", "preset:chain-interval", "--degree-bound", "2"], 0, "UNKNOWN"),
        (["pi0", "preset:interval"], 0, "OK"),
        (["dk-check", "preset:interval"], 0, "DK-EQUIVALENCE"),
        (["dk-check", "preset:arrow:chainQ"], 1, "FAILED"),
        (["amalgamate", "preset:interval", "preset:interval"], 0, "OK"),
        (["coherent-extend", "--instance", "contractible"], 0, "EXTENDED"),
        (["coherent-extend", "--instance", "zero-arrow"], 1, "REFUSED"),
    ],
)
def test_verdicts_and_exit_codes(args, code, verdict):
    exit_code, output = invoke(*args)
    report = json.loads(output)
    assert report["schema"] == SCHEMA
    assert report["verdict"] == verdict
    assert exit_code == code


def test_usage_and_budget_errors():
    assert invoke("build", "missing.json")[0] == 2
    assert invoke("wconstruct", "--k", "9")[0] == 2
    code, output = invoke("wconstruct", "--k", "3", "--budget", "5")
    assert code == 2 and json.loads(output)["error"].startswith("BudgetExceeded")
    assert invoke("build", "preset:arrow", "--format", "yaml")[0] == 2


def test_oracle_compare_on_one_loop(tmp_path):
    source = tmp_path / "loop.json"
    source.write_text(json.dumps(one_loop()))
    code, output = invoke("oracle-compare", str(source), "--word-bound", "4")
    assert code == 0
    assert json.loads(output)["verdict"] == "AGREE"


def test_wconstruct_dimensions():
    code, output = invoke("wconstruct", "--k", "1")
    homs = json.loads(output)["result"]["homs"]
    assert code == 0
    assert homs["0->1"] == {"0": 1}
    assert homs["1->1"] == {"0": 2, "1": 1}


def test_run_echoes_the_configuration():
    code, report = run(JobConfig("build", ["preset:arrow"], stage=2))
    assert code == 0
    assert report["version"] == __version__
    assert report["config"]["stage"] == 2 and report["config"]["seed"] == 0


def test_text_format_and_output_file(tmp_path):
    out = tmp_path / "report.txt"
    code, _ = invoke("build", "preset:arrow", "--format", "text", "--out", str(out))
    assert code == 0
    assert 'schema: "hocat/1"' in out.read_text()


def test_reports_are_exact():
    assert exact({"x": Fraction(1, 3), 2: [Fraction(4, 2)]}) == {"x": "1/3", "2": ["2"]}
    with pytest.raises(TypeError):
        exact({"x": 0.5})


def test_version():
    assert __version__ in invoke("--version")[1]
