"""Command line: subcommands, exit codes and golden traces."""

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import CBN_SHOWCASE, DELTA_II, SILLY_TABLE
from ssclab.cli import main
from ssclab.multitypes import N, ax, derivation_to_json, lam
from ssclab.terms import alpha_eq, parse

GOLDEN = Path(__file__).parent / "golden"


def cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.mark.parametrize("argv,golden", [
    (["eval", "--strategy", "cbs", "--trace", DELTA_II], "cbs_duplication.txt"),
    (["eval", "--strategy", "cbn", "--trace", CBN_SHOWCASE], "cbn_showcase.txt"),
    (["machine", "silly", "--trace", SILLY_TABLE], "silly_mam_table.txt"),
])
def test_golden(argv, golden):
    code, out = cli(*argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text(encoding="utf-8")


class TestEval:
    def test_cbs_counts(self):
        code, out = cli("eval", "--strategy", "cbs", DELTA_II)
        assert code == 0 and out.splitlines()[-1] == "m=6 e=8 gcv=6"

    def test_cbn_counts(self):
        code, out = cli("eval", "--strategy", "cbn", CBN_SHOWCASE)
        assert out.splitlines()[-1] == "nm=4 ne=3 ngc=3"

    def test_cbv(self):
        code, out = cli("eval", "--strategy", "cbv", DELTA_II)
        assert out.splitlines() == [r"\z. z", "steps=3"]

    def test_weak_random(self):
        code, out = cli("eval", "--strategy", "ssc", "--policy", "random", "--seed", "2", DELTA_II)
        assert code == 0 and alpha_eq(parse(out.splitlines()[0]), parse(r"\z. z"))

    def test_fuel_exhausted(self):
        code, out = cli("eval", "--strategy", "cbs", "--fuel", "50", CBN_SHOWCASE)
        assert code == 0 and out.splitlines()[0] == "fuel exhausted"

    def test_json(self):
        code, out = cli("eval", "--strategy", "cbs", "--json", "--gcv", "eager", DELTA_II)
        obj = json.loads(out)
        assert obj["normal"] and obj["counts"] == {"m": 6, "e": 8, "gcv": 6}
        assert obj["steps"][0] == {"rule": "wm", "hole": "root", "label": "ym",
                                   "term": r"(y y)[y <- (\z. z) (\z. z)]"}

    def test_file_input(self, tmp_path):
        f = tmp_path / "t.lam"
        f.write_text(DELTA_II + "\n")
        code, out = cli("eval", "-f", str(f))
        assert code == 0 and out.splitlines()[-1] == "m=6 e=8 gcv=6"


class TestOtherCommands:
    def test_parse(self):
        code, out = cli("parse", "λx. x  x")
        assert (code, out) == (0, "\\x. x x\n")
        code, out = cli("parse", "--json", r"\x. x")
        assert json.loads(out) == {"term": r"\x. x", "size": 2}

    def test_machine_check(self):
        code, out = cli("machine", "silly", "--check", SILLY_TABLE)
        assert code == 0
        assert out.splitlines()[-1] == "sea1=2 m=2 e=1 sea2=2"

    def test_machine_mam(self):
        code, out = cli("machine", "mam", SILLY_TABLE)
        assert out.splitlines()[-1] == "sea=1 m=1 e=0"

    def test_type_infer(self):
        code, out = cli("type", "infer", DELTA_II)
        assert code == 0 and out.splitlines()[-1] == "indices (6,8) tight"
        assert out.splitlines()[0].endswith("[@]")

    def test_type_infer_diverging(self):
        code, out = cli("type", "infer", "--fuel", "100", r"(\x. \y. y) ((\z. z z) (\z. z z))")
        assert code == 1

    def test_type_check(self, tmp_path):
        f = tmp_path / "d.json"
        code, out = cli("type", "infer", "--json", DELTA_II)
        f.write_text(out)
        code, out = cli("type", "check", str(f))
        assert (code, out) == (0, "valid, indices (6,8) tight\n")

    def test_type_check_invalid(self, tmp_path):
        f = tmp_path / "d.json"
        obj = derivation_to_json(lam("z", ax("z", N)))
        obj["conclusion"]["m"] = 3
        f.write_text(json.dumps(obj))
        code, out = cli("type", "check", str(f))
        assert code == 1 and out.startswith("error: root [lam]")

    def test_check_suite(self):
        code, out = cli("check", "confluence", "--size", "6")
        assert code == 0 and out.startswith("confluence: ok")

    def test_check_json(self):
        code, out = cli("check", "halt", "--size", "5", "--json")
        assert json.loads(out)[0]["ok"]

    def test_compare(self):
        code, out = cli("compare", DELTA_II)
        lines = out.splitlines()
        assert lines[0].split()[-3:] == ["nm=4", "ne=5", "ngc=4"]
        assert lines[1].split()[-3:] == ["ym=6", "ye=8", "ygcv=6"]
        assert lines[2].split()[-1] == "beta_v=3"
        assert lines[3].split()[-1] == "(6,8)"


class TestExitCodes:
    def test_syntax_error(self, capsys):
        code, _ = cli("parse", r"(\x. x")
        assert code == 2
        assert "line 1, column 7" in capsys.readouterr().err

    def test_open_term_for_cbs(self):
        assert cli("eval", "--strategy", "cbs", "x")[0] == 2

    def test_unknown_suite(self):
        assert cli("check", "nonsense")[0] == 2

    def test_usage(self):
        assert cli()[0] == 2
        assert cli("eval", "--strategy", "cbq", "x")[0] == 2
        assert cli("parse")[0] == 2

    def test_machine_rejects_open(self):
        assert cli("machine", "silly", "x")[0] == 2

    def test_bad_derivation_file(self, tmp_path):
        f = tmp_path / "d.json"
        f.write_text("{not json")
        assert cli("type", "check", str(f))[0] == 2

    def test_console_entry(self):
        out = subprocess.run([sys.executable, "-m", "ssclab", "eval", DELTA_II],
                             capture_output=True, text=True)
        assert out.returncode == 0 and out.stdout.endswith("m=6 e=8 gcv=6\n")
