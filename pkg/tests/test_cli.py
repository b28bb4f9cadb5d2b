import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beliefchange.cli import main
from beliefchange.credal import PartialModel, lower, upper
from beliefchange.logic import Language
from beliefchange.lprob import ConstraintSet
from beliefchange.measures import ignorance
from beliefchange.errors import ModeError, ParseError
from beliefchange.session import run_script_text

ROOT = Path(__file__).resolve().parents[1]
LEDGERS = ROOT / "scripts" / "ledgers"
L2 = Language.of("p", "q")
PRIOR = "letters p q r\nconstrain p|q|r\nconstrain !(p&q) & !(p&r) & !(q&r)\nconstrain P(r) = 1/2\n"


def answers(text, **kw):
    return run_script_text(text, **kw)["answers"]


class TestScripts:
    def test_empty_script_reports_ignorant_model(self):
        rep = run_script_text("letters p q\n")
        assert rep["answers"] == {} and rep["ledger"] == [] and rep["warnings"] == []
        assert rep["state"]["mode"] == "credal"
        assert set(map(tuple, rep["state"]["atom_envelopes"].values())) == {("0", "1")}

    def test_queries_on_three_suspects(self):
        a = answers(PRIOR + "constrain !p\nquery accepted !p\nquery lower P(q)\nquery top\n")
        assert a == {"accepted !p": True, "lower P(q)": "1/2", "top": ["!p&q&!r", "!p&!q&r"]}
        a = answers(PRIOR + "condition !p\nquery lower P(q)\n")
        assert a["lower P(q)"] == "0"

    def test_top_of_ignorant_model(self):
        assert len(answers("letters p q\nquery top\n")["top"]) == 4

    def test_late_generic_warning(self):
        rep = run_script_text(PRIOR + "condition !p\nconstrain P(p) = P(q)\nquery upper P(r)\n")
        assert len(rep["warnings"]) == 1 and "line 6" in rep["warnings"][0]
        assert rep["answers"]["upper P(r)"] == "2/3"

    def test_warning_only_after_specific(self):
        rep = run_script_text(PRIOR + "constrain P(p) = P(q)\ncondition !p\nquery upper P(r)\n")
        assert rep["warnings"] == [] and rep["answers"]["upper P(r)"] == "2/3"

    @given(st.permutations(["constrain P(p) <= 1/2", "constrain P(q) >= 1/4", "constrain P(p&q) = 1/8"]))
    @settings(max_examples=6)
    def test_generic_order_irrelevant(self, lines):
        text = "letters p q\n" + "\n".join(lines) + "\nquery lower p|q\nquery upper p&!q\nquery ignorance\n"
        S = ConstraintSet.parse(L2, [line.split(" ", 1)[1] for line in lines])
        M = PartialModel(S)
        want = {"lower p|q": str(lower(M, "p|q")), "upper p&!q": str(upper(M, "p&!q")), "ignorance": ignorance(M)}
        assert answers(text) == want

    def test_point_mode(self):
        a = answers(PRIOR + "collapse maxent\ncondition !p\nquery dist\nquery lower r\nquery ignorance\n")
        assert a == {"dist": "5: 1/3, 6: 2/3", "lower r": "2/3", "ignorance": 0.0}

    def test_jeffrey_partition_and_mce(self):
        a = answers("letters p q\ncollapse maxent\njeffrey-partition (p&q:1/2) (!(p&q):1/2)\nquery dist\n")
        assert a["dist"] == "0: 1/2, 1: 1/6, 2: 1/6, 3: 1/6"
        a = answers("letters p q\ncollapse maxent\nmce P(p&q) = 1/2; P(p) <= 3/4\nquery upper p&q\n")
        assert a["upper p&q"] == "1/2"

    def test_dist_needs_point_mode(self):
        with pytest.raises(ModeError):
            answers("letters p\nquery dist\n")
        with pytest.raises(ModeError):
            answers("letters p\nmce P(p) = 1/2\n")

    @pytest.mark.parametrize(
        "text,line",
        [
            ("letters p\nconstrain P(p = 1\n", 2),
            ("letters p\n\nquery sideways p\n", 3),
            ("letters p\njeffrey p 1/2\n", 2),
            ("constrain p\n", 1),
            ("letters p\nquery top\nletters q\n", 3),
        ],
    )
    def test_parse_errors_carry_line(self, text, line):
        with pytest.raises(ParseError) as info:
            run_script_text(text)
        assert info.value.line == line


def run_cli(*args, cwd=ROOT):
    return subprocess.run(
        [sys.executable, "-m", "beliefchange", *args], cwd=cwd, capture_output=True, text=True, timeout=120
    )


class TestCommandLine:
    def test_run_json(self):
        res = run_cli("run", "--json", str(LEDGERS / "late_generic.bcl"))
        assert res.returncode == 0
        rep = json.loads(res.stdout)
        assert list(rep) == ["language", "ledger", "warnings", "answers", "state"]

    @pytest.mark.parametrize(
        "body,code",
        [
            ("letters p\nconstrain P(p) = 2\n", 3),
            ("letters p\nconstrain P(p\n", 2),
            ("letters p q\nconstrain P(p) = 0\ncondition p\n", 4),
            ("letters p q\njeffrey p : 1/2\n", 1),
        ],
    )
    def test_exit_codes(self, tmp_path, body, code, capsys):
        script = tmp_path / "s.bcl"
        script.write_text(body)
        assert main(["run", str(script)]) == code
        assert "error:" in capsys.readouterr().err

    def test_oracle_flag(self, capsys):
        assert main(["run", "--json", "--oracle", str(LEDGERS / "three_assassins.bcl")]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["oracle"]["checked"] == 6 and rep["oracle"]["max_deviation"] == "0"

    def test_letters_flag(self, tmp_path, capsys):
        script = tmp_path / "s.bcl"
        script.write_text("constrain P(a) = 1/3\nquery upper a&b\n")
        assert main(["run", "--letters", "a,b", str(script)]) == 0
        assert "upper a&b = 1/3" in capsys.readouterr().out

    def test_model_subcommands(self, tmp_path, capsys):
        model = tmp_path / "m.txt"
        model.write_text("letters p q\nP(p&q) = 0\nP(p&!q) = 9/10\n")
        assert main(["query", str(model), "upper P(!p&q)"]) == 0
        assert capsys.readouterr().out == "upper P(!p&q) = 1/10\n"
        assert main(["measure", "--json", str(model), "--evidence", "!p"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["ignorance"] == 0.5 and rep["provisional"] is True
        assert main(["oracle", "vertices", str(model)]) == 0
        assert capsys.readouterr().out.splitlines() == ["1: 9/10, 2: 1/10", "1: 9/10, 3: 1/10"]

    def test_kl_min_subcommand(self, tmp_path, capsys):
        model = tmp_path / "m.txt"
        model.write_text("letters p q\nP(p&q) = 1/2\n")
        assert main(["oracle", "kl-min", "--json", "--resolution", "6", "--compare", str(model)]) == 0
        rep = json.loads(capsys.readouterr().out)["result"]
        assert rep["grid_min"] == "0: 1/2, 1: 1/6, 2: 1/6, 3: 1/6"
        assert rep["solver_objective"] <= rep["objective"] + 1e-12

    def test_mce_flags(self, capsys):
        args = ["run", "--mce.residual_tol", "1e-12", "--mce.max_iters", "50", "--caps.vertex_n", "3"]
        assert main(args + [str(LEDGERS / "mce_sequence.bcl")]) == 0
        assert "dist #2 = 0: 3/8, 1: 1/8, 2: 1/4, 3: 1/4" in capsys.readouterr().out
