"""Tests for the command-line front end"""

import io
import json

import pytest

from app.cli import build_parser, run
from app.config import settings
from app.utils.errors import ValidationError


@pytest.fixture
def instance_file(tmp_path):
    """Write a JSON instance record and return its path"""
    def write(record, name="instance.json"):
        path = tmp_path / name
        path.write_text(record if isinstance(record, str) else json.dumps(record), encoding="utf-8")
        return str(path)
    return write


SUM_SYSTEM = {"n": 3, "rows": [{"p": "(X-1)^2", "coeffs": ["1", "1", "-1"], "rhs": "1"}]}


class TestSolveMonomial:
    """Test the solve-monomial subcommand"""

    def test_found(self, instance_file, capsys):
        """Test X^z = X^5 modulo X^3 - 1"""
        path = instance_file({"presentation": {"relations": ["X^3 - 1"]}, "f1": "1", "f0": "X^5"})
        assert run(["solve-monomial", path]) == 0
        assert capsys.readouterr().out.strip() == "FOUND z=2"

    def test_empty(self, instance_file, capsys):
        """Test a period certificate gives exit code 1"""
        path = instance_file({"presentation": {"relations": ["X^2 - 1"]}, "f1": "1", "f0": "2"})
        assert run(["solve-monomial", path]) == 1
        assert capsys.readouterr().out.strip() == "EMPTY period=2"

    def test_unknown(self, instance_file, capsys):
        """Test an empty probe list and a small bound give exit code 2"""
        path = instance_file({"f1": "1", "f0": "1 + X"})
        assert run(["solve-monomial", path, "--bound", "3", "--probes", ""]) == 2
        assert capsys.readouterr().out.strip() == "UNKNOWN bound=3"

    def test_records_format(self, instance_file, capsys):
        """Test JSON records on stdout"""
        path = instance_file({"presentation": {"preset": "baumslag-solitar:2"}, "f1": "1", "f0": "8"})
        assert run(["solve-monomial", path, "--format", "records"]) == 0
        record = json.loads(capsys.readouterr().out)
        assert record["verdict"] == "found"
        assert record["z"] == 3

    def test_stdin(self, monkeypatch, capsys):
        """Test '-' reads the instance from standard input"""
        text = json.dumps({"presentation": {"relations": ["X^3 - 1"]}, "f1": "1", "f0": "X^5"})
        monkeypatch.setattr("sys.stdin", io.StringIO(text))
        assert run(["solve-monomial", "-"]) == 0
        assert "FOUND" in capsys.readouterr().out


class TestOtherSubcommands:
    """Test the remaining subcommands end to end"""

    def test_member(self, instance_file, capsys):
        """Test membership and non-membership exit codes"""
        yes = instance_file({"element": "X^2 + 1", "generators": ["X - 1", "2"]}, "yes.json")
        no = instance_file({"element": "X", "generators": ["X - 1", "2"]}, "no.json")
        assert run(["member", yes]) == 0
        assert capsys.readouterr().out.startswith("MEMBER")
        assert run(["member", no]) == 1
        assert capsys.readouterr().out.strip() == "NOT MEMBER"

    def test_gb(self, instance_file, capsys):
        """Test the basis listing"""
        path = instance_file({"generators": ["2", "X - 1"]})
        assert run(["gb", path]) == 0
        assert capsys.readouterr().out.startswith("BASIS ")

    def test_coset(self, instance_file, capsys):
        """Test the parity obstruction in case 3"""
        path = instance_file({"G": ["( 0 ; 2 )"], "H": ["( 0 ; 4 )"], "h": "( 0 ; 1 )"})
        assert run(["coset-intersect", path]) == 1
        lines = capsys.readouterr().out.strip().splitlines()
        assert "CASE 3" in lines
        assert lines[-1] == "EMPTY"

    def test_eval_word(self, instance_file, capsys):
        """Test [t^-1, (1;0)] = (1 - X;0)"""
        path = instance_file({
            "word": "[x, y]",
            "assignment": {"x": "( 0 ; -1 )", "y": "( 1 ; 0 )"},
            "expect": "( 1 - X ; 0 )",
        })
        assert run(["eval-word", path]) == 0
        assert capsys.readouterr().out.strip().splitlines() == ["VALUE ( -X^1 + X^0 ; 0 )", "EQUAL"]

    def test_gadget_check_flags(self, capsys):
        """Test --gadget with --z needs no instance file"""
        assert run(["gadget-check", "--gadget", "square", "--z", "2,4,-2"]) == 0
        assert capsys.readouterr().out.strip() == "SATISFIED"
        assert run(["gadget-check", "--gadget", "sum", "--z", "3,5,9"]) == 1
        assert capsys.readouterr().out.strip() == "VIOLATED rows=1"

    def test_gadget_compile(self, instance_file, capsys):
        """Test compiling z1^2 = 4 with a completed assignment"""
        path = instance_file({"polynomial": "z1^2", "target": 4, "inputs": [2]})
        assert run(["gadget-compile", path]) == 0
        out = capsys.readouterr().out
        assert out.startswith("VARS 11")
        assert "ASSIGNMENT 2 4" in out

    def test_instance_knapsack(self, instance_file, capsys):
        """Test a solution survives the knapsack reduction"""
        path = instance_file({"system": SUM_SYSTEM, "reduction": "knapsack", "z": [3, 5, 8]})
        assert run(["instance", path]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert out[0] == "REDUCTION knapsack"
        assert out[-1] == "VERIFIED"


class TestErrors:
    """Test diagnostics and exit codes 3 and 4"""

    def test_malformed_json(self, instance_file, capsys):
        """Test broken JSON reports a position"""
        path = instance_file('{"f1": "1", "f0": }')
        assert run(["solve-monomial", path]) == 3
        assert "line 1" in capsys.readouterr().err

    def test_bad_polynomial(self, instance_file, capsys):
        """Test a bad polynomial is located in the document"""
        path = instance_file('{\n  "f1": "1",\n  "f0": "X + $"\n}')
        assert run(["solve-monomial", path]) == 3
        assert "line 3" in capsys.readouterr().err

    def test_missing_field(self, instance_file, capsys):
        """Test a record missing a required field"""
        path = instance_file({"f1": "1"})
        assert run(["solve-monomial", path]) == 3
        assert "f0" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        """Test an unreadable path"""
        assert run(["member", str(tmp_path / "absent.json")]) == 3
        assert "cannot read" in capsys.readouterr().err

    def test_bad_probes(self, instance_file):
        """Test a non-prime probe field"""
        path = instance_file({"f1": "1", "f0": "X"})
        assert run(["solve-monomial", path, "--probes", "4:3"]) == 3

    def test_bad_bound(self, instance_file):
        """Test a non-positive bound"""
        path = instance_file({"f1": "1", "f0": "X"})
        assert run(["solve-monomial", path, "--bound", "0"]) == 3

    def test_budget_exceeded(self, instance_file, monkeypatch, capsys):
        """Test the step budget maps to exit code 4"""
        monkeypatch.setattr(settings, "gb_step_budget", 1)
        path = instance_file({"generators": ["2", "X - 1", "3*X^2 + X"]})
        assert run(["gb", path]) == 4
        assert "budget" in capsys.readouterr().err

    def test_unknown_subcommand(self):
        """Test unknown subcommands raise ValidationError instead of exiting"""
        with pytest.raises(ValidationError):
            build_parser().parse_args(["factor"])

    @pytest.mark.parametrize("argv", [
        ["factor"],
        [],
        ["solve-monomial", "instance.json", "--bound", "abc"],
        ["gadget-check", "--gadget", "cube", "--z", "1,2,3"],
        ["gadget-check", "--gadget", "sum", "--z", "1,x,3"],
        ["member", "--no-such-flag"],
    ])
    def test_usage_errors_exit_3(self, argv, capsys):
        """Test malformed command lines exit 3, not the UNKNOWN code 2"""
        assert run(argv) == 3
        assert "error:" in capsys.readouterr().err

    def test_verbose_leaves_settings_alone(self, instance_file, capsys):
        """Test --verbose does not change the configured log level"""
        before = settings.log_level
        path = instance_file({"f1": "1", "f0": "X"})
        assert run(["--verbose", "solve-monomial", path]) == 0
        assert run(["solve-monomial", path]) == 0
        assert settings.log_level == before
