"""Command-line interface: exit codes, JSON schema, determinism."""

import json

import pytest

from dvlg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExitCodes:
    def test_decide_true(self, capsys):
        code, out, _ = run(
            capsys, "decide", "--mode", "ec", "forall v:G. exists b:G. b + b = v"
        )
        assert code == 0 and out.strip() == "true"

    def test_decide_false(self, capsys):
        code, out, _ = run(capsys, "decide", "--mode", "ec", "top = bot")
        assert code == 1 and out.strip() == "false"

    def test_decide_atomless(self, capsys):
        code, _, _ = run(
            capsys,
            "decide", "--mode", "ec",
            "forall x:L. bot << x & ~(x = bot) -> "
            "(exists y:L. ~(y = bot) & y << x & ~(y = x))",
        )
        assert code == 0

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "decide", "forall v:G.")
        assert code == 2 and "error" in err

    def test_open_formula_rejected(self, capsys):
        code, _, err = run(capsys, "decide", "0 <= a")
        assert code == 2

    def test_unsupported_fragment(self, capsys):
        code, _, err = run(
            capsys,
            "reduce", "--mode", "tplus",
            "exists x:G. forall y:L. y << P(x - 0)",
        )
        assert code == 3 and "unsupported" in err

    def test_resource_limit(self, capsys):
        code, _, err = run(capsys, "eval", "-n", "9", "exists a:G. a <= 0")
        assert code == 4 and "resource" in err

    def test_eval_true(self, capsys):
        code, out, _ = run(
            capsys, "eval", "-n", "2", "forall l:L. exists a:G. P(a) = l"
        )
        assert code == 0 and out.strip() == "true"

    def test_eval_with_env(self, capsys):
        code, out, _ = run(
            capsys,
            "eval", "-n", "2", "f <= 0", "--env",
            json.dumps({"group": {"f": ["-1", "-1/2"]}}),
        )
        assert code == 0


class TestJsonReports:
    def test_schema(self, capsys):
        code, out, _ = run(
            capsys, "decide", "--json", "--trace",
            "forall v:G. exists b:G. b + b = v",
        )
        doc = json.loads(out)
        assert code == 0
        assert set(doc) == {"command", "input", "verdict", "stats", "trace"}
        assert doc["command"] == "decide" and doc["verdict"] is True
        assert set(doc["stats"]) == {"elapsed_ms", "eliminations", "atoms"}

    def test_reduce_payload(self, capsys):
        code, out, _ = run(capsys, "reduce", "--json", "0 <= v")
        doc = json.loads(out)
        assert code == 0
        payload = doc["verdict"]
        assert payload["k"] == 1 and payload["terms"] == ["v"]
        assert payload["mode"] == "tplus"

    def test_model_op(self, capsys):
        code, out, _ = run(
            capsys,
            "model", "--op", "shift", "--args",
            json.dumps([{"k": 2, "vals": ["1", "2", "3", "4"]}]),
        )
        assert code == 0
        assert json.loads(out) == {"k": 2, "vals": ["2", "3", "4", "1"]}

    def test_model_archimedean(self, capsys):
        code, out, _ = run(
            capsys,
            "model", "--op", "archimedean", "--args",
            json.dumps(
                [
                    {"k": 1, "vals": ["1", "2"]},
                    {"k": 1, "vals": ["3", "10"]},
                ]
            ),
        )
        assert code == 0 and out.strip() == "4"

    def test_model_witness(self, capsys):
        code, out, _ = run(
            capsys,
            "model", "--op", "witness",
            "exists a:G. 0 <= a & ~(a = 0)",
        )
        assert code == 0
        # a concrete witness assignment is printed
        assert '"a"' in out


class TestDeterminism:
    def test_identical_runs_byte_identical(self, capsys):
        argv = [
            "reduce", "--json",
            "exists x:G. x <= v & 0 <= x",
        ]
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2

    def test_decide_stable_under_reparse(self, capsys):
        text = "exists v:G. 0 <= v & P(-v) = bot"
        code1, out1, _ = run(capsys, "decide", text)
        code2, out2, _ = run(capsys, "decide", text)
        assert (code1, out1) == (code2, out2)
