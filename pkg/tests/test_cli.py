import json

import pytest

from cartanlab import suites
from cartanlab.cli import main
from cartanlab.suites import Instance, Suite


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "prop32", "--trials", "3")
    assert code == 0
    assert out.splitlines()[1].startswith("prop32\t3\t3\tPASS")


def test_verify_json_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--suite", "lie5", "--trials", "2", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["passes"] == 2


def test_failing_suite_exits_one(monkeypatch, capsys):
    good = suites.REGISTRY["lie5"]

    def build(rng, chart, cfg, trial):
        inst = good.build(rng, chart, cfg, trial)
        return Instance(inst.inputs, lambda: inst.inputs[0], inst.params)

    monkeypatch.setitem(suites.REGISTRY, "lie5", Suite("lie5", good.kind, build, good.summary))
    code, out, _ = run(capsys, "verify", "--suite", "lie5", "--trials", "2")
    assert code == 1 and "FAIL" in out and "# failure lie5 trial 0" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--suite", "nope"],
        ["verify", "--suite", "prop32", "--trials", "zero"],
        ["verify", "--suite", "prop32", "--seed", "-3"],
        ["verify", "--suite", "prop32", "--complex-dim", "2", "--real-dim", "3"],
        ["frobnicate"],
        ["verify"],
    ],
)
def test_usage_errors(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_unwritable_out(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--suite", "lie5", "--trials", "1", "--out", str(tmp_path / "no" / "x.txt"))
    assert code == 2 and "cannot write" in err


def test_list_suites(capsys):
    code, out, _ = run(capsys, "list-suites")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 32
    assert any(line.startswith("finite_difference\t") and line.endswith("advisory") for line in lines)


def test_eval(tmp_path, capsys):
    p = tmp_path / "e.sx"
    p.write_text("(chart complex 2)\n(d (* z1 zb1))\n(+ 1 1)\n")
    code, out, _ = run(capsys, "eval", "--expr", str(p))
    assert code == 0
    assert out.splitlines() == ["(chart complex 2) (form (coef (dz1) zb1) (coef (dzb1) z1))", "(chart complex 2) 2"]


def test_eval_errors(tmp_path, capsys):
    p = tmp_path / "bad.sx"
    p.write_text("(wedge dx1")
    assert run(capsys, "eval", "--expr", str(p))[0] == 2
    assert run(capsys, "eval", "--expr", str(tmp_path / "missing.sx"))[0] == 2


def test_plot(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    png = tmp_path / "s.png"
    code, _, _ = run(capsys, "verify", "--suite", "cr_sign", "--trials", "2", "--plot", str(png))
    assert code == 0 and png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
