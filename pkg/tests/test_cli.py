import subprocess
import sys
from pathlib import Path

import pytest

from partialmt.cli import main
from partialmt.textio import load_structure, parse_structure

DATA = Path(__file__).resolve().parent.parent / "data"
POINT = str(DATA / "single_point.txt")
FAMILY = str(DATA / "family" / "family.txt")
ALL_R = "forall x (R(x))"
CONTRA = "(forall x (R(x)) & ~forall x (R(x)))"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_structure(capsys):
    code, out, _ = run(capsys, "check", POINT)
    assert code == 0
    assert out == f"{POINT}: ok: 1 structure, u=1\n"


def test_check_family_and_sentences(capsys):
    code, out, _ = run(capsys, "check", FAMILY, DATA / "inferences" / "adjunction.txt")
    assert code == 0
    assert "family of 2 factors, 1 filter(s), 1 ultrafilter(s)" in out
    assert "2 sentence(s) over {R:1}" in out


def test_check_overlap(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("universe a\nrelation R\n+ : (a)\n- : (a)\n")
    code, out, err = run(capsys, "check", bad)
    assert code == 3
    assert f"{bad}:2:" in err and "more than one part" in err


def test_check_missing_factor(tmp_path, capsys):
    m = tmp_path / "fam.txt"
    m.write_text("index x gone.txt\n")
    code, _, err = run(capsys, "check", m)
    assert code == 3 and "gone.txt not found" in err


def test_check_non_filter(tmp_path, capsys):
    for name in ("A_x.txt", "A_y.txt"):
        (tmp_path / name).write_text((DATA / "family" / name).read_text())
    m = tmp_path / "fam.txt"
    m.write_text("index x A_x.txt\nindex y A_y.txt\nfilter G = {x}\n")
    code, _, err = run(capsys, "check", m)
    assert code == 3 and "not a filter" in err


def test_check_unreadable(tmp_path, capsys):
    code, _, err = run(capsys, "check", tmp_path / "absent.txt")
    assert code == 3 and "cannot read" in err


def test_eval_quasi_with_witness(capsys):
    code, out, _ = run(capsys, "eval", POINT, ALL_R, "--witness")
    assert code == 0
    head, _, body = out.partition("witness:\n")
    assert head == "quasi-true\n"
    assert parse_structure(body)["R"].pos == {("a",)}


def test_eval_quasi_false(capsys):
    assert run(capsys, "eval", POINT, CONTRA) == (1, "quasi-false\n", "")


def test_eval_kleene_and_total(capsys):
    assert run(capsys, "eval", POINT, ALL_R, "--mode", "kleene")[:2] == (1, "unknown\n")
    code, _, err = run(capsys, "eval", POINT, ALL_R, "--mode", "total")
    assert code == 2 and "total structure" in err


def test_eval_rejects_open_formula(capsys):
    code, _, err = run(capsys, "eval", POINT, "R(x)")
    assert code == 2 and err.startswith("error: sentence")


def test_eval_search_limit(capsys):
    code, _, err = run(capsys, "eval", POINT, ALL_R, "--max-unknowns", "0")
    assert code == 2 and "--max-unknowns" in err


@pytest.mark.parametrize("flags, triple", [
    ((), "0 : (<a1.a2>)"),
    (("--filter", "F"), "- : ([<a1.a2>])"),
    (("--filter", "trivial"), "- : ([<a1.a2>])"),
    (("--ultrafilter", "U"), "+ : ([<a1.a2>])"),
    (("--ultrafilter", "x"), "+ : ([<a1.a2>])"),
    (("--ultrafilter", "y"), "0 : ([<a1.a2>])"),
])
def test_product_outputs(capsys, flags, triple):
    code, out, err = run(capsys, "product", FAMILY, *flags)
    assert code == 0
    assert triple in out.splitlines()
    assert err.startswith("universe: 1 element(s)\n")


def test_product_file_rechecks(tmp_path, capsys):
    out_file = tmp_path / "up.txt"
    code, out, _ = run(capsys, "product", FAMILY, "--ultrafilter", "x", "-o", out_file)
    assert code == 0 and out == "universe: 1 element(s)\nR: +1 -0 00\n"
    assert load_structure(out_file).is_total
    code, out, _ = run(capsys, "check", out_file)
    assert code == 0 and "u=0" in out


def test_product_usage_errors(capsys):
    assert run(capsys, "product", FAMILY, "--filter", "nope")[0] == 2
    assert run(capsys, "product", FAMILY, "--ultrafilter", "q")[0] == 2
    assert run(capsys, "product", FAMILY, "--filter", "F", "--ultrafilter", "U")[0] == 2


def test_consequence_counterexample(capsys):
    code, out, _ = run(capsys, "consequence", DATA / "inferences" / "adjunction.txt", CONTRA,
                       "--max-size", 1)
    assert code == 1
    assert "0 : (e1)" in out


def test_consequence_modus_tollens(capsys):
    code, _, _ = run(capsys, "consequence", DATA / "inferences" / "modus_tollens.txt",
                     "~~(forall x (R(x)) & ~forall x (R(x)))", "--max-size", 1)
    assert code == 1


def test_consequence_reflexive(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text(ALL_R + "\n")
    assert run(capsys, "consequence", g, ALL_R, "--max-size", 2) == (
        0, "no counterexample up to size 2\n", "")


def test_consequence_open_alpha(capsys):
    code, _, _ = run(capsys, "consequence", DATA / "inferences" / "adjunction.txt", "R(x)")
    assert code == 2


def test_suite_products(capsys):
    code, out, _ = run(capsys, "suite", "products", "--cases", 5)
    assert code == 0
    assert "trivial_filter_breaks_plus" in out
    assert out.splitlines()[-1].endswith("0 failed (seed 20240518, 5 cases each)")


def test_suite_unknown_name(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["suite", "bogus"])
    assert exc.value.code == 2


def _module(*argv):
    return subprocess.run([sys.executable, "-m", "partialmt", *map(str, argv)],
                          capture_output=True, text=True)


def test_output_is_deterministic():
    for argv in (("suite", "all", "--cases", 3, "--seed", 9),
                 ("product", FAMILY, "--filter", "trivial"),
                 ("consequence", DATA / "inferences" / "adjunction.txt", CONTRA)):
        first, second = _module(*argv), _module(*argv)
        assert first.stdout == second.stdout and first.stdout
        assert first.returncode == second.returncode
