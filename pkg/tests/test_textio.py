import random
from pathlib import Path

import pytest

from partialmt import fuzz
from partialmt.structures import UNK, PartialFunctionTable, PartialStructure, relation_from_triple
from partialmt.syntax import Signature
from partialmt.textio import (FormatError, detect_kind, dump_structure, load_family,
                              load_manifest, load_sentences, parse_manifest, parse_sentence_file,
                              parse_structure)

DATA = Path(__file__).resolve().parent.parent / "data"


def test_parse_single_point(single_point):
    assert parse_structure((DATA / "single_point.txt").read_text()) == single_point


def test_explicit_arity_and_comments():
    s = parse_structure("universe a b  # two\nrelation S 2\n+ : (a,b)\n"
                        "- : (a,a) (b,b)\n0 : (b,a)\n")
    assert s.signature == Signature({"S": 2})
    assert s["S"][("b", "a")] is UNK


@pytest.mark.parametrize("text, line, fragment", [
    ("universe a\nrelation R\n+ : (a)\n- : (a)\n", 2, "more than one part"),
    ("universe a b\nrelation R\n+ : (a)\n", 2, "none of the three parts"),
    ("universe a\nrelation R\n+ : (a) junk\n", 3, "junk"),
    ("universe a\n+ : (a)\n", 2, "outside"),
    ("relation R\n", None, "missing universe"),
    ("universe a a\n", 1, "twice"),
    ("universe a\nrelation R 2\n+ : (a)\n", 2, "single arity"),
    ("universe a\nbogus\n", 2, "unrecognized"),
])
def test_structure_diagnostics(text, line, fragment):
    with pytest.raises(FormatError) as exc:
        parse_structure(text)
    assert exc.value.line == line
    assert fragment in str(exc.value)


def test_round_trip_fuzzed():
    rng = random.Random(17)
    for _ in range(200):
        sig = fuzz.random_signature(rng, max_arity=3)
        s = fuzz.random_structure(rng, sig, rng.randint(1, 3))
        text = dump_structure(s)
        assert parse_structure(text) == s
        assert dump_structure(parse_structure(text)) == text


def test_round_trip_with_functions_and_constants():
    u = ("a", "b")
    graph = relation_from_triple([("a", "b")], [("a", "a"), ("b", "a")], [("b", "b")], u, 2)
    s = PartialStructure(Signature({}, {"f": 1, "c": 0, "d": 0}), u, {},
                         functions={"f": PartialFunctionTable(1, graph)},
                         constants={"c": "b", "d": None})
    text = dump_structure(s)
    assert "constant d = ?" in text and "function f 1" in text
    assert parse_structure(text) == s


def test_manifest_and_family(two_factor):
    m = load_manifest(DATA / "family" / "family.txt")
    assert list(m.factors) == ["x", "y"]
    assert m.filters["F"].members == {frozenset({"x", "y"})}
    assert m.ultrafilters["U"].members == {frozenset({"x"}), frozenset({"x", "y"})}
    assert load_family(m) == two_factor


def test_manifest_unnamed_ultrafilter():
    m = parse_manifest("index x a.txt\nindex y b.txt\nultrafilter principal y\n")
    assert frozenset({"y"}) in m.ultrafilters["U"]


@pytest.mark.parametrize("text, fragment", [
    ("index x\n", "index NAME PATH"),
    ("index x a\nindex x b\n", "twice"),
    ("index x a\nfilter F = {x,z}\n", "unknown index z"),
    ("index x a\nfilter F = x\n", "braced"),
    ("index x a\nultrafilter U principal q\n", "unknown index q"),
    ("filter F = {x}\n", "no index"),
])
def test_manifest_diagnostics(text, fragment):
    with pytest.raises(FormatError, match=fragment):
        parse_manifest(text)


def test_missing_factor_file(tmp_path):
    (tmp_path / "fam.txt").write_text("index x nowhere.txt\n")
    with pytest.raises(FormatError, match="nowhere.txt not found"):
        load_family(load_manifest(tmp_path / "fam.txt"))


def test_sentence_files():
    gamma, sig = load_sentences(DATA / "inferences" / "adjunction.txt")
    assert len(gamma) == 2 and sig == Signature({"R": 1})
    gamma, sig = parse_sentence_file("signature R:1 S:2\nforall x (R(x))\n")
    assert sig == Signature({"R": 1, "S": 2})
    with pytest.raises(FormatError) as exc:
        parse_sentence_file("forall x (R(x))\nR(x)\n")
    assert exc.value.line == 2


def test_detect_kind():
    assert detect_kind("# c\nuniverse a\n") == "structure"
    assert detect_kind("index x a.txt\n") == "family"
    assert detect_kind("forall x (R(x))\n") == "sentences"
