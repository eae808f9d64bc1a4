import random

import pytest

from partialmt import fuzz
from partialmt.products import (FilterError, IndexedFamily, ProductElement, all_filters,
                                compactness_construction, compactness_witness, direct_product,
                                equivalent_mod_filter, extend_to_ultrafilter, family_minus,
                                family_plus, filter_classes, has_fip, is_filter, is_ultrafilter,
                                los_check, normals_of_family, principal_filter,
                                product_unknown_nonempty_characterization,
                                quasi_los_forward, reduced_product, subsets, trivial_filter,
                                ultraproduct, FilterSet)
from partialmt.semantics import eval_total, quasi_models
from partialmt.structures import (PartialStructure, StructureError,
                                  is_normal, plus_completion, relation_from_triple,
                                  structures_equal, total_relation)
from partialmt.syntax import And, Forall, Not, Pred, Signature

ALL_R = Forall("x", Pred("R", ("x",)))
R1 = Signature({"R": 1})


def unary(universe, pos=(), neg=(), unk=()):
    rel = relation_from_triple([(e,) for e in pos], [(e,) for e in neg],
                               [(e,) for e in unk], universe, 1)
    return PartialStructure(R1, tuple(universe), {"R": rel})


# --- the two-factor example --------------------------------------------------

def test_direct_product_two_factor(two_factor):
    p = direct_product(two_factor)
    assert p.universe == ("<a1.a2>",)
    assert p["R"].triple() == (frozenset(), frozenset(), {("<a1.a2>",)})


def test_reduced_product_trivial_filter(two_factor):
    q = reduced_product(two_factor, trivial_filter(two_factor.index))
    assert q.universe == ("[<a1.a2>]",)
    assert q["R"].triple() == (frozenset(), {("[<a1.a2>]",)}, frozenset())


def test_trivial_filter_regression(two_factor):
    f = trivial_filter(two_factor.index)
    q = reduced_product(two_factor, f)
    b = reduced_product(family_plus(two_factor), f)
    assert b["R"].pos == {("[<a1.a2>]",)}
    assert not is_normal(q, b)
    assert not structures_equal(b, plus_completion(q))


def test_ultraproduct_two_factor(two_factor):
    at_x = ultraproduct(two_factor, principal_filter(two_factor.index, {"x"}))
    assert at_x.is_total and at_x["R"].pos == {("[<a1.a2>]",)}
    at_y = ultraproduct(two_factor, principal_filter(two_factor.index, {"y"}))
    assert at_y["R"].unk == {("[<a1.a2>]",)}


def test_unknown_characterization_examples(two_factor):
    assert product_unknown_nonempty_characterization(two_factor, "R") == (True, True)
    empty = IndexedFamily.of({"x": unary(["a"], neg=["a"]), "y": unary(["b"], unk=["b"])})
    assert product_unknown_nonempty_characterization(empty, "R") == (False, False)
    total = IndexedFamily.of({"x": unary(["a"], pos=["a"]), "y": unary(["b"], neg=["b"])})
    assert product_unknown_nonempty_characterization(total, "R") == (False, False)
    assert direct_product(total).is_total


def test_singleton_family_is_isomorphic():
    a = unary(["a", "b"], pos=["a"], unk=["b"])
    p = direct_product(IndexedFamily.of({"i": a}))
    assert p["R"].pos == {("<a>",)} and p["R"].unk == {("<b>",)}


def test_family_plus_and_normals(two_factor):
    plus = family_plus(two_factor)
    assert plus["x"]["R"].pos == {("a1",)} and plus["y"]["R"].pos == {("a2",)}
    assert all(plus[i].is_total for i in plus.index)
    assert family_minus(two_factor)["y"]["R"].neg == {("a2",)}
    assert len(list(normals_of_family(two_factor))) == 2
    assert list(normals_of_family(plus)) == [plus]


def test_family_invariants():
    with pytest.raises(StructureError):
        IndexedFamily((), {})
    other = PartialStructure(Signature({"S": 1}), ("a",), {"S": total_relation([], ["a"], 1)})
    with pytest.raises(StructureError):
        IndexedFamily.of({"x": unary(["a"], pos=["a"]), "y": other})


# --- filters -----------------------------------------------------------------

def test_trivial_filter_is_not_ultra():
    f = trivial_filter(("x", "y"))
    assert f.members == {frozenset({"x", "y"})}
    assert is_filter(f) and not is_ultrafilter(f)


def test_principal_is_ultra():
    for i0 in "xyz":
        assert is_ultrafilter(principal_filter(tuple("xyz"), {i0}))


def test_non_filters():
    ground = ("x", "y")
    assert not is_filter(FilterSet(ground, set()))
    assert not is_filter(FilterSet(ground, {frozenset(), frozenset(ground)}))
    assert not is_filter(FilterSet(ground, {frozenset("x"), frozenset("y"), frozenset(ground)}))
    assert not is_filter(FilterSet(ground, {frozenset("x")}))


def test_filters_are_principal_exhaustively():
    ground = tuple("xyz")
    every = set()
    for k in range(2 ** 8):
        members = {s for j, s in enumerate(subsets(ground)) if k >> j & 1}
        f = FilterSet(ground, members)
        if is_filter(f):
            every.add(f.members)
    assert every == {f.members for f in all_filters(ground)}
    assert len(every) == 7


def test_fip():
    assert not has_fip([{"x"}, {"y"}], ("x", "y"))
    assert has_fip([{"x", "y"}, {"y"}], ("x", "y"))
    assert has_fip([], ("x", "y"))


def test_extend_to_ultrafilter():
    ground = tuple("xyz")
    u = extend_to_ultrafilter([{"x", "y"}, {"y", "z"}], ground)
    assert u == principal_filter(ground, {"y"})
    assert is_ultrafilter(u) and {"x", "y"} in u and {"y", "z"} in u
    assert extend_to_ultrafilter([], ground) == principal_filter(ground, {"x"})
    with pytest.raises(FilterError):
        extend_to_ultrafilter([{"x"}, {"y"}], ground)


def test_equivalence_mod_filter():
    index = ("x", "y")
    u = ProductElement(index, ("a", "b"))
    v = ProductElement(index, ("a", "c"))
    assert equivalent_mod_filter(u, u, trivial_filter(index))
    assert not equivalent_mod_filter(u, v, trivial_filter(index))
    assert equivalent_mod_filter(u, v, principal_filter(index, {"x"}))
    assert not equivalent_mod_filter(u, v, principal_filter(index, {"y"}))


def test_filter_classes_under_principal():
    fam = IndexedFamily.of({"x": unary(["a", "b"], pos=["a"], neg=["b"]),
                            "y": unary(["c", "d"], unk=["c", "d"])})
    classes = filter_classes(fam, principal_filter(fam.index, {"x"}))
    assert [[h.name for h in c] for c in classes] == [["<a.c>", "<a.d>"], ["<b.c>", "<b.d>"]]
    assert len(filter_classes(fam, trivial_filter(fam.index))) == 4


def test_reduced_product_rejects_bad_filters(two_factor):
    with pytest.raises(FilterError):
        reduced_product(two_factor, FilterSet(("x", "y"), {frozenset("x")}))
    with pytest.raises(FilterError):
        ultraproduct(two_factor, trivial_filter(("x", "y")))
    with pytest.raises(FilterError):
        reduced_product(two_factor, trivial_filter(("x", "z")))


def test_trivial_filter_agrees_with_product_when_all_unknown():
    fam = IndexedFamily.of({"x": unary(["a"], unk=["a"]), "y": unary(["b"], unk=["b"])})
    assert direct_product(fam)["R"].unk == {("<a.b>",)}
    assert reduced_product(fam, trivial_filter(fam.index))["R"].unk == {("[<a.b>]",)}


def test_ultraproduct_reads_off_coordinate():
    rng = random.Random(5)
    for _ in range(40):
        sig = fuzz.random_signature(rng)
        fam = fuzz.random_family(rng, sig)
        for i0 in fam.index:
            up = ultraproduct(fam, principal_filter(fam.index, {i0}))
            k = fam.index.index(i0)
            classes = filter_classes(fam, principal_filter(fam.index, {i0}))
            to_factor = {f"[{c[0].name}]": c[0].values[k] for c in classes}
            assert sorted(to_factor.values()) == sorted(fam[i0].universe)
            for name, r in up.relations.items():
                for t, v in r.verdicts.items():
                    assert fam[i0][name][tuple(to_factor[e] for e in t)] is v


# --- Łoś and the quasi-truth transfer ----------------------------------------

def _two_total():
    return IndexedFamily.of({"x": unary(["a"], pos=["a"]), "y": unary(["b"], neg=["b"])})


def test_los_examples():
    fam = _two_total()
    assert los_check(fam, principal_filter(fam.index, {"x"}), ALL_R) == (True, True)
    assert los_check(fam, principal_filter(fam.index, {"y"}), ALL_R) == (False, False)
    single = IndexedFamily.of({"i": unary(["a", "b"], pos=["a"], neg=["b"])})
    assert los_check(single, principal_filter(("i",), {"i"}), ALL_R) == (False, False)


def test_los_rejects_partial_factors(two_factor):
    with pytest.raises(StructureError):
        los_check(two_factor, principal_filter(two_factor.index, {"x"}), ALL_R)


def test_quasi_los_forward_examples(two_factor, single_point):
    fam = IndexedFamily.of({"x": single_point, "y": single_point})
    for i0 in fam.index:
        assert quasi_los_forward(fam, principal_filter(fam.index, {i0}), ALL_R) == (True, True)
        assert quasi_los_forward(fam, principal_filter(fam.index, {i0}), Not(ALL_R)) == (True, True)
    total = family_plus(two_factor)
    assert quasi_los_forward(total, principal_filter(total.index, {"y"}), ALL_R) == (True, True)


# --- compactness -------------------------------------------------------------

def test_compactness_single_point(single_point):
    gamma = [ALL_R, Not(ALL_R)]
    models = {s: single_point for s in subsets(gamma) if s}
    run = compactness_construction(gamma, models)
    assert len(run.index) == 3
    assert is_ultrafilter(run.ultrafilter)
    assert all(star in run.ultrafilter for star in run.stars.values())
    assert quasi_models(run.witness, gamma)


def test_compactness_singleton(single_point):
    gamma = [ALL_R]
    assert quasi_models(compactness_witness(gamma, {frozenset(gamma): single_point}), gamma)


def test_compactness_total_models():
    sig = Signature({"R": 1, "S": 1})
    p, q = Forall("x", Pred("R", ("x",))), Forall("x", Pred("S", ("x",)))
    gamma = [p, q, Not(Forall("x", And(Pred("R", ("x",)), Not(Pred("S", ("x",))))))]
    full = total_relation([("a",)], ["a"], 1)
    model = PartialStructure(sig, ("a",), {"R": full, "S": full})
    models = {s: model for s in subsets(gamma) if s}
    w = compactness_witness(gamma, models)
    assert w.is_total and all(eval_total(w, g) for g in gamma)


def test_compactness_rejects_bad_model(single_point):
    contra = And(ALL_R, Not(ALL_R))
    with pytest.raises(ValueError):
        compactness_witness([contra], {frozenset([contra]): single_point})
    with pytest.raises(ValueError):
        compactness_witness([ALL_R, contra], {frozenset([ALL_R]): single_point})
