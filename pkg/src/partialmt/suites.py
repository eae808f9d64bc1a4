"""Randomized checks of the metatheorems, grouped into suites.

Each check draws one case from a per-case ``random.Random`` seeded with
``"{seed}/{check}/{case}"``, so results do not depend on run order.  A
check raises ``AssertionError`` on failure and may return a dict of
counters that are summed over cases.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import fuzz
from .products import (FilterSet, IndexedFamily, all_filters, direct_product,
                       equalizing_normals, equivalent_mod_filter, extend_to_ultrafilter,
                       family_minus, family_plus, filter_classes, has_fip, is_filter,
                       is_ultrafilter, los_check, principal_filter, product_elements,
                       product_is_total_by_factors, product_unknown_nonempty_characterization,
                       quasi_los_forward, reduced_product, reduced_verdict, subsets,
                       trivial_filter, ultraproduct, compactness_construction)
from .semantics import (Verdict3, classically_valid_bounded, enumerate_total_structures,
                        eval_kleene, eval_total, quasi_consequence_bounded, quasi_models,
                        quasi_true, quasi_true_by_enumeration, quasi_valid_bounded)
from .structures import (NEG, POS, UNK, PartialRelation, PartialStructure, all_tuples,
                         enumerate_normals, expands, is_normal, minus_completion,
                         plus_completion, relation_from_triple, structures_equal,
                         unknown_count)
from .syntax import And, Forall, Implies, Not, Or, Pred, Signature

DEFAULT_SEED = 20240518
DEFAULT_CASES = 200

R1 = Signature({"R": 1})


@dataclass
class Check:
    suite: str
    name: str
    fn: Callable[[random.Random], Optional[dict]]
    fixed: bool = False   # deterministic: one case suffices


CHECKS: list[Check] = []


def check(suite: str, fixed: bool = False):
    def register(fn):
        CHECKS.append(Check(suite, fn.__name__, fn, fixed))
        return fn
    return register


# --- shared worked examples --------------------------------------------------

def single_point_structure() -> PartialStructure:
    """One element whose membership in R is unknown."""
    return PartialStructure(R1, ("a",), {"R": relation_from_triple([], [], [("a",)], ["a"], 1)})


def two_factor_family() -> IndexedFamily:
    """Factor x: R true at its only element; factor y: R unknown at its only element."""
    ax = PartialStructure(R1, ("a1",), {"R": relation_from_triple([("a1",)], [], [], ["a1"], 1)})
    ay = PartialStructure(R1, ("a2",), {"R": relation_from_triple([], [], [("a2",)], ["a2"], 1)})
    return IndexedFamily(("x", "y"), {"x": ax, "y": ay})


ALL_R = Forall("x", Pred("R", ("x",)))
CONTRADICTION = And(ALL_R, Not(ALL_R))


def non_consequences() -> list[tuple[str, tuple, object]]:
    """(label, premises, conclusion) for each refuted classical inference."""
    phi, psi = ALL_R, Not(ALL_R)
    out = [("adjunction", (phi, psi), And(phi, psi))]
    phi, psi = ALL_R, CONTRADICTION
    out.append(("modus ponens", (Implies(phi, psi), phi), psi))
    out.append(("disjunctive syllogism", (Or(phi, psi), Not(phi)), psi))
    phi, psi = Not(CONTRADICTION), ALL_R
    out.append(("modus tollens", (Implies(phi, psi), Not(psi)), Not(phi)))
    phi, psi = Not(ALL_R), CONTRADICTION
    out.append(("deduction converse", (ALL_R, phi), psi))
    return out


# --- structures --------------------------------------------------------------

def _structure(rng, max_size=3, max_unknowns=8):
    return fuzz.random_structure(rng, fuzz.random_signature(rng), max_size=max_size,
                                 max_unknowns=max_unknowns)


@check("structures")
def expansion_reflexive(rng):
    a = _structure(rng)
    assert expands(a, a)


@check("structures")
def completions_are_normal(rng):
    a = _structure(rng)
    for b in (plus_completion(a), minus_completion(a)):
        assert b.is_total and expands(a, b) and is_normal(a, b)


@check("structures")
def expansion_keeps_total_relations(rng):
    a = _structure(rng)
    b = fuzz.random_expansion(rng, a)
    assert expands(a, b)
    for name, r in a.relations.items():
        if r.is_total:
            assert b.relations[name] == r, name


@check("structures")
def normals_stay_within_known_parts(rng):
    a = _structure(rng)
    for b in enumerate_normals(a):
        for name, r in a.relations.items():
            rb = b.relations[name]
            assert rb.pos <= r.pos | r.unk
            assert rb.neg <= r.neg | r.unk


@check("structures")
def total_structure_is_its_only_normal(rng):
    sig = fuzz.random_signature(rng)
    a = fuzz.random_total_structure(rng, sig)
    assert is_normal(a, a)
    assert list(enumerate_normals(a)) == [a]
    other = fuzz.random_total_structure(rng, sig, size=len(a.universe))
    assert is_normal(a, other) == structures_equal(a, other)


@check("structures")
def normal_count_law(rng):
    a = _structure(rng)
    normals = list(enumerate_normals(a))
    assert len(normals) == 2 ** unknown_count(a)
    assert len(set(normals)) == len(normals)
    assert all(is_normal(a, b) for b in normals)


@check("structures")
def normals_match_brute_force(rng):
    a = _structure(rng, max_size=2, max_unknowns=4)
    brute = {b for size in (len(a.universe),)
             for b in enumerate_total_structures(a.signature, size)}
    # rename e1.. to the universe of a
    ren = dict(zip((f"e{k}" for k in range(1, len(a.universe) + 1)), a.universe))
    brute = {PartialStructure(a.signature, a.universe, {
        n: PartialRelation(r.arity, {tuple(ren[x] for x in t): v for t, v in r.verdicts.items()})
        for n, r in b.relations.items()}) for b in brute}
    assert {b for b in brute if is_normal(a, b)} == set(enumerate_normals(a))


@check("structures")
def triple_roundtrip(rng):
    a = _structure(rng)
    for r in a.relations.values():
        assert relation_from_triple(*r.triple(), a.universe, r.arity) == r


# --- semantics ---------------------------------------------------------------

@check("semantics")
def quasi_truth_is_truth_on_total(rng):
    sig = fuzz.random_signature(rng)
    a = fuzz.random_total_structure(rng, sig)
    f = fuzz.random_sentence(rng, sig, 4)
    assert quasi_true(a, f) == eval_total(a, f)


@check("semantics")
def quasi_truth_matches_enumeration(rng):
    a = _structure(rng)
    f = fuzz.random_sentence(rng, a.signature, 4)
    assert quasi_true(a, f) == quasi_true_by_enumeration(a, f)


@check("semantics")
def kleene_is_sound(rng):
    a = _structure(rng)
    f = fuzz.random_sentence(rng, a.signature, 4)
    v = eval_kleene(a, f)
    values = {eval_total(b, f) for b in enumerate_normals(a)}
    if v is Verdict3.TRUE:
        assert values == {True}
    elif v is Verdict3.FALSE:
        assert values == {False}


@check("semantics")
def quasi_validity_is_classical(rng):
    sig = fuzz.random_signature(rng, max_symbols=1)
    f = fuzz.random_sentence(rng, sig, 4)
    assert (quasi_valid_bounded(f, 2, sig) is None) == classically_valid_bounded(f, 2, sig)
    return {"valid": int(classically_valid_bounded(f, 2, sig))}


@check("semantics", fixed=True)
def classical_inferences_fail(rng):
    for label, gamma, alpha in non_consequences():
        report = quasi_consequence_bounded(gamma, alpha, 1, R1)
        assert report is not None, label
        assert report.replay(), label
    # the deduction-theorem half that does hold
    assert quasi_consequence_bounded((ALL_R,), Implies(Not(ALL_R), CONTRADICTION), 2, R1) is None


# --- products ----------------------------------------------------------------

def _family(rng, total=False, max_unknowns=3):
    return fuzz.random_family(rng, fuzz.random_signature(rng), total=total,
                              max_unknowns=max_unknowns)


@check("products")
def unknown_product_characterization(rng):
    fam = _family(rng)
    for symbol in fam.signature.relations:
        left, right = product_unknown_nonempty_characterization(fam, symbol)
        assert left == right, symbol


@check("products")
def product_totality_criterion(rng):
    fam = _family(rng)
    assert direct_product(fam).is_total == product_is_total_by_factors(fam)


@check("products")
def product_of_normals_is_normal(rng):
    fam = _family(rng)
    normals = fuzz.random_normal_family(rng, fam)
    assert is_normal(direct_product(fam), direct_product(normals))


@check("products")
def product_commutes_with_completions(rng):
    fam = _family(rng)
    p = direct_product(fam)
    assert structures_equal(plus_completion(p), direct_product(family_plus(fam)))
    assert structures_equal(minus_completion(p), direct_product(family_minus(fam)))


@check("products")
def filters_are_exactly_principal(rng):
    ground = tuple("xyz"[:rng.randint(1, 3)])
    subs = subsets(ground)
    brute = {FilterSet(ground, fam) for n in range(len(subs) + 1)
             for fam in itertools.combinations(subs, n)
             if is_filter(FilterSet(ground, fam))}
    assert brute == set(all_filters(ground))
    assert is_filter(trivial_filter(ground))
    ultras = {f for f in brute if is_ultrafilter(f)}
    assert ultras == {principal_filter(ground, {i}) for i in ground}


@check("products")
def filter_equivalence_is_equivalence(rng):
    fam = _family(rng)
    f = fuzz.random_filter(rng, fam.index)
    elems = product_elements(fam)
    eq = {(u, v): equivalent_mod_filter(u, v, f) for u in elems for v in elems}
    for u in elems:
        assert eq[u, u]
    for u, v in itertools.product(elems, repeat=2):
        assert eq[u, v] == eq[v, u]
    for u, v, w in itertools.product(elems, repeat=3):
        if eq[u, v] and eq[v, w]:
            assert eq[u, w]
    t = trivial_filter(fam.index)
    for u, v in itertools.product(elems, repeat=2):
        assert equivalent_mod_filter(u, v, t) == (u == v)


@check("products")
def reduced_verdict_ignores_representatives(rng):
    fam = _family(rng)
    f = fuzz.random_filter(rng, fam.index)
    classes = filter_classes(fam, f)
    for symbol, arity in fam.signature.relations.items():
        picked = [rng.choice(classes) for _ in range(arity)]
        base = reduced_verdict(fam, f, symbol, [c[0] for c in picked])
        for reps in itertools.product(*picked):
            assert reduced_verdict(fam, f, symbol, reps) is base


def _index_sets(fam, symbol, hs):
    sets = {}
    for label, view in (("A", fam), ("A-", family_minus(fam)), ("A+", family_plus(fam))):
        for v in (POS, UNK):
            sets[label, v] = {i for k, i in enumerate(fam.index)
                              if view[i].relations[symbol][tuple(h.values[k] for h in hs)] is v}
    return sets


@check("products")
def index_set_inclusions(rng):
    fam = _family(rng)
    normals = fuzz.random_normal_family(rng, fam)
    elems = product_elements(fam)
    for symbol, arity in fam.signature.relations.items():
        hs = [rng.choice(elems) for _ in range(arity)]
        s = _index_sets(fam, symbol, hs)
        b_pos = {i for k, i in enumerate(fam.index)
                 if normals[i].relations[symbol][tuple(h.values[k] for h in hs)] is POS}
        assert s["A", POS] <= b_pos
        assert b_pos <= s["A", POS] | s["A", UNK]
        assert s["A", POS] == s["A-", POS]
        assert s["A+", POS] == s["A", POS] | s["A", UNK]


@check("products")
def reduced_product_of_normals_extends_positive(rng):
    fam = _family(rng)
    f = fuzz.random_filter(rng, fam.index)
    a = reduced_product(fam, f)
    b = reduced_product(fuzz.random_normal_family(rng, fam), f)
    assert a.universe == b.universe
    for name, r in a.relations.items():
        assert r.pos <= b.relations[name].pos


@check("products")
def reduced_product_commutes_with_minus(rng):
    fam = _family(rng)
    f = fuzz.random_filter(rng, fam.index)
    assert structures_equal(minus_completion(reduced_product(fam, f)),
                            reduced_product(family_minus(fam), f))


@check("products", fixed=True)
def trivial_filter_breaks_plus(rng):
    fam = two_factor_family()
    f = trivial_filter(fam.index)
    a = reduced_product(fam, f)
    b = reduced_product(family_plus(fam), f)
    assert a.is_total
    assert not is_normal(a, b)
    assert not structures_equal(plus_completion(a), b)


@check("products")
def ultrafilter_splits_unions(rng):
    ground = tuple("xyz"[:rng.randint(1, 3)])
    u = fuzz.random_ultrafilter(rng, ground)
    subs = subsets(ground)
    x, y = rng.choice(subs), rng.choice(subs)
    if (x | y) in u:
        assert x in u or y in u
    for x, y in itertools.product(subs, repeat=2):
        if (x | y) in u:
            assert x in u or y in u


@check("products")
def fip_collections_extend(rng):
    ground = tuple("xyz"[:rng.randint(1, 3)])
    subs = subsets(ground)
    sets = rng.sample(subs, rng.randint(0, min(3, len(subs))))
    literal = all(frozenset(ground).intersection(*combo)
                  for n in range(1, len(sets) + 1) for combo in itertools.combinations(sets, n))
    assert has_fip(sets, ground) == literal
    if literal:
        u = extend_to_ultrafilter(sets, ground)
        assert is_ultrafilter(u) and all(s in u for s in sets)


@check("products")
def ultraproduct_of_normals_is_normal(rng):
    fam = _family(rng)
    u = fuzz.random_ultrafilter(rng, fam.index)
    assert is_normal(ultraproduct(fam, u), ultraproduct(fuzz.random_normal_family(rng, fam), u))


@check("products")
def ultraproduct_commutes_with_plus(rng):
    fam = _family(rng)
    u = fuzz.random_ultrafilter(rng, fam.index)
    assert structures_equal(plus_completion(ultraproduct(fam, u)),
                            ultraproduct(family_plus(fam), u))


@check("products")
def quasi_truth_index_sets(rng):
    fam = _family(rng)
    f = fuzz.random_sentence(rng, fam.signature, 3)
    quasi = {i for i in fam.index if quasi_true(fam[i], f)}
    normals = fuzz.random_normal_family(rng, fam)
    assert {i for i in fam.index if eval_total(normals[i], f)} <= quasi
    eq = equalizing_normals(fam, f)
    assert all(is_normal(fam[i], eq[i]) for i in fam.index)
    assert {i for i in fam.index if eval_total(eq[i], f)} == quasi


@check("products")
def los_biconditional(rng):
    fam = _family(rng, total=True)
    f = fuzz.random_sentence(rng, fam.signature, 3)
    for i0 in fam.index:
        left, right = los_check(fam, principal_filter(fam.index, {i0}), f)
        assert left == right, i0


@check("products")
def quasi_los_forward_direction(rng):
    fam = _family(rng)
    f = fuzz.random_sentence(rng, fam.signature, 3)
    converse = 0
    for i0 in fam.index:
        hyp, concl = quasi_los_forward(fam, principal_filter(fam.index, {i0}), f)
        if hyp:
            assert concl, i0
        elif concl:
            converse += 1
    return {"converse_violations": converse}


def compactness_instance(rng, max_gamma=3):
    """(gamma, models) with a partial model for every non-empty subset."""
    sig = fuzz.random_signature(rng)
    while True:
        gamma = list(dict.fromkeys(fuzz.random_sentence(rng, sig, 3)
                                   for _ in range(rng.randint(1, max_gamma))))
        models = {}
        for i in subsets(gamma):
            if not i:
                continue
            model = None
            for _ in range(60):
                cand = fuzz.random_structure(rng, sig, max_size=2, max_unknowns=4)
                if quasi_models(cand, i):
                    model = cand
                    break
            if model is None:
                break
            models[i] = model
        else:
            return gamma, models


@check("products")
def compactness(rng):
    gamma, models = compactness_instance(rng)
    run = compactness_construction(gamma, models)
    assert has_fip(run.stars.values(), run.index)
    assert is_ultrafilter(run.ultrafilter)
    assert quasi_models(run.witness, gamma)


# --- runner ------------------------------------------------------------------

SUITES = ("structures", "semantics", "products")


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: int = 0
    failed: int = 0
    first_failure: Optional[str] = None
    counters: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def line(self) -> str:
        status = "ok  " if self.ok else "FAIL"
        extra = "".join(f" {k}={v}" for k, v in sorted(self.counters.items()))
        out = f"{status} {self.suite}.{self.name}: {self.passed}/{self.passed + self.failed}{extra}"
        if self.first_failure:
            out += f"\n     first failure: {self.first_failure}"
        return out


def case_rng(seed, name: str, case: int) -> random.Random:
    return random.Random(f"{seed}/{name}/{case}")


def run_check(c: Check, cases: int = DEFAULT_CASES, seed=DEFAULT_SEED) -> CheckResult:
    res = CheckResult(c.suite, c.name)
    for k in range(1 if c.fixed else cases):
        try:
            counters = c.fn(case_rng(seed, c.name, k))
        except AssertionError as e:
            res.failed += 1
            if res.first_failure is None:
                res.first_failure = f"case {k}: {e or 'assertion failed'}"
            continue
        res.passed += 1
        if counters:
            res.counters.update(counters)
    return res


def select(name: str) -> list[Check]:
    if name == "all":
        return list(CHECKS)
    if name not in SUITES:
        raise KeyError(name)
    return [c for c in CHECKS if c.suite == name]


def run_suite(name: str, cases: int = DEFAULT_CASES, seed=DEFAULT_SEED,
              report: Optional[Callable[[CheckResult], None]] = None) -> list[CheckResult]:
    results = []
    for c in select(name):
        r = run_check(c, cases, seed)
        if report:
            report(r)
        results.append(r)
    return results
