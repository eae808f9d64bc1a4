"""Direct products, filters, reduced products and ultraproducts of finite
families of partial structures, and the compactness construction.

Index sets are finite, so every ultrafilter here is principal.  Product
elements are named ``<v1.v2...>`` (coordinates in index order) and
filter classes ``[<...>]`` after their least representative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .semantics import eval_total, quasi_models, quasi_true, quasi_witness
from .structures import (NEG, POS, UNK, PartialRelation, PartialStructure, StructureError,
                         Verdict, all_tuples, enumerate_normals, minus_completion,
                         plus_completion)
from .syntax import Formula, Signature

__all__ = [
    "IndexedFamily", "ProductElement", "FilterSet", "FilterError", "product_elements",
    "direct_product", "product_unknown_nonempty_characterization", "product_is_total_by_factors",
    "subsets", "is_filter", "trivial_filter", "principal_filter", "is_ultrafilter", "has_fip",
    "extend_to_ultrafilter", "all_filters", "equivalent_mod_filter", "filter_classes",
    "reduced_verdict", "reduced_product", "ultraproduct", "los_check", "quasi_los_forward",
    "normals_of_family", "family_plus", "family_minus", "equalizing_normals",
    "CompactnessRun", "compactness_construction", "compactness_witness",
]

Index = Hashable


class FilterError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class IndexedFamily:
    index: tuple
    factors: Mapping[Index, PartialStructure]

    def __post_init__(self):
        index = tuple(self.index)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "factors", {i: self.factors[i] for i in index})
        if not index:
            raise StructureError("index set must be non-empty")
        if len(set(index)) != len(index):
            raise StructureError("index set lists an index twice")
        sigs = {f.signature for f in self.factors.values()}
        if len(sigs) != 1:
            raise StructureError("factors do not share a signature")

    @classmethod
    def of(cls, factors: Mapping[Index, PartialStructure]) -> "IndexedFamily":
        return cls(tuple(factors), factors)

    @property
    def signature(self) -> Signature:
        return self.factors[self.index[0]].signature

    def __getitem__(self, i: Index) -> PartialStructure:
        return self.factors[i]

    def map(self, fn) -> "IndexedFamily":
        return IndexedFamily(self.index, {i: fn(s) for i, s in self.factors.items()})

    def __eq__(self, other):
        if not isinstance(other, IndexedFamily):
            return NotImplemented
        return self.index == other.index and self.factors == other.factors

    def __hash__(self):
        return hash((self.index, tuple(self.factors.values())))


@dataclass(frozen=True)
class ProductElement:
    """A choice function h with h(i) in the universe of factor i."""

    index: tuple
    values: tuple

    def __call__(self, i: Index):
        return self.values[self.index.index(i)]

    @property
    def name(self) -> str:
        return "<" + ".".join(map(str, self.values)) + ">"


def product_elements(fam: IndexedFamily) -> list[ProductElement]:
    """All product elements, in lexicographic order of the factor listings."""
    elems = [ProductElement(fam.index, vals)
             for vals in itertools.product(*(fam[i].universe for i in fam.index))]
    if len({h.name for h in elems}) != len(elems):
        raise StructureError("factor element names make product element names ambiguous")
    return elems


def _verdict_sets(fam: IndexedFamily, symbol: str,
                  hs: Sequence[ProductElement]) -> dict[Verdict, frozenset]:
    """{i : factor verdict at (h1(i),...,hn(i)) is v} for each verdict v."""
    out: dict[Verdict, set] = {POS: set(), NEG: set(), UNK: set()}
    for k, i in enumerate(fam.index):
        out[fam[i].relations[symbol][tuple(h.values[k] for h in hs)]].add(i)
    return {v: frozenset(s) for v, s in out.items()}


def direct_product(fam: IndexedFamily) -> PartialStructure:
    """Positive iff positive in every factor, negative iff negative in some
    factor, unknown otherwise."""
    elems = product_elements(fam)
    by_name = {h.name: h for h in elems}
    index = frozenset(fam.index)
    rels = {}
    for symbol, arity in fam.signature.relations.items():
        verdicts = {}
        for names in all_tuples(list(by_name), arity):
            sets = _verdict_sets(fam, symbol, [by_name[n] for n in names])
            if sets[POS] == index:
                verdicts[names] = POS
            elif sets[NEG]:
                verdicts[names] = NEG
            else:
                verdicts[names] = UNK
        rels[symbol] = PartialRelation(arity, verdicts)
    return PartialStructure(fam.signature, tuple(by_name), rels)


def _nonempty_as_relation(r: PartialRelation) -> bool:
    # a relation with empty positive and unknown parts counts as the empty relation
    return bool(r.pos or r.unk)


def product_unknown_nonempty_characterization(fam: IndexedFamily, symbol: str) -> tuple[bool, bool]:
    """(product has unknown tuples for ``symbol``, factor-side condition)."""
    left = bool(direct_product(fam).relations[symbol].unk)
    rels = [fam[i].relations[symbol] for i in fam.index]
    right = any(r.unk for r in rels) and all(_nonempty_as_relation(r) for r in rels)
    return left, right


def product_is_total_by_factors(fam: IndexedFamily) -> bool:
    """Factor-side criterion for totality of the direct product."""
    for symbol in fam.signature.relations:
        rels = [fam[i].relations[symbol] for i in fam.index]
        if any(r.unk for r in rels) and all(_nonempty_as_relation(r) for r in rels):
            return False
    return True


# --- filters -----------------------------------------------------------------

def subsets(ground: Sequence[Index]) -> list[frozenset]:
    ground = list(ground)
    return [frozenset(c) for n in range(len(ground) + 1)
            for c in itertools.combinations(ground, n)]


@dataclass(frozen=True)
class FilterSet:
    ground: tuple
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "ground", tuple(self.ground))
        object.__setattr__(self, "members", frozenset(frozenset(m) for m in self.members))

    def __contains__(self, x) -> bool:
        return frozenset(x) in self.members

    def __len__(self):
        return len(self.members)

    def sorted_members(self) -> list[frozenset]:
        order = {i: k for k, i in enumerate(self.ground)}
        return sorted(self.members, key=lambda m: (len(m), sorted(order[i] for i in m)))


def is_filter(f: FilterSet) -> bool:
    ground = frozenset(f.ground)
    members = f.members
    if ground not in members or frozenset() in members:
        return False
    if any(not m <= ground for m in members):
        return False
    if any(x & y not in members for x in members for y in members):
        return False
    return all(y in members for x in members for y in subsets(f.ground) if x <= y)


def trivial_filter(ground: Sequence[Index]) -> FilterSet:
    return FilterSet(tuple(ground), {frozenset(ground)})


def principal_filter(ground: Sequence[Index], core: Iterable[Index]) -> FilterSet:
    """All supersets of ``core`` within ``ground``."""
    core = frozenset(core)
    return FilterSet(tuple(ground), {x for x in subsets(ground) if core <= x})


def all_filters(ground: Sequence[Index]) -> list[FilterSet]:
    """Every filter over a finite ground set: one per non-empty core."""
    return [principal_filter(ground, core) for core in subsets(ground) if core]


def is_ultrafilter(f: FilterSet) -> bool:
    if not is_filter(f):
        return False
    ground = frozenset(f.ground)
    return all((x in f) != ((ground - x) in f) for x in subsets(f.ground))


def has_fip(sets: Iterable[Iterable[Index]], ground: Sequence[Index]) -> bool:
    """Every intersection of finitely many members is non-empty.

    For a finite collection this is the same as its total intersection
    being non-empty (the empty collection intersects to ``ground``).
    """
    return bool(frozenset(ground).intersection(*(frozenset(s) for s in sets)))


def extend_to_ultrafilter(sets: Iterable[Iterable[Index]], ground: Sequence[Index]) -> FilterSet:
    """A principal ultrafilter containing every set in ``sets``.

    Generated at the first index (in ground order) of the common
    intersection.
    """
    sets = [frozenset(s) for s in sets]
    if not has_fip(sets, ground):
        raise FilterError("the collection lacks the finite intersection property")
    common = frozenset(ground).intersection(*sets)
    i0 = next(i for i in ground if i in common)
    return principal_filter(ground, {i0})


def equivalent_mod_filter(u: ProductElement, v: ProductElement, f: FilterSet) -> bool:
    agree = {i for i, a, b in zip(u.index, u.values, v.values) if a == b}
    return agree in f


def filter_classes(fam: IndexedFamily, f: FilterSet) -> list[list[ProductElement]]:
    """Equivalence classes of product elements; each class and the class list
    are in product order, so ``cls[0]`` is the least representative."""
    classes: list[list[ProductElement]] = []
    for h in product_elements(fam):
        for cls in classes:
            if equivalent_mod_filter(cls[0], h, f):
                cls.append(h)
                break
        else:
            classes.append([h])
    return classes


def reduced_verdict(fam: IndexedFamily, f: FilterSet, symbol: str,
                    reps: Sequence[ProductElement]) -> Verdict:
    """Verdict of the classes of ``reps``, computed from these representatives."""
    sets = _verdict_sets(fam, symbol, reps)
    pos, unk = sets[POS] in f, sets[UNK] in f
    if pos and unk:
        raise FilterError("positive and unknown index sets both in the filter")
    if pos:
        return POS
    if unk:
        return UNK
    return NEG


def _check_filter_ground(fam: IndexedFamily, f: FilterSet):
    if frozenset(f.ground) != frozenset(fam.index):
        raise FilterError("filter ground set differs from the family's index set")


def reduced_product(fam: IndexedFamily, f: FilterSet) -> PartialStructure:
    _check_filter_ground(fam, f)
    if not is_filter(f):
        raise FilterError("not a filter")
    classes = filter_classes(fam, f)
    rep = {f"[{cls[0].name}]": cls[0] for cls in classes}
    rels = {}
    for symbol, arity in fam.signature.relations.items():
        rels[symbol] = PartialRelation(arity, {
            names: reduced_verdict(fam, f, symbol, [rep[n] for n in names])
            for names in all_tuples(list(rep), arity)})
    return PartialStructure(fam.signature, tuple(rep), rels)


def ultraproduct(fam: IndexedFamily, u: FilterSet) -> PartialStructure:
    _check_filter_ground(fam, u)
    if not is_ultrafilter(u):
        raise FilterError("not an ultrafilter")
    return reduced_product(fam, u)


def los_check(fam: IndexedFamily, u: FilterSet, sentence: Formula) -> tuple[bool, bool]:
    """(ultraproduct satisfies sentence, satisfying index set is in ``u``)."""
    for i in fam.index:
        if not fam[i].is_total:
            raise StructureError(f"factor {i} is not total")
    left = eval_total(ultraproduct(fam, u), sentence)
    right = {i for i in fam.index if eval_total(fam[i], sentence)} in u
    return left, right


def quasi_los_forward(fam: IndexedFamily, u: FilterSet, sentence: Formula) -> tuple[bool, bool]:
    """(quasi-true index set is in ``u``, ultraproduct quasi-satisfies sentence)."""
    hyp = {i for i in fam.index if quasi_true(fam[i], sentence)} in u
    return hyp, quasi_true(ultraproduct(fam, u), sentence)


# --- normal completions of families -----------------------------------------

def normals_of_family(fam: IndexedFamily) -> Iterator[IndexedFamily]:
    for choice in itertools.product(*(enumerate_normals(fam[i]) for i in fam.index)):
        yield IndexedFamily(fam.index, dict(zip(fam.index, choice)))


def family_plus(fam: IndexedFamily) -> IndexedFamily:
    return fam.map(plus_completion)


def family_minus(fam: IndexedFamily) -> IndexedFamily:
    return fam.map(minus_completion)


def equalizing_normals(fam: IndexedFamily, sentence: Formula) -> IndexedFamily:
    """Per-factor normal completions that satisfy ``sentence`` wherever the
    factor quasi-satisfies it (plus completions elsewhere)."""
    def pick(a):
        w = quasi_witness(a, sentence)
        return w if w is not None else plus_completion(a)
    return fam.map(pick)


# --- compactness -------------------------------------------------------------

@dataclass
class CompactnessRun:
    index: list[frozenset]
    family: IndexedFamily
    stars: dict
    ultrafilter: FilterSet
    witness: PartialStructure


def compactness_construction(gamma: Sequence[Formula],
                             models: Mapping[frozenset, PartialStructure]) -> CompactnessRun:
    """Ultraproduct of partial models of the finite subsets of ``gamma``.

    ``models`` maps each non-empty subset (as a frozenset of sentences) to
    a partial model of it.
    """
    gamma = list(dict.fromkeys(gamma))
    index = [s for s in subsets(gamma) if s]
    for i in index:
        if i not in models:
            raise ValueError(f"no model supplied for subset of size {len(i)}")
        if not quasi_models(models[i], i):
            raise ValueError("a supplied structure is not a partial model of its subset")
    family = IndexedFamily(tuple(index), {i: models[i] for i in index})
    stars = {g: frozenset(i for i in index if g in i) for g in gamma}
    if not has_fip(stars.values(), index):
        raise AssertionError("subset-membership sets lack the finite intersection property")
    u = extend_to_ultrafilter(stars.values(), index)
    if not is_ultrafilter(u) or not all(s in u for s in stars.values()):
        raise AssertionError("extension did not produce an ultrafilter containing every star")
    return CompactnessRun(index, family, stars, u, ultraproduct(family, u))


def compactness_witness(gamma: Sequence[Formula],
                        models: Mapping[frozenset, PartialStructure]) -> PartialStructure:
    return compactness_construction(gamma, models).witness
