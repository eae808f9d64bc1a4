"""Partial relations, partial structures, expansion and normal completions.

A partial relation is stored as a total verdict map from tuples to
:class:`Verdict`; the positive/negative/unknown sets are derived from it,
so disjointness and coverage hold by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .syntax import Signature

__all__ = [
    "Verdict", "POS", "NEG", "UNK", "PartialRelation", "PartialFunctionTable",
    "PartialStructure", "StructureError", "OverlapError", "CoverageError",
    "SignatureMismatch", "FunctionViolation", "relation_from_triple",
    "validate_partial_function", "relationalize", "expands", "plus_completion",
    "minus_completion", "is_normal", "enumerate_normals", "structures_equal",
    "unknown_atoms", "unknown_count", "all_tuples", "total_relation", "resolve",
    "structure",
]

Element = Hashable


class Verdict(Enum):
    POS = "+"
    NEG = "-"
    UNK = "0"

    def __repr__(self):
        return f"Verdict.{self.name}"


POS, NEG, UNK = Verdict.POS, Verdict.NEG, Verdict.UNK


class StructureError(ValueError):
    pass


class OverlapError(StructureError):
    def __init__(self, tup, parts):
        super().__init__(f"tuple {tup} is in more than one part: {', '.join(parts)}")
        self.tuple = tup


class CoverageError(StructureError):
    def __init__(self, tup):
        super().__init__(f"tuple {tup} is in none of the three parts")
        self.tuple = tup


class SignatureMismatch(StructureError):
    pass


def all_tuples(universe: Sequence[Element], arity: int) -> Iterator[tuple]:
    """Tuples over ``universe`` in lexicographic order of the listing."""
    return itertools.product(universe, repeat=arity)


@dataclass(frozen=True, eq=False)
class PartialRelation:
    arity: int
    verdicts: Mapping[tuple, Verdict]

    def __post_init__(self):
        object.__setattr__(self, "verdicts", dict(self.verdicts))

    def _part(self, v: Verdict) -> frozenset:
        return frozenset(t for t, w in self.verdicts.items() if w is v)

    @property
    def pos(self) -> frozenset:
        return self._part(POS)

    @property
    def neg(self) -> frozenset:
        return self._part(NEG)

    @property
    def unk(self) -> frozenset:
        return self._part(UNK)

    def triple(self) -> tuple[frozenset, frozenset, frozenset]:
        return self.pos, self.neg, self.unk

    @property
    def is_total(self) -> bool:
        return UNK not in self.verdicts.values()

    def __getitem__(self, tup) -> Verdict:
        return self.verdicts[tup]

    def replace(self, changes: Mapping[tuple, Verdict]) -> "PartialRelation":
        return PartialRelation(self.arity, {**self.verdicts, **changes})

    def __eq__(self, other):
        if not isinstance(other, PartialRelation):
            return NotImplemented
        return self.arity == other.arity and self.verdicts == other.verdicts

    def __hash__(self):
        return hash((self.arity, frozenset(self.verdicts.items())))

    def __repr__(self):
        fmt = lambda s: "{" + ", ".join(map(str, sorted(s, key=str))) + "}"
        return f"PartialRelation(+={fmt(self.pos)}, -={fmt(self.neg)}, 0={fmt(self.unk)})"


def relation_from_triple(pos: Iterable, neg: Iterable, unk: Iterable,
                         universe: Sequence[Element], arity: int) -> PartialRelation:
    """Build a relation from its three parts, checking disjointness and coverage."""
    verdicts: dict[tuple, Verdict] = {}
    seen: dict[tuple, list[str]] = {}
    for label, part, v in (("+", pos, POS), ("-", neg, NEG), ("0", unk, UNK)):
        for t in part:
            t = tuple(t)
            seen.setdefault(t, []).append(label)
            verdicts[t] = v
    for t, labels in seen.items():
        if len(labels) > 1:
            raise OverlapError(t, labels)
    expected = list(all_tuples(universe, arity))
    expected_set = set(expected)
    for t in verdicts:
        if t not in expected_set:
            raise StructureError(f"tuple {t} is not an {arity}-tuple over the universe")
    for t in expected:
        if t not in verdicts:
            raise CoverageError(t)
    return PartialRelation(arity, {t: verdicts[t] for t in expected})


def total_relation(pos: Iterable, universe: Sequence[Element], arity: int) -> PartialRelation:
    pos = {tuple(t) for t in pos}
    return PartialRelation(arity, {t: POS if t in pos else NEG for t in all_tuples(universe, arity)})


@dataclass(frozen=True, eq=False)
class PartialFunctionTable:
    """An n-ary partial function, held as its (n+1)-ary partial relation."""

    arity: int
    relation: PartialRelation

    def __post_init__(self):
        if self.relation.arity != self.arity + 1:
            raise StructureError(
                f"a {self.arity}-ary function needs a {self.arity + 1}-ary relation")

    def __eq__(self, other):
        if not isinstance(other, PartialFunctionTable):
            return NotImplemented
        return self.arity == other.arity and self.relation == other.relation

    def __hash__(self):
        return hash((self.arity, self.relation))


@dataclass(frozen=True)
class FunctionViolation:
    condition: int
    witness: tuple

    def __str__(self):
        return f"condition {self.condition} violated at {self.witness}"


def validate_partial_function(f: PartialFunctionTable,
                              universe: Sequence[Element]) -> Optional[FunctionViolation]:
    """Check the three partial-function conditions; ``None`` means ok.

    Conditions are scanned in order, so the report names the first
    violated condition together with the tuple that witnesses it.
    """
    rel = f.relation
    args = list(all_tuples(universe, f.arity))
    for a in args:
        for b in universe:
            if rel[a + (b,)] is POS and any(rel[a + (c,)] is not NEG for c in universe if c != b):
                return FunctionViolation(1, a + (b,))
    for a in args:
        for b in universe:
            if rel[a + (b,)] is NEG and not any(rel[a + (c,)] in (POS, UNK) for c in universe):
                return FunctionViolation(2, a + (b,))
    for a in args:
        for b in universe:
            if rel[a + (b,)] is UNK and any(rel[a + (c,)] is POS for c in universe):
                return FunctionViolation(3, a + (b,))
    return None


@dataclass(frozen=True, eq=False)
class PartialStructure:
    """A finite partial structure.

    ``functions`` and ``constants`` are carried only so they can be
    relationalized; formulas are evaluated against ``relations`` alone.
    A constant maps to an element, or to ``None`` when undefined.
    """

    signature: Signature
    universe: tuple
    relations: Mapping[str, PartialRelation]
    functions: Mapping[str, PartialFunctionTable] = field(default_factory=dict)
    constants: Mapping[str, Optional[Element]] = field(default_factory=dict)

    def __post_init__(self):
        universe = tuple(self.universe)
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "relations", dict(sorted(self.relations.items())))
        object.__setattr__(self, "functions", dict(sorted(self.functions.items())))
        object.__setattr__(self, "constants", dict(sorted(self.constants.items())))
        if not universe:
            raise StructureError("universe must be non-empty")
        if len(set(universe)) != len(universe):
            raise StructureError("universe lists an element twice")
        sig = self.signature
        if set(self.relations) != set(sig.relations):
            raise SignatureMismatch(
                f"relations {sorted(self.relations)} do not match signature {sig}")
        n = len(universe)
        for name, rel in self.relations.items():
            if rel.arity != sig.relations[name]:
                raise SignatureMismatch(f"{name} has arity {rel.arity}, signature says "
                                        f"{sig.relations[name]}")
            if len(rel.verdicts) != n ** rel.arity:
                raise CoverageError(next(t for t in all_tuples(universe, rel.arity)
                                         if t not in rel.verdicts))
        declared = {k for k, a in sig.functions.items() if a > 0}
        if set(self.functions) != declared:
            raise SignatureMismatch(f"function tables {sorted(self.functions)} do not match "
                                    f"signature {sig}")
        for name, fn in self.functions.items():
            if fn.arity != sig.functions[name]:
                raise SignatureMismatch(f"function {name} has arity {fn.arity}")
        if set(self.constants) != set(sig.constants):
            raise SignatureMismatch(f"constants {sorted(self.constants)} do not match "
                                    f"signature {sig}")
        for name, val in self.constants.items():
            if val is not None and val not in universe:
                raise StructureError(f"constant {name} = {val} is outside the universe")

    @property
    def is_total(self) -> bool:
        return all(r.is_total for r in self.relations.values())

    def __getitem__(self, symbol: str) -> PartialRelation:
        return self.relations[symbol]

    def with_relations(self, relations: Mapping[str, PartialRelation]) -> "PartialStructure":
        return PartialStructure(self.signature, self.universe, {**self.relations, **relations},
                                self.functions, self.constants)

    def _key(self):
        return (self.signature, frozenset(self.universe),
                frozenset(self.relations.items()), frozenset(self.functions.items()),
                frozenset(self.constants.items()))

    def __eq__(self, other):
        if not isinstance(other, PartialStructure):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        rels = ", ".join(f"{k}={v!r}" for k, v in self.relations.items())
        return f"PartialStructure(universe={list(self.universe)}, {rels})"


def _same_signature(a: PartialStructure, b: PartialStructure):
    if a.signature != b.signature:
        raise SignatureMismatch(f"{a.signature} vs {b.signature}")


def structures_equal(a: PartialStructure, b: PartialStructure) -> bool:
    """Equality clauses (a)-(c): universe, constant definedness/value, interpretations."""
    _same_signature(a, b)
    if set(a.universe) != set(b.universe):
        return False
    for c in a.signature.constants:
        if (a.constants[c] is None) != (b.constants[c] is None):
            return False
        if a.constants[c] != b.constants[c]:
            return False
    return a.relations == b.relations and a.functions == b.functions


def expands(a: PartialStructure, b: PartialStructure) -> bool:
    """True iff ``b`` expands ``a``: same universe, positive and negative parts grow."""
    _same_signature(a, b)
    if set(a.universe) != set(b.universe):
        return False
    for name, ra in a.relations.items():
        rb = b.relations[name]
        for t, v in ra.verdicts.items():
            if v is not UNK and rb[t] is not v:
                return False
    return True


def is_normal(a: PartialStructure, b: PartialStructure) -> bool:
    return expands(a, b) and b.is_total


def _complete(a: PartialStructure, fill: Verdict) -> PartialStructure:
    rels = {name: PartialRelation(r.arity, {t: fill if v is UNK else v
                                            for t, v in r.verdicts.items()})
            for name, r in a.relations.items()}
    return a.with_relations(rels)


def plus_completion(a: PartialStructure) -> PartialStructure:
    """Resolve every unknown tuple positively."""
    return _complete(a, POS)


def minus_completion(a: PartialStructure) -> PartialStructure:
    """Resolve every unknown tuple negatively."""
    return _complete(a, NEG)


def unknown_atoms(a: PartialStructure) -> list[tuple[str, tuple]]:
    """All (symbol, tuple) pairs with unknown verdict, in canonical order."""
    return [(name, t) for name, r in a.relations.items()
            for t in all_tuples(a.universe, r.arity) if r[t] is UNK]


def unknown_count(a: PartialStructure) -> int:
    return sum(len(r.unk) for r in a.relations.values())


def resolve(a: PartialStructure, assignment: Mapping[tuple[str, tuple], Verdict]) -> PartialStructure:
    """Apply per-atom verdict overrides."""
    changes: dict[str, dict] = {}
    for (name, t), v in assignment.items():
        changes.setdefault(name, {})[t] = v
    return a.with_relations({name: a.relations[name].replace(ch) for name, ch in changes.items()})


def enumerate_normals(a: PartialStructure) -> Iterator[PartialStructure]:
    """Yield every A-normal structure exactly once.

    Subsets S of the unknown atoms are visited in binary-counter order
    (bit k of the counter is the k-th unknown atom); S goes to POS and the
    rest to NEG.  The counter starts at 0, so the first result is the
    minus completion and the last the plus completion.
    """
    atoms = unknown_atoms(a)
    for mask in range(1 << len(atoms)):
        yield resolve(a, {atom: POS if mask >> k & 1 else NEG for k, atom in enumerate(atoms)})


def relationalize(s: PartialStructure) -> tuple[PartialStructure, Signature]:
    """Turn function and constant interpretations into relations.

    An n-ary function becomes the (n+1)-ary relation it already is; a
    defined constant ``c = a`` becomes the unary relation true exactly at
    ``a``; an undefined constant becomes the fully unknown unary relation.
    """
    for name, fn in s.functions.items():
        bad = validate_partial_function(fn, s.universe)
        if bad is not None:
            raise StructureError(f"function {name}: {bad}")
    sig = s.signature
    if sig.is_relational:
        return s, sig
    relations = dict(s.relations)
    for name, fn in s.functions.items():
        relations[name] = fn.relation
    for name, val in s.constants.items():
        if val is None:
            relations[name] = PartialRelation(1, {(e,): UNK for e in s.universe})
        else:
            relations[name] = total_relation([(val,)], s.universe, 1)
    new_sig = Signature({**sig.relations, **{n: a + 1 for n, a in sig.functions.items()}})
    return PartialStructure(new_sig, s.universe, relations), new_sig


def structure(universe: Sequence[Element], relations: Mapping[str, PartialRelation],
              signature: Optional[Signature] = None) -> PartialStructure:
    """Convenience constructor for relational structures."""
    if signature is None:
        signature = Signature({n: r.arity for n, r in relations.items()})
    return PartialStructure(signature, tuple(universe), relations)
