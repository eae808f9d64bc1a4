"""Seeded random generators for signatures, structures, sentences and families."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .products import IndexedFamily, all_filters, principal_filter
from .structures import (NEG, POS, UNK, PartialRelation, PartialStructure, all_tuples,
                         resolve, unknown_atoms)
from .syntax import (And, Eq, Exists, Forall, Formula, Implies, Not, Or, Pred, Signature,
                     free_variables)

VARIABLES = ("x", "y")


def random_signature(rng: random.Random, max_symbols: int = 2, max_arity: int = 2) -> Signature:
    names = ["R", "S", "T"][:rng.randint(1, max_symbols)]
    return Signature({n: rng.randint(1, max_arity) for n in names})


def random_structure(rng: random.Random, sig: Signature, size: Optional[int] = None,
                     max_size: int = 3, max_unknowns: int = 8,
                     unknown_rate: Optional[float] = None, prefix: str = "a") -> PartialStructure:
    """Random partial structure with at most ``max_unknowns`` unknown tuples."""
    if size is None:
        size = rng.randint(1, max_size)
    universe = tuple(f"{prefix}{k}" for k in range(1, size + 1))
    if unknown_rate is None:
        unknown_rate = rng.choice((0.0, 0.3, 0.5, 0.8))
    rels = {}
    budget = max_unknowns
    atoms = [(name, t) for name, n in sig.relations.items() for t in all_tuples(universe, n)]
    unknown = set()
    for atom in rng.sample(atoms, len(atoms)):
        if budget > 0 and rng.random() < unknown_rate:
            unknown.add(atom)
            budget -= 1
    for name, n in sig.relations.items():
        rels[name] = PartialRelation(n, {
            t: UNK if (name, t) in unknown else rng.choice((POS, NEG))
            for t in all_tuples(universe, n)})
    return PartialStructure(sig, universe, rels)


def random_total_structure(rng: random.Random, sig: Signature, **kw) -> PartialStructure:
    return random_structure(rng, sig, unknown_rate=0.0, **kw)


def random_normal(rng: random.Random, a: PartialStructure) -> PartialStructure:
    return resolve(a, {atom: rng.choice((POS, NEG)) for atom in unknown_atoms(a)})


def random_expansion(rng: random.Random, a: PartialStructure) -> PartialStructure:
    """Some structure expanding ``a``, not necessarily total."""
    return resolve(a, {atom: rng.choice((POS, NEG, UNK)) for atom in unknown_atoms(a)})


def random_formula(rng: random.Random, sig: Signature, depth: int,
                   variables: Sequence[str] = VARIABLES) -> Formula:
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.15:
            return Eq(rng.choice(variables), rng.choice(variables))
        name = rng.choice(list(sig.relations))
        return Pred(name, tuple(rng.choice(variables) for _ in range(sig.relations[name])))
    kind = rng.choice(("not", "and", "or", "implies", "forall", "exists"))
    if kind == "not":
        return Not(random_formula(rng, sig, depth - 1, variables))
    if kind in ("forall", "exists"):
        q = Forall if kind == "forall" else Exists
        return q(rng.choice(variables), random_formula(rng, sig, depth - 1, variables))
    op = {"and": And, "or": Or, "implies": Implies}[kind]
    return op(random_formula(rng, sig, depth - 1, variables),
              random_formula(rng, sig, depth - 1, variables))


def close(rng: random.Random, f: Formula) -> Formula:
    for v in sorted(free_variables(f)):
        f = rng.choice((Forall, Exists))(v, f)
    return f


def formula_depth(f: Formula) -> int:
    if isinstance(f, (Pred, Eq)):
        return 0
    if isinstance(f, (Not, Forall, Exists)):
        return 1 + formula_depth(f.body)
    return 1 + max(formula_depth(f.left), formula_depth(f.right))


def random_sentence(rng: random.Random, sig: Signature, depth: int = 4,
                    variables: Sequence[str] = VARIABLES) -> Formula:
    """Closed formula of depth at most ``depth``, closing quantifiers included."""
    while True:
        f = close(rng, random_formula(rng, sig, depth, variables))
        if formula_depth(f) <= depth:
            return f


def random_family(rng: random.Random, sig: Signature, max_index: int = 3, max_size: int = 2,
                  max_unknowns: int = 3, total: bool = False) -> IndexedFamily:
    n = rng.randint(1, max_index)
    index = tuple("xyz"[:n]) if n <= 3 else tuple(f"i{k}" for k in range(n))
    factors = {}
    for k, i in enumerate(index):
        if total:
            factors[i] = random_total_structure(rng, sig, max_size=max_size, prefix=f"{i}_")
        else:
            factors[i] = random_structure(rng, sig, max_size=max_size,
                                          max_unknowns=max_unknowns, prefix=f"{i}_")
    return IndexedFamily(index, factors)


def random_normal_family(rng: random.Random, fam: IndexedFamily) -> IndexedFamily:
    return fam.map(lambda a: random_normal(rng, a))


def random_filter(rng: random.Random, ground: Sequence):
    return rng.choice(all_filters(ground))


def random_ultrafilter(rng: random.Random, ground: Sequence):
    return principal_filter(ground, {rng.choice(list(ground))})
