"""Tarskian truth, strong-Kleene evaluation and quasi-truth.

``quasi_true`` decides whether some normal completion of a partial
structure satisfies a sentence.  It runs a strong-Kleene pass first and
then assigns unknown atoms depth-first, re-running the Kleene pass after
every choice so that whole subtrees are cut once the verdict is settled.
``quasi_true_by_enumeration`` is the plain definition and serves as the
test oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from .structures import (NEG, POS, UNK, PartialRelation, PartialStructure, Verdict,
                         all_tuples, enumerate_normals, resolve, unknown_atoms)
from .syntax import (And, Eq, Exists, Forall, Formula, FormulaError, Implies, Not, Or,
                     Pred, Signature, free_variables, predicates, render)

__all__ = [
    "Verdict3", "NotTotalError", "SearchLimitExceeded", "CounterexampleReport",
    "eval_total", "eval_kleene", "quasi_true", "quasi_witness",
    "quasi_true_by_enumeration", "quasi_models", "enumerate_partial_structures",
    "enumerate_total_structures", "quasi_consequence_bounded", "quasi_valid_bounded",
    "quasi_equivalent_bounded", "classically_valid_bounded", "signature_of",
]

Assignment = Mapping[str, object]


class Verdict3(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


class NotTotalError(ValueError):
    pass


class SearchLimitExceeded(RuntimeError):
    pass


def _check_bound(f: Formula, asg: Assignment):
    missing = free_variables(f) - set(asg)
    if missing:
        raise FormulaError(f"unbound variable(s): {sorted(missing)}")


def _check_sentence(f: Formula):
    free = free_variables(f)
    if free:
        raise FormulaError(f"{render(f)} is not a sentence (free: {sorted(free)})")


# --- two-valued --------------------------------------------------------------

def _holds(f: Formula, b: PartialStructure, asg: dict) -> bool:
    if isinstance(f, Pred):
        return b.relations[f.symbol][tuple(asg[x] for x in f.args)] is POS
    if isinstance(f, Eq):
        return asg[f.left] == asg[f.right]
    if isinstance(f, Not):
        return not _holds(f.body, b, asg)
    if isinstance(f, And):
        return _holds(f.left, b, asg) and _holds(f.right, b, asg)
    if isinstance(f, Or):
        return _holds(f.left, b, asg) or _holds(f.right, b, asg)
    if isinstance(f, Implies):
        return not _holds(f.left, b, asg) or _holds(f.right, b, asg)
    quant = all if isinstance(f, Forall) else any
    return quant(_holds(f.body, b, {**asg, f.var: e}) for e in b.universe)


def eval_total(b: PartialStructure, f: Formula, asg: Optional[Assignment] = None) -> bool:
    """Classical satisfaction in a total structure."""
    asg = dict(asg or {})
    if not b.is_total:
        raise NotTotalError("eval_total needs a total structure")
    _check_bound(f, asg)
    for x, e in asg.items():
        if e not in b.universe:
            raise ValueError(f"{x} is assigned {e!r}, which is outside the universe")
    return _holds(f, b, asg)


# --- strong Kleene -----------------------------------------------------------

Lookup = Callable[[str, tuple], Verdict]


def _kleene(f: Formula, universe: Sequence, lookup: Lookup, asg: dict) -> Optional[bool]:
    # None stands for "unknown"
    if isinstance(f, Pred):
        v = lookup(f.symbol, tuple(asg[x] for x in f.args))
        return None if v is UNK else v is POS
    if isinstance(f, Eq):
        return asg[f.left] == asg[f.right]
    if isinstance(f, Not):
        v = _kleene(f.body, universe, lookup, asg)
        return None if v is None else not v
    if isinstance(f, (And, Or, Implies)):
        left = _kleene(f.left, universe, lookup, asg)
        if isinstance(f, Implies):
            left = None if left is None else not left
        absorbing = isinstance(f, (Or, Implies))
        if left is absorbing:
            return absorbing
        right = _kleene(f.right, universe, lookup, asg)
        if right is absorbing:
            return absorbing
        if left is None or right is None:
            return None
        return not absorbing
    absorbing = isinstance(f, Exists)
    unknown = False
    for e in universe:
        v = _kleene(f.body, universe, lookup, {**asg, f.var: e})
        if v is absorbing:
            return absorbing
        unknown = unknown or v is None
    return None if unknown else not absorbing


def _to_verdict3(v: Optional[bool]) -> Verdict3:
    return Verdict3.UNKNOWN if v is None else (Verdict3.TRUE if v else Verdict3.FALSE)


def eval_kleene(a: PartialStructure, f: Formula, asg: Optional[Assignment] = None) -> Verdict3:
    """Strong-Kleene value of ``f``; TRUE/FALSE are sound for every normal completion."""
    asg = dict(asg or {})
    _check_bound(f, asg)
    rels = a.relations
    return _to_verdict3(_kleene(f, a.universe, lambda s, t: rels[s][t], asg))


# --- quasi-truth -------------------------------------------------------------

def _search(a: PartialStructure, f: Formula, atoms: list, choice: dict) -> Optional[dict]:
    rels = a.relations

    def lookup(sym, t):
        return choice.get((sym, t)) or rels[sym][t]

    v = _kleene(f, a.universe, lookup, {})
    if v is not None:
        return dict(choice) if v else None
    # an unknown verdict means some atom of f is still unresolved
    atom = next(x for x in atoms if x not in choice)
    for verdict in (POS, NEG):
        choice[atom] = verdict
        found = _search(a, f, atoms, choice)
        if found is not None:
            return found
        del choice[atom]
    return None


def quasi_witness(a: PartialStructure, sentence: Formula,
                  max_unknowns: Optional[int] = None) -> Optional[PartialStructure]:
    """A normal completion of ``a`` satisfying ``sentence``, or ``None``."""
    _check_sentence(sentence)
    symbols = {p.symbol for p in predicates(sentence)}
    atoms = [x for x in unknown_atoms(a) if x[0] in symbols]
    if max_unknowns is not None and len(atoms) > max_unknowns:
        raise SearchLimitExceeded(
            f"{len(atoms)} relevant unknown atoms exceed the limit of {max_unknowns}")
    choice = _search(a, sentence, atoms, {})
    if choice is None:
        return None
    # atoms left open do not affect the verdict; close them negatively
    rest = {x: NEG for x in unknown_atoms(a) if x not in choice}
    return resolve(a, {**rest, **choice})


def quasi_true(a: PartialStructure, sentence: Formula,
               max_unknowns: Optional[int] = None) -> bool:
    return quasi_witness(a, sentence, max_unknowns) is not None


def quasi_true_by_enumeration(a: PartialStructure, sentence: Formula) -> bool:
    _check_sentence(sentence)
    return any(eval_total(b, sentence) for b in enumerate_normals(a))


def quasi_models(a: PartialStructure, gamma: Iterable[Formula]) -> bool:
    """Each sentence is checked on its own; different sentences may use
    different completions."""
    gamma = list(gamma)
    for g in gamma:
        _check_sentence(g)
    return all(quasi_true(a, g) for g in gamma)


# --- bounded search over all partial structures ------------------------------

def signature_of(formulas: Iterable[Formula]) -> Signature:
    arities: dict[str, int] = {}
    for f in formulas:
        for p in predicates(f):
            if arities.setdefault(p.symbol, len(p.args)) != len(p.args):
                raise FormulaError(f"{p.symbol} used with two arities")
    return Signature(arities)


def _structures(sig: Signature, size: int, values: Sequence[Verdict]) -> Iterator[PartialStructure]:
    if size < 1:
        raise ValueError("size must be at least 1")
    universe = tuple(f"e{k}" for k in range(1, size + 1))
    slots = [(name, list(all_tuples(universe, n))) for name, n in sig.relations.items()]
    atoms = [(name, t) for name, ts in slots for t in ts]
    for combo in itertools.product(values, repeat=len(atoms)):
        verdicts: dict[str, dict] = {name: {} for name, _ in slots}
        for (name, t), v in zip(atoms, combo):
            verdicts[name][t] = v
        yield PartialStructure(sig, universe, {name: PartialRelation(sig.relations[name], vs)
                                               for name, vs in verdicts.items()})


def enumerate_partial_structures(sig: Signature, size: int) -> Iterator[PartialStructure]:
    """Every partial structure over ``e1..e{size}``, once each."""
    return _structures(sig, size, (POS, NEG, UNK))


def enumerate_total_structures(sig: Signature, size: int) -> Iterator[PartialStructure]:
    return _structures(sig, size, (POS, NEG))


@dataclass(frozen=True)
class CounterexampleReport:
    """A partial model of ``gamma`` in which ``target`` is quasi-false."""

    structure: PartialStructure
    gamma: tuple
    target: Formula
    size: int

    def replay(self) -> bool:
        return quasi_models(self.structure, self.gamma) and not quasi_true(self.structure, self.target)

    def describe(self) -> str:
        lines = [f"counterexample of size {self.size}:"]
        lines += [f"  quasi-true:  {render(g)}" for g in self.gamma]
        lines.append(f"  quasi-false: {render(self.target)}")
        return "\n".join(lines)


def quasi_consequence_bounded(gamma: Iterable[Formula], alpha: Formula, max_size: int,
                              sig: Optional[Signature] = None) -> Optional[CounterexampleReport]:
    """Search sizes 1..max_size for a partial model of ``gamma`` where ``alpha``
    is quasi-false.

    ``None`` only means no counterexample exists up to ``max_size``.  The
    first counterexample in enumeration order is returned.
    """
    gamma = tuple(gamma)
    for g in gamma + (alpha,):
        _check_sentence(g)
    if sig is None:
        sig = signature_of(gamma + (alpha,))
    for size in range(1, max_size + 1):
        for a in enumerate_partial_structures(sig, size):
            if not quasi_true(a, alpha) and all(quasi_true(a, g) for g in gamma):
                return CounterexampleReport(a, gamma, alpha, size)
    return None


def quasi_valid_bounded(alpha: Formula, max_size: int,
                        sig: Optional[Signature] = None) -> Optional[CounterexampleReport]:
    return quasi_consequence_bounded((), alpha, max_size, sig)


def quasi_equivalent_bounded(a: Formula, b: Formula, max_size: int,
                             sig: Optional[Signature] = None) -> Optional[CounterexampleReport]:
    if sig is None:
        sig = signature_of((a, b))
    return (quasi_consequence_bounded((a,), b, max_size, sig)
            or quasi_consequence_bounded((b,), a, max_size, sig))


def classically_valid_bounded(alpha: Formula, max_size: int,
                              sig: Optional[Signature] = None) -> bool:
    """Truth in every total structure of size 1..max_size."""
    _check_sentence(alpha)
    if sig is None:
        sig = signature_of((alpha,))
    return all(eval_total(b, alpha)
               for size in range(1, max_size + 1)
               for b in enumerate_total_structures(sig, size))
