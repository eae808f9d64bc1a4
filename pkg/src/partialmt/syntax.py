"""Signatures and first-order formulas over a relational signature.

Concrete syntax (ASCII, whitespace-insensitive)::

    formula := "forall" var "(" ... ")" | "exists" var "(" ... ")"
             | "~" formula | "(" formula [bin formula] ")" | atom
    bin     := "&" | "|" | "->"
    atom    := Name "(" var {"," var} ")" | var "=" var

A quantifier body must open with a parenthesis.  ``forall x (A & B)`` is
read as ``forall x ((A & B))``; :func:`render` always emits the latter.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union

__all__ = [
    "Signature", "Formula", "Pred", "Eq", "Not", "And", "Or", "Implies",
    "Forall", "Exists", "FormulaError", "ParseError", "UnknownSymbolError",
    "ArityError", "parse_formula", "parse_sentence", "render",
    "free_variables", "predicates", "infer_signature", "is_sentence",
    "conj", "disj",
]

KEYWORDS = frozenset({"forall", "exists"})
VAR_RE = re.compile(r"[a-z][A-Za-z0-9]*\Z")
NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnknownSymbolError(ParseError):
    pass


class ArityError(ParseError):
    pass


@dataclass(frozen=True)
class Signature:
    """Relation symbols with arities, plus function symbols.

    Function symbols (arity 0 for constants) are only consumed by
    :func:`partialmt.structures.relationalize`; formulas never mention them.
    """

    relations: Mapping[str, int] = field(default_factory=dict)
    functions: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        rels = dict(sorted(self.relations.items()))
        funs = dict(sorted(self.functions.items()))
        for name, arity in rels.items():
            if not NAME_RE.match(name) or name in KEYWORDS:
                raise ValueError(f"bad relation symbol {name!r}")
            if not isinstance(arity, int) or arity < 1:
                raise ValueError(f"relation {name} needs arity >= 1, got {arity!r}")
        for name, arity in funs.items():
            if not NAME_RE.match(name) or name in KEYWORDS:
                raise ValueError(f"bad function symbol {name!r}")
            if not isinstance(arity, int) or arity < 0:
                raise ValueError(f"function {name} needs arity >= 0, got {arity!r}")
        shared = rels.keys() & funs.keys()
        if shared:
            raise ValueError(f"symbols used as both relation and function: {sorted(shared)}")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "functions", funs)

    def __hash__(self):
        return hash((tuple(self.relations.items()), tuple(self.functions.items())))

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(n for n, a in self.functions.items() if a == 0)

    @property
    def is_relational(self) -> bool:
        return not self.functions

    def __str__(self):
        parts = [f"{n}:{a}" for n, a in self.relations.items()]
        parts += [f"{n}/{a}" for n, a in self.functions.items()]
        return "{" + ", ".join(parts) + "}"


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Pred:
    symbol: str
    args: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Pred, Eq, Not, And, Or, Implies, Forall, Exists]
BINARY = {"&": And, "|": Or, "->": Implies}
BINARY_SYMBOL = {And: "&", Or: "|", Implies: "->"}


def conj(fs: Iterable[Formula]) -> Formula:
    """Right-nested conjunction of a non-empty sequence."""
    fs = list(fs)
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(fs: Iterable[Formula]) -> Formula:
    fs = list(fs)
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


# --- traversal ---------------------------------------------------------------

def free_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, Pred):
        return frozenset(f.args)
    if isinstance(f, Eq):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, (And, Or, Implies)):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, (Forall, Exists)):
        return free_variables(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def is_sentence(f: Formula) -> bool:
    return not free_variables(f)


def predicates(f: Formula) -> Iterator[Pred]:
    if isinstance(f, Pred):
        yield f
    elif isinstance(f, Not) or isinstance(f, (Forall, Exists)):
        yield from predicates(f.body)
    elif isinstance(f, (And, Or, Implies)):
        yield from predicates(f.left)
        yield from predicates(f.right)


def render(f: Formula) -> str:
    if isinstance(f, Pred):
        return f"{f.symbol}({','.join(f.args)})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        return "~" + render(f.body)
    if isinstance(f, (And, Or, Implies)):
        return f"({render(f.left)} {BINARY_SYMBOL[type(f)]} {render(f.right)})"
    if isinstance(f, Forall):
        return f"forall {f.var} ({render(f.body)})"
    if isinstance(f, Exists):
        return f"exists {f.var} ({render(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


# --- parsing -----------------------------------------------------------------

TOKEN_RE = re.compile(r"\s*(?:(->)|([()~&|=,])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = TOKEN_RE.match(text, pos)
        if m is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        tok = m.group(1) or m.group(2) or m.group(3)
        tokens.append((tok, m.start(m.lastindex)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Optional[Signature], arities: Optional[dict]):
        self.tokens = _tokenize(text)
        self.end = len(text)
        self.i = 0
        self.sig = sig
        # arity table collected when no signature is supplied
        self.arities = arities

    def peek(self, k: int = 0) -> Optional[str]:
        j = self.i + k
        return self.tokens[j][0] if j < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else self.end

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if tok is None:
            want = f"expected {expected!r}" if expected else "unexpected end of input"
            raise ParseError(want, self.end)
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def var(self) -> str:
        p = self.pos()
        tok = self.take()
        if tok in KEYWORDS or not VAR_RE.match(tok):
            raise ParseError(f"expected a variable, found {tok!r}", p)
        return tok

    def formula(self) -> Formula:
        tok = self.peek()
        if tok in KEYWORDS:
            self.take()
            v = self.var()
            if self.peek() != "(":
                raise ParseError(f"quantifier body must be parenthesized, found {self.peek()!r}",
                                 self.pos())
            body = self.formula()
            return Forall(v, body) if tok == "forall" else Exists(v, body)
        if tok == "~":
            self.take()
            return Not(self.formula())
        if tok == "(":
            self.take()
            left = self.formula()
            op = self.peek()
            if op in BINARY:
                self.take()
                right = self.formula()
                self.take(")")
                return BINARY[op](left, right)
            self.take(")")
            return left
        if tok is None:
            raise ParseError("unexpected end of input", self.end)
        if self.peek(1) == "(":
            return self.atom()
        if self.peek(1) == "=":
            left = self.var()
            self.take("=")
            return Eq(left, self.var())
        raise ParseError(f"unexpected token {tok!r}", self.pos())

    def atom(self) -> Pred:
        p = self.pos()
        name = self.take()
        if not NAME_RE.match(name):
            raise ParseError(f"bad relation symbol {name!r}", p)
        self.take("(")
        args = [self.var()]
        while self.peek() == ",":
            self.take()
            args.append(self.var())
        self.take(")")
        if self.sig is not None:
            if name not in self.sig.relations:
                raise UnknownSymbolError(f"unknown relation symbol {name!r}", p)
            want = self.sig.relations[name]
        else:
            want = self.arities.setdefault(name, len(args))
        if want != len(args):
            raise ArityError(f"{name} has arity {want}, applied to {len(args)} argument(s)", p)
        return Pred(name, tuple(args))

    def parse(self) -> Formula:
        f = self.formula()
        if self.i < len(self.tokens):
            raise ParseError(f"trailing input {self.peek()!r}", self.pos())
        return f


def parse_formula(text: str, sig: Optional[Signature] = None) -> Formula:
    """Parse ``text`` against ``sig``.

    With ``sig=None`` the relation symbols are accepted as long as each is
    used with one consistent arity.
    """
    return _Parser(text, sig, {} if sig is None else None).parse()


def parse_sentence(text: str, sig: Optional[Signature] = None) -> Formula:
    f = parse_formula(text, sig)
    free = free_variables(f)
    if free:
        raise FormulaError(f"not a sentence, free variables: {sorted(free)}")
    return f


def infer_signature(texts: Iterable[str]) -> Signature:
    """Smallest relational signature under which every text parses."""
    arities: dict[str, int] = {}
    for t in texts:
        _Parser(t, None, arities).parse()
    return Signature(arities)
