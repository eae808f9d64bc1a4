"""Text formats for structures, family manifests and sentence lists.

Structure file::

    universe a b c
    relation R
    + : (a) (b)
    - : (c)
    0 :
    constant c = a
    constant d = ?
    function f 1
    + : (a,b)
    ...

Omitted ``+``/``-``/``0`` lines are empty.  ``relation R 2`` may state
the arity explicitly.  ``#`` starts a comment.

Family manifest::

    index x A_x.txt
    index y A_y.txt
    filter F = {x,y} {y}
    ultrafilter U principal x

Structure paths are relative to the manifest.  A sentence file holds one
sentence per line, optionally preceded by ``signature R:1 S:2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .products import FilterSet, IndexedFamily, principal_filter
from .structures import (PartialFunctionTable, PartialStructure, StructureError,
                         relation_from_triple)
from .syntax import FormulaError, Signature, infer_signature, parse_sentence
from .syntax import Formula

__all__ = [
    "FormatError", "parse_structure", "load_structure", "dump_structure",
    "Manifest", "parse_manifest", "load_manifest", "load_family",
    "parse_sentence_file", "load_sentences", "detect_kind",
]

ELEM_RE = re.compile(r"[^\s,()#]+\Z")
TUPLE_RE = re.compile(r"\(([^()]*)\)")


class FormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.message, self.line, self.path = message, line, path
        super().__init__(self.location() + message)

    def location(self) -> str:
        where = self.path or "<input>"
        return f"{where}:{self.line}: " if self.line is not None else f"{where}: "

    def at(self, path) -> "FormatError":
        return FormatError(self.message, self.line, str(path))


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def _parse_tuples(body: str, n: int) -> list[tuple]:
    body = body.strip()
    tuples = []
    pos = 0
    for m in TUPLE_RE.finditer(body):
        if body[pos:m.start()].strip():
            raise FormatError(f"junk between tuples: {body[pos:m.start()].strip()!r}", n)
        parts = [p.strip() for p in m.group(1).split(",")]
        if not all(ELEM_RE.match(p) for p in parts):
            raise FormatError(f"bad tuple ({m.group(1)})", n)
        tuples.append(tuple(parts))
        pos = m.end()
    if body[pos:].strip():
        raise FormatError(f"junk after tuples: {body[pos:].strip()!r}", n)
    return tuples


@dataclass
class _Block:
    kind: str
    name: str
    arity: Optional[int]
    line: int
    parts: dict = field(default_factory=lambda: {"+": [], "-": [], "0": []})


def parse_structure(text: str) -> PartialStructure:
    universe = None
    blocks: list[_Block] = []
    constants: dict[str, Optional[str]] = {}
    current = None
    for n, line in _lines(text):
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "universe":
            if universe is not None:
                raise FormatError("second universe line", n)
            universe = rest.split()
            if not universe:
                raise FormatError("empty universe", n)
            bad = [e for e in universe if not ELEM_RE.match(e)]
            if bad:
                raise FormatError(f"bad element name {bad[0]!r}", n)
            if len(set(universe)) != len(universe):
                raise FormatError("universe lists an element twice", n)
            current = None
        elif head in ("relation", "function"):
            words = rest.split()
            if not words or len(words) > 2:
                raise FormatError(f"expected '{head} NAME [ARITY]'", n)
            arity = None
            if len(words) == 2:
                if not words[1].isdigit():
                    raise FormatError(f"bad arity {words[1]!r}", n)
                arity = int(words[1])
            elif head == "function":
                raise FormatError("function needs an arity", n)
            current = _Block(head, words[0], arity, n)
            blocks.append(current)
        elif head == "constant":
            m = re.fullmatch(r"(\S+)\s*=\s*(\S+)", rest)
            if not m:
                raise FormatError("expected 'constant NAME = ELEMENT' or '= ?'", n)
            if m.group(1) in constants:
                raise FormatError(f"constant {m.group(1)} given twice", n)
            constants[m.group(1)] = None if m.group(2) == "?" else m.group(2)
            current = None
        elif line[0] in "+-0" and line[1:].lstrip().startswith(":"):
            if current is None:
                raise FormatError("triple line outside a relation or function block", n)
            label = line[0]
            current.parts[label].extend(_parse_tuples(line[1:].lstrip()[1:], n))
        else:
            raise FormatError(f"unrecognized line {line!r}", n)
    if universe is None:
        raise FormatError("missing universe line")

    relations, functions, rel_sig, fun_sig = {}, {}, {}, {}
    for b in blocks:
        if b.name in rel_sig or b.name in fun_sig or b.name in constants:
            raise FormatError(f"symbol {b.name} defined twice", b.line)
        lengths = {len(t) for part in b.parts.values() for t in part}
        width = None if b.arity is None else b.arity + (b.kind == "function")
        if width is not None:
            lengths.add(width)
        if len(lengths) != 1:
            raise FormatError(f"cannot determine a single arity for {b.name}", b.line)
        width = lengths.pop()
        try:
            rel = relation_from_triple(b.parts["+"], b.parts["-"], b.parts["0"], universe, width)
        except StructureError as e:
            raise FormatError(f"{b.name}: {e}", b.line) from None
        if b.kind == "relation":
            relations[b.name], rel_sig[b.name] = rel, width
        else:
            functions[b.name] = PartialFunctionTable(width - 1, rel)
            fun_sig[b.name] = width - 1
    try:
        sig = Signature(rel_sig, {**fun_sig, **{c: 0 for c in constants}})
        return PartialStructure(sig, tuple(universe), relations, functions, constants)
    except (StructureError, ValueError) as e:
        raise FormatError(str(e)) from None


def load_structure(path) -> PartialStructure:
    try:
        return parse_structure(Path(path).read_text())
    except FormatError as e:
        raise e.at(path) from None


def _fmt_tuples(tuples, universe) -> str:
    order = {e: k for k, e in enumerate(universe)}
    ts = sorted(tuples, key=lambda t: [order[x] for x in t])
    return " ".join("(" + ",".join(map(str, t)) + ")" for t in ts)


def _dump_triple(lines, rel, universe):
    for label, part in (("+", rel.pos), ("-", rel.neg), ("0", rel.unk)):
        body = _fmt_tuples(part, universe)
        lines.append(f"{label} : {body}" if body else f"{label} :")


def dump_structure(s: PartialStructure) -> str:
    lines = ["universe " + " ".join(map(str, s.universe))]
    for name, rel in s.relations.items():
        lines.append(f"relation {name}")
        _dump_triple(lines, rel, s.universe)
    for name, val in s.constants.items():
        lines.append(f"constant {name} = {'?' if val is None else val}")
    for name, fn in s.functions.items():
        lines.append(f"function {name} {fn.arity}")
        _dump_triple(lines, fn.relation, s.universe)
    return "\n".join(lines) + "\n"


# --- family manifests --------------------------------------------------------

@dataclass
class Manifest:
    path: Optional[Path]
    factors: dict[str, str]
    filters: dict[str, FilterSet]
    ultrafilters: dict[str, FilterSet]


def _parse_subsets(body: str, n: int) -> list[frozenset]:
    groups = re.findall(r"\{([^{}]*)\}", body)
    if re.sub(r"\{[^{}]*\}", "", body).strip():
        raise FormatError("filter members must be braced groups like {x,y}", n)
    return [frozenset(p.strip() for p in g.split(",") if p.strip()) for g in groups]


def parse_manifest(text: str, path=None) -> Manifest:
    factors: dict[str, str] = {}
    filter_lines: list[tuple[int, str, str]] = []
    ultra_lines: list[tuple[int, str, str]] = []
    for n, line in _lines(text):
        words = line.split()
        if words[0] == "index":
            if len(words) != 3:
                raise FormatError("expected 'index NAME PATH'", n)
            if words[1] in factors:
                raise FormatError(f"index {words[1]} listed twice", n)
            factors[words[1]] = words[2]
        elif words[0] == "filter":
            m = re.fullmatch(r"filter\s+(\S+)\s*=\s*(.*)", line)
            if not m:
                raise FormatError("expected 'filter NAME = {..} {..}'", n)
            filter_lines.append((n, m.group(1), m.group(2)))
        elif words[0] == "ultrafilter":
            if len(words) == 3 and words[1] == "principal":
                ultra_lines.append((n, "U", words[2]))
            elif len(words) == 4 and words[2] == "principal":
                ultra_lines.append((n, words[1], words[3]))
            else:
                raise FormatError("expected 'ultrafilter [NAME] principal INDEX'", n)
        else:
            raise FormatError(f"unrecognized line {line!r}", n)
    if not factors:
        raise FormatError("manifest lists no index")
    ground = tuple(factors)
    filters, ultras = {}, {}
    for n, name, body in filter_lines:
        members = _parse_subsets(body, n)
        for m in members:
            if not m <= set(ground):
                raise FormatError(f"filter {name} mentions unknown index "
                                  f"{sorted(m - set(ground))[0]}", n)
        filters[name] = FilterSet(ground, members)
    for n, name, i0 in ultra_lines:
        if i0 not in factors:
            raise FormatError(f"ultrafilter {name} is principal at unknown index {i0}", n)
        ultras[name] = principal_filter(ground, {i0})
    return Manifest(Path(path) if path else None, factors, filters, ultras)


def load_manifest(path) -> Manifest:
    try:
        return parse_manifest(Path(path).read_text(), path)
    except FormatError as e:
        raise e.at(path) from None


def load_family(manifest: Manifest) -> IndexedFamily:
    base = manifest.path.parent if manifest.path else Path(".")
    factors = {}
    for i, rel in manifest.factors.items():
        p = base / rel
        if not p.exists():
            raise FormatError(f"index {i}: structure file {rel} not found",
                              path=str(manifest.path))
        factors[i] = load_structure(p)
    try:
        return IndexedFamily(tuple(factors), factors)
    except StructureError as e:
        raise FormatError(str(e), path=str(manifest.path)) from None


# --- sentences ---------------------------------------------------------------

def parse_sentence_file(text: str, sig: Optional[Signature] = None
                        ) -> tuple[list[Formula], Signature]:
    entries = list(_lines(text))
    if entries and entries[0][1].split()[0] == "signature":
        decl = {}
        for item in entries[0][1].split()[1:]:
            m = re.fullmatch(r"([A-Za-z_]\w*):(\d+)", item)
            if not m:
                raise FormatError(f"bad signature entry {item!r}", entries[0][0])
            decl[m.group(1)] = int(m.group(2))
        sig = Signature(decl)
        entries = entries[1:]
    if sig is None:
        try:
            sig = infer_signature(line for _, line in entries)
        except FormulaError as e:
            raise FormatError(str(e)) from None
    out = []
    for n, line in entries:
        try:
            out.append(parse_sentence(line, sig))
        except FormulaError as e:
            raise FormatError(str(e), n) from None
    return out, sig


def load_sentences(path, sig: Optional[Signature] = None) -> tuple[list[Formula], Signature]:
    try:
        return parse_sentence_file(Path(path).read_text(), sig)
    except FormatError as e:
        raise e.at(path) from None


def detect_kind(text: str) -> str:
    """'structure', 'family' or 'sentences', judged by the first content line."""
    for _, line in _lines(text):
        head = line.split()[0]
        if head == "universe":
            return "structure"
        if head in ("index", "filter", "ultrafilter"):
            return "family"
        return "sentences"
    return "sentences"
