"""
Verification documents.

A document is a single JSON object declaring a quantale, types, matrices,
predicates, programs and assertions. Loading resolves every cross reference
and type-checks every literal; any problem raises ``DocumentError`` naming the
offending key.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .config import DocumentConfig
from .errors import DocumentError, VerifierError
from .gcl import MAGIC, Env, Program, names_used, program_from_json
from .quantale import Quantale, quantale_from_selector
from .relmat import FinType, Mat
from .subtype import Comonoid, comonoid_from_members
from .sums import SumType, make_sum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Assertion:
    name: str
    pre: str
    post: str
    prog: Optional[str] = None
    term: Optional[str] = None


@dataclass
class Document:
    quantale: Quantale
    types: Dict[str, FinType] = field(default_factory=dict)
    sums: Dict[str, SumType] = field(default_factory=dict)
    state: Optional[FinType] = None
    matrices: Dict[str, Mat] = field(default_factory=dict)
    predicates: Dict[str, Comonoid] = field(default_factory=dict)
    programs: Dict[str, Program] = field(default_factory=dict)
    assertions: List[Assertion] = field(default_factory=list)

    @property
    def env(self) -> Env:
        if self.state is None:
            raise DocumentError("state", "no state type declared")
        atoms = {n: m for n, m in self.matrices.items() if m.src == self.state and m.dst == self.state}
        preds = {n: u for n, u in self.predicates.items() if u.typ == self.state}
        return Env(self.state, self.quantale, atoms, preds)


def _section(raw: Dict[str, Any], name: str, kind: type) -> Any:
    value = raw.get(name, kind())
    if not isinstance(value, kind):
        raise DocumentError(name, f"expected {'an object' if kind is dict else 'a list'}")
    return value


def _require_fields(item: Any, fields: List[str], key: str) -> None:
    if not isinstance(item, dict):
        raise DocumentError(key, "expected an object")
    missing = [f for f in fields if f not in item]
    if missing:
        raise DocumentError(key, f"missing required fields: {missing}")


def _lookup_type(doc: Document, name: Any, key: str) -> FinType:
    if not isinstance(name, str) or name not in doc.types:
        raise DocumentError(key, f"unknown type {name!r}")
    return doc.types[name]


def _load_types(doc: Document, raw: Dict[str, Any]) -> None:
    for name, entry in _section(raw, "types", dict).items():
        key = f"types.{name}"
        try:
            if isinstance(entry, list):
                if not all(isinstance(label, str) for label in entry):
                    raise DocumentError(key, "labels must be strings")
                doc.types[name] = FinType(name, tuple(entry))
            elif isinstance(entry, dict) and list(entry) == ["sum"] and isinstance(entry["sum"], list):
                components = [_lookup_type(doc, c, f"{key}.sum") for c in entry["sum"]]
                total = make_sum(components, doc.quantale, name=name)
                doc.sums[name] = total
                doc.types[name] = total.total
            else:
                raise DocumentError(key, "a type is a label list or {\"sum\": [...]}")
        except DocumentError:
            raise
        except VerifierError as e:
            raise DocumentError(key, str(e)) from e
        if not doc.types[name].labels:
            logger.warning(f"type {name} is empty")


def _load_matrices(doc: Document, raw: Dict[str, Any]) -> None:
    q = doc.quantale
    for name, entry in _section(raw, "matrices", dict).items():
        key = f"matrices.{name}"
        _require_fields(entry, DocumentConfig.MATRIX_FIELDS, key)
        src = _lookup_type(doc, entry["src"], f"{key}.src")
        dst = _lookup_type(doc, entry["dst"], f"{key}.dst")
        rows = entry["entries"]
        if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
            raise DocumentError(f"{key}.entries", "entries are a list of rows")
        try:
            entries = [[q.parse(a) for a in row] for row in rows]
            doc.matrices[name] = Mat(src, dst, q, entries)
        except VerifierError as e:
            raise DocumentError(f"{key}.entries", str(e)) from e


def _load_predicates(doc: Document, raw: Dict[str, Any]) -> None:
    q = doc.quantale
    for name, entry in _section(raw, "predicates", dict).items():
        key = f"predicates.{name}"
        _require_fields(entry, DocumentConfig.PREDICATE_FIELDS, key)
        t = _lookup_type(doc, entry["type"], f"{key}.type")
        try:
            if "members" in entry and isinstance(entry["members"], list):
                doc.predicates[name] = comonoid_from_members(t, q, entry["members"])
            elif "diag" in entry and isinstance(entry["diag"], list):
                doc.predicates[name] = Comonoid(t, q, tuple(q.parse(a) for a in entry["diag"]))
            else:
                raise DocumentError(key, "a predicate needs a \"members\" or \"diag\" list")
        except DocumentError:
            raise
        except VerifierError as e:
            raise DocumentError(key, str(e)) from e


def _load_programs(doc: Document, raw: Dict[str, Any]) -> None:
    programs = _section(raw, "programs", dict)
    if programs and doc.state is None:
        raise DocumentError("state", "programs need a declared state type")
    env = doc.env if programs else None
    for name, entry in programs.items():
        key = f"programs.{name}"
        program = program_from_json(entry, key)
        atoms, preds = names_used(program)
        for atom in sorted(atoms):
            if atom not in env.atoms and atom != MAGIC:
                raise DocumentError(key, f"undeclared atom {atom!r} (atoms are endoterms on {doc.state.name})")
        for pred in sorted(preds):
            if pred not in env.preds:
                raise DocumentError(key, f"undeclared predicate {pred!r} on {doc.state.name}")
        doc.programs[name] = program


def _load_assertions(doc: Document, raw: Dict[str, Any]) -> None:
    for i, entry in enumerate(_section(raw, "assertions", list)):
        key = f"assertions[{i}]"
        _require_fields(entry, DocumentConfig.ASSERTION_FIELDS, key)
        if ("prog" in entry) == ("term" in entry):
            raise DocumentError(key, "an assertion names exactly one of \"prog\" or \"term\"")
        for ref in ("name", "pre", "post", "prog", "term"):
            if ref in entry and not isinstance(entry[ref], str):
                raise DocumentError(f"{key}.{ref}", "expected a name")
        for side in ("pre", "post"):
            if entry[side] not in doc.predicates:
                raise DocumentError(f"{key}.{side}", f"unknown predicate {entry[side]!r}")
        pre, post = doc.predicates[entry["pre"]], doc.predicates[entry["post"]]
        if "prog" in entry:
            if entry["prog"] not in doc.programs:
                raise DocumentError(f"{key}.prog", f"unknown program {entry['prog']!r}")
            src = dst = doc.state
            label = entry["prog"]
        else:
            if entry["term"] not in doc.matrices:
                raise DocumentError(f"{key}.term", f"unknown matrix {entry['term']!r}")
            m = doc.matrices[entry["term"]]
            src, dst = m.src, m.dst
            label = entry["term"]
        if pre.typ != src:
            raise DocumentError(f"{key}.pre", f"predicate {entry['pre']} is not on {src.name}")
        if post.typ != dst:
            raise DocumentError(f"{key}.post", f"predicate {entry['post']} is not on {dst.name}")
        name = entry.get("name", f"{{{entry['pre']}}} {label} {{{entry['post']}}}")
        doc.assertions.append(Assertion(name, entry["pre"], entry["post"], entry.get("prog"), entry.get("term")))


def parse_document(raw: Any, quantale_override: Optional[str] = None) -> Document:
    """Build a ``Document`` from already-decoded JSON."""
    if not isinstance(raw, dict):
        raise DocumentError("<document>", "a document is a JSON object")
    unknown = [k for k in raw if k not in DocumentConfig.KNOWN_SECTIONS]
    if unknown:
        raise DocumentError(unknown[0], "unknown document section")
    selector = quantale_override if quantale_override is not None else raw.get("quantale")
    if selector is None:
        raise DocumentError("quantale", "missing quantale selector")
    try:
        q = quantale_from_selector(selector)
    except VerifierError as e:
        raise DocumentError("quantale", str(e)) from e

    doc = Document(quantale=q)
    _load_types(doc, raw)
    if "state" in raw:
        doc.state = _lookup_type(doc, raw["state"], "state")
    _load_matrices(doc, raw)
    _load_predicates(doc, raw)
    _load_programs(doc, raw)
    _load_assertions(doc, raw)
    logger.info(
        f"Loaded document: {q.kind} quantale, {len(doc.types)} types, {len(doc.matrices)} matrices, "
        f"{len(doc.predicates)} predicates, {len(doc.programs)} programs, {len(doc.assertions)} assertions"
    )
    return doc


def load_document(path: str, quantale_override: Optional[str] = None) -> Document:
    """Read and parse a document file."""
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as e:
        logger.error(f"Cannot read document {path}: {e}")
        raise DocumentError("<document>", f"cannot read {path}: {e.strerror}") from e
    except UnicodeDecodeError as e:
        logger.error(f"Document {path} is not UTF-8: {e}")
        raise DocumentError("<document>", f"not UTF-8 text: {e.reason} at byte {e.start}") from e
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in document {path}: {e}")
        raise DocumentError("<document>", f"invalid JSON: {e}") from e
    return parse_document(raw, quantale_override)
