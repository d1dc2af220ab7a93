"""
Guarded-command programs and their matrix semantics.

    SKIP                    identity
    ABORT                   top matrix (most nondeterministic)
    P ; Q                   tensor product
    P [] Q                  join
    if b then P else Q      (b ⊗ P) ⊕ (¬b ⊗ Q)
    while b do P            cl(b ⊗ P) ⊗ ¬b

The bottom matrix is not a program; it is available as the atom ``magic``.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Set, Tuple, Union

from .errors import CompositionTypeError, DocumentError, ResolutionError
from .flow import first_violation, sp, wlp
from .quantale import Quantale
from .relmat import FinType, Mat, compose, identity, mjoin, mjoin_all, mtop, mzero
from .subtype import Comonoid, closure, negation

logger = logging.getLogger(__name__)

MAGIC = "magic"


class Program:
    """Base class of program syntax nodes."""


@dataclass(frozen=True)
class Skip(Program):
    pass


@dataclass(frozen=True)
class Abort(Program):
    pass


@dataclass(frozen=True)
class Atom(Program):
    name: str


@dataclass(frozen=True)
class Seq(Program):
    parts: Tuple[Program, ...]


@dataclass(frozen=True)
class Choice(Program):
    branches: Tuple[Program, ...]


@dataclass(frozen=True)
class Cond(Program):
    pred: str
    then: Program
    orelse: Program


@dataclass(frozen=True)
class While(Program):
    pred: str
    body: Program


@dataclass(frozen=True)
class Env:
    state_type: FinType
    quantale: Quantale
    atoms: Mapping[str, Mat] = field(default_factory=dict)
    preds: Mapping[str, Comonoid] = field(default_factory=dict)

    def __post_init__(self):
        for name, m in self.atoms.items():
            if m.src != self.state_type or m.dst != self.state_type or m.q != self.quantale:
                raise CompositionTypeError(f"atom {name} is not an endoterm on {self.state_type.name}")
        for name, u in self.preds.items():
            if u.typ != self.state_type or u.q != self.quantale:
                raise CompositionTypeError(f"predicate {name} is not on {self.state_type.name}")


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking {pre} program {post}."""

    holds: bool
    counterexample: Optional[str] = None
    violation: Optional[Tuple[str, str]] = None


PredRef = Union[str, Comonoid]


def program_from_json(raw: Any, key: str = "program") -> Program:
    """Read the JSON program shape, e.g. {"seq": [{"atom": "a"}, {"skip": {}}]}."""
    if not isinstance(raw, dict) or len(raw) != 1:
        raise DocumentError(key, "a program is an object with exactly one node key")
    (kind, body), = raw.items()
    if kind == "skip":
        return Skip()
    if kind == "abort":
        return Abort()
    if kind == "atom":
        if not isinstance(body, str):
            raise DocumentError(f"{key}.atom", "atom takes a matrix name")
        return Atom(body)
    if kind in ("seq", "choice"):
        if not isinstance(body, list):
            raise DocumentError(f"{key}.{kind}", "expected a list of programs")
        parts = tuple(program_from_json(p, f"{key}.{kind}[{i}]") for i, p in enumerate(body))
        return Seq(parts) if kind == "seq" else Choice(parts)
    if kind == "cond":
        if not isinstance(body, dict) or not {"if", "then", "else"} <= set(body):
            raise DocumentError(f"{key}.cond", "cond needs \"if\", \"then\" and \"else\"")
        if not isinstance(body["if"], str):
            raise DocumentError(f"{key}.cond.if", "a guard is a predicate name")
        return Cond(body["if"], program_from_json(body["then"], f"{key}.cond.then"),
                    program_from_json(body["else"], f"{key}.cond.else"))
    if kind == "while":
        if not isinstance(body, dict) or not {"cond", "body"} <= set(body):
            raise DocumentError(f"{key}.while", "while needs \"cond\" and \"body\"")
        if not isinstance(body["cond"], str):
            raise DocumentError(f"{key}.while.cond", "a guard is a predicate name")
        return While(body["cond"], program_from_json(body["body"], f"{key}.while.body"))
    raise DocumentError(key, f"unknown program node {kind!r}")


def names_used(p: Program) -> Tuple[Set[str], Set[str]]:
    """(atom names, predicate names) mentioned by ``p``."""
    atoms, preds = set(), set()
    stack = [p]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            atoms.add(node.name)
        elif isinstance(node, Seq):
            stack.extend(node.parts)
        elif isinstance(node, Choice):
            stack.extend(node.branches)
        elif isinstance(node, Cond):
            preds.add(node.pred)
            stack.extend([node.then, node.orelse])
        elif isinstance(node, While):
            preds.add(node.pred)
            stack.append(node.body)
    return atoms, preds


def resolve_pred(ref: PredRef, env: Env) -> Comonoid:
    if isinstance(ref, Comonoid):
        return ref
    if ref not in env.preds:
        raise ResolutionError(f"unknown predicate {ref!r}")
    return env.preds[ref]


def _resolve_atom(name: str, env: Env) -> Mat:
    if name in env.atoms:
        return env.atoms[name]
    if name == MAGIC:
        return mzero(env.state_type, env.state_type, env.quantale)
    raise ResolutionError(f"unknown atom {name!r}")


def compile_program(p: Program, env: Env) -> Mat:
    """The square matrix denoting ``p`` over the environment's state type."""
    t, q = env.state_type, env.quantale
    if isinstance(p, Skip):
        return identity(t, q)
    if isinstance(p, Abort):
        return mtop(t, t, q)
    if isinstance(p, Atom):
        return _resolve_atom(p.name, env)
    if isinstance(p, Seq):
        result = identity(t, q)
        for part in p.parts:
            result = compose(result, compile_program(part, env))
        return result
    if isinstance(p, Choice):
        return mjoin_all([compile_program(b, env) for b in p.branches], t, t, q)
    if isinstance(p, Cond):
        b = resolve_pred(p.pred, env)
        taken = compose(b.mat, compile_program(p.then, env))
        skipped = compose(negation(b).mat, compile_program(p.orelse, env))
        return mjoin(taken, skipped)
    if isinstance(p, While):
        b = resolve_pred(p.pred, env)
        looped = closure(compose(b.mat, compile_program(p.body, env)))
        return compose(looped.mat, negation(b).mat)
    raise TypeError(f"not a program node: {p!r}")


def verify(pre: PredRef, p: Program, post: PredRef, env: Env) -> Verdict:
    """Check {pre} p {post}; on failure report the first violating (state, successor)."""
    v, u = resolve_pred(pre, env), resolve_pred(post, env)
    found = first_violation(v, compile_program(p, env), u)
    if found is None:
        return Verdict(True)
    labels = env.state_type.labels
    y, x = found
    logger.info(f"triple fails at state {labels[y]} via {labels[x]}")
    return Verdict(False, labels[y], (labels[y], labels[x]))


def program_wlp(p: Program, post: PredRef, env: Env) -> Comonoid:
    return wlp(compile_program(p, env), resolve_pred(post, env))


def program_sp(p: Program, pre: PredRef, env: Env) -> Comonoid:
    return sp(compile_program(p, env), resolve_pred(pre, env))
