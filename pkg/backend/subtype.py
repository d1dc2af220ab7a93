"""
Comonoids (predicates) and monoids at a type.

Comonoids are idempotent diagonals below the identity; they form a
distributive lattice under entrywise tensor and join. ``interior`` is the
largest comonoid below an endoterm, ``closure`` the least monoid above one.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Tuple

from .config import VerifierConfig
from .errors import CompositionTypeError, DivergenceError, DomainMismatchError, UnsupportedOperationError
from .quantale import QElem, Quantale
from .relmat import FinType, Mat, compose, diagonal, identity, mjoin, mleq, residual_left

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Comonoid:
    """A predicate on ``typ``: one declared idempotent per label."""

    typ: FinType
    q: Quantale
    diag: Tuple[QElem, ...]

    def __post_init__(self):
        object.__setattr__(self, "diag", tuple(self.diag))
        if len(self.diag) != len(self.typ):
            raise CompositionTypeError(f"predicate on {self.typ.name} needs {len(self.typ)} entries")
        for e in self.diag:
            if not self.q.is_idempotent(e):
                raise DomainMismatchError(f"{e!r} is not an idempotent of the {self.q.kind} quantale")

    @property
    def mat(self) -> Mat:
        return diagonal(self.typ, self.q, self.diag)

    def members(self) -> List[str]:
        """Labels carrying the unit."""
        return [label for label, e in zip(self.typ.labels, self.diag) if e == self.q.unit]


@dataclass(frozen=True)
class MonoidTerm:
    typ: FinType
    mat: Mat


def _require_square(p: Mat) -> None:
    if not p.is_square():
        raise CompositionTypeError(f"expected an endoterm, got {p.src.name}->{p.dst.name}")


def _require_same_type(u: Comonoid, v: Comonoid) -> None:
    if u.typ != v.typ or u.q != v.q:
        raise CompositionTypeError(f"predicates on {u.typ.name} and {v.typ.name} do not match")


def comonoid_from_members(t: FinType, q: Quantale, members: Iterable[str]) -> Comonoid:
    chosen = {t.index(m) for m in members}
    return Comonoid(t, q, tuple(q.unit if i in chosen else q.bottom for i in range(len(t))))


def bottom_comonoid(t: FinType, q: Quantale) -> Comonoid:
    return Comonoid(t, q, (q.bottom,) * len(t))


def identity_comonoid(t: FinType, q: Quantale) -> Comonoid:
    return Comonoid(t, q, (q.unit,) * len(t))


def all_comonoids(t: FinType, q: Quantale) -> Iterator[Comonoid]:
    """Every comonoid on ``t`` (|idempotents|^|t| of them)."""
    for diag in itertools.product(q.idempotents, repeat=len(t)):
        yield Comonoid(t, q, diag)


def comonoid_leq(u: Comonoid, v: Comonoid) -> bool:
    _require_same_type(u, v)
    return all(u.q._leq(a, b) for a, b in zip(u.diag, v.diag))


def is_comonoid(p: Mat) -> bool:
    _require_square(p)
    return mleq(p, identity(p.src, p.q)) and compose(p, p) == p


def is_monoid(p: Mat) -> bool:
    _require_square(p)
    return mleq(identity(p.src, p.q), p) and compose(p, p) == p


def as_comonoid(p: Mat) -> Comonoid:
    if not is_comonoid(p):
        raise DomainMismatchError(f"endoterm on {p.src.name} is not a comonoid")
    return Comonoid(p.src, p.q, tuple(p.entries[i][i] for i in range(len(p.src))))


def interior(p: Mat) -> Comonoid:
    """Affirmation: the largest comonoid below ``p``."""
    _require_square(p)
    return Comonoid(p.src, p.q, tuple(p.q.scalar_interior(p.entries[i][i]) for i in range(len(p.src))))


def closure(p: Mat, max_iters: Optional[int] = None) -> MonoidTerm:
    """
    Consideration: the least monoid above ``p``, the join of all powers of p.

    Squares (identity ⊕ p) until it stops changing.
    """
    _require_square(p)
    if not p.q.supports_closure:
        raise UnsupportedOperationError(f"closure is not representable in the {p.q.kind} quantale")
    if max_iters is None:
        max_iters = VerifierConfig.get_closure_max_iters()
    current = mjoin(identity(p.src, p.q), p)
    for step in range(max_iters):
        squared = compose(current, current)
        if squared == current:
            logger.debug(f"closure on {p.src.name} stabilized after {step} squarings")
            return MonoidTerm(p.src, current)
        current = squared
    logger.error(f"closure on {p.src.name} did not stabilize within {max_iters} squarings")
    raise DivergenceError(f"closure did not stabilize within {max_iters} squarings")


def comeet(u: Comonoid, v: Comonoid) -> Comonoid:
    _require_same_type(u, v)
    return Comonoid(u.typ, u.q, tuple(u.q._tensor(a, b) for a, b in zip(u.diag, v.diag)))


def cojoin(u: Comonoid, v: Comonoid) -> Comonoid:
    _require_same_type(u, v)
    return Comonoid(u.typ, u.q, tuple(u.q._join(a, b) for a, b in zip(u.diag, v.diag)))


def negation(u: Comonoid) -> Comonoid:
    """The largest comonoid disjoint from ``u``."""
    q = u.q
    return Comonoid(u.typ, q, tuple(
        q.greatest_of([e for e in q.idempotents if q._tensor(e, a) == q.bottom]) for a in u.diag
    ))


def double_negation(u: Comonoid) -> Comonoid:
    return negation(negation(u))


def is_regular(u: Comonoid) -> bool:
    return double_negation(u) == u


def regular_join(u: Comonoid, v: Comonoid) -> Comonoid:
    return double_negation(cojoin(u, v))


def std_implication(u: Comonoid, v: Comonoid) -> Comonoid:
    """u ⇒ v = int(u ▷ v)."""
    _require_same_type(u, v)
    return interior(residual_left(u.mat, v.mat))
