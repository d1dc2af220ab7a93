"""
Scalar algebras for relation matrices.

Each quantale is a symmetric complete Heyting monoid: a lattice order with a
commutative monotone tensor, a unit and a bottom, and (where representable) a
residual right adjoint to the tensor. Every matrix operation in the package is
parameterized by one of these values.

Elements are plain immutable Python values:

- boolean:  ``0`` / ``1``
- tropical: ``fractions.Fraction`` >= 0, or ``INF``; order is reversed numeric
- natural:  ``int`` >= 0, or ``INF``; order is reversed numeric
- heyting:  element labels of a finite distributive lattice table
- language: ``frozenset`` of strings over a fixed alphabet
"""

import logging
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from typing_extensions import Final, TypeAlias

from .config import DocumentConfig
from .errors import DomainMismatchError, UnsupportedOperationError

logger = logging.getLogger(__name__)


class Infinity:
    """The distinguished infinity of the tropical and natural carriers."""

    _instance: Optional["Infinity"] = None

    def __new__(cls) -> "Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (Infinity, ())


INF: Final = Infinity()

QElem: TypeAlias = Union[int, Fraction, Infinity, str, FrozenSet[str]]


class Quantale(ABC):
    """Interface shared by every scalar algebra."""

    kind: str = ""

    @property
    @abstractmethod
    def unit(self) -> QElem:
        ...

    @property
    @abstractmethod
    def bottom(self) -> QElem:
        ...

    @property
    @abstractmethod
    def top(self) -> QElem:
        ...

    @property
    @abstractmethod
    def idempotents(self) -> Tuple[QElem, ...]:
        """Every element e with e ⊗ e = e and e ⪯ unit, bottom included."""

    @abstractmethod
    def contains(self, a: Any) -> bool:
        ...

    @abstractmethod
    def _leq(self, a: QElem, b: QElem) -> bool:
        ...

    @abstractmethod
    def _join(self, a: QElem, b: QElem) -> QElem:
        ...

    @abstractmethod
    def _meet(self, a: QElem, b: QElem) -> QElem:
        ...

    @abstractmethod
    def _tensor(self, a: QElem, b: QElem) -> QElem:
        ...

    @abstractmethod
    def _residual(self, a: QElem, b: QElem) -> QElem:
        ...

    @abstractmethod
    def parse(self, raw: Any) -> QElem:
        """Read an element from its document (JSON) form."""

    @abstractmethod
    def to_json(self, a: QElem) -> Any:
        ...

    supports_residual: bool = True
    supports_top: bool = True
    supports_closure: bool = True

    def check(self, *values: QElem) -> None:
        for a in values:
            if not self.contains(a):
                raise DomainMismatchError(f"{a!r} is not an element of the {self.kind} quantale")

    def leq(self, a: QElem, b: QElem) -> bool:
        self.check(a, b)
        return self._leq(a, b)

    def join(self, a: QElem, b: QElem) -> QElem:
        self.check(a, b)
        return self._join(a, b)

    def meet(self, a: QElem, b: QElem) -> QElem:
        self.check(a, b)
        return self._meet(a, b)

    def tensor(self, a: QElem, b: QElem) -> QElem:
        self.check(a, b)
        return self._tensor(a, b)

    def residual(self, a: QElem, b: QElem) -> QElem:
        """The ⪯-largest t with t ⊗ b ⪯ a."""
        if not self.supports_residual:
            raise UnsupportedOperationError(f"residual is not representable in the {self.kind} quantale")
        self.check(a, b)
        return self._residual(a, b)

    def join_all(self, items: Iterable[QElem]) -> QElem:
        result = self.bottom
        for a in items:
            result = self._join(result, a)
        return result

    def meet_all(self, items: Iterable[QElem]) -> QElem:
        items = list(items)
        if not items:
            return self.top
        result = items[0]
        for a in items[1:]:
            result = self._meet(result, a)
        return result

    def is_idempotent(self, a: QElem) -> bool:
        return a in self.idempotents

    def greatest_of(self, candidates: Sequence[QElem]) -> QElem:
        """The candidate above all others; candidates must be nonempty."""
        for c in candidates:
            if all(self._leq(d, c) for d in candidates):
                return c
        raise UnsupportedOperationError(f"no greatest element among {list(candidates)!r}")

    def least_of(self, candidates: Sequence[QElem]) -> QElem:
        """The candidate below all others; candidates must be nonempty."""
        for c in candidates:
            if all(self._leq(c, d) for d in candidates):
                return c
        raise UnsupportedOperationError(f"no least element among {list(candidates)!r}")

    def scalar_interior(self, a: QElem) -> QElem:
        """The largest declared idempotent below ``a``."""
        self.check(a)
        return self.greatest_of([e for e in self.idempotents if self._leq(e, a)])

    def carrier(self) -> Tuple[QElem, ...]:
        raise UnsupportedOperationError(f"the {self.kind} carrier is infinite")


@dataclass(frozen=True)
class BooleanQuantale(Quantale):
    """Truth values under AND; matrices over it are ordinary relations."""

    kind = "boolean"

    @property
    def unit(self) -> QElem:
        return 1

    @property
    def bottom(self) -> QElem:
        return 0

    @property
    def top(self) -> QElem:
        return 1

    @property
    def idempotents(self) -> Tuple[QElem, ...]:
        return (0, 1)

    def carrier(self) -> Tuple[QElem, ...]:
        return (0, 1)

    def contains(self, a: Any) -> bool:
        return isinstance(a, int) and not isinstance(a, bool) and a in (0, 1)

    def _leq(self, a, b):
        return a <= b

    def _join(self, a, b):
        return a | b

    def _meet(self, a, b):
        return a & b

    def _tensor(self, a, b):
        return a & b

    def _residual(self, a, b):
        return (1 - b) | a

    def parse(self, raw: Any) -> QElem:
        if isinstance(raw, bool):
            return int(raw)
        if isinstance(raw, int) and raw in (0, 1):
            return raw
        raise DomainMismatchError(f"boolean entries are 0 or 1, got {raw!r}")

    def to_json(self, a: QElem) -> Any:
        return int(a)


@dataclass(frozen=True)
class TropicalQuantale(Quantale):
    """Nonnegative rationals with infinity, ordered by ≥, tensor +; min-plus algebra."""

    kind = "tropical"

    @property
    def unit(self) -> QElem:
        return Fraction(0)

    @property
    def bottom(self) -> QElem:
        return INF

    @property
    def top(self) -> QElem:
        return self.unit

    @property
    def idempotents(self) -> Tuple[QElem, ...]:
        return (self.unit, INF)

    def _is_number(self, a: Any) -> bool:
        return isinstance(a, (int, Fraction)) and not isinstance(a, bool)

    def contains(self, a: Any) -> bool:
        return a is INF or (self._is_number(a) and a >= 0)

    def _leq(self, a, b):
        if a is INF:
            return True
        if b is INF:
            return False
        return a >= b

    def _join(self, a, b):
        if a is INF:
            return b
        if b is INF:
            return a
        return min(a, b)

    def _meet(self, a, b):
        if a is INF or b is INF:
            return INF
        return max(a, b)

    def _tensor(self, a, b):
        if a is INF or b is INF:
            return INF
        return a + b

    def _residual(self, a, b):
        # b = INF absorbs every t, so the unit is largest
        if b is INF:
            return self.unit
        if a is INF:
            return INF
        return a - b if a > b else self.unit

    def parse(self, raw: Any) -> QElem:
        if raw == DocumentConfig.INFINITY_TOKEN:
            return INF
        try:
            if isinstance(raw, bool):
                raise ValueError(raw)
            if isinstance(raw, float):
                value = Fraction(repr(raw))
            elif isinstance(raw, str):
                if not re.fullmatch(DocumentConfig.NUMBER_PATTERN, raw):
                    raise ValueError(raw)
                value = Fraction(raw)
            elif isinstance(raw, int):
                value = Fraction(raw)
            else:
                raise ValueError(raw)
        except (ValueError, ZeroDivisionError):
            raise DomainMismatchError(f"{self.kind} entries are numbers or \"inf\", got {raw!r}")
        if value < 0:
            raise DomainMismatchError(f"{self.kind} entries are nonnegative, got {raw!r}")
        return value

    def to_json(self, a: QElem) -> Any:
        if a is INF:
            return DocumentConfig.INFINITY_TOKEN
        if a.denominator == 1:
            return int(a)
        return str(a)


@dataclass(frozen=True)
class NaturalQuantale(TropicalQuantale):
    """Extended naturals ordered by ≥ with tensor +."""

    kind = "natural"

    @property
    def unit(self) -> QElem:
        return 0

    def contains(self, a: Any) -> bool:
        return a is INF or (isinstance(a, int) and not isinstance(a, bool) and a >= 0)

    def parse(self, raw: Any) -> QElem:
        value = super().parse(raw)
        if value is INF:
            return INF
        if value.denominator != 1:
            raise DomainMismatchError(f"natural entries are whole numbers, got {raw!r}")
        return int(value)

    def to_json(self, a: QElem) -> Any:
        return DocumentConfig.INFINITY_TOKEN if a is INF else a


@dataclass(frozen=True)
class FiniteHeyting(Quantale):
    """
    A finite distributive lattice given by a table, with tensor = meet.

    ``order`` holds every pair (a, b) with a ⪯ b. Use ``from_table`` or
    ``chain`` to build one from generating pairs.
    """

    elements: Tuple[str, ...]
    order: FrozenSet[Tuple[str, str]]
    _tables: Dict[str, Dict[Tuple[str, str], str]] = field(
        default=None, compare=False, hash=False, repr=False
    )

    kind = "heyting"

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements) or not self.elements:
            raise DomainMismatchError("lattice elements must be nonempty and distinct")
        for a in self.elements:
            if (a, a) not in self.order:
                raise DomainMismatchError(f"lattice order is not reflexive at {a!r}")
        for a, b in self.order:
            if a != b and (b, a) in self.order:
                raise DomainMismatchError(f"lattice order is not antisymmetric at {a!r}, {b!r}")

        def bound(candidates: List[str], below: bool) -> str:
            for c in candidates:
                if all(((c, d) if below else (d, c)) in self.order for d in candidates):
                    return c
            raise DomainMismatchError("lattice table has a pair without a join or meet")

        joins, meets, residuals = {}, {}, {}
        for a in self.elements:
            for b in self.elements:
                ups = [c for c in self.elements if (a, c) in self.order and (b, c) in self.order]
                downs = [c for c in self.elements if (c, a) in self.order and (c, b) in self.order]
                joins[a, b] = bound(ups, below=True)
                meets[a, b] = bound(downs, below=False)
        for a in self.elements:
            for b in self.elements:
                for c in self.elements:
                    if meets[a, joins[b, c]] != joins[meets[a, b], meets[a, c]]:
                        raise DomainMismatchError("lattice table is not distributive")
        for a in self.elements:
            for b in self.elements:
                ts = [t for t in self.elements if (meets[t, b], a) in self.order]
                residuals[a, b] = bound(ts, below=False)
        tables = {"join": joins, "meet": meets, "residual": residuals}
        object.__setattr__(self, "_tables", tables)
        tops = [c for c in self.elements if all((d, c) in self.order for d in self.elements)]
        bottoms = [c for c in self.elements if all((c, d) in self.order for d in self.elements)]
        object.__setattr__(self, "_top", tops[0])
        object.__setattr__(self, "_bottom", bottoms[0])

    @classmethod
    def from_table(cls, elements: Sequence[str], leq_pairs: Iterable[Sequence[str]]) -> "FiniteHeyting":
        """Close generating pairs reflexively and transitively, then validate."""
        if not all(isinstance(a, str) for a in elements):
            raise DomainMismatchError("lattice elements are strings")
        elements = tuple(elements)
        order = {(a, a) for a in elements}
        for pair in leq_pairs:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise DomainMismatchError(f"lattice pair {pair!r} is not [lower, upper]")
            a, b = pair
            if a not in elements or b not in elements:
                raise DomainMismatchError(f"lattice pair {pair!r} names an unknown element")
            order.add((a, b))
        changed = True
        while changed:
            changed = False
            for a, b in list(order):
                for c, d in list(order):
                    if b == c and (a, d) not in order:
                        order.add((a, d))
                        changed = True
        return cls(elements, frozenset(order))

    @classmethod
    def chain(cls, labels: Sequence[str]) -> "FiniteHeyting":
        """A linear order, least label first."""
        return cls.from_table(labels, zip(labels, labels[1:]))

    @property
    def unit(self) -> QElem:
        return self._top

    @property
    def bottom(self) -> QElem:
        return self._bottom

    @property
    def top(self) -> QElem:
        return self._top

    @property
    def idempotents(self) -> Tuple[QElem, ...]:
        return self.elements

    def carrier(self) -> Tuple[QElem, ...]:
        return self.elements

    def contains(self, a: Any) -> bool:
        return isinstance(a, str) and a in self.elements

    def _leq(self, a, b):
        return (a, b) in self.order

    def _join(self, a, b):
        return self._tables["join"][a, b]

    def _meet(self, a, b):
        return self._tables["meet"][a, b]

    def _tensor(self, a, b):
        return self._tables["meet"][a, b]

    def _residual(self, a, b):
        return self._tables["residual"][a, b]

    def parse(self, raw: Any) -> QElem:
        if not self.contains(raw):
            raise DomainMismatchError(f"{raw!r} is not a label of the lattice {list(self.elements)}")
        return raw

    def to_json(self, a: QElem) -> Any:
        return a


@dataclass(frozen=True)
class LanguageQuantale(Quantale):
    """Finite languages over an alphabet under union and concatenation."""

    alphabet: Tuple[str, ...]

    kind = "language"
    supports_residual = False
    supports_top = False
    supports_closure = False

    @property
    def unit(self) -> QElem:
        return frozenset({""})

    @property
    def bottom(self) -> QElem:
        return frozenset()

    @property
    def top(self) -> QElem:
        raise UnsupportedOperationError("the language quantale has no finite top")

    @property
    def idempotents(self) -> Tuple[QElem, ...]:
        return (frozenset(), frozenset({""}))

    def contains(self, a: Any) -> bool:
        return isinstance(a, frozenset) and all(
            isinstance(w, str) and all(ch in self.alphabet for ch in w) for w in a
        )

    def _leq(self, a, b):
        return a <= b

    def _join(self, a, b):
        return a | b

    def _meet(self, a, b):
        return a & b

    def _tensor(self, a, b):
        return frozenset(u + v for u in a for v in b)

    def _residual(self, a, b):
        raise UnsupportedOperationError("residual is not representable in the language quantale")

    def parse(self, raw: Any) -> QElem:
        if not isinstance(raw, list) or not all(isinstance(w, str) for w in raw):
            raise DomainMismatchError(f"language entries are lists of strings, got {raw!r}")
        value = frozenset(raw)
        if not self.contains(value):
            raise DomainMismatchError(f"{raw!r} uses letters outside the alphabet {list(self.alphabet)}")
        return value

    def to_json(self, a: QElem) -> Any:
        return sorted(a)

def quantale_from_selector(selector: Any) -> Quantale:
    """Build a quantale from a document selector string or object."""
    if selector == "boolean":
        return BooleanQuantale()
    if selector == "tropical":
        return TropicalQuantale()
    if selector == "natural":
        return NaturalQuantale()
    if isinstance(selector, dict) and len(selector) == 1:
        if "heyting" in selector:
            table = selector["heyting"]
            if isinstance(table, list):
                return FiniteHeyting.chain(table)
            if not isinstance(table, dict) or not isinstance(table.get("elements"), list):
                raise DomainMismatchError("heyting table needs an \"elements\" list")
            if not isinstance(table.get("leq", []), list):
                raise DomainMismatchError("heyting \"leq\" is a list of [lower, upper] pairs")
            return FiniteHeyting.from_table(table["elements"], table.get("leq", []))
        if "language" in selector:
            letters = selector["language"]
            if not isinstance(letters, list) or not all(isinstance(ch, str) and len(ch) == 1 for ch in letters):
                raise DomainMismatchError("language alphabet is a list of single letters")
            return LanguageQuantale(tuple(letters))
    raise UnsupportedOperationError(f"unknown quantale selector: {selector!r}")
