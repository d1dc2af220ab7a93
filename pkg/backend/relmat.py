"""
Typed quantale-valued matrices.

A ``Mat`` from ``src`` (rows, Y) to ``dst`` (columns, X) is the term Y → X of
the matrix category over its quantale. Composition is the join-of-tensors
product, the order is pointwise, and the two residuals are the right adjoints
of composition on either side. Objects of type X are 1×X matrices over the
separator type ``SEPARATOR``.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .errors import CompositionTypeError, DomainMismatchError, UnsupportedOperationError
from .quantale import QElem, Quantale

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FinType:
    """A named finite set of state labels, in canonical order."""

    name: str
    labels: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise CompositionTypeError(f"type {self.name} has duplicate labels")

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise CompositionTypeError(f"{label!r} is not a label of type {self.name}") from None


SEPARATOR = FinType("1", ("*",))


@dataclass(frozen=True)
class Mat:
    """A |src|×|dst| grid of quantale elements, indexed (row y, column x)."""

    src: FinType
    dst: FinType
    q: Quantale
    entries: Tuple[Tuple[QElem, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) != len(self.src) or any(len(row) != len(self.dst) for row in entries):
            raise CompositionTypeError(
                f"matrix {self.src.name}->{self.dst.name} needs {len(self.src)}x{len(self.dst)} entries"
            )
        for row in entries:
            self.q.check(*row)

    def is_square(self) -> bool:
        return self.src == self.dst

    def entry(self, y: str, x: str) -> QElem:
        return self.entries[self.src.index(y)][self.dst.index(x)]

    def column(self, x: int) -> Tuple[QElem, ...]:
        return tuple(row[x] for row in self.entries)


@dataclass(frozen=True)
class FunctionalClass:
    functional: bool
    coreflective: bool
    reflective: bool
    inversion: bool


def _same_quantale(*mats: Mat) -> Quantale:
    q = mats[0].q
    for m in mats[1:]:
        if m.q != q:
            raise DomainMismatchError(f"cannot mix {q.kind} and {m.q.kind} matrices")
    return q


def _require_parallel(s: Mat, r: Mat) -> Quantale:
    q = _same_quantale(s, r)
    if s.src != r.src or s.dst != r.dst:
        raise CompositionTypeError(
            f"matrices {s.src.name}->{s.dst.name} and {r.src.name}->{r.dst.name} are not parallel"
        )
    return q


def _require_residual(q: Quantale) -> None:
    if not q.supports_residual:
        raise UnsupportedOperationError(f"the {q.kind} quantale has no representable residual")


def constant(yt: FinType, xt: FinType, q: Quantale, value: QElem) -> Mat:
    return Mat(yt, xt, q, tuple(tuple(value for _ in xt.labels) for _ in yt.labels))


def identity(t: FinType, q: Quantale) -> Mat:
    n = len(t)
    return Mat(t, t, q, tuple(tuple(q.unit if i == j else q.bottom for j in range(n)) for i in range(n)))


def diagonal(t: FinType, q: Quantale, diag: Sequence[QElem]) -> Mat:
    n = len(t)
    if len(diag) != n:
        raise CompositionTypeError(f"diagonal for type {t.name} needs {n} entries")
    return Mat(t, t, q, tuple(tuple(diag[i] if i == j else q.bottom for j in range(n)) for i in range(n)))


def mzero(yt: FinType, xt: FinType, q: Quantale) -> Mat:
    return constant(yt, xt, q, q.bottom)


def mtop(yt: FinType, xt: FinType, q: Quantale) -> Mat:
    if not q.supports_top:
        raise UnsupportedOperationError(f"the {q.kind} quantale has no top matrix")
    return constant(yt, xt, q, q.top)


def from_pairs(yt: FinType, xt: FinType, q: Quantale, pairs: Iterable[Tuple[str, str]]) -> Mat:
    """The crisp relation holding the unit exactly on ``pairs`` (by label)."""
    rows = [[q.bottom] * len(xt) for _ in yt.labels]
    for y, x in pairs:
        rows[yt.index(y)][xt.index(x)] = q.unit
    return Mat(yt, xt, q, rows)


def graph(src: FinType, dst: FinType, q: Quantale, image: Sequence[int]) -> Mat:
    """The graph of the total function sending label i of ``src`` to label image[i] of ``dst``."""
    if len(image) != len(src) or any(not 0 <= j < len(dst) for j in image):
        raise CompositionTypeError(f"{list(image)} is not a total function {src.name}->{dst.name}")
    return Mat(src, dst, q, tuple(tuple(q.unit if j == image[i] else q.bottom for j in range(len(dst)))
                                  for i in range(len(src))))


def obj(t: FinType, q: Quantale, entries: Sequence[QElem]) -> Mat:
    """An object of type ``t``: a 1×t matrix over the separator."""
    return Mat(SEPARATOR, t, q, (tuple(entries),))


def compose(s: Mat, r: Mat) -> Mat:
    """(s ⊗ r)_zx = ⋁_y s_zy ⊗ r_yx; s runs first."""
    q = _same_quantale(s, r)
    if s.dst != r.src:
        raise CompositionTypeError(
            f"cannot compose {s.src.name}->{s.dst.name} with {r.src.name}->{r.dst.name}"
        )
    cols = [r.column(x) for x in range(len(r.dst))]
    tensor = q._tensor
    return Mat(s.src, r.dst, q, tuple(
        tuple(q.join_all(tensor(a, b) for a, b in zip(row, col)) for col in cols)
        for row in s.entries
    ))


def mjoin(s: Mat, r: Mat) -> Mat:
    q = _require_parallel(s, r)
    return Mat(s.src, s.dst, q, tuple(
        tuple(q._join(a, b) for a, b in zip(srow, rrow)) for srow, rrow in zip(s.entries, r.entries)
    ))


def mmeet(s: Mat, r: Mat) -> Mat:
    q = _require_parallel(s, r)
    return Mat(s.src, s.dst, q, tuple(
        tuple(q._meet(a, b) for a, b in zip(srow, rrow)) for srow, rrow in zip(s.entries, r.entries)
    ))


def mleq(s: Mat, r: Mat) -> bool:
    q = _require_parallel(s, r)
    return all(q._leq(a, b) for srow, rrow in zip(s.entries, r.entries) for a, b in zip(srow, rrow))


def mjoin_all(mats: Sequence[Mat], yt: FinType, xt: FinType, q: Quantale) -> Mat:
    result = mzero(yt, xt, q)
    for m in mats:
        result = mjoin(result, m)
    return result


def mmeet_all(mats: Sequence[Mat], yt: FinType, xt: FinType, q: Quantale) -> Mat:
    result = mtop(yt, xt, q)
    for m in mats:
        result = mmeet(result, m)
    return result


def residual_right(s: Mat, r: Mat) -> Mat:
    """
    s ◁ r for s: Z→X and r: Y→X, the Z→Y matrix with
    compose(t, r) ⪯ s iff t ⪯ s ◁ r.
    """
    q = _same_quantale(s, r)
    _require_residual(q)
    if s.dst != r.dst:
        raise CompositionTypeError(f"right residual needs a shared target, got {s.dst.name} and {r.dst.name}")
    res = q._residual
    return Mat(s.src, r.src, q, tuple(
        tuple(q.meet_all([res(a, b) for a, b in zip(srow, rrow)]) for rrow in r.entries)
        for srow in s.entries
    ))


def residual_left(r: Mat, t: Mat) -> Mat:
    """
    r ▷ t for r: Y→X and t: Y→Z, the X→Z matrix with
    compose(r, s) ⪯ t iff s ⪯ r ▷ t.
    """
    q = _same_quantale(r, t)
    _require_residual(q)
    if r.src != t.src:
        raise CompositionTypeError(f"left residual needs a shared source, got {r.src.name} and {t.src.name}")
    res = q._residual
    rcols = [r.column(x) for x in range(len(r.dst))]
    tcols = [t.column(z) for z in range(len(t.dst))]
    return Mat(r.dst, t.dst, q, tuple(
        tuple(q.meet_all([res(c, a) for a, c in zip(rcol, tcol)]) for tcol in tcols)
        for rcol in rcols
    ))


def transpose(r: Mat) -> Mat:
    return Mat(r.dst, r.src, r.q, tuple(r.column(x) for x in range(len(r.dst))))


def is_adjoint_pair(r: Mat, s: Mat) -> bool:
    """Unit y ⪯ r⊗s and counit s⊗r ⪯ x, for r: Y→X and s: X→Y."""
    _same_quantale(r, s)
    if r.src != s.dst or r.dst != s.src:
        raise CompositionTypeError(
            f"{r.src.name}->{r.dst.name} and {s.src.name}->{s.dst.name} cannot form an adjoint pair"
        )
    unit_ok = mleq(identity(r.src, r.q), compose(r, s))
    counit_ok = mleq(compose(s, r), identity(r.dst, r.q))
    return unit_ok and counit_ok


def is_functional(r: Mat) -> bool:
    return is_adjoint_pair(r, transpose(r))


def classify_functional(r: Mat) -> FunctionalClass:
    """Functionality plus whether the unit, the counit, or both are equalities."""
    if not is_functional(r):
        return FunctionalClass(False, False, False, False)
    rt = transpose(r)
    coreflective = compose(r, rt) == identity(r.src, r.q)
    reflective = compose(rt, r) == identity(r.dst, r.q)
    return FunctionalClass(True, coreflective, reflective, coreflective and reflective)


def heyting_direct_image(r: Mat, q: Mat) -> Mat:
    """H^r(q) = r ▷ (q ⊗ r) for an endoterm q on the source of r."""
    if q.src != r.src or not q.is_square():
        raise CompositionTypeError(f"direct image along {r.src.name}->{r.dst.name} needs an endoterm on {r.src.name}")
    return residual_left(r, compose(q, r))


def heyting_inverse_image(r: Mat, p: Mat) -> Mat:
    """H_r(p) = (r ⊗ p) ◁ r for an endoterm p on the target of r."""
    if p.src != r.dst or not p.is_square():
        raise CompositionTypeError(f"inverse image along {r.src.name}->{r.dst.name} needs an endoterm on {r.dst.name}")
    return residual_right(compose(r, p), r)


def _require_object(phi: Mat, t: FinType) -> None:
    if phi.src != SEPARATOR or phi.dst != t:
        raise CompositionTypeError(f"expected an object of type {t.name}, got {phi.src.name}->{phi.dst.name}")


def obj_direct(phi: Mat, r: Mat) -> Mat:
    """Direct object flow φ ⊗ r, taking objects of type src(r) to dst(r)."""
    _require_object(phi, r.src)
    return compose(phi, r)


def obj_inverse(phi: Mat, r: Mat) -> Mat:
    """Inverse object flow φ ◁ r, taking objects of type dst(r) to src(r)."""
    _require_object(phi, r.dst)
    return residual_right(phi, r)


def object_entries(phi: Mat) -> List[QElem]:
    return list(phi.entries[0])
