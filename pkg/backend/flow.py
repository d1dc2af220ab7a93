"""
Hoare triples and predicate transformers over relation matrices.

A triple {v}r{u} holds when v ⊗ r ⪯ r ⊗ u. The boundary operators (domain,
range, kernel, cokernel) and the transformers sp / wlp are computed entrywise
by searching the quantale's declared idempotents, since comonoid entries are
exactly those idempotents.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from .config import VerifierConfig
from .errors import CompositionTypeError, DivergenceError, InvalidTripleError
from .quantale import QElem, Quantale
from .relmat import (
    Mat,
    compose,
    heyting_direct_image,
    heyting_inverse_image,
    mjoin,
    mleq,
    mzero,
    obj_direct,
    obj_inverse,
)
from .subtype import Comonoid, bottom_comonoid, identity_comonoid, interior, negation

logger = logging.getLogger(__name__)

Line = Sequence[QElem]


@dataclass(frozen=True)
class HoareTriple:
    """{pre} term {post}; with ``dual`` set it is read as a cotriple."""

    pre: Comonoid
    term: Mat
    post: Comonoid
    dual: bool = False

    def __post_init__(self):
        _check_pre(self.pre, self.term)
        _check_post(self.post, self.term)

    @property
    def valid(self) -> bool:
        if self.dual:
            return is_cotriple(self.pre, self.term, self.post)
        return is_triple(self.pre, self.term, self.post)


@dataclass(frozen=True)
class FlowReport:
    domain: Comonoid
    range: Comonoid
    kernel: Comonoid
    cokernel: Comonoid
    total: bool
    weakly_total: bool


def _check_pre(v: Comonoid, r: Mat) -> None:
    if v.typ != r.src or v.q != r.q:
        raise CompositionTypeError(f"precondition on {v.typ.name} does not match source {r.src.name}")


def _check_post(u: Comonoid, r: Mat) -> None:
    if u.typ != r.dst or u.q != r.q:
        raise CompositionTypeError(f"postcondition on {u.typ.name} does not match target {r.dst.name}")


def _columns(r: Mat) -> List[Line]:
    return [r.column(x) for x in range(len(r.dst))]


def _least_per_line(q: Quantale, lines: Sequence[Line], ok: Callable[[QElem, Line], bool]) -> List[QElem]:
    # an empty candidate set is read as the unit
    out = []
    for line in lines:
        candidates = [e for e in q.idempotents if ok(e, line)]
        out.append(q.least_of(candidates) if candidates else q.unit)
    return out


def _greatest_per_line(q: Quantale, lines: Sequence[Line], ok: Callable[[QElem, Line], bool]) -> List[QElem]:
    return [q.greatest_of([e for e in q.idempotents if ok(e, line)]) for line in lines]


def is_triple(v: Comonoid, r: Mat, u: Comonoid) -> bool:
    _check_pre(v, r)
    _check_post(u, r)
    return mleq(compose(v.mat, r), compose(r, u.mat))


def first_violation(v: Comonoid, r: Mat, u: Comonoid) -> Optional[Tuple[int, int]]:
    """The first (row, column) where v ⊗ r ⪯ r ⊗ u fails, scanning rows in order."""
    _check_pre(v, r)
    _check_post(u, r)
    q = r.q
    for y, row in enumerate(r.entries):
        for x, a in enumerate(row):
            if not q._leq(q._tensor(v.diag[y], a), q._tensor(a, u.diag[x])):
                return y, x
    return None


def is_cotriple(v: Comonoid, r: Mat, u: Comonoid) -> bool:
    _check_pre(v, r)
    _check_post(u, r)
    return mleq(compose(r, u.mat), compose(v.mat, r))


def _compose_checked(t1: HoareTriple, t2: HoareTriple) -> HoareTriple:
    if t1.post != t2.pre:
        raise CompositionTypeError("triples do not share a midpoint condition")
    for t in (t1, t2):
        if not t.valid:
            raise InvalidTripleError(f"cannot compose an invalid {'cotriple' if t.dual else 'triple'}")
    return HoareTriple(t1.pre, compose(t1.term, t2.term), t2.post, dual=t1.dual)


def compose_triples(t1: HoareTriple, t2: HoareTriple) -> HoareTriple:
    """{w}s{v} ⊗ {v}r{u} = {w}(s ⊗ r){u}."""
    if t1.dual or t2.dual:
        raise CompositionTypeError("compose_triples takes triples, not cotriples")
    return _compose_checked(t1, t2)


def compose_cotriples(t1: HoareTriple, t2: HoareTriple) -> HoareTriple:
    if not (t1.dual and t2.dual):
        raise CompositionTypeError("compose_cotriples takes cotriples")
    return _compose_checked(t1, t2)


def join_triples(t1: HoareTriple, t2: HoareTriple) -> HoareTriple:
    """{v}r{u} and {v}s{u} give {v}(r ⊕ s){u}."""
    if t1.pre != t2.pre or t1.post != t2.post or t1.dual != t2.dual:
        raise CompositionTypeError("joined triples must share their conditions")
    return HoareTriple(t1.pre, mjoin(t1.term, t2.term), t1.post, dual=t1.dual)


def in_source_filter(v: Comonoid, r: Mat) -> bool:
    _check_pre(v, r)
    return mleq(r, compose(v.mat, r))


def in_target_filter(u: Comonoid, r: Mat) -> bool:
    _check_post(u, r)
    return mleq(r, compose(r, u.mat))


def in_source_ideal(v: Comonoid, r: Mat) -> bool:
    _check_pre(v, r)
    return compose(v.mat, r) == mzero(r.src, r.dst, r.q)


def in_target_ideal(u: Comonoid, r: Mat) -> bool:
    _check_post(u, r)
    return compose(r, u.mat) == mzero(r.src, r.dst, r.q)


def domain_of(r: Mat) -> Comonoid:
    """Least v with r ⪯ v ⊗ r."""
    q = r.q
    diag = _least_per_line(q, r.entries, lambda e, row: all(q._leq(a, q._tensor(e, a)) for a in row))
    return Comonoid(r.src, q, diag)


def range_of(r: Mat) -> Comonoid:
    """Least u with r ⪯ r ⊗ u."""
    q = r.q
    diag = _least_per_line(q, _columns(r), lambda e, col: all(q._leq(a, q._tensor(a, e)) for a in col))
    return Comonoid(r.dst, q, diag)


def kernel_of(r: Mat) -> Comonoid:
    """Largest v with v ⊗ r = 0."""
    q = r.q
    diag = _greatest_per_line(q, r.entries, lambda e, row: all(q._tensor(e, a) == q.bottom for a in row))
    return Comonoid(r.src, q, diag)


def cokernel_of(r: Mat) -> Comonoid:
    """Largest u with r ⊗ u = 0."""
    q = r.q
    diag = _greatest_per_line(q, _columns(r), lambda e, col: all(q._tensor(a, e) == q.bottom for a in col))
    return Comonoid(r.dst, q, diag)


def flow_report(r: Mat) -> FlowReport:
    dom, ker = domain_of(r), kernel_of(r)
    return FlowReport(
        domain=dom,
        range=range_of(r),
        kernel=ker,
        cokernel=cokernel_of(r),
        total=dom == identity_comonoid(r.src, r.q),
        weakly_total=ker == bottom_comonoid(r.src, r.q),
    )


def sp(r: Mat, v: Comonoid) -> Comonoid:
    """Strongest postcondition: the range of the guarded term v ⊗ r."""
    _check_pre(v, r)
    return range_of(compose(v.mat, r))


def wlp(r: Mat, u: Comonoid) -> Comonoid:
    """Weakest liberal precondition: the largest v with v ⊗ r ⪯ r ⊗ u."""
    _check_post(u, r)
    q = r.q
    guarded = compose(r, u.mat)
    lines = [tuple(zip(row, grow)) for row, grow in zip(r.entries, guarded.entries)]
    diag = _greatest_per_line(q, lines, lambda e, line: all(q._leq(q._tensor(e, a), b) for a, b in line))
    return Comonoid(r.src, q, diag)


def wlp_via_kernel(r: Mat, u: Comonoid) -> Comonoid:
    """[r](u) = ker(r ⊗ ¬u)."""
    _check_post(u, r)
    return kernel_of(compose(r, negation(u).mat))


def dual_direct(r: Mat, u: Comonoid) -> Comonoid:
    """Weakest dual precondition: the domain of r ⊗ u."""
    _check_post(u, r)
    return domain_of(compose(r, u.mat))


def heyting_inverse_subtype(r: Mat, u: Comonoid) -> Comonoid:
    """int((r ⊗ u) ◁ r); agrees with wlp wherever residuals exist."""
    _check_post(u, r)
    return interior(heyting_inverse_image(r, u.mat))


def heyting_direct_subtype(r: Mat, v: Comonoid) -> Comonoid:
    """int(r ▷ (v ⊗ r)); monotone, but not in general left adjoint to the inverse flow."""
    _check_pre(v, r)
    return interior(heyting_direct_image(r, v.mat))


def is_coprocess(v: Comonoid, r: Mat, u: Comonoid) -> bool:
    _check_pre(v, r)
    _check_post(u, r)
    return compose(v.mat, r) == r and compose(r, u.mat) == r


def subterm(v: Comonoid, r: Mat, u: Comonoid) -> Mat:
    """The (v,u)-th subterm v ⊗ r ⊗ u."""
    _check_pre(v, r)
    _check_post(u, r)
    return compose(compose(v.mat, r), u.mat)


def dialectical_fixpoint(iota: Mat, o: Mat, start: Mat, max_iters: Optional[int] = None) -> Mat:
    """
    Iterate φ ← (φ ◁ ι) ⊗ o from ``start`` until φ stops changing.

    With ι the clause bodies and o the clause heads of a propositional Horn
    program, this is the immediate-consequence operator; started from the
    bottom object it reaches the minimal model.
    """
    if iota.src != o.src or iota.dst != o.dst:
        raise CompositionTypeError("dialectical system needs parallel input and output terms")
    if max_iters is None:
        max_iters = VerifierConfig.get_fixpoint_max_iters()
    phi = start
    for step in range(max_iters):
        nxt = obj_direct(obj_inverse(phi, iota), o)
        if nxt == phi:
            logger.debug(f"dialectical fixpoint reached after {step} steps")
            return phi
        phi = nxt
    logger.error(f"dialectical fixpoint did not stabilize within {max_iters} steps")
    raise DivergenceError(f"dialectical fixpoint did not stabilize within {max_iters} steps")
