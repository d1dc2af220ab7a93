"""
Spans of finite sets.

A span Y ← apex → X is a pair of total functions out of a common apex. Spans
compose by pullback, are ordered by mediating functions (a preorder, so they
are compared up to equivalence), and flatten to boolean relation matrices.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

from .config import VerifierConfig
from .errors import CompositionTypeError, UnsupportedOperationError
from .quantale import BooleanQuantale
from .relmat import FinType, Mat, from_pairs, obj, obj_direct, transpose

logger = logging.getLogger(__name__)

BOOLEAN = BooleanQuantale()


@dataclass(frozen=True)
class FinMap:
    """A total function ``src`` → ``dst`` given by target indices."""

    src: FinType
    dst: FinType
    image: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(self.image))
        if len(self.image) != len(self.src) or any(not 0 <= j < len(self.dst) for j in self.image):
            raise CompositionTypeError(f"{list(self.image)} is not a total function {self.src.name}->{self.dst.name}")

    def __call__(self, i: int) -> int:
        return self.image[i]

    def then(self, other: "FinMap") -> "FinMap":
        if self.dst != other.src:
            raise CompositionTypeError(f"cannot follow {self.src.name}->{self.dst.name} by {other.src.name}->{other.dst.name}")
        return FinMap(self.src, other.dst, tuple(other.image[j] for j in self.image))

    @classmethod
    def identity(cls, t: FinType) -> "FinMap":
        return cls(t, t, tuple(range(len(t))))


@dataclass(frozen=True)
class SpanT:
    """src ← apex → dst, with legs ``left`` and ``right``."""

    apex: FinType
    left: FinMap
    right: FinMap

    def __post_init__(self):
        if self.left.src != self.apex or self.right.src != self.apex:
            raise CompositionTypeError(f"span legs must start at the apex {self.apex.name}")

    @property
    def src(self) -> FinType:
        return self.left.dst

    @property
    def dst(self) -> FinType:
        return self.right.dst


@dataclass(frozen=True)
class SpanOrderWitness:
    mediator: Optional[FinMap]

    def __bool__(self) -> bool:
        return self.mediator is not None


def identity_span(t: FinType) -> SpanT:
    ident = FinMap.identity(t)
    return SpanT(t, ident, ident)


def yoneda(f: FinMap) -> SpanT:
    """The span Y ← Y → X of a function."""
    return SpanT(f.src, FinMap.identity(f.src), f)


def span_transpose(rho: SpanT) -> SpanT:
    return SpanT(rho.apex, rho.right, rho.left)


def bottom_span(yt: FinType, xt: FinType) -> SpanT:
    empty = FinType("0", ())
    return SpanT(empty, FinMap(empty, yt, ()), FinMap(empty, xt, ()))


def top_span(yt: FinType, xt: FinType) -> SpanT:
    """The product span, flattening to the full relation."""
    pairs = list(itertools.product(range(len(yt)), range(len(xt))))
    apex = FinType(f"{yt.name}x{xt.name}", tuple(f"({yt.labels[i]},{xt.labels[j]})" for i, j in pairs))
    return SpanT(apex, FinMap(apex, yt, [i for i, _ in pairs]), FinMap(apex, xt, [j for _, j in pairs]))


def span_join(sigma: SpanT, rho: SpanT) -> SpanT:
    """Boolean sum: the disjoint union of the apexes."""
    _require_parallel(sigma, rho)
    apex = FinType(
        f"{sigma.apex.name}+{rho.apex.name}",
        tuple(f"l.{a}" for a in sigma.apex.labels) + tuple(f"r.{a}" for a in rho.apex.labels),
    )
    return SpanT(
        apex,
        FinMap(apex, sigma.src, sigma.left.image + rho.left.image),
        FinMap(apex, sigma.dst, sigma.right.image + rho.right.image),
    )


def _require_parallel(sigma: SpanT, rho: SpanT) -> None:
    if sigma.src != rho.src or sigma.dst != rho.dst:
        raise CompositionTypeError("spans are not parallel")


def pullback(f: FinMap, g: FinMap) -> Tuple[FinType, FinMap, FinMap]:
    """
    Pullback of the cospan Y -f-> X <-g- Z: apex {(y, z) | f(y) = g(z)}
    ordered lexicographically, with its two projections.
    """
    if f.dst != g.dst:
        raise CompositionTypeError(f"cospan legs end at {f.dst.name} and {g.dst.name}")
    pairs = [(i, j) for i in range(len(f.src)) for j in range(len(g.src)) if f(i) == g(j)]
    apex = FinType(
        f"{f.src.name}x{g.src.name}",
        tuple(f"({f.src.labels[i]},{g.src.labels[j]})" for i, j in pairs),
    )
    return apex, FinMap(apex, f.src, [i for i, _ in pairs]), FinMap(apex, g.src, [j for _, j in pairs])


def pullback_mediator(f: FinMap, g: FinMap, h: FinMap, k: FinMap) -> FinMap:
    """The unique W → apex through which a commuting fork h: W→Y, k: W→Z factors."""
    apex, p_y, p_z = pullback(f, g)
    if h.src != k.src or h.dst != f.src or k.dst != g.src:
        raise CompositionTypeError("fork legs do not match the cospan")
    index = {(p_y(e), p_z(e)): e for e in range(len(apex))}
    image = []
    for w in range(len(h.src)):
        key = (h(w), k(w))
        if key not in index:
            raise CompositionTypeError(f"fork does not commute at {h.src.labels[w]!r}")
        image.append(index[key])
    return FinMap(h.src, apex, image)


def span_compose(sigma: SpanT, rho: SpanT) -> SpanT:
    """Pullback composition of σ: Z→Y and ρ: Y→X."""
    if sigma.dst != rho.src:
        raise CompositionTypeError(f"cannot compose spans {sigma.src.name}->{sigma.dst.name} and {rho.src.name}->{rho.dst.name}")
    apex, p_s, p_r = pullback(sigma.right, rho.left)
    return SpanT(apex, p_s.then(sigma.left), p_r.then(rho.right))


def span_leq(sigma: SpanT, rho: SpanT) -> SpanOrderWitness:
    """
    A mediator m: apex(σ) → apex(ρ) commuting with both legs, if one exists.

    The commuting conditions are independent per apex element, so the search
    picks the first matching element of ρ for each element of σ.
    """
    _require_parallel(sigma, rho)
    image = []
    for e in range(len(sigma.apex)):
        target = (sigma.left(e), sigma.right(e))
        match = next((d for d in range(len(rho.apex)) if (rho.left(d), rho.right(d)) == target), None)
        if match is None:
            return SpanOrderWitness(None)
        image.append(match)
    return SpanOrderWitness(FinMap(sigma.apex, rho.apex, image))


def span_equiv(sigma: SpanT, rho: SpanT) -> bool:
    return bool(span_leq(sigma, rho)) and bool(span_leq(rho, sigma))


def is_functional_span(rho: SpanT) -> bool:
    """Unit Y ⪯ ρ ⊗ ρ^op and counit ρ^op ⊗ ρ ⪯ X, checked with mediators."""
    op = span_transpose(rho)
    unit_ok = span_leq(identity_span(rho.src), span_compose(rho, op))
    counit_ok = span_leq(span_compose(op, rho), identity_span(rho.dst))
    return bool(unit_ok) and bool(counit_ok)


def all_functions(src: FinType, dst: FinType) -> Iterator[FinMap]:
    for image in itertools.product(range(len(dst)), repeat=len(src)):
        yield FinMap(src, dst, image)


def find_yoneda_equivalent(rho: SpanT) -> Optional[FinMap]:
    """Search for f with ρ equivalent to yoneda(f)."""
    cap = VerifierConfig.get_span_apex_cap()
    if len(rho.src) > cap:
        logger.warning(f"refusing function search over {len(rho.src)} labels (cap {cap})")
        raise UnsupportedOperationError(f"function search over more than {cap} source labels")
    for f in all_functions(rho.src, rho.dst):
        if span_equiv(rho, yoneda(f)):
            return f
    return None


def span_interior(pi: SpanT) -> SpanT:
    """Equalizer of the legs of an endospan, as a diagonal span."""
    if pi.src != pi.dst:
        raise CompositionTypeError("interior needs an endospan")
    keep = [e for e in range(len(pi.apex)) if pi.left(e) == pi.right(e)]
    apex = FinType(f"int({pi.apex.name})", tuple(pi.apex.labels[e] for e in keep))
    leg = FinMap(apex, pi.src, [pi.left(e) for e in keep])
    return SpanT(apex, leg, leg)


def span_domain(rho: SpanT) -> Tuple[Tuple[str, ...], SpanT]:
    """Image of the left leg, with the span totalized over it."""
    hit = sorted(set(rho.left.image))
    labels = tuple(rho.src.labels[i] for i in hit)
    dom = FinType(f"dom({rho.src.name})", labels)
    position = {i: k for k, i in enumerate(hit)}
    left = FinMap(rho.apex, dom, [position[rho.left(e)] for e in range(len(rho.apex))])
    return labels, SpanT(rho.apex, left, rho.right)


def flatten(rho: SpanT) -> Mat:
    """The boolean relation r0^op ⊗ r1."""
    pairs = {(rho.src.labels[rho.left(e)], rho.dst.labels[rho.right(e)]) for e in range(len(rho.apex))}
    return from_pairs(rho.src, rho.dst, BOOLEAN, pairs)


def _subsets(t: FinType) -> Iterator[Mat]:
    for bits in itertools.product((0, 1), repeat=len(t)):
        yield obj(t, BOOLEAN, bits)


def beck_check(f: FinMap, g: FinMap) -> bool:
    """
    ∃_f · sub_g = sub_p · ∃_q on every subset of Y, where Y ←p- P -q-> Z
    is the pullback of Y -f-> X <-g- Z.
    """
    _apex, p_y, p_z = pullback(f, g)
    direct_f = flatten(yoneda(f))
    inverse_g = transpose(flatten(yoneda(g)))
    inverse_p = transpose(flatten(yoneda(p_y)))
    direct_q = flatten(yoneda(p_z))
    for subset in _subsets(f.src):
        lhs = obj_direct(obj_direct(subset, direct_f), inverse_g)
        rhs = obj_direct(obj_direct(subset, inverse_p), direct_q)
        if lhs != rhs:
            logger.debug(f"Beck condition fails on subset {subset.entries[0]}")
            return False
    return True
