"""
Type sums (biproducts) and block matrices.

The total type of a sum tags each component label as "<component>.<label>".
Injections and projections are graphs of the coordinate inclusions and their
transposes; a matrix between sum totals is recoverable from its blocks.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .config import DocumentConfig
from .errors import CompositionTypeError
from .quantale import Quantale
from .relmat import FinType, Mat, compose, graph, identity, mjoin, mjoin_all, mzero, transpose

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SumType:
    components: Tuple[FinType, ...]
    total: FinType
    q: Quantale
    injections: Tuple[Mat, ...]
    projections: Tuple[Mat, ...]


@dataclass(frozen=True)
class BlockMat:
    rows: SumType
    cols: SumType
    blocks: Tuple[Tuple[Mat, ...], ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.rows.components):
            raise CompositionTypeError("block rows do not match the row sum")
        for i, line in enumerate(self.blocks):
            if len(line) != len(self.cols.components):
                raise CompositionTypeError("block columns do not match the column sum")
            for j, block in enumerate(line):
                if block.src != self.rows.components[i] or block.dst != self.cols.components[j]:
                    raise CompositionTypeError(f"block ({i},{j}) has the wrong type")


def make_sum(components: Sequence[FinType], q: Quantale, name: Optional[str] = None) -> SumType:
    """The biproduct of ``components``; the empty list gives the null type 0."""
    components = tuple(components)
    sep = DocumentConfig.SUM_LABEL_SEPARATOR
    if name is None:
        name = "+".join(c.name for c in components) if components else "0"
    labels = [f"{c.name}{sep}{label}" for c in components for label in c.labels]
    total = FinType(name, tuple(labels))
    if not components:
        logger.warning("building the empty sum type")
    injections, offset = [], 0
    for c in components:
        injections.append(graph(c, total, q, [offset + j for j in range(len(c))]))
        offset += len(c)
    projections = [transpose(i) for i in injections]
    return SumType(components, total, q, tuple(injections), tuple(projections))


def satisfies_biproduct_equations(s: SumType) -> bool:
    """Covering ⋁ π_i ⊗ ι_i = identity and disjointness ι_i ⊗ π_j = δ_ij."""
    covering = mjoin_all([compose(p, i) for p, i in zip(s.projections, s.injections)], s.total, s.total, s.q)
    if covering != identity(s.total, s.q):
        return False
    for i, inj in enumerate(s.injections):
        for j, proj in enumerate(s.projections):
            ci, cj = s.components[i], s.components[j]
            expected = identity(ci, s.q) if i == j else mzero(ci, cj, s.q)
            if compose(inj, proj) != expected:
                return False
    return True


def _check_terms(s: SumType, terms: Sequence[Mat]) -> None:
    if len(terms) != len(s.components):
        raise CompositionTypeError(f"expected {len(s.components)} terms for sum {s.total.name}, got {len(terms)}")


def copair(s: SumType, terms: Sequence[Mat], target: Optional[FinType] = None) -> Mat:
    """[t_0, ..., t_n]: the total → T matrix with ι_i ⊗ [..] = t_i."""
    _check_terms(s, terms)
    if target is None:
        if not terms:
            raise CompositionTypeError("copair over the empty sum needs an explicit target")
        target = terms[0].dst
    for comp, t in zip(s.components, terms):
        if t.src != comp or t.dst != target:
            raise CompositionTypeError(f"copair term {t.src.name}->{t.dst.name} does not align")
    return mjoin_all([compose(p, t) for p, t in zip(s.projections, terms)], s.total, target, s.q)


def pair(s: SumType, terms: Sequence[Mat], source: Optional[FinType] = None) -> Mat:
    """<t_0, ..., t_n>: the S → total matrix with <..> ⊗ π_i = t_i."""
    _check_terms(s, terms)
    if source is None:
        if not terms:
            raise CompositionTypeError("pair over the empty sum needs an explicit source")
        source = terms[0].src
    for comp, t in zip(s.components, terms):
        if t.dst != comp or t.src != source:
            raise CompositionTypeError(f"pair term {t.src.name}->{t.dst.name} does not align")
    return mjoin_all([compose(t, i) for t, i in zip(terms, s.injections)], source, s.total, s.q)


def term_sum(sum_src: SumType, sum_dst: SumType, terms: Sequence[Mat]) -> Mat:
    """Block-diagonal superposition ⋁ π_i ⊗ t_i ⊗ ι'_i."""
    _check_terms(sum_src, terms)
    _check_terms(sum_dst, terms)
    parts = []
    for p, t, i in zip(sum_src.projections, terms, sum_dst.injections):
        parts.append(compose(compose(p, t), i))
    return mjoin_all(parts, sum_src.total, sum_dst.total, sum_src.q)


def partition(r: Mat, rows: SumType, cols: SumType) -> BlockMat:
    """Decomposition r_ij = ι_i ⊗ r ⊗ π_j."""
    if r.src != rows.total or r.dst != cols.total:
        raise CompositionTypeError(f"matrix {r.src.name}->{r.dst.name} is not typed over the given sums")
    blocks = tuple(
        tuple(compose(compose(inj, r), proj) for proj in cols.projections) for inj in rows.injections
    )
    return BlockMat(rows, cols, blocks)


def sum_flatten(b: BlockMat) -> Mat:
    """⋁ π_i ⊗ b_ij ⊗ ι_j."""
    parts: List[Mat] = []
    for proj, line in zip(b.rows.projections, b.blocks):
        for block, inj in zip(line, b.cols.injections):
            parts.append(compose(compose(proj, block), inj))
    return mjoin_all(parts, b.rows.total, b.cols.total, b.rows.q)


def block_compose(b: BlockMat, c: BlockMat) -> BlockMat:
    """(B ∘ C)_ik = ⋁_j b_ij ⊗ c_jk."""
    if b.cols.components != c.rows.components:
        raise CompositionTypeError("block matrices do not share a middle sum")
    blocks = []
    for i, line in enumerate(b.blocks):
        row = []
        for k, comp in enumerate(c.cols.components):
            acc = mzero(b.rows.components[i], comp, b.rows.q)
            for j, block in enumerate(line):
                acc = mjoin(acc, compose(block, c.blocks[j][k]))
            row.append(acc)
        blocks.append(tuple(row))
    return BlockMat(b.rows, c.cols, tuple(blocks))
