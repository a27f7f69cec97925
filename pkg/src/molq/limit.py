"""The dyadic direct limit of subspace lattices.

Level n is L(F^(2^n)); level n embeds into level n+1 by U -> U (+) U, with the
first copy in the first half of the coordinates and the second copy in the
second half. An element of the limit is a leveled subspace, and two leveled
subspaces are equal when their liftings to a common level agree. The
normalized dimension dim/2^n is invariant under the doubling.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence

from molq.lattice import (
    CompiledTerm,
    IntervalIsomorphism,
    IntervalLattice,
    Subspace,
    SubspaceLattice,
    interval_iso,
    join,
    meet,
    ortho,
)
from molq.linalg import DimensionMismatchError
from molq.sampling import make_rng, random_subspace
from molq.scalars import Field, GaussianRational
from molq.terms import Term

logger = logging.getLogger(__name__)

MAX_LEVEL = 6


@dataclass(frozen=True, eq=False)
class DyadicDim:
    """Normalized dimension r / 2^n."""

    numerator: int
    level: int

    def __post_init__(self):
        if self.level < 0 or not 0 <= self.numerator <= 2**self.level:
            raise ValueError(f"Invalid dyadic dimension {self.numerator}/2^{self.level}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 2**self.level)

    def reduced(self) -> "DyadicDim":
        """Same value at the smallest level."""
        r, n = self.numerator, self.level
        while n > 0 and r % 2 == 0:
            r, n = r // 2, n - 1
        return DyadicDim(0, 0) if r == 0 else DyadicDim(r, n)

    def __eq__(self, other):
        if isinstance(other, DyadicDim):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return f"{self.numerator}/2^{self.level}"


def _check_level(level: int):
    if not 0 <= level <= MAX_LEVEL:
        raise ValueError(f"Level must lie in [0, {MAX_LEVEL}], got {level}")


@dataclass(frozen=True, eq=False)
class LimitElement:
    """A subspace of F^(2^level) standing for its class in the limit."""

    level: int
    space: Subspace

    def __post_init__(self):
        _check_level(self.level)
        if self.space.ambient != 2**self.level:
            raise DimensionMismatchError(
                f"Level {self.level} needs ambient dimension {2**self.level}, "
                f"got {self.space.ambient}"
            )

    @property
    def field(self) -> Field:
        return self.space.field

    def __eq__(self, other):
        if not isinstance(other, LimitElement):
            return NotImplemented
        return equal(self, other)

    def __hash__(self):
        low = reduce_level(self)
        return hash((low.level, low.space))

    def __and__(self, other: "LimitElement") -> "LimitElement":
        return limit_meet(self, other)

    def __or__(self, other: "LimitElement") -> "LimitElement":
        return limit_join(self, other)

    def __invert__(self) -> "LimitElement":
        return limit_ortho(self)

    def __str__(self):
        return f"L{self.level}:{self.space}"


def _double_space(u: Subspace) -> Subspace:
    zero = u.field.zero
    pad = (zero,) * u.ambient
    rows = [r + pad for r in u.vectors()] + [pad + r for r in u.vectors()]
    return Subspace.span(u.field, 2 * u.ambient, rows)


def double(x: LimitElement) -> LimitElement:
    """Embed x into the next level as U (+) U."""
    return LimitElement(x.level + 1, _double_space(x.space))


def lift_to(x: LimitElement, level: int) -> LimitElement:
    if level < x.level:
        raise ValueError(f"Cannot lift a level-{x.level} element down to level {level}")
    while x.level < level:
        x = double(x)
    return x


def _halve(x: LimitElement) -> Optional[LimitElement]:
    """The level-(n-1) element doubling to x, if there is one."""
    if x.level == 0:
        return None
    half = x.space.ambient // 2
    first = meet(x.space, Subspace.coordinate(x.field, x.space.ambient, range(half)))
    candidate = LimitElement(
        x.level - 1, Subspace.from_matrix(first.basis.select_columns(range(half)))
    )
    return candidate if _double_space(candidate.space) == x.space else None


def reduce_level(x: LimitElement) -> LimitElement:
    """Representative of x at the lowest level where it appears."""
    while True:
        lower = _halve(x)
        if lower is None:
            return x
        x = lower


def equal(x: LimitElement, y: LimitElement) -> bool:
    if x.field is not y.field:
        return False
    level = max(x.level, y.level)
    return lift_to(x, level).space == lift_to(y, level).space


def _common(x: LimitElement, y: LimitElement):
    level = max(x.level, y.level)
    return level, lift_to(x, level).space, lift_to(y, level).space


def limit_meet(x: LimitElement, y: LimitElement) -> LimitElement:
    level, u, v = _common(x, y)
    return LimitElement(level, meet(u, v))


def limit_join(x: LimitElement, y: LimitElement) -> LimitElement:
    level, u, v = _common(x, y)
    return LimitElement(level, join(u, v))


def limit_ortho(x: LimitElement) -> LimitElement:
    return LimitElement(x.level, ortho(x.space))


def limit_leq(x: LimitElement, y: LimitElement) -> bool:
    return equal(limit_join(x, y), y)


def delta(x: LimitElement) -> DyadicDim:
    """Normalized dimension dim / 2^level."""
    return DyadicDim(x.space.dim, x.level)


def metric(x: LimitElement, y: LimitElement) -> Fraction:
    """d(x, y) = delta(x | y) - delta(x & y)."""
    return delta(limit_join(x, y)).value - delta(limit_meet(x, y)).value


class LimitLattice:
    """The level-n stage of the limit, as a lattice of leveled elements.

    Operands of lower level are lifted; results carry the larger level.
    """

    def __init__(self, level: int, field: Field = Field.RATIONAL):
        _check_level(level)
        self.level = level
        self.field = field
        self._stage = SubspaceLattice(2**level, field)

    @property
    def bottom(self) -> LimitElement:
        return LimitElement(self.level, self._stage.bottom)

    @property
    def top(self) -> LimitElement:
        return LimitElement(self.level, self._stage.top)

    def meet(self, x: LimitElement, y: LimitElement) -> LimitElement:
        return limit_meet(x, y)

    def join(self, x: LimitElement, y: LimitElement) -> LimitElement:
        return limit_join(x, y)

    def ortho(self, x: LimitElement) -> LimitElement:
        return limit_ortho(x)

    def contains(self, x: LimitElement) -> bool:
        return isinstance(x, LimitElement) and x.field is self.field and x.level <= self.level

    def __repr__(self):
        return f"LimitLattice(level={self.level}, field={self.field.value})"


def coordinate_elements(level: int, field: Field = Field.RATIONAL) -> Iterator[LimitElement]:
    """All coordinate subspaces of level ``level``, by bitmask of the spanning axes."""
    size = 2**level
    for mask in range(2**size):
        indices = [i for i in range(size) if mask >> i & 1]
        yield LimitElement(level, Subspace.coordinate(field, size, indices))


def testset_enumerate(
    level: int,
    samples: int = 16,
    seed: int = 0,
    field: Field = Field.RATIONAL,
    max_level: int = 4,
) -> Iterator[LimitElement]:
    """Deterministic truncation of the level-n part of the countable test set.

    Yields every coordinate subspace, then up to ``samples`` further distinct
    seeded random subspaces of the same level.
    """
    if level > max_level:
        raise ValueError(f"Level {level} exceeds the configured bound {max_level}")
    seen = set()
    for x in coordinate_elements(level, field):
        seen.add(x.space)
        yield x

    rng = make_rng(seed)
    size = 2**level
    produced = 0
    for _ in range(10 * samples):
        if produced >= samples:
            break
        u = random_subspace(rng, field, size)
        if u in seen:
            continue
        seen.add(u)
        produced += 1
        yield LimitElement(level, u)
    logger.debug("Enumerated %d elements at level %d", len(seen), level)


def _times_i(v: Sequence[GaussianRational]) -> List[GaussianRational]:
    return [GaussianRational(-a.im, a.re) for a in v]


def _interleave(v: Sequence[GaussianRational]) -> List[Fraction]:
    out: List[Fraction] = []
    for a in v:
        out.extend((a.re, a.im))
    return out


def realify(u: Subspace) -> Subspace:
    """L(Q(i)^k) -> L(Q^2k): each vector w maps to its real/imaginary interleaving.

    The image of U is spanned by the images of v and i*v for v in a basis of U.
    Orthocomplements correspond for the real part of the Hermitian form.
    """
    if u.field is not Field.GAUSSIAN:
        raise DimensionMismatchError("realify expects a subspace over Q(i)")
    rows = []
    for v in u.vectors():
        rows.append(_interleave(v))
        rows.append(_interleave(_times_i(v)))
    return Subspace.span(Field.RATIONAL, 2 * u.ambient, rows)


def complexify(u: Subspace, k: int) -> Subspace:
    """Send a subspace of Q(i)^k into L(Q^2k), realizing C^k as the complexification of R^k."""
    if u.ambient != k:
        raise DimensionMismatchError(f"Expected a subspace of Q(i)^{k}, got ambient {u.ambient}")
    return realify(u)


def interval_embedding(m: int, n: int) -> IntervalIsomorphism:
    """L(Q^m) as the interval [0, span(e1..em)] of level n."""
    _check_level(n)
    if not 0 <= m <= 2**n:
        raise ValueError(f"Cannot embed L(Q^{m}) at level {n} (ambient {2**n})")
    return interval_iso(Subspace.coordinate(Field.RATIONAL, 2**n, range(m)))


@dataclass
class TransferReport:
    """Sampled comparison of a term across an embedding."""

    samples: int
    mismatches: int
    holds_source: bool
    holds_target: bool

    @property
    def consistent(self) -> bool:
        return self.mismatches == 0 and self.holds_source == self.holds_target


def ql_transfer_check(
    term: Term, m: int, n: int, samples: int = 200, seed: int = 0
) -> TransferReport:
    """Evaluate ``term`` on random substitutions in L(Q^m) and transported into level n.

    The transported evaluation runs in the interval [0, span(e1..em)] with its
    relative orthocomplement; every sample must map to the same value.
    """
    iso = interval_embedding(m, n)
    source = SubspaceLattice(m)
    target = IntervalLattice(iso.interval.bottom, iso.a)
    return _transfer(term, source, target, iso.from_coordinates, Field.RATIONAL, m, samples, seed)


def complex_transfer_check(term: Term, k: int, samples: int = 200, seed: int = 0) -> TransferReport:
    """Same comparison for L(Q(i)^k) inside L(Q^2k) through realify."""
    source = SubspaceLattice(k, Field.GAUSSIAN)
    target = SubspaceLattice(2 * k)
    return _transfer(term, source, target, realify, Field.GAUSSIAN, k, samples, seed)


def _transfer(term, source, target, embed, field, dim, samples, seed) -> TransferReport:
    rng = make_rng(seed)
    compiled = CompiledTerm(term)
    names = term.variables()
    mismatches = 0
    holds_source = holds_target = True
    for _ in range(samples):
        sub: Dict[str, Subspace] = {v: random_subspace(rng, field, dim) for v in names}
        low = compiled.evaluate(sub, source)
        high = compiled.evaluate({v: embed(x) for v, x in sub.items()}, target)
        holds_source &= low == source.top
        holds_target &= high == target.top
        if embed(low) != high:
            mismatches += 1
    if mismatches:
        logger.warning("%d of %d samples disagree across the embedding", mismatches, samples)
    return TransferReport(samples, mismatches, holds_source, holds_target)
