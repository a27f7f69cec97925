"""d-frames: abstract coordinate systems in a modular lattice.

A d-frame is a tuple a0..ad with bounds a_bot, a_top such that a_top is the join
of all components, the join of any d components is a_top, and every component
meets the join of any d-1 others in a_bot. It is trivial when a_bot = a_top.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from molq.lattice import Subspace, SubspaceLattice, is_complement, join, meet
from molq.sampling import make_rng, random_subspace
from molq.scalars import Field
from molq.terms import frame_variables

logger = logging.getLogger(__name__)


class FrameError(ValueError):
    """Raised for invalid frame requests (bad d, trivial frame where one is not allowed)."""


@dataclass(frozen=True)
class Frame:
    """Components a0..ad together with a_bot and a_top."""

    d: int
    a: Tuple[Subspace, ...]
    bot: Subspace
    top: Subspace

    @property
    def is_trivial(self) -> bool:
        return self.bot == self.top

    def components(self) -> Tuple[Subspace, ...]:
        """(a_bot, a0, ..., ad, a_top), the order of the frame variables."""
        return (self.bot, *self.a, self.top)

    def as_substitution(self) -> Dict[str, Subspace]:
        return dict(zip(frame_variables(self.d), self.components()))

    @classmethod
    def from_components(cls, d: int, components: Sequence[Subspace]) -> "Frame":
        if len(components) != d + 3:
            raise FrameError(f"A {d}-frame has {d + 3} components, got {len(components)}")
        return cls(d, tuple(components[1:-1]), components[0], components[-1])


@dataclass
class FrameReport:
    """Outcome of frame verification."""

    valid: bool
    trivial: bool
    violations: List[str] = field(default_factory=list)


def _join_all(elements: Sequence[Subspace], start: Subspace) -> Subspace:
    acc = start
    for e in elements:
        acc = join(acc, e)
    return acc


def verify_frame(frame: Frame) -> FrameReport:
    """Check every frame law exactly and report the violated ones."""
    violations: List[str] = []
    if len(frame.a) != frame.d + 1:
        violations.append(f"expected {frame.d + 1} components, got {len(frame.a)}")
        return FrameReport(False, frame.is_trivial, violations)

    spaces = {(x.ambient, x.field) for x in frame.components()}
    if len(spaces) != 1:
        violations.append("components live in different ambient spaces")
        return FrameReport(False, frame.is_trivial, violations)

    zero = Subspace.zero(frame.bot.field, frame.bot.ambient)
    if _join_all(frame.a, zero) != frame.top:
        violations.append("a_top is not the join of a0..ad")

    indices = range(frame.d + 1)
    for j in indices:
        others = [frame.a[i] for i in indices if i != j]
        if _join_all(others, zero) != frame.top:
            violations.append(f"components other than a{j} do not span a_top")
        for subset in combinations(others, frame.d - 1):
            if meet(frame.a[j], _join_all(subset, zero)) != frame.bot:
                violations.append(f"a{j} meets the join of {frame.d - 1} others outside a_bot")
                break

    return FrameReport(not violations, frame.is_trivial, violations)


def canonical_frame(d: int, field_: Field = Field.RATIONAL) -> Frame:
    """Standard coordinate system of F^d: the axes e1..ed and the unit point e1+...+ed."""
    if d < 2:
        raise FrameError(f"canonical_frame requires d >= 2, got {d}")
    lattice = SubspaceLattice(d, field_)
    axes = [Subspace.coordinate(field_, d, [i]) for i in range(d)]
    unit = lattice.span([1] * d)
    return Frame(d, tuple(axes) + (unit,), lattice.bottom, lattice.top)


def trivial_frame(d: int, j: Subspace) -> Frame:
    return Frame(d, (j,) * (d + 1), j, j)


@lru_cache(maxsize=1 << 14)
def normalize_frame(d: int, components: Tuple[Subspace, ...]) -> Frame:
    """Return the input when it is a d-frame, else the trivial frame at the join of all inputs.

    Args:
        d: Frame order
        components: (a_bot, a0, ..., ad, a_top)
    """
    frame = Frame.from_components(d, components)
    if verify_frame(frame).valid:
        return frame
    top = components[0]
    for c in components[1:]:
        top = join(top, c)
    return trivial_frame(d, top)


class FrameNormalizer:
    """Substitution transformer applying normalize_frame to the z-variables."""

    def __init__(self, d: int):
        self.d = d
        self.names = frame_variables(d)

    def __call__(self, substitution: Mapping[str, Subspace]) -> Dict[str, Subspace]:
        components = tuple(substitution[name] for name in self.names)
        frame = normalize_frame(self.d, components)
        normalized = dict(substitution)
        normalized.update(zip(self.names, frame.components()))
        return normalized


class ProductFrameNormalizer:
    """FrameNormalizer applied in each factor of a product of subspace lattices.

    Terms act coordinatewise on a product, so a tuple of z-values is a frame
    exactly when every coordinate is one.
    """

    def __init__(self, d: int, width: int):
        self.d = d
        self.width = width
        self.names = frame_variables(d)
        self._factor = FrameNormalizer(d)

    def __call__(self, substitution: Mapping[str, Tuple]) -> Dict[str, Tuple]:
        columns = [
            self._factor({name: substitution[name][k] for name in self.names})
            for k in range(self.width)
        ]
        normalized = dict(substitution)
        normalized.update((name, tuple(c[name] for c in columns)) for name in self.names)
        return normalized


def frame_normalizer(d: int) -> FrameNormalizer:
    return FrameNormalizer(d)


def line_atoms(frame: Frame, n: int) -> List[Subspace]:
    """n distinct complements of a1 in [0, a0 | a1]: span(v0 + i*v1), i = 1..n."""
    if frame.is_trivial:
        raise FrameError("line_atoms requires a nontrivial frame")
    a0, a1 = frame.a[0], frame.a[1]
    if a0.dim != 1 or a1.dim != 1 or not frame.bot.is_zero:
        raise FrameError("line_atoms requires a0, a1 to be atoms and a_bot = 0")
    if n < 1:
        raise FrameError(f"line_atoms requires n >= 1, got {n}")
    v0, v1 = a0.basis.row(0), a1.basis.row(0)
    return [
        Subspace.span(a0.field, a0.ambient, [[x + i * y for x, y in zip(v0, v1)]])
        for i in range(1, n + 1)
    ]


def is_line_complement(frame: Frame, atom: Subspace) -> bool:
    """Whether ``atom`` complements a1 inside [0, a0 | a1]."""
    line = join(frame.a[0], frame.a[1])
    return is_complement(atom, frame.a[1], frame.bot, line)


def random_frame_search(m: int, d: int, tries: int, seed: int = 0) -> Optional[Frame]:
    """Look for a nontrivial d-frame in L(Q^m) among random candidates.

    Each candidate draws a_bot and then a_i = a_bot | u_i for random subspaces
    u_i of any dimension; a_top is the join of the a_i.
    """
    rng = make_rng(seed)
    for attempt in range(tries):
        bot = random_subspace(rng, Field.RATIONAL, m)
        a = tuple(join(bot, random_subspace(rng, Field.RATIONAL, m)) for _ in range(d + 1))
        frame = Frame(d, a, bot, _join_all(a, bot))
        if not frame.is_trivial and verify_frame(frame).valid:
            logger.info("Found nontrivial %d-frame in L(Q^%d) after %d tries", d, m, attempt + 1)
            return frame
    logger.debug("No nontrivial %d-frame in L(Q^%d) within %d tries", d, m, tries)
    return None
