"""Matrix *-rings over Q and Q(i), their projections and the pseudo-inverse.

The involution is the conjugate transpose. Every matrix has a Moore-Penrose
pseudo-inverse, computed exactly from a rank factorization; projections
(e = e^2 = e*) form a modular ortholattice whose operations are ring terms in
the pseudo-inverse, isomorphic to the subspace lattice through column spaces.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from molq.lattice import Subspace
from molq.limit import LimitElement
from molq.linalg import DimensionMismatchError, Matrix, block_diag, inverse, rank_factorization
from molq.scalars import Field

logger = logging.getLogger(__name__)


def mp_inverse(a: Matrix) -> Matrix:
    """Moore-Penrose pseudo-inverse.

    With a = b @ c a rank factorization, a+ = c* (c c*)^-1 (b* b)^-1 b*.
    The zero matrix maps to the zero matrix of transposed shape.
    """
    b, c = rank_factorization(a)
    if c.rows == 0:
        return Matrix.zeros(a.field, a.cols, a.rows)
    return c.H @ inverse(c @ c.H) @ inverse(b.H @ b) @ b.H


def qinverse_witness(a: Matrix) -> Matrix:
    """An x with a x a = a; the pseudo-inverse serves."""
    return mp_inverse(a)


def penrose_residuals(a: Matrix, x: Matrix) -> Tuple[Matrix, Matrix, Matrix, Matrix]:
    """Left minus right side of the four Penrose equations for candidate x."""
    ax, xa = a @ x, x @ a
    return (ax @ a - a, xa @ x - x, ax.H - ax, xa.H - xa)


def satisfies_penrose(a: Matrix, x: Matrix) -> bool:
    if x.shape != (a.cols, a.rows):
        return False
    return all(r.is_zero() for r in penrose_residuals(a, x))


def is_projection(p: Matrix) -> bool:
    return p.is_square and p @ p == p and p.H == p


@dataclass(frozen=True)
class ProjMatrix:
    """Self-adjoint idempotent matrix."""

    p: Matrix

    def __post_init__(self):
        if not is_projection(self.p):
            raise ValueError("Matrix is not a projection (p @ p == p == p*)")

    @property
    def size(self) -> int:
        return self.p.rows

    @property
    def field(self) -> Field:
        return self.p.field

    def __str__(self):
        return str(self.p)


def _check_same_ring(e: ProjMatrix, f: ProjMatrix):
    if e.p.shape != f.p.shape or e.field is not f.field:
        raise DimensionMismatchError(
            f"Projections of different rings: {e.size}x{e.size} vs {f.size}x{f.size}"
        )


def _one(e: ProjMatrix) -> Matrix:
    return Matrix.identity(e.field, e.size)


def proj_ortho(e: ProjMatrix) -> ProjMatrix:
    return ProjMatrix(_one(e) - e.p)


def proj_join(e: ProjMatrix, f: ProjMatrix) -> ProjMatrix:
    """(e + f)(e + f)+: the projection onto the range of e + f."""
    _check_same_ring(e, f)
    s = e.p + f.p
    return ProjMatrix(s @ mp_inverse(s))


def proj_meet(e: ProjMatrix, f: ProjMatrix) -> ProjMatrix:
    return proj_ortho(proj_join(proj_ortho(e), proj_ortho(f)))


def proj_leq(e: ProjMatrix, f: ProjMatrix) -> bool:
    """e <= f iff f e = e."""
    _check_same_ring(e, f)
    return f.p @ e.p == e.p


class ProjectionLattice:
    """Projections of M_size(field) with the ring-term lattice operations."""

    def __init__(self, size: int, field: Field = Field.RATIONAL):
        self.size = size
        self.field = field

    @property
    def bottom(self) -> ProjMatrix:
        return ProjMatrix(Matrix.zeros(self.field, self.size, self.size))

    @property
    def top(self) -> ProjMatrix:
        return ProjMatrix(Matrix.identity(self.field, self.size))

    def meet(self, e: ProjMatrix, f: ProjMatrix) -> ProjMatrix:
        return proj_meet(e, f)

    def join(self, e: ProjMatrix, f: ProjMatrix) -> ProjMatrix:
        return proj_join(e, f)

    def ortho(self, e: ProjMatrix) -> ProjMatrix:
        return proj_ortho(e)

    def contains(self, e) -> bool:
        return isinstance(e, ProjMatrix) and e.size == self.size and e.field is self.field

    def __repr__(self):
        return f"ProjectionLattice(size={self.size}, field={self.field.value})"


def subspace_to_proj(u: Subspace) -> ProjMatrix:
    """Orthogonal projection onto u: M (M* M)^-1 M* with the basis of u as columns of M."""
    if u.is_zero:
        return ProjMatrix(Matrix.zeros(u.field, u.ambient, u.ambient))
    m = u.basis.transpose()
    return ProjMatrix(m @ inverse(m.H @ m) @ m.H)


def proj_to_subspace(e: ProjMatrix) -> Subspace:
    """Column space of e."""
    return Subspace.from_matrix(e.p.transpose())


def block_double(x: Matrix) -> Matrix:
    """2m x 2m block-diagonal matrix with two copies of x."""
    if not x.is_square:
        raise DimensionMismatchError(f"block_double expects a square matrix, got {x.rows}x{x.cols}")
    return block_diag(x, x)


def embed_field(a: Matrix) -> Matrix:
    """M(Q) -> M(Q(i)), entrywise."""
    return a.with_field(Field.GAUSSIAN)


def _halve_matrix(x: Matrix) -> Optional[Matrix]:
    """The block x0 when x is block_double(x0), else None."""
    half = x.rows // 2
    if x.rows % 2:
        return None
    top_left = Matrix(x.field, half, half, tuple(r[:half] for r in x.entries[:half]))
    return top_left if block_double(top_left) == x else None


@dataclass(frozen=True, eq=False)
class LeveledMatrix:
    """Element of the direct limit of the rings M_(2^n), glued by block_double."""

    level: int
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (2**self.level, 2**self.level):
            raise DimensionMismatchError(
                f"Level {self.level} needs a {2**self.level}x{2**self.level} matrix"
            )

    def lift_to(self, level: int) -> "LeveledMatrix":
        if level < self.level:
            raise ValueError(f"Cannot lift a level-{self.level} matrix down to level {level}")
        x = self.matrix
        for _ in range(level - self.level):
            x = block_double(x)
        return LeveledMatrix(level, x)

    def reduced(self) -> "LeveledMatrix":
        x, level = self.matrix, self.level
        while level > 0:
            half = _halve_matrix(x)
            if half is None:
                break
            x, level = half, level - 1
        return LeveledMatrix(level, x)

    def _pair(self, other: "LeveledMatrix") -> Tuple[int, Matrix, Matrix]:
        level = max(self.level, other.level)
        return level, self.lift_to(level).matrix, other.lift_to(level).matrix

    def __add__(self, other: "LeveledMatrix") -> "LeveledMatrix":
        level, a, b = self._pair(other)
        return LeveledMatrix(level, a + b)

    def __sub__(self, other: "LeveledMatrix") -> "LeveledMatrix":
        level, a, b = self._pair(other)
        return LeveledMatrix(level, a - b)

    def __matmul__(self, other: "LeveledMatrix") -> "LeveledMatrix":
        level, a, b = self._pair(other)
        return LeveledMatrix(level, a @ b)

    @property
    def H(self) -> "LeveledMatrix":
        return LeveledMatrix(self.level, self.matrix.H)

    def pinv(self) -> "LeveledMatrix":
        return LeveledMatrix(self.level, mp_inverse(self.matrix))

    def __eq__(self, other):
        if not isinstance(other, LeveledMatrix):
            return NotImplemented
        _, a, b = self._pair(other)
        return a == b

    def __hash__(self):
        low = self.reduced()
        return hash((low.level, low.matrix))


def omega(x: LimitElement) -> LeveledMatrix:
    """L_inf -> projections of M_inf, by the projection onto each level's subspace."""
    return LeveledMatrix(x.level, subspace_to_proj(x.space).p)


def omega_inverse(e: LeveledMatrix) -> LimitElement:
    return LimitElement(e.level, proj_to_subspace(ProjMatrix(e.matrix)))
