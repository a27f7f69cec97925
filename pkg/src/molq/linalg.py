"""Dense exact matrices over Q and Q(i).

Row reduction is plain Gauss-Jordan elimination on exact scalars. Matrices are
immutable values; every operation returns a new matrix.
"""

from dataclasses import dataclass
from dataclasses import field as dc_field
from typing import Iterable, List, Sequence, Tuple

from molq.scalars import Field, Scalar, format_scalar

Rows = Tuple[Tuple[Scalar, ...], ...]


class DimensionMismatchError(ValueError):
    """Raised when operands disagree on shape, ambient dimension or field."""


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix with exact entries."""

    field: Field
    rows: int
    cols: int
    entries: Rows
    _hash: int = dc_field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatchError(
                f"Entries do not form a {self.rows}x{self.cols} matrix"
            )
        object.__setattr__(self, "_hash", hash((self.field, self.rows, self.cols, self.entries)))

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        # Rebuild on unpickling so the cached hash matches the receiving process
        return (Matrix, (self.field, self.rows, self.cols, self.entries))

    @classmethod
    def from_rows(
        cls, field_: Field, rows: Iterable[Iterable], cols: int = None
    ) -> "Matrix":
        """Build a matrix from nested iterables of ints, Fractions or scalar strings."""
        data = tuple(tuple(field_.coerce(x) for x in row) for row in rows)
        if cols is None:
            if not data:
                raise DimensionMismatchError("Column count required for a matrix with no rows")
            cols = len(data[0])
        return cls(field_, len(data), cols, data)

    @classmethod
    def zeros(cls, field_: Field, rows: int, cols: int) -> "Matrix":
        zero = field_.zero
        return cls(field_, rows, cols, tuple((zero,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field_: Field, size: int) -> "Matrix":
        zero, one = field_.zero, field_.one
        return cls(
            field_,
            size,
            size,
            tuple(tuple(one if i == j else zero for j in range(size)) for i in range(size)),
        )

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Tuple[Scalar, ...]:
        return self.entries[i]

    def column(self, j: int) -> Tuple[Scalar, ...]:
        return tuple(r[j] for r in self.entries)

    def _check_same_shape(self, other: "Matrix"):
        if self.field is not other.field or self.shape != other.shape:
            raise DimensionMismatchError(
                f"Cannot combine {self.rows}x{self.cols}/{self.field.value} with "
                f"{other.rows}x{other.cols}/{other.field.value}"
            )

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            self.field,
            self.rows,
            self.cols,
            tuple(
                tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)
            ),
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            self.field,
            self.rows,
            self.cols,
            tuple(
                tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)
            ),
        )

    def __neg__(self) -> "Matrix":
        return Matrix(
            self.field, self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.entries)
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field is not other.field or self.cols != other.rows:
            raise DimensionMismatchError(
                f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        zero = self.field.zero
        columns = [other.column(j) for j in range(other.cols)]
        product = []
        for r in self.entries:
            out = []
            for c in columns:
                acc = zero
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                out.append(acc)
            product.append(tuple(out))
        return Matrix(self.field, self.rows, other.cols, tuple(product))

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        return Matrix(
            self.field, self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.entries)
        )

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field, self.cols, self.rows, tuple(self.column(j) for j in range(self.cols))
        )

    def conjugate(self) -> "Matrix":
        if self.field is Field.RATIONAL:
            return self
        return Matrix(
            self.field,
            self.rows,
            self.cols,
            tuple(tuple(a.conjugate() for a in r) for r in self.entries),
        )

    def conj_transpose(self) -> "Matrix":
        """Return X*, the conjugate transpose."""
        return self.conjugate().transpose()

    @property
    def H(self) -> "Matrix":
        return self.conj_transpose()

    def is_zero(self) -> bool:
        return not any(a for r in self.entries for a in r)

    def select_columns(self, indices: Sequence[int]) -> "Matrix":
        return Matrix(
            self.field,
            self.rows,
            len(indices),
            tuple(tuple(r[j] for j in indices) for r in self.entries),
        )

    def with_field(self, target: Field) -> "Matrix":
        """Re-coerce entries into ``target`` (Q embeds into Q(i))."""
        if target is self.field:
            return self
        return Matrix.from_rows(target, self.entries, cols=self.cols)

    def to_lists(self) -> List[List[str]]:
        return [[format_scalar(a) for a in r] for r in self.entries]

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.to_lists()) + "]"


def vstack(*matrices: Matrix) -> Matrix:
    """Stack matrices with equal column counts on top of each other."""
    first = matrices[0]
    for m in matrices[1:]:
        if m.field is not first.field or m.cols != first.cols:
            raise DimensionMismatchError("vstack requires equal column count and field")
    entries = tuple(r for m in matrices for r in m.entries)
    return Matrix(first.field, len(entries), first.cols, entries)


def block_diag(*blocks: Matrix) -> Matrix:
    """Block-diagonal matrix with the given blocks on the diagonal."""
    f = blocks[0].field
    zero = f.zero
    cols = sum(b.cols for b in blocks)
    entries = []
    offset = 0
    for b in blocks:
        if b.field is not f:
            raise DimensionMismatchError("block_diag requires a common field")
        for r in b.entries:
            entries.append((zero,) * offset + r + (zero,) * (cols - offset - b.cols))
        offset += b.cols
    return Matrix(f, len(entries), cols, tuple(entries))


def rref_with_pivots(m: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    """Reduced row echelon form (zero rows removed) together with the pivot columns."""
    work = [list(r) for r in m.entries]
    pivots: List[int] = []
    pivot_row = 0
    n_rows = len(work)
    for col in range(m.cols):
        if pivot_row >= n_rows:
            break
        for i in range(pivot_row, n_rows):
            if work[i][col]:
                break
        else:
            continue
        if i != pivot_row:
            work[pivot_row], work[i] = work[i], work[pivot_row]

        lead = work[pivot_row][col]
        if lead != 1:
            inv = 1 / lead
            work[pivot_row] = [a * inv if a else a for a in work[pivot_row]]
        prow = work[pivot_row]

        for r in range(n_rows):
            if r == pivot_row:
                continue
            factor = work[r][col]
            if factor:
                work[r] = [a - factor * b if b else a for a, b in zip(work[r], prow)]

        pivots.append(col)
        pivot_row += 1

    reduced = tuple(tuple(r) for r in work[:pivot_row])
    return Matrix(m.field, len(reduced), m.cols, reduced), tuple(pivots)


def rref(m: Matrix) -> Matrix:
    """Reduced row echelon form with zero rows removed."""
    return rref_with_pivots(m)[0]


def rank(m: Matrix) -> int:
    return rref(m).rows


def kernel(m: Matrix) -> Matrix:
    """Basis (as rows) of the right null space {v : m v^T = 0}."""
    reduced, pivots = rref_with_pivots(m)
    zero, one = m.field.zero, m.field.one
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [zero] * m.cols
        v[f] = one
        for k, p in enumerate(pivots):
            entry = reduced.entries[k][f]
            if entry:
                v[p] = -entry
        basis.append(tuple(v))
    return Matrix(m.field, len(basis), m.cols, tuple(basis))


def inverse(m: Matrix) -> Matrix:
    """Exact inverse of a square matrix.

    Raises:
        ValueError: If the matrix is singular or not square
    """
    if not m.is_square:
        raise DimensionMismatchError(f"Cannot invert a {m.rows}x{m.cols} matrix")
    n = m.rows
    augmented = Matrix(
        m.field,
        n,
        2 * n,
        tuple(r + i for r, i in zip(m.entries, Matrix.identity(m.field, n).entries)),
    )
    reduced, pivots = rref_with_pivots(augmented)
    if pivots[:n] != tuple(range(n)) or reduced.rows < n:
        raise ValueError("Matrix is singular")
    return Matrix(m.field, n, n, tuple(r[n:] for r in reduced.entries))


def rank_factorization(m: Matrix) -> Tuple[Matrix, Matrix]:
    """Return (b, c) with m = b @ c, b of full column rank and c of full row rank."""
    reduced, pivots = rref_with_pivots(m)
    return m.select_columns(pivots), reduced


def hermitian_form(u: Sequence[Scalar], v: Sequence[Scalar]):
    """Canonical form <u, v> = sum u_i * conj(v_i)."""
    acc = 0
    for a, b in zip(u, v):
        acc = acc + a * b.conjugate()
    return acc
