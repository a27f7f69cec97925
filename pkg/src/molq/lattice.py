"""The modular ortholattice of subspaces of Q^d and Q(i)^d.

Subspaces are kept in canonical form (rref row basis), so equality and hashing
are structural. Meet, join and orthocomplement are memoized: exhaustive
searches revisit the same handful of subspaces millions of times.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Protocol, Sequence, Tuple

from molq.linalg import DimensionMismatchError, Matrix, kernel, rref, rref_with_pivots, vstack
from molq.scalars import Field
from molq.terms import Join, Meet, One, Ortho, Term, UnboundVariableError, Var, Zero

logger = logging.getLogger(__name__)

CACHE_SIZE = 1 << 16


@dataclass(frozen=True)
class Subspace:
    """Exact subspace of F^ambient given by its canonical basis."""

    ambient: int
    field: Field
    basis: Matrix

    @classmethod
    def span(cls, field: Field, ambient: int, vectors: Iterable[Sequence]) -> "Subspace":
        """Subspace spanned by ``vectors`` (any spanning family, canonicalized)."""
        matrix = Matrix.from_rows(field, vectors, cols=ambient)
        return cls(ambient, field, rref(matrix))

    @classmethod
    def from_matrix(cls, matrix: Matrix) -> "Subspace":
        return cls(matrix.cols, matrix.field, rref(matrix))

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(ambient, field, Matrix.zeros(field, 0, ambient))

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls(ambient, field, Matrix.identity(field, ambient))

    @classmethod
    def coordinate(cls, field: Field, ambient: int, indices: Iterable[int]) -> "Subspace":
        """Span of the standard basis vectors e_i for the given 0-based indices."""
        zero, one = field.zero, field.one
        rows = [
            tuple(one if j == i else zero for j in range(ambient)) for i in sorted(set(indices))
        ]
        return cls(ambient, field, Matrix(field, len(rows), ambient, tuple(rows)))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient

    def vectors(self) -> Tuple[Tuple, ...]:
        return self.basis.entries

    def __le__(self, other: "Subspace") -> bool:
        return join(self, other) == other

    def __str__(self):
        if self.is_zero:
            return "0"
        return "span{" + ", ".join("(" + ", ".join(r) + ")" for r in self.basis.to_lists()) + "}"


def _check_compatible(u: Subspace, v: Subspace):
    if u.ambient != v.ambient or u.field is not v.field:
        raise DimensionMismatchError(
            f"Subspaces live in different spaces: {u.field.value}^{u.ambient} "
            f"vs {v.field.value}^{v.ambient}"
        )


@lru_cache(maxsize=CACHE_SIZE)
def join(u: Subspace, v: Subspace) -> Subspace:
    """Sum of subspaces."""
    _check_compatible(u, v)
    if u.is_zero or v.is_full:
        return v
    if v.is_zero or u.is_full:
        return u
    return Subspace(u.ambient, u.field, rref(vstack(u.basis, v.basis)))


@lru_cache(maxsize=CACHE_SIZE)
def ortho(u: Subspace) -> Subspace:
    """Orthogonal complement with respect to sum v_i * conj(w_i)."""
    return Subspace(u.ambient, u.field, rref(kernel(u.basis.conjugate())))


@lru_cache(maxsize=CACHE_SIZE)
def meet(u: Subspace, v: Subspace) -> Subspace:
    """Intersection, as the kernel of the stacked annihilator systems."""
    _check_compatible(u, v)
    if u.is_zero or v.is_full:
        return u
    if v.is_zero or u.is_full:
        return v
    constraints = vstack(ortho(u).basis.conjugate(), ortho(v).basis.conjugate())
    return Subspace(u.ambient, u.field, rref(kernel(constraints)))


def leq(u: Subspace, v: Subspace) -> bool:
    return join(u, v) == v


def is_complement(x: Subspace, y: Subspace, bottom: Subspace, top: Subspace) -> bool:
    """True when x and y are complements in the interval [bottom, top]."""
    return meet(x, y) == bottom and join(x, y) == top


def tensor_complex(u: Subspace) -> Subspace:
    """Embedding L(Q^k) -> L(Q(i)^k), U -> U (x) C."""
    if u.field is Field.GAUSSIAN:
        return u
    return Subspace(u.ambient, Field.GAUSSIAN, u.basis.with_field(Field.GAUSSIAN))


class OrthoLattice(Protocol):
    """Operations an ortholattice needs for term evaluation."""

    @property
    def bottom(self): ...

    @property
    def top(self): ...

    def meet(self, x, y): ...

    def join(self, x, y): ...

    def ortho(self, x): ...

    def contains(self, x) -> bool: ...


class SubspaceLattice:
    """L(F^dim): all subspaces of F^dim."""

    def __init__(self, dim: int, field: Field = Field.RATIONAL):
        if dim < 0:
            raise ValueError(f"Dimension must be non-negative, got {dim}")
        self.dim = dim
        self.field = field
        self._bottom = Subspace.zero(field, dim)
        self._top = Subspace.full(field, dim)

    @property
    def bottom(self) -> Subspace:
        return self._bottom

    @property
    def top(self) -> Subspace:
        return self._top

    def meet(self, x: Subspace, y: Subspace) -> Subspace:
        return meet(x, y)

    def join(self, x: Subspace, y: Subspace) -> Subspace:
        return join(x, y)

    def ortho(self, x: Subspace) -> Subspace:
        return ortho(x)

    def contains(self, x: Subspace) -> bool:
        return isinstance(x, Subspace) and x.ambient == self.dim and x.field is self.field

    def span(self, *vectors: Sequence) -> Subspace:
        return Subspace.span(self.field, self.dim, vectors)

    def __repr__(self):
        return f"SubspaceLattice(dim={self.dim}, field={self.field.value})"


class IntervalLattice:
    """Interval [bottom, top] of L(F^d) with the relative orthocomplement."""

    def __init__(self, bottom: Subspace, top: Subspace):
        if not leq(bottom, top):
            raise ValueError("Interval bottom must lie below its top")
        self._bottom = bottom
        self._top = top

    @property
    def bottom(self) -> Subspace:
        return self._bottom

    @property
    def top(self) -> Subspace:
        return self._top

    def meet(self, x: Subspace, y: Subspace) -> Subspace:
        return meet(x, y)

    def join(self, x: Subspace, y: Subspace) -> Subspace:
        return join(x, y)

    def ortho(self, x: Subspace) -> Subspace:
        """Relative orthocomplement (x' & top) | bottom."""
        return join(meet(ortho(x), self._top), self._bottom)

    def contains(self, x: Subspace) -> bool:
        top = self._top
        if not isinstance(x, Subspace) or (x.ambient, x.field) != (top.ambient, top.field):
            return False
        return leq(self._bottom, x) and leq(x, self._top)

    @property
    def height(self) -> int:
        return self._top.dim - self._bottom.dim

    def lower(self) -> "IntervalLattice":
        """The isomorphic interval [0, bottom' & top]."""
        return IntervalLattice(Subspace.zero(self._bottom.field, self._bottom.ambient), self.base)

    @property
    def base(self) -> Subspace:
        return meet(ortho(self._bottom), self._top)

    def to_lower(self, x: Subspace) -> Subspace:
        """[bottom, top] -> [0, bottom' & top], x -> x & bottom'."""
        return meet(x, ortho(self._bottom))

    def from_lower(self, y: Subspace) -> Subspace:
        """[0, bottom' & top] -> [bottom, top], y -> y | bottom."""
        return join(y, self._bottom)

    def __repr__(self):
        return f"IntervalLattice({self._bottom}, {self._top})"


class ProductLattice:
    """Direct product of ortholattices.

    Elements are tuples with one coordinate per factor; every operation acts
    coordinatewise, so a term evaluates to the tuple of its values in the factors.
    """

    def __init__(self, factors: Sequence[OrthoLattice]):
        if not factors:
            raise ValueError("A product lattice needs at least one factor")
        self.factors = tuple(factors)

    @property
    def bottom(self) -> Tuple:
        return tuple(f.bottom for f in self.factors)

    @property
    def top(self) -> Tuple:
        return tuple(f.top for f in self.factors)

    def meet(self, x: Tuple, y: Tuple) -> Tuple:
        return tuple(f.meet(a, b) for f, a, b in zip(self.factors, x, y))

    def join(self, x: Tuple, y: Tuple) -> Tuple:
        return tuple(f.join(a, b) for f, a, b in zip(self.factors, x, y))

    def ortho(self, x: Tuple) -> Tuple:
        return tuple(f.ortho(a) for f, a in zip(self.factors, x))

    def contains(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == len(self.factors)
            and all(f.contains(a) for f, a in zip(self.factors, x))
        )

    def embed(self, k: int, value) -> Tuple:
        """Element with ``value`` in factor k and 1 everywhere else."""
        return tuple(value if i == k else f.top for i, f in enumerate(self.factors))

    def __repr__(self):
        return f"ProductLattice({', '.join(repr(f) for f in self.factors)})"


def restrict_to(a: Subspace, x: Subspace) -> Subspace:
    """Homomorphism x -> x & a from [0, a] u [a', 1] onto [0, a]."""
    return meet(x, a)


@dataclass(frozen=True)
class IntervalIsomorphism:
    """Coordinates identifying [0, a] with L(F^dim a).

    The canonical basis of ``a`` has identity columns at its pivots, so the
    coordinates of a vector of ``a`` are its entries at those pivots.
    """

    a: Subspace
    pivots: Tuple[int, ...]

    @property
    def interval(self) -> IntervalLattice:
        return IntervalLattice(Subspace.zero(self.a.field, self.a.ambient), self.a)

    @property
    def target(self) -> SubspaceLattice:
        return SubspaceLattice(self.a.dim, self.a.field)

    @property
    def is_orthonormal(self) -> bool:
        """Whether relative orthocomplements correspond to plain ones in coordinates."""
        gram = self.a.basis @ self.a.basis.H
        return gram == Matrix.identity(self.a.field, self.a.dim)

    def to_coordinates(self, x: Subspace) -> Subspace:
        if not leq(x, self.a):
            raise ValueError("Element does not lie below the interval top")
        return Subspace.from_matrix(x.basis.select_columns(self.pivots))

    def from_coordinates(self, y: Subspace) -> Subspace:
        if y.ambient != self.a.dim or y.field is not self.a.field:
            raise DimensionMismatchError("Coordinate subspace has the wrong shape")
        return Subspace.from_matrix(y.basis @ self.a.basis)


def interval_iso(a: Subspace) -> IntervalIsomorphism:
    """Expose [0, a] as L(F^dim a) through coordinates on the canonical basis of a."""
    _, pivots = rref_with_pivots(a.basis)
    return IntervalIsomorphism(a, pivots)


def maximal_chain(lattice: SubspaceLattice) -> List[Subspace]:
    """Coordinate flag 0 < span(e1) < ... < F^d."""
    return [
        Subspace.coordinate(lattice.field, lattice.dim, range(k)) for k in range(lattice.dim + 1)
    ]


def is_maximal_chain(chain: Sequence[Subspace], lattice: SubspaceLattice) -> bool:
    """Chain from 0 to 1 where each step is a cover (dimension grows by one)."""
    if not chain or chain[0] != lattice.bottom or chain[-1] != lattice.top:
        return False
    return all(leq(lo, hi) and hi.dim == lo.dim + 1 for lo, hi in zip(chain, chain[1:]))


Substitution = Mapping[str, object]


class CompiledTerm:
    """A term flattened into a straight-line program over registers.

    Structurally equal subterms share one register, so each distinct subterm
    is computed once per evaluation. Programs are reusable across
    substitutions and lattices.
    """

    def __init__(self, term: Term):
        self.term = term
        self.program: List[Tuple] = []
        self._registers: Dict[Tuple, int] = {}
        self.output = self._compile(term)

    def _emit(self, instruction: Tuple) -> int:
        index = self._registers.get(instruction)
        if index is None:
            index = len(self.program)
            self.program.append(instruction)
            self._registers[instruction] = index
        return index

    def _compile(self, root: Term) -> int:
        # Iterative post-order walk: parsed terms can nest deeply
        done: Dict[int, int] = {}
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if id(node) in done:
                continue
            children = node.children()
            if children and not expanded:
                stack.append((node, True))
                stack.extend((child, False) for child in children)
                continue
            if isinstance(node, Var):
                instruction = ("var", node.name)
            elif isinstance(node, Zero):
                instruction = ("zero",)
            elif isinstance(node, One):
                instruction = ("one",)
            elif isinstance(node, Meet):
                instruction = ("meet", done[id(node.left)], done[id(node.right)])
            elif isinstance(node, Join):
                instruction = ("join", done[id(node.left)], done[id(node.right)])
            elif isinstance(node, Ortho):
                instruction = ("ortho", done[id(node.arg)])
            else:
                raise TypeError(f"Not a term: {node!r}")
            done[id(node)] = self._emit(instruction)
        return done[id(root)]

    def evaluate(self, substitution: Substitution, lattice: OrthoLattice):
        """Run the program.

        Raises:
            UnboundVariableError: If a variable of the term has no value
        """
        meet_, join_, ortho_ = lattice.meet, lattice.join, lattice.ortho
        values: List[object] = []
        append = values.append
        for op, *args in self.program:
            if op == "meet":
                append(meet_(values[args[0]], values[args[1]]))
            elif op == "join":
                append(join_(values[args[0]], values[args[1]]))
            elif op == "ortho":
                append(ortho_(values[args[0]]))
            elif op == "var":
                try:
                    append(substitution[args[0]])
                except KeyError:
                    raise UnboundVariableError(args[0]) from None
            elif op == "zero":
                append(lattice.bottom)
            else:
                append(lattice.top)
        return values[self.output]

    def __len__(self):
        return len(self.program)


def evaluate(term: Term, substitution: Substitution, lattice: OrthoLattice):
    """Evaluate a term in an ortholattice under a substitution.

    Raises:
        UnboundVariableError: If a variable of the term has no value
    """
    return CompiledTerm(term).evaluate(substitution, lattice)


def is_tautology_on(
    term: Term, substitutions: Iterable[Substitution], lattice: OrthoLattice
) -> Optional[Substitution]:
    """Return the first substitution where ``term`` is not 1, or None."""
    compiled = CompiledTerm(term)
    for sub in substitutions:
        if compiled.evaluate(sub, lattice) != lattice.top:
            return sub
    return None


def clear_caches():
    """Drop memoized lattice operations."""
    for fn in (meet, join, ortho):
        fn.cache_clear()
    logger.debug("Cleared subspace operation caches")
