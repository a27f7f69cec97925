"""Seeded random generators for subspaces, chains, matrices and terms.

All randomness flows through a ``numpy.random.Generator`` so that every suite
is reproducible from a single integer seed. Only small integers are drawn;
they are converted to exact scalars before any arithmetic happens.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from molq.lattice import Subspace, join
from molq.linalg import Matrix
from molq.scalars import Field, GaussianRational, Scalar
from molq.terms import ONE, ZERO, Term, Var

# Entries are drawn from [-ENTRY_BOUND, ENTRY_BOUND]
ENTRY_BOUND = 3


def make_rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_scalar(rng: np.random.Generator, field: Field, bound: int = ENTRY_BOUND) -> Scalar:
    re = int(rng.integers(-bound, bound + 1))
    if field is Field.GAUSSIAN:
        return GaussianRational(re, int(rng.integers(-bound, bound + 1)))
    return field.coerce(re)


def random_vector(rng: np.random.Generator, field: Field, dim: int) -> Tuple[Scalar, ...]:
    return tuple(random_scalar(rng, field) for _ in range(dim))


def random_subspace(
    rng: np.random.Generator,
    field: Field,
    dim: int,
    max_dim: Optional[int] = None,
) -> Subspace:
    """Span of k random vectors, k uniform in [0, max_dim]."""
    upper = dim if max_dim is None else min(dim, max_dim)
    k = int(rng.integers(0, upper + 1))
    return Subspace.span(field, dim, [random_vector(rng, field, dim) for _ in range(k)])


def random_vector_in(rng: np.random.Generator, u: Subspace) -> Tuple[Scalar, ...]:
    """Random combination of the basis vectors of ``u``."""
    coefficients = [random_scalar(rng, u.field) for _ in range(u.dim)]
    zero = u.field.zero
    vector = [zero] * u.ambient
    for c, row in zip(coefficients, u.vectors()):
        vector = [a + c * b for a, b in zip(vector, row)]
    return tuple(vector)


def random_below(rng: np.random.Generator, u: Subspace) -> Subspace:
    """Random subspace of ``u``."""
    k = int(rng.integers(0, u.dim + 1))
    return Subspace.span(u.field, u.ambient, [random_vector_in(rng, u) for _ in range(k)])


def random_interval_element(
    rng: np.random.Generator, bottom: Subspace, top: Subspace
) -> Subspace:
    """Random element of [bottom, top]."""
    return join(bottom, random_below(rng, top))


def random_chain(
    rng: np.random.Generator, field: Field, dim: int
) -> Tuple[Subspace, Subspace, Subspace, Subspace]:
    """Random (c0, c1, c2, c3) with c0 <= c1, c2 <= c3."""
    c3 = random_subspace(rng, field, dim)
    c0 = random_below(rng, c3)
    return c0, random_interval_element(rng, c0, c3), random_interval_element(rng, c0, c3), c3


def random_complement_chain(
    rng: np.random.Generator, field: Field, dim: int
) -> Tuple[Subspace, Subspace, Subspace, Subspace]:
    """Random chain where c1 is built to be (generically) a complement of c2 in [c0, c3]."""
    c0, _, c2, c3 = random_chain(rng, field, dim)
    missing = c3.dim - c2.dim
    c1 = c0
    for _ in range(missing):
        c1 = join(c1, Subspace.span(field, dim, [random_vector_in(rng, c3)]))
    return c0, c1, c2, c3


def random_matrix(
    rng: np.random.Generator,
    field: Field,
    rows: int,
    cols: int,
    rank: Optional[int] = None,
) -> Matrix:
    """Random matrix; with ``rank`` given, a product of random factors of that inner size."""
    if rank is None:
        return Matrix.from_rows(
            field, [random_vector(rng, field, cols) for _ in range(rows)], cols=cols
        )
    left = random_matrix(rng, field, rows, rank)
    right = random_matrix(rng, field, rank, cols)
    return left @ right


def random_term(
    rng: np.random.Generator,
    variables: Sequence[str],
    depth: int = 3,
    constants: bool = True,
) -> Term:
    """Random term over ``variables`` of depth at most ``depth``."""
    if depth <= 1 or rng.random() < 0.2:
        if constants and rng.random() < 0.1:
            return ZERO if rng.random() < 0.5 else ONE
        return Var(variables[int(rng.integers(0, len(variables)))])
    choice = rng.random()
    if choice < 0.25:
        return ~random_term(rng, variables, depth - 1, constants)
    left = random_term(rng, variables, depth - 1, constants)
    right = random_term(rng, variables, depth - 1, constants)
    return left & right if choice < 0.625 else left | right


def random_elements(
    rng: np.random.Generator, field: Field, dim: int, count: int
) -> List[Subspace]:
    """``count`` pairwise distinct random subspaces (a candidate test set)."""
    seen: List[Subspace] = []
    while len(seen) < count:
        candidate = random_subspace(rng, field, dim)
        if candidate not in seen:
            seen.append(candidate)
    return seen
