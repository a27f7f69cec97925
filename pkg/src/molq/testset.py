"""Exhaustive test-set search and the refuter for finite candidate test sets.

A finite subset T of a lattice is checked against a term by evaluating the term
under every substitution with values in T. Substitutions are enumerated in
odometer order over the variable list (the first variable is the most
significant digit), so the first counterexample reported is reproducible.

Test sets live in L(Q^d) or in a finite product of such lattices, whose
elements are tuples of subspaces.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice, product
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from molq.config import Settings
from molq.frames import FrameNormalizer, ProductFrameNormalizer, canonical_frame, line_atoms
from molq.lattice import CompiledTerm, OrthoLattice, ProductLattice, Subspace, SubspaceLattice
from molq.linalg import DimensionMismatchError
from molq.scalars import Field
from molq.terms import Term, UnboundVariableError, tdn_term, tdn_variables

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = Settings().budget

Normalizer = Callable[[Mapping[str, Any]], Dict[str, Any]]


class BudgetExceededError(RuntimeError):
    """Raised when an exhaustive search would exceed the substitution budget."""

    def __init__(self, total: int, budget: int):
        super().__init__(f"Search needs {total} substitutions, budget is {budget}")
        self.total = total
        self.budget = budget


def space_of(x) -> Tuple:
    """(ambient, field) of a subspace, or the tuple of these for a product element."""
    if isinstance(x, Subspace):
        return (x.ambient, x.field)
    return tuple(space_of(c) for c in x)


@dataclass(frozen=True)
class TestSet:
    """Finite set of pairwise distinct elements of one lattice.

    Elements are subspaces of one space, or equally shaped tuples of subspaces
    for a product lattice.
    """

    __test__ = False  # not a pytest class

    elements: Tuple[Any, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("Test set elements must be pairwise distinct")
        spaces = {space_of(x) for x in self.elements}
        if len(spaces) > 1:
            raise DimensionMismatchError("Test set elements live in different spaces")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def ambient(self) -> Optional[int]:
        first = self.elements[0] if self.elements else None
        return first.ambient if isinstance(first, Subspace) else None

    @property
    def field(self) -> Optional[Field]:
        first = self.elements[0] if self.elements else None
        return first.field if isinstance(first, Subspace) else None

    @property
    def factors(self) -> Optional[Tuple[int, ...]]:
        """Ambient dimensions of the coordinates, for elements of a product."""
        first = self.elements[0] if self.elements else None
        if first is None or isinstance(first, Subspace):
            return None
        return tuple(c.ambient for c in first)

    def subset(self, indices: Iterable[int]) -> "TestSet":
        return TestSet(tuple(self.elements[i] for i in sorted(set(indices))))


@dataclass
class SearchOutcome:
    """Result of an exhaustive search."""

    holds: bool
    count: int
    total: int
    elapsed: float
    counterexample: Optional[Dict[str, Any]] = None
    value: Optional[Any] = None


def _search_range(
    compiled: CompiledTerm,
    elements: Tuple[Any, ...],
    variables: Tuple[str, ...],
    lattice: OrthoLattice,
    normalize: Optional[Normalizer],
    start: int,
    stop: int,
) -> Tuple[Optional[int], Optional[Dict[str, Any]], Optional[Any]]:
    """Scan substitutions start..stop-1; return the first failing one."""
    top = lattice.top
    values = islice(product(elements, repeat=len(variables)), start, stop)
    for index, assignment in enumerate(values, start):
        substitution = dict(zip(variables, assignment))
        evaluated = normalize(substitution) if normalize else substitution
        value = compiled.evaluate(evaluated, lattice)
        if value != top:
            return index, substitution, value
    return None, None, None


def _chunks(total: int, parts: int) -> List[Tuple[int, int]]:
    size = -(-total // parts)
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def holds_over(
    term: Term,
    testset: TestSet,
    lattice: OrthoLattice,
    variables: Optional[Sequence[str]] = None,
    budget: int = DEFAULT_BUDGET,
    normalize: Optional[Normalizer] = None,
    workers: int = 1,
) -> SearchOutcome:
    """Check that ``term`` evaluates to 1 under every substitution into ``testset``.

    Args:
        term: Term to check
        testset: Values the variables range over
        lattice: Lattice the elements belong to
        variables: Enumeration order; defaults to the sorted variables of ``term``.
            May list variables that do not occur in the term.
        budget: Maximum number of substitutions
        normalize: Optional transformer applied to each substitution before evaluation
        workers: Number of processes; the reported counterexample does not depend on it

    Returns:
        SearchOutcome with the lexicographically first counterexample, if any

    Raises:
        ValueError: If the test set is empty
        DimensionMismatchError: If an element of the test set is not in ``lattice``
        UnboundVariableError: If ``variables`` misses a variable of the term
        BudgetExceededError: If |T|^#variables exceeds ``budget``
    """
    if not len(testset):
        raise ValueError("holds_over requires a nonempty test set")
    strays = [i for i, x in enumerate(testset) if not lattice.contains(x)]
    if strays:
        raise DimensionMismatchError(f"Test set elements {strays} do not belong to {lattice!r}")
    order = tuple(variables) if variables is not None else tuple(term.variables())
    missing = [name for name in term.variables() if name not in order]
    if missing:
        raise UnboundVariableError(missing[0])

    total = len(testset) ** len(order)
    if total > budget:
        raise BudgetExceededError(total, budget)
    logger.debug("Search over %d substitutions (budget %d)", total, budget)

    compiled = CompiledTerm(term)
    elements = testset.elements
    start_time = time.perf_counter()
    logger.info(
        "Checking term of size %d over |T|=%d, %d variables", term.size(), len(elements), len(order)
    )

    if workers > 1 and total > workers:
        ranges = _chunks(total, workers * 4)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_search_range, compiled, elements, order, lattice, normalize, lo, hi)
                for lo, hi in ranges
            ]
            results = [f.result() for f in futures]
        failure = next((r for r in results if r[0] is not None), (None, None, None))
    else:
        failure = _search_range(compiled, elements, order, lattice, normalize, 0, total)

    index, counterexample, value = failure
    elapsed = time.perf_counter() - start_time
    holds = index is None
    count = total if holds else index + 1
    logger.info(
        "Search finished: holds=%s after %d/%d substitutions in %.2fs", holds, count, total, elapsed
    )
    return SearchOutcome(holds, count, total, elapsed, counterexample, value)


@dataclass
class RefutationCertificate:
    """Witness that a finite test set is not universal.

    The target is L(Q^d), or the product of L(Q^m) over ``factors`` when that
    is nonempty; d is then the largest factor dimension.
    """

    term: Term
    d: int
    n: int
    witness: Dict[str, Any]
    witness_value: Any
    verdict: SearchOutcome
    factors: Tuple[int, ...] = ()

    @property
    def lattice(self) -> OrthoLattice:
        return target_lattice(self.d, self.factors)


@dataclass
class CertificateCheck:
    """Outcome of independently re-checking a certificate."""

    valid: bool
    problems: List[str] = field(default_factory=list)


def target_lattice(d: int, factors: Sequence[int] = ()) -> OrthoLattice:
    """L(Q^d), or the product of L(Q^m) for m in ``factors``."""
    if not factors:
        return SubspaceLattice(d)
    return ProductLattice([SubspaceLattice(m) for m in factors])


def _normalizer(d: int, factors: Sequence[int]) -> Normalizer:
    if not factors:
        return FrameNormalizer(d)
    return ProductFrameNormalizer(d, len(factors))


def witness_substitution(d: int, n: int, factors: Sequence[int] = ()) -> Dict[str, Any]:
    """Canonical frame on the z-variables and n distinct line atoms on x1..xn.

    For a product, the witness sits in the first factor of dimension d, which
    must be the largest, and every other coordinate is 1.
    """
    frame = canonical_frame(d)
    witness: Dict[str, Any] = frame.as_substitution()
    witness.update((f"x{i}", atom) for i, atom in enumerate(line_atoms(frame, n), 1))
    if not factors:
        return witness
    if d != max(factors):
        raise ValueError(f"d={d} is not the largest factor dimension of {tuple(factors)}")
    product_lattice = ProductLattice([SubspaceLattice(m) for m in factors])
    k = list(factors).index(d)
    return {name: product_lattice.embed(k, value) for name, value in witness.items()}


def _check_members(testset: TestSet, lattice: OrthoLattice):
    if not all(lattice.contains(x) for x in testset):
        raise DimensionMismatchError(f"Test set must consist of elements of {lattice!r}")


def refute_testset(
    testset: TestSet,
    d: int,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    factors: Sequence[int] = (),
) -> RefutationCertificate:
    """Show that ``testset`` is not a universal test set for L(Q^d).

    Uses the witness term with n = |T| + 1: it evaluates to 1 on every
    substitution from T (z-part normalized to a frame), but not on the
    canonical frame with n distinct line atoms.

    Args:
        testset: Candidate test set
        d: Frame order; for a product it must be the largest factor dimension
        budget: Substitution budget of the exhaustive confirmation
        workers: Processes for the exhaustive confirmation
        factors: Dimensions m of a product of L(Q^m); empty for L(Q^d) itself

    Raises:
        ValueError: If the test set is empty or d < 2
        DimensionMismatchError: If the test set is not in the target lattice
        BudgetExceededError: If the exhaustive confirmation exceeds ``budget``
    """
    if not len(testset):
        raise ValueError("refute_testset requires a nonempty test set")
    factors = tuple(factors)
    lattice = target_lattice(d, factors)
    _check_members(testset, lattice)
    n = len(testset) + 1
    logger.info("Refuting test set of size %d in %r with n=%d", len(testset), lattice, n)

    term = tdn_term(d, n)
    witness = witness_substitution(d, n, factors)
    witness_value = CompiledTerm(term).evaluate(witness, lattice)
    if witness_value == lattice.top:
        raise RuntimeError("Witness term evaluated to 1 on the canonical frame")

    verdict = holds_over(
        term,
        testset,
        lattice,
        variables=tdn_variables(d, n),
        budget=budget,
        normalize=_normalizer(d, factors),
        workers=workers,
    )
    if not verdict.holds:
        raise RuntimeError(f"Witness term fails on the test set at {verdict.counterexample}")
    return RefutationCertificate(term, d, n, witness, witness_value, verdict, factors)


def refute_product_testset(
    testset: TestSet, factors: Sequence[int], budget: int = DEFAULT_BUDGET, workers: int = 1
) -> RefutationCertificate:
    """Refute ``testset`` for the product of L(Q^m), m in ``factors``.

    The witness frame lives in the factor of largest dimension.

    Raises:
        ValueError: If there are no factors or every factor has dimension below 2
    """
    if not factors:
        raise ValueError("A product needs at least one factor")
    d = max(factors)
    if d < 2:
        raise ValueError(f"Some factor must have dimension >= 2, got {tuple(factors)}")
    return refute_testset(testset, d, budget, workers, factors)


def verify_certificate(
    certificate: RefutationCertificate,
    testset: TestSet,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> CertificateCheck:
    """Re-check a certificate from scratch against ``testset``."""
    problems: List[str] = []
    d, n, factors = certificate.d, certificate.n, tuple(certificate.factors)
    try:
        if factors and d != max(factors):
            raise ValueError(f"d={d} is not the largest factor dimension of {factors}")
        lattice = target_lattice(d, factors)
        _check_members(testset, lattice)
        expected = tdn_term(d, n)
    except ValueError as e:
        return CertificateCheck(False, [str(e)])

    if certificate.term != expected:
        problems.append(f"term is not the witness term for d={d}, n={n}")
    if n <= len(testset):
        problems.append(f"n={n} does not exceed the test set size {len(testset)}")

    normalize = _normalizer(d, factors)
    try:
        value = CompiledTerm(certificate.term).evaluate(normalize(certificate.witness), lattice)
    except (KeyError, IndexError, TypeError, UnboundVariableError) as e:
        problems.append(f"witness is incomplete: {e}")
        return CertificateCheck(False, problems)
    if value != certificate.witness_value:
        problems.append("witness does not evaluate to the recorded value")
    if value == lattice.top:
        problems.append("witness evaluates to 1")

    if not problems:
        outcome = holds_over(
            certificate.term,
            testset,
            lattice,
            variables=tdn_variables(d, n),
            budget=budget,
            normalize=normalize,
            workers=workers,
        )
        if not outcome.holds:
            problems.append(f"term fails on the test set at {outcome.counterexample}")

    if problems:
        logger.warning("Certificate rejected: %s", "; ".join(problems))
    return CertificateCheck(not problems, problems)
