"""Seeded randomized axiom suites run by ``molq axioms``."""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence

from molq.frames import canonical_frame, random_frame_search, verify_frame
from molq.lattice import OrthoLattice, SubspaceLattice, join, leq, meet, ortho
from molq.ring import (
    block_double,
    mp_inverse,
    proj_join,
    proj_leq,
    proj_meet,
    proj_ortho,
    proj_to_subspace,
    satisfies_penrose,
    subspace_to_proj,
)
from molq.sampling import make_rng, random_matrix, random_subspace
from molq.scalars import Field

logger = logging.getLogger(__name__)


@dataclass
class SuiteReport:
    """Counts of checks run and the failures seen."""

    suite: str
    seed: int
    samples: int
    checks: int = 0
    failures: List[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, label: str):
        self.checks += 1
        if not ok:
            self.failures.append(label)


def ortholattice_violations(lattice: OrthoLattice, x, y, z) -> List[str]:
    """Names of the ortholattice, modular and orthomodular laws failing on x, y, z."""
    m, j, o = lattice.meet, lattice.join, lattice.ortho
    bottom, top = lattice.bottom, lattice.top

    def le(a, b):
        return j(a, b) == b

    laws = {
        "meet commutative": m(x, y) == m(y, x),
        "join commutative": j(x, y) == j(y, x),
        "meet associative": m(m(x, y), z) == m(x, m(y, z)),
        "join associative": j(j(x, y), z) == j(x, j(y, z)),
        "absorption": m(x, j(x, y)) == x and j(x, m(x, y)) == x,
        "bounds": m(x, bottom) == bottom and j(x, top) == top,
        "complement": m(x, o(x)) == bottom and j(x, o(x)) == top,
        "involution": o(o(x)) == x,
        "de morgan": o(j(x, y)) == m(o(x), o(y)),
        "order reversing": not le(x, y) or le(o(y), o(x)),
    }
    # modular law instance with x >= (x & z)
    w = m(x, z)
    laws["modular"] = m(x, j(y, w)) == j(m(x, y), w)
    laws["orthomodular"] = j(x, m(o(x), j(x, y))) == j(x, y)
    return [name for name, ok in laws.items() if not ok]


def mol_suite(
    samples: int = 1000, seed: int = 0, dims: Sequence[int] = (2, 3, 4, 5)
) -> SuiteReport:
    """Ortholattice axioms and the modular law on random triples of L(Q^d)."""
    report = SuiteReport("mol", seed, samples)
    rng = make_rng(seed)
    for d in dims:
        lattice = SubspaceLattice(d)
        for k in range(samples):
            x, y, z = (random_subspace(rng, Field.RATIONAL, d) for _ in range(3))
            failed = ortholattice_violations(lattice, x, y, z)
            report.record(not failed, f"d={d} sample {k}: {', '.join(failed)}")
    return report


def penrose_suite(samples: int = 200, seed: int = 0, max_size: int = 6) -> SuiteReport:
    """Penrose equations, doubling and the projection lattice against subspaces."""
    report = SuiteReport("penrose", seed, samples)
    rng = make_rng(seed)
    for k in range(samples):
        field_ = Field.RATIONAL if k % 2 == 0 else Field.GAUSSIAN
        rows, cols = (int(rng.integers(1, max_size + 1)) for _ in range(2))
        rank = int(rng.integers(0, min(rows, cols) + 1))
        a = random_matrix(rng, field_, rows, cols, rank=rank)
        report.record(satisfies_penrose(a, mp_inverse(a)), f"sample {k}: Penrose equations")

        size = int(rng.integers(1, max_size // 2 + 1))
        square = random_matrix(rng, field_, size, size)
        report.record(
            mp_inverse(block_double(square)) == block_double(mp_inverse(square)),
            f"sample {k}: pseudo-inverse commutes with doubling",
        )

        m = int(rng.integers(1, max_size + 1))
        u, v = random_subspace(rng, field_, m), random_subspace(rng, field_, m)
        e, f = subspace_to_proj(u), subspace_to_proj(v)
        report.record(proj_to_subspace(proj_join(e, f)) == join(u, v), f"sample {k}: join")
        report.record(proj_to_subspace(proj_meet(e, f)) == meet(u, v), f"sample {k}: meet")
        report.record(proj_to_subspace(proj_ortho(e)) == ortho(u), f"sample {k}: ortho")
        report.record(proj_leq(e, f) == leq(u, v), f"sample {k}: order")
    return report


def frame_suite(samples: int = 1000, seed: int = 0, max_d: int = 6) -> SuiteReport:
    """Canonical frames verify; random search finds no nontrivial d-frame below dimension d."""
    report = SuiteReport("frame", seed, samples)
    for d in range(2, max_d + 1):
        report.record(verify_frame(canonical_frame(d)).valid, f"canonical {d}-frame")
    for d in range(2, min(max_d, 4) + 1):
        found = random_frame_search(d - 1, d, samples, seed)
        report.record(found is None, f"nontrivial {d}-frame in L(Q^{d - 1})")
    return report


SUITES: Dict[str, Callable[..., SuiteReport]] = {
    "mol": mol_suite,
    "penrose": penrose_suite,
    "frame": frame_suite,
}


def run_suite(name: str, samples: int, seed: int) -> SuiteReport:
    """Run a suite by name and time it.

    Raises:
        ValueError: For an unknown suite name
    """
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"Unknown suite: {name}. Use {', '.join(SUITES)}.") from None
    start = time.perf_counter()
    report = suite(samples=samples, seed=seed)
    report.elapsed = time.perf_counter() - start
    logger.info(
        "Suite %s: %d checks, %d failures in %.2fs",
        name,
        report.checks,
        len(report.failures),
        report.elapsed,
    )
    return report
