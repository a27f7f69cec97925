"""Tests for the randomized axiom suites."""

import pytest

from molq.lattice import SubspaceLattice
from molq.suites import (
    SUITES,
    SuiteReport,
    frame_suite,
    mol_suite,
    ortholattice_violations,
    penrose_suite,
    run_suite,
)


class BrokenBooleans:
    """Two-element lattice with the identity as ortho."""

    bottom = False
    top = True

    def meet(self, x, y):
        return x and y

    def join(self, x, y):
        return x or y

    def ortho(self, x):
        return x


def test_violations_empty_on_subspaces():
    """Test a triple of subspaces satisfies every law."""
    lattice = SubspaceLattice(3)
    x, y, z = lattice.span([1, 0, 0]), lattice.span([1, 1, 0]), lattice.span([0, 1, 1])
    assert ortholattice_violations(lattice, x, y, z) == []


def test_violations_reported():
    """Test a broken ortho is caught by name."""
    failed = ortholattice_violations(BrokenBooleans(), True, False, False)
    assert "complement" in failed
    assert "de morgan" in failed
    assert "involution" not in failed


def test_mol_suite():
    """Test the subspace lattice passes a small run."""
    report = mol_suite(samples=20, seed=1, dims=(2, 3))
    assert report.passed
    assert report.checks == 40


def test_penrose_suite():
    """Test pseudo-inverse and projection checks pass."""
    report = penrose_suite(samples=10, seed=2, max_size=4)
    assert report.passed, report.failures
    assert report.checks == 60


def test_frame_suite():
    """Test canonical frames verify and none turn up below dimension d."""
    report = frame_suite(samples=20, seed=3, max_d=4)
    assert report.passed, report.failures
    assert report.checks == 6


def test_report_record():
    """Test failures are collected with their labels."""
    report = SuiteReport("x", 0, 1)
    report.record(True, "fine")
    report.record(False, "broken")
    assert report.checks == 2
    assert report.failures == ["broken"]
    assert not report.passed


def test_run_suite():
    """Test suites run by name and unknown names fail."""
    assert set(SUITES) == {"mol", "penrose", "frame"}
    report = run_suite("frame", samples=5, seed=0)
    assert report.passed
    assert report.elapsed >= 0
    with pytest.raises(ValueError):
        run_suite("nope", samples=1, seed=0)
