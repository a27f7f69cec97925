"""Tests for the subspace lattice module."""

import pytest

from molq.lattice import (
    CompiledTerm,
    IntervalLattice,
    ProductLattice,
    Subspace,
    SubspaceLattice,
    clear_caches,
    evaluate,
    interval_iso,
    is_complement,
    is_maximal_chain,
    is_tautology_on,
    join,
    leq,
    maximal_chain,
    meet,
    ortho,
    restrict_to,
    tensor_complex,
)
from molq.linalg import DimensionMismatchError
from molq.parser import parse
from molq.sampling import (
    make_rng,
    random_chain,
    random_complement_chain,
    random_subspace,
    random_term,
)
from molq.scalars import Field
from molq.terms import UnboundVariableError, Var, identity_to_term, s_term, xhat_term

Q = Field.RATIONAL
QI = Field.GAUSSIAN


@pytest.fixture
def plane():
    return SubspaceLattice(2)


@pytest.fixture
def space():
    return SubspaceLattice(3)


def test_span_is_canonical(plane):
    """Test spanning families give the same canonical subspace."""
    assert plane.span([2, 2]) == plane.span([1, 1])
    assert plane.span([1, 0], [0, 1]) == plane.top
    assert plane.span([0, 0]) == plane.bottom
    assert hash(plane.span([3, 3])) == hash(plane.span([1, 1]))


def test_span_dimension(space):
    """Test dimension of spans."""
    assert space.span([1, 2, 3], [2, 4, 6]).dim == 1
    assert space.span([1, 0, 0], [0, 1, 0]).dim == 2
    assert space.top.is_full
    assert space.bottom.is_zero


def test_join_and_meet(space):
    """Test sums and intersections of planes."""
    xy = space.span([1, 0, 0], [0, 1, 0])
    yz = space.span([0, 1, 0], [0, 0, 1])
    assert join(xy, yz) == space.top
    assert meet(xy, yz) == space.span([0, 1, 0])


def test_ortho(space):
    """Test orthogonal complements."""
    assert ortho(space.span([1, 0, 0])) == space.span([0, 1, 0], [0, 0, 1])
    assert ortho(space.span([1, 1, 0])) == space.span([1, -1, 0], [0, 0, 1])
    assert ortho(space.top) == space.bottom
    assert ortho(space.bottom) == space.top


def test_ortho_gaussian_uses_conjugate():
    """Test the complement over Q(i) is taken for the Hermitian form."""
    lattice = SubspaceLattice(2, QI)
    u = lattice.span(["1", "i"])
    complement = ortho(u)
    assert complement == lattice.span(["1", "-i"])
    assert meet(u, complement) == lattice.bottom
    assert join(u, complement) == lattice.top


def test_mismatched_spaces_raise():
    """Test operations across ambient spaces or fields fail."""
    u = Subspace.full(Q, 2)
    with pytest.raises(DimensionMismatchError):
        join(u, Subspace.full(Q, 3))
    with pytest.raises(DimensionMismatchError):
        meet(u, Subspace.full(QI, 2))


def test_order(plane):
    """Test the subspace order."""
    e1 = plane.span([1, 0])
    assert leq(plane.bottom, e1)
    assert e1 <= plane.top
    assert not leq(e1, plane.span([0, 1]))


def test_ortholattice_laws_on_samples():
    """Test complements, involution and De Morgan on random subspaces."""
    rng = make_rng(1)
    for field in (Q, QI):
        lattice = SubspaceLattice(3, field)
        for _ in range(30):
            x, y = random_subspace(rng, field, 3), random_subspace(rng, field, 3)
            assert meet(x, ortho(x)) == lattice.bottom
            assert join(x, ortho(x)) == lattice.top
            assert ortho(ortho(x)) == x
            assert ortho(join(x, y)) == meet(ortho(x), ortho(y))
            assert join(x, y).dim + meet(x, y).dim == x.dim + y.dim


def test_evaluate(plane):
    """Test term evaluation under a substitution."""
    e1 = plane.span([1, 0])
    assert evaluate(parse("x | x'"), {"x": e1}, plane) == plane.top
    assert evaluate(parse("x & x'"), {"x": e1}, plane) == plane.bottom
    assert evaluate(parse("x'"), {"x": e1}, plane) == plane.span([0, 1])
    assert evaluate(parse("0 | 1"), {}, plane) == plane.top


def test_evaluate_unbound(plane):
    """Test missing variables raise UnboundVariableError."""
    with pytest.raises(UnboundVariableError) as excinfo:
        evaluate(parse("x & y"), {"x": plane.top}, plane)
    assert excinfo.value.name == "y"


def test_compiled_term_shares_subterms():
    """Test structurally equal subterms compile to one instruction."""
    x = Var("x")
    shared = CompiledTerm((x & ~x) | (x & ~x))
    assert len(shared) == 4


def test_compiled_term_handles_deep_terms(plane):
    """Test deep terms compile without recursion limits."""
    t = Var("x")
    for _ in range(3000):
        t = ~t
    assert CompiledTerm(t).evaluate({"x": plane.top}, plane) == plane.top


def test_is_tautology_on(plane):
    """Test the first failing substitution is returned."""
    subs = [{"x": plane.top}, {"x": plane.bottom}]
    assert is_tautology_on(parse("x | x'"), subs, plane) is None
    assert is_tautology_on(parse("x"), subs, plane) == {"x": plane.bottom}


def test_s_term_contract():
    """Test the complement term on random chains in L(Q^4)."""
    rng = make_rng(2)
    lattice = SubspaceLattice(4)
    t = s_term(Var("c0"), Var("c1"), Var("c2"), Var("c3"))
    for _ in range(40):
        c0, c1, c2, c3 = random_chain(rng, Q, 4)
        r = evaluate(t, {"c0": c0, "c1": c1, "c2": c2, "c3": c3}, lattice)
        assert meet(r, c2) == c0
        assert join(r, c2) == c3


def test_s_term_fixes_complements():
    """Test the complement term returns c1 when c1 already complements c2."""
    rng = make_rng(4)
    lattice = SubspaceLattice(4)
    t = s_term(Var("c0"), Var("c1"), Var("c2"), Var("c3"))
    fixed = 0
    for _ in range(40):
        c0, c1, c2, c3 = random_complement_chain(rng, Q, 4)
        if not is_complement(c1, c2, c0, c3):
            continue
        fixed += 1
        assert evaluate(t, {"c0": c0, "c1": c1, "c2": c2, "c3": c3}, lattice) == c1
    assert fixed > 0


@pytest.mark.parametrize("dim", [2, 3])
def test_s_term_on_equal_arguments(dim):
    """Test the complement term of j in [j, j] is j."""
    lattice = SubspaceLattice(dim)
    t = s_term(Var("c0"), Var("c1"), Var("c2"), Var("c3"))
    for j in [lattice.bottom, lattice.span([1] + [0] * (dim - 1)), lattice.top]:
        assert evaluate(t, dict.fromkeys(["c0", "c1", "c2", "c3"], j), lattice) == j


@pytest.fixture
def plane_frame(plane):
    """z-values of the coordinate frame of Q^2: axes and the unit point."""
    return {
        "z_bot": plane.bottom,
        "z0": plane.span([1, 0]),
        "z1": plane.span([0, 1]),
        "z2": plane.span([1, 1]),
        "z_top": plane.top,
    }


def test_xhat_fixes_unit_point(plane, plane_frame):
    """Test span(1, 1) already complements z1 on the line and is returned."""
    value = evaluate(xhat_term(2, 1), {**plane_frame, "x1": plane.span([1, 1])}, plane)
    assert value == plane.span([1, 1])


def test_xhat_of_a1_is_a_complement(plane, plane_frame):
    """Test x = z1 is projected onto the other axis, a complement of z1."""
    value = evaluate(xhat_term(2, 1), {**plane_frame, "x1": plane_frame["z1"]}, plane)
    assert value == plane.span([1, 0])
    assert is_complement(value, plane_frame["z1"], plane.bottom, plane.top)


@pytest.mark.parametrize("i", [1, 2])
def test_xhat_on_trivial_frame(space, i):
    """Test every z at j makes the projection j whatever x is."""
    j = space.span([1, 2, 0])
    sub = {"z_bot": j, "z0": j, "z1": j}
    for x in [space.bottom, space.span([0, 0, 1]), space.top]:
        assert evaluate(xhat_term(3, i), {**sub, f"x{i}": x}, space) == j


def test_identity_to_term(plane):
    """Test the identity term is 1 exactly when both sides agree."""
    rng = make_rng(6)
    elements = [plane.bottom, plane.span([1, 0]), plane.span([1, 1]), plane.top]
    for _ in range(10):
        t1 = random_term(rng, ["x", "y"], depth=3)
        t2 = random_term(rng, ["x", "y"], depth=3)
        t = identity_to_term(t1, t2)
        for a in elements:
            for b in elements:
                sub = {"x": a, "y": b}
                same = evaluate(t1, sub, plane) == evaluate(t2, sub, plane)
                assert (evaluate(t, sub, plane) == plane.top) == same


def test_interval_lattice(space):
    """Test the relative orthocomplement of an interval."""
    b = space.span([1, 0, 0])
    c = space.span([1, 0, 0], [0, 1, 0])
    interval = IntervalLattice(b, c)
    assert interval.height == 1
    assert interval.ortho(b) == c
    assert interval.ortho(c) == b
    assert interval.contains(b) and not interval.contains(space.bottom)
    assert interval.base == space.span([0, 1, 0])
    with pytest.raises(ValueError):
        IntervalLattice(c, b)


def test_interval_ortholattice_laws():
    """Test the relative orthocomplement on random interval elements."""
    rng = make_rng(8)
    for _ in range(20):
        c0, c1, _, c3 = random_chain(rng, Q, 4)
        interval = IntervalLattice(c0, c3)
        o = interval.ortho(c1)
        assert meet(c1, o) == c0
        assert join(c1, o) == c3
        assert interval.ortho(o) == c1


def test_interval_lower_isomorphism(space):
    """Test [b, c] and [0, b' & c] correspond."""
    b = space.span([1, 0, 0])
    interval = IntervalLattice(b, space.top)
    x = space.span([1, 0, 0], [0, 1, 1])
    lowered = interval.to_lower(x)
    assert lowered == space.span([0, 1, 1])
    assert interval.from_lower(lowered) == x
    assert interval.lower().top == interval.base


def test_restrict_to_is_homomorphism(space):
    """Test x -> x & a respects joins on [0, a] u [a', 1]."""
    a = space.span([1, 0, 0], [0, 1, 0])
    below = space.span([1, 0, 0])
    above = join(ortho(a), space.span([0, 1, 0]))
    assert restrict_to(a, join(below, above)) == join(
        restrict_to(a, below), restrict_to(a, above)
    )


def test_interval_iso_coordinates(space):
    """Test coordinates of [0, a] are entries at the pivots of a."""
    a = space.span([1, 0, 1], [0, 1, 0])
    iso = interval_iso(a)
    assert iso.pivots == (0, 1)
    assert not iso.is_orthonormal
    x = space.span([1, 1, 1])
    coords = iso.to_coordinates(x)
    assert coords == Subspace.span(Q, 2, [[1, 1]])
    assert iso.from_coordinates(coords) == x
    with pytest.raises(ValueError):
        iso.to_coordinates(space.span([0, 0, 1]))


def test_interval_iso_orthonormal(space):
    """Test coordinate subspaces give orthonormal coordinates."""
    iso = interval_iso(Subspace.coordinate(Q, 3, [0, 2]))
    assert iso.is_orthonormal
    assert iso.target.dim == 2


def test_maximal_chain(space):
    """Test the coordinate flag is a maximal chain with d+1 elements."""
    chain = maximal_chain(space)
    assert len(chain) == 4
    assert is_maximal_chain(chain, space)
    assert not is_maximal_chain([space.bottom, space.top], space)


def test_tensor_complex():
    """Test Q-subspaces extend to Q(i)-subspaces preserving lattice operations."""
    rng = make_rng(9)
    for _ in range(20):
        u, v = random_subspace(rng, Q, 3), random_subspace(rng, Q, 3)
        assert tensor_complex(u).field is QI
        assert tensor_complex(meet(u, v)) == meet(tensor_complex(u), tensor_complex(v))
        assert tensor_complex(ortho(u)) == ortho(tensor_complex(u))


def test_str_forms(plane):
    """Test text rendering of subspaces."""
    assert str(plane.bottom) == "0"
    assert str(plane.span([2, 4])) == "span{(1, 2)}"


def test_clear_caches(plane):
    """Test cache clearing keeps results."""
    e1 = plane.span([1, 0])
    before = ortho(e1)
    clear_caches()
    assert ortho(e1) == before


def test_product_lattice_is_coordinatewise(plane, space):
    """Test meet, join and orthocomplement act factor by factor."""
    product = ProductLattice([plane, space])
    x = (plane.span([1, 0]), space.span([1, 1, 0]))
    y = (plane.span([0, 1]), space.span([0, 0, 1]))
    assert product.meet(x, y) == (plane.bottom, space.bottom)
    assert product.join(x, y) == (plane.top, space.span([1, 1, 0], [0, 0, 1]))
    assert product.ortho(x) == (plane.span([0, 1]), space.span([1, -1, 0], [0, 0, 1]))
    assert product.bottom == (plane.bottom, space.bottom)
    assert product.top == (plane.top, space.top)
    assert product.embed(1, space.bottom) == (plane.top, space.bottom)


def test_product_lattice_contains(plane, space):
    """Test membership needs one coordinate per factor, each in its factor."""
    product = ProductLattice([plane, space])
    assert product.contains((plane.top, space.bottom))
    assert not product.contains(plane.top)
    assert not product.contains((plane.top,))
    assert not product.contains((space.bottom, plane.top))
    with pytest.raises(ValueError):
        ProductLattice([])


def test_product_lattice_evaluates_terms(plane, space):
    """Test a term's value in a product is the tuple of its values in the factors."""
    rng = make_rng(9)
    product = ProductLattice([plane, space])
    for _ in range(20):
        t = random_term(rng, ["x", "y"], depth=3)
        sub = {v: (random_subspace(rng, Q, 2), random_subspace(rng, Q, 3)) for v in ["x", "y"]}
        left = evaluate(t, {v: a for v, (a, _) in sub.items()}, plane)
        right = evaluate(t, {v: b for v, (_, b) in sub.items()}, space)
        assert evaluate(t, sub, product) == (left, right)
