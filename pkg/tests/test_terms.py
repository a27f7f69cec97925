"""Tests for the terms module."""

import pytest

from molq.parser import parse
from molq.terms import (
    ONE,
    ZERO,
    Join,
    Meet,
    Ortho,
    UnboundVariableError,
    Var,
    frame_variables,
    identity_to_term,
    join_all,
    meet_all,
    modular_law_term,
    orthomodular_law_term,
    rel_ortho,
    s_term,
    substitute,
    tdn_term,
    tdn_variables,
    to_text,
    xhat_term,
)

x, y, z = Var("x"), Var("y"), Var("z")


def test_operator_overloads():
    """Test &, | and ~ build meets, joins and orthocomplements."""
    assert (x & y) == Meet(x, y)
    assert (x | y) == Join(x, y)
    assert ~x == Ortho(x)


def test_to_text():
    """Test the fully parenthesized rendering."""
    assert to_text(x & ~y) == "(x & y')"
    assert to_text((x | y) & ZERO) == "((x | y) & 0)"
    assert to_text(~~ONE) == "1''"
    assert str(x | y) == "(x | y)"


def test_variables_sorted():
    """Test variables are distinct and sorted."""
    t = parse("z & (x1 | x10) & x2 | z'")
    assert t.variables() == ["x1", "x10", "x2", "z"]
    assert ONE.variables() == []


def test_size_and_depth():
    """Test node counts and depth."""
    t = x & ~y
    assert t.size() == 4
    assert t.depth() == 3
    assert x.size() == 1


def test_substitute():
    """Test replacing variables by terms."""
    t = x & ~y
    assert substitute(t, {"y": z | x}) == Meet(x, Ortho(Join(z, x)))
    assert substitute(t, {}) == t


def test_substitute_strict():
    """Test strict substitution reports unmapped variables."""
    with pytest.raises(UnboundVariableError) as excinfo:
        substitute(x & y, {"x": ONE}, strict=True)
    assert excinfo.value.name == "y"


def test_join_all_and_meet_all():
    """Test folds and their empty cases."""
    assert join_all([]) == ZERO
    assert meet_all([]) == ONE
    assert join_all([x]) == x
    assert join_all([x, y, z]) == Join(Join(x, y), z)
    assert meet_all([x, y]) == Meet(x, y)


def test_rel_ortho_and_identity_shapes():
    """Test the shapes of the derived binary terms."""
    assert rel_ortho(x, y, z) == Join(Meet(Ortho(x), z), y)
    assert identity_to_term(x, y) == Join(Meet(x, y), Meet(Ortho(x), Ortho(y)))


def test_s_term_variables():
    """Test the complement term uses exactly its four arguments."""
    t = s_term(Var("c0"), Var("c1"), Var("c2"), Var("c3"))
    assert t.variables() == ["c0", "c1", "c2", "c3"]


def test_frame_variables():
    """Test canonical variable lists."""
    assert frame_variables(2) == ["z_bot", "z0", "z1", "z2", "z_top"]
    assert tdn_variables(2, 3) == ["z_bot", "z0", "z1", "z2", "z_top", "x1", "x2", "x3"]
    assert len(tdn_variables(3, 4)) == 3 + 3 + 4


def test_xhat_term():
    """Test the projected point term mentions its frame part and one x."""
    t = xhat_term(2, 3)
    assert set(t.variables()) == {"z_bot", "z0", "z1", "x3"}
    with pytest.raises(ValueError):
        xhat_term(1, 1)
    with pytest.raises(ValueError):
        xhat_term(2, 0)


def test_tdn_term_variables():
    """Test the witness term variables; the last frame axis does not occur."""
    t = tdn_term(3, 2)
    assert t.variables() == sorted(["z_bot", "z0", "z1", "z2", "z_top", "x1", "x2"])
    assert "z3" not in t.variables()
    assert set(t.variables()) <= set(tdn_variables(3, 2))


def test_tdn_term_rejects_small_parameters():
    """Test d and n must be at least 2."""
    for d, n in [(1, 2), (2, 1), (0, 0)]:
        with pytest.raises(ValueError):
            tdn_term(d, n)


def test_tdn_term_reparses():
    """Test the printed witness term parses back to the same tree."""
    t = tdn_term(2, 3)
    assert parse(to_text(t)) == t


def test_law_terms():
    """Test the built-in law terms."""
    assert modular_law_term().variables() == ["x", "y", "z"]
    assert orthomodular_law_term().variables() == ["x", "y"]


def _ortho_chain(base, depth):
    t = base
    for _ in range(depth):
        t = ~t
    return t


def test_deep_terms_without_recursion():
    """Test size, depth, printing and repr on terms nested 1000 levels deep."""
    t = _ortho_chain(x, 1000)
    assert t.size() == 1001
    assert t.depth() == 1001
    assert to_text(t) == "x" + "'" * 1000
    assert repr(t).startswith("Ortho(Ortho(")
    assert repr(t).endswith("Var('x')" + ")" * 1000)


def test_deep_equality_and_hash():
    """Test structural equality and hashing of deep terms."""
    a, b = _ortho_chain(x, 1000), _ortho_chain(x, 1000)
    assert a == b
    assert hash(a) == hash(b)
    assert a != _ortho_chain(y, 1000)
    assert a != _ortho_chain(x, 999)
    assert len({a, b}) == 1


def test_deep_substitute():
    """Test substitution into a deep term."""
    t = _ortho_chain(x & y, 1000)
    assert substitute(t, {"y": z}) == _ortho_chain(x & z, 1000)


def test_shared_subterms():
    """Test shared nodes fold once and still count per occurrence."""
    t = x & y
    for _ in range(40):
        t = t | t
    assert t.size() == 4 * 2**40 - 1
    assert t.depth() == 42
