"""Tests for the term parser module."""

import tempfile
from pathlib import Path

import pytest

from molq.parser import TermParser, TermSyntaxError, parse
from molq.sampling import make_rng, random_term
from molq.terms import ONE, ZERO, Join, Meet, Ortho, Var, join_all, to_text

DEEP = 1000


@pytest.fixture
def term_file():
    """Create a temporary term file with comments and blank lines."""
    data = """# laws
x | x'

(x & y) | z
"""
    with tempfile.NamedTemporaryFile(mode="w", encoding="utf-8", suffix=".txt", delete=False) as f:
        f.write(data)
        temp_path = f.name

    yield temp_path

    Path(temp_path).unlink()


def test_parse_meet_with_ortho():
    """Test postfix binds tighter than meet."""
    assert parse("x1 & x2'") == Meet(Var("x1"), Ortho(Var("x2")))


def test_precedence_meet_over_join():
    """Test & binds tighter than |."""
    assert parse("a | b & c") == Join(Var("a"), Meet(Var("b"), Var("c")))


def test_left_associativity():
    """Test binary operators associate to the left."""
    assert parse("a & b & c") == Meet(Meet(Var("a"), Var("b")), Var("c"))
    assert parse("a | b | c") == Join(Join(Var("a"), Var("b")), Var("c"))


def test_stacked_postfix():
    """Test repeated orthocomplements stack."""
    assert parse("x''") == Ortho(Ortho(Var("x")))
    assert parse("(x | y)'") == Ortho(Join(Var("x"), Var("y")))


def test_constants_and_whitespace():
    """Test constants and insignificant whitespace."""
    assert parse(" 0 |\t1 ") == Join(ZERO, ONE)
    assert parse("x_0") == Var("x_0")


def test_tokenize_positions():
    """Test tokens carry their offsets."""
    tokens = TermParser("x1 & y'").tokenize()
    assert [(t.kind, t.text, t.position) for t in tokens] == [
        ("ident", "x1", 0),
        ("op", "&", 3),
        ("ident", "y", 5),
        ("op", "'", 6),
    ]


@pytest.mark.parametrize(
    "text,position",
    [
        ("x &", 3),
        ("(x | y", 6),
        ("x $ y", 2),
        ("x y", 2),
        ("", 0),
        (")", 0),
        ("12", 0),
        ("(x y", 3),
    ],
)
def test_syntax_errors(text, position):
    """Test malformed input reports the failing position."""
    with pytest.raises(TermSyntaxError) as excinfo:
        parse(text)
    assert excinfo.value.position == position


def test_print_parse_round_trip():
    """Test printed random terms reparse to the same tree."""
    rng = make_rng(11)
    for _ in range(100):
        t = random_term(rng, ["x", "y", "z"], depth=5)
        assert parse(to_text(t)) == t


def test_parse_file(term_file):
    """Test term files skip comments and blank lines."""
    terms = list(TermParser.parse_file(term_file))
    assert terms == [parse("x | x'"), parse("(x & y) | z")]


def test_parse_file_reports_line(tmp_path):
    """Test errors in term files carry the line number."""
    path = tmp_path / "bad.txt"
    path.write_text("x\n(x &\n", encoding="utf-8")
    with pytest.raises(TermSyntaxError) as excinfo:
        list(TermParser.parse_file(str(path)))
    assert "line 2" in str(excinfo.value)


def test_deep_parentheses():
    """Test nesting far past the interpreter recursion limit."""
    assert parse("(" * DEEP + "x" + ")" * DEEP) == Var("x")
    assert parse("(" * DEEP + "x | y" + ")" * DEEP) == Join(Var("x"), Var("y"))


def test_deep_unclosed_parenthesis():
    """Test a missing closing parenthesis deep inside reports the end of input."""
    text = "(" * DEEP + "x"
    with pytest.raises(TermSyntaxError) as excinfo:
        parse(text)
    assert excinfo.value.message == "Expected closing parenthesis"
    assert excinfo.value.position == len(text)


def test_deep_postfix_round_trip():
    """Test long orthocomplement chains print and reparse."""
    t = parse("x" + "'" * DEEP)
    assert t.depth() == DEEP + 1
    assert parse(to_text(t)) == t


def test_deep_right_nested_round_trip():
    """Test right-nested joins print with deep parentheses and reparse."""
    t = Var("x0")
    for i in range(1, DEEP):
        t = Join(Var(f"x{i}"), t)
    text = to_text(t)
    assert text.startswith("(x999 | (x998 | ")
    assert parse(text) == t
    assert parse(text) != join_all(Var(f"x{i}") for i in reversed(range(DEEP)))
