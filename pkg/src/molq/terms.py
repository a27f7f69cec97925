"""Ortholattice terms and the derived terms used by the test-set constructions.

Terms are immutable trees built from variables, the constants 0 and 1, meet,
join and orthocomplement. Python operators are overloaded for convenience:
``x & y`` is a meet, ``x | y`` a join and ``~x`` the orthocomplement.

Every traversal in this module uses an explicit stack, so terms nested far
deeper than the interpreter's recursion limit print, compare and rewrite.
"""

from dataclasses import dataclass
from functools import reduce
from itertools import zip_longest
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, TypeVar

T = TypeVar("T")


class UnboundVariableError(ValueError):
    """Raised when a variable has no value in a substitution."""

    def __init__(self, name: str):
        super().__init__(f"Unbound variable: {name}")
        self.name = name


class Term:
    """Base class of the term AST.

    Equality and hashing are structural and computed without recursion.
    """

    def __and__(self, other: "Term") -> "Term":
        return Meet(self, other)

    def __or__(self, other: "Term") -> "Term":
        return Join(self, other)

    def __invert__(self) -> "Term":
        return Ortho(self)

    def children(self) -> Tuple["Term", ...]:
        return ()

    def label(self) -> Tuple[str, ...]:
        """Node label; with the fixed arities, the preorder labels identify a term."""
        return (type(self).__name__,)

    def labels(self) -> Iterator[Tuple[str, ...]]:
        """Node labels in preorder."""
        stack: List[Term] = [self]
        while stack:
            node = stack.pop()
            yield node.label()
            stack.extend(reversed(node.children()))

    def variables(self) -> List[str]:
        """Distinct variable names, sorted lexicographically."""
        names = set()
        stack: List[Term] = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, Var):
                names.add(node.name)
            stack.extend(node.children())
        return sorted(names)

    def size(self) -> int:
        return fold(self, lambda leaf: 1, lambda node, sizes: 1 + sum(sizes))

    def depth(self) -> int:
        return fold(self, lambda leaf: 1, lambda node, depths: 1 + max(depths))

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        if self is other:
            return True
        return all(a == b for a, b in zip_longest(self.labels(), other.labels()))

    def __hash__(self):
        return hash(tuple(self.labels()))

    def __repr__(self):
        return fold(
            self,
            _repr_leaf,
            lambda node, parts: f"{type(node).__name__}({', '.join(parts)})",
        )

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=False, repr=False)
class Var(Term):
    name: str

    def label(self):
        return ("Var", self.name)


@dataclass(frozen=True, eq=False, repr=False)
class Zero(Term):
    pass


@dataclass(frozen=True, eq=False, repr=False)
class One(Term):
    pass


@dataclass(frozen=True, eq=False, repr=False)
class Meet(Term):
    left: Term
    right: Term

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False, repr=False)
class Join(Term):
    left: Term
    right: Term

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False, repr=False)
class Ortho(Term):
    arg: Term

    def children(self):
        return (self.arg,)


ZERO = Zero()
ONE = One()


def fold(term: Term, leaf: Callable[[Term], T], node: Callable[[Term, Sequence[T]], T]) -> T:
    """Evaluate ``term`` bottom-up with an explicit stack.

    Args:
        term: Term to fold
        leaf: Value of a variable or constant
        node: Value of an operator node from the values of its children

    Returns:
        The value of the root. Shared subterms are folded once; leaves are
        visited left to right.
    """
    done: Dict[int, T] = {}
    stack: List[Tuple[Term, bool]] = [(term, False)]
    while stack:
        current, expanded = stack.pop()
        if id(current) in done:
            continue
        children = current.children()
        if not children:
            done[id(current)] = leaf(current)
        elif expanded:
            done[id(current)] = node(current, [done[id(c)] for c in children])
        else:
            stack.append((current, True))
            stack.extend((c, False) for c in reversed(children))
    return done[id(term)]


def _repr_leaf(term: Term) -> str:
    if isinstance(term, Var):
        return f"Var({term.name!r})"
    return f"{type(term).__name__}()"


def _text_leaf(term: Term) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Zero):
        return "0"
    if isinstance(term, One):
        return "1"
    raise TypeError(f"Not a term: {term!r}")


def _text_node(term: Term, parts: Sequence[str]) -> str:
    if isinstance(term, Meet):
        return f"({parts[0]} & {parts[1]})"
    if isinstance(term, Join):
        return f"({parts[0]} | {parts[1]})"
    if isinstance(term, Ortho):
        return f"{parts[0]}'"
    raise TypeError(f"Not a term: {term!r}")


def to_text(term: Term) -> str:
    """Fully parenthesized rendering accepted back by the parser."""
    if not isinstance(term, Term):
        raise TypeError(f"Not a term: {term!r}")
    return fold(term, _text_leaf, _text_node)


def _rebuild(term: Term, parts: Sequence[Term]) -> Term:
    if isinstance(term, Meet):
        return Meet(parts[0], parts[1])
    if isinstance(term, Join):
        return Join(parts[0], parts[1])
    return Ortho(parts[0])


def substitute(term: Term, mapping: Mapping[str, Term], strict: bool = False) -> Term:
    """Replace variables by terms.

    Args:
        term: Term to rewrite
        mapping: Variable name to replacement term
        strict: Raise on variables missing from ``mapping`` instead of keeping them

    Raises:
        UnboundVariableError: In strict mode, for the leftmost unmapped variable
    """

    def leaf(node: Term) -> Term:
        if isinstance(node, Var):
            if node.name in mapping:
                return mapping[node.name]
            if strict:
                raise UnboundVariableError(node.name)
        return node

    return fold(term, leaf, _rebuild)


def join_all(terms: Iterable[Term]) -> Term:
    """Left-associated join; the empty join is 0."""
    items = list(terms)
    return reduce(Join, items) if items else ZERO


def meet_all(terms: Iterable[Term]) -> Term:
    """Left-associated meet; the empty meet is 1."""
    items = list(terms)
    return reduce(Meet, items) if items else ONE


def rel_ortho(x: Term, b: Term, c: Term) -> Term:
    """Relative orthocomplement (x' & c) | b of x in the interval [b, c]."""
    return (~x & c) | b


def identity_to_term(t1: Term, t2: Term) -> Term:
    """Term that evaluates to 1 in a MOL exactly when t1 and t2 evaluate equal."""
    return (t1 & t2) | (~t1 & ~t2)


def s_term(y0: Term, y1: Term, y2: Term, y3: Term) -> Term:
    """Complement of y2 in [y0, y3] that fixes y1 when y1 already is one."""
    d1 = rel_ortho(y1 & y2, y0, y1)
    return rel_ortho(y1 | y2, d1, y3)


Z_BOT = "z_bot"
Z_TOP = "z_top"


def frame_variables(d: int) -> List[str]:
    """Canonical z-variables of a d-frame: z_bot, z0..zd, z_top."""
    return [Z_BOT] + [f"z{k}" for k in range(d + 1)] + [Z_TOP]


def tdn_variables(d: int, n: int) -> List[str]:
    """Canonical variable order of tdn_term(d, n)."""
    return frame_variables(d) + [f"x{i}" for i in range(1, n + 1)]


def xhat_term(d: int, i: int) -> Term:
    """Projection of x_i onto a complement of z1 inside [z_bot, z0 | z1]."""
    if d < 2:
        raise ValueError(f"xhat_term requires d >= 2, got {d}")
    if i < 1:
        raise ValueError(f"xhat_term requires i >= 1, got {i}")
    z_bot, z0, z1 = Var(Z_BOT), Var("z0"), Var("z1")
    line = z0 | z1
    return s_term(z_bot, (Var(f"x{i}") & line) | z_bot, z1, line)


def tdn_term(d: int, n: int) -> Term:
    """Witness term that is 1 on every test set with fewer than n elements."""
    if d < 2 or n < 2:
        raise ValueError(f"tdn_term requires d >= 2 and n >= 2, got d={d}, n={n}")
    hats = [xhat_term(d, i) for i in range(1, n + 1)]
    pairs = [hats[i] & hats[j] for i in range(n) for j in range(i + 1, n)]
    axes = [Var(f"z{k}") for k in range(1, d)]
    return join_all([~Var(Z_TOP), *axes, *pairs])


def modular_law_term() -> Term:
    """The modular law x & (y | (x & z)) = (x & y) | (x & z) as a single term."""
    x, y, z = Var("x"), Var("y"), Var("z")
    return identity_to_term(x & (y | (x & z)), (x & y) | (x & z))


def orthomodular_law_term() -> Term:
    """The orthomodular law x | (x' & (x | y)) = x | y as a single term."""
    x, y = Var("x"), Var("y")
    return identity_to_term(x | (~x & (x | y)), x | y)
