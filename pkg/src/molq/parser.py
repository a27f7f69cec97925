"""Parser for ortholattice term text.

This module turns term text into :mod:`molq.terms` trees. Grammar, from loosest
to tightest binding::

    expr    := meet ("|" meet)*
    meet    := postfix ("&" postfix)*
    postfix := atom "'"*
    atom    := IDENT | "0" | "1" | "(" expr ")"

Identifiers match ``[A-Za-z_][A-Za-z0-9_]*``. Binary operators associate to
the left and whitespace is insignificant.
"""

import re
from dataclasses import dataclass
from typing import Iterator, List

from molq.terms import ONE, ZERO, Join, Meet, Ortho, Term, Var


class TermSyntaxError(ValueError):
    """Malformed term text; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


@dataclass
class Token:
    """A lexical token with its offset in the source text."""

    kind: str
    text: str
    position: int
class TermParser:
    """Operator-precedence parser for the term grammar."""

    # Pattern for one token; order matters (identifiers before stray digits)
    TOKEN_PATTERN = re.compile(
        r"(?P<space>\s+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
        r"|(?P<const>[01](?![0-9]))|(?P<op>[&|'()])"
    )

    # Binding strength of the binary operators; both associate to the left
    PRECEDENCE = {"|": 1, "&": 2}

    # Lines starting with this marker are skipped in term files
    COMMENT_PREFIX = "#"

    def __init__(self, text: str = ""):
        """Initialize parser with source text.

        Args:
            text: Term text to parse
        """
        self.text = text
        self._operands: List[Term] = []
        self._operators: List[Token] = []

    def tokenize(self) -> List[Token]:
        """Split the source text into tokens.

        Raises:
            TermSyntaxError: On a character that starts no token
        """
        tokens = []
        pos = 0
        while pos < len(self.text):
            match = self.TOKEN_PATTERN.match(self.text, pos)
            if not match:
                raise TermSyntaxError(f"Unexpected character {self.text[pos]!r}", pos)
            kind = match.lastgroup
            if kind != "space":
                tokens.append(Token(kind, match.group(), pos))
            pos = match.end()
        return tokens

    def parse(self) -> Term:
        """Parse the whole source text into a term.

        Operands and pending operators live on explicit stacks, so nesting
        depth is bounded by memory only.

        Raises:
            TermSyntaxError: If the text does not conform to the grammar
        """
        self._operands = []
        self._operators = []
        expect_operand = True
        for token in self.tokenize():
            if expect_operand:
                if token.kind == "ident":
                    self._operands.append(Var(token.text))
                    expect_operand = False
                elif token.kind == "const":
                    self._operands.append(ZERO if token.text == "0" else ONE)
                    expect_operand = False
                elif token.text == "(":
                    self._operators.append(token)
                else:
                    raise TermSyntaxError(f"Unexpected token {token.text!r}", token.position)
            elif token.text == "'":
                self._operands.append(Ortho(self._operands.pop()))
            elif token.text in self.PRECEDENCE:
                self._reduce_while(self.PRECEDENCE[token.text])
                self._operators.append(token)
                expect_operand = True
            elif token.text == ")":
                self._reduce_while(0)
                if not self._operators:
                    raise TermSyntaxError("Unexpected token ')'", token.position)
                self._operators.pop()
            elif self._open_parenthesis():
                raise TermSyntaxError("Expected closing parenthesis", token.position)
            else:
                raise TermSyntaxError(f"Unexpected token {token.text!r}", token.position)
        if expect_operand:
            raise TermSyntaxError("Unexpected end of input", len(self.text))
        self._reduce_while(0)
        if self._operators:
            raise TermSyntaxError("Expected closing parenthesis", len(self.text))
        return self._operands[0]

    def _open_parenthesis(self) -> bool:
        return any(op.text == "(" for op in self._operators)

    def _reduce_while(self, precedence: int) -> None:
        """Apply stacked binary operators binding at least as tight as ``precedence``."""
        while self._operators and self._operators[-1].text != "(":
            if self.PRECEDENCE[self._operators[-1].text] < precedence:
                return
            op = self._operators.pop()
            right = self._operands.pop()
            left = self._operands.pop()
            self._operands.append(Meet(left, right) if op.text == "&" else Join(left, right))

    @classmethod
    def parse_file(cls, file_path: str) -> Iterator[Term]:
        """Parse a term file, one term per line.

        Blank lines and lines starting with ``#`` are skipped.

        Args:
            file_path: Path to the term file

        Yields:
            Parsed terms in file order

        Raises:
            TermSyntaxError: With the line number prepended to the message
        """
        with open(file_path, "r", encoding="utf-8") as f:
            for line_number, line in enumerate(f, 1):
                line = line.strip()
                if not line or line.startswith(cls.COMMENT_PREFIX):
                    continue
                try:
                    yield cls(line).parse()
                except TermSyntaxError as e:
                    raise TermSyntaxError(f"line {line_number}: {e.message}", e.position) from e


def parse(text: str) -> Term:
    """Parse term text into an AST."""
    return TermParser(text).parse()
