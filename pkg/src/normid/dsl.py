"""Textual format for identities.

Grammar (whitespace-insensitive between tokens):

    file      := header? expr ("=" "0")?
    header    := "n" "=" integer ";"
    expr      := term (("+" | "-") term)*
    term      := (rational "*")? atom
    atom      := "N" "{" signed_idx ("," signed_idx)* "}"
    signed_idx:= "-"? positive_integer
    rational  := "-"? digits ("/" digits)?

N{1,-2,3} denotes ||x_1 - x_2 + x_3||^2: a "-" inside the braces puts
that index in the minus part.  A leading "-" between terms negates the
next term's coefficient.  Coefficients are exact rationals only; the
ambient index count defaults to the largest index mentioned and can be
raised with the "n = ...;" header.  Suggested file extension: .nid.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .core import MAX_INDICES, card, indices_of
from .signed import SignedIdentity, SignedTerm

_WS = " \t\r\n"


class ParseError(ValueError):
    """Syntax or semantic error in identity text, with 1-based position."""

    def __init__(self, source: str, line: int, column: int, message: str):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.source = source
        self.line = line
        self.column = column
        self.message = message


class _Parser:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source
        self.pos = 0

    # -- low-level machinery

    def fail(self, message: str, pos: int | None = None) -> ParseError:
        at = self.pos if pos is None else pos
        line = self.text.count("\n", 0, at) + 1
        column = at - self.text.rfind("\n", 0, at)
        return ParseError(self.source, line, column, message)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in _WS:
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, literal: str) -> bool:
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.take(literal):
            got = self.peek() or "end of input"
            raise self.fail(f"expected {literal!r}, got {got!r}")

    def digits(self) -> tuple[int, int]:
        """(value, start position); at least one digit required."""
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            got = self.peek() or "end of input"
            raise self.fail(f"expected digit, got {got!r}", start)
        return int(self.text[start : self.pos]), start

    # -- grammar productions

    def rational(self) -> Fraction:
        self.skip_ws()
        negative = self.take("-")
        numerator, _ = self.digits()
        if self.take("/"):
            denominator, dpos = self.digits()
            if denominator == 0:
                raise self.fail("zero denominator", dpos)
        else:
            denominator = 1
        value = Fraction(numerator, denominator)
        return -value if negative else value

    def signed_index(self) -> tuple[int, bool, int]:
        """(index, is_minus, start position)."""
        self.skip_ws()
        start = self.pos
        minus = self.take("-")
        value, vpos = self.digits()
        if value == 0:
            raise self.fail("index must be a positive integer", vpos)
        if value > MAX_INDICES:
            raise self.fail(f"index {value} exceeds the {MAX_INDICES}-index limit", vpos)
        return value, minus, start

    def atom(self, declared_n: int | None) -> tuple[int, int]:
        """(plus mask, minus mask) for one N{...} atom."""
        self.expect("N")
        self.expect("{")
        plus = 0
        minus = 0
        seen: set[int] = set()
        while True:
            index, is_minus, start = self.signed_index()
            if index in seen:
                raise self.fail(f"duplicate index {index} in one atom", start)
            if declared_n is not None and index > declared_n:
                raise self.fail(
                    f"index {index} exceeds declared n = {declared_n}", start
                )
            seen.add(index)
            bit = 1 << (index - 1)
            if is_minus:
                minus |= bit
            else:
                plus |= bit
            if self.take(","):
                continue
            self.expect("}")
            return plus, minus

    def term(self, declared_n: int | None) -> SignedTerm:
        self.skip_ws()
        coeff = Fraction(1)
        if self.peek() == "-" or self.peek().isdigit():
            coeff = self.rational()
            self.expect("*")
        plus, minus = self.atom(declared_n)
        return SignedTerm(plus, minus, coeff)

    def header(self) -> int | None:
        """Parse "n = <int>;" when present."""
        if not self.take("n"):
            return None
        if not self.take("="):
            # A lone "n" cannot start anything else in this grammar.
            raise self.fail("expected '=' after 'n' header keyword")
        value, vpos = self.digits()
        if value < 1 or value > MAX_INDICES:
            raise self.fail(f"header n must lie in 1..{MAX_INDICES}", vpos)
        self.expect(";")
        return value

    def file(self) -> tuple[int, SignedIdentity]:
        self.skip_ws()
        declared = self.header()
        terms = [self.term(declared)]
        sign_flips = [False]
        while True:
            self.skip_ws()
            if self.take("+"):
                flip = False
            elif self.peek() == "-":
                self.pos += 1
                flip = True
            else:
                break
            terms.append(self.term(declared))
            sign_flips.append(flip)
        if self.take("="):
            value, vpos = self.digits()
            if value != 0:
                raise self.fail("right-hand side must be 0", vpos)
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.fail(f"expected end of input, got {self.peek()!r}")
        signed_terms = [
            SignedTerm(t.plus, t.minus, -t.coeff if flip else t.coeff)
            for t, flip in zip(terms, sign_flips)
        ]
        mentioned = 0
        for t in signed_terms:
            mentioned = max(mentioned, t.support.bit_length())
        n = declared if declared is not None else mentioned
        return n, SignedIdentity(n, signed_terms)


def parse(text: str, source: str = "<string>") -> tuple[int, SignedIdentity]:
    """Parse identity text; raises ParseError with source/line/column."""
    return _Parser(text, source).file()


# ---------------------------------------------------------------------------
# Serialization


def _ordered_terms(sid: SignedIdentity) -> list[tuple[int, int, Fraction]]:
    # Largest supports first, then ascending occupancy word; this is the
    # order the identities are conventionally written in.
    coeffs = sid.coefficients()
    keys = sorted(coeffs, key=lambda k: (-card(k[0] | k[1]), k[0] | k[1], k[1]))
    return [(plus, minus, coeffs[(plus, minus)]) for plus, minus in keys]


def _atom_text(plus: int, minus: int) -> str:
    parts = [str(i) for i in indices_of(plus)] + [f"-{i}" for i in indices_of(minus)]
    parts.sort(key=lambda s: abs(int(s)))
    return "N{" + ",".join(parts) + "}"


def _dsl_text(n: int, ordered: list[tuple[int, int, Fraction]]) -> str:
    mentioned = max((plus | minus for plus, minus, _ in ordered), default=0)
    pieces = []
    if mentioned.bit_length() != n:
        pieces.append(f"n = {n};")
    if not ordered:
        pieces.append("0*N{1}")
    for position, (plus, minus, coeff) in enumerate(ordered):
        atom = _atom_text(plus, minus)
        magnitude = abs(coeff)
        weighted = atom if magnitude == 1 else f"{magnitude}*{atom}"
        if position == 0:
            pieces.append(weighted if coeff > 0 else f"{coeff}*{atom}")
        else:
            pieces.append("+" if coeff > 0 else "-")
            pieces.append(weighted)
    pieces.append("= 0")
    return " ".join(pieces)


def _latex_norm(plus: int, minus: int) -> str:
    chunks = []
    for i in sorted(indices_of(plus) + indices_of(minus)):
        sign = "-" if minus >> (i - 1) & 1 else "+"
        chunks.append((sign, f"x_{{{i}}}"))
    body = chunks[0][1] if chunks[0][0] == "+" else f"-{chunks[0][1]}"
    for sign, var in chunks[1:]:
        body += f" {sign} {var}"
    return rf"\left\lVert {body} \right\rVert^2"


def _latex_coeff(value: Fraction) -> str:
    if value.denominator == 1:
        return str(abs(value.numerator))
    return rf"\tfrac{{{abs(value.numerator)}}}{{{value.denominator}}}"


def _latex_text(ordered: list[tuple[int, int, Fraction]]) -> str:
    if not ordered:
        return "0 = 0"
    pieces = []
    for position, (plus, minus, coeff) in enumerate(ordered):
        magnitude = _latex_coeff(coeff)
        weighted = _latex_norm(plus, minus)
        if magnitude != "1":
            weighted = f"{magnitude} {weighted}"
        if position == 0:
            pieces.append(weighted if coeff > 0 else f"-{weighted}")
        else:
            pieces.append("+" if coeff > 0 else "-")
            pieces.append(weighted)
    pieces.append("= 0")
    return " ".join(pieces)


def identity_payload(n: int, sid: SignedIdentity) -> dict:
    """JSON-ready description; coefficients as exact "p/q" strings."""
    return {
        "n": n,
        "terms": [
            {
                "coeff": str(coeff),
                "plus": list(indices_of(plus)),
                "minus": list(indices_of(minus)),
            }
            for plus, minus, coeff in _ordered_terms(sid)
        ],
    }


def serialize(n: int, sid: SignedIdentity, fmt: str = "dsl") -> str:
    """Render an identity; "dsl" output re-parses to an equal identity."""
    ordered = _ordered_terms(sid)
    if fmt == "dsl":
        return _dsl_text(n, ordered)
    if fmt == "latex":
        return _latex_text(ordered)
    if fmt == "json":
        return json.dumps(identity_payload(n, sid), indent=2)
    raise ValueError(f"unknown format {fmt!r} (expected dsl, latex, or json)")
