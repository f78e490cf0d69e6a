"""Formula ASTs, parser and printer.

Surface syntax (ASCII)::

    atom        [a-z][a-z0-9_]*
    constants   true  false
    unary       ~A   []A   <>A
    binary      A & B   A | B   A -> B   A <-> B
    rules       B => H          (normality conditional)
                O(H|B)  O(H)    (conditional obligation, O(H) = O(H|true))
                OH(H|B) OH(H)   (Hanssonian obligation, queries only)

Precedence, tightest first: ``~ [] <>``, ``&``, ``|``, ``->``, ``<->``.
``->`` associates to the right, the other binary connectives to the left.

Inside ``O(...)`` the first ``|`` at parenthesis depth zero separates the
head from the body, so a disjunctive head must be parenthesized:
``O((x | y) | a)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "Formula", "Atom", "Top", "Bottom", "Not", "And", "Or", "Implies", "Iff",
    "Box", "Diamond", "TOP", "BOTTOM", "Rule", "Query",
    "NORMALITY", "OBLIGATION",
    "FormulaSyntaxError", "NestingError",
    "parse_boolean", "parse_alethic", "parse_query", "parse_rule",
    "pretty_print", "atoms_of", "is_boolean", "is_flat", "conjoin", "disjoin",
    "subformulas",
]


class FormulaSyntaxError(ValueError):
    """Raised on malformed input. ``pos`` is the character offset."""

    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
            if text:
                message += f": {text!r}"
        super().__init__(message)


class NestingError(FormulaSyntaxError):
    """A modal or conditional operator occurs where only Boolean formulas are allowed."""


# ---------------------------------------------------------------------------
# AST

class Formula:
    """Base class of all formula nodes. Nodes are immutable and hashable."""

    __slots__ = ()

    def __str__(self) -> str:
        return pretty_print(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self) -> str:
        return "TOP"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self) -> str:
        return "BOTTOM"


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    arg: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    arg: Formula


BINARY = (And, Or, Implies, Iff)
MODAL = (Box, Diamond)

NORMALITY = "normality"
OBLIGATION = "obligation"


@dataclass(frozen=True)
class Rule:
    """A normality conditional ``body => head`` or an obligation ``O(head|body)``."""

    kind: str
    body: Formula
    head: Formula

    def __post_init__(self):
        if self.kind not in (NORMALITY, OBLIGATION):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        for part in (self.body, self.head):
            if not is_boolean(part):
                raise NestingError(f"rule parts must be Boolean, got {pretty_print(part)!r}")

    def __str__(self) -> str:
        if self.kind == NORMALITY:
            return f"{pretty_print(self.body)} => {pretty_print(self.head)}"
        return _print_dyadic("O", self.head, self.body)


@dataclass(frozen=True)
class Query:
    """One of: ``alethic`` (``formula`` set), or ``normality`` / ``obligation`` /
    ``hansson`` (``body`` and ``head`` set)."""

    kind: str
    formula: Formula | None = None
    body: Formula | None = None
    head: Formula | None = None

    KINDS = ("alethic", NORMALITY, OBLIGATION, "hansson")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown query kind {self.kind!r}")
        if self.kind == "alethic":
            if self.formula is None or self.body is not None or self.head is not None:
                raise ValueError("alethic query carries exactly one formula")
            if not is_flat(self.formula):
                raise NestingError("modal operator nested inside a modal operator")
        else:
            if self.formula is not None or self.body is None or self.head is None:
                raise ValueError(f"{self.kind} query carries a body and a head")
            for part in (self.body, self.head):
                if not is_boolean(part):
                    raise NestingError(f"{self.kind} query parts must be Boolean")

    @classmethod
    def alethic(cls, formula: Formula) -> "Query":
        return cls("alethic", formula=formula)

    @classmethod
    def normality(cls, body: Formula, head: Formula) -> "Query":
        return cls(NORMALITY, body=body, head=head)

    @classmethod
    def obligation(cls, body: Formula, head: Formula) -> "Query":
        return cls(OBLIGATION, body=body, head=head)

    @classmethod
    def hansson(cls, body: Formula, head: Formula) -> "Query":
        return cls("hansson", body=body, head=head)

    def __str__(self) -> str:
        if self.kind == "alethic":
            return pretty_print(self.formula)
        if self.kind == NORMALITY:
            return f"{pretty_print(self.body)} => {pretty_print(self.head)}"
        return _print_dyadic("O" if self.kind == OBLIGATION else "OH", self.head, self.body)


# ---------------------------------------------------------------------------
# Structural helpers

def subformulas(phi: Formula) -> Iterator[Formula]:
    """Pre-order traversal."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, (Not, Box, Diamond)):
            stack.append(node.arg)
        elif isinstance(node, BINARY):
            stack.append(node.right)
            stack.append(node.left)


def is_boolean(phi: Formula) -> bool:
    return not any(isinstance(node, MODAL) for node in subformulas(phi))


def is_flat(phi: Formula) -> bool:
    """True when no modal operator occurs under another one."""
    if isinstance(phi, MODAL):
        return is_boolean(phi.arg)
    if isinstance(phi, Not):
        return is_flat(phi.arg)
    if isinstance(phi, BINARY):
        return is_flat(phi.left) and is_flat(phi.right)
    return True


def atoms_of(*items) -> tuple[str, ...]:
    """Atoms occurring in formulas, rules, queries or theories, sorted."""
    found: set[str] = set()
    for item in items:
        _collect_atoms(item, found)
    return tuple(sorted(found))


def _collect_atoms(item, found: set[str]) -> None:
    if item is None:
        return
    if isinstance(item, Formula):
        found.update(n.name for n in subformulas(item) if isinstance(n, Atom))
    elif isinstance(item, Rule):
        _collect_atoms(item.body, found)
        _collect_atoms(item.head, found)
    elif isinstance(item, Query):
        for part in (item.formula, item.body, item.head):
            _collect_atoms(part, found)
    elif hasattr(item, "gamma") and hasattr(item, "r_norm"):
        found.update(item.vocab)
        for part in (*item.gamma, *item.r_norm, *item.r_oblig):
            _collect_atoms(part, found)
    elif isinstance(item, (list, tuple, set, frozenset)):
        for part in item:
            _collect_atoms(part, found)
    else:
        raise TypeError(f"cannot collect atoms from {type(item).__name__}")


def rename_atoms(item, mapping: dict[str, str]):
    """Rename atoms in a formula, rule or query; unmapped atoms are kept."""
    if isinstance(item, Rule):
        return Rule(item.kind, rename_atoms(item.body, mapping), rename_atoms(item.head, mapping))
    if isinstance(item, Query):
        return Query(item.kind, *(None if part is None else rename_atoms(part, mapping)
                                  for part in (item.formula, item.body, item.head)))
    if isinstance(item, Atom):
        return Atom(mapping.get(item.name, item.name))
    if isinstance(item, (Not, Box, Diamond)):
        return type(item)(rename_atoms(item.arg, mapping))
    if isinstance(item, BINARY):
        return type(item)(rename_atoms(item.left, mapping), rename_atoms(item.right, mapping))
    if isinstance(item, (Top, Bottom)):
        return item
    raise TypeError(f"cannot rename atoms in {type(item).__name__}")


def conjoin(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    result = None
    for phi in formulas:
        result = phi if result is None else And(result, phi)
    return TOP if result is None else result


def disjoin(formulas: Iterable[Formula]) -> Formula:
    result = None
    for phi in formulas:
        result = phi if result is None else Or(result, phi)
    return BOTTOM if result is None else result


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|=>|\[\]|<>|[~&|()])
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)

_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
_KEYWORDS = {"true", "false"}
_DEONTIC = {"O", "OH"}


@dataclass(frozen=True)
class _Tok:
    kind: str     # "op", "name", "eof"
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        if m.lastgroup != "ws":
            tokens.append(_Tok(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(_Tok("eof", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# Parser (precedence climbing over the token list)

_BINARY_OPS = {
    # token: (precedence, right_assoc, constructor)
    "<->": (1, False, Iff),
    "->": (2, True, Implies),
    "|": (3, False, Or),
    "&": (4, False, And),
}


class _Parser:
    def __init__(self, text: str, tokens: list[_Tok], *, modal: bool, stop_at_bar: bool = False):
        self.text = text
        self.tokens = tokens
        self.i = 0
        self.modal = modal
        self.stop_at_bar = stop_at_bar
        self.modal_depth = 0

    @property
    def tok(self) -> _Tok:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Tok | None = None, cls=FormulaSyntaxError):
        tok = tok or self.tok
        return cls(message, self.text, tok.pos)

    def expect(self, value: str) -> _Tok:
        tok = self.tok
        if tok.value != value or tok.kind == "eof":
            found = "end of input" if tok.kind == "eof" else repr(tok.value)
            raise self.error(f"expected {value!r}, found {found}")
        self.i += 1
        return tok

    def parse(self, min_prec: int = 0) -> Formula:
        left = self.parse_unary()
        while True:
            tok = self.tok
            if tok.kind != "op" or tok.value not in _BINARY_OPS:
                break
            if tok.value == "|" and self.stop_at_bar and self.depth0:
                break
            prec, right_assoc, ctor = _BINARY_OPS[tok.value]
            if prec < min_prec:
                break
            self.i += 1
            right = self.parse(prec if right_assoc else prec + 1)
            left = ctor(left, right)
        return left

    depth0 = True

    def parse_unary(self) -> Formula:
        tok = self.tok
        if tok.kind == "op":
            if tok.value == "~":
                self.i += 1
                return Not(self.parse_unary())
            if tok.value in ("[]", "<>"):
                if not self.modal:
                    raise self.error(f"modal operator {tok.value!r} not allowed in a Boolean formula",
                                     cls=NestingError)
                if self.modal_depth:
                    raise self.error("modal operator nested inside a modal operator", cls=NestingError)
                self.i += 1
                self.modal_depth += 1
                arg = self.parse_unary()
                self.modal_depth -= 1
                return Box(arg) if tok.value == "[]" else Diamond(arg)
            if tok.value == "(":
                self.i += 1
                saved, self.depth0 = self.depth0, False
                inner = self.parse()
                self.depth0 = saved
                self.expect(")")
                return inner
            if tok.value == "=>":
                raise self.error("'=>' cannot occur inside a formula", cls=NestingError)
            raise self.error(f"unexpected {tok.value!r}")
        if tok.kind == "name":
            self.i += 1
            if tok.value == "true":
                return TOP
            if tok.value == "false":
                return BOTTOM
            if tok.value in _DEONTIC:
                raise self.error(f"deontic operator {tok.value!r} cannot occur inside a formula",
                                 tok, cls=NestingError)
            if not _ATOM_RE.match(tok.value):
                raise self.error(f"invalid atom {tok.value!r} (atoms are lowercase, "
                                 "start with a letter)", tok)
            return Atom(tok.value)
        raise self.error("unexpected end of input")


def _parse_all(text: str, *, modal: bool) -> Formula:
    tokens = _tokenize(text)
    parser = _Parser(text, tokens, modal=modal)
    phi = parser.parse()
    if parser.tok.kind != "eof":
        if parser.tok.value == "=>":
            raise parser.error("'=>' cannot occur inside a formula", cls=NestingError)
        raise parser.error(f"unexpected {parser.tok.value!r}")
    return phi


def parse_boolean(text: str) -> Formula:
    """Parse a purely Boolean formula."""
    return _parse_all(text, modal=False)


def parse_alethic(text: str) -> Formula:
    """Parse a Boolean formula possibly containing (non-nested) ``[]`` / ``<>``."""
    return _parse_all(text, modal=True)


def _parse_dyadic(text: str, tokens: list[_Tok]) -> tuple[str, Formula, Formula]:
    """Parse ``O(H|B)``, ``O(H)``, ``OH(H|B)`` or ``OH(H)`` spanning all tokens."""
    op = tokens[0].value
    parser = _Parser(text, tokens, modal=False, stop_at_bar=True)
    parser.i = 1
    parser.expect("(")
    if parser.tok.value == ")":
        raise parser.error(f"empty {op}(...)")
    head = parser.parse()
    body: Formula = TOP
    if parser.tok.value == "|":
        parser.i += 1
        parser.stop_at_bar = False
        body = parser.parse()
    parser.expect(")")
    if parser.tok.kind != "eof":
        raise parser.error(f"{op}(...) cannot be combined with other connectives", cls=NestingError)
    return op, body, head


def parse_query(text: str) -> Query:
    """Parse ``O(H|B)``, ``OH(H|B)``, ``B => H`` or a flat alethic formula."""
    tokens = _tokenize(text)
    if tokens[0].kind == "name" and tokens[0].value in _DEONTIC:
        op, body, head = _parse_dyadic(text, tokens)
        return Query.obligation(body, head) if op == "O" else Query.hansson(body, head)
    arrows = [t for t in tokens if t.value == "=>"]
    if arrows:
        if len(arrows) > 1:
            raise FormulaSyntaxError("iterated '=>' is not allowed", text, arrows[1].pos)
        split = tokens.index(arrows[0])
        body_tokens = tokens[:split] + [_Tok("eof", "", arrows[0].pos)]
        head_tokens = tokens[split + 1:]
        if len(body_tokens) == 1 or len(head_tokens) == 1:
            raise FormulaSyntaxError("'=>' needs a body and a head", text, arrows[0].pos)
        body = _finish(text, body_tokens)
        head = _finish(text, head_tokens)
        return Query.normality(body, head)
    return Query.alethic(_parse_all(text, modal=True))


def _finish(text: str, tokens: list[_Tok]) -> Formula:
    parser = _Parser(text, tokens, modal=False)
    phi = parser.parse()
    if parser.tok.kind != "eof":
        raise parser.error(f"unexpected {parser.tok.value!r}")
    return phi


def parse_rule(text: str, kind: str | None = None) -> Rule:
    """Parse ``B => H`` as a normality rule or ``O(H|B)`` as an obligation.

    ``kind`` restricts which form is accepted.
    """
    q = parse_query(text)
    if q.kind == NORMALITY and kind in (None, NORMALITY):
        return Rule(NORMALITY, q.body, q.head)
    if q.kind == OBLIGATION and kind in (None, OBLIGATION):
        return Rule(OBLIGATION, q.body, q.head)
    expected = {NORMALITY: "'B => H'", OBLIGATION: "'O(H|B)'", None: "'B => H' or 'O(H|B)'"}[kind]
    raise FormulaSyntaxError(f"expected a rule of the form {expected}, got {text!r}")


# ---------------------------------------------------------------------------
# Printer

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_ATOMIC_PREC = 5


def _prec(phi: Formula) -> int:
    return _PREC.get(type(phi), _ATOMIC_PREC)


def pretty_print(phi) -> str:
    """ASCII rendering that parses back to the same tree."""
    if isinstance(phi, (Rule, Query)):
        return str(phi)
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, (Not, Box, Diamond)):
        sym = {Not: "~", Box: "[]", Diamond: "<>"}[type(phi)]
        inner = pretty_print(phi.arg)
        if _prec(phi.arg) < _ATOMIC_PREC:
            inner = f"({inner})"
        return sym + inner
    if isinstance(phi, BINARY):
        prec = _PREC[type(phi)]
        right_assoc = isinstance(phi, Implies)
        left, right = pretty_print(phi.left), pretty_print(phi.right)
        lp, rp = _prec(phi.left), _prec(phi.right)
        if lp < prec or (lp == prec and right_assoc):
            left = f"({left})"
        if rp < prec or (rp == prec and not right_assoc):
            right = f"({right})"
        return f"{left} {_SYMBOL[type(phi)]} {right}"
    raise TypeError(f"not a formula: {phi!r}")


def _print_dyadic(op: str, head: Formula, body: Formula) -> str:
    h = pretty_print(head)
    if _prec(head) <= _PREC[Or]:
        h = f"({h})"
    if isinstance(body, Top):
        return f"{op}({h})"
    return f"{op}({h} | {pretty_print(body)})"

