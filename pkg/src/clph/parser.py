"""Concrete syntax: tokenizer and recursive-descent parsers.

Three entry points: programs (directives and clauses), queries (comma
separated goal literals), and standalone constraints (& conjunction,
; disjunction).  A dot both terminates clauses and concatenates regexes;
inside a regex a dot continues it only when the next token starts a regex
atom on the same line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .constraints import DNF, Conjunction, FunctorEq, Membership, make_eq
from .engine import Atom, Clause, Program
from .modes import ModeError, ModeTable
from .regex import EPS, Choice, Concat, Star, Sym
from .syntax import (
    Apply,
    FuncVar,
    Hedge,
    HedgeVar,
    Signature,
    SignatureError,
    TermVar,
    iter_vars,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    preceded_by_newline: bool


_TOKEN_RE = re.compile(
    r"""
      (?P<WS>[ \t\r]+)
    | (?P<COMMENT>%[^\n]*)
    | (?P<NL>\n)
    | (?P<CLAUSE>:-)
    | (?P<QUERY>\?-)
    | (?P<TVAR>\?[A-Za-z_][A-Za-z0-9_]*)
    | (?P<HVAR>@[A-Za-z_][A-Za-z0-9_]*)
    | (?P<FVAR>\^[A-Za-z_][A-Za-z0-9_]*)
    | (?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<LPAR>\()
    | (?P<RPAR>\))
    | (?P<COMMA>,)
    | (?P<DOT>\.)
    | (?P<PIPE>\|)
    | (?P<STAR>\*)
    | (?P<AMP>&)
    | (?P<SEMI>;)
    | (?P<EQ>=)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"in": "IN", "eps": "EPS"}
_REGEX_ATOM_STARTERS = ("IDENT", "LPAR", "EPS")


def tokenize(text: str):
    tokens = []
    line, col = 1, 1
    pos = 0
    after_newline = False
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "NL":
            after_newline = True
            line += 1
            col = 1
        elif kind in ("WS", "COMMENT"):
            col += len(lexeme)
        else:
            if kind == "IDENT":
                kind = _KEYWORDS.get(lexeme, "IDENT")
            tokens.append(Token(kind, lexeme, line, col, after_newline))
            after_newline = False
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("EOF", "", line, col, after_newline))
    return tokens


class _BareFuncVar:
    """A functor variable used on its own, legal only in functor equations."""

    def __init__(self, var: FuncVar, tok: Token):
        self.var = var
        self.tok = tok


class Parser:
    def __init__(self, text: str, sig: Signature | None = None,
                 modes: ModeTable | None = None):
        self.toks = tokenize(text)
        self.i = 0
        self.sig = sig if sig is not None else Signature()
        self.modes = modes if modes is not None else ModeTable()
        self._atom_sites = []

    # -- token plumbing ------------------------------------------------

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def next(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            want = what or kind.lower()
            got = tok.text or "end of input"
            raise ParseError(f"expected {want}, found {got!r}", tok.line, tok.col)
        return self.next()

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col)

    # -- programs --------------------------------------------------------

    def program(self) -> Program:
        clauses = []
        while not self.at("EOF"):
            if self.at("CLAUSE"):
                self.directive()
            else:
                clauses.append(self.clause())
        self._check_arities()
        return Program(tuple(clauses), self.sig, self.modes)

    def directive(self) -> None:
        self.expect("CLAUSE")
        tok = self.expect("IDENT", "directive name")
        if tok.text in ("unordered", "ordered"):
            unordered = tok.text == "unordered"
            while True:
                name = self.expect("IDENT", "symbol name")
                try:
                    self.sig.declare(name.text, unordered)
                except SignatureError as e:
                    raise ParseError(str(e), name.line, name.col) from None
                if not self.at("COMMA"):
                    break
                self.next()
            self.expect("DOT")
        elif tok.text == "mode":
            name = self.expect("IDENT", "predicate name")
            modes = []
            if self.at("LPAR"):
                self.next()
                if not self.at("RPAR"):
                    while True:
                        m = self.expect("IDENT", "mode (i or o)")
                        if m.text not in ("i", "o"):
                            raise ParseError(
                                f"expected mode i or o, found {m.text!r}",
                                m.line, m.col,
                            )
                        modes.append(m.text)
                        if not self.at("COMMA"):
                            break
                        self.next()
                self.expect("RPAR")
            try:
                self.modes.declare(name.text, modes)
            except ModeError as e:
                raise ParseError(str(e), name.line, name.col) from None
            self.expect("DOT")
        else:
            raise ParseError(
                f"unknown directive {tok.text!r}", tok.line, tok.col
            )

    def clause(self) -> Clause:
        head = self.literal()
        if not isinstance(head, Atom):
            self.fail("clause head must be an atom")
        body = []
        if self.at("CLAUSE"):
            self.next()
            body.append(self.literal())
            while self.at("COMMA"):
                self.next()
                body.append(self.literal())
        self.expect("DOT", "'.' at end of clause")
        return Clause(head, tuple(body))

    def _check_arities(self) -> None:
        for name, arity, line, col in self._atom_sites:
            declared = self.modes.arities(name)
            if declared and arity not in declared:
                raise ParseError(
                    f"{name}/{arity} used but mode declares arity "
                    f"{', '.join(map(str, declared))}",
                    line, col,
                )

    # -- queries and constraints ------------------------------------------

    def query(self):
        if self.at("QUERY"):
            self.next()
        goal = [self.literal()]
        while self.at("COMMA"):
            self.next()
            goal.append(self.literal())
        if self.at("DOT"):
            self.next()
        self.expect("EOF", "end of query")
        self._check_arities()
        return tuple(goal)

    def constraint(self) -> DNF:
        while self.at("CLAUSE"):
            self.directive()
        disjuncts = [self._conjunct()]
        while self.at("SEMI"):
            self.next()
            disjuncts.append(self._conjunct())
        if self.at("DOT"):
            self.next()
        self.expect("EOF", "end of constraint")
        return DNF(tuple(disjuncts))

    def _conjunct(self) -> Conjunction:
        lits = [self._constraint_literal()]
        while self.at("AMP") or self.at("COMMA"):
            self.next()
            lits.append(self._constraint_literal())
        return Conjunction(tuple(lits))

    def _constraint_literal(self):
        lit = self.literal()
        if isinstance(lit, Atom):
            self.fail("expected = or in after hedge")
        return lit

    # -- literals ----------------------------------------------------------

    def literal(self):
        start = self.peek()
        side = self._side()
        if self.at("EQ"):
            self.next()
            rhs = self._side()
            return self._make_equation(side, rhs, start)
        if self.at("IN"):
            self.next()
            subject = self._as_hedge(side, start)
            rho = self._regex()
            self._observe_hedge(subject)
            return Membership(subject, rho)
        if isinstance(side, Apply) and isinstance(side.head, str):
            self._atom_sites.append(
                (side.head, len(side.args), start.line, start.col)
            )
            self._observe_hedge(side.args)
            return Atom(side.head, side.args)
        raise ParseError("expected = or in after hedge", start.line, start.col)

    def _make_equation(self, lhs, rhs, start: Token):
        if isinstance(lhs, _BareFuncVar) or isinstance(rhs, _BareFuncVar):
            return FunctorEq(self._as_functor(lhs), self._as_functor(rhs))
        l = self._as_hedge(lhs, start)
        r = self._as_hedge(rhs, start)
        self._observe_hedge(l)
        self._observe_hedge(r)
        return make_eq(l, r, self.sig)

    def _as_functor(self, side):
        if isinstance(side, _BareFuncVar):
            return side.var
        if isinstance(side, Apply) and isinstance(side.head, str) and not side.args:
            self._observe_symbol(side.head)
            return side.head
        if isinstance(side, Apply) and isinstance(side.head, FuncVar) and not side.args:
            return side.head
        self.fail("a functor equation side must be a symbol or ^variable")

    def _as_hedge(self, side, start: Token) -> Hedge:
        if isinstance(side, Hedge):
            return side
        if isinstance(side, (TermVar, HedgeVar, Apply)):
            return Hedge((side,))
        raise ParseError(
            "a bare ^variable is only allowed in functor equations",
            start.line, start.col,
        )

    def _side(self):
        """One equation side: a parenthesized hedge, a single item, or a
        bare functor variable."""
        tok = self.peek()
        if tok.kind == "LPAR":
            self.next()
            items = []
            if not self.at("RPAR"):
                items.append(self._item())
                while self.at("COMMA"):
                    self.next()
                    items.append(self._item())
            self.expect("RPAR")
            return Hedge(tuple(items))
        if tok.kind == "HVAR":
            self.next()
            return HedgeVar(tok.text[1:])
        if tok.kind == "FVAR" and self.peek(1).kind != "LPAR":
            self.next()
            return _BareFuncVar(FuncVar(tok.text[1:]), tok)
        return self.term()

    def _item(self):
        if self.at("HVAR"):
            tok = self.next()
            return HedgeVar(tok.text[1:])
        return self.term()

    def term(self):
        tok = self.peek()
        if tok.kind == "TVAR":
            self.next()
            return TermVar(tok.text[1:])
        if tok.kind == "FVAR":
            self.next()
            head = FuncVar(tok.text[1:])
            return Apply(head, self._args())
        if tok.kind == "IDENT":
            self.next()
            return Apply(tok.text, self._args())
        self.fail("expected a term")

    def _args(self) -> Hedge:
        if not self.at("LPAR"):
            return Hedge()
        self.next()
        items = []
        if not self.at("RPAR"):
            items.append(self._item())
            while self.at("COMMA"):
                self.next()
                items.append(self._item())
        self.expect("RPAR")
        return Hedge(tuple(items))

    # -- regexes ------------------------------------------------------------

    def _regex(self):
        left = self._regex_concat()
        while self.at("PIPE"):
            self.next()
            left = Choice(left, self._regex_concat())
        return left

    def _regex_concat(self):
        left = self._regex_star()
        while self.at("DOT") and self._dot_continues():
            self.next()
            left = Concat(left, self._regex_star())
        return left

    def _dot_continues(self) -> bool:
        after = self.peek(1)
        return after.kind in _REGEX_ATOM_STARTERS and not after.preceded_by_newline

    def _regex_star(self):
        node = self._regex_atom()
        while self.at("STAR"):
            self.next()
            node = Star(node)
        return node

    def _regex_atom(self):
        tok = self.peek()
        if tok.kind == "EPS":
            self.next()
            return EPS
        if tok.kind == "IDENT":
            self.next()
            self._observe_symbol(tok.text)
            if self.at("LPAR"):
                self.next()
                if self.at("RPAR"):
                    self.next()
                    return Sym(tok.text)
                body = self._regex()
                self.expect("RPAR")
                return Sym(tok.text, body)
            return Sym(tok.text)
        if tok.kind == "LPAR":
            self.next()
            body = self._regex()
            self.expect("RPAR")
            return body
        self.fail("expected a regular expression")

    # -- signature observation ----------------------------------------------

    def _observe_symbol(self, name: str) -> None:
        if not self.sig.is_declared(name):
            self.sig.declare(name, False)

    def _observe_hedge(self, obj) -> None:
        if isinstance(obj, Hedge):
            for item in obj:
                self._observe_hedge(item)
        elif isinstance(obj, Apply):
            if isinstance(obj.head, str):
                self._observe_symbol(obj.head)
            self._observe_hedge(obj.args)


def parse_program(text: str) -> Program:
    return Parser(text).program()


def parse_query(text: str, program: Program | None = None):
    sig = program.sig if program is not None else None
    modes = program.modes if program is not None else None
    return Parser(text, sig, modes).query()


def parse_constraint(text: str, sig: Signature | None = None) -> DNF:
    p = Parser(text, sig)
    return p.constraint()


def parse_term(text: str, sig: Signature | None = None):
    p = Parser(text, sig)
    t = p.term()
    p._observe_hedge(Hedge((t,)))
    p.expect("EOF", "end of term")
    return t


def parse_hedge(text: str, sig: Signature | None = None) -> Hedge:
    p = Parser(text, sig)
    side = p._side()
    h = p._as_hedge(side, p.toks[0])
    p._observe_hedge(h)
    p.expect("EOF", "end of hedge")
    return h


def parse_regex(text: str, sig: Signature | None = None):
    p = Parser(text, sig)
    r = p._regex()
    p.expect("EOF", "end of regular expression")
    return r


def query_variables(goal) -> tuple:
    """Variables of a goal in first-appearance order."""
    seen = dict.fromkeys(v for lit in goal for v in iter_vars(lit))
    return tuple(seen)
