"""Constraint literals, conjunctions, disjunctive normal form, and the
classification of constraints into solved, partially solved and active."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

from . import regex as rx
from .syntax import (
    Apply,
    FuncVar,
    Functor,
    Hedge,
    HedgeVar,
    Signature,
    Substitution,
    TermVar,
    free_vars,
    is_term,
    iter_vars,
    register_children,
)


@dataclass(frozen=True)
class HedgeEq:
    """H1 = H2 between hedges."""

    lhs: Hedge
    rhs: Hedge

    def __repr__(self) -> str:
        return f"{self.lhs!r} = {self.rhs!r}"


@dataclass(frozen=True)
class FunctorEq:
    """F = G between functors (at least one side usually a variable)."""

    lhs: Functor
    rhs: Functor

    def __repr__(self) -> str:
        return f"{self.lhs!r} = {self.rhs!r}"


@dataclass(frozen=True)
class Membership:
    """H in rho: the hedge belongs to the language of the expression."""

    subject: Hedge
    rho: object

    def __repr__(self) -> str:
        return f"{self.subject!r} in {self.rho!r}"


Literal = object  # HedgeEq | FunctorEq | Membership


@iter_vars.register
def _(lit: HedgeEq):
    yield from iter_vars(lit.lhs)
    yield from iter_vars(lit.rhs)


@iter_vars.register
def _(lit: FunctorEq):
    if isinstance(lit.lhs, FuncVar):
        yield lit.lhs
    if isinstance(lit.rhs, FuncVar):
        yield lit.rhs


@iter_vars.register
def _(lit: Membership):
    yield from iter_vars(lit.subject)


register_children(HedgeEq, lambda lit: (lit.lhs, lit.rhs))
register_children(
    FunctorEq,
    lambda lit: tuple(s for s in (lit.lhs, lit.rhs) if isinstance(s, FuncVar)),
)
register_children(Membership, lambda lit: (lit.subject,))


def make_eq(lhs: Hedge, rhs: Hedge, sig: Signature):
    """Build an equation literal, normalizing at construction time.

    Two nullary applications collapse to a functor equation; two
    applications of the same ordered symbol shed the wrapper.  These
    shapes therefore never occur as stored literals.
    """
    while True:
        if len(lhs) == 1 and len(rhs) == 1:
            a, b = lhs[0], rhs[0]
            if isinstance(a, Apply) and isinstance(b, Apply):
                if not a.args and not b.args:
                    return FunctorEq(a.head, b.head)
                if (
                    a.head == b.head
                    and isinstance(a.head, str)
                    and not sig.is_unordered(a.head)
                ):
                    lhs, rhs = a.args, b.args
                    continue
        return HedgeEq(lhs, rhs)


def make_term_eq(t1, t2, sig: Signature):
    return make_eq(Hedge((t1,)), Hedge((t2,)), sig)


def subst_literal(lit, theta: Substitution, sig: Signature):
    if isinstance(lit, HedgeEq):
        return make_eq(theta(lit.lhs), theta(lit.rhs), sig)
    if isinstance(lit, FunctorEq):
        l = theta(lit.lhs) if isinstance(lit.lhs, FuncVar) else lit.lhs
        r = theta(lit.rhs) if isinstance(lit.rhs, FuncVar) else lit.rhs
        return FunctorEq(l, r)
    if isinstance(lit, Membership):
        return Membership(theta(lit.subject), lit.rho)
    raise TypeError(f"not a literal: {lit!r}")


# ---------------------------------------------------------------------------
# Formulas (parser output) and disjunctive normal form


@dataclass(frozen=True)
class Lit:
    literal: object


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


TRUE_F = TrueF()
FALSE_F = FalseF()


@dataclass(frozen=True)
class Conjunction:
    """A conjunction of literals, or the false constraint.

    Truth is the empty conjunction; falsity carries no literals.  Literals
    never co-occur with a truth value, by construction.
    """

    literals: tuple = ()
    is_false: bool = False

    def __post_init__(self):
        if self.is_false and self.literals:
            raise ValueError("false conjunction cannot carry literals")

    def __repr__(self) -> str:
        if self.is_false:
            return "false"
        if not self.literals:
            return "true"
        return " & ".join(repr(l) for l in self.literals)


TRUE_CONJ = Conjunction(())
FALSE_CONJ = Conjunction((), is_false=True)


@iter_vars.register
def _(c: Conjunction):
    for lit in c.literals:
        yield from iter_vars(lit)


register_children(Conjunction, lambda c: c.literals)


def merge_conj(c1: Conjunction, c2: Conjunction) -> Conjunction:
    if c1.is_false or c2.is_false:
        return FALSE_CONJ
    return Conjunction(c1.literals + c2.literals)


def subst_conj(c: Conjunction, theta: Substitution, sig: Signature) -> Conjunction:
    if c.is_false:
        return c
    return Conjunction(tuple(subst_literal(l, theta, sig) for l in c.literals))


@dataclass(frozen=True)
class DNF:
    """A nonempty disjunction of conjunctions."""

    disjuncts: tuple

    def __post_init__(self):
        if not self.disjuncts:
            raise ValueError("DNF needs at least one disjunct")

    def __repr__(self) -> str:
        return " ; ".join(repr(c) for c in self.disjuncts)


TRUE_DNF = DNF((TRUE_CONJ,))
FALSE_DNF = DNF((FALSE_CONJ,))


@iter_vars.register
def _(d: DNF):
    for c in d.disjuncts:
        yield from iter_vars(c)


register_children(DNF, lambda d: d.disjuncts)


def dnf(phi) -> DNF:
    """Distribute a formula into disjunctive normal form, left to right.

    False disjuncts are kept; the solver's logical rules drop them.
    """
    if isinstance(phi, TrueF):
        return TRUE_DNF
    if isinstance(phi, FalseF):
        return FALSE_DNF
    if isinstance(phi, Lit):
        return DNF((Conjunction((phi.literal,)),))
    if isinstance(phi, Or):
        out = []
        for p in phi.parts:
            out.extend(dnf(p).disjuncts)
        return DNF(tuple(out))
    if isinstance(phi, And):
        acc = [TRUE_CONJ]
        for p in phi.parts:
            ds = dnf(p).disjuncts
            acc = [merge_conj(c1, c2) for c1 in acc for c2 in ds]
        return DNF(tuple(acc))
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# Solved and stuck forms


class Form(Enum):
    SOLVED = "solved"
    PARTIALLY_SOLVED = "partially solved"
    ACTIVE = "active"
    FALSE = "false"


def _occurs_elsewhere(v, lits, j) -> bool:
    return any(v in free_vars(l) for i, l in enumerate(lits) if i != j)


def _in_other_membership(v, lits, j) -> bool:
    """Is (v) the subject of another membership literal?"""
    target = Hedge((v,))
    return any(
        isinstance(l, Membership) and l.subject == target
        for i, l in enumerate(lits)
        if i != j
    )


def is_solved_literal(lits, j, sig: Signature) -> bool:
    """Solved shapes, reading the equation in either orientation:

    - x = t with t a term, x not in t and nowhere else;
    - X = H with X not in H and nowhere else;
    - F = G with distinct sides, the variable side nowhere else;
    - x in f(rho) with no other membership on (x);
    - X in rho, rho a concatenation or iteration, no other membership on (X).
    """
    lit = lits[j]
    if isinstance(lit, HedgeEq):
        for a, b in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
            if len(a) != 1:
                continue
            v = a[0]
            if isinstance(v, TermVar):
                if (
                    len(b) == 1
                    and is_term(b[0])
                    and v not in free_vars(b)
                    and not _occurs_elsewhere(v, lits, j)
                ):
                    return True
            elif isinstance(v, HedgeVar):
                if v not in free_vars(b) and not _occurs_elsewhere(v, lits, j):
                    return True
        return False
    if isinstance(lit, FunctorEq):
        for v, other in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
            if (
                isinstance(v, FuncVar)
                and v != other
                and not _occurs_elsewhere(v, lits, j)
            ):
                return True
        return False
    if isinstance(lit, Membership):
        s = lit.subject
        if len(s) != 1:
            return False
        if isinstance(s[0], TermVar):
            return isinstance(lit.rho, rx.Sym) and not _in_other_membership(
                s[0], lits, j
            )
        if isinstance(s[0], HedgeVar):
            return isinstance(lit.rho, (rx.Concat, rx.Star)) and not _in_other_membership(
                s[0], lits, j
            )
        return False
    raise TypeError(f"not a literal: {lit!r}")


def _unordered_pair(lit, sig: Signature):
    """Argument hedges of f(H1) = f(H2) with f unordered, else None."""
    if not isinstance(lit, HedgeEq) or len(lit.lhs) != 1 or len(lit.rhs) != 1:
        return None
    a, b = lit.lhs[0], lit.rhs[0]
    if (
        isinstance(a, Apply)
        and isinstance(b, Apply)
        and isinstance(a.head, str)
        and a.head == b.head
        and sig.is_unordered(a.head)
    ):
        return a.args, b.args
    return None


def is_stuck_literal(lits, j, sig: Signature) -> bool:
    """Irreducible but unsolved shapes that block no other rule."""
    lit = lits[j]
    if isinstance(lit, Membership):
        s, rho = lit.subject, lit.rho
        if (
            len(s) == 1
            and isinstance(s[0], Apply)
            and isinstance(rho, rx.Sym)
            and isinstance(s[0].head, str)
            and s[0].head == rho.symbol
            and sig.is_unordered(s[0].head)
            and any(isinstance(a, HedgeVar) for a in s[0].args)
        ):
            return True
        if (
            len(s) >= 2
            and isinstance(s[0], HedgeVar)
            and isinstance(rho, (rx.Concat, rx.Star))
        ):
            return True
        return False
    if isinstance(lit, HedgeEq):
        a, b = lit.lhs, lit.rhs
        if (
            len(a) >= 2
            and len(b) >= 2
            and isinstance(a[0], HedgeVar)
            and isinstance(b[0], HedgeVar)
            and a[0] != b[0]
        ):
            return True
        for a, b in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
            if len(a) >= 2 and isinstance(a[0], HedgeVar):
                x = a[0]
                k = 0
                while k < len(b) and is_term(b[k]) and x not in free_vars(b[k]):
                    k += 1
                if 1 <= k < len(b) and isinstance(b[k], HedgeVar):
                    return True
        pair = _unordered_pair(lit, sig)
        if pair is not None:
            h1, h2 = pair
            if (
                any(isinstance(e, HedgeVar) for e in h1)
                and any(isinstance(e, HedgeVar) for e in h2)
                and not (Counter(h1.items) & Counter(h2.items))
            ):
                return True
        return False
    return False


def classify(c: Conjunction, sig: Signature) -> Form:
    """SOLVED, PARTIALLY_SOLVED or ACTIVE for a non-false conjunction."""
    if c.is_false:
        raise ValueError("the false conjunction has no solved-form class")
    lits = c.literals
    if len(set(lits)) != len(lits):
        return Form.ACTIVE
    all_solved = True
    for j in range(len(lits)):
        if is_solved_literal(lits, j, sig):
            continue
        all_solved = False
        if not is_stuck_literal(lits, j, sig):
            return Form.ACTIVE
    return Form.SOLVED if all_solved else Form.PARTIALLY_SOLVED


def classify_dnf(d: DNF, sig: Signature) -> Form:
    if d == FALSE_DNF:
        return Form.FALSE
    if any(c.is_false for c in d.disjuncts):
        return Form.ACTIVE
    counts = [Counter(c.literals) for c in d.disjuncts]
    for i in range(len(counts)):
        for k in range(i + 1, len(counts)):
            if counts[i] == counts[k]:
                return Form.ACTIVE
    forms = [classify(c, sig) for c in d.disjuncts]
    if any(f is Form.ACTIVE for f in forms):
        return Form.ACTIVE
    if all(f is Form.SOLVED for f in forms):
        return Form.SOLVED
    return Form.PARTIALLY_SOLVED
