"""The constraint solver: rewrite rules over DNF constraints.

step() applies the first applicable rule under a fixed scan order
(rule-major, then disjunct, then literal, trying the left side of a
literal first).  sol() iterates step() to a normal form.  cm()/cm_dnf()
compute the termination measure, which every step strictly decreases.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

from . import regex as rx
from .constraints import (
    DNF,
    FALSE_CONJ,
    FALSE_DNF,
    TRUE_CONJ,
    TRUE_DNF,
    And,
    Conjunction,
    FalseF,
    FunctorEq,
    HedgeEq,
    Lit,
    Membership,
    Or,
    TrueF,
    dnf,
    make_eq,
    subst_literal,
)
from .syntax import (
    EMPTY,
    Apply,
    FreshVars,
    FuncVar,
    Hedge,
    HedgeVar,
    Signature,
    Substitution,
    TermVar,
    free_vars,
    is_term,
    iter_vars,
    occurs_in,
    perms,
    size,
)


class Rule(Enum):
    LOG1 = "Log1"
    LOG2 = "Log2"
    LOG3 = "Log3"
    LOG4 = "Log4"
    LOG5 = "Log5"
    LOG6 = "Log6"
    LOG7 = "Log7"
    LOG8 = "Log8"
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"
    F5 = "F5"
    F6 = "F6"
    F7 = "F7"
    DEL1 = "Del1"
    DEL2 = "Del2"
    DEL3 = "Del3"
    D1 = "D1"
    D2 = "D2"
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E4 = "E4"
    E5 = "E5"
    E6 = "E6"
    E7 = "E7"
    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    M4 = "M4"
    M5 = "M5"
    M6 = "M6"
    M7 = "M7"
    M8 = "M8"
    M9 = "M9"
    M10 = "M10"
    M11 = "M11"
    M12 = "M12"


@dataclass(frozen=True)
class TraceEvent:
    rule: Rule
    disjunct: int
    literal: int  # -1 for whole-disjunct rules

    def __repr__(self) -> str:
        return f"{self.rule.value} @ disjunct={self.disjunct} literal={self.literal}"


class MeasureError(Exception):
    """A step failed to decrease the termination measure."""


# ---------------------------------------------------------------------------
# Helpers


def _rebuild(lits, j, newlits, theta=None, sig=None, scan=None) -> Conjunction:
    """Replace literal j; optionally substitute the surrounding literals.

    With a scan at hand, literals that share no variable with theta's
    domain are kept as is instead of being rebuilt.
    """
    if theta is None:
        rest_before = lits[:j]
        rest_after = lits[j + 1 :]
    else:
        dom = theta.domain()

        def sub(i, l):
            if scan is not None and scan.varsets[i].isdisjoint(dom):
                return l
            return subst_literal(l, theta, sig)

        rest_before = tuple(sub(i, l) for i, l in enumerate(lits[:j]))
        rest_after = tuple(sub(j + 1 + i, l) for i, l in enumerate(lits[j + 1 :]))
    return Conjunction(rest_before + tuple(newlits) + rest_after)


class _Scan:
    """Per-conjunction occurrence index, shared across step() restarts.

    varsets[j] is the variable set of literal j; counts[v] is the number
    of literals mentioning v; dup[j] says whether literal j repeats an
    earlier one.  All stay valid while the Conjunction object itself is
    unchanged, which step() guarantees for disjuncts it does not rewrite.
    """

    __slots__ = ("varsets", "counts", "dup")

    def __init__(self, lits):
        self.varsets = [free_vars(l) for l in lits]
        counts = Counter()
        for vs in self.varsets:
            counts.update(vs)
        self.counts = counts
        seen = set()
        dup = []
        for lit in lits:
            dup.append(lit in seen)
            seen.add(lit)
        self.dup = dup

    def in_rest(self, j: int, v) -> bool:
        """Does v occur in a literal other than literal j?"""
        n = self.counts.get(v, 0)
        return n >= 2 or (n == 1 and v not in self.varsets[j])


def _orientations(lit: HedgeEq):
    yield lit.lhs, lit.rhs
    yield lit.rhs, lit.lhs


def _unordered_args(lit, sig: Signature):
    """(H1, H2) of f(H1) = f(H2) with f unordered, else None."""
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


def _term_prefix_split(x: HedgeVar, b: Hedge):
    """Longest x-free all-term prefix of b and the first blocking element."""
    k = 0
    while k < len(b) and is_term(b[k]) and not occurs_in(x, b[k]):
        k += 1
    return k, (b[k] if k < len(b) else None)


# ---------------------------------------------------------------------------
# Logical rules (literal level).  Log3 and Log5 can never fire: truth
# values are normalized away when conjunctions are built.


def _log1(lits, j, sig, fresh, scan):
    if scan.dup[j]:
        return [Conjunction(lits[:j] + lits[j + 1 :])]
    return None


def _log3(lits, j, sig, fresh, scan):
    return None


def _log5(lits, j, sig, fresh, scan):
    return None


def _log7(lits, j, sig, fresh, scan):
    lit = lits[j]
    if isinstance(lit, (HedgeEq, FunctorEq)) and lit.lhs == lit.rhs:
        return [Conjunction(lits[:j] + lits[j + 1 :])]
    return None


def _log8(lits, j, sig, fresh, scan):
    lit = lits[j]
    if isinstance(lit, Membership) and not lit.subject and rx.nullable(lit.rho):
        return [Conjunction(lits[:j] + lits[j + 1 :])]
    return None


# ---------------------------------------------------------------------------
# Failure rules


def _f1(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, HedgeEq):
        return None
    for a, b in _orientations(lit):
        if len(a) == 1 and isinstance(a[0], TermVar):
            x = a[0]
            if any(isinstance(it, Apply) and occurs_in(x, it.args) for it in b):
                return [FALSE_CONJ]
    return None


def _f2(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, HedgeEq):
        return None
    for a, b in _orientations(lit):
        if len(a) == 1 and isinstance(a[0], HedgeVar):
            x = a[0]
            if any(is_term(it) for it in b) and occurs_in(x, b):
                return [FALSE_CONJ]
    return None


def _f3(lits, j, sig, fresh, scan):
    lit = lits[j]
    if isinstance(lit, FunctorEq):
        if isinstance(lit.lhs, str) and isinstance(lit.rhs, str) and lit.lhs != lit.rhs:
            return [FALSE_CONJ]
        return None
    if isinstance(lit, HedgeEq) and len(lit.lhs) == 1 and len(lit.rhs) == 1:
        a, b = lit.lhs[0], lit.rhs[0]
        if (
            isinstance(a, Apply)
            and isinstance(b, Apply)
            and isinstance(a.head, str)
            and isinstance(b.head, str)
            and a.head != b.head
        ):
            return [FALSE_CONJ]
    return None


def _f4(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, HedgeEq):
        return None
    for a, b in _orientations(lit):
        if not a and any(is_term(it) for it in b):
            return [FALSE_CONJ]
    return None


def _f5(lits, j, sig, fresh, scan):
    lit = lits[j]
    if (
        isinstance(lit, Membership)
        and len(lit.subject) == 1
        and isinstance(lit.subject[0], Apply)
        and isinstance(lit.subject[0].head, str)
        and isinstance(lit.rho, rx.Sym)
        and lit.subject[0].head != lit.rho.symbol
    ):
        return [FALSE_CONJ]
    return None


def _f6(lits, j, sig, fresh, scan):
    lit = lits[j]
    if isinstance(lit, Membership) and not lit.subject and not rx.nullable(lit.rho):
        return [FALSE_CONJ]
    return None


def _f7(lits, j, sig, fresh, scan):
    lit = lits[j]
    if (
        isinstance(lit, Membership)
        and isinstance(lit.rho, rx.Eps)
        and any(is_term(it) for it in lit.subject)
    ):
        return [FALSE_CONJ]
    return None


# ---------------------------------------------------------------------------
# Deletion rules


def _del1(lits, j, sig, fresh, scan):
    lit = lits[j]
    if (
        isinstance(lit, HedgeEq)
        and lit.lhs
        and lit.rhs
        and isinstance(lit.lhs[0], HedgeVar)
        and lit.lhs[0] == lit.rhs[0]
    ):
        return [_rebuild(lits, j, [make_eq(lit.lhs[1:], lit.rhs[1:], sig)])]
    return None


def _del2(lits, j, sig, fresh, scan):
    pair = _unordered_args(lits[j], sig)
    if pair is None:
        return None
    h1, h2 = pair
    head = lits[j].lhs[0].head
    for p, item in enumerate(h1.items):
        if item in h2.items:
            q = h2.items.index(item)
            new1 = Hedge(h1.items[:p] + h1.items[p + 1 :])
            new2 = Hedge(h2.items[:q] + h2.items[q + 1 :])
            newlit = make_eq(
                Hedge((Apply(head, new1),)), Hedge((Apply(head, new2),)), sig
            )
            return [_rebuild(lits, j, [newlit])]
    return None


def _del3(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, HedgeEq):
        return None
    for a, b in _orientations(lit):
        if len(a) == 1 and isinstance(a[0], HedgeVar):
            x = a[0]
            if b and all(isinstance(it, HedgeVar) for it in b) and x in b.items:
                pos = b.items.index(x)
                if pos >= 1:
                    h1, h2 = b[:pos], b[pos + 1 :]
                    newlits = [make_eq(h1, EMPTY, sig), make_eq(h2, EMPTY, sig)]
                    return [_rebuild(lits, j, newlits)]
    return None


# ---------------------------------------------------------------------------
# Decomposition rules


def _d1(lits, j, sig, fresh, scan):
    pair = _unordered_args(lits[j], sig)
    if pair is None:
        return None
    h1, h2 = pair
    common = set(h1.items) & set(h2.items)
    if common:
        return None
    if all(is_term(it) for it in h2):
        hvar_side, terms, flipped = h1, h2, False
    elif all(is_term(it) for it in h1):
        hvar_side, terms, flipped = h2, h1, True
    else:
        return None
    out = []
    for t in perms(terms.items):
        if flipped:
            newlit = make_eq(Hedge(t), hvar_side, sig)
        else:
            newlit = make_eq(hvar_side, Hedge(t), sig)
        out.append(_rebuild(lits, j, [newlit]))
    return out


def _d2(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, HedgeEq):
        return None
    a, b = lit.lhs, lit.rhs
    if a and b and is_term(a[0]) and is_term(b[0]) and not (len(a) == 1 and len(b) == 1):
        head_eq = make_eq(Hedge((a[0],)), Hedge((b[0],)), sig)
        rest_eq = make_eq(a[1:], b[1:], sig)
        return [_rebuild(lits, j, [head_eq, rest_eq])]
    return None


# ---------------------------------------------------------------------------
# Elimination rules


def _e1(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, HedgeEq):
        return None
    for a, b in _orientations(lit):
        if (
            len(a) == 1
            and isinstance(a[0], TermVar)
            and len(b) == 1
            and is_term(b[0])
            and scan.in_rest(j, a[0])
            and not occurs_in(a[0], b)
        ):
            if isinstance(b[0], TermVar) and not scan.in_rest(j, b[0]):
                continue
            theta = Substitution.bind(a[0], b[0])
            kept = HedgeEq(Hedge((a[0],)), b)
            return [_rebuild(lits, j, [kept], theta, sig, scan)]
    return None


def _e2(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, HedgeEq):
        return None
    for a, b in _orientations(lit):
        if (
            len(a) == 1
            and isinstance(a[0], HedgeVar)
            and scan.in_rest(j, a[0])
            and not occurs_in(a[0], b)
        ):
            if len(b) == 1 and isinstance(b[0], HedgeVar) and not scan.in_rest(j, b[0]):
                continue
            theta = Substitution.bind(a[0], b)
            kept = HedgeEq(Hedge((a[0],)), b)
            return [_rebuild(lits, j, [kept], theta, sig, scan)]
    return None


def _e3(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, HedgeEq):
        return None
    for a, b in _orientations(lit):
        if len(a) >= 2 and isinstance(a[0], HedgeVar):
            x, h = a[0], a[1:]
            if all(is_term(it) for it in b) and not occurs_in(x, b):
                out = []
                for cut in range(len(b) + 1):
                    t1, t2 = b[:cut], b[cut:]
                    theta = Substitution.bind(x, t1)
                    bind_lit = HedgeEq(Hedge((x,)), t1)
                    tail_lit = make_eq(theta(h), t2, sig)
                    out.append(_rebuild(lits, j, [bind_lit, tail_lit], theta, sig, scan))
                return out
    return None


def _e4(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, HedgeEq):
        return None
    for a, b in _orientations(lit):
        if len(a) >= 2 and isinstance(a[0], HedgeVar):
            x, h1 = a[0], a[1:]
            k, blocker = _term_prefix_split(x, b)
            if blocker is not None and is_term(blocker) and occurs_in(x, blocker):
                t, h2 = b[:k], b[k + 1 :]
                out = []
                for cut in range(len(t) + 1):
                    t1, t2 = t[:cut], t[cut:]
                    theta = Substitution.bind(x, t1)
                    bind_lit = HedgeEq(Hedge((x,)), t1)
                    remainder = theta(t2 + Hedge((blocker,)) + h2)
                    tail_lit = make_eq(theta(h1), remainder, sig)
                    out.append(_rebuild(lits, j, [bind_lit, tail_lit], theta, sig, scan))
                return out
    return None


def _e5(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, FunctorEq):
        return None
    for v, img in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
        if isinstance(v, FuncVar) and v != img and scan.in_rest(j, v):
            if isinstance(img, FuncVar) and not scan.in_rest(j, img):
                continue
            theta = Substitution.bind(v, img)
            kept = FunctorEq(v, img)
            return [_rebuild(lits, j, [kept], theta, sig, scan)]
    return None


def _func_heads(lit):
    """(a, b) of a singleton equation between applications, else None."""
    if isinstance(lit, HedgeEq) and len(lit.lhs) == 1 and len(lit.rhs) == 1:
        a, b = lit.lhs[0], lit.rhs[0]
        if isinstance(a, Apply) and isinstance(b, Apply):
            return a, b
    return None


def _e6(lits, j, sig, fresh, scan):
    pair = _func_heads(lits[j])
    if pair is None:
        return None
    a, b = pair
    if a.head == b.head:
        return None
    if not (isinstance(a.head, FuncVar) or isinstance(b.head, FuncVar)):
        return None
    if isinstance(a.head, FuncVar):
        v, img = a.head, b.head
    else:
        v, img = b.head, a.head
    theta = Substitution.bind(v, img)
    func_lit = FunctorEq(v, img)
    eq_lit = make_eq(Hedge((theta(a),)), Hedge((theta(b),)), sig)
    return [_rebuild(lits, j, [func_lit, eq_lit], theta, sig, scan)]


def _e7(lits, j, sig, fresh, scan):
    pair = _func_heads(lits[j])
    if pair is None:
        return None
    a, b = pair
    if not isinstance(a.head, FuncVar) or a.head != b.head or a.args == b.args:
        return None
    if not sig.symbols:
        return [FALSE_CONJ]
    out = []
    for f in sig.symbols:
        theta = Substitution.bind(a.head, f)
        func_lit = FunctorEq(a.head, f)
        eq_lit = make_eq(Hedge((theta(a),)), Hedge((theta(b),)), sig)
        out.append(_rebuild(lits, j, [func_lit, eq_lit], theta, sig, scan))
    return out


# ---------------------------------------------------------------------------
# Membership rules


def _m1(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, Membership):
        return None
    s = lit.subject
    if s and all(isinstance(it, HedgeVar) for it in s) and isinstance(lit.rho, rx.Eps):
        theta = Substitution(hedge_map={v: EMPTY for v in dict.fromkeys(s.items)})
        newlits = [HedgeEq(Hedge((v,)), EMPTY) for v in s]
        return [_rebuild(lits, j, newlits, theta, sig, scan)]
    return None


def _m2(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, Membership):
        return None
    s, rho = lit.subject, lit.rho
    if len(s) >= 2 and is_term(s[0]) and not isinstance(rho, rx.Eps):
        t, h = Hedge((s[0],)), s[1:]
        pairs = rx.lf(rho)
        if not pairs:
            return [FALSE_CONJ]
        out = []
        for head, tail in pairs:
            out.append(_rebuild(lits, j, [Membership(t, head), Membership(h, tail)]))
        return out
    return None


def _m3(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, Membership):
        return None
    s, rho = lit.subject, lit.rho
    if len(s) >= 2 and isinstance(s[0], HedgeVar) and isinstance(rho, rx.Sym):
        x, h = s[0], s[1:]
        d1 = _rebuild(lits, j, [make_eq(Hedge((x,)), EMPTY, sig), Membership(h, rho)])
        d2 = _rebuild(lits, j, [Membership(Hedge((x,)), rho), make_eq(h, EMPTY, sig)])
        return [d1, d2]
    return None


def _m4(lits, j, sig, fresh, scan):
    lit = lits[j]
    if (
        isinstance(lit, Membership)
        and len(lit.subject) == 1
        and is_term(lit.subject[0])
        and isinstance(lit.rho, rx.Star)
    ):
        return [_rebuild(lits, j, [Membership(lit.subject, lit.rho.body)])]
    return None


def _m5(lits, j, sig, fresh, scan):
    lit = lits[j]
    if (
        isinstance(lit, Membership)
        and len(lit.subject) == 1
        and is_term(lit.subject[0])
        and isinstance(lit.rho, rx.Concat)
    ):
        s, rho = lit.subject, lit.rho
        d1 = _rebuild(lits, j, [Membership(s, rho.left), Membership(EMPTY, rho.right)])
        d2 = _rebuild(lits, j, [Membership(EMPTY, rho.left), Membership(s, rho.right)])
        return [d1, d2]
    return None


def _m6(lits, j, sig, fresh, scan):
    lit = lits[j]
    if (
        isinstance(lit, Membership)
        and len(lit.subject) == 1
        and is_term(lit.subject[0])
        and isinstance(lit.rho, rx.Choice)
    ):
        d1 = _rebuild(lits, j, [Membership(lit.subject, lit.rho.left)])
        d2 = _rebuild(lits, j, [Membership(lit.subject, lit.rho.right)])
        return [d1, d2]
    return None


def _m7(lits, j, sig, fresh, scan):
    lit = lits[j]
    if (
        isinstance(lit, Membership)
        and lit.subject
        and isinstance(lit.subject[0], HedgeVar)
        and isinstance(lit.rho, rx.Choice)
    ):
        d1 = _rebuild(lits, j, [Membership(lit.subject, lit.rho.left)])
        d2 = _rebuild(lits, j, [Membership(lit.subject, lit.rho.right)])
        return [d1, d2]
    return None


def _m8(lits, j, sig, fresh, scan):
    lit = lits[j]
    if not isinstance(lit, Membership) or len(lit.subject) != 1:
        return None
    v = lit.subject[0]
    if isinstance(v, TermVar):
        shapes = (rx.Sym,)
    elif isinstance(v, HedgeVar):
        shapes = (rx.Concat, rx.Star)
    else:
        return None
    if not isinstance(lit.rho, shapes):
        return None
    for k in range(j + 1, len(lits)):
        other = lits[k]
        if (
            isinstance(other, Membership)
            and other.subject == lit.subject
            and isinstance(other.rho, shapes)
        ):
            gamma = rx.intersect(lit.rho, other.rho)
            if gamma is rx.EMPTY_LANGUAGE:
                return [FALSE_CONJ]
            merged = Membership(lit.subject, gamma)
            out = lits[:j] + (merged,) + lits[j + 1 : k] + lits[k + 1 :]
            return [Conjunction(out)]
    return None


def _m9(lits, j, sig, fresh, scan):
    lit = lits[j]
    if (
        isinstance(lit, Membership)
        and len(lit.subject) == 1
        and isinstance(lit.subject[0], HedgeVar)
        and isinstance(lit.rho, rx.Sym)
    ):
        xh = lit.subject[0]
        x = fresh.fresh(TermVar)
        theta = Substitution.bind(xh, Hedge((x,)))
        newlits = [
            HedgeEq(Hedge((xh,)), Hedge((x,))),
            Membership(Hedge((x,)), lit.rho),
        ]
        return [_rebuild(lits, j, newlits, theta, sig, scan)]
    return None


def _m10(lits, j, sig, fresh, scan):
    lit = lits[j]
    if (
        isinstance(lit, Membership)
        and len(lit.subject) == 1
        and isinstance(lit.subject[0], Apply)
        and isinstance(lit.subject[0].head, FuncVar)
        and isinstance(lit.rho, rx.Sym)
    ):
        t = lit.subject[0]
        theta = Substitution.bind(t.head, lit.rho.symbol)
        newlits = [
            FunctorEq(t.head, lit.rho.symbol),
            Membership(Hedge((theta(t),)), lit.rho),
        ]
        return [_rebuild(lits, j, newlits, theta, sig, scan)]
    return None


def _m11(lits, j, sig, fresh, scan):
    lit = lits[j]
    if (
        isinstance(lit, Membership)
        and len(lit.subject) == 1
        and isinstance(lit.subject[0], Apply)
        and isinstance(lit.subject[0].head, str)
        and isinstance(lit.rho, rx.Sym)
        and lit.subject[0].head == lit.rho.symbol
        and not sig.is_unordered(lit.subject[0].head)
    ):
        return [_rebuild(lits, j, [Membership(lit.subject[0].args, lit.rho.body)])]
    return None


def _m12(lits, j, sig, fresh, scan):
    lit = lits[j]
    if (
        isinstance(lit, Membership)
        and len(lit.subject) == 1
        and isinstance(lit.subject[0], Apply)
        and isinstance(lit.subject[0].head, str)
        and isinstance(lit.rho, rx.Sym)
        and lit.subject[0].head == lit.rho.symbol
        and sig.is_unordered(lit.subject[0].head)
        and all(is_term(it) for it in lit.subject[0].args)
    ):
        out = []
        for t in perms(lit.subject[0].args.items):
            out.append(_rebuild(lits, j, [Membership(Hedge(t), lit.rho.body)]))
        return out
    return None


_LITERAL_RULES = {
    Rule.LOG1: _log1,
    Rule.LOG3: _log3,
    Rule.LOG5: _log5,
    Rule.LOG7: _log7,
    Rule.LOG8: _log8,
    Rule.F1: _f1,
    Rule.F2: _f2,
    Rule.F3: _f3,
    Rule.F4: _f4,
    Rule.F5: _f5,
    Rule.F6: _f6,
    Rule.F7: _f7,
    Rule.DEL1: _del1,
    Rule.DEL2: _del2,
    Rule.DEL3: _del3,
    Rule.D1: _d1,
    Rule.D2: _d2,
    Rule.E1: _e1,
    Rule.E2: _e2,
    Rule.E3: _e3,
    Rule.E4: _e4,
    Rule.E5: _e5,
    Rule.E6: _e6,
    Rule.E7: _e7,
    Rule.M1: _m1,
    Rule.M2: _m2,
    Rule.M3: _m3,
    Rule.M4: _m4,
    Rule.M5: _m5,
    Rule.M6: _m6,
    Rule.M7: _m7,
    Rule.M8: _m8,
    Rule.M9: _m9,
    Rule.M10: _m10,
    Rule.M11: _m11,
    Rule.M12: _m12,
}

RULE_ORDER = (
    Rule.LOG1,
    Rule.LOG2,
    Rule.LOG3,
    Rule.LOG4,
    Rule.LOG5,
    Rule.LOG6,
    Rule.LOG7,
    Rule.LOG8,
    Rule.F1,
    Rule.F2,
    Rule.F3,
    Rule.F4,
    Rule.F5,
    Rule.F6,
    Rule.F7,
    Rule.DEL1,
    Rule.DEL2,
    Rule.DEL3,
    Rule.D1,
    Rule.D2,
    Rule.E1,
    Rule.E2,
    Rule.E3,
    Rule.E4,
    Rule.E5,
    Rule.E6,
    Rule.E7,
    Rule.M1,
    Rule.M2,
    Rule.M3,
    Rule.M4,
    Rule.M5,
    Rule.M6,
    Rule.M7,
    Rule.M8,
    Rule.M9,
    Rule.M10,
    Rule.M11,
    Rule.M12,
)

# Rules whose applicability is determined by the probed literal alone
# (plus the signature, fixed per solver run).  Everything else consults
# neighbouring literals: Log1 and M8 look for partners, E1/E2/E5 ask
# whether a variable occurs elsewhere.
_CONTEXTUAL = {Rule.LOG1, Rule.M8, Rule.E1, Rule.E2, Rule.E5}
_IS_SHAPE = tuple(
    rule in _LITERAL_RULES and rule not in _CONTEXTUAL for rule in RULE_ORDER
)


def _disjunct_key(c: Conjunction):
    return (c.is_false, frozenset(Counter(c.literals).items()))


def _step_log2(d: DNF, infos):
    keys = []
    for c, info in zip(d.disjuncts, infos):
        if info.key is None:
            info.key = _disjunct_key(c)
        keys.append(info.key)
    for i in range(len(keys)):
        for k in range(i + 1, len(keys)):
            if keys[i] == keys[k]:
                rest = d.disjuncts[:k] + d.disjuncts[k + 1 :]
                return DNF(rest), TraceEvent(Rule.LOG2, k, -1)
    return None


def _step_log4(d: DNF):
    if len(d.disjuncts) < 2:
        return None
    for i, c in enumerate(d.disjuncts):
        if c.is_false:
            rest = d.disjuncts[:i] + d.disjuncts[i + 1 :]
            return DNF(rest), TraceEvent(Rule.LOG4, i, -1)
    return None


def _step_log6(d: DNF):
    if len(d.disjuncts) < 2:
        return None
    for i, c in enumerate(d.disjuncts):
        if not c.is_false and not c.literals:
            return TRUE_DNF, TraceEvent(Rule.LOG6, i, -1)
    return None


class _Info:
    """What step() has learned about one conjunction, cached by identity.

    clean is the number of leading rules of RULE_ORDER known not to apply
    anywhere in the conjunction.  Applicability of a literal rule depends
    only on the literal tuple and the signature, both fixed for the
    lifetime of a cache, so the knowledge survives step() restarts.
    """

    __slots__ = ("scan", "key", "clean")

    def __init__(self):
        self.scan = None
        self.key = None
        self.clean = 0


class _Cache:
    """Scan results carried between step() calls of one solver run.

    conjs maps id(conjunction) -> (conjunction, _Info); lits maps
    id(literal) -> (literal, level), where level is the number of leading
    rules of RULE_ORDER that are shape-only and known not to apply to the
    literal.  Values pin their keyed object, so ids cannot be recycled
    while an entry lives.
    """

    __slots__ = ("conjs", "lits")

    def __init__(self):
        self.conjs = {}
        self.lits = {}


def _info_for(c: Conjunction, conjs) -> _Info:
    if conjs is None:
        return _Info()
    entry = conjs.get(id(c))
    if entry is not None and entry[0] is c:
        return entry[1]
    info = _Info()
    conjs[id(c)] = (c, info)
    return info


def step(d: DNF, sig: Signature, fresh: FreshVars, cache: _Cache | None = None):
    """Apply the first applicable rule; None if d is in normal form.

    cache, if given, carries per-conjunction and per-literal scan
    progress between calls.
    """
    if cache is None:
        conjs = lit_levels = None
    else:
        conjs, lit_levels = cache.conjs, cache.lits
    infos = [_info_for(c, conjs) for c in d.disjuncts]
    for r, rule in enumerate(RULE_ORDER):
        if rule is Rule.LOG2:
            if len(d.disjuncts) >= 2:
                res = _step_log2(d, infos)
                if res is not None:
                    return res
            continue
        if rule is Rule.LOG4:
            res = _step_log4(d)
            if res is not None:
                return res
            continue
        if rule is Rule.LOG6:
            res = _step_log6(d)
            if res is not None:
                return res
            continue
        fn = _LITERAL_RULES[rule]
        shape = _IS_SHAPE[r] and lit_levels is not None
        for i, c in enumerate(d.disjuncts):
            info = infos[i]
            if info.clean > r:
                continue
            scan = info.scan
            if scan is None:
                scan = info.scan = _Scan(c.literals)
            lits = c.literals
            for j in range(len(lits)):
                if shape:
                    lit = lits[j]
                    key = id(lit)
                    entry = lit_levels.get(key)
                    if entry is not None and entry[0] is lit and entry[1] > r:
                        continue
                    out = fn(lits, j, sig, fresh, scan)
                    if out is None:
                        lit_levels[key] = (lit, r + 1)
                        continue
                else:
                    out = fn(lits, j, sig, fresh, scan)
                    if out is None:
                        continue
                parts = d.disjuncts[:i] + tuple(out) + d.disjuncts[i + 1 :]
                return DNF(parts), TraceEvent(rule, i, j)
            info.clean = r + 1
    return None


# ---------------------------------------------------------------------------
# Termination measure


def _eq_size(lit) -> int:
    if isinstance(lit, FunctorEq):
        return 2
    return size(lit.lhs) + size(lit.rhs)


def _solved_var_occurrences(c: Conjunction):
    """Count variable occurrences and collect equation-witnessed solved vars.

    A variable is solved when its single occurrence is the lone side of an
    equation of matching kind: a term variable against a one-term hedge, a
    hedge variable against any hedge, a function variable against a functor.
    Membership literals never witness solvedness for the measure; swapping
    a variable into a membership must not look like progress.
    """
    counts = Counter()
    for lit in c.literals:
        counts.update(iter_vars(lit))
    solved = set()
    for lit in c.literals:
        if isinstance(lit, HedgeEq):
            for a, b in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
                if len(a) == 1 and counts[a[0]] == 1:
                    v = a[0]
                    if isinstance(v, HedgeVar) or (
                        isinstance(v, TermVar) and len(b) == 1 and is_term(b[0])
                    ):
                        solved.add(v)
        elif isinstance(lit, FunctorEq):
            for v in (lit.lhs, lit.rhs):
                if isinstance(v, FuncVar) and counts[v] == 1:
                    solved.add(v)
    return counts, solved


def cm(c: Conjunction) -> tuple:
    """Per-conjunction measure: (unsolved variables, membership subject
    sizes, hedge-variable memberships, expression sizes, equation sizes).
    Multisets are encoded as descending-sorted tuples."""
    if c.is_false:
        return (0, (), 0, (), ())
    counts, solved = _solved_var_occurrences(c)
    n1 = sum(1 for v in counts if v not in solved)
    m1 = []
    n2 = 0
    m2 = []
    m3 = []
    for lit in c.literals:
        if isinstance(lit, Membership):
            if lit.subject:
                m1.append(size(lit.subject))
            if len(lit.subject) == 1 and isinstance(lit.subject[0], HedgeVar):
                n2 += 1
            m2.append(size(lit.rho))
        else:
            m3.append(_eq_size(lit))
    return (
        n1,
        tuple(sorted(m1, reverse=True)),
        n2,
        tuple(sorted(m2, reverse=True)),
        tuple(sorted(m3, reverse=True)),
    )


def cm_dnf(d: DNF) -> tuple:
    return tuple(sorted((cm(c) for c in d.disjuncts), reverse=True))


# ---------------------------------------------------------------------------
# The solver


def to_dnf(x) -> DNF:
    if isinstance(x, DNF):
        return x
    if isinstance(x, Conjunction):
        return DNF((x,))
    if isinstance(x, (Lit, And, Or, TrueF, FalseF)):
        return dnf(x)
    if isinstance(x, (HedgeEq, FunctorEq, Membership)):
        return DNF((Conjunction((x,)),))
    raise TypeError(f"not a constraint: {x!r}")


def sol(
    constraint,
    sig: Signature,
    fresh: FreshVars | None = None,
    *,
    on_step=None,
    check_measure: bool = False,
    max_steps: int = 200_000,
) -> DNF:
    """Rewrite to normal form.  on_step(event, dnf) observes each step;
    check_measure verifies strict decrease of the termination measure."""
    d = to_dnf(constraint)
    if fresh is None:
        fresh = FreshVars()
    fresh.reserve(v.name for v in free_vars(d))
    cache = _Cache()
    for _ in range(max_steps):
        res = step(d, sig, fresh, cache)
        if res is None:
            return d
        new_d, event = res
        if check_measure and not cm_dnf(new_d) < cm_dnf(d):
            raise MeasureError(
                f"non-decreasing step {event!r}: {cm_dnf(d)!r} -> {cm_dnf(new_d)!r}"
            )
        if on_step is not None:
            on_step(event, new_d)
        d = new_d
    raise RuntimeError(f"no normal form within {max_steps} steps")
