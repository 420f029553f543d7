"""Regular hedge expressions and their linear forms.

Expressions denote sets of ground hedges:

    rho ::= eps | f(rho) | rho . rho | rho | rho | rho*

There is no empty-language constant; every expression denotes a nonempty
language.  The empty language shows up only as the result of an
intersection and is represented by the EMPTY_LANGUAGE marker.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .syntax import EMPTY, Apply, Hedge, Signature, iter_vars, perms, size


@dataclass(frozen=True)
class Eps:
    def __repr__(self) -> str:
        return "eps"


EPS = Eps()


@dataclass(frozen=True)
class Sym:
    """f(body); a bare symbol f abbreviates f(eps)."""

    symbol: str
    body: "Regex" = EPS

    def __repr__(self) -> str:
        return self.symbol if self.body == EPS else f"{self.symbol}({self.body!r})"


@dataclass(frozen=True)
class Concat:
    left: "Regex"
    right: "Regex"

    def __repr__(self) -> str:
        return f"({self.left!r} . {self.right!r})"


@dataclass(frozen=True)
class Choice:
    left: "Regex"
    right: "Regex"

    def __repr__(self) -> str:
        return f"({self.left!r} | {self.right!r})"


@dataclass(frozen=True)
class Star:
    body: "Regex"

    def __repr__(self) -> str:
        return f"({self.body!r})*"


Regex = Union[Eps, Sym, Concat, Choice, Star]


class EmptyLanguage:
    """Result marker for an empty intersection; not a regex node."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "<empty language>"


EMPTY_LANGUAGE = EmptyLanguage()


for _cls in (Eps, Sym, Concat, Choice, Star):
    iter_vars.register(_cls, lambda obj: iter(()))


@size.register
def _(r: Eps) -> int:
    return 1


@size.register
def _(r: Sym) -> int:
    return 1 if r.body == EPS else 1 + size(r.body)


@size.register
def _(r: Concat) -> int:
    return 1 + size(r.left) + size(r.right)


@size.register
def _(r: Choice) -> int:
    return 1 + size(r.left) + size(r.right)


@size.register
def _(r: Star) -> int:
    return 1 + size(r.body)


def nullable(rho) -> bool:
    if isinstance(rho, Eps):
        return True
    if isinstance(rho, Sym):
        return False
    if isinstance(rho, Concat):
        return nullable(rho.left) and nullable(rho.right)
    if isinstance(rho, Choice):
        return nullable(rho.left) or nullable(rho.right)
    if isinstance(rho, Star):
        return True
    raise TypeError(f"nullable: not a regex: {rho!r}")


def odot(pairs, rho):
    """Append rho to the tail of every linear-form pair."""
    if rho == EPS:
        return list(pairs)
    out = []
    for head, tail in pairs:
        out.append((head, rho if tail == EPS else Concat(tail, rho)))
    return out


def lf(rho) -> list:
    """Linear form: pairs (f(rho1), rho2) covering the non-empty hedges.

    A ground hedge (t, H) with t != eps belongs to rho iff for some pair,
    t is in the f(rho1) part and H is in rho2.
    """
    if isinstance(rho, Eps):
        return []
    if isinstance(rho, Sym):
        return [(rho, EPS)]
    if isinstance(rho, Choice):
        return _dedup(lf(rho.left) + lf(rho.right))
    if isinstance(rho, Concat):
        pairs = odot(lf(rho.left), rho.right)
        if nullable(rho.left):
            pairs = pairs + lf(rho.right)
        return _dedup(pairs)
    if isinstance(rho, Star):
        return _dedup(odot(lf(rho.body), rho))
    raise TypeError(f"lf: not a regex: {rho!r}")


def _dedup(pairs):
    return list(dict.fromkeys(pairs))


def symbols_of(rho) -> tuple:
    """Symbols occurring in rho, in order of first appearance."""
    out = dict()
    stack = [rho]
    while stack:
        r = stack.pop(0)
        if isinstance(r, Sym):
            out.setdefault(r.symbol)
            stack.insert(0, r.body)
        elif isinstance(r, (Concat, Choice)):
            stack[:0] = [r.left, r.right]
        elif isinstance(r, Star):
            stack.insert(0, r.body)
    return tuple(out)


def ground_member(h: Hedge, rho, sig: Signature | None = None) -> bool:
    """Decide membership of a ground hedge using linear forms.

    Argument hedges of unordered symbols match the body up to permutation.
    """
    sig = sig or Signature()
    if not h:
        return nullable(rho)
    t, rest = h[0], h[1:]
    if not isinstance(t, Apply) or not isinstance(t.head, str):
        raise ValueError(f"ground_member: non-ground hedge {h!r}")
    unordered = sig.is_unordered(t.head)
    for head, tail in lf(rho):
        if head.symbol != t.head:
            continue
        if _args_match(t.args, head.body, sig, unordered) and ground_member(
            rest, tail, sig
        ):
            return True
    return False


def _args_match(args: Hedge, body, sig: Signature, unordered: bool) -> bool:
    if unordered:
        return any(ground_member(Hedge(p), body, sig) for p in perms(args.items))
    return ground_member(args, body, sig)


def member_direct(h: Hedge, rho, sig: Signature | None = None) -> bool:
    """Structural membership test, independent of linear forms."""
    sig = sig or Signature()
    if isinstance(rho, Eps):
        return not h
    if isinstance(rho, Sym):
        if len(h) != 1 or not isinstance(h[0], Apply) or h[0].head != rho.symbol:
            return False
        args = h[0].args
        if sig.is_unordered(rho.symbol):
            return any(member_direct(Hedge(p), rho.body, sig) for p in perms(args.items))
        return member_direct(args, rho.body, sig)
    if isinstance(rho, Concat):
        return any(
            member_direct(h[:i], rho.left, sig) and member_direct(h[i:], rho.right, sig)
            for i in range(len(h) + 1)
        )
    if isinstance(rho, Choice):
        return member_direct(h, rho.left, sig) or member_direct(h, rho.right, sig)
    if isinstance(rho, Star):
        if not h:
            return True
        return any(
            member_direct(h[:i], rho.body, sig) and member_direct(h[i:], rho, sig)
            for i in range(1, len(h) + 1)
        )
    raise TypeError(f"member_direct: not a regex: {rho!r}")


def enumerate_hedges(symbols, max_size: int) -> list:
    """All ground hedges over the given symbols with size <= max_size."""
    hedges = {0: [EMPTY]}
    terms = {}
    for s in range(1, max_size + 1):
        terms[s] = [Apply(f, h) for f in symbols for h in hedges[s - 1]]
        row = []
        for first in range(1, s + 1):
            for t in terms[first]:
                for rest in hedges[s - first]:
                    row.append(Hedge((t,) + rest.items))
        hedges[s] = row
    return [h for s in range(max_size + 1) for h in hedges[s]]


def lang_enumerate(rho, max_size: int, sig: Signature | None = None) -> list:
    """Members of rho among all hedges over its own symbols up to max_size."""
    sig = sig or Signature()
    return [
        h
        for h in enumerate_hedges(symbols_of(rho), max_size)
        if member_direct(h, rho, sig)
    ]


def shortest_member(rho) -> Hedge:
    """Some member of minimal size; total since languages are nonempty."""
    if isinstance(rho, Eps):
        return EMPTY
    if isinstance(rho, Sym):
        return Hedge((Apply(rho.symbol, shortest_member(rho.body)),))
    if isinstance(rho, Concat):
        return shortest_member(rho.left) + shortest_member(rho.right)
    if isinstance(rho, Choice):
        a, b = shortest_member(rho.left), shortest_member(rho.right)
        return a if size(a) <= size(b) else b
    if isinstance(rho, Star):
        return EMPTY
    raise TypeError(f"shortest_member: not a regex: {rho!r}")


class HedgeAutomaton:
    """Finite automaton over hedges; transitions carry an inner automaton
    for the argument hedge of the labeling symbol."""

    def __init__(self, n_states, transitions, initial, accepting):
        self.n_states = n_states
        self.transitions = tuple(transitions)  # (src, symbol, inner, dst)
        self.initial = frozenset(initial)
        self.accepting = frozenset(accepting)
        self._empty = None

    def is_empty(self) -> bool:
        if self._empty is None:
            reached = set(self.initial)
            frontier = list(self.initial)
            while frontier:
                q = frontier.pop()
                for src, _f, inner, dst in self.transitions:
                    if src == q and dst not in reached and not inner.is_empty():
                        reached.add(dst)
                        frontier.append(dst)
            self._empty = not (reached & self.accepting)
        return self._empty

    def __repr__(self) -> str:
        return (
            f"HedgeAutomaton(states={self.n_states}, "
            f"transitions={len(self.transitions)}, accepting={sorted(self.accepting)})"
        )


@lru_cache(maxsize=None)
def to_automaton(rho) -> HedgeAutomaton:
    """Partial-derivative automaton: states are linear-form tails."""
    states = {rho: 0}
    order = [rho]
    transitions = []
    i = 0
    while i < len(order):
        src = order[i]
        for head, tail in lf(src):
            inner = to_automaton(head.body)
            if tail not in states:
                states[tail] = len(order)
                order.append(tail)
            transitions.append((states[src], head.symbol, inner, states[tail]))
        i += 1
    accepting = [states[s] for s in order if nullable(s)]
    return HedgeAutomaton(len(order), transitions, [0], accepting)


def product(a: HedgeAutomaton, b: HedgeAutomaton) -> HedgeAutomaton:
    """Pair-construction intersection of two hedge automata."""
    index = {}
    order = []

    def state(p):
        if p not in index:
            index[p] = len(order)
            order.append(p)
        return index[p]

    initial = [state((p, q)) for p in sorted(a.initial) for q in sorted(b.initial)]
    transitions = []
    i = 0
    while i < len(order):
        p, q = order[i]
        src = i
        for sa, fa, inner_a, da in a.transitions:
            if sa != p:
                continue
            for sb, fb, inner_b, db in b.transitions:
                if sb != q or fa != fb:
                    continue
                inner = product(inner_a, inner_b)
                if inner.is_empty():
                    continue
                transitions.append((src, fa, inner, state((da, db))))
        i += 1
    accepting = [
        i for i, (p, q) in enumerate(order) if p in a.accepting and q in b.accepting
    ]
    return HedgeAutomaton(len(order), transitions, initial, accepting)


def automaton_to_regex(aut: HedgeAutomaton):
    """State elimination; returns a regex or EMPTY_LANGUAGE."""
    if aut.is_empty():
        return EMPTY_LANGUAGE
    S, T = -1, -2
    edges: dict[tuple, object] = {}

    def add(src, dst, r):
        old = edges.get((src, dst))
        edges[(src, dst)] = r if old is None or old == r else Choice(old, r)

    for q in aut.initial:
        add(S, q, EPS)
    for q in aut.accepting:
        add(q, T, EPS)
    for src, f, inner, dst in aut.transitions:
        body = automaton_to_regex(inner)
        if body is EMPTY_LANGUAGE:
            continue
        add(src, dst, Sym(f, body))

    for q in range(aut.n_states):
        loop = edges.pop((q, q), None)
        ins = [(p, r) for (p, d), r in edges.items() if d == q]
        outs = [(d, r) for (p, d), r in edges.items() if p == q]
        for p, _ in ins:
            del edges[(p, q)]
        for d, _ in outs:
            del edges[(q, d)]
        for p, r_in in ins:
            for d, r_out in outs:
                r = _concat(r_in, _concat(_star(loop), r_out))
                add(p, d, r)

    return edges.get((S, T), EMPTY_LANGUAGE)


def _concat(a, b):
    if a is None or a == EPS:
        return b
    if b == EPS:
        return a
    return Concat(a, b)


def _star(r):
    if r is None or r == EPS:
        return EPS
    if isinstance(r, Star):
        return r
    return Star(r)


def intersect(r1, r2):
    """Regex for the intersection of two languages, or EMPTY_LANGUAGE."""
    prod = product(to_automaton(r1), to_automaton(r2))
    if prod.is_empty():
        return EMPTY_LANGUAGE
    return automaton_to_regex(prod)
