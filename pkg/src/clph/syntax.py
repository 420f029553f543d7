"""Core syntax: variables, terms, hedges, signatures, substitutions.

A hedge is a finite sequence of terms and hedge variables.  A term is a
term variable or an application ``f(H)`` whose head is a function symbol
(a plain string) or a function variable and whose argument is a hedge.
The empty hedge is written ``EMPTY``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import singledispatch
from typing import Iterable, Iterator, Union


class SignatureError(Exception):
    """Conflicting or invalid symbol declaration."""


@dataclass(frozen=True)
class TermVar:
    name: str

    def __repr__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True)
class HedgeVar:
    name: str

    def __repr__(self) -> str:
        return f"@{self.name}"


@dataclass(frozen=True)
class FuncVar:
    name: str

    def __repr__(self) -> str:
        return f"^{self.name}"


Var = Union[TermVar, HedgeVar, FuncVar]
Functor = Union[str, FuncVar]


@dataclass(frozen=True)
class Hedge:
    """A sequence of terms and hedge variables."""

    items: tuple = ()

    def __post_init__(self):
        for it in self.items:
            if not isinstance(it, (TermVar, Apply, HedgeVar)):
                raise TypeError(f"bad hedge element: {it!r}")

    @staticmethod
    def of(*items) -> "Hedge":
        return Hedge(tuple(items))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator:
        return iter(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def __getitem__(self, i):
        got = self.items[i]
        return Hedge(got) if isinstance(i, slice) else got

    def __add__(self, other: "Hedge") -> "Hedge":
        return Hedge(self.items + other.items)

    def __repr__(self) -> str:
        return "(" + ", ".join(repr(it) for it in self.items) + ")"


EMPTY = Hedge(())


@dataclass(frozen=True)
class Apply:
    """An application f(H); a nullary symbol is Apply(f) with empty args."""

    head: Functor
    args: Hedge = EMPTY

    def __post_init__(self):
        if not isinstance(self.head, (str, FuncVar)):
            raise TypeError(f"bad functor: {self.head!r}")
        if not isinstance(self.args, Hedge):
            raise TypeError(f"bad argument hedge: {self.args!r}")

    def __repr__(self) -> str:
        if not self.args:
            return repr(self.head) if isinstance(self.head, FuncVar) else self.head
        return f"{self.head}{self.args!r}"


Term = Union[TermVar, Apply]


def is_term(x) -> bool:
    return isinstance(x, (TermVar, Apply))


class Signature:
    """Function symbols split into ordered and unordered ones.

    Symbols need not be declared up front: an unknown symbol is treated as
    ordered.  Declarations are remembered in order of first appearance so
    that rules which enumerate "all symbols of the signature" are
    deterministic.
    """

    def __init__(self):
        self._kinds: dict[str, bool] = {}  # name -> is_unordered

    @staticmethod
    def of(ordered: Iterable[str] = (), unordered: Iterable[str] = ()) -> "Signature":
        sig = Signature()
        for name in ordered:
            sig.declare(name, unordered=False)
        for name in unordered:
            sig.declare(name, unordered=True)
        return sig

    def declare(self, name: str, unordered: bool = False) -> None:
        old = self._kinds.get(name)
        if old is not None and old != unordered:
            kind = "unordered" if old else "ordered"
            raise SignatureError(f"symbol {name!r} already declared {kind}")
        self._kinds[name] = unordered

    def is_unordered(self, name: Functor) -> bool:
        if isinstance(name, FuncVar):
            return False
        return self._kinds.get(name, False)

    def is_declared(self, name: str) -> bool:
        return name in self._kinds

    @property
    def symbols(self) -> tuple:
        return tuple(self._kinds)

    @property
    def has_unordered(self) -> bool:
        return any(self._kinds.values())

    def __repr__(self) -> str:
        parts = [name + ("/u" if u else "") for name, u in self._kinds.items()]
        return f"Signature({', '.join(parts)})"


@singledispatch
def iter_vars(obj) -> Iterator[Var]:
    """Yield every variable occurrence of obj, left to right."""
    raise TypeError(f"iter_vars: unsupported {type(obj).__name__}")


@iter_vars.register
def _(v: TermVar):
    yield v


@iter_vars.register
def _(v: HedgeVar):
    yield v


@iter_vars.register
def _(v: FuncVar):
    yield v


@iter_vars.register
def _(h: Hedge):
    for it in h.items:
        yield from iter_vars(it)


@iter_vars.register
def _(t: Apply):
    if isinstance(t.head, FuncVar):
        yield t.head
    yield from iter_vars(t.args)


# Non-core containers (literals, conjunctions) register how to split into
# children so the iterative walkers below can traverse them without
# falling back to the generator protocol.
_CHILDREN: dict = {}


def register_children(cls, split) -> None:
    """Teach free_vars/occurs_in to decompose cls via split(obj)."""
    _CHILDREN[cls] = split


def free_vars(obj) -> frozenset:
    out = set()
    stack = [obj]
    while stack:
        o = stack.pop()
        cls = o.__class__
        if cls is TermVar or cls is HedgeVar or cls is FuncVar:
            out.add(o)
        elif cls is Hedge:
            stack.extend(o.items)
        elif cls is Apply:
            if o.head.__class__ is FuncVar:
                out.add(o.head)
            stack.extend(o.args.items)
        else:
            split = _CHILDREN.get(cls)
            if split is None:
                out.update(iter_vars(o))
            else:
                stack.extend(split(o))
    return frozenset(out)


def occurs_in(v: Var, obj) -> bool:
    """Does variable v occur anywhere in obj?  Stops at the first hit."""
    stack = [obj]
    while stack:
        o = stack.pop()
        cls = o.__class__
        if cls is TermVar or cls is HedgeVar or cls is FuncVar:
            if o == v:
                return True
        elif cls is Hedge:
            stack.extend(o.items)
        elif cls is Apply:
            if o.head == v:
                return True
            stack.extend(o.args.items)
        else:
            split = _CHILDREN.get(cls)
            if split is None:
                if v in free_vars(o):
                    return True
            else:
                stack.extend(split(o))
    return False


def ordered_vars(*objs) -> tuple:
    """Variables of the arguments in order of first occurrence."""
    seen = dict()
    for obj in objs:
        seen.update(dict.fromkeys(iter_vars(obj)))
    return tuple(seen)


def is_ground(obj) -> bool:
    return next(iter_vars(obj), None) is None


@singledispatch
def size(obj) -> int:
    """Symbol-count size used by the termination measure."""
    raise TypeError(f"size: unsupported {type(obj).__name__}")


@size.register
def _(v: TermVar) -> int:
    return 1


@size.register
def _(v: HedgeVar) -> int:
    return 1


@size.register
def _(v: FuncVar) -> int:
    return 1


@size.register
def _(h: Hedge) -> int:
    return sum(size(it) for it in h.items)


@size.register
def _(t: Apply) -> int:
    return 1 + size(t.args)


def perms(items: Iterable) -> list:
    """Distinct permutations of a sequence, as tuples."""
    return list(dict.fromkeys(itertools.permutations(tuple(items))))


class Substitution:
    """A mapping from variables to images of matching kind.

    Term variables map to terms, hedge variables to hedges (spliced in
    place when applied), function variables to functors.  Identity pairs
    are dropped on construction.
    """

    def __init__(self, term_map=None, hedge_map=None, functor_map=None):
        self.term_map = {
            v: t for v, t in (term_map or {}).items() if t != v
        }
        self.hedge_map = {
            v: h for v, h in (hedge_map or {}).items() if h != Hedge((v,))
        }
        self.functor_map = {
            v: f for v, f in (functor_map or {}).items() if f != v
        }

    @staticmethod
    def bind(var: Var, image) -> "Substitution":
        if isinstance(var, TermVar):
            return Substitution(term_map={var: image})
        if isinstance(var, HedgeVar):
            if not isinstance(image, Hedge):
                image = Hedge((image,))
            return Substitution(hedge_map={var: image})
        return Substitution(functor_map={var: image})

    @property
    def is_identity(self) -> bool:
        return not (self.term_map or self.hedge_map or self.functor_map)

    def domain(self) -> frozenset:
        return frozenset(self.term_map) | frozenset(self.hedge_map) | frozenset(self.functor_map)

    def __call__(self, obj):
        return _apply(obj, self)

    def compose(self, later: "Substitution") -> "Substitution":
        """Substitution equivalent to applying self first, then later."""
        term_map = {v: later(t) for v, t in self.term_map.items()}
        hedge_map = {v: later(h) for v, h in self.hedge_map.items()}
        functor_map = {v: _apply_functor(f, later) for v, f in self.functor_map.items()}
        for v, t in later.term_map.items():
            term_map.setdefault(v, t)
        for v, h in later.hedge_map.items():
            hedge_map.setdefault(v, h)
        for v, f in later.functor_map.items():
            functor_map.setdefault(v, f)
        return Substitution(term_map, hedge_map, functor_map)

    def restrict(self, vars: Iterable[Var]) -> "Substitution":
        keep = set(vars)
        return Substitution(
            {v: t for v, t in self.term_map.items() if v in keep},
            {v: h for v, h in self.hedge_map.items() if v in keep},
            {v: f for v, f in self.functor_map.items() if v in keep},
        )

    def _key(self):
        return (
            frozenset(self.term_map.items()),
            frozenset(self.hedge_map.items()),
            frozenset(self.functor_map.items()),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        pairs = []
        for v, t in self.term_map.items():
            pairs.append(f"{v!r} -> {t!r}")
        for v, h in self.hedge_map.items():
            pairs.append(f"{v!r} -> {h!r}")
        for v, f in self.functor_map.items():
            pairs.append(f"{v!r} -> {f!r}")
        return "{" + ", ".join(pairs) + "}"


IDENTITY = Substitution()


def _apply_functor(f: Functor, subst: Substitution) -> Functor:
    if isinstance(f, FuncVar):
        return subst.functor_map.get(f, f)
    return f


@singledispatch
def _apply(obj, subst: Substitution):
    raise TypeError(f"substitution: unsupported {type(obj).__name__}")


@_apply.register
def _(v: TermVar, subst: Substitution):
    return subst.term_map.get(v, v)


@_apply.register
def _(v: HedgeVar, subst: Substitution):
    return subst.hedge_map.get(v, Hedge((v,)))


@_apply.register
def _(v: FuncVar, subst: Substitution):
    return subst.functor_map.get(v, v)


@_apply.register
def _(h: Hedge, subst: Substitution):
    out = []
    for it in h.items:
        if isinstance(it, HedgeVar):
            out.extend(subst.hedge_map.get(it, Hedge((it,))).items)
        else:
            out.append(_apply(it, subst))
    return Hedge(tuple(out))


@_apply.register
def _(t: Apply, subst: Substitution):
    return Apply(_apply_functor(t.head, subst), _apply(t.args, subst))


class FreshVars:
    """Generator of fresh variables with underscore-prefixed names.

    reserve() must see every variable name already in play; fresh names
    then never collide, and reruns of the same workload are reproducible.
    """

    def __init__(self):
        self._used: set[str] = set()
        self._counters: dict[str, int] = {}

    def reserve(self, names: Iterable[str]) -> None:
        self._used.update(names)

    def reserve_all(self, *objs) -> None:
        for obj in objs:
            for v in iter_vars(obj):
                self._used.add(v.name)

    def fresh(self, kind, hint: str = "x") -> Var:
        n = self._counters.get(hint, 0)
        while True:
            n += 1
            name = f"_{hint}{n}"
            if name not in self._used:
                break
        self._counters[hint] = n
        self._used.add(name)
        return kind(name)
