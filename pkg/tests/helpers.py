"""Random input generators for the property tests.

Every generator takes an explicit random.Random so tests control their own
seeds and stay reproducible run to run.
"""

from clph.constraints import Conjunction, DNF, FunctorEq, Membership, make_eq
from clph.regex import Choice, Concat, Eps, Star, Sym
from clph.syntax import (
    Apply,
    FuncVar,
    Hedge,
    HedgeVar,
    Signature,
    Substitution,
    TermVar,
    size,
)


def default_sig() -> Signature:
    """Four symbols, one of them unordered."""
    return Signature.of(ordered=["f", "g", "a"], unordered=["m"])


def rand_term(rng, sig, budget, tvars=(), hvars=(), fvars=()):
    """A term of size at most budget over the signature and variable pools."""
    if budget > 1 and rng.random() < 0.6:
        if fvars and rng.random() < 0.2:
            head = rng.choice(fvars)
        else:
            head = rng.choice(sig.symbols)
        args = rand_hedge(rng, sig, budget - 1, tvars, hvars, fvars)
        return Apply(head, args)
    if tvars and rng.random() < 0.5:
        return rng.choice(tvars)
    return Apply(rng.choice(sig.symbols))


def rand_hedge(rng, sig, budget, tvars=(), hvars=(), fvars=()):
    items = []
    left = budget
    while left > 0 and rng.random() < 0.7:
        if hvars and rng.random() < 0.25:
            items.append(rng.choice(hvars))
            left -= 1
        else:
            t = rand_term(rng, sig, rng.randint(1, left), tvars, hvars, fvars)
            items.append(t)
            left -= size(t)
    return Hedge(tuple(items))


def rand_regex(rng, symbols, max_size):
    """A regex whose measured size stays within max_size."""
    while True:
        r = _build_regex(rng, symbols, max_size)
        if size(r) <= max_size:
            return r


def _build_regex(rng, symbols, budget):
    if budget <= 1:
        if rng.random() < 0.15:
            return Eps()
        return Sym(rng.choice(symbols), Eps())
    k = rng.randrange(5)
    if k == 0:
        return Star(_build_regex(rng, symbols, budget - 1))
    if k == 1 or k == 2:
        left = rng.randint(1, max(1, budget - 2))
        right = budget - 1 - left
        a = _build_regex(rng, symbols, left)
        b = _build_regex(rng, symbols, max(1, right))
        return Concat(a, b) if k == 1 else Choice(a, b)
    if k == 3:
        return Sym(rng.choice(symbols), _build_regex(rng, symbols, budget - 1))
    return Sym(rng.choice(symbols), Eps())


# Membership regexes range over ordered symbols only; unordered symbols
# still show up inside equated terms.
REGEX_SYMBOLS = ("f", "a")


def rand_literal(rng, sig, tvars, hvars, fvars, term_size=8):
    k = rng.random()
    if k < 0.55:
        if tvars and rng.random() < 0.4:
            # var-rooted equations keep a decent satisfiable fraction
            lhs = Hedge((rng.choice(tvars + hvars),))
        else:
            lhs = rand_hedge(rng, sig, term_size, tvars, hvars, fvars)
        rhs = rand_hedge(rng, sig, term_size, tvars, hvars, fvars)
        return make_eq(lhs, rhs, sig)
    if k < 0.7 and fvars:
        v = rng.choice(fvars)
        other = rng.choice(fvars + tuple(sig.symbols))
        return FunctorEq(v, other)
    subject = rand_hedge(rng, sig, max(2, term_size // 2), tvars, hvars, fvars)
    return Membership(subject, rand_regex(rng, REGEX_SYMBOLS, 6))


def rand_constraint(rng, sig, max_literals=6, term_size=8, n_vars=4):
    """A random constraint, usually one conjunction, sometimes a pair of
    disjuncts, with at most max_literals literals overall."""
    tvars = tuple(TermVar(f"x{i}") for i in range(n_vars))
    hvars = tuple(HedgeVar(f"xs{i}") for i in range(n_vars))
    fvars = tuple(FuncVar(f"F{i}") for i in range(max(1, n_vars // 2)))
    n = rng.randint(1, max_literals)
    lits = [rand_literal(rng, sig, tvars, hvars, fvars, term_size) for _ in range(n)]
    if n >= 2 and rng.random() < 0.25:
        cut = rng.randint(1, n - 1)
        return DNF((Conjunction(tuple(lits[:cut])), Conjunction(tuple(lits[cut:]))))
    return DNF((Conjunction(tuple(lits)),))


def rand_small_constraint(rng, sig, vars, max_literals=3, term_size=4):
    """Constraint over a fixed small variable pool, for brute-force checks."""
    tvars = tuple(v for v in vars if isinstance(v, TermVar))
    hvars = tuple(v for v in vars if isinstance(v, HedgeVar))
    fvars = tuple(v for v in vars if isinstance(v, FuncVar))
    n = rng.randint(1, max_literals)
    lits = [rand_literal(rng, sig, tvars, hvars, fvars, term_size) for _ in range(n)]
    if n >= 2 and rng.random() < 0.3:
        return DNF((Conjunction(tuple(lits[:1])), Conjunction(tuple(lits[1:]))))
    return DNF((Conjunction(tuple(lits)),))


def hedge_regex(h):
    """A regex whose language is exactly the given ground hedge."""
    parts = [Sym(t.head, hedge_regex(t.args)) for t in h]
    if not parts:
        return Eps()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Concat(p, out)
    return out


def _heads_in(h):
    out = set()
    for t in h:
        out.add(t.head)
        out |= _heads_in(t.args)
    return out


def rand_wellmoded(rng, sig, max_literals=5, term_size=6):
    """A conjunction schedulable by data flow starting from nothing known.

    Each equation keeps one side over already-known variables; memberships
    only consume known variables.  A ground model for the known variables
    is threaded through the construction so a healthy share of instances
    comes out satisfiable; a quarter of the equations get an unrelated
    known side to keep failures in the mix.  Literals are shuffled
    afterwards since schedulability does not depend on written order.
    """
    known_t, known_h, known_f = [], [], []
    tmap, hmap, fmap = {}, {}, {}
    fresh_i = 0
    lits = []
    for _ in range(rng.randint(1, max_literals)):
        k = rng.random()
        if k < 0.55 or not known_t + known_h:
            fresh_i += 1
            new_t = TermVar(f"w{fresh_i}")
            new_h = HedgeVar(f"ws{fresh_i}")
            other = rand_hedge(
                rng,
                sig,
                term_size,
                tuple(known_t) + (new_t,),
                tuple(known_h) + (new_h,),
                tuple(known_f),
            )
            if new_t in _vars_of(other):
                tmap[new_t] = rand_term(rng, sig, 3)
                known_t.append(new_t)
            if new_h in _vars_of(other):
                hmap[new_h] = rand_hedge(rng, sig, 3)
                known_h.append(new_h)
            model = Substitution(dict(tmap), dict(hmap), dict(fmap))
            if rng.random() < 0.25:
                known_side = rand_hedge(rng, sig, term_size)
            else:
                known_side = model(other)
            lits.append(make_eq(known_side, other, sig))
        elif k < 0.75:
            fresh_i += 1
            v = FuncVar(f"W{fresh_i}")
            s = rng.choice(sig.symbols)
            fmap[v] = s
            lits.append(FunctorEq(v, s))
            known_f.append(v)
        else:
            subject = rand_hedge(
                rng, sig, 3, tuple(known_t), tuple(known_h), tuple(known_f)
            )
            model = Substitution(dict(tmap), dict(hmap), dict(fmap))
            value = model(subject)
            plain = all(not sig.is_unordered(s) for s in _heads_in(value))
            if plain and rng.random() < 0.7:
                exact = hedge_regex(value)
                k2 = rng.randrange(3)
                if k2 == 0:
                    rho = exact
                elif k2 == 1:
                    rho = Choice(exact, rand_regex(rng, REGEX_SYMBOLS, 4))
                else:
                    rho = Concat(exact, Star(rand_regex(rng, REGEX_SYMBOLS, 3)))
            else:
                rho = rand_regex(rng, REGEX_SYMBOLS, 5)
            lits.append(Membership(subject, rho))
    rng.shuffle(lits)
    return Conjunction(tuple(lits))


def _vars_of(obj):
    from clph.syntax import free_vars

    return free_vars(obj)


def rand_kif_term(rng, sig, budget, tvars, hvars):
    """Hedge variables only in the last argument slot under ordered heads."""
    if budget <= 1 or rng.random() < 0.3:
        if tvars and rng.random() < 0.5:
            return rng.choice(tvars)
        return Apply(rng.choice(sig.symbols))
    head = rng.choice(sig.symbols)
    if sig.is_unordered(head):
        n = rng.randint(0, 2)
        args = tuple(
            rand_kif_term(rng, sig, budget // max(1, n), tvars, hvars)
            for _ in range(n)
        )
        return Apply(head, Hedge(args))
    return Apply(head, rand_kif_hedge(rng, sig, budget - 1, tvars, hvars))


def rand_kif_hedge(rng, sig, budget, tvars, hvars):
    items = []
    left = budget
    while left > 0 and rng.random() < 0.6:
        t = rand_kif_term(rng, sig, rng.randint(1, left), tvars, hvars)
        items.append(t)
        left -= size(t)
    if hvars and rng.random() < 0.5:
        items.append(rng.choice(hvars))
    return Hedge(tuple(items))


def rand_kif(rng, sig, max_literals=4, term_size=6, n_vars=3):
    tvars = tuple(TermVar(f"k{i}") for i in range(n_vars))
    hvars = tuple(HedgeVar(f"ks{i}") for i in range(n_vars))
    lits = []
    for _ in range(rng.randint(1, max_literals)):
        k = rng.random()
        if k < 0.6:
            lhs = rand_kif_hedge(rng, sig, term_size, tvars, hvars)
            rhs = rand_kif_hedge(rng, sig, term_size, tvars, hvars)
            lits.append(make_eq(lhs, rhs, sig))
        elif k < 0.75:
            lits.append(FunctorEq(FuncVar("K"), rng.choice(sig.symbols)))
        else:
            subject = rand_kif_hedge(rng, sig, 3, tvars, hvars)
            lits.append(Membership(subject, rand_regex(rng, REGEX_SYMBOLS, 5)))
    return Conjunction(tuple(lits))


# Ranked terms for the path-ordering comparison.
ARITIES = {"f": 2, "g": 2, "h": 1, "b": 0, "a": 0}
PREC = {"f": 4, "g": 3, "h": 2, "b": 1, "a": 0}
STATUS = {"g": "mul"}


def rand_ranked(rng, max_size):
    def build(budget):
        choices = [s for s, ar in ARITIES.items() if 1 + ar <= budget]
        s = rng.choice(choices)
        args = []
        left = budget - 1
        for k in range(ARITIES[s]):
            sub = build(left - (ARITIES[s] - k - 1))
            args.append(sub)
            left -= size(sub)
        return Apply(s, Hedge(tuple(args)))

    return build(max_size)
