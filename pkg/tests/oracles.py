"""Independent reference computations used to derive frozen test values.

Nothing here imports the package under test: the naive Buchberger works on
plain dicts of ``Fraction`` coefficients and the other helpers go through
sympy's own Groebner engine.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import sympy


# --------------------------------------------------------------------------
# naive Buchberger, grevlex, no criteria


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def _lead(f):
    return max(f, key=_grevlex_key)


def _sub(f, g, c, shift):
    out = dict(f)
    for e, a in g.items():
        m = tuple(x + y for x, y in zip(e, shift))
        out[m] = out.get(m, 0) - c * a
        if out[m] == 0:
            del out[m]
    return out


def _reduce(f, basis):
    f = dict(f)
    rem = {}
    while f:
        lm = _lead(f)
        for g in basis:
            lg = _lead(g)
            if all(a >= b for a, b in zip(lm, lg)):
                shift = tuple(a - b for a, b in zip(lm, lg))
                f = _sub(f, g, f[lm] / g[lg], shift)
                break
        else:
            rem[lm] = f.pop(lm)
    return rem


def naive_buchberger(polys):
    """Reduced grevlex basis of polynomials given as ``{exponent: Fraction}`` dicts."""
    basis = [dict(p) for p in polys if p]
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        i, j = pairs.pop()
        f, g = basis[i], basis[j]
        lf, lg = _lead(f), _lead(g)
        lcm = tuple(max(a, b) for a, b in zip(lf, lg))
        s = _sub(
            {tuple(x + y for x, y in zip(e, (l - a for l, a in zip(lcm, lf)))): c / f[lf] for e, c in f.items()},
            g,
            1 / g[lg],
            tuple(l - b for l, b in zip(lcm, lg)),
        )
        r = _reduce(s, basis)
        if r:
            basis.append(r)
            pairs += [(k, len(basis) - 1) for k in range(len(basis) - 1)]
    # minimalise and reduce
    basis = [b for b in basis if b]
    minimal = []
    for k, b in enumerate(basis):
        lb = _lead(b)
        if not any(
            all(x >= y for x, y in zip(lb, _lead(c))) and (_lead(c) != lb or m < k)
            for m, c in enumerate(basis)
            if m != k
        ):
            minimal.append(b)
    out = []
    for k, b in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        lb = _lead(b)
        tail = _reduce({e: c for e, c in b.items() if e != lb}, others)
        full = {lb: b[lb], **tail}
        out.append({e: c / b[lb] for e, c in full.items()})
    return sorted(out, key=lambda p: _grevlex_key(_lead(p)))


def to_text(poly, names):
    """Render a dict polynomial in the package's canonical grevlex text."""
    terms = sorted(poly.items(), key=lambda kv: _grevlex_key(kv[0]), reverse=True)
    out = []
    for k, (e, c) in enumerate(terms):
        mono = "*".join(n if x == 1 else f"{n}^{x}" for n, x in zip(names, e) if x)
        mag = abs(c)
        body = mono if mono and mag == 1 else (f"{mag}*{mono}" if mono else f"{mag}")
        sign = "-" if c < 0 else "+"
        out.append((("-" if sign == "-" else "") + body) if k == 0 else f" {sign} {body}")
    return "".join(out)


def from_sympy(expr, symbols):
    p = sympy.Poly(expr, *symbols)
    return {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in p.terms()}


# --------------------------------------------------------------------------
# sympy-backed ideal operations


def sympy_basis(gens, symbols, order="grevlex"):
    if not gens:
        return []
    return list(sympy.groebner(gens, *symbols, order=order).exprs)


def sympy_eliminate(gens, drop, keep):
    """Generators of the elimination ideal from a lex basis with ``drop`` first."""
    G = sympy.groebner(gens, *drop, *keep, order="lex")
    return [g for g in G.exprs if not (g.free_symbols & set(drop))]


def sympy_intersect(I, J, symbols):
    u = sympy.Symbol("u_oracle")
    gens = [u * f for f in I] + [(1 - u) * g for g in J]
    return sympy_eliminate(gens, [u], list(symbols))


def sympy_quotient_by(I, f, symbols):
    """``I : f`` as ``(I ∩ (f)) / f``."""
    inter = sympy_intersect(I, [f], symbols)
    return [sympy.cancel(g / f) for g in inter]


def sympy_saturate(I, f, symbols):
    current = list(I)
    k = 0
    while True:
        nxt = sympy_quotient_by(current, f, symbols)
        if same_ideal(nxt, current, symbols):
            return current, k
        current, k = nxt, k + 1


def same_ideal(I, J, symbols):
    a = sympy_basis(I, symbols) if I else []
    b = sympy_basis(J, symbols) if J else []
    return sorted(map(str, a)) == sorted(map(str, b))


def in_ideal(p, gens, symbols):
    if not gens:
        return sympy.expand(p) == 0
    G = sympy.groebner(gens, *symbols, order="grevlex")
    return G.contains(p)


def brute_samuel_orders(Q, I, q, symbols, k_max):
    """``f(q^k) = max{n : q^k in I^n + Q}`` for ``k = 1..k_max`` by direct membership."""
    out = []
    for k in range(1, k_max + 1):
        n = 0
        while True:
            power = [sympy.expand(sympy.prod(c)) for c in _products(I, n + 1)]
            if in_ideal(sympy.expand(q**k), list(Q) + power, symbols):
                n += 1
            else:
                break
        out.append(n)
    return out


def _products(gens, n):
    from itertools import combinations_with_replacement

    return list(combinations_with_replacement(gens, n))
