"""Sparse multivariate polynomials over QQ, term orders and ring maps.

A polynomial is a mapping from exponent tuples to nonzero ``mpq``
coefficients, bound to a :class:`PolyRing`.  The ring carries the variable
names, a positive integer weight per graded variable (the DVR parameter, if
any, has weight 0) and the default term order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .exact_arith import ONE, Rational, ZERO, format_rational, mpq, to_rational

MAX_EXPONENT = 2**31 - 1


class ParseError(ValueError):
    """Malformed polynomial text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


@dataclass(frozen=True)
class TermOrder:
    """A monomial order.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"block"``.  For block orders
    ``block`` lists the variable indices compared first (by weighted grevlex);
    ties are broken by weighted grevlex on the remaining variables, so any
    block order eliminates the block.
    """

    kind: str = "grevlex"
    block: tuple[int, ...] = ()

    @classmethod
    def grevlex(cls) -> "TermOrder":
        return cls("grevlex")

    @classmethod
    def lex(cls) -> "TermOrder":
        return cls("lex")

    @classmethod
    def elimination(cls, indices) -> "TermOrder":
        return cls("block", tuple(sorted(set(indices))))

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown term order {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "block":
            return f"block{list(self.block)}"
        return self.kind


GREVLEX = TermOrder.grevlex()
LEX = TermOrder.lex()


@lru_cache(maxsize=None)
def _key_builder(weights: tuple[int, ...], order: TermOrder):
    n = len(weights)

    def grevlex_on(idx, ws):
        ridx = tuple(reversed(idx))
        if all(w == 1 for w in ws):
            return lambda e: (sum(e[i] for i in idx), tuple(-e[i] for i in ridx))
        return lambda e: (
            sum(w * e[i] for i, w in zip(idx, ws)),
            sum(e[i] for i in idx),
            tuple(-e[i] for i in ridx),
        )

    def graded_on(idx):
        # weight-0 variables (the DVR parameter) act like coefficients: they
        # are compared only after the graded variables
        pos = tuple(i for i in idx if weights[i] > 0)
        zero = tuple(i for i in idx if weights[i] == 0)
        kp = grevlex_on(pos, tuple(weights[i] for i in pos))
        if not zero:
            return kp
        kz = grevlex_on(zero, (1,) * len(zero))
        return lambda e: (kp(e), kz(e))

    if order.kind == "lex":
        return lambda e: e
    if order.kind == "grevlex":
        return graded_on(tuple(range(n)))
    blk = tuple(i for i in order.block if i < n)
    rest = tuple(i for i in range(n) if i not in blk)
    k1 = grevlex_on(blk, tuple(max(weights[i], 1) for i in blk))
    k2 = graded_on(rest)
    return lambda e: (k1(e), k2(e))


@dataclass(frozen=True)
class PolyRing:
    """Polynomial ring QQ[variables] with weights and a default term order."""

    variables: tuple[str, ...]
    weights: tuple[int, ...] = ()
    base_parameter: str | None = None
    order: TermOrder = GREVLEX
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        weights = tuple(self.weights) if self.weights else tuple(
            0 if v == self.base_parameter else 1 for v in variables
        )
        if len(weights) != len(variables):
            raise ValueError("one weight per variable required")
        if self.base_parameter is not None:
            if self.base_parameter not in variables:
                raise ValueError(f"base parameter {self.base_parameter!r} is not a ring variable")
            if weights[variables.index(self.base_parameter)] != 0:
                raise ValueError("the base parameter must have weight 0")
        for v, w in zip(variables, weights):
            if v != self.base_parameter and w <= 0:
                raise ValueError(f"variable {v!r} needs a positive weight")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(variables)})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def key(self, order: TermOrder | None = None):
        return _key_builder(self.weights, order or self.order)

    def compare_terms(self, a, b, order: TermOrder | None = None) -> int:
        """Return -1, 0 or 1 as ``a`` is smaller, equal or greater than ``b``."""
        if len(a) != self.nvars or len(b) != self.nvars:
            raise ValueError("exponent vector arity does not match the ring")
        k = self.key(order)
        ka, kb = k(tuple(a)), k(tuple(b))
        return (ka > kb) - (ka < kb)

    def graded_indices(self) -> tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.weights) if w > 0)

    # constructors ---------------------------------------------------------
    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.constant(1)

    def constant(self, c) -> "Poly":
        c = to_rational(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "Poly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): ONE})

    def gens(self) -> list["Poly"]:
        return [self.var(v) for v in self.variables]

    def monomial(self, exp, coeff=1) -> "Poly":
        return Poly(self, {tuple(exp): to_rational(coeff)})

    def parse(self, text: str) -> "Poly":
        return parse_poly(text, self)

    # derived rings ----------------------------------------------------------
    def with_order(self, order: TermOrder) -> "PolyRing":
        return replace(self, order=order, _index=None)

    def extend(self, names, weights=None, front: bool = False) -> "PolyRing":
        names = tuple(names)
        weights = tuple(weights) if weights is not None else (1,) * len(names)
        if front:
            vs, ws = names + self.variables, weights + self.weights
            order = self.order
            if order.kind == "block":
                order = TermOrder("block", tuple(i + len(names) for i in order.block))
        else:
            vs, ws, order = self.variables + names, self.weights + weights, self.order
        return PolyRing(vs, ws, self.base_parameter, order)

    def drop(self, names) -> "PolyRing":
        names = set(names)
        keep = [i for i, v in enumerate(self.variables) if v not in names]
        base = self.base_parameter if self.base_parameter not in names else None
        order = self.order if self.order.kind != "block" else GREVLEX
        return PolyRing(
            tuple(self.variables[i] for i in keep), tuple(self.weights[i] for i in keep), base, order
        )

    def rename(self, mapping: dict) -> "PolyRing":
        vs = tuple(mapping.get(v, v) for v in self.variables)
        base = mapping.get(self.base_parameter, self.base_parameter) if self.base_parameter else None
        return PolyRing(vs, self.weights, base, self.order)

    def describe(self) -> str:
        inner = ",".join(v for v in self.variables if v != self.base_parameter)
        if self.base_parameter:
            return f"Q[{self.base_parameter}][{inner}]"
        return f"Q[{inner}]"


def _check_exponent(e):
    for x in e:
        if x > MAX_EXPONENT:
            raise OverflowError("exponent overflow")
    return e


class Poly:
    """Immutable sparse polynomial over QQ."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # basic protocol -----------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            other = self.ring.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring.variables == other.ring.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.variables, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring.variables != self.ring.variables:
                raise ValueError("polynomials live in different rings")
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = to_rational(other)
            if not c:
                return self.ring.zero()
            return Poly(self.ring, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, ZERO) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        for e in out:
            _check_exponent(e)
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = to_rational(other)
        return self * (ONE / c)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # inspection ---------------------------------------------------------------
    def sorted_terms(self, order: TermOrder | None = None):
        key = self.ring.key(order)
        return sorted(self.terms.items(), key=lambda ec: key(ec[0]), reverse=True)

    def leading_exponent(self, order: TermOrder | None = None):
        if not self.terms:
            return None
        key = self.ring.key(order)
        return max(self.terms, key=key)

    def leading_coefficient(self, order: TermOrder | None = None):
        e = self.leading_exponent(order)
        return self.terms[e] if e is not None else ZERO

    def monic(self, order: TermOrder | None = None) -> "Poly":
        if not self.terms:
            return self
        lc = self.leading_coefficient(order)
        return self * (ONE / lc)

    def weighted_degree(self) -> int:
        ws = self.ring.weights
        if not self.terms:
            return -1
        return max(sum(w * x for w, x in zip(ws, e)) for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        ws = self.ring.weights
        degs = {sum(w * x for w, x in zip(ws, e)) for e in self.terms}
        return len(degs) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Rational:
        return self.terms.get((0,) * self.ring.nvars, ZERO)

    def variables_used(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(self.ring.variables[i])
        return used

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # transformations -------------------------------------------------------------
    def to_ring(self, ring: PolyRing) -> "Poly":
        """Re-express in ``ring`` by matching variable names."""
        if ring.variables == self.ring.variables:
            return Poly(ring, self.terms)
        pos = []
        for i, v in enumerate(self.ring.variables):
            j = ring._index.get(v)
            pos.append(j)
        n = ring.nvars
        out = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, x in enumerate(e):
                if x:
                    j = pos[i]
                    if j is None:
                        raise ValueError(
                            f"variable {self.ring.variables[i]!r} is not in the target ring"
                        )
                    new[j] = x
            out[tuple(new)] = c
        return Poly(ring, out)

    def substitute(self, values: dict) -> "Poly":
        """Substitute constants or polynomials (same ring) for named variables."""
        images = []
        for v in self.ring.variables:
            if v in values:
                val = values[v]
                images.append(val if isinstance(val, Poly) else self.ring.constant(val))
            else:
                images.append(self.ring.var(v))
        return apply_images(self, images, self.ring)

    def content_free(self) -> "Poly":
        """Scale to a primitive integer polynomial with positive leading coefficient."""
        from math import gcd, lcm

        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = lcm(den, int(c.denominator))
        num = 0
        for c in self.terms.values():
            num = gcd(num, int(c.numerator * den // c.denominator))
        scale = mpq(den, num)
        if self.leading_coefficient() < 0:
            scale = -scale
        return self * scale

    def __repr__(self):
        return f"Poly({to_text(self)!r})"

    def __str__(self):
        return to_text(self)


def apply_images(p: Poly, images: list[Poly], target: PolyRing) -> Poly:
    """Evaluate ``p`` at ``images`` (one polynomial in ``target`` per variable)."""
    cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = images[i] ** k
        return cache[key]

    acc: dict = {}
    for e, c in p.terms.items():
        term = target.constant(c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        for te, tc in term.terms.items():
            v = acc.get(te, ZERO) + tc
            if v:
                acc[te] = v
            else:
                del acc[te]
    return Poly(target, acc)


@dataclass(frozen=True)
class RingMap:
    """Ring homomorphism given by the images of the source variables."""

    source: PolyRing
    target: PolyRing
    images: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(p.to_ring(self.target) for p in self.images))
        if len(self.images) != self.source.nvars:
            raise ValueError("one image per source variable required")

    @classmethod
    def identity(cls, ring: PolyRing) -> "RingMap":
        return cls(ring, ring, tuple(ring.gens()))

    @classmethod
    def from_dict(cls, source: PolyRing, target: PolyRing, mapping: dict) -> "RingMap":
        images = []
        for v in source.variables:
            img = mapping.get(v, v)
            if isinstance(img, str):
                img = target.parse(img)
            elif not isinstance(img, Poly):
                img = target.constant(img)
            images.append(img)
        return cls(source, target, tuple(images))

    def is_graded(self) -> bool:
        for w, img in zip(self.source.weights, self.images):
            if img.is_zero():
                continue
            if not img.is_homogeneous() or img.weighted_degree() != w:
                return False
        return True

    def __call__(self, p: Poly) -> Poly:
        return apply_map(self, p)

    def compose(self, other: "RingMap") -> "RingMap":
        """``self`` after ``other``."""
        return RingMap(other.source, self.target, tuple(self(img) for img in other.images))


def compare_terms(ring: PolyRing, a, b, order: TermOrder | None = None) -> int:
    """Compare exponent vectors in ``ring``'s term order: -1, 0 or 1."""
    return ring.compare_terms(a, b, order)


def apply_map(m: RingMap, p: Poly) -> Poly:
    if p.ring.variables != m.source.variables:
        p = p.to_ring(m.source)
    return apply_images(p, list(m.images), m.target)


# --------------------------------------------------------------------------
# canonical text form


def _monomial_text(ring: PolyRing, e) -> str:
    parts = []
    for v, x in zip(ring.variables, e):
        if x == 1:
            parts.append(v)
        elif x > 1:
            parts.append(f"{v}^{x}")
    return "*".join(parts)


def to_text(p: Poly, order: TermOrder | None = None) -> str:
    """Canonical text: terms descending in the ring order, ``^`` and explicit ``*``."""
    if not p.terms:
        return "0"
    out = []
    for i, (e, c) in enumerate(p.sorted_terms(order)):
        mono = _monomial_text(p.ring, e)
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{format_rational(a)}*{mono}"
        else:
            body = format_rational(a)
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# --------------------------------------------------------------------------
# parser: sums of products of numbers, variables, powers and parentheses

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9']*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", m.group(1), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ring: PolyRing, offset: int = 0):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0
        self.offset = offset

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok):
        raise ParseError(msg, tok[2] + self.offset, self.text)

    def parse(self) -> Poly:
        tok = self.peek()
        if tok[0] == "end":
            self.error("empty polynomial", tok)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.error(f"unexpected token {tok[1]!r}", tok)
        return p

    def expr(self) -> Poly:
        tok = self.peek()
        sign = 1
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = self.term() * sign
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                nxt = self.peek()
                if nxt[0] == "end" or (nxt[0] == "op" and nxt[1] not in "("):
                    self.error(f"dangling operator {tok[1]!r}", tok)
                t = self.term()
                acc = acc + t if tok[1] == "+" else acc - t
            else:
                return acc

    def term(self) -> Poly:
        acc = self.power()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                nxt = self.peek()
                if nxt[0] == "end" or (nxt[0] == "op" and nxt[1] != "("):
                    self.error(f"dangling operator {tok[1]!r}", tok)
                rhs = self.power()
                if tok[1] == "*":
                    acc = acc * rhs
                else:
                    if not rhs.is_constant() or rhs.is_zero():
                        self.error("division only by nonzero constants", tok)
                    acc = acc / rhs.constant_value()
            else:
                return acc

    def power(self) -> Poly:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            exp_tok = self.take()
            if exp_tok[0] != "num":
                self.error("exponent must be a nonnegative integer", exp_tok)
            n = int(exp_tok[1])
            if n > MAX_EXPONENT:
                self.error("exponent overflow", exp_tok)
            return base**n
        return base

    def atom(self) -> Poly:
        tok = self.take()
        if tok[0] == "num":
            return self.ring.constant(int(tok[1]))
        if tok[0] == "name":
            if tok[1] not in self.ring._index:
                self.error(f"unknown variable {tok[1]!r}", tok)
            return self.ring.var(tok[1])
        if tok[0] == "op" and tok[1] == "(":
            inner = self.expr()
            close = self.take()
            if close[0] != "op" or close[1] != ")":
                self.error("expected ')'", close)
            return inner
        if tok[0] == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected token {tok[1]!r}", tok)


def parse_poly(text: str, ring: PolyRing, offset: int = 0) -> Poly:
    """Parse polynomial text such as ``x1^2 - t*x0*x2`` in ``ring``."""
    return _Parser(text, ring, offset).parse()


def poly_ring(spec: str, base_parameter: str | None = None, weights=None) -> PolyRing:
    """Shorthand: ``poly_ring("t,x0,x1,x2", base_parameter="t")``."""
    names = tuple(v.strip() for v in spec.split(",") if v.strip())
    return PolyRing(names, tuple(weights) if weights else (), base_parameter)
