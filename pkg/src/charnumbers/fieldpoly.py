"""Exact coefficient fields and sparse multivariate polynomials.

Monomials are packed into a single Python integer whose natural ordering is
the active monomial order, so that comparing, multiplying (adding keys) and
sorting monomials never leaves integer arithmetic.  Every exponent occupies a
16-bit field; the top bit of each field is kept clear so that divisibility and
lcm can be decided with a couple of word operations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import sympy

FIELD_BITS = 16
FIELD_MASK = (1 << FIELD_BITS) - 1
EXP_MAX = (1 << (FIELD_BITS - 1)) - 1

PRIME_LOW = 1 << 20
PRIME_HIGH = 1 << 31


class ExponentOverflowError(OverflowError):
    """An exponent or total degree no longer fits its 15-bit slot."""


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariableError(ValueError):
    pass


class RingMismatchError(ValueError):
    pass


# ---------------------------------------------------------------------------
# coefficient fields


@dataclass(frozen=True)
class PrimeField:
    """The field of integers modulo a prime ``2**20 < p < 2**31``."""

    p: int

    def __post_init__(self):
        if not PRIME_LOW < self.p < PRIME_HIGH:
            raise ValueError(f"modulus {self.p} outside (2^20, 2^31)")
        if not sympy.isprime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, c) -> int:
        if isinstance(c, Fraction):
            return c.numerator % self.p * pow(c.denominator, -1, self.p) % self.p
        return int(c) % self.p

    def inv(self, c: int) -> int:
        if c % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(c, -1, self.p)

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def random_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.p)

    def signed(self, c: int) -> int:
        """Symmetric representative in (-p/2, p/2]."""
        c %= self.p
        return c - self.p if c > self.p // 2 else c

    def __repr__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class RationalField:
    @property
    def characteristic(self) -> int:
        return 0

    @property
    def p(self):
        return None

    def __call__(self, c) -> Fraction:
        return Fraction(c)

    def inv(self, c) -> Fraction:
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(c)

    def random(self, rng: random.Random) -> Fraction:
        return Fraction(rng.randrange(-(2**31), 2**31))

    def random_nonzero(self, rng: random.Random) -> Fraction:
        while True:
            c = self.random(rng)
            if c:
                return c

    def signed(self, c):
        return c

    def __repr__(self):
        return "QQ"


QQ = RationalField()


def random_prime(rng: random.Random, exclude: Iterable[int] = ()) -> int:
    """Draw a prime from roughly [2^30, 2^31) using ``rng``."""
    exclude = set(exclude)
    while True:
        p = sympy.nextprime(rng.randrange(1 << 30, PRIME_HIGH - 64))
        if p < PRIME_HIGH and p not in exclude:
            return int(p)


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """``degrevlex`` or a two-block elimination order.

    ``block`` compares the first ``front`` variables by degrevlex first and
    breaks ties with degrevlex on the remaining variables.
    """

    kind: str = "degrevlex"
    front: int = 0

    def __post_init__(self):
        if self.kind not in ("degrevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.front < 1:
            raise ValueError("block order needs a nonempty front block")

    @classmethod
    def block(cls, front: int) -> "MonomialOrder":
        return cls("block", front)

    def __str__(self):
        return self.kind if self.kind == "degrevlex" else f"block({self.front})"


DEGREVLEX = MonomialOrder()


def _digit_sum(packed: int) -> int:
    # sum of base-2^16 digits; exact while the sum stays below 2^16 - 1
    return packed % FIELD_MASK


class _Codec:
    """Converts between exponent vectors, packed exponents and order keys."""

    def __init__(self, nvars: int, order: MonomialOrder):
        self.nvars = nvars
        self.order = order
        self.guard = sum(1 << (FIELD_BITS * i + FIELD_BITS - 1) for i in range(nvars))
        self.full = (1 << (FIELD_BITS * nvars)) - 1
        if order.kind == "block" and order.front < nvars:
            f = order.front
            nb = nvars - f
            self._f = f
            self._nb = nb
            self._mask_f = (1 << (FIELD_BITS * f)) - 1
            self._mask_b = (1 << (FIELD_BITS * nb)) - 1
            self.key_of_packed = self._block_key
            self.packed_of_key = self._block_unkey
        else:
            self.key_of_packed = self._drl_key
            self.packed_of_key = self._drl_unkey

    # degrevlex: key = deg * B^n - E
    def _drl_key(self, e: int) -> int:
        return (_digit_sum(e) << (FIELD_BITS * self.nvars)) - e

    def _drl_unkey(self, k: int) -> int:
        return (-k) & self.full

    # block: key = degF*B^(n+1) - EF*B^(nb+1) + degB*B^nb - EB
    def _block_key(self, e: int) -> int:
        ef = e & self._mask_f
        eb = e >> (FIELD_BITS * self._f)
        n, nb = self.nvars, self._nb
        return (
            (_digit_sum(ef) << (FIELD_BITS * (n + 1)))
            - (ef << (FIELD_BITS * (nb + 1)))
            + (_digit_sum(eb) << (FIELD_BITS * nb))
            - eb
        )

    def _block_unkey(self, k: int) -> int:
        nb = self._nb
        eb = (-k) & self._mask_b
        rest = (k + eb) >> (FIELD_BITS * nb)
        degb = rest & FIELD_MASK
        rest = (rest - degb) >> FIELD_BITS
        ef = (-rest) & self._mask_f
        return ef | (eb << (FIELD_BITS * self._f))

    def pack(self, exps: Sequence[int]) -> int:
        e = 0
        total = 0
        for i, a in enumerate(exps):
            if a < 0:
                raise ValueError("negative exponent")
            if a > EXP_MAX:
                raise ExponentOverflowError(f"exponent {a} exceeds {EXP_MAX}")
            total += a
            e |= a << (FIELD_BITS * i)
        if total > EXP_MAX:
            raise ExponentOverflowError(f"total degree {total} exceeds {EXP_MAX}")
        return e

    def unpack(self, e: int) -> tuple[int, ...]:
        return tuple((e >> (FIELD_BITS * i)) & FIELD_MASK for i in range(self.nvars))

    def key(self, exps: Sequence[int]) -> int:
        return self.key_of_packed(self.pack(exps))

    def exps(self, k: int) -> tuple[int, ...]:
        return self.unpack(self.packed_of_key(k))

    def divides(self, a: int, b: int) -> bool:
        """Packed monomial ``a`` divides packed monomial ``b``."""
        g = self.guard
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        g = self.guard
        ge = (((a | g) - b) & g) >> (FIELD_BITS - 1)
        m = ge * FIELD_MASK
        return (a & m) | (b & ~m & self.full)


@dataclass(frozen=True)
class Monomial:
    exponents: tuple[int, ...]
    degree: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "degree", sum(self.exponents))

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def format(self, variables: Sequence[str]) -> str:
        parts = []
        for v, a in zip(variables, self.exponents):
            if a == 1:
                parts.append(v)
            elif a > 1:
                parts.append(f"{v}^{a}")
        return "*".join(parts) or "1"


# ---------------------------------------------------------------------------
# rings and polynomials


class PolyRing:
    """A polynomial ring over a coefficient field with a fixed monomial order."""

    def __init__(self, variables: Sequence[str], field=None, order: MonomialOrder = DEGREVLEX):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        self.field = QQ if field is None else field
        self.order = order
        self.nvars = len(self.variables)
        self.codec = _Codec(self.nvars, order)
        self._index = {v: i for i, v in enumerate(self.variables)}

    @property
    def p(self):
        return self.field.p

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.field == other.field
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.variables, self.field, self.order))

    def __repr__(self):
        return f"PolyRing({list(self.variables)}, {self.field!r}, {self.order})"

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.variables, self.field, order)

    def with_field(self, field) -> "PolyRing":
        return PolyRing(self.variables, field, self.order)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    # constructors

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, ((0, c),) if c else ())

    def gen(self, i: int | str) -> "Polynomial":
        if isinstance(i, str):
            i = self.index(i)
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, ((self.codec.key(exps), self.field(1)),))

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def from_dict(self, terms: dict) -> "Polynomial":
        """Build from ``{exponent tuple: coefficient}``."""
        acc: dict[int, object] = {}
        key = self.codec.key
        for exps, c in terms.items():
            if len(exps) != self.nvars:
                raise ValueError("exponent vector length does not match ring")
            k = key(exps)
            acc[k] = acc.get(k, 0) + c
        return self._from_keys(acc)

    def monomial(self, exps: Sequence[int], c=1) -> "Polynomial":
        return self.from_dict({tuple(exps): c})

    def linear_form(self, coeffs: Sequence, const=0) -> "Polynomial":
        acc = {}
        key = self.codec.key
        for i, c in enumerate(coeffs):
            exps = [0] * self.nvars
            exps[i] = 1
            acc[key(exps)] = c
        if const:
            acc[0] = acc.get(0, 0) + const
        return self._from_keys(acc)

    def _from_keys(self, acc: dict) -> "Polynomial":
        norm = self.field
        terms = []
        for k, c in acc.items():
            c = norm(c)
            if c:
                terms.append((k, c))
        terms.sort(reverse=True)
        return Polynomial(self, tuple(terms))

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def random_combination(self, forms, rng):
        return random_combination(forms, rng)


class Polynomial:
    """Immutable sparse polynomial; terms are ``(order key, coefficient)``
    pairs in strictly decreasing key order with nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: tuple):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def monomials(self) -> Iterator[tuple[tuple[int, ...], object]]:
        exps = self.ring.codec.exps
        for k, c in self.terms:
            yield exps(k), c

    def as_dict(self) -> dict:
        return dict(self.monomials())

    @property
    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return Monomial(self.ring.codec.exps(self.terms[0][0]))

    @property
    def leading_coefficient(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0][1]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e, _ in self.monomials())

    def _degree_bound(self) -> int:
        if not self.terms:
            return 0
        ring = self.ring
        if ring.order.kind == "degrevlex":
            # degree-compatible: the leading key carries the maximal degree
            return (self.terms[0][0] + ring.codec.full) >> (FIELD_BITS * ring.nvars)
        return self.total_degree()

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e, _ in self.monomials()}
        return len(degs) <= 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    def variables_used(self) -> set[int]:
        used = set()
        for e, _ in self.monomials():
            used.update(i for i, a in enumerate(e) if a)
        return used

    # arithmetic

    def _check(self, other: "Polynomial"):
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for k, c in other.terms:
            acc[k] = acc.get(k, 0) + c
        return self.ring._from_keys(acc)

    __radd__ = __add__

    def __neg__(self):
        norm = self.ring.field
        return Polynomial(self.ring, tuple((k, norm(-c)) for k, c in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "Polynomial":
        norm = self.ring.field
        c = norm(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, tuple((k, norm(a * c)) for k, a in self.terms))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self.ring.zero()
        if self._degree_bound() + other._degree_bound() > EXP_MAX:
            raise ExponentOverflowError("product degree overflows exponent field")
        acc: dict = {}
        get = acc.get
        for ka, ca in self.terms:
            for kb, cb in other.terms:
                k = ka + kb
                acc[k] = get(k, 0) + ca * cb
        return self.ring._from_keys(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.terms[0][1]))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.terms))
        return self._hash

    # evaluation and substitution

    def evaluate(self, point: Sequence):
        """Value at ``point`` (one coordinate per variable)."""
        if len(point) != self.ring.nvars:
            raise ValueError("point has wrong dimension")
        norm = self.ring.field
        total = 0
        for exps, c in self.monomials():
            term = c
            for x, a in zip(point, exps):
                if a:
                    term = term * x**a
            total += term
        return norm(total)

    def substitute_linear(self, forms: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable ``i`` by ``forms[i]``; all forms share one target ring."""
        if len(forms) != self.ring.nvars:
            raise ValueError("need one substitute per variable")
        if not forms:
            return self
        target = forms[0].ring
        for f in forms:
            if f.ring != target:
                raise RingMismatchError("substitutes live in different rings")
        if target.field != self.ring.field:
            raise RingMismatchError("substitution changes coefficient field")
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, a: int) -> Polynomial:
            if (i, a) not in powers:
                powers[(i, a)] = forms[i] if a == 1 else power(i, a - 1) * forms[i]
            return powers[(i, a)]

        acc: dict = {}
        for exps, c in self.monomials():
            term = target.constant(c)
            for i, a in enumerate(exps):
                if a:
                    term = term * power(i, a)
            for k, v in term.terms:
                acc[k] = acc.get(k, 0) + v
        return target._from_keys(acc)

    def to_ring(self, ring: PolyRing, mapping: Sequence[int] | None = None) -> "Polynomial":
        """Move into ``ring``; variable ``i`` goes to ``mapping[i]`` (default: same name)."""
        if mapping is None:
            mapping = [ring.index(v) for v in self.ring.variables]
        acc = {}
        key = ring.codec.key
        for exps, c in self.monomials():
            new = [0] * ring.nvars
            for i, a in enumerate(exps):
                if a:
                    if mapping[i] is None:
                        raise ValueError(f"variable {self.ring.variables[i]} has no image")
                    new[mapping[i]] += a
            k = key(new)
            acc[k] = acc.get(k, 0) + c
        return ring._from_keys(acc)

    # printing

    def __str__(self):
        if not self.terms:
            return "0"
        signed = self.ring.field.signed
        names = self.ring.variables
        out = []
        for exps, c in self.monomials():
            c = signed(c)
            neg = c < 0
            a = -c if neg else c
            mono = Monomial(exps).format(names)
            if mono == "1":
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


# ---------------------------------------------------------------------------
# parsing


_OPERATORS = set("+-*^()")


def _tokenize(text: str):
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield ("int", int(text[i:j]), i)
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            yield ("ident", text[i:j], i)
            i = j
        elif ch in _OPERATORS:
            yield ("op", ch, i)
            i += 1
        else:
            raise PolynomialSyntaxError(f"unexpected character {ch!r}", i)
    yield ("end", None, n)


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.tokens = list(_tokenize(text))
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val, at = self.take()
        if kind != "op" or val != op:
            raise PolynomialSyntaxError(f"expected {op!r}", at)

    def parse(self) -> Polynomial:
        result = self.expr()
        kind, val, at = self.peek()
        if kind != "end":
            raise PolynomialSyntaxError(f"unexpected token {val!r}", at)
        return result

    def expr(self) -> Polynomial:
        result = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                result = result + rhs if val == "+" else result - rhs
            else:
                return result

    def term(self) -> Polynomial:
        result = self.unary()
        while True:
            kind, val, at = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.unary()
            elif kind in ("int", "ident") or (kind == "op" and val == "("):
                raise PolynomialSyntaxError("implicit multiplication is not allowed", at)
            else:
                return result

    def unary(self) -> Polynomial:
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            operand = self.unary()
            return -operand if val == "-" else operand
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, at = self.take()
            if kind != "int":
                raise PolynomialSyntaxError("exponent must be a nonnegative integer", at)
            if val > EXP_MAX:
                raise ExponentOverflowError(f"exponent {val} exceeds {EXP_MAX}")
            return base**val
        return base

    def atom(self) -> Polynomial:
        kind, val, at = self.take()
        if kind == "int":
            return self.ring.constant(val)
        if kind == "ident":
            if val not in self.ring._index:
                raise UnknownVariableError(f"unknown variable {val!r} at position {at}")
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise PolynomialSyntaxError("expected a number, variable or '('", at)


def parse_polynomial(text: str, ring: PolyRing | Sequence[str], field=None) -> Polynomial:
    """Parse ``text`` over ``ring`` (or over a fresh degrevlex ring on the given names)."""
    if not isinstance(ring, PolyRing):
        ring = PolyRing(ring, field)
    return _Parser(text, ring).parse()


# ---------------------------------------------------------------------------
# random combinations and determinants


def random_combination(forms: Sequence[Polynomial], rng: random.Random):
    """Return ``(sum(l_j * f_j), [l_j])`` with independent uniform field coefficients.

    A singleton list never gets the zero coefficient.
    """
    if not forms:
        raise ValueError("cannot combine an empty list of forms")
    ring = forms[0].ring
    for f in forms:
        if f.ring != ring:
            raise RingMismatchError("forms live in different rings")
    fld = ring.field
    if len(forms) == 1:
        lams = [fld.random_nonzero(rng)]
    else:
        lams = [fld.random(rng) for _ in forms]
    acc: dict = {}
    for lam, f in zip(lams, forms):
        if lam:
            for k, c in f.terms:
                acc[k] = acc.get(k, 0) + lam * c
    return ring._from_keys(acc), lams


MAX_DET_SIZE = 12


class MinorExpander:
    """Memoized Laplace expansion over (row subset, column subset) pairs.

    All minors of one matrix share the memo, so asking for every minor of
    every size costs one expansion per subset pair.
    """

    def __init__(self, matrix: Sequence[Sequence[Polynomial]], ring: PolyRing | None = None):
        rows = [list(r) for r in matrix]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if n > MAX_DET_SIZE:
            raise ValueError(f"matrix size {n} exceeds the determinant guard {MAX_DET_SIZE}")
        if ring is None:
            if n == 0:
                raise ValueError("need a ring for the empty matrix")
            ring = rows[0][0].ring
        self.ring = ring
        self.size = n
        self.matrix = rows
        self._memo: dict[tuple[int, int], Polynomial] = {}

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
        """Determinant of the submatrix on sorted ``rows`` x sorted ``cols``."""
        if len(rows) != len(cols):
            raise ValueError("minor needs as many rows as columns")
        rmask = 0
        for r in rows:
            rmask |= 1 << r
        cmask = 0
        for c in cols:
            cmask |= 1 << c
        return self._det(rmask, cmask)

    def _det(self, rmask: int, cmask: int) -> Polynomial:
        if rmask == 0:
            return self.ring.one()
        key = (rmask, cmask)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        r0 = (rmask & -rmask).bit_length() - 1
        rest = rmask & ~(1 << r0)
        row = self.matrix[r0]
        acc: dict = {}
        sign = 1
        c = cmask
        while c:
            low = c & -c
            j = low.bit_length() - 1
            c ^= low
            entry = row[j]
            if entry.terms:
                sub = self._det(rest, cmask & ~low)
                if sub.terms:
                    prod = entry * sub
                    for k, v in prod.terms:
                        acc[k] = acc.get(k, 0) + sign * v
            sign = -sign
        result = self.ring._from_keys(acc)
        self._memo[key] = result
        return result

    def determinant(self) -> Polynomial:
        full = (1 << self.size) - 1
        return self._det(full, full)


def symbolic_determinant(matrix: Sequence[Sequence[Polynomial]], ring: PolyRing | None = None) -> Polynomial:
    """Exact, division-free determinant of a square polynomial matrix (size <= 12)."""
    return MinorExpander(matrix, ring).determinant()


# ---------------------------------------------------------------------------
# dense linear algebra over a field (rows are lists of field elements)


def rref(rows: Sequence[Sequence], field) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[field(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(a)):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field(x * inv) for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [field(x - f * y) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence], field) -> int:
    return len(rref(rows, field)[1])


def nullspace(rows: Sequence[Sequence], field, ncols: int | None = None) -> list[list]:
    """Basis of ``{v : rows @ v = 0}``."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(rows, field) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field(0)] * ncols
        v[fc] = field(1)
        for row, pc in zip(red, pivots):
            v[pc] = field(-row[fc])
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, field) -> list | None:
    """One solution of ``rows @ v = rhs`` or ``None``."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    v = [field(0)] * ncols
    for row, pc in zip(red, pivots):
        v[pc] = row[ncols]
    return v


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], field) -> list[list]:
    cols = list(zip(*b))
    return [[field(sum(x * y for x, y in zip(r, c))) for c in cols] for r in a]


def inverse(a: Sequence[Sequence], field) -> list[list]:
    n = len(a)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(a)]
    red, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]
