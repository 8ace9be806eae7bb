"""Finite commutative unital algebras given by structure constants.

An algebra is stored densely: ``table[i][j]`` is the coordinate vector of
``a_i * a_j``.  The unit is a coordinate vector as well, which lets direct
sums keep the concatenated bases of their summands.  Every algebra remembers
an exact recipe (an AlgebraSpec-shaped dict) so it can be rebuilt over
another prime with :meth:`FiniteAlgebra.over`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .fieldpoly import (
    PolynomialSyntaxError,
    PolyRing,
    PrimeField,
    UnknownVariableError,
    inverse,
    matmul,
    nullspace,
    rank,
    rref,
)
from .groebner import Ideal, NotZeroDimensionalError, buchberger, normal_form

DEFAULT_PRIME = 2_147_483_647
FAMILIES = ("chain", "smooth", "cw", "trivial")


class AlgebraError(ValueError):
    pass


class TableError(AlgebraError):
    """A structure-constant table violates an axiom; ``witness`` holds indices."""

    def __init__(self, message: str, witness: tuple):
        super().__init__(f"{message} at {witness}")
        self.witness = witness


class NotLocalError(AlgebraError):
    pass


class SpecError(ValueError):
    """Malformed AlgebraSpec input."""


def _default_field(fld):
    return PrimeField(DEFAULT_PRIME) if fld is None else fld


@dataclass(frozen=True)
class Presentation:
    """``variables`` and ideal ``relations``; ``basis[i]`` is the monomial exponent
    vector represented by basis element ``i`` (``None`` for non-monomial bases)."""

    variables: tuple[str, ...]
    relations: tuple[str, ...]
    basis: tuple[tuple[int, ...], ...] | None = None


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    field: PrimeField
    table: tuple            # table[i][j] -> tuple of n coordinates
    unit: tuple             # coordinates of the unit element
    labels: tuple[str, ...]
    source: dict | None = None
    presentation: Presentation | None = None
    parts: tuple["FiniteAlgebra", ...] | None = None
    name: str = ""

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def unit_index(self) -> int | None:
        """Index of the unit when it is itself a basis vector."""
        nz = [i for i, c in enumerate(self.unit) if c]
        if len(nz) == 1 and self.unit[nz[0]] == 1:
            return nz[0]
        return None

    def __repr__(self):
        tag = self.name or "algebra"
        return f"FiniteAlgebra({tag}, dim={self.dim}, {self.field!r})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteAlgebra)
            and self.field == other.field
            and self.table == other.table
            and self.unit == other.unit
        )

    def __hash__(self):
        return hash((self.field, self.table, self.unit))

    def constant(self, i: int, j: int, k: int) -> int:
        return self.table[i][j][k]

    def constants(self) -> list[tuple[int, int, int, int]]:
        """Nonzero ``(i, j, k, c)`` entries."""
        n = self.dim
        return [
            (i, j, k, self.table[i][j][k])
            for i in range(n)
            for j in range(n)
            for k in range(n)
            if self.table[i][j][k]
        ]

    def multiply(self, u: Sequence[int], v: Sequence[int]) -> tuple:
        F = self.field
        n = self.dim
        out = [0] * n
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                row = self.table[i][j]
                for k in range(n):
                    if row[k]:
                        out[k] += ab * row[k]
        return tuple(F(x) for x in out)

    def multiplication_matrix(self, u: Sequence[int]) -> list[list[int]]:
        """Matrix of ``v -> u*v``; row ``j`` is the image of basis vector ``j``."""
        n = self.dim
        return [list(self.multiply(u, _basis_vector(n, j))) for j in range(n)]

    def over(self, p: int | PrimeField) -> "FiniteAlgebra":
        fld = p if isinstance(p, PrimeField) else PrimeField(p)
        if fld == self.field:
            return self
        if self.source is None:
            raise AlgebraError("algebra has no exact recipe to rebuild over another prime")
        return from_spec(self.source, fld)

    def is_local(self) -> bool:
        try:
            self.maximal_ideal()
        except NotLocalError:
            return False
        return True

    # delegates, so callers can write A.socle() etc.

    def maximal_ideal(self) -> list[tuple]:
        return maximal_ideal(self)

    def socle(self) -> list[tuple]:
        return socle(self)

    def is_local_at_origin(self) -> bool:
        return is_local_at_origin(self)

    def is_gorenstein_local(self) -> bool:
        return len(socle(self)) == 1

    def to_spec(self) -> dict:
        """A table-form AlgebraSpec reproducing this algebra over its field."""
        if self.unit_index is None:
            raise AlgebraError("table specs need the unit to be a basis vector")
        return {
            "type": "table",
            "dim": self.dim,
            "unit": self.unit_index,
            "constants": [[i, j, k, self.field.signed(c)] for i, j, k, c in self.constants()],
        }


def _basis_vector(n: int, i: int) -> tuple:
    return tuple(1 if k == i else 0 for k in range(n))


# ---------------------------------------------------------------------------
# validation


def validate_table(table, unit, field) -> None:
    """Exhaustive commutativity, unit and associativity checks."""
    n = len(table)
    for i in range(n):
        if len(table[i]) != n or any(len(v) != n for v in table[i]):
            raise TableError("table has wrong shape", (i,))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if table[i][j][k] != table[j][i][k]:
                    raise TableError("commutativity violated", (i, j, k))
    for j in range(n):
        prod = [0] * n
        for i, u in enumerate(unit):
            if u:
                for k in range(n):
                    prod[k] += u * table[i][j][k]
        for k in range(n):
            if field(prod[k]) != (1 if k == j else 0):
                raise TableError("unit law violated", (j, k))
    # (a_i a_j) a_k == a_i (a_j a_k), coordinate l
    for i in range(n):
        for j in range(n):
            ij = table[i][j]
            for k in range(n):
                jk = table[j][k]
                for l in range(n):
                    lhs = sum(ij[m] * table[m][k][l] for m in range(n) if ij[m])
                    rhs = sum(jk[m] * table[i][m][l] for m in range(n) if jk[m])
                    if field(lhs - rhs):
                        raise TableError("associativity violated", (i, j, k, l))


# ---------------------------------------------------------------------------
# constructors


def _coerce_constant(c, field):
    if isinstance(c, str):
        c = Fraction(c)
    if isinstance(c, float):
        raise SpecError("structure constants must be integers or exact fractions")
    return field(c)


def from_table(n: int, constants, unit_index: int = 0, field=None, labels=None,
               validate: bool = True) -> FiniteAlgebra:
    """Algebra from ``(i, j, k, c)`` entries meaning ``c_{ij}^k = c`` (missing entries 0).

    Commutativity is checked, not imposed: both ``(i, j)`` and ``(j, i)`` must be listed.
    """
    fld = _default_field(field)
    if n < 1:
        raise AlgebraError("dimension must be positive")
    if not 0 <= unit_index < n:
        raise AlgebraError(f"unit index {unit_index} out of range")
    table = [[[0] * n for _ in range(n)] for _ in range(n)]
    for entry in constants:
        try:
            i, j, k, c = entry
        except (TypeError, ValueError):
            raise SpecError(f"constant entry {entry!r} is not [i, j, k, c]") from None
        if not all(isinstance(t, int) and 0 <= t < n for t in (i, j, k)):
            raise SpecError(f"constant entry {entry!r} has an index out of range")
        table[i][j][k] = fld(table[i][j][k] + _coerce_constant(c, fld))
    frozen = tuple(tuple(tuple(v) for v in row) for row in table)
    unit = _basis_vector(n, unit_index)
    if validate:
        validate_table(frozen, unit, fld)
    src = {
        "type": "table",
        "dim": n,
        "unit": unit_index,
        "constants": [list(e) for e in constants],
    }
    labels = tuple(labels) if labels else tuple(f"a{i}" for i in range(n))
    return FiniteAlgebra(fld, frozen, unit, labels, source=src)


def from_quotient(variables: Sequence[str], generators: Sequence[str], field=None) -> FiniteAlgebra:
    """``k[variables] / (generators)`` on its degrevlex standard-monomial basis,
    listed by increasing degree and decreasing order within a degree."""
    fld = _default_field(field)
    ring = PolyRing(variables, fld)
    polys = [ring.parse(g) for g in generators]
    G = buchberger(Ideal(polys, ring))
    if G.is_unit_ideal():
        raise AlgebraError("the ideal is the whole ring")
    try:
        std = G.standard_monomials()
    except NotZeroDimensionalError:
        raise AlgebraError("quotient is infinite-dimensional") from None
    # ascending degree; within a degree, larger monomials first (x before y before z)
    std = sorted(std, key=lambda m: (m.degree, -ring.codec.key(m.exponents)))
    n = len(std)
    index = {m.exponents: i for i, m in enumerate(std)}
    codec = ring.codec
    mono = [ring.monomial(m.exponents) for m in std]
    table = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            r = normal_form(mono[i] * mono[j], G)
            vec = [0] * n
            for k, c in r.terms:
                vec[index[codec.exps(k)]] = c
            table[i][j] = table[j][i] = tuple(vec)
    frozen = tuple(tuple(row) for row in table)
    unit = _basis_vector(n, index[(0,) * ring.nvars])
    labels = tuple(m.format(ring.variables) for m in std)
    pres = Presentation(tuple(variables), tuple(generators), tuple(m.exponents for m in std))
    src = {"type": "quotient", "vars": list(variables), "ideal": list(generators)}
    name = f"k[{','.join(variables)}]/({', '.join(generators)})"
    return FiniteAlgebra(fld, frozen, unit, labels, source=src, presentation=pres, name=name)


def _chain(d: int, fld) -> FiniteAlgebra:
    if d == 1:
        A = from_quotient(["x"], ["x"], fld)
    else:
        A = from_quotient(["x"], [f"x^{d}"], fld)
    return A


def _cw(n: int, fld) -> FiniteAlgebra:
    # basis 1, x_0..x_{n-2}, x_0^2; x_i x_j = 0 (i != j), x_i^2 = x_0^2, x_0^3 = 0
    dim = n + 1
    soc = n
    entries = []
    for j in range(dim):
        entries.append((0, j, j, 1))
        if j:
            entries.append((j, 0, j, 1))
    for i in range(1, n):
        entries.append((i, i, soc, 1))
    labels = ("1",) + tuple(f"x{i}" for i in range(n - 1)) + ("x0^2",)
    A = from_table(dim, entries, 0, fld, labels)
    names = [f"x{i}" for i in range(n - 1)]
    rels = [f"{a}*{b}" for ia, a in enumerate(names) for b in names[ia + 1:]]
    rels += [f"{a}^2 - x0^2" for a in names[1:]] + ["x0^3"]
    basis = [(0,) * (n - 1)]
    for i in range(n - 1):
        basis.append(tuple(1 if k == i else 0 for k in range(n - 1)))
    basis.append((2,) + (0,) * (n - 2))
    pres = Presentation(tuple(names), tuple(rels), tuple(basis))
    return FiniteAlgebra(A.field, A.table, A.unit, A.labels, source=_family_src("cw", n),
                         presentation=pres)


def _smooth(d: int, fld) -> FiniteAlgebra:
    parts = [_chain(1, fld)] * d
    A = direct_sum(*parts) if d > 1 else parts[0]
    return FiniteAlgebra(A.field, A.table, A.unit, tuple(f"e{i}" for i in range(d)),
                         source=_family_src("smooth", d), parts=A.parts or (A,))


def _trivial(m: int, fld) -> FiniteAlgebra:
    names = [f"x{i}" for i in range(1, m + 1)]
    rels = [f"{a}*{b}" for ia, a in enumerate(names) for b in names[ia:]]
    return from_quotient(names, rels, fld)


def _family_src(name: str, param: int) -> dict:
    return {"type": "family", "name": name, "param": param}


def family(name: str, param: int, field=None) -> FiniteAlgebra:
    """``chain(d)`` = k[x]/(x^d); ``smooth(d)`` = k^d; ``cw(n)`` of dimension n+1;
    ``trivial(m)`` = k[x_1..x_m]/(x)^2 of dimension m+1."""
    fld = _default_field(field)
    if not isinstance(param, int) or isinstance(param, bool):
        raise AlgebraError(f"family parameter must be an integer, got {param!r}")
    low = 2 if name == "cw" else 1
    if name not in FAMILIES:
        raise AlgebraError(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
    if param < low:
        raise AlgebraError(f"{name}({param}): parameter must be >= {low}")
    builder = {"chain": _chain, "smooth": _smooth, "cw": _cw, "trivial": _trivial}[name]
    A = builder(param, fld)
    return FiniteAlgebra(A.field, A.table, A.unit, A.labels, source=_family_src(name, param),
                         presentation=A.presentation, parts=A.parts, name=f"{name}({param})")


def chain(d: int, field=None) -> FiniteAlgebra:
    return family("chain", d, field)


def smooth(d: int, field=None) -> FiniteAlgebra:
    return family("smooth", d, field)


def cw(n: int, field=None) -> FiniteAlgebra:
    return family("cw", n, field)


def trivial(m: int, field=None) -> FiniteAlgebra:
    return family("trivial", m, field)


def direct_sum(*algebras: FiniteAlgebra) -> FiniteAlgebra:
    """Block-diagonal product; the unit is the concatenation of the units."""
    if not algebras:
        raise AlgebraError("direct sum of nothing")
    fld = algebras[0].field
    if any(A.field != fld for A in algebras):
        raise AlgebraError("summands live over different fields")
    n = sum(A.dim for A in algebras)
    table = []
    offsets = []
    off = 0
    for A in algebras:
        offsets.append(off)
        off += A.dim
    zero = (0,) * n
    for A, o in zip(algebras, offsets):
        for i in range(A.dim):
            row = [zero] * n
            for j in range(A.dim):
                v = [0] * n
                v[o:o + A.dim] = A.table[i][j]
                row[o + j] = tuple(v)
            table.append(tuple(row))
    unit = tuple(c for A in algebras for c in A.unit)
    labels = tuple(
        f"{lab}[{t}]" for t, A in enumerate(algebras) for lab in A.labels
    )
    parts = tuple(P for A in algebras for P in (A.parts or (A,)))
    srcs = [A.source for A in algebras]
    src = {"type": "sum", "parts": srcs} if all(s is not None for s in srcs) else None
    name = " + ".join(A.name or "A" for A in algebras)
    return FiniteAlgebra(fld, tuple(table), unit, labels, source=src, parts=parts, name=name)


def change_basis(A: FiniteAlgebra, P: Sequence[Sequence[int]]) -> FiniteAlgebra:
    """Re-express ``A`` in the basis whose ``i``-th vector has old coordinates ``P[i]``."""
    F = A.field
    n = A.dim
    P = [[F(x) for x in row] for row in P]
    if len(P) != n or any(len(r) != n for r in P):
        raise AlgebraError("basis change must be a square matrix of the algebra's size")
    Pinv = inverse(P, F)
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            old = A.multiply(P[i], P[j])
            row.append(tuple(matmul([list(old)], Pinv, F)[0]))
        table.append(tuple(row))
    unit = tuple(matmul([list(A.unit)], Pinv, F)[0])
    labels = tuple(f"b{i}" for i in range(n))
    return FiniteAlgebra(F, tuple(table), unit, labels, name=A.name)


# ---------------------------------------------------------------------------
# locality, filtration, socle


def is_local_at_origin(A: FiniteAlgebra) -> bool:
    """All presentation variables nilpotent, i.e. NF(x_i^n) = 0 with n = dim A."""
    pres = A.presentation
    if pres is None:
        raise AlgebraError("locality at the origin needs a quotient presentation")
    ring = PolyRing(pres.variables, A.field)
    G = buchberger(Ideal.parse(list(pres.relations), ring))
    return all(normal_form(ring.gen(i) ** A.dim, G).is_zero() for i in range(ring.nvars))


def _span(vectors, F) -> list[list[int]]:
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return []
    return rref(vecs, F)[0]


def _is_nilpotent(A: FiniteAlgebra, v) -> bool:
    w = tuple(v)
    for _ in range(A.dim):
        w = A.multiply(w, v)
        if not any(w):
            return True
    return not any(w)


def maximal_ideal(A: FiniteAlgebra) -> list[tuple]:
    """A basis (in echelon form) of the maximal ideal of a local algebra."""
    F = A.field
    n = A.dim
    u = A.unit_index
    if A.presentation is not None and A.presentation.basis is not None:
        if not is_local_at_origin(A):
            raise NotLocalError(f"{A!r} is not local at the origin")
        cand = [_basis_vector(n, i) for i, e in enumerate(A.presentation.basis) if any(e)]
    elif u is not None:
        cand = [_basis_vector(n, i) for i in range(n) if i != u]
        for i, v in enumerate(cand):
            if not _is_nilpotent(A, v):
                raise NotLocalError(f"non-unit basis vector {v} is not nilpotent")
    else:
        # nilradical = radical of the trace form (characteristic exceeds the dimension)
        traces = [[sum(A.multiplication_matrix(A.multiply(_basis_vector(n, i), _basis_vector(n, j)))[k][k]
                       for k in range(n)) for j in range(n)] for i in range(n)]
        cand = [tuple(v) for v in nullspace(traces, F, n)]
        if len(cand) != n - 1:
            raise NotLocalError(f"{A!r} has {n - len(cand)} residue-field summands")
    return [tuple(r) for r in _span(cand, F)]


def maximal_ideal_filtration(A: FiniteAlgebra) -> list[list[tuple]]:
    """Echelon bases of m, m^2, ..., m^s (the last nonzero power)."""
    F = A.field
    m = maximal_ideal(A)
    powers = []
    cur = m
    while cur:
        powers.append(cur)
        if len(powers) > A.dim:
            raise NotLocalError("maximal ideal is not nilpotent")
        prods = [A.multiply(a, b) for a in m for b in cur]
        nxt = [tuple(r) for r in _span(prods, F)]
        if len(nxt) == len(cur):
            raise NotLocalError("maximal ideal is not nilpotent")
        cur = nxt
    return powers


def adapted_basis(A: FiniteAlgebra) -> list[list[int]]:
    """Rows: the unit, then successive complements of m^{k+1} in m^k.

    The last row lies in the top nonzero power of m, hence in the socle.
    """
    F = A.field
    filt = maximal_ideal_filtration(A)
    rows = [list(A.unit)]
    for k, block in enumerate(filt):
        below = [list(v) for v in filt[k + 1]] if k + 1 < len(filt) else []
        basis = list(below)
        r = len(basis)
        for v in block:
            if rank(basis + [list(v)], F) > r:
                basis.append(list(v))
                rows.append(list(v))
                r += 1
    if rank(rows, F) != A.dim:
        raise AlgebraError("adapted basis construction lost rank")
    return rows


def socle(A: FiniteAlgebra) -> list[tuple]:
    """``(0 : m)`` as an echelon basis: kernel of multiplication by all of ``m``."""
    F = A.field
    m = maximal_ideal(A)
    n = A.dim
    if not m:
        return [tuple(A.unit)]
    # v in socle iff for every generator a of m: (v * a) = 0, a linear condition on v
    cols = []
    for a in m:
        M = A.multiplication_matrix(a)   # row j = a * e_j
        for k in range(n):
            cols.append([M[j][k] for j in range(n)])
    return [tuple(v) for v in _span(nullspace(cols, F, n), F)]


def local_parts(A: FiniteAlgebra) -> tuple[FiniteAlgebra, ...]:
    """Recorded summands of an explicit direct sum, or ``(A,)``."""
    return A.parts or (A,)


# ---------------------------------------------------------------------------
# AlgebraSpec (JSON) input


def from_spec(spec, field=None) -> FiniteAlgebra:
    """Build from an AlgebraSpec dict or JSON text.

    Forms: quotient ``{"type":"quotient","vars":[...],"ideal":[...]}``, table
    ``{"type":"table","dim":n,"unit":u,"constants":[[i,j,k,c],...]}``, family
    ``{"type":"family","name":...,"param":d}``, sum ``{"type":"sum","parts":[...]}``.
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON: {exc}") from None
    if not isinstance(spec, dict):
        raise SpecError("an algebra spec must be a JSON object")
    fld = _default_field(field)
    kind = spec.get("type")
    try:
        if kind == "quotient":
            vars_, ideal = spec.get("vars"), spec.get("ideal")
            if not isinstance(vars_, list) or not all(isinstance(v, str) for v in vars_):
                raise SpecError("quotient spec needs 'vars': list of names")
            if not isinstance(ideal, list) or not all(isinstance(g, str) for g in ideal):
                raise SpecError("quotient spec needs 'ideal': list of polynomial strings")
            return from_quotient(vars_, ideal, fld)
        if kind == "table":
            n, u, consts = spec.get("dim"), spec.get("unit", 0), spec.get("constants")
            if not isinstance(n, int) or not isinstance(u, int) or not isinstance(consts, list):
                raise SpecError("table spec needs integer 'dim', 'unit' and a 'constants' list")
            return from_table(n, [tuple(e) if isinstance(e, list) else e for e in consts], u, fld)
        if kind == "family":
            return family(spec.get("name"), spec.get("param"), fld)
        if kind == "sum":
            parts = spec.get("parts")
            if not isinstance(parts, list) or not parts:
                raise SpecError("sum spec needs a nonempty 'parts' list")
            return direct_sum(*(from_spec(s, fld) for s in parts))
    except (PolynomialSyntaxError, UnknownVariableError) as exc:
        raise SpecError(str(exc)) from exc
    raise SpecError(f"unknown spec type {kind!r}")


def parse_family_shorthand(text: str) -> dict | None:
    """``"chain(3)"`` or ``"family:chain(3)"`` -> family spec dict, else ``None``."""
    t = text.strip()
    if t.startswith("family:"):
        t = t[len("family:"):]
    for name in FAMILIES:
        if t.startswith(name + "(") and t.endswith(")"):
            try:
                return _family_src(name, int(t[len(name) + 1:-1]))
            except ValueError:
                return None
    return None
