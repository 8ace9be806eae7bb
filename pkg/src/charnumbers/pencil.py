"""Symmetric matrices of linear forms: the multiplication table of an algebra
or a user-supplied linear space of symmetric matrices.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .algebra import (
    AlgebraError,
    FiniteAlgebra,
    NotLocalError,
    adapted_basis,
    change_basis,
    socle,
)
from .fieldpoly import MinorExpander, Polynomial, PolyRing, PrimeField, nullspace, rank
from .groebner import Ideal, solution_count


class PencilError(ValueError):
    pass


class DependentMatricesError(PencilError):
    def __init__(self, kernel: list):
        super().__init__(f"matrices are linearly dependent; kernel vector {kernel}")
        self.kernel = kernel


class PreconditionError(ValueError):
    """The algebra does not satisfy a structural precondition (local, Gorenstein)."""


@dataclass(frozen=True)
class MinorSet:
    """Nonzero ``k x k`` minors indexed by unordered pairs ``I <= J`` of row and
    column subsets; ``zero_pairs`` records the pairs whose minor vanishes."""

    order: int
    pairs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    forms: tuple[Polynomial, ...]
    zero_pairs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def __len__(self):
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)


@dataclass(frozen=True, eq=False)
class SymmetricPencil:
    """``sum_t x_t M_t`` for symmetric ``m x m`` matrices ``M_t`` over a prime field."""

    matrices: tuple        # D coefficient matrices, each a tuple of row tuples
    ring: PolyRing
    entries: tuple         # m x m polynomial entries
    provenance: str = ""
    algebra: FiniteAlgebra | None = None
    exact: tuple | None = None    # integer/fraction matrices as supplied, for rebuilding mod p
    _expander: list = field(default_factory=list, repr=False, compare=False)
    _minors: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def nparams(self) -> int:
        return len(self.matrices)

    @property
    def field(self) -> PrimeField:
        return self.ring.field

    def __repr__(self):
        return f"SymmetricPencil(size={self.size}, params={self.nparams}, {self.provenance or 'matrices'})"

    def expander(self) -> MinorExpander:
        if not self._expander:
            self._expander.append(MinorExpander(self.entries, self.ring))
        return self._expander[0]

    def over(self, p: int | PrimeField) -> "SymmetricPencil":
        """The same pencil rebuilt from its exact recipe over another prime."""
        fld = p if isinstance(p, PrimeField) else PrimeField(p)
        if fld == self.field:
            return self
        if self.algebra is not None:
            return pencil_from_algebra(self.algebra.over(fld))
        if self.exact is not None:
            return pencil_from_matrices(self.exact, fld, self.provenance)
        raise PencilError("pencil has no exact recipe to rebuild over another prime")

    def fingerprint(self) -> str:
        """Field-independent identity of the pencil, used as a cache key."""
        if self.algebra is not None and self.algebra.source is not None:
            return "algebra:" + json.dumps(self.algebra.source, sort_keys=True)
        if self.exact is not None:
            return "matrices:" + repr(self.exact)
        return f"raw:{self.field.p}:{self.matrices!r}"

    def evaluate(self, point: Sequence[int]) -> list[list[int]]:
        F = self.field
        m = self.size
        out = [[0] * m for _ in range(m)]
        for x, M in zip(point, self.matrices):
            if x:
                for i in range(m):
                    for j in range(m):
                        if M[i][j]:
                            out[i][j] += x * M[i][j]
        return [[F(v) for v in row] for row in out]

    def minors(self, k: int) -> MinorSet:
        return minors(self, k)

    def determinant(self) -> Polynomial:
        return self.expander().determinant()

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "variables": list(self.ring.variables),
            "entries": [[str(e) for e in row] for row in self.entries],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _build(mats, fld: PrimeField, provenance: str, algebra=None, exact=None) -> SymmetricPencil:
    D = len(mats)
    m = len(mats[0]) if mats else 0
    ring = PolyRing([f"x{t}" for t in range(D)], fld)
    entries = []
    for i in range(m):
        row = []
        for j in range(m):
            row.append(ring.linear_form([M[i][j] for M in mats]))
        entries.append(tuple(row))
    frozen = tuple(tuple(tuple(fld(v) for v in r) for r in M) for M in mats)
    return SymmetricPencil(frozen, ring, tuple(entries), provenance, algebra, exact)


def pencil_from_algebra(A: FiniteAlgebra) -> SymmetricPencil:
    """Entry ``(i, j)`` is ``sum_k c_{ij}^k x_k``; one parameter per basis element."""
    n = A.dim
    mats = [[[A.table[i][j][k] for j in range(n)] for i in range(n)] for k in range(n)]
    return _build(mats, A.field, A.name or "algebra", algebra=A)


def pencil_from_matrices(basis: Sequence[Sequence[Sequence[int]]], field: PrimeField | None = None,
                         provenance: str = "matrices") -> SymmetricPencil:
    """The span of the given symmetric matrices, which must be independent."""
    from .algebra import DEFAULT_PRIME

    fld = field or PrimeField(DEFAULT_PRIME)
    if not basis:
        raise PencilError("need at least one matrix")
    m = len(basis[0])
    exact = tuple(tuple(tuple(r) for r in M) for M in basis)
    mats = []
    for t, M in enumerate(basis):
        if len(M) != m or any(len(r) != m for r in M):
            raise PencilError(f"matrix {t} is not {m}x{m}")
        M = [[fld(v) for v in r] for r in M]
        for i in range(m):
            for j in range(i + 1, m):
                if M[i][j] != M[j][i]:
                    raise PencilError(f"matrix {t} is not symmetric at ({i}, {j})")
        mats.append(M)
    flat_cols = [[M[i][j] for M in mats] for i in range(m) for j in range(i, m)]
    ker = nullspace(flat_cols, fld, len(mats))
    if ker:
        raise DependentMatricesError([fld.signed(c) for c in ker[0]])
    return _build(mats, fld, provenance, exact=exact)


def minors(P: SymmetricPencil, k: int) -> MinorSet:
    m = P.size
    if not 1 <= k <= m:
        raise PencilError(f"minor order {k} outside 1..{m}")
    hit = P._minors.get(k)
    if hit is not None:
        return hit
    ex = P.expander()
    subsets = list(combinations(range(m), k))
    pairs, forms, zeros = [], [], []
    for a, I in enumerate(subsets):
        for J in subsets[a:]:
            f = ex.minor(I, J)
            if f:
                pairs.append((I, J))
                forms.append(f)
            else:
                zeros.append((I, J))
    out = MinorSet(k, tuple(pairs), tuple(forms), tuple(zeros))
    P._minors[k] = out
    return out


def generic_rank(P: SymmetricPencil, rng: random.Random, samples: int = 8) -> int:
    """Largest rank seen at ``samples`` random parameter points."""
    F = P.field
    best = 0
    for _ in range(samples):
        pt = [F.random(rng) for _ in range(P.nparams)]
        best = max(best, rank(P.evaluate(pt), F) if P.size else 0)
        if best == P.size:
            break
    return best


def _is_monomial(det: Polynomial, exps: Sequence[int]) -> bool:
    return len(det.terms) == 1 and det.ring.codec.exps(det.terms[0][0]) == tuple(exps)


@dataclass(frozen=True)
class DetMonomialResult:
    ok: bool
    determinant: Polynomial
    expected_exponents: tuple[int, ...]
    basis: tuple

    def __bool__(self):
        return self.ok


def _require_local_gorenstein(A: FiniteAlgebra, what: str = "algebra"):
    try:
        soc = socle(A)
    except NotLocalError as exc:
        raise PreconditionError(f"{what} is not local: {exc}") from None
    if len(soc) != 1:
        raise PreconditionError(f"{what} is not Gorenstein (socle dimension {len(soc)})")


def det_monomial_check(A: FiniteAlgebra) -> DetMonomialResult:
    """In the adapted basis, is ``det`` of the pencil ``c * x_last^n`` with ``c != 0``?"""
    _require_local_gorenstein(A)
    Pb = adapted_basis(A)
    B = change_basis(A, Pb)
    det = pencil_from_algebra(B).determinant()
    n = A.dim
    exps = (0,) * (n - 1) + (n,)
    return DetMonomialResult(_is_monomial(det, exps), det, exps, tuple(map(tuple, Pb)))


def det_monomial_decomposable(A: FiniteAlgebra) -> DetMonomialResult:
    """For an explicit direct sum of local Gorenstein parts: is ``det`` of the pencil,
    in the block-adapted basis, a multiple of the product of each part's socle
    coordinate raised to that part's dimension?"""
    parts = A.parts
    if not parts:
        raise PreconditionError("algebra was not built as an explicit direct sum")
    if sum(P.dim for P in parts) != A.dim:
        raise PreconditionError("recorded parts do not add up to the algebra")
    n = A.dim
    Pb = [[0] * n for _ in range(n)]
    exps = [0] * n
    off = 0
    for t, part in enumerate(parts):
        _require_local_gorenstein(part, f"part {t}")
        blk = adapted_basis(part)
        for i, row in enumerate(blk):
            Pb[off + i][off:off + part.dim] = row
        exps[off + part.dim - 1] = part.dim
        off += part.dim
    B = change_basis(A, Pb)
    det = pencil_from_algebra(B).determinant()
    return DetMonomialResult(_is_monomial(det, exps), det, tuple(exps), tuple(map(tuple, Pb)))


def two_by_two_quotient_dim(A: FiniteAlgebra) -> int:
    """``dim k[x] / (2x2 minors of the pencil, u(x) - 1)`` with ``u`` the unit's linear form."""
    P = pencil_from_algebra(A)
    ring = P.ring
    gens = list(minors(P, 2).forms) + [ring.linear_form(list(A.unit), -1)]
    return solution_count(Ideal(gens, ring))
