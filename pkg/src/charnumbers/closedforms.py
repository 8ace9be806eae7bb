"""Closed-form oracles: mixed Eulerian numbers, binomial sequences, the CW and
trivial-algebra formulas, and comparisons of computed tables against them.
"""

from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Mapping, Sequence

MAX_EULERIAN_N = 9


class ClosedFormError(ValueError):
    pass


class RelationSystemError(ArithmeticError):
    """The mixed Eulerian relation system is singular, inconsistent or non-integral."""


def weak_compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All weak compositions of ``total`` into ``parts`` parts, in lexicographic order."""
    if parts == 0:
        return [()] if total == 0 else []
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in weak_compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def _check_index(a: Sequence[int], length: int, total: int, what: str) -> tuple[int, ...]:
    a = tuple(a)
    if len(a) != length:
        raise ClosedFormError(f"{what}: index {a} must have {length} entries")
    if any((not isinstance(x, int)) or x < 0 for x in a):
        raise ClosedFormError(f"{what}: index {a} must be nonnegative integers")
    if sum(a) != total:
        raise ClosedFormError(f"{what}: index {a} must sum to {total}")
    return a


# ---------------------------------------------------------------------------
# mixed Eulerian numbers


def eulerian_relations(n: int) -> list[tuple[dict, Fraction]]:
    """Rows ``(coefficients by index, right-hand side)`` of the defining system."""
    rows: list[tuple[dict, Fraction]] = [({(1,) * n: Fraction(1)}, Fraction(factorial(n)))]

    def moved(a, i, j):
        b = list(a)
        b[i] -= 1
        b[j] += 1
        return tuple(b)

    for a in weak_compositions(n, n):
        for k in range(n):
            if a[k] < 2:
                continue
            row: dict = {}
            if 0 < k < n - 1:
                targets = [moved(a, k, k - 1), moved(a, k, k + 1)]
            elif k == 0:
                if n == 1:
                    continue
                targets = [moved(a, 0, 1)]
            else:
                targets = [moved(a, n - 1, n - 2)]
            row[a] = Fraction(2)
            for t in targets:
                row[t] = row.get(t, Fraction(0)) - 1
            rows.append(({k_: v for k_, v in row.items() if v}, Fraction(0)))
    return rows


def _solve_sparse(rows, unknowns: Sequence) -> dict:
    """Exact sparse Gaussian elimination; every unknown must be determined."""
    order = {u: i for i, u in enumerate(unknowns)}
    pivots: dict[int, tuple[dict, Fraction]] = {}   # column -> (row over larger columns, rhs), pivot coeff 1
    for coeffs, rhs in rows:
        row = {order[k]: Fraction(v) for k, v in coeffs.items()}
        heap = list(row)
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            v = row.get(c)
            if not v:
                continue
            if c in pivots:
                prow, prhs = pivots[c]
                del row[c]
                for cc, pv in prow.items():
                    nv = row.get(cc, 0) - v * pv
                    if nv:
                        if cc not in row:
                            heapq.heappush(heap, cc)
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
                rhs = rhs - v * prhs
            else:
                inv = 1 / v
                del row[c]
                pivots[c] = ({cc: x * inv for cc, x in row.items()}, rhs * inv)
                break
        else:
            if rhs != 0:
                raise RelationSystemError("relation system is inconsistent")
    if len(pivots) != len(unknowns):
        raise RelationSystemError(
            f"relation system is singular: rank {len(pivots)} for {len(unknowns)} unknowns"
        )
    values: dict[int, Fraction] = {}
    for c in sorted(pivots, reverse=True):
        prow, prhs = pivots[c]
        values[c] = prhs - sum(v * values[cc] for cc, v in prow.items())
    return {u: values[i] for u, i in order.items()}


_EULER_MEMO: dict[int, dict[tuple[int, ...], int]] = {}
_EULER_LOCK = threading.Lock()


def mixed_eulerian_table(n: int) -> dict[tuple[int, ...], int]:
    """All ``e_a`` for weak compositions ``a`` of ``n`` into ``n`` parts."""
    if not isinstance(n, int) or n < 1:
        raise ClosedFormError("mixed Eulerian numbers need n >= 1")
    if n > MAX_EULERIAN_N:
        raise ClosedFormError(f"mixed Eulerian tables are capped at n <= {MAX_EULERIAN_N}")
    with _EULER_LOCK:
        hit = _EULER_MEMO.get(n)
    if hit is not None:
        return hit
    unknowns = weak_compositions(n, n)
    rows = eulerian_relations(n)
    sol = _solve_sparse(rows, unknowns)
    table = {}
    for a, v in sol.items():
        if v.denominator != 1:
            raise RelationSystemError(f"non-integral solution e_{a} = {v}")
        table[a] = int(v)
    for coeffs, rhs in rows:
        if sum(c * table[k] for k, c in coeffs.items()) != rhs:
            raise RelationSystemError("solved table violates a relation")
    with _EULER_LOCK:
        _EULER_MEMO.setdefault(n, table)
    return table


def mixed_eulerian(a: Sequence[int]) -> int:
    n = len(a)
    a = _check_index(a, n, n, "mixed_eulerian")
    return mixed_eulerian_table(n)[a]


# ---------------------------------------------------------------------------
# sequences and closed forms


def binomial_sequence(d: int) -> tuple[int, ...]:
    """Characteristic sequence shared by every algebra of dimension ``d`` on the line."""
    if not isinstance(d, int) or d < 1:
        raise ClosedFormError("binomial_sequence needs d >= 1")
    return tuple(comb(d - 1, i) for i in range(d))


def cw_closed_form(n: int, a: Sequence[int]) -> int:
    """Characteristic number of the (n+1)-dimensional CW algebra at index ``a``."""
    if not isinstance(n, int) or n < 2:
        raise ClosedFormError("cw_closed_form needs n >= 2")
    a = _check_index(a, n, n, "cw_closed_form")
    inner = sum(a[1:-1])
    ends = (a[0] > 0) + (a[-1] > 0)
    return 2 ** (inner - 1 + ends)


def trivial_closed_form(m: int, a: Sequence[int]) -> int:
    """Characteristic number of k[x_1..x_m]/(x)^2 at index ``a``."""
    if not isinstance(m, int) or m < 1:
        raise ClosedFormError("trivial_closed_form needs m >= 1")
    a = _check_index(a, m, m, "trivial_closed_form")
    if a[0] > 0 and not any(a[2:]):
        return 2 ** (a[1] if m > 1 else 0)
    return 0


def sequence_indices(m: int, d: int) -> list[tuple[int, ...]]:
    """Indices ``(d-i, 0, ..., 0, i)`` of length ``m-1``; for ``m = 2`` both ends coincide."""
    out = []
    for i in range(d + 1):
        b = [0] * (m - 1)
        if m >= 2:
            b[0] += d - i
            b[-1] += i
        out.append(tuple(b))
    return out


# ---------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class BoundComparison:
    index: tuple[int, ...]
    value: int
    reference: int

    @property
    def relation(self) -> str:
        return "=" if self.value == self.reference else ("<" if self.value < self.reference else ">")


@dataclass(frozen=True)
class BoundReport:
    kind: str
    comparisons: tuple[BoundComparison, ...]
    violations: tuple[BoundComparison, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def strict(self) -> tuple[BoundComparison, ...]:
        return tuple(c for c in self.comparisons if c.value != c.reference)


def _plain_values(values) -> dict[tuple[int, ...], int]:
    if hasattr(values, "values") and not isinstance(values, Mapping):
        values = values.values
    out = {}
    for k, v in dict(values).items():
        out[tuple(k)] = int(getattr(v, "value", v))
    return out


def bound_report(values, kind: str) -> BoundReport:
    """Compare a full table (index -> value) against the smooth upper bound
    (mixed Eulerian numbers) or the CW lower bound."""
    table = _plain_values(values)
    if not table:
        raise ClosedFormError("empty table")
    lengths = {len(k) for k in table}
    sums = {sum(k) for k in table}
    if len(lengths) != 1 or len(sums) != 1:
        raise ClosedFormError("table mixes index shapes")
    n = lengths.pop()
    if sums.pop() != n:
        raise ClosedFormError(f"indices of length {n} must sum to {n}")
    if kind == "smooth-upper":
        ref, ok = mixed_eulerian, (lambda v, r: v <= r)
    elif kind == "cw-lower":
        if n < 2:
            raise ClosedFormError("the CW bound needs dimension at least 3")
        ref, ok = (lambda a: cw_closed_form(n, a)), (lambda v, r: v >= r)
    else:
        raise ClosedFormError(f"unknown bound kind {kind!r}")
    comps = tuple(BoundComparison(k, v, ref(k)) for k, v in sorted(table.items()))
    bad = tuple(c for c in comps if not ok(c.value, c.reference))
    return BoundReport(kind, comps, bad)
