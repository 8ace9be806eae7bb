"""Characteristic numbers by random slicing, saturation and counting.

For an index ``b = (b_1, ..., b_{m-1})`` of an ``m x m`` pencil with ``D``
parameters the engine

1. draws ``b_1`` random combinations of the entries (linear forms) and
   parametrizes their common kernel by a random basis, fixing the last
   coordinate to 1 (a random affine chart of the remaining projective space);
2. adds ``b_i`` random combinations of the ``i x i`` minors for ``i >= 2``;
3. localizes at a random combination ``g`` of the minors of the saturation
   order (rank ``m - 1``, or the generic rank in the truncated regime) and
   counts the points with ``g != 0`` as the dimension of
   ``k[y, t] / (I + (t g - 1))``.

Every number is computed over at least two independent random primes and
only reported once two runs agree.
"""

from __future__ import annotations

import os
import random
import threading
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from math import factorial
from typing import Sequence

from .algebra import FiniteAlgebra, NotLocalError, maximal_ideal
from .closedforms import sequence_indices, weak_compositions
from .fieldpoly import PolyRing, PrimeField, random_combination, random_prime, rank, nullspace
from .groebner import (
    DEFAULT_BUDGET,
    Budget,
    Ideal,
    NotZeroDimensionalError,
    localized_solution_count,
    saturate_by_element,
    solution_count,
)
from .pencil import PreconditionError, SymmetricPencil, generic_rank, minors, pencil_from_algebra


class EngineError(RuntimeError):
    pass


class IndexError_(ValueError):
    """Index has the wrong length or sum for the pencil."""


class DegenerateSliceError(EngineError):
    """Random slices kept producing a positive-dimensional system."""


class DisagreementError(EngineError):
    """Independent primes did not produce two matching values."""


class ClassificationError(EngineError):
    """Routes of a structural classifier disagree."""


@dataclass(frozen=True)
class EngineConfig:
    seed: int = 0
    primes: tuple[int, ...] | str = "random:2"
    max_retries: int = 5
    rank_samples: int = 8
    budget: Budget = DEFAULT_BUDGET
    validate: str = "shallow"           # "deep" recounts via explicit saturation
    saturation: str = "top"             # "top": order m-1 (or rank); "used": largest order sliced
    max_indices: int = 5000
    jobs: int = 1

    def __post_init__(self):
        if self.validate not in ("shallow", "deep"):
            raise ValueError("validate must be 'shallow' or 'deep'")
        if self.saturation not in ("top", "used"):
            raise ValueError("saturation must be 'top' or 'used'")
        if self.max_retries < 0:
            raise ValueError("max_retries must be nonnegative")

    def prime_list(self, count: int) -> list[int]:
        """The first ``count`` primes of the run: explicit ones first, then seeded draws."""
        explicit: list[int] = []
        want = 2
        if isinstance(self.primes, str):
            if not self.primes.startswith("random:"):
                raise ValueError(f"bad prime spec {self.primes!r}")
            want = int(self.primes.split(":", 1)[1])
        else:
            explicit = [int(p) for p in self.primes]
            for p in explicit:
                PrimeField(p)
        out = list(explicit)
        rng = random.Random(f"primes:{self.seed}")
        while len(out) < max(count, want):
            out.append(random_prime(rng, exclude=out))
        return out[:count]

    @property
    def runs_required(self) -> int:
        if isinstance(self.primes, str):
            return max(2, int(self.primes.split(":", 1)[1]))
        return max(2, len(self.primes))

    def to_json(self) -> dict:
        return {
            "seed": str(self.seed),
            "primes": self.primes if isinstance(self.primes, str) else [str(p) for p in self.primes],
            "max_retries": self.max_retries,
            "rank_samples": self.rank_samples,
            "budget": {"max_pairs": self.budget.max_pairs,
                       "max_monomial_ops": self.budget.max_monomial_ops},
            "validate": self.validate,
            "saturation": self.saturation,
        }


@dataclass(frozen=True)
class Run:
    prime: int
    attempt: int
    value: int
    truncated: bool
    resamples: int = 0
    deep_value: int | None = None


@dataclass(frozen=True)
class CharValue:
    index: tuple[int, ...]
    value: int
    method: str = "engine"              # engine | closed-form | recursion
    primes: tuple[int, ...] = ()
    agreement: bool = False
    truncated: bool = False
    runs: tuple[Run, ...] = ()

    def __post_init__(self):
        if self.value < 0:
            raise EngineError(f"negative characteristic number at {self.index}")

    def __int__(self):
        return self.value

    def to_json(self) -> dict:
        return {
            "index": list(self.index),
            "value": str(self.value),
            "method": self.method,
            "primes": [str(p) for p in self.primes],
            "agreement": self.agreement,
            "truncated": self.truncated,
            "runs": [
                {"prime": str(r.prime), "attempt": r.attempt, "value": str(r.value),
                 "truncated": r.truncated, "resamples": r.resamples,
                 **({"deep_value": str(r.deep_value)} if r.deep_value is not None else {})}
                for r in self.runs
            ],
        }


@dataclass(frozen=True)
class CharSequence:
    values: tuple[int, ...]
    entries: tuple[CharValue, ...] = ()
    method: str = "engine"
    assumptions: tuple[str, ...] = ()

    def __post_init__(self):
        if self.values and self.values[0] != 1:
            raise EngineError(f"characteristic sequence must start with 1, got {self.values}")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other):
        if isinstance(other, CharSequence):
            return self.values == other.values
        if isinstance(other, (tuple, list)):
            return self.values == tuple(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.values)

    def is_symmetric(self) -> bool:
        return self.values == self.values[::-1]

    def is_log_concave(self) -> bool:
        v = self.values
        return all(v[i] * v[i] >= v[i - 1] * v[i + 1] for i in range(1, len(v) - 1))

    def to_json(self) -> dict:
        return {
            "values": [str(v) for v in self.values],
            "method": self.method,
            "entries": [e.to_json() for e in self.entries],
            **({"assumptions": list(self.assumptions)} if self.assumptions else {}),
        }


def multinomial(d: int, b: Sequence[int]) -> int:
    out = factorial(d)
    for x in b:
        out //= factorial(x)
    return out


@dataclass(frozen=True)
class MultidegreePolynomial:
    degree: int
    values: dict            # index -> CharValue, colex order

    def coefficients(self) -> dict[tuple[int, ...], int]:
        """Coefficient of ``t^b``: multinomial(d; b) * c_b."""
        return {b: multinomial(self.degree, b) * v.value for b, v in self.values.items()}

    def table(self) -> dict[tuple[int, ...], int]:
        return {b: v.value for b, v in self.values.items()}

    def polynomial_string(self) -> str:
        terms = []
        for b, c in self.coefficients().items():
            if not c:
                continue
            mono = "*".join(
                (f"t{i + 1}" if e == 1 else f"t{i + 1}^{e}") for i, e in enumerate(b) if e
            ) or "1"
            terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) or "0"

    def reversal_symmetric(self) -> bool:
        t = self.table()
        return all(t.get(b[::-1]) == v for b, v in t.items())

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "values": [v.to_json() for v in self.values.values()],
            "polynomial": self.polynomial_string(),
        }


# ---------------------------------------------------------------------------
# cache


class _Cache:
    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            return self._data.get(key)

    def put(self, key, value):
        with self._lock:
            return self._data.setdefault(key, value)

    def clear(self):
        with self._lock:
            self._data.clear()

    def __len__(self):
        with self._lock:
            return len(self._data)


CACHE = _Cache()


# ---------------------------------------------------------------------------
# one run over one prime


def _as_pencil(obj) -> SymmetricPencil:
    if isinstance(obj, SymmetricPencil):
        return obj
    if isinstance(obj, FiniteAlgebra):
        return pencil_from_algebra(obj)
    raise TypeError(f"expected a pencil or an algebra, got {type(obj).__name__}")


def check_index(P: SymmetricPencil, b: Sequence[int]) -> tuple[int, ...]:
    b = tuple(b)
    m = P.size
    if len(b) != max(m - 1, 0):
        raise IndexError_(f"index {b} must have {m - 1} entries for a {m}x{m} pencil")
    if any((not isinstance(x, int)) or x < 0 for x in b):
        raise IndexError_(f"index {b} must consist of nonnegative integers")
    if sum(b) != P.nparams - 1:
        raise IndexError_(f"index sum {sum(b)} != {P.nparams - 1}")
    return b


def _random_invertible(n: int, F: PrimeField, rng) -> list[list[int]]:
    while True:
        M = [[F.random(rng) for _ in range(n)] for _ in range(n)]
        if rank(M, F) == n:
            return M


class _Slice:
    """A sampled slice system on an affine chart of the linear section."""

    def __init__(self, P: SymmetricPencil, b, order: int, rng):
        F = P.field
        D = P.nparams
        b1 = b[0] if b else 0
        self.ring = PolyRing([f"y{j}" for j in range(D - 1 - b1)], F)
        ring = self.ring
        # linear conditions from the 1x1 minors, then a random chart of their kernel
        if b1:
            ones = list(minors(P, 1).forms)
            rows = []
            for _ in range(b1):
                lam, _ = random_combination(ones, rng)
                rows.append(_linear_coeffs(lam, D))
            K = nullspace(rows, F, D)
            if len(K) != D - b1:
                raise _Resample("linear slices are dependent")
        else:
            K = [[1 if i == j else 0 for i in range(D)] for j in range(D)]
        R = _random_invertible(len(K), F, rng)
        basis = [[F(sum(R[a][c] * K[c][t] for c in range(len(K)))) for t in range(D)]
                 for a in range(len(K))]
        N = ring.nvars
        self.forms = [
            ring.linear_form([basis[j][t] for j in range(N)], basis[N][t]) for t in range(D)
        ]
        self.equations = []
        for i, bi in enumerate(b, start=1):
            if i == 1 or not bi:
                continue
            mins = list(minors(P, i).forms)
            if not mins:
                # every i-minor vanishes: no point has rank >= i
                self.equations.append(ring.one())
                continue
            for _ in range(bi):
                f, _ = random_combination(mins, rng)
                self.equations.append(f.substitute_linear(self.forms))
        if order >= 1:
            sat = list(minors(P, order).forms)
            if not sat:
                raise EngineError(f"all {order}x{order} minors vanish")
            g, _ = random_combination(sat, rng)
            self.g = g.substitute_linear(self.forms)
        else:
            self.g = ring.one()


class _Resample(Exception):
    pass


def _linear_coeffs(f, D: int) -> list[int]:
    out = [0] * D
    for exps, c in f.monomials():
        if sum(exps) != 1:
            raise EngineError("1x1 minors must be linear forms")
        out[exps.index(1)] = c
    return out


def _count_run(P: SymmetricPencil, b: tuple[int, ...], seed_text: str, cfg: EngineConfig) -> Run:
    prime = P.field.p
    resamples = 0
    for attempt in range(cfg.max_retries + 1):
        rng = random.Random(f"{seed_text}:{attempt}")
        k = generic_rank(P, rng, cfg.rank_samples)
        m = P.size
        if any(bi > 0 and i > k for i, bi in enumerate(b, start=1)):
            return Run(prime, attempt, 0, True, resamples)
        order = min(k, m - 1)
        if cfg.saturation == "used":
            used = [i for i, bi in enumerate(b, start=1) if bi]
            order = min(order, max(used, default=0))
        try:
            S = _Slice(P, b, order, rng)
            ideal = Ideal(S.equations, S.ring)
            value = localized_solution_count(ideal, S.g, cfg.budget)
            deep = None
            if cfg.validate == "deep":
                sat = saturate_by_element(ideal, S.g, cfg.budget)
                deep = solution_count(sat, cfg.budget)
                if deep != value:
                    raise EngineError(
                        f"deep validation mismatch at {b} over GF({prime}): {value} vs {deep}"
                    )
        except (_Resample, NotZeroDimensionalError):
            resamples += 1
            continue
        return Run(prime, attempt, value, order < m - 1, resamples, deep)
    raise DegenerateSliceError(
        f"index {b} over GF({prime}): slices degenerate after {cfg.max_retries + 1} samples"
    )


def _run_for(P: SymmetricPencil, b, prime: int, cfg: EngineConfig, attempt: int) -> Run:
    key = (prime, cfg.seed, P.fingerprint(), b, attempt, cfg.validate, cfg.saturation)
    hit = CACHE.get(key)
    if hit is not None:
        return hit
    Pp = P.over(prime)
    run = _count_run(Pp, b, f"{cfg.seed}:{prime}:{','.join(map(str, b))}:{attempt}", cfg)
    return CACHE.put(key, run)


def characteristic_number(P, b: Sequence[int], cfg: EngineConfig = EngineConfig()) -> CharValue:
    """``c_b`` of a pencil (or of an algebra's multiplication table)."""
    P = _as_pencil(P)
    b = check_index(P, b)
    need = cfg.runs_required
    total = need + cfg.max_retries
    primes = cfg.prime_list(total)
    runs: list[Run] = []
    for attempt, p in enumerate(primes):
        runs.append(_run_for(P, b, p, cfg, attempt))
        if len(runs) < need:
            continue
        votes = Counter(r.value for r in runs)
        value, count = votes.most_common(1)[0]
        if count >= need and count * 2 > len(runs):
            agreeing = tuple(r for r in runs if r.value == value)
            return CharValue(
                b, value, "engine", tuple(r.prime for r in runs),
                agreement=True,
                truncated=all(r.truncated for r in agreeing) if value == 0 else agreeing[0].truncated,
                runs=tuple(runs),
            )
    raise DisagreementError(
        f"index {b}: no value confirmed by {need} primes in {len(runs)} runs: "
        + ", ".join(f"GF({r.prime})={r.value}" for r in runs)
    )


def _job(args):
    P, b, cfg = args
    return characteristic_number(P, b, replace(cfg, jobs=1))


def _many(P: SymmetricPencil, indices, cfg: EngineConfig) -> list[CharValue]:
    if cfg.jobs > 1 and len(indices) > 1:
        workers = min(cfg.jobs, len(indices), os.cpu_count() or 1)
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(_job, [(P, b, cfg) for b in indices]))
    return [characteristic_number(P, b, cfg) for b in indices]


def characteristic_sequence(P, cfg: EngineConfig = EngineConfig()) -> CharSequence:
    """``mu_i = c_{(d-i, 0, ..., 0, i)}`` for ``i = 0..d``."""
    P = _as_pencil(P)
    d = P.nparams - 1
    idx = sequence_indices(P.size, d)
    vals = _many(P, idx, cfg)
    return CharSequence(tuple(v.value for v in vals), tuple(vals), "engine")


def colex_indices(total: int, parts: int) -> list[tuple[int, ...]]:
    return sorted(weak_compositions(total, parts), key=lambda b: b[::-1])


def multidegree(P, cfg: EngineConfig = EngineConfig()) -> MultidegreePolynomial:
    """Every characteristic number of the pencil, in colexicographic index order."""
    P = _as_pencil(P)
    d = P.nparams - 1
    idx = colex_indices(d, max(P.size - 1, 0))
    if len(idx) > cfg.max_indices:
        raise EngineError(f"{len(idx)} indices exceed max_indices={cfg.max_indices}")
    vals = _many(P, idx, cfg)
    return MultidegreePolynomial(d, {b: v for b, v in zip(idx, vals)})


def join_sequence(mu1, mu2) -> CharSequence:
    """Sequence of a direct sum of two pencils that each contain an invertible matrix:
    ``mu_m = sum_{k+l+1=m} mu1_k mu2_l + sum_{k+l=m} mu1_k mu2_l``."""
    a = tuple(int(x) for x in mu1)
    c = tuple(int(x) for x in mu2)
    if not a or not c:
        raise ValueError("join of an empty sequence")
    out = []
    for m in range(len(a) + len(c)):
        s = 0
        for k in range(len(a)):
            l1 = m - 1 - k
            if 0 <= l1 < len(c):
                s += a[k] * c[l1]
            l0 = m - k
            if 0 <= l0 < len(c):
                s += a[k] * c[l0]
        out.append(s)
    return CharSequence(tuple(out), (), "recursion",
                        ("both summands contain an invertible matrix",))


# ---------------------------------------------------------------------------
# classifiers


@dataclass(frozen=True)
class GorensteinVerdict:
    gorenstein: bool
    routes: dict
    evidence: dict

    def __bool__(self):
        return self.gorenstein


def classify_gorenstein(A: FiniteAlgebra, cfg: EngineConfig = EngineConfig(),
                        routes: Sequence[str] = ("determinant", "last-number", "symmetry")
                        ) -> GorensteinVerdict:
    """Gorenstein iff the multiplication table contains an invertible matrix.

    Optional routes: the last characteristic number equals 1, and the
    characteristic sequence is symmetric.  Disagreement is an error.
    """
    P = pencil_from_algebra(A)
    det = P.determinant()
    verdicts = {"determinant": not det.is_zero()}
    evidence: dict = {"determinant": str(det)}
    seq = None
    if "last-number" in routes or "symmetry" in routes:
        seq = characteristic_sequence(P, cfg)
        evidence["sequence"] = [str(v) for v in seq.values]
    if "last-number" in routes:
        last = seq.values[-1]
        if last not in (0, 1):
            raise ClassificationError(f"last characteristic number {last} is neither 0 nor 1")
        verdicts["last-number"] = last == 1
    if "symmetry" in routes:
        verdicts["symmetry"] = seq.is_symmetric()
    if len(set(verdicts.values())) != 1:
        raise ClassificationError(f"Gorenstein routes disagree for {A!r}: {verdicts}")
    return GorensteinVerdict(verdicts["determinant"], verdicts, evidence)


@dataclass(frozen=True)
class CIVerdict:
    complete_intersection: bool
    value: int | None
    bound: int
    index: tuple[int, ...]
    note: str = ""

    @property
    def slack(self) -> int | None:
        return None if self.value is None else self.bound - self.value

    def __bool__(self):
        return self.complete_intersection


def classify_complete_intersection(A: FiniteAlgebra, cfg: EngineConfig = EngineConfig()) -> CIVerdict:
    """Local ``A`` of dimension ``n`` is a complete intersection iff
    ``c_{0, n-1, 0, ..., 0} = 2^{n-1} - n`` (the value never exceeds the bound)."""
    try:
        maximal_ideal(A)
    except NotLocalError as exc:
        raise PreconditionError(f"complete-intersection test needs a local algebra: {exc}") from None
    n = A.dim
    bound = 2 ** (n - 1) - n
    if n < 3:
        return CIVerdict(True, None, bound, (),
                         "local algebras of dimension <= 2 are complete intersections")
    idx = tuple([0, n - 1] + [0] * (n - 3))
    value = characteristic_number(pencil_from_algebra(A), idx, cfg).value
    if value > bound:
        raise EngineError(f"c{idx} = {value} exceeds the bound {bound}")
    return CIVerdict(value == bound, value, bound, idx)
