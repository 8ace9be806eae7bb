"""Buchberger's algorithm over prime fields, with the derived services needed
downstream: normal forms, zero-dimensionality, standard monomials, saturation
and counting solutions with multiplicity.

Internally a polynomial is a list of ``(key, coeff)`` pairs in decreasing key
order (see :mod:`charnumbers.fieldpoly` for the key encoding); basis elements
are kept monic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .fieldpoly import MonomialOrder, Monomial, Polynomial, PolyRing, random_combination


class ResourceLimitError(RuntimeError):
    """A Groebner computation ran past its pair or monomial-operation budget."""


class NotZeroDimensionalError(ValueError):
    pass


@dataclass(frozen=True)
class Budget:
    max_pairs: int = 200_000
    max_monomial_ops: int = 10_000_000


DEFAULT_BUDGET = Budget()


class Ideal:
    """Generators in a common ring.  Zero generators are dropped."""

    def __init__(self, generators: Sequence[Polynomial], ring: PolyRing | None = None):
        gens = list(generators)
        if ring is None:
            if not gens:
                raise ValueError("an ideal without generators needs an explicit ring")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise ValueError("generators live in different rings")
        self.ring = ring
        self.generators = tuple(g for g in gens if g)

    def __repr__(self):
        return f"Ideal([{', '.join(map(str, self.generators))}])"

    @classmethod
    def parse(cls, texts: Sequence[str], ring: PolyRing) -> "Ideal":
        return cls([ring.parse(t) for t in texts], ring)


class _Stats:
    __slots__ = ("pairs", "ops", "budget")

    def __init__(self, budget: Budget):
        self.pairs = 0
        self.ops = 0
        self.budget = budget

    def charge(self, ops: int):
        self.ops += ops
        if self.ops > self.budget.max_monomial_ops:
            raise ResourceLimitError(
                f"monomial-operation budget of {self.budget.max_monomial_ops} exceeded"
            )


def _reduce(acc: dict, G, LE, reducers, p: int, unkey, divides, stats: _Stats | None):
    """Fully reduce the polynomial held in ``acc`` (key -> coeff) by ``G``.

    Returns the remainder as a term list in decreasing key order.
    """
    heap = [-k for k in acc]
    heapq.heapify(heap)
    pop = heapq.heappop
    push = heapq.heappush
    rem = []
    ops = 0
    while heap:
        k = -pop(heap)
        c = acc.pop(k, None)
        if c is None:
            continue
        e = unkey(k)
        for j in reducers:
            if divides(LE[j], e):
                break
        else:
            rem.append((k, c))
            continue
        g = G[j]
        shift = k - g[0][0]
        mult = p - c
        ops += len(g)
        for kg, cg in g[1:]:
            kk = kg + shift
            v = acc.get(kk)
            if v is None:
                acc[kk] = mult * cg % p
                push(heap, -kk)
            else:
                v = (v + mult * cg) % p
                if v:
                    acc[kk] = v
                else:
                    del acc[kk]
    if stats is not None:
        stats.charge(ops)
    return rem


def _monic(terms, p):
    if not terms or terms[0][1] == 1:
        return terms
    inv = pow(terms[0][1], -1, p)
    return [(k, c * inv % p) for k, c in terms]


def _spoly_acc(gi, gj, ki, kj, kl, p) -> dict:
    si = kl - ki
    sj = kl - kj
    acc = {}
    for k, c in gi[1:]:
        acc[k + si] = c
    for k, c in gj[1:]:
        kk = k + sj
        v = (acc.get(kk, 0) - c) % p
        if v:
            acc[kk] = v
        else:
            acc.pop(kk, None)
    return acc


def _degree_of_packed(e: int) -> int:
    return e % 0xFFFF


def _buchberger_raw(gens, ring: PolyRing, budget: Budget, strategy: str):
    p = ring.field.p
    if p is None:
        raise ValueError("Groebner bases are only implemented over prime fields")
    codec = ring.codec
    unkey = codec.packed_of_key
    keyof = codec.key_of_packed
    divides = codec.divides
    lcm = codec.lcm
    stats = _Stats(budget)

    G: list = []          # all basis polynomials ever added
    LE: list[int] = []    # packed leading exponents
    LK: list[int] = []    # leading keys
    sugar: list[int] = []
    active: list[int] = []  # indices with pairwise non-divisible leading terms
    pairs: dict[tuple[int, int], tuple[int, int]] = {}  # (i, j) -> (lcm packed, lcm key)
    heap: list = []

    def pair_rank(i, j, L, KL):
        if strategy == "sugar":
            s = max(sugar[i] + _degree_of_packed(L) - _degree_of_packed(LE[i]),
                    sugar[j] + _degree_of_packed(L) - _degree_of_packed(LE[j]))
            return (s, KL)
        return (KL,)

    def add(h, s):
        t = len(G)
        Eh = unkey(h[0][0])
        G.append(h)
        LE.append(Eh)
        LK.append(h[0][0])
        sugar.append(s)
        # Gebauer-Moeller, criterion B on the old pairs
        for (i, j), (L, _) in list(pairs.items()):
            if divides(Eh, L):
                if lcm(LE[i], Eh) != L and lcm(LE[j], Eh) != L:
                    del pairs[(i, j)]
        # new pairs, criteria M and F, then the coprime criterion
        cand = []
        for i in active:
            L = lcm(LE[i], Eh)
            cand.append((keyof(L), L, i, (LE[i] & Eh) == 0 and L == LE[i] | Eh))
        cand.sort()
        kept: list = []
        by_lcm: dict[int, list] = {}
        for KL, L, i, coprime in cand:
            by_lcm.setdefault(L, []).append((i, coprime, KL))
        for L in sorted(by_lcm, key=keyof):
            if any(divides(L2, L) and L2 != L for L2 in kept):
                continue
            kept.append(L)
        for L in kept:
            group = by_lcm[L]
            if any(cp for _, cp, _ in group):
                continue
            i, _, KL = group[0]
            pairs[(i, t)] = (L, KL)
            heapq.heappush(heap, (pair_rank(i, t, L, KL), i, t))
        active[:] = [i for i in active if not divides(Eh, LE[i])]
        active.append(t)

    ordered = sorted((list(g) for g in gens), key=lambda g: g[0][0])
    for g in ordered:
        acc = dict(g)
        r = _reduce(acc, G, LE, active, p, unkey, divides, stats)
        if r:
            r = _monic(r, p)
            if r[0][0] == 0:
                return [[(0, 1)]]
            add(r, _degree_of_packed(unkey(r[0][0])))

    while heap:
        _, i, j = heapq.heappop(heap)
        info = pairs.pop((i, j), None)
        if info is None:
            continue
        stats.pairs += 1
        if stats.pairs > budget.max_pairs:
            raise ResourceLimitError(f"pair budget of {budget.max_pairs} exceeded")
        L, KL = info
        acc = _spoly_acc(G[i], G[j], LK[i], LK[j], KL, p)
        if not acc:
            continue
        r = _reduce(acc, G, LE, active, p, unkey, divides, stats)
        if r:
            r = _monic(r, p)
            if r[0][0] == 0:
                return [[(0, 1)]]
            s = max(sugar[i] + _degree_of_packed(L) - _degree_of_packed(LE[i]),
                    sugar[j] + _degree_of_packed(L) - _degree_of_packed(LE[j]))
            add(r, s)

    # active is already a minimal basis; interreduce tails
    basis = [G[i] for i in active]
    basis.sort(key=lambda g: g[0][0])
    bLE = [unkey(g[0][0]) for g in basis]
    reduced = []
    for idx, g in enumerate(basis):
        others = [j for j in range(len(basis)) if j != idx]
        tail = _reduce(dict(g[1:]), basis, bLE, others, p, unkey, divides, stats)
        reduced.append([g[0]] + tail)
    return reduced


class GroebnerBasis:
    """Reduced Groebner basis: monic elements sorted by increasing leading term."""

    def __init__(self, polys: Sequence[Polynomial], ring: PolyRing):
        self.ring = ring
        self.polys = tuple(polys)
        codec = ring.codec
        self._LE = [codec.packed_of_key(g.terms[0][0]) for g in self.polys]
        self._std = None

    @classmethod
    def _from_raw(cls, raw, ring: PolyRing) -> "GroebnerBasis":
        return cls([Polynomial(ring, tuple(g)) for g in raw], ring)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __eq__(self, other):
        return isinstance(other, GroebnerBasis) and self.ring == other.ring and self.polys == other.polys

    def __repr__(self):
        return f"GroebnerBasis([{', '.join(map(str, self.polys))}])"

    @property
    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial for g in self.polys]

    def is_unit_ideal(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].terms[0][0] == 0

    @property
    def is_zero_dimensional(self) -> bool:
        return is_zero_dimensional(self)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()

    def standard_monomials(self) -> list[Monomial]:
        return standard_monomials(self)

    def dimension(self) -> int:
        """Vector-space dimension of the quotient ring."""
        return len(standard_monomials(self))


def buchberger(ideal: Ideal, budget: Budget = DEFAULT_BUDGET, strategy: str = "normal") -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` in its ring's monomial order.

    ``strategy`` is ``"normal"`` (smallest lcm first) or ``"sugar"``.
    """
    if strategy not in ("normal", "sugar"):
        raise ValueError(f"unknown pair-selection strategy {strategy!r}")
    raw = _buchberger_raw([g.terms for g in ideal.generators], ideal.ring, budget, strategy)
    return GroebnerBasis._from_raw(raw, ideal.ring)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    if f.ring != G.ring:
        raise ValueError("polynomial and basis live in different rings")
    ring = G.ring
    raw = [list(g.terms) for g in G.polys]
    rem = _reduce(dict(f.terms), raw, G._LE, range(len(raw)), ring.field.p,
                  ring.codec.packed_of_key, ring.codec.divides, None)
    return Polynomial(ring, tuple(rem))


def _pure_power_vars(G: GroebnerBasis) -> set[int]:
    found = set()
    for e in G._LE:
        if e == 0:
            return set(range(G.ring.nvars))
        low = (e & -e).bit_length() - 1
        i = low // 16
        if e >> (16 * i) << (16 * i) == e and e < (1 << (16 * (i + 1))):
            found.add(i)
    return found


def is_zero_dimensional(G: GroebnerBasis) -> bool:
    """True iff every variable has a pure power among the leading terms."""
    return len(_pure_power_vars(G)) == G.ring.nvars


def standard_monomials(G: GroebnerBasis) -> list[Monomial]:
    """Monomials outside the leading-term ideal, in increasing monomial order."""
    if G._std is not None:
        return G._std
    if not is_zero_dimensional(G):
        raise NotZeroDimensionalError("quotient is infinite-dimensional")
    ring = G.ring
    codec = ring.codec
    if G.is_unit_ideal():
        G._std = []
        return G._std
    LE = G._LE
    divides = codec.divides
    seen = {0}
    stack = [0]
    steps = [1 << (16 * i) for i in range(ring.nvars)]
    while stack:
        e = stack.pop()
        for s in steps:
            m = e + s
            if m in seen:
                continue
            if any(divides(lt, m) for lt in LE):
                continue
            seen.add(m)
            stack.append(m)
    keyed = sorted(codec.key_of_packed(e) for e in seen)
    G._std = [Monomial(codec.exps(k)) for k in keyed]
    return G._std


def solution_count(ideal: Ideal | GroebnerBasis, budget: Budget = DEFAULT_BUDGET) -> int:
    """Dimension of the quotient (points counted with multiplicity)."""
    G = ideal if isinstance(ideal, GroebnerBasis) else buchberger(ideal, budget)
    return len(standard_monomials(G))


def _fresh_name(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "_"
    return name


def saturate_by_element(ideal: Ideal, g: Polynomial, budget: Budget = DEFAULT_BUDGET) -> Ideal:
    """``I : g^oo`` by eliminating ``t`` from ``I + (t*g - 1)`` in a block order.

    The returned generators form a Groebner basis in ``ideal.ring`` when that
    ring is ordered by degrevlex.
    """
    if not g:
        raise ValueError("cannot saturate by the zero polynomial")
    ring = ideal.ring
    t = _fresh_name("t", ring.variables)
    big = PolyRing((t,) + ring.variables, ring.field, MonomialOrder.block(1))
    shift = list(range(1, ring.nvars + 1))
    gens = [f.to_ring(big, shift) for f in ideal.generators]
    gens.append(big.gen(0) * g.to_ring(big, shift) - 1)
    G = buchberger(Ideal(gens, big), budget)
    back = [None] + list(range(ring.nvars))
    kept = [f.to_ring(ring, back) for f in G.polys if 0 not in f.variables_used()]
    return Ideal(kept, ring)


def localized_solution_count(ideal: Ideal, g: Polynomial, budget: Budget = DEFAULT_BUDGET) -> int:
    """``dim k[x]/(I : g^oo)`` computed as ``dim k[x, t]/(I + (t*g - 1))``.

    Both quotients are the coordinate ring of the part of ``V(I)`` where
    ``g`` does not vanish, so no elimination order is needed.
    Raises :class:`NotZeroDimensionalError` when the localized scheme is
    positive-dimensional.
    """
    ring = ideal.ring
    t = _fresh_name("t", ring.variables)
    big = PolyRing(ring.variables + (t,), ring.field)
    gens = [f.to_ring(big) for f in ideal.generators]
    gens.append(big.gen(ring.nvars) * g.to_ring(big) - 1)
    return solution_count(Ideal(gens, big), budget)


def saturate_by_ideal(ideal: Ideal, J: Sequence[Polynomial], rng, budget: Budget = DEFAULT_BUDGET) -> Ideal:
    """``I : J^oo`` approximated by saturating with one random combination of ``J``.

    Correct with high probability whenever only finitely many points matter.
    """
    g, _ = random_combination(list(J), rng)
    return saturate_by_element(ideal, g, budget)
