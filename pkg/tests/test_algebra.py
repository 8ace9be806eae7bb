from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from charnumbers.algebra import (
    AlgebraError,
    NotLocalError,
    SpecError,
    TableError,
    adapted_basis,
    chain,
    change_basis,
    cw,
    direct_sum,
    family,
    from_quotient,
    from_spec,
    from_table,
    is_local_at_origin,
    local_parts,
    maximal_ideal_filtration,
    parse_family_shorthand,
    smooth,
    socle,
    trivial,
)
from charnumbers.fieldpoly import PrimeField, rank

from conftest import BIG_PRIME

F = PrimeField(BIG_PRIME)

EXAMPLE_IDEAL = ["x^2", "y^2", "x*z", "y*z", "z^2 - x*y"]

# the displayed 5x5 multiplication table in the basis 1, x, y, z, z^2
EXAMPLE_MATRIX = [
    [0, 1, 2, 3, 4],
    [1, None, 4, None, None],
    [2, 4, None, None, None],
    [3, None, None, 4, None],
    [4, None, None, None, None],
]


def example_constants():
    out = []
    for i, row in enumerate(EXAMPLE_MATRIX):
        for j, k in enumerate(row):
            if k is not None:
                out.append((i, j, k, 1))
    return out


def dims(sub):
    return len(sub)


def test_chain_from_quotient():
    A = from_quotient(["x"], ["x^3"], F)
    assert A.dim == 3
    x, x2 = (0, 1, 0), (0, 0, 1)
    assert A.multiply(x, x) == x2
    assert A.multiply(x, x2) == (0, 0, 0)


def test_two_variable_quotient_basis():
    A = from_quotient(["x", "y"], ["x^2", "y^2"], F)
    assert A.labels == ("1", "x", "y", "x*y")


def test_worked_example_quotient():
    A = from_quotient(["x", "y", "z"], EXAMPLE_IDEAL, F)
    assert A.labels == ("1", "x", "y", "z", "z^2")
    e = lambda i: tuple(1 if k == i else 0 for k in range(5))
    assert A.multiply(e(1), e(2)) == e(4)
    assert A.multiply(e(3), e(3)) == e(4)
    nonzero = {(1, 2), (2, 1), (3, 3)}
    for i in range(1, 5):
        for j in range(1, 5):
            if (i, j) not in nonzero:
                assert A.multiply(e(i), e(j)) == (0,) * 5


def test_worked_example_table_equals_quotient():
    T = from_table(5, example_constants(), 0, F)
    Q = from_quotient(["x", "y", "z"], EXAMPLE_IDEAL, F)
    assert T.table == Q.table


def test_diagonal_table_is_smooth():
    consts = [(i, i, i, 1) for i in range(3)]
    # unit is the sum of the idempotents; express in basis (1, e1, e2) via from_table on the idempotent basis
    A = smooth(3, F)
    assert A.dim == 3
    for i in range(3):
        for j in range(3):
            ei = tuple(1 if k == i else 0 for k in range(3))
            ej = tuple(1 if k == j else 0 for k in range(3))
            assert A.multiply(ei, ej) == (ei if i == j else (0, 0, 0))
    assert A.unit == (1, 1, 1)
    assert consts  # the same constants through the direct table builder
    with pytest.raises(TableError):
        from_table(3, consts, 0, F)   # e_0 alone is not the unit


def test_broken_unit_is_reported():
    # e0 e0 = e0 but e0 e1 = e0 + e1, so e0 is not a unit
    consts = [(0, 0, 0, 1), (0, 1, 0, 1), (0, 1, 1, 1), (1, 0, 0, 1), (1, 0, 1, 1)]
    with pytest.raises(TableError) as e:
        from_table(2, consts, 0, F)
    assert "unit" in str(e.value)


def test_commutativity_and_associativity_violations():
    base = [(0, j, j, 1) for j in range(3)] + [(j, 0, j, 1) for j in range(1, 3)]
    with pytest.raises(TableError) as e:
        from_table(3, base + [(1, 2, 2, 1)], 0, F)
    assert "commutativity" in str(e.value)
    # x*x = y, x*y = 0, y*y = y: (x*x)*y = y but x*(x*y) = 0
    bad = base + [(1, 1, 2, 1), (2, 2, 2, 1)]
    with pytest.raises(TableError) as e:
        from_table(3, bad, 0, F)
    assert "associativity" in str(e.value)


def test_family_shapes():
    A = chain(4, F)
    assert A.dim == 4
    # Hankel pattern: e_i e_j = e_{i+j}
    for i in range(4):
        for j in range(4):
            ei = tuple(1 if k == i else 0 for k in range(4))
            ej = tuple(1 if k == j else 0 for k in range(4))
            want = tuple(1 if k == i + j else 0 for k in range(4))
            assert A.multiply(ei, ej) == want
    C = cw(3, F)
    assert C.dim == 4
    Q = from_quotient(["x0", "x1"], ["x0*x1", "x1^2 - x0^2", "x0^3"], F)
    assert Q.dim == 4 and Q.table == C.table
    T = trivial(2, F)
    assert T.dim == 3
    for i in (1, 2):
        for j in (1, 2):
            ei = tuple(1 if k == i else 0 for k in range(3))
            ej = tuple(1 if k == j else 0 for k in range(3))
            assert T.multiply(ei, ej) == (0, 0, 0)
    with pytest.raises(AlgebraError):
        family("cw", 1, F)
    with pytest.raises(AlgebraError):
        family("chain", 0, F)


def test_cw_relations_hold():
    C = cw(3, F)
    # basis 1, x0, x1, x0^2
    e = lambda i: tuple(1 if k == i else 0 for k in range(4))
    assert C.multiply(e(1), e(2)) == (0,) * 4
    assert C.multiply(e(1), e(1)) == C.multiply(e(2), e(2)) == e(3)
    assert C.multiply(e(3), e(1)) == (0,) * 4


def test_direct_sums():
    from charnumbers.algebra import from_spec

    k = from_spec({"type": "family", "name": "chain", "param": 1}, F)
    S = direct_sum(k, k)
    assert S.table == smooth(2, F).table and S.unit == smooth(2, F).unit
    B = direct_sum(chain(2, F), k)
    assert B.dim == 3
    Q = from_quotient(["x"], ["x^3 - x^2"], F)
    assert Q.dim == 3
    assert sorted(p.dim for p in B.parts) == [1, 2]
    assert is_local_at_origin(chain(2, F))
    assert not is_local_at_origin(Q)
    D = direct_sum(chain(2, F), chain(2, F))
    assert D.dim == 4 and len(D.parts) == 2


def test_direct_sum_associative():
    a, b, c = chain(2, F), cw(2, F), chain(1, F)
    left = direct_sum(direct_sum(a, b), c)
    right = direct_sum(a, direct_sum(b, c))
    assert left.table == right.table and left.unit == right.unit


def test_locality_at_origin():
    assert is_local_at_origin(chain(5, F))
    assert not is_local_at_origin(from_quotient(["x"], ["x^2 - 1"], F))
    assert is_local_at_origin(from_quotient(["x0", "x1"], ["x0*x1", "x1^2 - x0^2", "x0^3"], F))


def test_filtration_examples():
    f = maximal_ideal_filtration(chain(4, F))
    assert [len(s) for s in f] == [3, 2, 1]
    f = maximal_ideal_filtration(cw(3, F))
    assert [len(s) for s in f] == [3, 1]
    f = maximal_ideal_filtration(trivial(3, F))
    assert [len(s) for s in f] == [3]
    with pytest.raises(NotLocalError):
        maximal_ideal_filtration(smooth(2, F))


def test_adapted_basis_examples():
    for A in (chain(3, F), chain(5, F), cw(3, F), cw(4, F)):
        n = A.dim
        assert adapted_basis(A) == [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def test_adapted_basis_of_rebased_chain():
    A = chain(3, F)
    rng = random.Random(4)
    while True:
        # the new non-unit vectors stay inside the maximal ideal
        P = [[1, 0, 0]] + [[0, rng.randint(-3, 3), rng.randint(-3, 3)] for _ in range(2)]
        if rank(P, F) == 3:
            break
    B = change_basis(A, P)
    Q = adapted_basis(B)
    assert rank(Q, F) == 3
    C = change_basis(B, Q)
    f = maximal_ideal_filtration(C)
    # in an adapted basis each m^k is spanned by a tail of the basis vectors
    for sub in f:
        k = len(sub)
        tail = [[1 if j == i else 0 for j in range(3)] for i in range(3 - k, 3)]
        assert rank(list(sub) + tail, F) == k


def test_socle_examples():
    assert socle(chain(4, F)) == [(0, 0, 0, 1)]
    assert len(socle(trivial(3, F))) == 3
    A = from_quotient(["x", "y", "z"], EXAMPLE_IDEAL, F)
    assert [tuple(v) for v in socle(A)] == [(0, 0, 0, 0, 1)]


def test_table_with_non_nilpotent_element_is_not_local():
    # basis 1, e with e^2 = e
    consts = [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 1, 1)]
    A = from_table(2, consts, 0, F)
    with pytest.raises(NotLocalError):
        socle(A)


def test_spec_parsing():
    assert from_spec('{"type":"family","name":"chain","param":3}', F).dim == 3
    assert from_spec({"type": "quotient", "vars": ["x"], "ideal": ["x^2"]}, F).dim == 2
    assert from_spec({"type": "sum", "parts": [{"type": "family", "name": "chain", "param": 2}] * 2}, F).dim == 4
    assert from_spec({"type": "table", "dim": 2, "unit": 0,
                      "constants": [[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1]]}, F).dim == 2
    assert parse_family_shorthand("family:cw(4)") == {"type": "family", "name": "cw", "param": 4}
    with pytest.raises(SpecError):
        from_spec({"type": "bogus"}, F)
    with pytest.raises(AlgebraError):
        from_quotient(["x", "y"], ["x*y"], F)


def test_algebra_rebuilds_over_another_prime():
    p2 = 2_147_483_629
    A = cw(3, F).over(p2)
    assert A.field.p == p2 and A.dim == 4


def test_local_parts_of_sum():
    S = direct_sum(chain(3, F), cw(2, F))
    assert [p.dim for p in local_parts(S)] == [3, 3]


# ---------------------------------------------------------------------------
# properties


SUITE = [chain(2, F), chain(4, F), cw(2, F), cw(3, F), trivial(2, F), trivial(3, F),
         from_quotient(["x", "y", "z"], EXAMPLE_IDEAL, F),
         from_quotient(["x", "y"], ["x^2", "y^2"], F)]


@pytest.mark.parametrize("A", SUITE, ids=lambda A: A.name)
def test_filtration_graded_pieces_sum_to_dim_minus_one(A):
    f = maximal_ideal_filtration(A)
    sizes = [len(s) for s in f]
    assert sizes == sorted(sizes, reverse=True) and len(set(sizes)) == len(sizes)
    assert sizes[0] == A.dim - 1


@pytest.mark.parametrize("A", SUITE, ids=lambda A: A.name)
def test_socle_dimension_matches_determinant(A):
    from charnumbers.pencil import pencil_from_algebra

    goren = len(socle(A)) == 1
    assert goren == (not pencil_from_algebra(A).determinant().is_zero())


@given(st.lists(st.sampled_from(["c1", "c2", "c3", "w2", "t2"]), min_size=1, max_size=3))
def test_direct_sum_dimension_is_additive(names):
    build = {"c1": lambda: chain(1, F), "c2": lambda: chain(2, F), "c3": lambda: chain(3, F),
             "w2": lambda: cw(2, F), "t2": lambda: trivial(2, F)}
    parts = [build[n]() for n in names]
    S = direct_sum(*parts)
    assert S.dim == sum(p.dim for p in parts)
    assert sum(p.dim for p in S.parts) == S.dim
