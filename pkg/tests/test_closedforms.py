from __future__ import annotations

from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from charnumbers.closedforms import (
    ClosedFormError,
    binomial_sequence,
    bound_report,
    cw_closed_form,
    eulerian_relations,
    mixed_eulerian,
    mixed_eulerian_table,
    sequence_indices,
    trivial_closed_form,
    weak_compositions,
)


def test_mixed_eulerian_examples():
    assert mixed_eulerian((1, 1, 1)) == 6
    assert mixed_eulerian((2, 0)) == 1
    for n in range(1, 7):
        for i in range(n + 1):
            a = [0] * n
            a[0] += n - i
            a[-1] += i
            assert mixed_eulerian(a) == comb(n, i)


def test_mixed_eulerian_normalization_every_n():
    for n in range(1, 7):
        assert mixed_eulerian((1,) * n) == factorial(n)


def test_mixed_eulerian_table_sizes():
    for n in range(1, 6):
        assert len(mixed_eulerian_table(n)) == comb(2 * n - 1, n)


def test_mixed_eulerian_guards():
    with pytest.raises(ClosedFormError):
        mixed_eulerian((1, 2))
    with pytest.raises(ClosedFormError):
        mixed_eulerian_table(10)


def test_binomial_sequences():
    assert binomial_sequence(4) == (1, 3, 3, 1)
    assert binomial_sequence(1) == (1,)
    assert binomial_sequence(6) == (1, 5, 10, 10, 5, 1)


def test_cw_closed_form_examples():
    assert cw_closed_form(3, (0, 3, 0)) == 4
    assert cw_closed_form(3, (1, 1, 1)) == 4
    assert cw_closed_form(4, (0, 0, 0, 4)) == 1
    with pytest.raises(ClosedFormError):
        cw_closed_form(3, (1, 1))


def test_trivial_closed_form_examples():
    assert trivial_closed_form(2, (1, 1)) == 2
    assert trivial_closed_form(2, (0, 2)) == 0
    assert trivial_closed_form(4, (1, 3, 0, 0)) == 8


def test_sequence_indices_shape():
    assert sequence_indices(4, 3) == [(3, 0, 0), (2, 0, 1), (1, 0, 2), (0, 0, 3)]
    assert sequence_indices(2, 1) == [(1,), (1,)]


def test_bound_reports():
    t4 = mixed_eulerian_table(3)
    rep = bound_report(t4, "smooth-upper")
    assert rep.ok and not rep.strict
    cw3 = {a: cw_closed_form(3, a) for a in weak_compositions(3, 3)}
    rep = bound_report(cw3, "smooth-upper")
    assert rep.ok
    at = {c.index: c for c in rep.comparisons}[(0, 3, 0)]
    assert at.value == 4 and at.reference == mixed_eulerian((0, 3, 0))
    cw4 = {a: cw_closed_form(4, a) for a in weak_compositions(4, 4)}
    rep = bound_report(cw4, "cw-lower")
    assert rep.ok and not rep.strict
    with pytest.raises(ClosedFormError):
        bound_report(cw3, "sideways")


@pytest.mark.parametrize("n", range(1, 7))
def test_mixed_eulerian_reversal_symmetric_and_positive(n):
    t = mixed_eulerian_table(n)
    for a, v in t.items():
        assert v > 0
        assert t[a[::-1]] == v


@pytest.mark.parametrize("n", range(1, 7))
def test_every_relation_holds_on_solved_table(n):
    t = mixed_eulerian_table(n)
    for coeffs, rhs in eulerian_relations(n):
        assert sum(c * t[k] for k, c in coeffs.items()) == rhs


@pytest.mark.parametrize("d", range(2, 8))
def test_binomial_sequence_is_eulerian_slice(d):
    assert tuple(mixed_eulerian(a) for a in sequence_indices(d, d - 1)) == binomial_sequence(d)


@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), st.sampled_from(weak_compositions(n, n)))))
def test_cw_closed_form_is_reversal_symmetric(na):
    n, a = na
    assert cw_closed_form(n, a) == cw_closed_form(n, a[::-1])


@given(st.integers(2, 6).flatmap(lambda m: st.tuples(st.just(m), st.sampled_from(weak_compositions(m, m)))))
def test_trivial_closed_form_vanishes_without_first_factor(ma):
    m, a = ma
    if a[0] == 0:
        assert trivial_closed_form(m, a) == 0
