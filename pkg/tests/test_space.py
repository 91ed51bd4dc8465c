from fractions import Fraction

import pytest
from hypothesis import given, settings

import oracle
from conftest import events, fam
from prodinf import (
    Event,
    FibreAssignment,
    GroundSpace,
    ProductSpace,
    enumerate_fibre_assignments,
    event_measure,
    fibre_measure,
)
from prodinf.space import SpaceError, as_fraction

F = Fraction


def test_ground_space_validation():
    with pytest.raises(SpaceError):
        GroundSpace([])
    with pytest.raises(SpaceError):
        GroundSpace(["1/2", "1/3"])
    with pytest.raises(SpaceError):
        GroundSpace(["3/2", "-1/2"])
    with pytest.raises(SpaceError):
        GroundSpace([0.5, 0.5])
    g = GroundSpace(["1/2", "0", "1/2"])
    assert g.null_atoms() == (1,)
    assert g.integer_weights() == ((1, 0, 1), 2)


def test_as_fraction_rejects_garbage():
    assert as_fraction(" 3/6 ") == F(1, 2)
    for bad in ("1/0", "x", 0.5, True, None):
        with pytest.raises(SpaceError):
            as_fraction(bad)


def test_rank_order_coordinate_zero_most_significant():
    space = ProductSpace(GroundSpace.uniform(3), 3)
    assert space.rank((1, 0, 2)) == 1 * 9 + 0 * 3 + 2
    assert [space.unrank(r) for r in range(space.size)] == list(space.outcomes())
    assert space.outcome_array().tolist() == [list(w) for w in space.outcomes()]
    with pytest.raises(SpaceError):
        space.rank((3, 0, 0))


def test_event_bitset_length_and_values():
    space = ProductSpace(GroundSpace.uniform(2), 2)
    with pytest.raises(SpaceError):
        Event(space, b"\x00\x01\x00")
    with pytest.raises(SpaceError):
        Event(space, b"\x00\x01\x00\x02")
    xor = Event(space, b"\x00\x01\x01\x00")
    assert list(xor.outcomes()) == [(0, 1), (1, 0)]
    assert xor.bit_string() == "0110"
    assert xor.complement().bit_string() == "1001"


@pytest.mark.parametrize("k", [1, 2, 3])
def test_event_measure_trivial(k):
    space = ProductSpace(GroundSpace.uniform(k), 2)
    assert event_measure(Event.full(space)) == 1
    assert event_measure(Event.empty(space)) == 0


def test_event_measure_majority3():
    # brute force: 4 of 8 equally likely outcomes have >= 2 ones
    assert event_measure(fam("majority", 3)) == F(1, 2)


def test_fibre_measure_examples():
    space = ProductSpace(GroundSpace.uniform(2), 2)
    dictator = Event.from_outcomes(space, [(1, 0), (1, 1)])
    assert fibre_measure(Event.full(space), FibreAssignment(0, (1,))) == 1
    for v in (0, 1):
        assert fibre_measure(dictator, FibreAssignment(0, (v,))) == F(1, 2)
    assert fibre_measure(dictator, FibreAssignment(1, (1,))) == 1
    assert fibre_measure(dictator, FibreAssignment(1, (0,))) == 0
    with pytest.raises(SpaceError):
        fibre_measure(dictator, FibreAssignment(2, (0,)))


def test_enumerate_fibre_assignments_examples():
    one = list(enumerate_fibre_assignments(ProductSpace(GroundSpace.uniform(2), 1), 0))
    assert one == [(FibreAssignment(0, ()), 1)]
    four = list(enumerate_fibre_assignments(ProductSpace(GroundSpace.uniform(2), 3), 0))
    assert len(four) == 4 and all(w == F(1, 4) for _, w in four)
    skew = list(enumerate_fibre_assignments(ProductSpace(GroundSpace(["1/3", "2/3"]), 2), 1))
    assert skew == [(FibreAssignment(1, (0,)), F(1, 3)), (FibreAssignment(1, (1,)), F(2, 3))]


def test_without_atom_relabels():
    g = GroundSpace(["1/2", "0", "1/2"])
    a = Event.from_outcomes(ProductSpace(g, 2), [(0, 0), (2, 1), (2, 2), (1, 1)])
    b = a.without_atom(1)
    assert b.ground.weights == (F(1, 2), F(1, 2))
    assert sorted(b.outcomes()) == [(0, 0), (1, 1)]
    with pytest.raises(SpaceError):
        a.without_atom(0)


@settings(max_examples=150, deadline=None)
@given(events())
def test_fubini_decomposition(a):
    p = event_measure(a)
    for e in range(a.n):
        total = sum(
            (w * fibre_measure(a, psi) for psi, w in enumerate_fibre_assignments(a.space, e)),
            F(0),
        )
        assert total == p


@settings(max_examples=150, deadline=None)
@given(events())
def test_measure_matches_oracle_and_is_monotone(a):
    acc = set(a.outcomes())
    assert event_measure(a) == oracle.measure(a.ground.weights, a.n, acc)
    # drop half of the accepted outcomes: measure cannot grow
    sub = Event.from_outcomes(a.space, sorted(acc)[::2])
    assert event_measure(sub) <= event_measure(a)


@settings(max_examples=100, deadline=None)
@given(events())
def test_fibre_measure_range(a):
    for e in range(a.n):
        for psi, _ in enumerate_fibre_assignments(a.space, e):
            assert 0 <= fibre_measure(a, psi) <= 1
            assert fibre_measure(Event.empty(a.space), psi) == 0
            assert fibre_measure(Event.full(a.space), psi) == 1
