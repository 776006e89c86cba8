#!/usr/bin/env python3
"""
Tests for the alarm data model: identity, queues, containment and time weights
"""

import itertools

import pytest

from src.alarm_model import (AlarmQueue, AlarmTuple, AlarmType, QueueKind, TimeWeight,
                             TypeSequence, classify_queue, classify_sequence, contains,
                             time_weight)
from src.errors import DomainError
from conftest import letter, make_seq


# =============================================================================
# IDENTITY
# =============================================================================

def test_alarm_type_identity_ignores_desc():
    first = AlarmType(1, 2, 7, desc="P1 link down")
    second = AlarmType(1, 2, 7, desc="P3 link down (repeat)")
    assert first == second
    assert hash(first) == hash(second)
    assert len({first, second}) == 1


def test_alarm_type_orders_by_class_instance_num():
    types = [AlarmType(2, 1, 1), AlarmType(1, 3, 1), AlarmType(1, 1, 9), AlarmType(1, 1, 2)]
    assert sorted(types) == [AlarmType(1, 1, 2), AlarmType(1, 1, 9), AlarmType(1, 3, 1),
                             AlarmType(2, 1, 1)]


def test_type_sequences_order_by_length_then_numeric_keys():
    ten = TypeSequence.of(AlarmType(1, 1, 10))
    two = TypeSequence.of(AlarmType(1, 1, 2))
    pair = TypeSequence.of(AlarmType(1, 1, 1), AlarmType(1, 1, 1))
    assert sorted([pair, ten, two]) == [two, ten, pair]


def test_alarm_type_key_round_trip_and_validation():
    alarm_type = AlarmType.parse_key("1.1.7")
    assert alarm_type == AlarmType(1, 1, 7)
    assert alarm_type.key == "1.1.7"
    with pytest.raises(DomainError):
        AlarmType.parse_key("1.1")
    with pytest.raises(DomainError):
        AlarmType(-1, 0, 0)


def test_tuple_is_canonical_and_deduplicated():
    item = AlarmTuple((letter('c'), letter('a'), letter('c')), 5)
    assert item.types == (letter('a'), letter('c'))
    assert len(item) == 2
    assert [event.time for event in item.events()] == [5, 5]
    with pytest.raises(DomainError):
        AlarmTuple((), 0)


def test_queue_times_must_strictly_increase():
    with pytest.raises(DomainError):
        AlarmQueue((AlarmTuple((letter('a'),), 3), AlarmTuple((letter('b'),), 3)))


def test_queue_summary():
    queue = AlarmQueue((AlarmTuple((letter('a'), letter('b')), 0), AlarmTuple((letter('a'),), 4)))
    summary = queue.summary()
    assert summary['tuples'] == 2
    assert summary['events'] == 3
    assert summary['distinct_types'] == 2
    assert summary['max_tuple_length'] == 2
    assert (summary['first_time'], summary['last_time']) == (0, 4)
    assert summary['kind'] == 'parallel'
    assert AlarmQueue().summary()['kind'] is None


# =============================================================================
# CLASSIFICATION
# =============================================================================

def test_classify_queue():
    serial = AlarmQueue((AlarmTuple((letter('a'),), 1), AlarmTuple((letter('b'),), 2)))
    parallel = AlarmQueue((AlarmTuple((letter('a'), letter('b')), 1), AlarmTuple((letter('c'),), 2)))
    single = AlarmQueue((AlarmTuple((letter('a'),), 1),))
    assert classify_queue(serial) == QueueKind.SERIAL
    assert classify_queue(parallel) == QueueKind.PARALLEL
    assert classify_queue(single) == QueueKind.SERIAL
    with pytest.raises(DomainError):
        classify_queue(AlarmQueue())


@pytest.mark.parametrize("gaps, expected", [
    ((5, 3), QueueKind.SERIAL),
    ((0, 3), QueueKind.PARALLEL),
    ((), QueueKind.SERIAL),
])
def test_classify_sequence(gaps, expected):
    assert classify_sequence(TimeWeight(gaps)) == expected


# =============================================================================
# CONTAINMENT
# =============================================================================

def test_contains_examples():
    assert contains(make_seq("ac"), make_seq("abc"))
    assert not contains(make_seq("ca"), make_seq("abc"))
    assert contains(make_seq("abc"), make_seq("abc"))
    assert not contains(make_seq("aa"), make_seq("abc"))
    assert not contains(make_seq("abcd"), make_seq("abc"))


def test_contains_is_reflexive_and_transitive_over_small_alphabet():
    sequences = [make_seq("".join(chars))
                 for m in range(1, 4)
                 for chars in itertools.product("ab", repeat=m)]
    for alpha in sequences:
        assert contains(alpha, alpha)
    for alpha, beta, gamma in itertools.product(sequences, repeat=3):
        if contains(alpha, beta) and contains(beta, gamma):
            assert contains(alpha, gamma)
        if contains(alpha, beta):
            assert len(alpha) <= len(beta)


def test_every_one_element_deletion_is_contained():
    gamma = make_seq("abca")
    deletions = gamma.deletions()
    assert len(deletions) == 4
    for sub in deletions:
        assert len(sub) == 3
        assert contains(sub, gamma)
    assert make_seq("a").deletions() == []


def test_type_sequence_helpers():
    gamma = make_seq("abc")
    assert gamma.prefix(2) == make_seq("ab")
    assert gamma.suffix(2) == make_seq("bc")
    assert gamma.key == "1.1.1,1.1.2,1.1.3"
    assert TypeSequence.parse(gamma.key) == gamma
    assert str(gamma) == "<1.1.1,1.1.2,1.1.3>"
    assert make_seq("aba").has_repeats()
    assert sorted([make_seq("b"), make_seq("ab"), make_seq("a")]) == \
        [make_seq("a"), make_seq("b"), make_seq("ab")]
    with pytest.raises(DomainError):
        TypeSequence(())


# =============================================================================
# TIME WEIGHT
# =============================================================================

def test_time_weight_examples():
    assert time_weight(make_seq("ab"), [(0, 10), (0, 20)]).gaps == (15.0,)
    assert time_weight(make_seq("abc"), [(0, 0, 5)]).gaps == (0.0, 5.0)
    assert time_weight(make_seq("a"), [(7,)]).gaps == ()


def test_time_weight_errors():
    with pytest.raises(DomainError):
        time_weight(make_seq("ab"), [])
    with pytest.raises(DomainError):
        time_weight(make_seq("ab"), [(0, 1, 2)])
    with pytest.raises(DomainError):
        time_weight(make_seq("ab"), [(5, 1)])


def test_zero_gap_matches_classify_parallel():
    weight = time_weight(make_seq("abc"), [(3, 3, 9), (10, 10, 12)])
    assert weight.gaps == (0.0, 4.0)
    assert classify_sequence(weight) == QueueKind.PARALLEL
