import os
import random
import sys

import pytest

# Make `src` importable when tests run from any directory
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.alarm_model import AlarmQueue, AlarmTuple, AlarmType, TypeSequence
from src.ingest import ViewingWindow


def letter(ch):
    """'a' -> 1.1.1, 'b' -> 1.1.2, ...; canonical order follows the alphabet"""
    return AlarmType(1, 1, ord(ch) - ord('a') + 1, desc=f"alarm {ch}")


def make_window(tuples, times=None, window_id="w0"):
    """
    Build a viewing window from letters

    Args:
        tuples: 'acb' (serial, one type per tuple) or ['ab', 'c'] (one string per tuple)
        times: Tuple timestamps (defaults to 0, 1, 2, ...)
    """
    groups = [tuple(letter(ch) for ch in group) for group in tuples]
    times = list(times) if times is not None else list(range(len(groups)))
    queue = AlarmQueue(tuple(AlarmTuple(group, when) for group, when in zip(groups, times)))
    return ViewingWindow(queue.tuples, window_id=window_id)


def make_seq(text):
    return TypeSequence(tuple(letter(ch) for ch in text))


def random_window(rng, alphabet, max_events, max_tuple=3, serial=False):
    """Random window over the first `alphabet` letters with at most max_events events."""
    letters = "abcdef"[:alphabet]
    groups = []
    events = 0
    target = rng.randint(0, max_events)
    while events < target:
        size = 1 if serial else rng.randint(1, min(max_tuple, alphabet))
        size = min(size, target - events)
        groups.append("".join(sorted(rng.sample(letters, size))))
        events += size
    return make_window(groups)


def random_seq(rng, alphabet, m):
    letters = "abcdef"[:alphabet]
    return make_seq("".join(rng.choice(letters) for _ in range(m)))


@pytest.fixture
def window():
    return make_window


@pytest.fixture
def seq():
    return make_seq


@pytest.fixture
def rng():
    return random.Random(20260101)
