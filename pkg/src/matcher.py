from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .alarm_model import AlarmType, time_weight
from .errors import DomainError


ORACLE_EVENT_LIMIT = 32


@dataclass(frozen=True)
class SearchWindows:
    """Search window sizes in events: win_freq is the sequence length, win_seq adds the noise budget"""

    win_freq: int
    win_add: int

    def __post_init__(self):
        if self.win_freq < 1:
            raise DomainError("win_freq is the candidate length and must be >= 1")
        if self.win_add < 0:
            raise DomainError("win_add must be non-negative")

    @property
    def win_seq(self):
        return self.win_freq + self.win_add


@dataclass(frozen=True)
class OccurrenceReport:
    """
    Result of one noise-tolerant scan

    matches holds one vector of (event index, timestamp) pairs per occurrence; event
    indices are positions in the window's flattened event list.
    """

    count: int
    matches: Tuple[Tuple[Tuple[int, float], ...], ...]
    size_d: int
    win_seq: int
    steps: int = 0

    @property
    def support(self):
        if self.size_d == 0:
            return 0.0
        return self.count / self.size_d

    def timestamps(self):
        return [tuple(when for _, when in vector) for vector in self.matches]

    def time_weight(self, seq):
        return time_weight(seq, self.timestamps())


@dataclass
class EventCursor:
    """A flat position over a window's events, within [0, event_count]"""

    position: int
    limit: int

    def __post_init__(self):
        if not 0 <= self.position <= self.limit:
            raise DomainError(f"cursor {self.position} outside [0, {self.limit}]")

    def exhausted(self):
        return self.position >= self.limit


@dataclass(frozen=True)
class EventIndex:
    """Flattened events of one window plus per-type position lists"""

    types: Tuple[AlarmType, ...]
    times: Tuple[float, ...]
    positions: Dict[AlarmType, List[int]] = field(hash=False, compare=False)
    size_d: int = 0
    max_tuple_length: int = 0

    @classmethod
    def build(cls, window):
        types = []
        times = []
        positions = {}
        for item in window.tuples:
            for alarm_type in item.types:
                positions.setdefault(alarm_type, []).append(len(types))
                types.append(alarm_type)
                times.append(item.time)
        return cls(tuple(types), tuple(times), positions, window.size_d,
                   max((len(item) for item in window.tuples), default=0))

    def __len__(self):
        return len(self.types)


def flatten(window):
    """
    Concatenate a window's tuples into one event list

    Tuples keep their time order and each tuple contributes its types in canonical order.
    """
    return [event for item in window.tuples for event in item.events()]


def robust_count(alpha, window, win_add):
    """
    Count noise-tolerant occurrences of a sequence in a viewing window

    The start pointer visits events of the first element in order. From a start, each
    later element is matched at its earliest event after the previous match, inside the
    m + win_add events beginning at the start. A full match counts once and
    the scan restarts at the first start after the last matched event; a failed attempt
    moves to the next start.

    Args:
        alpha (TypeSequence): Sequence of length m >= 1
        window (ViewingWindow): Window to scan
        win_add (int): Noise tolerance (>= 0)

    Returns:
        OccurrenceReport: count, match vectors, support and step count
    """
    windows = SearchWindows(len(alpha), win_add)
    index = window.event_index
    m = windows.win_freq
    win_seq = windows.win_seq
    total = len(index)

    element_positions = [index.positions.get(alarm_type) for alarm_type in alpha.elements]
    if any(positions is None for positions in element_positions):
        return OccurrenceReport(0, (), window.size_d, win_seq)

    starts = element_positions[0]
    matches = []
    steps = 0
    i = 0
    while i < len(starts):
        start = starts[i]
        # at least m events, the start included, must remain
        if start + m > total:
            break
        end = start + win_seq
        vector = [start]
        previous = start
        steps += 1
        for positions in element_positions[1:]:
            steps += 1
            j = bisect_right(positions, previous)
            if j == len(positions) or positions[j] >= end:
                vector = None
                break
            previous = positions[j]
            vector.append(previous)

        if vector is None:
            i += 1
            continue
        matches.append(tuple((position, index.times[position]) for position in vector))
        i = bisect_right(starts, previous, lo=i + 1)

    return OccurrenceReport(len(matches), tuple(matches), window.size_d, win_seq, steps)


def support(alpha, window, win_add):
    """Occurrence count over the window's tuple count."""
    if window.size_d == 0:
        raise DomainError("support is undefined on an empty viewing window")
    return robust_count(alpha, window, win_add).count / window.size_d


def oracle_count(alpha, window, win_add, limit=ORACLE_EVENT_LIMIT):
    """
    Reference interpreter of the noise-tolerant scan, one pointer step at a time

    Only for tests: it walks the flattened events linearly and refuses windows with
    more than `limit` events.
    """
    events = [event.alarm_type for event in flatten(window)]
    if len(events) > limit:
        raise DomainError(f"oracle accepts at most {limit} events, window has {len(events)}")
    m = len(alpha)
    win_seq = m + win_add
    n = len(events)

    def first_start(frm):
        cursor = EventCursor(min(frm, n), n)
        while not cursor.exhausted():
            if events[cursor.position] == alpha[0]:
                return cursor.position
            cursor.position += 1
        return None

    c_count = 0
    ptr_seq = first_start(0)
    while ptr_seq is not None and ptr_seq + m <= n:
        ptr_temp = ptr_seq
        last = ptr_seq + win_seq
        p = 0
        while p < m:
            found = None
            scan = ptr_temp
            while scan < last and scan < n:
                if events[scan] == alpha[p]:
                    found = scan
                    break
                scan += 1
            if found is None:
                break
            ptr_temp = found + 1
            p += 1
        if p == m:
            c_count += 1
            ptr_seq = first_start(ptr_temp)
        else:
            ptr_seq = first_start(ptr_seq + 1)
    return c_count


def naive_contiguous_count(alpha, window):
    """Greedy non-overlapping count of alpha as a contiguous run of events."""
    events = [event.alarm_type for event in flatten(window)]
    pattern = list(alpha.elements)
    m = len(pattern)
    count = 0
    i = 0
    while i + m <= len(events):
        if events[i:i + m] == pattern:
            count += 1
            i += m
        else:
            i += 1
    return count


def complexity_bound(alpha, window, win_add):
    """Worst-case work of one scan, with w the widest tuple: w * d * (1 + first-element support * win_seq / w)."""
    index = window.event_index
    d = window.size_d
    big_m = max(index.max_tuple_length, 1)
    first = len(index.positions.get(alpha[0], ()))
    supp = first / d if d else 0.0
    win_seq = len(alpha) + win_add
    return big_m * d * (1 + supp * win_seq / big_m)

