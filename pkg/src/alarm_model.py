import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

from .errors import DomainError


class QueueKind(str, Enum):
    SERIAL = "serial"
    PARALLEL = "parallel"


@dataclass(frozen=True, order=True)
class AlarmType:
    """
    Identity of an alarm kind

    Equality, hashing and ordering use (object_class, object_instance, alarm_num);
    desc is payload (priority + description) and never part of the identity.
    """

    object_class: int
    object_instance: int
    alarm_num: int
    desc: str = field(default="", compare=False, hash=False, repr=False)

    def __post_init__(self):
        for name in ("object_class", "object_instance", "alarm_num"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be non-negative")

    @property
    def key(self):
        return f"{self.object_class}.{self.object_instance}.{self.alarm_num}"

    @classmethod
    def parse_key(cls, text):
        parts = text.strip().split(".")
        if len(parts) != 3:
            raise DomainError(f"alarm type key must look like class.instance.num, got {text!r}")
        return cls(*(int(part) for part in parts))

    def __str__(self):
        return self.key


@dataclass(frozen=True)
class AlarmEvent:
    alarm_type: AlarmType
    time: float

    def __post_init__(self):
        if not math.isfinite(self.time) or self.time < 0:
            raise DomainError(f"event time must be finite and non-negative, got {self.time}")


@dataclass(frozen=True)
class AlarmTuple:
    """Alarm types that occur at the same (bucketed) time, kept in canonical order"""

    types: Tuple[AlarmType, ...]
    time: float

    def __post_init__(self):
        if not self.types:
            raise DomainError("an alarm tuple holds at least one alarm type")
        canonical = tuple(sorted(set(self.types)))
        if canonical != self.types:
            object.__setattr__(self, "types", canonical)

    def __len__(self):
        return len(self.types)

    def events(self):
        return [AlarmEvent(alarm_type, self.time) for alarm_type in self.types]


@dataclass(frozen=True)
class AlarmQueue:
    tuples: Tuple[AlarmTuple, ...] = ()

    def __post_init__(self):
        for previous, current in zip(self.tuples, self.tuples[1:]):
            if not previous.time < current.time:
                raise DomainError(
                    f"alarm queue times must strictly increase ({previous.time} >= {current.time})"
                )

    def __len__(self):
        return len(self.tuples)

    @property
    def event_count(self):
        return sum(len(item) for item in self.tuples)

    def distinct_types(self):
        return {alarm_type for item in self.tuples for alarm_type in item.types}

    def summary(self):
        """
        Describe the queue for logs and CLI output

        Returns:
            dict: tuple/event/type counts, max tuple length and time span
        """
        info = {
            'tuples': len(self.tuples),
            'events': self.event_count,
            'distinct_types': len(self.distinct_types()),
            'max_tuple_length': max((len(item) for item in self.tuples), default=0),
            'first_time': self.tuples[0].time if self.tuples else None,
            'last_time': self.tuples[-1].time if self.tuples else None,
            'kind': None,
        }
        if self.tuples:
            info['kind'] = classify_queue(self).value
        return info


@dataclass(frozen=True)
class TypeSequence:
    """An ordered alarm type sequence, the unit of candidates and frequent patterns"""

    elements: Tuple[AlarmType, ...]

    def __post_init__(self):
        if not isinstance(self.elements, tuple):
            object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise DomainError("a type sequence has at least one element")

    @classmethod
    def of(cls, *elements):
        return cls(tuple(elements))

    @classmethod
    def parse(cls, text):
        """Build from comma-joined type keys, e.g. '1.1.7,1.1.9'."""
        return cls(tuple(AlarmType.parse_key(part) for part in text.split(",")))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, index):
        return self.elements[index]

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (len(self.elements), self.elements)

    @property
    def key(self):
        return ",".join(item.key for item in self.elements)

    def prefix(self, k):
        return TypeSequence(self.elements[:k])

    def suffix(self, k):
        return TypeSequence(self.elements[len(self.elements) - k:])

    def extend(self, alarm_type):
        return TypeSequence(self.elements + (alarm_type,))

    def deletions(self):
        """All sequences obtained by deleting exactly one element."""
        if len(self.elements) == 1:
            return []
        return [TypeSequence(self.elements[:i] + self.elements[i + 1:])
                for i in range(len(self.elements))]

    def has_repeats(self):
        return len(set(self.elements)) != len(self.elements)

    def __str__(self):
        return "<" + ",".join(item.key for item in self.elements) + ">"


@dataclass(frozen=True)
class TimeWeight:
    gaps: Tuple[float, ...]

    def __len__(self):
        return len(self.gaps)


# =============================================================================
# STRUCTURAL OPERATIONS
# =============================================================================

def classify_queue(queue):
    """Serial iff every tuple holds one alarm type, parallel otherwise."""
    if not queue.tuples:
        raise DomainError("cannot classify an empty alarm queue")
    if all(len(item) == 1 for item in queue.tuples):
        return QueueKind.SERIAL
    return QueueKind.PARALLEL


def classify_sequence(weight):
    # m = 1 has no gaps and is serial vacuously
    if all(gap > 0 for gap in weight.gaps):
        return QueueKind.SERIAL
    return QueueKind.PARALLEL


def contains(alpha, beta):
    """
    True iff alpha is an order-preserving, not necessarily contiguous, subsequence of beta

    Args:
        alpha (TypeSequence): Candidate subsequence
        beta (TypeSequence): Containing sequence

    Returns:
        bool: Containment result
    """
    if len(alpha) > len(beta):
        return False
    remaining = iter(beta.elements)
    return all(any(item == other for other in remaining) for item in alpha.elements)


def time_weight(seq, matches):
    """
    Mean inter-element gaps of a sequence over its recorded matches

    Args:
        seq (TypeSequence): The matched sequence (length m)
        matches (list): Timestamp vectors, each of length m and non-decreasing

    Returns:
        TimeWeight: m-1 mean gaps in seconds
    """
    if not matches:
        raise DomainError(f"time weight of {seq} is undefined without matches")
    m = len(seq)
    totals = [0.0] * (m - 1)
    for vector in matches:
        if len(vector) != m:
            raise DomainError(f"match vector {tuple(vector)} does not have {m} timestamps")
        for k in range(m - 1):
            gap = vector[k + 1] - vector[k]
            if gap < 0:
                raise DomainError(f"match vector {tuple(vector)} is not time ordered")
            totals[k] += gap
    return TimeWeight(tuple(total / len(matches) for total in totals))
