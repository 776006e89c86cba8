import csv
import io
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import cached_property
from typing import Tuple

from .alarm_model import AlarmQueue, AlarmTuple, AlarmType
from .config import IngestConfig, TimestampFormat, WindowMode, WindowingSpec
from .errors import ConfigError, LogParseError
from .logger import get_logger

logger = get_logger('Ingest')

FIELD_COUNT = 5  # timestamp, object_class, object_instance, alarm_num, desc


@dataclass(frozen=True)
class ViewingWindow:
    """A contiguous run of tuples; size_d counts tuples, never seconds"""

    tuples: Tuple[AlarmTuple, ...]
    window_id: str = "w0"
    offset: int = 0
    size_d: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "size_d", len(self.tuples))

    def __len__(self):
        return self.size_d

    @cached_property
    def event_index(self):
        # Imported here: matcher depends on this module for the window type.
        from .matcher import EventIndex
        return EventIndex.build(self)


def _parse_timestamp(raw, config):
    text = raw.strip()
    if config.timestamp_format == TimestampFormat.EPOCH_SECONDS:
        value = float(text)
    else:
        stamp = datetime.fromisoformat(text.replace("Z", "+00:00"))
        if stamp.tzinfo is None:
            stamp = stamp.replace(tzinfo=timezone.utc)
        value = stamp.timestamp()
    if not math.isfinite(value) or value < 0:
        raise ValueError(f"timestamp {text!r} is negative or not finite")
    return value


def _bucket(value, bucket_seconds):
    bucketed = math.floor(value / bucket_seconds) * bucket_seconds
    # keep integral seconds as ints so keys and rendering stay exact
    return int(bucketed) if float(bucketed).is_integer() else bucketed


def parse_log(stream, config=None):
    """
    Parse a delimited alarm log into an alarm queue

    Events whose bucketed timestamps are equal merge into one tuple; an alarm type
    repeated inside one bucket is kept once. Input need not be sorted.

    Args:
        stream: Text or bytes (str, bytes, or a file-like object yielding either)
        config (IngestConfig): Format, delimiter and bucket size

    Returns:
        AlarmQueue: Tuples in strictly increasing time order
    """
    config = config or IngestConfig()
    text_lines = _as_lines(stream)

    records = []
    reader = csv.reader(text_lines, delimiter=config.delimiter, quotechar='"',
                        skipinitialspace=True)
    for row in reader:
        line_number = reader.line_num
        if not row or not "".join(row).strip():
            continue
        if row[0].lstrip().startswith("#"):
            continue
        if len(row) != FIELD_COUNT:
            raise LogParseError(line_number, config.delimiter.join(row),
                                f"expected {FIELD_COUNT} fields, found {len(row)}")
        try:
            when = _parse_timestamp(row[0], config)
            alarm_type = AlarmType(int(row[1]), int(row[2]), int(row[3]), desc=row[4])
        except (ValueError, TypeError) as e:
            raise LogParseError(line_number, config.delimiter.join(row), str(e)) from e
        records.append((_bucket(when, config.bucket_seconds), alarm_type))

    # stable sort keeps the first desc seen for a type inside a bucket
    records.sort(key=lambda record: record[0])

    tuples = []
    current_time = None
    current_types = {}
    for when, alarm_type in records:
        if when != current_time:
            if current_types:
                tuples.append(AlarmTuple(tuple(sorted(current_types)), current_time))
            current_time = when
            current_types = {}
        current_types.setdefault(alarm_type, alarm_type)
    if current_types:
        tuples.append(AlarmTuple(tuple(sorted(current_types)), current_time))

    queue = AlarmQueue(tuple(tuples))
    logger.debug(f"Parsed {len(records)} records into {len(queue)} tuples")
    return queue


def read_log(path, config=None):
    """Open an alarm log file and parse it."""
    with open(path, 'rb') as handle:
        queue = parse_log(handle, config)
    summary = queue.summary()
    logger.info(f"✓ Loaded {path}: {summary['events']} events, "
                f"{summary['distinct_types']} alarm types, {summary['tuples']} tuples")
    return queue


def _as_lines(stream):
    if isinstance(stream, str):
        return io.StringIO(stream, newline='')
    if isinstance(stream, bytes):
        stream = io.BytesIO(stream)
    return _decoded(stream)


def _decoded(lines):
    """Decode byte lines one at a time so a bad byte is reported with its line number."""
    for line_number, line in enumerate(lines, start=1):
        if isinstance(line, bytes):
            try:
                line = line.decode('utf-8')
            except UnicodeDecodeError as e:
                raise LogParseError(line_number, line.decode('utf-8', errors='replace'),
                                    f"not valid UTF-8 ({e.reason} at byte {e.start})") from e
        yield line


def windows(queue, spec=None):
    """
    Partition a queue into viewing windows

    Args:
        queue (AlarmQueue): Parsed queue
        spec (WindowingSpec): whole_log, or tumbling windows of d tuples

    Returns:
        list: ViewingWindow objects in queue order
    """
    spec = spec or WindowingSpec()
    if spec.mode == WindowMode.WHOLE_LOG:
        return [ViewingWindow(queue.tuples, window_id="w0", offset=0)]

    d = spec.d
    if d is None or d <= 0:
        raise ConfigError(f"tumbling window size must be positive, got {d}")
    result = []
    for number, start in enumerate(range(0, len(queue.tuples), d)):
        result.append(ViewingWindow(queue.tuples[start:start + d],
                                    window_id=f"w{number}", offset=start))
    return result
