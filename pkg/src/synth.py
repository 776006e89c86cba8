"""
Synthetic alarm corpora with planted correlated sequences

Background alarms arrive on a cycled piecewise-constant rate schedule (bursts). Each
planted occurrence is a contiguous block: its elements in order, separated in time by
roughly the pattern's mean gap, with a few noise alarms interleaved between them. Noise
alarms never use the pattern's own types. The manifest records where every planted
element and noise alarm ended up in the emitted log.
"""

from typing import Dict, List

import numpy as np
from pydantic import BaseModel, Field

from .alarm_model import AlarmType
from .config import PlantedPattern, SynthSpec
from .errors import ConfigError
from .logger import get_logger

logger = get_logger('Synth')

GAP_JITTER = 0.2  # element gaps are drawn uniformly within +/-20% of the mean


class PatternManifest(BaseModel):
    pattern: List[str] = Field(..., description="Type keys of the planted sequence")
    elements: List[int] = Field(..., description="Alphabet indices of the planted sequence")
    max_noise: int
    occurrences: List[List[int]] = Field(..., description="Event positions of each occurrence")
    noise_positions: List[List[int]] = Field(..., description="Noise event positions per occurrence")
    noise_counts: List[int]
    mean_gaps: List[float] = Field(..., description="Observed mean gap per element slot (s)")
    expected_min_occur: Dict[int, int] = Field(
        ..., description="win_add -> occurrences whose noise fits in the search window"
    )


class Manifest(BaseModel):
    seed: int
    alphabet_size: int
    total_events: int
    distinct_types: int
    patterns: List[PatternManifest]

    def expected_min_occur(self, pattern_index, win_add):
        entry = self.patterns[pattern_index]
        return sum(1 for count in entry.noise_counts if count <= win_add)


def alarm_type_for(index):
    """Alphabet index -> alarm type; canonical type order follows index order."""
    return AlarmType(1 + index // 16, 1 + (index // 4) % 4, 1 + index % 4,
                     desc=f"P{1 + index % 4} synthetic alarm {index}")


def validate_spec(spec):
    planted = 0
    for pattern in spec.planted_patterns:
        if any(not 0 <= element < spec.alphabet_size for element in pattern.elements):
            raise ConfigError(f"pattern {pattern.elements} uses types outside the alphabet")
        if pattern.max_noise > 0 and len(set(pattern.elements)) >= spec.alphabet_size:
            raise ConfigError(f"pattern {pattern.elements} leaves no alarm types for noise")
        planted += pattern.occurrences * (len(pattern.elements) + pattern.max_noise)
    if planted > spec.total_events:
        raise ConfigError(
            f"planted occurrences need up to {planted} events but total_events is {spec.total_events}"
        )


class _RateSchedule:
    def __init__(self, segments, start):
        self.segments = segments
        self.start = start
        self.cycle = sum(duration for duration, _ in segments)

    def rate_at(self, when):
        offset = (when - self.start) % self.cycle
        for duration, rate in self.segments:
            if offset < duration:
                return rate
            offset -= duration
        return self.segments[-1][1]


def generate(spec):
    """
    Generate an ingest-compatible log and its ground-truth manifest

    Deterministic for a given spec (rng_seed included).

    Args:
        spec (SynthSpec): Alphabet, totals, planted patterns, noise and burst schedule

    Returns:
        tuple: (log bytes, Manifest)
    """
    validate_spec(spec)
    rng = np.random.default_rng(spec.rng_seed)
    schedule = _RateSchedule(spec.burstiness, spec.start_time)

    # noise per occurrence: each of the max_noise slots filled with probability noise_rate
    noise_counts = []
    for pattern in spec.planted_patterns:
        if len(pattern.elements) == 1 or pattern.max_noise == 0:
            noise_counts.append([0] * pattern.occurrences)
        else:
            draws = rng.binomial(pattern.max_noise, spec.noise_rate, size=pattern.occurrences)
            noise_counts.append([int(value) for value in draws])

    planted_events = sum(len(pattern.elements) * pattern.occurrences + sum(counts)
                         for pattern, counts in zip(spec.planted_patterns, noise_counts))
    background = spec.total_events - planted_events

    blocks = [None] * background
    for p, pattern in enumerate(spec.planted_patterns):
        blocks.extend((p, o) for o in range(pattern.occurrences))
    order = rng.permutation(len(blocks))

    # every alphabet type appears once in background before random draws begin
    head = rng.permutation(spec.alphabet_size)[:background]
    tail = rng.integers(0, spec.alphabet_size, size=max(0, background - len(head)))
    background_types = [int(value) for value in np.concatenate([head, tail])]

    # (time, alphabet index, role, pattern, occurrence)
    emitted = []
    clock = float(spec.start_time)
    last_second = None
    last_types = set()
    after_block = False
    background_cursor = 0

    def next_gap():
        rate = schedule.rate_at(clock)
        return int(rng.exponential(1.0 / rate))

    for block_index in order:
        block = blocks[int(block_index)]
        if block is None:
            type_index = background_types[background_cursor]
            background_cursor += 1
            gap = next_gap()
            if after_block:
                gap = max(1, gap)
            second = int(clock) + gap
            if second == last_second and type_index in last_types:
                second += 1
            if second != last_second:
                last_types = set()
            last_second = second
            last_types.add(type_index)
            emitted.append((second, type_index, 'background', None, None))
            clock = float(second)
            after_block = False
            continue

        p, o = block
        pattern = spec.planted_patterns[p]
        m = len(pattern.elements)
        second = int(clock) + max(1, next_gap())
        slots = [0] * max(m - 1, 1)
        excluded = set(pattern.elements)
        noise_pool = [index for index in range(spec.alphabet_size) if index not in excluded]
        for slot in rng.integers(0, max(m - 1, 1), size=noise_counts[p][o]):
            slots[int(slot)] += 1

        emitted.append((second, pattern.elements[0], 'element', p, o))
        for k in range(1, m):
            low = pattern.mean_gap_seconds * (1 - GAP_JITTER)
            high = pattern.mean_gap_seconds * (1 + GAP_JITTER)
            noise_here = slots[k - 1]
            gap = max(int(round(rng.uniform(low, high))), noise_here + 1)
            for i in range(noise_here):
                noise_type = noise_pool[int(rng.integers(0, len(noise_pool)))]
                noise_second = second + ((i + 1) * gap) // (noise_here + 1)
                emitted.append((noise_second, noise_type, 'noise', p, o))
            second += gap
            emitted.append((second, pattern.elements[k], 'element', p, o))

        clock = float(second)
        last_second = second
        last_types = {pattern.elements[-1]}
        after_block = True

    # flattened order: time, then canonical type order inside a second
    emitted.sort(key=lambda item: (item[0], item[1]))

    occurrences = [[[] for _ in range(pattern.occurrences)] for pattern in spec.planted_patterns]
    noise_positions = [[[] for _ in range(pattern.occurrences)] for pattern in spec.planted_patterns]
    element_times = [[[] for _ in range(pattern.occurrences)] for pattern in spec.planted_patterns]
    lines = []
    for position, (second, type_index, role, p, o) in enumerate(emitted):
        alarm_type = alarm_type_for(type_index)
        lines.append(f"{second},{alarm_type.object_class},{alarm_type.object_instance},"
                     f"{alarm_type.alarm_num},{alarm_type.desc}")
        if role == 'element':
            occurrences[p][o].append(position)
            element_times[p][o].append(second)
        elif role == 'noise':
            noise_positions[p][o].append(position)

    patterns = []
    for p, pattern in enumerate(spec.planted_patterns):
        m = len(pattern.elements)
        mean_gaps = []
        for k in range(m - 1):
            gaps = [times[k + 1] - times[k] for times in element_times[p]]
            mean_gaps.append(sum(gaps) / len(gaps))
        patterns.append(PatternManifest(
            pattern=[alarm_type_for(index).key for index in pattern.elements],
            elements=list(pattern.elements),
            max_noise=pattern.max_noise,
            occurrences=occurrences[p],
            noise_positions=noise_positions[p],
            noise_counts=noise_counts[p],
            mean_gaps=mean_gaps,
            expected_min_occur={
                win_add: sum(1 for count in noise_counts[p] if count <= win_add)
                for win_add in range(pattern.max_noise + 1)
            },
        ))

    manifest = Manifest(
        seed=spec.rng_seed,
        alphabet_size=spec.alphabet_size,
        total_events=len(emitted),
        distinct_types=len({type_index for _, type_index, _, _, _ in emitted}),
        patterns=patterns,
    )
    logger.info(f"✓ Generated {len(emitted)} events over {manifest.distinct_types} alarm types "
                f"({len(spec.planted_patterns)} planted patterns, seed {spec.rng_seed})")
    log_bytes = ("\n".join(lines) + "\n").encode('utf-8') if lines else b""
    return log_bytes, manifest


def demo_spec(seed, alphabet_size=30, total_events=3000, occurrences=50, noise_rate=0.2):
    """
    Default corpus of the report commands: four disjoint planted patterns of lengths 2 to 5,
    30 s mean gaps and up to four interleaved noise alarms per occurrence.
    """
    lengths = (2, 3, 4, 5)
    if sum(lengths) > alphabet_size - 1:
        raise ConfigError(f"demo corpus needs an alphabet of at least {sum(lengths) + 1} types")
    patterns = []
    first = 0
    for length in lengths:
        patterns.append(PlantedPattern(elements=tuple(range(first, first + length)),
                                       occurrences=occurrences, mean_gap_seconds=30.0, max_noise=4))
        first += length
    return SynthSpec(alphabet_size=alphabet_size, total_events=total_events,
                     planted_patterns=patterns, noise_rate=noise_rate, rng_seed=seed)
