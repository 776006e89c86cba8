from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class TimestampFormat(str, Enum):
    EPOCH_SECONDS = "epoch_seconds"
    ISO8601 = "iso8601"


class WindowMode(str, Enum):
    WHOLE_LOG = "whole_log"
    TUMBLING = "tumbling"


class PruneMode(str, Enum):
    ALL_DELETIONS = "all_deletions"     # every one-element deletion must be frequent
    ENDPOINTS_ONLY = "endpoints_only"   # only the length-m prefix and suffix


class MeasureKind(str, Enum):
    CONFIDENCE = "confidence"    # P[XY]/P[X]
    CORRELATION = "correlation"  # |P(XY)/P(X) - P(Y)|


class SplitMode(str, Enum):
    PREFIX_ONLY = "prefix_only"
    ALL_SUBSEQUENCES = "all_subsequences"


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# =============================================================================
# INGEST
# =============================================================================

class IngestConfig(_Frozen):
    """How a delimited alarm log is read."""

    timestamp_format: TimestampFormat = Field(default=TimestampFormat.EPOCH_SECONDS)
    delimiter: str = Field(default=",", min_length=1, max_length=1)
    bucket_seconds: float = Field(
        default=1.0,
        gt=0.0,
        description="Events whose timestamps fall in the same bucket form one tuple",
    )

    @field_validator("delimiter")
    @classmethod
    def _delimiter_not_quote(cls, value):
        if value in ('"', "\n", "\r"):
            raise ValueError("delimiter cannot be a quote or a line break")
        return value


class WindowingSpec(_Frozen):
    """Partition of a queue into viewing windows, sized in tuples."""

    mode: WindowMode = Field(default=WindowMode.WHOLE_LOG)
    d: Optional[int] = Field(default=None, description="Tuples per tumbling window")

    @model_validator(mode="after")
    def _tumbling_needs_size(self):
        if self.mode == WindowMode.TUMBLING and (self.d is None or self.d < 1):
            raise ValueError("tumbling windows need d >= 1")
        return self

    @classmethod
    def from_flag(cls, value):
        """Build from the CLI form: 'whole' or a positive tuple count."""
        text = str(value).strip().lower()
        if text in ("whole", "whole_log"):
            return cls(mode=WindowMode.WHOLE_LOG)
        try:
            size = int(text)
        except ValueError:
            raise ValueError(f"--window expects 'whole' or an integer, got {value!r}")
        return cls(mode=WindowMode.TUMBLING, d=size)


# =============================================================================
# MINING
# =============================================================================

class MiningConfig(_Frozen):
    """Thresholds and search windows of the frequent-sequence loop."""

    min_occur: Optional[int] = Field(default=None, ge=1, description="Minimum occurring times")
    min_support: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    win_add: int = Field(default=0, ge=0, description="Noise tolerance per match")
    max_len: Optional[int] = Field(default=None, ge=1)
    prune_mode: PruneMode = Field(default=PruneMode.ALL_DELETIONS)
    allow_repeats: bool = Field(default=True, description="Allow a type to repeat inside a sequence")
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _exactly_one_threshold(self):
        if (self.min_occur is None) == (self.min_support is None):
            raise ValueError("set exactly one of min_occur or min_support")
        return self

    def meets_threshold(self, count, size_d):
        if self.min_occur is not None:
            return count >= self.min_occur
        return size_d > 0 and count / size_d >= self.min_support

    def describe(self):
        threshold = (f"min_occur={self.min_occur}" if self.min_occur is not None
                     else f"min_support={self.min_support}")
        return (f"{threshold}, win_add={self.win_add}, max_len={self.max_len}, "
                f"prune={self.prune_mode.value}")


class RuleConfig(_Frozen):
    min_conf: float = Field(default=0.0, ge=0.0)
    measure: MeasureKind = Field(default=MeasureKind.CORRELATION)
    split_mode: SplitMode = Field(default=SplitMode.PREFIX_ONLY)
    recount: bool = Field(default=True, description="Recount supports missing from the frequent set")


# =============================================================================
# SYNTHETIC CORPORA
# =============================================================================

class PlantedPattern(_Frozen):
    """A correlated sequence planted into a synthetic log."""

    elements: Tuple[int, ...] = Field(..., min_length=1, description="Alphabet indices in order")
    occurrences: int = Field(..., ge=1)
    mean_gap_seconds: float = Field(default=30.0, ge=1.0)
    max_noise: int = Field(default=0, ge=0, description="Noise events injected per occurrence, at most")

    @classmethod
    def from_flag(cls, value):
        """Parse 'IDX,IDX,...:OCCURRENCES:GAP:NOISE'."""
        parts = value.split(":")
        if len(parts) != 4:
            raise ValueError(f"--plant expects IDX,..:OCC:GAP:NOISE, got {value!r}")
        elements = tuple(int(item) for item in parts[0].split(",") if item.strip())
        return cls(elements=elements, occurrences=int(parts[1]),
                   mean_gap_seconds=float(parts[2]), max_noise=int(parts[3]))


class SynthSpec(_Frozen):
    alphabet_size: int = Field(..., ge=1)
    total_events: int = Field(..., ge=1)
    planted_patterns: List[PlantedPattern] = Field(default_factory=list)
    noise_rate: float = Field(default=0.2, ge=0.0, le=1.0,
                              description="Chance that each noise slot of an occurrence is filled")
    burstiness: List[Tuple[float, float]] = Field(
        default_factory=lambda: [(3600.0, 0.2), (600.0, 1.5)],
        description="Cycled (duration_seconds, events_per_second) segments",
    )
    start_time: int = Field(default=984614400, ge=0)
    rng_seed: int = Field(...)

    @field_validator("burstiness")
    @classmethod
    def _positive_segments(cls, value):
        if not value:
            raise ValueError("burst schedule needs at least one segment")
        for duration, rate in value:
            if duration <= 0 or rate <= 0:
                raise ValueError("burst segments need positive duration and rate")
        return value

    @classmethod
    def parse_burst(cls, value):
        """Parse 'DUR:RATE,DUR:RATE'."""
        segments = []
        for chunk in value.split(","):
            duration, rate = chunk.split(":")
            segments.append((float(duration), float(rate)))
        return segments


# =============================================================================
# CLI RUN
# =============================================================================

class RunConfig(_Frozen):
    """Everything one CLI invocation needs, validated before work begins."""

    subcommand: str
    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    records_path: Optional[Path] = None
    manifest_path: Optional[Path] = None
    ingest: IngestConfig = Field(default_factory=IngestConfig)
    windowing: WindowingSpec = Field(default_factory=WindowingSpec)
    mining: Optional[MiningConfig] = None
    rules: RuleConfig = Field(default_factory=RuleConfig)
    synth: Optional[SynthSpec] = None
    seed: Optional[int] = None
