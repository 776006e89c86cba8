from dataclasses import dataclass
from itertools import combinations
from typing import Tuple

from .alarm_model import TypeSequence
from .config import MeasureKind, SplitMode
from .errors import DomainError
from .logger import get_logger
from .matcher import robust_count

logger = get_logger('Rules')


@dataclass(frozen=True)
class CorrelationRule:
    """
    antecedent --delta_t--> consequent [conf, supp, window]

    Both measures are kept; measure_value is the one selected by measure_kind.
    temporal is False when the antecedent is not a prefix of the parent sequence.
    """

    antecedent: TypeSequence
    consequent: TypeSequence
    delta_t: float
    supp: float
    measure_value: float
    measure_kind: MeasureKind
    window_id: str
    confidence: float
    correlation: float
    supp_antecedent: float
    supp_consequent: float
    parent: TypeSequence
    split: Tuple[int, ...]
    temporal: bool = True


def measure_confidence(supp_xy, supp_x):
    """P[XY] / P[X]"""
    if supp_x <= 0:
        raise DomainError("confidence is undefined when the antecedent support is zero")
    return supp_xy / supp_x


def measure_correlation(supp_xy, supp_x, supp_y):
    """|P(XY)/P(X) - P(Y)|"""
    return abs(measure_confidence(supp_xy, supp_x) - supp_y)


def _splits(m, split_mode):
    if split_mode == SplitMode.PREFIX_ONLY:
        for j in range(1, m):
            yield tuple(range(j))
        return
    for size in range(1, m):
        for positions in combinations(range(m), size):
            yield positions


def _delta_t(report, antecedent_positions, consequent_positions, temporal):
    last_antecedent = max(antecedent_positions)
    first_consequent = min(consequent_positions)
    gaps = []
    for stamps in report.timestamps():
        gap = stamps[first_consequent] - stamps[last_antecedent]
        gaps.append(gap if temporal else abs(gap))
    if not gaps:
        return 0.0
    return sum(gaps) / len(gaps)


class _SupportTable:
    """Relative supports looked up in the frequent set, recounted on the window if allowed"""

    def __init__(self, freq, window):
        self.freq = freq
        self.window = window
        self.recounted = {}

    def get(self, seq):
        report = self.freq.lookup(seq)
        if report is not None:
            return report.support
        if self.window is None:
            return None
        if seq not in self.recounted:
            self.recounted[seq] = robust_count(seq, self.window, self.freq.config.win_add).support
        return self.recounted[seq]


def gen_rules(freq, min_conf=0.0, kind=MeasureKind.CORRELATION,
              split_mode=SplitMode.PREFIX_ONLY, window=None):
    """
    Generate correlation rules beta -> (alpha - beta) from a frequent set

    Args:
        freq (FrequentSet): Mined levels of one window
        min_conf (float): Threshold on the selected measure (>=)
        kind (MeasureKind): confidence or correlation
        split_mode (SplitMode): prefix_only, or every proper subsequence as antecedent
        window (ViewingWindow): When given, supports missing from freq are recounted

    Returns:
        list: CorrelationRule objects in canonical order
    """
    if min_conf < 0:
        raise DomainError("min_conf must be non-negative")
    table = _SupportTable(freq, window)
    rules = []
    skipped = 0

    for alpha in freq.sequences():
        m = len(alpha)
        if m < 2:
            continue
        report = freq.lookup(alpha)
        supp_xy = report.support
        for antecedent_positions in _splits(m, split_mode):
            consequent_positions = tuple(i for i in range(m) if i not in antecedent_positions)
            antecedent = TypeSequence(tuple(alpha[i] for i in antecedent_positions))
            consequent = TypeSequence(tuple(alpha[i] for i in consequent_positions))
            supp_x = table.get(antecedent)
            supp_y = table.get(consequent)
            if supp_x is None or supp_y is None:
                missing = antecedent if supp_x is None else consequent
                logger.warning(f"⚠ Skipping {antecedent} -> {consequent}: support of {missing} "
                               f"unavailable and recount disabled")
                skipped += 1
                continue
            if supp_x == 0:
                logger.warning(f"⚠ Skipping {antecedent} -> {consequent}: antecedent never occurs")
                skipped += 1
                continue

            confidence = measure_confidence(supp_xy, supp_x)
            correlation = measure_correlation(supp_xy, supp_x, supp_y)
            value = confidence if kind == MeasureKind.CONFIDENCE else correlation
            if value < min_conf:
                continue

            temporal = antecedent_positions == tuple(range(len(antecedent_positions)))
            rules.append(CorrelationRule(
                antecedent=antecedent,
                consequent=consequent,
                delta_t=_delta_t(report, antecedent_positions, consequent_positions, temporal),
                supp=supp_xy,
                measure_value=value,
                measure_kind=kind,
                window_id=freq.window_id,
                confidence=confidence,
                correlation=correlation,
                supp_antecedent=supp_x,
                supp_consequent=supp_y,
                parent=alpha,
                split=antecedent_positions,
                temporal=temporal,
            ))

    logger.info(f"✓ {freq.window_id}: {len(rules)} rules at {kind.value} >= {min_conf}"
                + (f" ({skipped} skipped)" if skipped else ""))
    return rules


def render_rule(rule):
    """Text form: 'e1,e2 --12.5s--> e3 [conf=q%, supp=p%, win=W]'."""
    antecedent = ",".join(item.key for item in rule.antecedent)
    consequent = ",".join(item.key for item in rule.consequent)
    return (f"{antecedent} --{rule.delta_t:.1f}s--> {consequent} "
            f"[conf={rule.measure_value * 100:.2f}%, supp={rule.supp * 100:.2f}%, "
            f"win={rule.window_id}]")


def rule_records(rules):
    """Machine-readable rows, one per rule."""
    return [{
        'window': rule.window_id,
        'antecedent': rule.antecedent.key,
        'consequent': rule.consequent.key,
        'delta_t_seconds': rule.delta_t,
        'support': rule.supp,
        'confidence': rule.confidence,
        'correlation': rule.correlation,
        'supp_consequent': rule.supp_consequent,
        'temporal': rule.temporal,
    } for rule in rules]
