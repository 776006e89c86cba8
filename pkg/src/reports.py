import os
import tempfile
from pathlib import Path

import numpy as np
import pandas as pd

from .config import MiningConfig
from .logger import get_logger
from .miner import mine_frequent
from .rules import render_rule, rule_records

logger = get_logger('Reports')

FREQUENT_COLUMNS = ['window', 'length', 'sequence', 'occur', 'support']
RULE_COLUMNS = ['window', 'antecedent', 'consequent', 'delta_t_seconds', 'support',
                'confidence', 'correlation', 'supp_consequent', 'temporal']
FIG3_COLUMNS = ['win_add', 'length', 'min_occur', 'count']
FIG4_COLUMNS = ['window', 'rule', 'confidence', 'correlation', 'supp_consequent']


def write_atomic(path, data):
    """
    Write a file through a temporary sibling and rename it into place

    Args:
        path: Destination path
        data (str | bytes): Content

    Returns:
        Path: The written path
    """
    path = Path(path)
    if isinstance(data, str):
        data = data.encode('utf-8')
    handle, temp_path = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or '.')
    try:
        with os.fdopen(handle, 'wb') as out:
            out.write(data)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise
    logger.debug(f"Wrote {path} ({len(data)} bytes)")
    return path


def _csv(frame):
    # floats keep their shortest round-trip repr
    return frame.to_csv(index=False, lineterminator='\n')


def frequent_frame(frequent_sets):
    records = [row for freq in frequent_sets for row in freq.to_records()]
    return pd.DataFrame(records, columns=FREQUENT_COLUMNS)


def rules_frame(rules):
    return pd.DataFrame(rule_records(rules), columns=RULE_COLUMNS)


def write_frequent_report(path, frequent_sets):
    return write_atomic(path, _csv(frequent_frame(frequent_sets)))


def write_rules_text(path, rules):
    text = "".join(render_rule(rule) + "\n" for rule in rules)
    return write_atomic(path, text)


def write_rules_records(path, rules):
    return write_atomic(path, _csv(rules_frame(rules)))


# =============================================================================
# FIGURE SERIES
# =============================================================================

def fig3_series(window, win_adds, min_occurs, base_config):
    """
    Frequent-sequence counts per (win_add, length, min_occur)

    Every combination is mined from scratch, since pruning depends on the threshold.

    Args:
        window (ViewingWindow): Corpus window
        win_adds (list): Noise tolerances, e.g. [0, 2, 4]
        min_occurs (list): Minimum occurring times to sweep
        base_config (MiningConfig): Source of max_len, prune mode and repeats flag

    Returns:
        pandas.DataFrame: One row per (win_add, length, min_occur)
    """
    rows = []
    for win_add in win_adds:
        lengths_seen = set()
        counts = {}
        for min_occur in min_occurs:
            config = MiningConfig(
                min_occur=min_occur,
                win_add=win_add,
                max_len=base_config.max_len,
                prune_mode=base_config.prune_mode,
                allow_repeats=base_config.allow_repeats,
                workers=base_config.workers,
            )
            by_length = mine_frequent(window, config).counts_by_length()
            counts[min_occur] = by_length
            lengths_seen.update(length for length, count in by_length.items() if count)
        lengths = sorted(lengths_seen) or [1]
        for length in lengths:
            for min_occur in min_occurs:
                rows.append({
                    'win_add': win_add,
                    'length': length,
                    'min_occur': min_occur,
                    'count': counts[min_occur].get(length, 0),
                })
    return pd.DataFrame(rows, columns=FIG3_COLUMNS)


def fig3_totals(frame):
    """Total frequent sequences per (win_add, min_occur), summed over lengths."""
    return frame.groupby(['win_add', 'min_occur'], as_index=False)['count'].sum()


def series_gaps(frame):
    """Largest minus smallest total across win_add series, per min_occur."""
    totals = fig3_totals(frame)
    spread = totals.groupby('min_occur')['count'].agg(lambda values: values.max() - values.min())
    return spread.sort_index()


def fig4_scatter(rules):
    rows = [{
        'window': rule.window_id,
        'rule': f"{rule.antecedent.key}->{rule.consequent.key}",
        'confidence': rule.confidence,
        'correlation': rule.correlation,
        'supp_consequent': rule.supp_consequent,
    } for rule in rules]
    return pd.DataFrame(rows, columns=FIG4_COLUMNS)


def fit_slope(frame):
    """Least-squares slope of correlation on confidence; None below two distinct points."""
    if len(frame) < 2 or frame['confidence'].nunique() < 2:
        return None
    slope, _ = np.polyfit(frame['confidence'].to_numpy(dtype=float),
                          frame['correlation'].to_numpy(dtype=float), 1)
    return float(slope)


def write_frame(path, frame):
    return write_atomic(path, _csv(frame))
