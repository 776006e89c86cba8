import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .alarm_model import TypeSequence
from .config import MiningConfig, PruneMode
from .errors import DomainError
from .logger import get_logger
from .matcher import OccurrenceReport, robust_count

logger = get_logger('Miner')


@dataclass(frozen=True)
class CandidateSet:
    """Candidate sequences of one length, in canonical order"""

    sequences: Tuple[TypeSequence, ...]

    def __post_init__(self):
        ordered = tuple(sorted(set(self.sequences)))
        object.__setattr__(self, "sequences", ordered)
        if len({len(seq) for seq in ordered}) > 1:
            raise DomainError("a candidate set holds sequences of one length only")

    def __len__(self):
        return len(self.sequences)

    def __iter__(self):
        return iter(self.sequences)

    def __contains__(self, seq):
        return seq in self.sequences

    @property
    def length(self):
        return len(self.sequences[0]) if self.sequences else 0


@dataclass
class FrequentSet:
    """
    Frequent sequences of every length for one viewing window

    levels maps a length m to its frequent sequences and their occurrence reports.
    """

    window_id: str
    config: MiningConfig
    size_d: int
    levels: Dict[int, Dict[TypeSequence, OccurrenceReport]] = field(default_factory=dict)

    def lookup(self, seq) -> Optional[OccurrenceReport]:
        return self.levels.get(len(seq), {}).get(seq)

    def sequences(self, m=None):
        if m is not None:
            return sorted(self.levels.get(m, {}))
        return [seq for length in sorted(self.levels) for seq in sorted(self.levels[length])]

    def counts_by_length(self):
        return {m: len(level) for m, level in sorted(self.levels.items())}

    def total(self):
        return sum(len(level) for level in self.levels.values())

    def to_records(self):
        """Rows for the frequent-set report: window, length, sequence, occur, support."""
        records = []
        for seq in self.sequences():
            report = self.levels[len(seq)][seq]
            records.append({
                'window': self.window_id,
                'length': len(seq),
                'sequence': seq.key,
                'occur': report.count,
                'support': report.support,
            })
        return records


def seed_candidates(window):
    """C_1: one single-element candidate per distinct alarm type in the window."""
    types = {alarm_type for item in window.tuples for alarm_type in item.types}
    return CandidateSet(tuple(TypeSequence((alarm_type,)) for alarm_type in types))


def gen_candidates(level, prune_mode=PruneMode.ALL_DELETIONS, allow_repeats=True):
    """
    Join F_m with itself and prune the result into C_{m+1}

    alpha joins beta when alpha without its first element equals beta without its last;
    the candidate is alpha extended by beta's last element. A sequence may join itself,
    which only ever yields repeated types.

    Args:
        level: Iterable of TypeSequence, all of length m
        prune_mode (PruneMode): all_deletions or endpoints_only
        allow_repeats (bool): Keep candidates in which an alarm type repeats

    Returns:
        CandidateSet: C_{m+1}
    """
    frequent = set(level)
    if not frequent:
        return CandidateSet(())
    lengths = {len(seq) for seq in frequent}
    if len(lengths) != 1:
        raise DomainError(f"gen_candidates needs sequences of one length, got {sorted(lengths)}")
    m = lengths.pop()

    by_prefix = {}
    for beta in frequent:
        by_prefix.setdefault(beta.elements[:m - 1], []).append(beta)

    joined = set()
    for alpha in frequent:
        for beta in by_prefix.get(alpha.elements[1:], ()):
            gamma = alpha.extend(beta.elements[-1])
            if not allow_repeats and gamma.has_repeats():
                continue
            joined.add(gamma)

    if prune_mode == PruneMode.ALL_DELETIONS:
        kept = [gamma for gamma in joined
                if all(sub in frequent for sub in gamma.deletions())]
    else:
        kept = [gamma for gamma in joined
                if gamma.prefix(m) in frequent and gamma.suffix(m) in frequent]
    return CandidateSet(tuple(kept))


# Process-pool workers receive the window once, through the initializer
_worker_state = {}


def _init_worker(window, win_add):
    _worker_state['window'] = window
    _worker_state['win_add'] = win_add


def _count_in_worker(seq):
    return robust_count(seq, _worker_state['window'], _worker_state['win_add'])


def _count_level(candidates, window, config, pool):
    if pool is None:
        return [robust_count(seq, window, config.win_add) for seq in candidates]
    chunk = max(1, len(candidates) // (config.workers * 4))
    return list(pool.map(_count_in_worker, candidates.sequences, chunksize=chunk))


def mine_frequent(window, config):
    """
    Apriori-style loop over candidate lengths

    Each level counts its candidates with robust_count (m + win_add events), keeps the
    ones meeting the threshold (>=), and joins them into the next level. Stops when a
    candidate set is empty or max_len is reached.

    Args:
        window (ViewingWindow): Non-empty viewing window
        config (MiningConfig): Threshold, noise tolerance and pruning

    Returns:
        FrequentSet: Every frequent level, shortest first
    """
    if window.size_d == 0:
        raise DomainError(f"cannot mine the empty viewing window {window.window_id}")

    start_time = time.time()
    result = FrequentSet(window.window_id, config, window.size_d)
    candidates = seed_candidates(window)
    m = 1

    pool = None
    if config.workers > 1:
        pool = ProcessPoolExecutor(max_workers=config.workers, initializer=_init_worker,
                                   initargs=(window, config.win_add))
    try:
        while len(candidates):
            reports = _count_level(candidates, window, config, pool)
            level = {seq: report for seq, report in zip(candidates, reports)
                     if config.meets_threshold(report.count, window.size_d)}
            result.levels[m] = level
            logger.debug(f"{window.window_id} level {m}: {len(candidates)} candidates, "
                         f"{len(level)} frequent")
            if not level or (config.max_len is not None and m >= config.max_len):
                break
            candidates = gen_candidates(level, config.prune_mode, config.allow_repeats)
            m += 1
    finally:
        if pool is not None:
            pool.shutdown()

    logger.info(f"✓ {window.window_id}: {result.total()} frequent sequences "
                f"{result.counts_by_length()} in {time.time() - start_time:.2f}s")
    return result


def mine_windows(windows, config):
    """Mine every viewing window; empty windows are skipped with a warning."""
    results = []
    for window in windows:
        if window.size_d == 0:
            logger.warning(f"⚠ Skipping empty viewing window {window.window_id}")
            continue
        results.append(mine_frequent(window, config))
    return results
