import time
from datetime import datetime

from .config import IngestConfig, RuleConfig, WindowingSpec
from .errors import AlarmMinerError
from .ingest import read_log, windows
from .logger import get_logger
from .miner import mine_windows
from .rules import gen_rules

logger = get_logger('Pipeline')


class MiningPipeline:
    def __init__(self, mining_config, ingest_config=None, windowing=None, rule_config=None):
        """
        Wire ingest -> frequent-sequence mining -> correlation rules

        Args:
            mining_config (MiningConfig): Threshold, win_add, pruning
            ingest_config (IngestConfig): Log format (defaults to epoch CSV)
            windowing (WindowingSpec): Viewing windows (defaults to the whole log)
            rule_config (RuleConfig): Rule threshold, measure and split mode
        """
        self.mining_config = mining_config
        self.ingest_config = ingest_config or IngestConfig()
        self.windowing = windowing or WindowingSpec()
        self.rule_config = rule_config or RuleConfig()
        logger.debug(f"Pipeline ready ({mining_config.describe()})")

    def process_log(self, log_path, with_rules=False):
        """
        Run the full pipeline on one alarm log

        Args:
            log_path (str): Path to the delimited alarm log
            with_rules (bool): Also generate correlation rules

        Returns:
            dict: queue summary, windows, frequent sets, rules, timing and errors
        """
        start_time = time.time()
        total_steps = 3 if with_rules else 2
        result = self._new_result(str(log_path))

        # Step 1: Ingest
        logger.info(f"[STEP 1/{total_steps}] Reading alarm log {log_path}")
        try:
            queue = read_log(log_path, self.ingest_config)
            view_windows = windows(queue, self.windowing)
        except (AlarmMinerError, OSError) as e:
            return self._fail(result, f"Ingest failed: {e}", e, start_time)

        result['queue_summary'] = queue.summary()
        return self._mine_and_correlate(result, view_windows, with_rules, 2, total_steps,
                                        start_time)

    def process_windows(self, view_windows, with_rules=False, source="<memory>"):
        """
        Mine viewing windows that are already in memory (synthetic corpora, report sweeps)

        Returns:
            dict: Same layout as process_log, without a queue summary
        """
        start_time = time.time()
        total_steps = 2 if with_rules else 1
        result = self._new_result(source)
        return self._mine_and_correlate(result, list(view_windows), with_rules, 1, total_steps,
                                        start_time)

    def _new_result(self, source):
        return {
            'success': False,
            'input_file': source,
            'queue_summary': {},
            'windows': [],
            'frequent_sets': [],
            'rules': [],
            'processing_time': 0,
            'timestamp': datetime.now().isoformat(),
            'errors': [],
            'failure': None,
        }

    def _mine_and_correlate(self, result, view_windows, with_rules, step, total_steps, start_time):
        result['windows'] = view_windows

        # Mining
        logger.info(f"[STEP {step}/{total_steps}] Mining {len(view_windows)} viewing window(s): "
                    f"{self.mining_config.describe()}")
        try:
            result['frequent_sets'] = mine_windows(view_windows, self.mining_config)
        except AlarmMinerError as e:
            return self._fail(result, f"Mining failed: {e}", e, start_time)

        # Rules
        if with_rules:
            logger.info(f"[STEP {step + 1}/{total_steps}] Generating correlation rules "
                        f"({self.rule_config.measure.value} >= {self.rule_config.min_conf}, "
                        f"{self.rule_config.split_mode.value})")
            by_id = {window.window_id: window for window in view_windows}
            try:
                for freq in result['frequent_sets']:
                    result['rules'].extend(gen_rules(
                        freq,
                        min_conf=self.rule_config.min_conf,
                        kind=self.rule_config.measure,
                        split_mode=self.rule_config.split_mode,
                        window=by_id[freq.window_id] if self.rule_config.recount else None,
                    ))
            except AlarmMinerError as e:
                return self._fail(result, f"Rule generation failed: {e}", e, start_time)

        result['success'] = True
        result['processing_time'] = time.time() - start_time
        return result

    def _fail(self, result, message, error, start_time):
        logger.error(f"✗ {message}")
        result['errors'].append(message)
        result['failure'] = error
        result['processing_time'] = time.time() - start_time
        return result

    def get_summary(self, result):
        """Banner with queue size, frequent sequences per window and level, and any errors."""
        summary = []
        summary.append("=" * 60)
        summary.append("ALARM CORRELATION SUMMARY")
        summary.append("=" * 60)
        summary.append(f"Input File: {result['input_file']}")
        summary.append(f"Processing Time: {result['processing_time']:.2f} seconds")

        queue = result['queue_summary']
        if queue:
            summary.append(f"Alarm events: {queue['events']}  alarm types: {queue['distinct_types']}"
                           f"  tuples: {queue['tuples']}  queue: {queue['kind']}")

        for freq in result['frequent_sets']:
            levels = ", ".join(f"m={m}: {count}" for m, count in freq.counts_by_length().items())
            summary.append(f"Window {freq.window_id} (d={freq.size_d}): "
                           f"{freq.total()} frequent sequences [{levels}]")

        if result['rules']:
            summary.append(f"Correlation rules: {len(result['rules'])}")

        if result['errors']:
            summary.append(f"Errors ({len(result['errors'])}):")
            for error in result['errors']:
                summary.append(f"   - {error}")

        summary.append("=" * 60)
        return "\n".join(summary)
