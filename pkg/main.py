#!/usr/bin/env python3
"""
Alarm correlation miner - command line front end

Sub-commands:
    mine         frequent alarm type sequences per viewing window
    rules        frequent sequences + correlation rules
    synth        synthetic alarm log with planted sequences and a manifest
    report-fig3  frequent-sequence counts over win_add and min_occur sweeps
    report-fig4  confidence vs correlation scatter of the generated rules

Exit codes: 0 success, 1 configuration error, 2 I/O or parse error.
"""

import argparse
import os
import sys
import time
from pathlib import Path

from pydantic import ValidationError

from src.config import (IngestConfig, MeasureKind, MiningConfig, PlantedPattern, PruneMode,
                        RuleConfig, RunConfig, SplitMode, SynthSpec, TimestampFormat,
                        WindowingSpec)
from src.errors import AlarmMinerError, ConfigError, LogParseError
from src.ingest import parse_log, read_log, windows
from src.logger import get_logger, setup_logging
from src.pipeline import MiningPipeline
from src import reports
from src.synth import demo_spec, generate

logger = get_logger('CLI')

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2

FORMAT_ALIASES = {
    'epoch': TimestampFormat.EPOCH_SECONDS,
    'epoch_seconds': TimestampFormat.EPOCH_SECONDS,
    'iso': TimestampFormat.ISO8601,
    'iso8601': TimestampFormat.ISO8601,
}
PRUNE_ALIASES = {'all': PruneMode.ALL_DELETIONS, 'endpoints': PruneMode.ENDPOINTS_ONLY}
SPLIT_ALIASES = {'prefix': SplitMode.PREFIX_ONLY, 'all': SplitMode.ALL_SUBSEQUENCES}


class _Parser(argparse.ArgumentParser):
    """argparse that reports bad flags as configuration errors instead of exiting"""

    def error(self, message):
        raise ConfigError(message)


# =============================================================================
# ARGUMENTS
# =============================================================================

def _add_ingest_flags(parser, with_window=True):
    parser.add_argument('--input', type=Path, help="Alarm log (timestamp,class,instance,num,desc)")
    parser.add_argument('--format', default='epoch_seconds', choices=sorted(FORMAT_ALIASES))
    parser.add_argument('--delimiter', default=',')
    parser.add_argument('--bucket-seconds', type=float, default=1.0)
    if with_window:
        parser.add_argument('--window', default='whole', help="'whole' or tuples per tumbling window")


def _add_mining_flags(parser, threshold='required', with_win_add=True):
    if threshold is not None:
        group = parser.add_mutually_exclusive_group(required=threshold == 'required')
        group.add_argument('--min-occur', type=int, help="Minimum occurring times")
        group.add_argument('--min-support', type=float, help="Minimum relative support in (0, 1]")
    if with_win_add:
        parser.add_argument('--win-add', type=int, default=0, help="Noise events tolerated per match")
    parser.add_argument('--max-len', type=int, default=None)
    parser.add_argument('--prune', default='all', choices=sorted(PRUNE_ALIASES))
    parser.add_argument('--no-repeats', action='store_true',
                        help="Discard candidates in which an alarm type repeats")
    parser.add_argument('--workers', type=int, default=1)


def _add_rule_flags(parser, min_conf_default=0.0):
    parser.add_argument('--min-conf', type=float, default=min_conf_default)
    parser.add_argument('--measure', default='correlation', choices=[kind.value for kind in MeasureKind])
    parser.add_argument('--split', default='prefix', choices=sorted(SPLIT_ALIASES))
    parser.add_argument('--no-recount', action='store_true',
                        help="Skip rules whose sub-sequence supports are not in the frequent set")


def build_parser():
    parser = _Parser(prog='alarm-miner', description="Noise-tolerant alarm correlation miner")
    parser.add_argument('-v', '--verbose', action='store_true', help="Debug logging")
    sub = parser.add_subparsers(dest='subcommand', required=True)

    mine = sub.add_parser('mine', help="Mine frequent alarm type sequences")
    _add_ingest_flags(mine)
    _add_mining_flags(mine)
    mine.add_argument('--output', type=Path, required=True, help="Frequent-set CSV report")

    rules = sub.add_parser('rules', help="Mine and generate correlation rules")
    _add_ingest_flags(rules)
    _add_mining_flags(rules)
    _add_rule_flags(rules)
    rules.add_argument('--output', type=Path, required=True, help="Rendered rules (text)")
    rules.add_argument('--records', type=Path, help="Rule records (CSV)")

    synth = sub.add_parser('synth', help="Generate a synthetic alarm log")
    synth.add_argument('--output', type=Path, required=True)
    synth.add_argument('--manifest', type=Path)
    synth.add_argument('--seed', type=int, required=True)
    synth.add_argument('--alphabet', type=int, default=30)
    synth.add_argument('--events', type=int, default=3000)
    synth.add_argument('--plant', action='append', default=[],
                       help="IDX,IDX,..:OCCURRENCES:MEAN_GAP:MAX_NOISE (repeatable)")
    synth.add_argument('--noise-rate', type=float, default=0.2)
    synth.add_argument('--burst', default=None, help="DUR:RATE,DUR:RATE schedule")

    fig3 = sub.add_parser('report-fig3', help="Frequent-sequence counts vs win_add and min_occur")
    _add_ingest_flags(fig3, with_window=False)
    _add_mining_flags(fig3, threshold=None, with_win_add=False)
    fig3.add_argument('--seed', type=int, help="Seed of the synthetic corpus used without --input")
    fig3.add_argument('--win-add-series', default='0,2,4')
    fig3.add_argument('--min-occur-sweep', default='20:60:10', help="START:STOP:STEP (inclusive)")
    fig3.add_argument('--output', type=Path, required=True)

    fig4 = sub.add_parser('report-fig4', help="Confidence vs correlation of generated rules")
    _add_ingest_flags(fig4, with_window=False)
    _add_mining_flags(fig4, threshold='optional')
    _add_rule_flags(fig4)
    fig4.add_argument('--seed', type=int, help="Seed of the synthetic corpus used without --input")
    fig4.add_argument('--output', type=Path, required=True)

    return parser


def _ingest_config(args):
    return IngestConfig(timestamp_format=FORMAT_ALIASES[args.format],
                        delimiter=args.delimiter, bucket_seconds=args.bucket_seconds)


def _mining_config(args, default_min_occur=None):
    min_occur = getattr(args, 'min_occur', None)
    min_support = getattr(args, 'min_support', None)
    if min_occur is None and min_support is None:
        min_occur = default_min_occur
    return MiningConfig(min_occur=min_occur, min_support=min_support,
                        win_add=getattr(args, 'win_add', 0),
                        max_len=args.max_len, prune_mode=PRUNE_ALIASES[args.prune],
                        allow_repeats=not args.no_repeats, workers=args.workers)


def _rule_config(args):
    return RuleConfig(min_conf=args.min_conf, measure=MeasureKind(args.measure),
                      split_mode=SPLIT_ALIASES[args.split], recount=not args.no_recount)


def _check_paths(run):
    """Inputs must be readable files and outputs must land in existing directories."""
    if run.input_path is not None:
        if not run.input_path.is_file() or not os.access(run.input_path, os.R_OK):
            raise FileNotFoundError(f"cannot read input log {run.input_path}")
    for path in (run.output_path, run.records_path, run.manifest_path):
        if path is None:
            continue
        parent = path.resolve().parent
        if not parent.is_dir():
            raise FileNotFoundError(f"output directory of {path} does not exist")
        if not os.access(parent, os.W_OK):
            raise PermissionError(f"output directory of {path} is not writable")


def _parse_int_list(text, flag):
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise ConfigError(f"{flag} expects comma-separated integers, got {text!r}")


def _parse_sweep(text):
    try:
        start, stop, step = (int(item) for item in text.split(':'))
    except ValueError:
        raise ConfigError(f"--min-occur-sweep expects START:STOP:STEP, got {text!r}")
    if step <= 0 or start < 1 or stop < start:
        raise ConfigError("--min-occur-sweep needs START >= 1, STEP > 0 and STOP >= START")
    return list(range(start, stop + 1, step))


def _corpus_window(args, run):
    """Whole-log window of --input, or of the seeded synthetic corpus, with a source label."""
    if run.input_path is not None:
        queue = read_log(run.input_path, run.ingest)
        return windows(queue, WindowingSpec())[0], str(run.input_path)
    if args.seed is None:
        raise ConfigError("without --input a synthetic corpus is used and --seed is required")
    log_bytes, _ = generate(demo_spec(args.seed))
    window = windows(parse_log(log_bytes, IngestConfig()), WindowingSpec())[0]
    return window, f"synthetic corpus (seed {args.seed})"


# =============================================================================
# COMMANDS
# =============================================================================

def _run_pipeline(args, with_rules):
    run = RunConfig(
        subcommand=args.subcommand,
        input_path=args.input,
        output_path=args.output,
        records_path=getattr(args, 'records', None),
        ingest=_ingest_config(args),
        windowing=WindowingSpec.from_flag(args.window),
        mining=_mining_config(args),
        rules=_rule_config(args) if with_rules else RuleConfig(),
    )
    if run.input_path is None:
        raise ConfigError("--input is required")
    _check_paths(run)

    pipeline = MiningPipeline(run.mining, run.ingest, run.windowing, run.rules)
    result = pipeline.process_log(run.input_path, with_rules=with_rules)
    if not result['success']:
        raise result['failure']
    return run, pipeline, result


def cmd_mine(args):
    """Write per-level frequent sequences with occur/support and print a summary."""
    run, pipeline, result = _run_pipeline(args, with_rules=False)
    reports.write_frequent_report(run.output_path, result['frequent_sets'])
    print(pipeline.get_summary(result))
    print(f"✓ Frequent-set report: {run.output_path}")
    return EXIT_OK


def cmd_rules(args):
    run, pipeline, result = _run_pipeline(args, with_rules=True)
    reports.write_rules_text(run.output_path, result['rules'])
    if run.records_path is not None:
        reports.write_rules_records(run.records_path, result['rules'])
    print(pipeline.get_summary(result))
    print(f"✓ Rules: {run.output_path}" + (f", records: {run.records_path}" if run.records_path else ""))
    return EXIT_OK


def cmd_synth(args):
    spec = SynthSpec(
        alphabet_size=args.alphabet,
        total_events=args.events,
        planted_patterns=[PlantedPattern.from_flag(value) for value in args.plant],
        noise_rate=args.noise_rate,
        rng_seed=args.seed,
        **({'burstiness': SynthSpec.parse_burst(args.burst)} if args.burst else {}),
    )
    run = RunConfig(subcommand='synth', output_path=args.output, manifest_path=args.manifest,
                    synth=spec, seed=args.seed)
    _check_paths(run)

    log_bytes, manifest = generate(spec)
    reports.write_atomic(run.output_path, log_bytes)
    if run.manifest_path is not None:
        reports.write_atomic(run.manifest_path, manifest.model_dump_json(indent=2) + "\n")
    print(f"✓ Synthetic log: {run.output_path} ({manifest.total_events} events, "
          f"{manifest.distinct_types} alarm types)")
    return EXIT_OK


def cmd_report_fig3(args):
    """CSV of frequent-sequence counts per (win_add, length, min_occur)."""
    run = RunConfig(subcommand=args.subcommand, input_path=args.input, output_path=args.output,
                    ingest=_ingest_config(args), seed=args.seed)
    _check_paths(run)
    win_adds = _parse_int_list(args.win_add_series, '--win-add-series')
    min_occurs = _parse_sweep(args.min_occur_sweep)
    base = _mining_config(args, default_min_occur=min_occurs[0])

    window, _ = _corpus_window(args, run)
    frame = reports.fig3_series(window, win_adds, min_occurs, base)
    reports.write_frame(run.output_path, frame)

    print("=" * 60)
    print("FREQUENT SEQUENCES vs WIN_ADD")
    print("=" * 60)
    for (win_add, min_occur), total in reports.fig3_totals(frame).set_index(
            ['win_add', 'min_occur'])['count'].items():
        print(f"  win_add={win_add:<3} min_occur={min_occur:<5} total={total}")
    print(f"✓ Series: {run.output_path}")
    return EXIT_OK


def cmd_report_fig4(args):
    """CSV scatter of confidence vs correlation, one row per rule, plus the fitted slope."""
    run = RunConfig(subcommand=args.subcommand, input_path=args.input, output_path=args.output,
                    ingest=_ingest_config(args), mining=_mining_config(args, default_min_occur=10),
                    rules=_rule_config(args), seed=args.seed)
    _check_paths(run)

    window, source = _corpus_window(args, run)
    pipeline = MiningPipeline(run.mining, run.ingest, rule_config=run.rules)
    result = pipeline.process_windows([window], with_rules=True, source=source)
    if not result['success']:
        raise result['failure']
    frame = reports.fig4_scatter(result['rules'])
    reports.write_frame(run.output_path, frame)

    slope = reports.fit_slope(frame)
    print(pipeline.get_summary(result))
    print("Slope of correlation on confidence: " + ("n/a" if slope is None else f"{slope:.4f}"))
    print(f"✓ Scatter: {run.output_path}")
    return EXIT_OK


COMMANDS = {
    'mine': cmd_mine,
    'rules': cmd_rules,
    'synth': cmd_synth,
    'report-fig3': cmd_report_fig3,
    'report-fig4': cmd_report_fig4,
}


def main(argv=None):
    start_time = time.time()
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as e:
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_CONFIG
    setup_logging(verbose=args.verbose)

    try:
        code = COMMANDS[args.subcommand](args)
    except LogParseError as e:
        logger.error(f"✗ Parse error: {e}")
        return EXIT_IO
    except OSError as e:
        logger.error(f"✗ I/O error: {e}")
        return EXIT_IO
    except (ValidationError, AlarmMinerError, ValueError) as e:
        logger.error(f"✗ Configuration error: {e}")
        return EXIT_CONFIG

    logger.info(f"✓ {args.subcommand} finished in {time.time() - start_time:.2f}s")
    return code


if __name__ == "__main__":
    sys.exit(main())
