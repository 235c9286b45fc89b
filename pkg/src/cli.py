"""
Command-line surface.

    python -m src sample   --n 12 --lambda 0.3 --shots 500000 --seed 7
    python -m src analyze  --analysis conditional --n 12 --a-bits 0 1 2 3 4 5 --condition-b 0
    python -m src xeb      --n 12 --a-bits 0 1 2 3 4 5 6 7 --condition-b 0 --shots 1000000
    python -m src gap      --n 12 --lambda 0.52 --trials 25
    python -m src laws     --family SubsystemBeta --n 30 --m 20

Defaults come from config.yaml (`settings.experiment`); flags override them. Bit-strings
read or written anywhere use qubit 0 as the leftmost character.
"""
import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from src.common.base_analysis import IDEAL_STATE_STREAM, SHOT_STREAM
from src.common.errors import HaarStatsError
from src.common.experiment_config import AnalysisKind, ExperimentConfig
from src.core.distributions import AnalyticLaw, Family, support
from src.core.state_core import RngSpec, depolarize, probabilities, sample_haar_state
from src.core.xeb import SampleMeta, draw_samples
from src.formats.samples_file import write_samples
from src.formats.tables import write_law_table
from src.managers.analysis_manager import AnalysisManager
from src.managers.config_manager import ConfigManager

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ERROR = 2

logger = logging.getLogger(__name__)


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', type=Path, default=None, help='Path to a config.yaml (default: project root)')
    parser.add_argument('--out-dir', dest='out_dir', type=Path, default=None,
                        help='Output directory (default: $HAAR_STATS_OUT_DIR or settings.experiment.out_dir)')
    parser.add_argument('--n', type=int, default=None, help='Number of qubits')
    parser.add_argument('--a-bits', dest='partition_a_bits', type=int, nargs='+', default=None,
                        help='Qubits of subsystem A, in substring order')
    parser.add_argument('--lambda', dest='lam', type=float, default=None, help='Depolarizing strength in [0, 1]')
    parser.add_argument('--trials', type=int, default=None)
    parser.add_argument('--shots', type=int, default=None)
    parser.add_argument('--seed', type=int, default=None)
    parser.add_argument('--condition-b', dest='condition_b', type=int, default=None,
                        help='Post-selected outcome b of subsystem B')
    parser.add_argument('--bins', type=int, default=None)
    parser.add_argument('--workers', type=int, default=None)
    parser.add_argument('--samples', dest='samples_path', type=Path, default=None,
                        help='Analyse a sample file instead of simulated states')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='haar-stats', description='Random-state bit-string statistics and XEB')
    parser.add_argument('--log-level', default=None, help='Overrides settings.logging.level')
    commands = parser.add_subparsers(dest='command', required=True)

    sample = commands.add_parser('sample', help='Draw bit-strings from a simulated (depolarized) Haar state')
    _add_experiment_flags(sample)
    sample.add_argument('--output', type=Path, default=None, help='Counts document path (default: <out-dir>/samples.yaml)')

    analyze = commands.add_parser('analyze', help='Histograms and KS tests against the analytic laws')
    _add_experiment_flags(analyze)
    analyze.add_argument('--analysis', choices=[k.value for k in (AnalysisKind.FULL, AnalysisKind.SUBSYSTEM,
                                                                  AnalysisKind.CONDITIONAL)], default=None)

    xeb = commands.add_parser('xeb', help='Full, subsystem and conditional linear XEB')
    _add_experiment_flags(xeb)

    gap = commands.add_parser('gap', help='Depolarizing-strength estimation')
    _add_experiment_flags(gap)

    laws = commands.add_parser('laws', help='Tabulate an analytic pdf/cdf for plotting')
    laws.add_argument('--family', choices=[f.value for f in Family], default=Family.FULL_BETA.value)
    laws.add_argument('--n', type=int, required=True, help='Number of qubits of the full register')
    laws.add_argument('--m', type=int, default=None, help='Qubits of subsystem A (default: n)')
    laws.add_argument('--lambda', dest='lam', type=float, default=0.0)
    laws.add_argument('--raw', action='store_true', help='Tabulate raw probabilities instead of scaled ones')
    laws.add_argument('--points', type=int, default=1001)
    laws.add_argument('--x-max', dest='x_max', type=float, default=None)
    laws.add_argument('--output', type=Path, required=True)
    return parser


def configure_logging(config: ConfigManager, level: str | None) -> None:
    logging.basicConfig(
        level=(level or config.get_config_value('settings', 'logging', 'level', default='INFO')).upper(),
        format=config.get_config_value('settings', 'logging', 'format',
                                       default='%(asctime)s %(levelname)s %(name)s: %(message)s'))


def _experiment_config(args: argparse.Namespace, config: ConfigManager, analysis: str | None) -> ExperimentConfig:
    overrides = {name: getattr(args, name, None) for name in (
        'n', 'partition_a_bits', 'lam', 'trials', 'shots', 'seed', 'condition_b', 'bins', 'workers',
        'samples_path', 'out_dir')}
    overrides['analysis'] = analysis
    return ExperimentConfig.from_config(config, overrides)


def law_from_args(args: argparse.Namespace) -> AnalyticLaw:
    """
    Builds the law the `laws` verb tabulates from --family, --n, --m and --lambda.
    """
    family = Family(args.family)
    N = 1 << args.n
    m = args.n if args.m is None else args.m
    M, K = 1 << m, 1 << (args.n - m)
    scaled = not args.raw
    if family is Family.FULL_BETA:
        return AnalyticLaw.full_beta(N, args.lam, scaled)
    if family in (Family.SUBSYSTEM_BETA, Family.SHIFTED_SUBSYSTEM_BETA):
        return AnalyticLaw.subsystem_beta(N, K, args.lam, scaled)
    if family is Family.CONDITIONAL_BETA:
        return AnalyticLaw.conditional_beta(M, args.lam, scaled)
    if family is Family.GAMMA_LIMIT:
        return AnalyticLaw.gamma_limit(N, K, args.lam, scaled)
    return AnalyticLaw.exp_limit(N, args.lam, scaled)


def _run_laws(args: argparse.Namespace) -> int:
    law = law_from_args(args)
    lo, hi = support(law)
    x_max = args.x_max if args.x_max is not None else min(hi, (10.0 if law.scaled else 10.0 / law.dimension))
    grid = np.linspace(0.0, x_max, args.points)
    write_law_table(law, grid, args.output)
    print(args.output)
    return EXIT_OK


def _run_sample(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    ideal = probabilities(sample_haar_state(cfg.n, RngSpec(cfg.seed, IDEAL_STATE_STREAM), cfg.n_max))
    noisy = depolarize(ideal, cfg.lam)
    meta = SampleMeta(seed=cfg.seed, lambda_claim=cfg.lam,
                      partition=cfg.partition if cfg.partition_a_bits else None)
    samples = draw_samples(noisy, cfg.shots, RngSpec(cfg.seed, SHOT_STREAM), meta)
    path = write_samples(samples, args.output or Path(cfg.out_dir) / 'samples.yaml')
    print(path)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = ConfigManager(getattr(args, 'config', None))
    configure_logging(config, args.log_level)
    try:
        if args.command == 'laws':
            return _run_laws(args)
        if args.command == 'sample':
            return _run_sample(args, _experiment_config(args, config, None))
        analysis = {'xeb': AnalysisKind.XEB.value, 'gap': AnalysisKind.GAP.value}.get(args.command)
        if args.command == 'analyze':
            configured = config.get_config_value('settings', 'experiment', 'analysis', default='full')
            analysis = args.analysis or (configured if configured in ('full', 'subsystem', 'conditional') else 'full')
        cfg = _experiment_config(args, config, analysis)
        summary = AnalysisManager.run_experiment(cfg)
    except HaarStatsError as error:
        logger.error("%s", error)
        return EXIT_ERROR
    except OSError as error:
        logger.error("Cannot access %s: %s", error.filename, error.strerror or error)
        return EXIT_ERROR
    print(Path(cfg.out_dir) / 'summary.yaml')
    return EXIT_OK if summary['passed'] else EXIT_CHECK_FAILED


if __name__ == '__main__':
    sys.exit(main())
