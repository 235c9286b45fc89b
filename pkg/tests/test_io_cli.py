import numpy as np
import pytest
import yaml
from src.cli import EXIT_ERROR, EXIT_OK, main
from src.common.errors import ArgumentError, SampleFormatError, SampleParseError
from src.common.experiment_config import AnalysisKind, ExperimentConfig
from src.core.distributions import AnalyticLaw, cdf
from src.core.marginals import Partition
from src.core.stats_tests import histogram
from src.core.xeb import SampleMeta, SampleSet
from src.formats.samples_file import read_samples, write_samples
from src.formats.tables import read_histogram_csv, read_summary, write_histogram_csv, write_summary
from src.managers.analysis_manager import SUMMARY_FILE, run_experiment
from src.utils.project import OUT_DIR_ENV_VAR
from src.utils.utils import Utils


class TestUtils:
    @pytest.mark.io_cli
    def test_bitstring_conversion_puts_qubit_zero_first(self):
        assert Utils.index_to_bitstring(1, 3) == '001'
        assert Utils.bitstring_to_index('100') == 4

    @pytest.mark.io_cli
    @pytest.mark.parametrize('dimension, expected', [(2, 1), (4096, 12)])
    def test_log2_dimension(self, dimension, expected):
        assert Utils.log2_dimension(dimension) == expected

    @pytest.mark.io_cli
    @pytest.mark.parametrize('dimension', [0, 1, 6])
    def test_log2_dimension_rejects_non_powers(self, dimension):
        with pytest.raises(ArgumentError):
            Utils.log2_dimension(dimension)


class TestSampleFiles:
    @pytest.mark.io_cli
    def test_text_file(self, tmp_path):
        path = tmp_path / 'samples.txt'
        path.write_text('00\n01\n01\n')
        samples = read_samples(path)
        assert (samples.n, samples.counts, samples.total) == (2, {0: 1, 1: 2}, 3)

    @pytest.mark.io_cli
    def test_text_file_skips_comments_and_blanks(self, tmp_path):
        path = tmp_path / 'samples.txt'
        path.write_text('# device run 7\n\n110\n  110  \n')
        assert read_samples(path).counts == {6: 2}

    @pytest.mark.io_cli
    def test_json_counts_document(self, tmp_path):
        path = tmp_path / 'counts.json'
        path.write_text('{"n": 2, "counts": {"11": 5}}')
        samples = read_samples(path)
        assert (samples.n, samples.counts, samples.total) == (2, {3: 5}, 5)

    @pytest.mark.io_cli
    def test_brace_prefixed_text_is_a_document(self, tmp_path):
        path = tmp_path / 'counts.dat'
        path.write_text('  {"n": 1, "counts": {"0": 2, "1": 3}}')
        assert read_samples(path).counts == {0: 2, 1: 3}

    @pytest.mark.io_cli
    def test_invalid_utf8_reports_its_line(self, tmp_path):
        path = tmp_path / 'samples.txt'
        path.write_bytes(b'01\n\xff\xfe01\n')
        with pytest.raises(SampleParseError) as error:
            read_samples(path)
        assert error.value.line_number == 2
        assert 'UTF-8' in str(error.value)

    @pytest.mark.io_cli
    def test_empty_file_fails(self, tmp_path):
        path = tmp_path / 'empty.txt'
        path.write_text('')
        with pytest.raises(SampleParseError):
            read_samples(path)

    @pytest.mark.io_cli
    def test_malformed_line_reports_line_number(self, tmp_path):
        path = tmp_path / 'bad.txt'
        path.write_text('01\n0x\n')
        with pytest.raises(SampleParseError) as error:
            read_samples(path)
        assert error.value.line_number == 2 and ':2:' in str(error.value)

    @pytest.mark.io_cli
    def test_inconsistent_lengths_fail(self, tmp_path):
        path = tmp_path / 'ragged.txt'
        path.write_text('01\n011\n')
        with pytest.raises(SampleFormatError):
            read_samples(path)

    @pytest.mark.io_cli
    def test_unquoted_keys_fail(self, tmp_path):
        path = tmp_path / 'counts.yaml'
        path.write_text('n: 2\ncounts:\n  11: 5\n')
        with pytest.raises(SampleFormatError, match='quoted'):
            read_samples(path)

    @pytest.mark.io_cli
    def test_written_samples_read_back(self, tmp_path):
        part = Partition(3, (2, 0))
        samples = SampleSet(3, {0: 4, 5: 1, 7: 2}, 7, SampleMeta(seed=9, lambda_claim=0.3, partition=part))
        path = write_samples(samples, tmp_path / 'out' / 'samples.yaml')
        document = yaml.safe_load(path.read_text())
        assert document['counts'] == {'000': 4, '101': 1, '111': 2}
        loaded = read_samples(path)
        assert loaded.counts == samples.counts
        assert (loaded.meta.seed, loaded.meta.lambda_claim, loaded.meta.partition) == (9, 0.3, part)


class TestTables:
    @pytest.mark.io_cli
    def test_single_bin_csv(self, tmp_path):
        path = write_histogram_csv(histogram(np.array([0.1, 0.2, 0.7]), 1, (0.0, 1.0)), tmp_path / 'h.csv')
        lines = path.read_text().splitlines()
        assert lines == ['x_lo,x_hi,density', '0,1,1', '# count=3 overflow=0']

    @pytest.mark.io_cli
    def test_histogram_csv_reads_back(self, tmp_path, rng_spec):
        h = histogram(rng_spec(1).generator().standard_exponential(10_000), 50, (0.0, 5.0))
        loaded = read_histogram_csv(write_histogram_csv(h, tmp_path / 'h.csv'))
        np.testing.assert_allclose(loaded.densities, h.densities, rtol=1e-10)
        np.testing.assert_allclose(loaded.edges, h.edges, rtol=1e-10)
        assert (loaded.count, loaded.overflow) == (h.count, h.overflow)

    @pytest.mark.io_cli
    def test_summary_is_sorted_and_versioned(self, tmp_path):
        path = write_summary({'b': 1, 'a': {'z': 2, 'y': 3}}, tmp_path / 'summary.yaml')
        text = path.read_text()
        assert text.index('a:') < text.index('b:') < text.index('schema_version')
        assert read_summary(path)['schema_version'] == 1


class TestExperimentConfig:
    @pytest.mark.io_cli
    def test_defaults_come_from_config_file(self, initiate_config, monkeypatch):
        monkeypatch.delenv(OUT_DIR_ENV_VAR, raising=False)
        cfg = ExperimentConfig.from_config(initiate_config)
        assert cfg.n == initiate_config.get_config_value('settings', 'experiment', 'n')
        assert cfg.n_max == initiate_config.get_config_value('settings', 'limits', 'n_max')
        assert cfg.analysis is AnalysisKind.FULL

    @pytest.mark.io_cli
    def test_overrides_win_and_none_is_ignored(self, initiate_config, out_dir):
        cfg = ExperimentConfig.from_config(initiate_config, {
            'n': 6, 'lam': 0.25, 'partition_a_bits': [3, 1], 'trials': None, 'out_dir': out_dir})
        assert (cfg.n, cfg.lam, cfg.partition_a_bits, cfg.out_dir) == (6, 0.25, (3, 1), out_dir)
        assert cfg.trials == initiate_config.get_config_value('settings', 'experiment', 'trials')
        assert cfg.partition.b_bits == (0, 2, 4, 5)

    @pytest.mark.io_cli
    def test_environment_sets_default_out_dir(self, initiate_config, monkeypatch, tmp_path):
        monkeypatch.setenv(OUT_DIR_ENV_VAR, str(tmp_path / 'from_env'))
        assert ExperimentConfig.from_config(initiate_config).out_dir == tmp_path / 'from_env'

    @pytest.mark.io_cli
    def test_unknown_settings_are_rejected(self, initiate_config):
        with pytest.raises(ArgumentError):
            ExperimentConfig.from_config(initiate_config, {'qubits': 3})

    @pytest.mark.io_cli
    @pytest.mark.parametrize('values', [
        {'n': 0}, {'n': 25}, {'lam': 1.5}, {'trials': 0},
        {'n': 4, 'partition_a_bits': (5,)}, {'n': 4, 'partition_a_bits': (0, 1), 'condition_b': 4},
        {'n': 4, 'condition_b': 1}, {'n': 4, 'condition_b': -1},
    ])
    def test_invalid_configs_are_rejected(self, values, out_dir):
        with pytest.raises(ArgumentError):
            ExperimentConfig(out_dir=out_dir, **values)

    @pytest.mark.io_cli
    def test_empty_partition_means_whole_register(self, out_dir):
        part = ExperimentConfig(n=5, out_dir=out_dir).partition
        assert part.a_bits == (0, 1, 2, 3, 4) and part.K == 1


class TestExperiments:
    @pytest.mark.io_cli
    def test_full_analysis_writes_summary_and_histogram(self, out_dir):
        summary = run_experiment(ExperimentConfig(n=10, trials=20, seed=3, out_dir=out_dir))
        assert (out_dir / SUMMARY_FILE).exists() and (out_dir / 'full_system.csv').exists()
        assert summary['files'] == ['full_system.csv']
        assert summary['results']['full_system']['ks']['n_samples'] == 20 * 1024
        assert read_summary(out_dir / SUMMARY_FILE)['analysis'] == 'full'

    @pytest.mark.io_cli
    def test_gap_analysis_respects_the_floor(self, out_dir):
        summary = run_experiment(ExperimentConfig(n=10, lam=0.3, trials=10, seed=4, analysis='gap', out_dir=out_dir))
        gap = summary['results']['gap']
        assert gap['lambda_gap'] >= 0.3 and gap['violations'] == 0
        assert summary['checks'] == {'gap_bound': True}

    @pytest.mark.io_cli
    def test_fully_mixed_runs_skip_the_law(self, out_dir):
        summary = run_experiment(ExperimentConfig(n=6, lam=1.0, trials=5, seed=5, out_dir=out_dir))
        assert summary['checks'] == {'full_system_fully_mixed': True}
        assert 'ks' not in summary['results']['full_system']

    @pytest.mark.io_cli
    @pytest.mark.parametrize('m', [12, 8, 4])
    def test_subsystem_histogram_follows_law(self, m, out_dir):
        cfg = ExperimentConfig(n=12, partition_a_bits=tuple(range(m)), trials=1000, seed=6, analysis='subsystem',
                               out_dir=out_dir)
        run_experiment(cfg)
        h = read_histogram_csv(out_dir / 'subsystem.csv')
        law = AnalyticLaw.subsystem_beta(1 << 12, 1 << (12 - m))
        expected = (cdf(law, h.edges[1:]) - cdf(law, h.edges[:-1])) / h.widths
        bin_mass = expected * h.widths
        tolerance = 5 * np.sqrt(bin_mass * (1 - bin_mass) / h.count) / h.widths + 1e-3
        assert np.all(np.abs(h.densities - expected) <= tolerance), f'm={m}: {h.densities - expected}'

    @pytest.mark.io_cli
    def test_identical_configs_give_identical_bytes(self, tmp_path):
        outputs = []
        for name, workers in (('first', 1), ('second', 4)):
            cfg = ExperimentConfig(n=8, partition_a_bits=(0, 1, 2, 3), lam=0.2, trials=30, seed=7,
                                   analysis='conditional', workers=workers, out_dir=tmp_path / name)
            run_experiment(cfg)
            outputs.append(((tmp_path / name / SUMMARY_FILE).read_bytes(),
                            (tmp_path / name / 'conditional.csv').read_bytes()))
        assert outputs[0][1] == outputs[1][1], 'Histogram depends on the worker count'
        summaries = [yaml.safe_load(summary) for summary, _ in outputs]
        for summary in summaries:
            summary['config'].pop('workers')
        assert summaries[0] == summaries[1]


class TestCli:
    @pytest.mark.io_cli
    def test_laws_writes_a_table(self, out_dir, capsys):
        path = out_dir / 'law.csv'
        code = main(['laws', '--family', 'SubsystemBeta', '--n', '12', '--m', '8', '--lambda', '0.3',
                     '--points', '11', '--output', str(path)])
        lines = path.read_text().splitlines()
        assert code == EXIT_OK
        assert lines[0].startswith('# ShiftedSubsystemBeta(N=4096, M=256, K=16')
        assert lines[1] == 'x,pdf,cdf' and len(lines) == 13
        assert str(path) in capsys.readouterr().out

    @pytest.mark.io_cli
    def test_sample_then_analyze_the_file(self, out_dir):
        samples_path = out_dir / 'samples.yaml'
        assert main(['sample', '--n', '4', '--lambda', '0.3', '--shots', '2000', '--seed', '8',
                     '--out-dir', str(out_dir), '--output', str(samples_path)]) == EXIT_OK
        samples = read_samples(samples_path)
        assert samples.total == 2000 and samples.meta.lambda_claim == 0.3
        code = main(['analyze', '--analysis', 'full', '--n', '4', '--samples', str(samples_path),
                     '--out-dir', str(out_dir / 'analysis')])
        assert code == EXIT_OK
        summary = read_summary(out_dir / 'analysis' / SUMMARY_FILE)
        assert summary['config']['samples_path'] == str(samples_path)
        assert summary['results']['full_system']['histogram']['count'] == 16

    @pytest.mark.io_cli
    def test_xeb_of_text_samples(self, tmp_path, out_dir):
        samples_path = tmp_path / 'samples.txt'
        samples_path.write_text('\n'.join(['00', '01', '10', '11'] * 25) + '\n')
        code = main(['xeb', '--n', '2', '--a-bits', '0', '--samples', str(samples_path), '--out-dir', str(out_dir)])
        summary = read_summary(out_dir / SUMMARY_FILE)
        assert code == EXIT_OK
        assert summary['results']['xeb_full']['shots'] == 100
        assert summary['results']['xeb_conditional_all']['yields'] == [50, 50]

    @pytest.mark.io_cli
    def test_xeb_of_a_sample_file_scores_the_sampled_state(self, out_dir):
        samples_path = out_dir / 'samples.yaml'
        assert main(['sample', '--n', '10', '--lambda', '0.2', '--shots', '200000', '--seed', '8',
                     '--out-dir', str(out_dir), '--output', str(samples_path)]) == EXIT_OK
        code = main(['xeb', '--n', '10', '--samples', str(samples_path), '--out-dir', str(out_dir / 'xeb')])
        summary = read_summary(out_dir / 'xeb' / SUMMARY_FILE)
        full = summary['results']['xeb_full']
        assert code == EXIT_OK
        assert (summary['config']['seed'], summary['config']['lambda']) == (8, 0.2)
        assert summary['checks'] == {'xeb_full_3sigma': True}
        assert full['fidelity'] > 0.5, f"F={full['fidelity']} ± {full['std_error']}, expected {full['state_expected']}"

    @pytest.mark.io_cli
    def test_xeb_seed_contradicting_the_sample_file_exits_with_error(self, out_dir):
        samples_path = out_dir / 'samples.yaml'
        assert main(['sample', '--n', '4', '--shots', '1000', '--seed', '8',
                     '--out-dir', str(out_dir), '--output', str(samples_path)]) == EXIT_OK
        assert main(['xeb', '--n', '4', '--seed', '9', '--samples', str(samples_path),
                     '--out-dir', str(out_dir / 'xeb')]) == EXIT_ERROR

    @pytest.mark.io_cli
    def test_undecodable_sample_file_exits_with_error(self, tmp_path, out_dir):
        samples_path = tmp_path / 'samples.txt'
        samples_path.write_bytes(b'\xff\xfe01\n')
        assert main(['gap', '--n', '2', '--samples', str(samples_path), '--out-dir', str(out_dir)]) == EXIT_ERROR

    @pytest.mark.io_cli
    def test_missing_sample_file_exits_with_error(self, tmp_path, out_dir):
        missing = tmp_path / 'missing.txt'
        assert main(['gap', '--n', '2', '--samples', str(missing), '--out-dir', str(out_dir)]) == EXIT_ERROR

    @pytest.mark.io_cli
    def test_invalid_configuration_exits_with_error(self, out_dir):
        assert main(['analyze', '--n', '30', '--out-dir', str(out_dir)]) == EXIT_ERROR

    @pytest.mark.io_cli
    def test_sample_file_of_wrong_size_exits_with_error(self, tmp_path, out_dir):
        samples_path = tmp_path / 'samples.txt'
        samples_path.write_text('010\n')
        assert main(['gap', '--n', '4', '--samples', str(samples_path), '--out-dir', str(out_dir)]) == EXIT_ERROR
