from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from pathlib import Path

from src.common.errors import ArgumentError
from src.core.marginals import Partition
from src.managers.config_manager import ConfigManager
from src.utils.project import Project


class AnalysisKind(str, Enum):
    FULL = 'full'
    SUBSYSTEM = 'subsystem'
    CONDITIONAL = 'conditional'
    XEB = 'xeb'
    GAP = 'gap'


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Parameters of one experiment run. Field names match the CLI flags and the keys of
    `settings.experiment` in config.yaml.
    """
    n: int = 12
    partition_a_bits: tuple[int, ...] = ()
    lam: float = 0.0
    trials: int = 100
    shots: int = 100_000
    seed: int = 0
    analysis: AnalysisKind = AnalysisKind.FULL
    condition_b: int | None = None
    bins: int = 50
    out_dir: Path = field(default_factory=lambda: Project.get_default_out_dir())
    n_max: int = 24
    min_post_selected: int = 10
    workers: int = 1
    samples_path: Path | None = None
    # fields set by overrides rather than config.yaml
    explicit: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, 'analysis', AnalysisKind(self.analysis))
        object.__setattr__(self, 'explicit', frozenset(self.explicit))
        object.__setattr__(self, 'partition_a_bits', tuple(int(q) for q in self.partition_a_bits))
        object.__setattr__(self, 'out_dir', Path(self.out_dir))
        if self.samples_path is not None:
            object.__setattr__(self, 'samples_path', Path(self.samples_path))
        if not 1 <= self.n <= self.n_max:
            raise ArgumentError(f"n={self.n} must lie in [1, {self.n_max}]")
        if not 0.0 <= self.lam <= 1.0:
            raise ArgumentError(f"lambda={self.lam} must lie in [0, 1]")
        if self.trials < 1 or self.shots < 1 or self.bins < 1 or self.workers < 1:
            raise ArgumentError("trials, shots, bins and workers must all be at least 1")
        partition = self.partition
        if self.condition_b is not None and not 0 <= self.condition_b < partition.K:
            raise ArgumentError(f"condition_b={self.condition_b} must lie in [0, {partition.K})")

    @property
    def partition(self) -> Partition:
        """
        :return: The configured partition, or A = every qubit when no a_bits are given.
        """
        return Partition(self.n, self.partition_a_bits or tuple(range(self.n)))

    @classmethod
    def from_config(cls, config: ConfigManager, overrides: dict | None = None) -> 'ExperimentConfig':
        """
        Builds a config from `settings.experiment`, `settings.limits` and `settings.runtime`,
        then applies overrides (CLI flags). None-valued overrides are ignored.
        :param config: Loaded configuration.
        :param overrides: Field name -> value.
        :return: The validated ExperimentConfig.
        """
        values = {}
        experiment = config.get_section('settings', 'experiment')
        renames = {'lambda': 'lam', 'a_bits': 'partition_a_bits'}
        for key, value in experiment.items():
            values[renames.get(key, key)] = value
        values['n_max'] = config.get_config_value('settings', 'limits', 'n_max', default=24)
        values['min_post_selected'] = config.get_config_value('settings', 'limits', 'min_post_selected', default=10)
        values['workers'] = config.get_config_value('settings', 'runtime', 'workers', default=1)
        explicit = set()
        for key, value in (overrides or {}).items():
            if value is not None:
                values[renames.get(key, key)] = value
                explicit.add(renames.get(key, key))
        values['explicit'] = frozenset(explicit)
        if values.get('partition_a_bits') is None:
            values['partition_a_bits'] = ()
        values['out_dir'] = Project.get_default_out_dir(values.get('out_dir')) \
            if not (overrides or {}).get('out_dir') else Path(overrides['out_dir'])
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ArgumentError(f"Unknown experiment settings: {sorted(unknown)}")
        return cls(**values)

    def as_dict(self) -> dict:
        """
        Plain-typed view for the summary document. The output directory is left out so
        summaries written to different places stay byte-identical.
        """
        values = asdict(self)
        values['analysis'] = self.analysis.value
        values['partition_a_bits'] = list(self.partition_a_bits)
        values['lambda'] = values.pop('lam')
        values.pop('out_dir')
        values.pop('explicit')
        values['samples_path'] = str(self.samples_path) if self.samples_path else None
        return values
