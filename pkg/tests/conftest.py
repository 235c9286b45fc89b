import pytest
from src.core.state_core import RngSpec
from src.managers.config_manager import ConfigManager

MARKERS = {
    'state_core': 'Haar states, Dirichlet draws and depolarization',
    'distributions': 'analytic pdf/cdf/moment laws',
    'marginals': 'marginalization and conditioning',
    'stats': 'histograms, KS tests and lambda estimators',
    'xeb': 'sampling and linear XEB',
    'io_cli': 'file formats, configuration and the command line',
    'acceptance': 'desk-scale acceptance criteria',
}


def pytest_addoption(parser):
    """
    Adds a command-line option to pytest for overriding the master seed of seeded tests.
    """
    parser.addoption(
        "--master-seed", action="store", type=int, default=20240601,
        help="Master seed for Monte Carlo tests"
    )


def pytest_configure(config):
    for name, description in MARKERS.items():
        config.addinivalue_line("markers", f"{name}: {description}")


@pytest.fixture(scope='session')
def initiate_config():
    """
    Fixture to initialize the ConfigManager instance for session-wide configuration.
    :return: Instance of ConfigManager for accessing configuration settings.
    """
    yield ConfigManager()


@pytest.fixture(scope='session')
def master_seed(pytestconfig):
    return pytestconfig.getoption("master_seed")


@pytest.fixture
def rng_spec(master_seed):
    """
    Fixture returning a factory of RngSpec substreams under the session master seed.
    :param master_seed: Seed from --master-seed.
    :return: Callable mapping a stream index to an RngSpec.
    """
    def make(stream_index: int = 0) -> RngSpec:
        return RngSpec(master_seed, stream_index)
    return make


@pytest.fixture
def out_dir(tmp_path):
    """
    Fixture providing an empty output directory for a test.
    """
    path = tmp_path / 'out'
    path.mkdir()
    yield path
