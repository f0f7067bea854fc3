"""
Pytest configuration and shared fixtures
"""
import pytest
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from models.schemas import AnalysisSettings, BeamConfig, SolverSettings


@pytest.fixture
def baseline():
    """The shipped baseline beam"""
    return BeamConfig()


@pytest.fixture
def uniform_beam():
    """Uniform beam of the baseline dimensions, no taper and no VEM"""
    return BeamConfig(h2=0.003, h3=0.0)


@pytest.fixture
def small_solver():
    """Coarse discretization for quick checks"""
    return SolverSettings(n=40)


@pytest.fixture
def analysis():
    return AnalysisSettings()


@pytest.fixture(scope="session")
def baseline_model():
    """Full-size baseline model, assembled once"""
    from core.assembly import build_model
    return build_model(BeamConfig(), 140)


@pytest.fixture(scope="session")
def small_model():
    """Baseline geometry with a coarse basis, assembled once"""
    from core.assembly import build_model
    return build_model(BeamConfig(), 40)


@pytest.fixture
def config_file(tmp_path):
    """Write a configuration file and return its path"""
    def _write(text: str, name: str = "beam.cfg") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path
    return _write


@pytest.fixture
def baseline_cfg_path():
    return Path(__file__).parent.parent / "profiles" / "baseline.cfg"


@pytest.fixture
def output_folder(tmp_path):
    """Output folder for artifacts"""
    output = tmp_path / "output"
    output.mkdir()
    return output
