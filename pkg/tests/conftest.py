import pytest

from trackstitch.cbtr import run_cbtr
from trackstitch.model import CbtrConfig
from trackstitch.synth import SynthConfig, generate_fleet, scenario_s1


def small_mixed_config(seed: int, n_vessels: int = 4, duration_s: int = 1800,
                       noise_sigma_m: float = 8.0) -> SynthConfig:
    """A compact fleet with every behavior represented, for fast runs."""
    return SynthConfig(n_vessels=n_vessels, duration_s=duration_s,
                       noise_sigma_m=noise_sigma_m, seed=seed)


@pytest.fixture(scope="session")
def s1():
    return generate_fleet(scenario_s1())


@pytest.fixture(scope="session")
def s1_cbtr(s1):
    return run_cbtr(s1, CbtrConfig())
