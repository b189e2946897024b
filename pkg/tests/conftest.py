import pytest

from streamuniq import VorticityModel, run_uniqueness_analysis


@pytest.fixture(scope="session")
def classical_model():
    return VorticityModel.classical()


@pytest.fixture(scope="session")
def oscillatory_model():
    return VorticityModel.oscillatory()


@pytest.fixture(scope="session")
def classical_analysis(classical_model):
    # one full cross-method certification run shared by the read-only tests
    return run_uniqueness_analysis(classical_model)
