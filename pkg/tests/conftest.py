import pytest

import lindbloch as lb
from lindbloch import analysis
from lindbloch import sweep as sweep_mod


@pytest.fixture(scope="session")
def basis2():
    return lb.build_basis(2)


@pytest.fixture(scope="session")
def basis4():
    return lb.build_basis(4)


@pytest.fixture(scope="session")
def bare():
    return lb.BARE_PARAMS


@pytest.fixture(scope="session")
def bare_nominal():
    return analysis.nominal_bundle(lb.BARE_PARAMS)


@pytest.fixture(scope="session")
def default_sweeps():
    """One sweep per catalog perturbation on its default grid."""
    return {
        pid: sweep_mod.run_sweep(sweep_mod.SweepSpec(perturbation=pid, workers=1))
        for pid in sweep_mod.CATALOG_IDS
    }
