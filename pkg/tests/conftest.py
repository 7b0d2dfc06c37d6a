import numpy as np
import pytest

from levyflow.flows import drift_field
from levyflow.levy import NoiseSpec, StableComponent
from levyflow.reduction import ModelSpec, matrix_field

B_DIAG = np.diag([1.0, -2.0])


def build_model(name: str) -> ModelSpec:
    """Catalog models used across the suite."""
    if name == "cauchy1d":
        return ModelSpec(NoiseSpec([StableComponent.normalized(1.0)]),
                         drift_field("zero", dim=1), matrix_field("identity", dim=1),
                         name=name)
    if name == "linear1d":
        return ModelSpec(NoiseSpec([StableComponent.normalized(1.0)]),
                         drift_field("linear", matrix=[[1.0]]),
                         matrix_field("identity", dim=1), name=name)
    if name == "rotation":
        return ModelSpec(NoiseSpec([StableComponent.normalized(0.7),
                                    StableComponent.normalized(0.9)]),
                         drift_field("rotation"), matrix_field("identity", dim=2),
                         name=name)
    if name == "tanh2d":
        return ModelSpec(NoiseSpec([StableComponent.normalized(0.8)] * 2),
                         drift_field("tanh", dim=2, amplitude=0.5),
                         matrix_field("tanh_diag", dim=2, amplitude=0.25), name=name)
    if name == "linear2d":
        return ModelSpec(NoiseSpec([StableComponent.normalized(1.0)] * 2),
                         drift_field("linear", matrix=B_DIAG),
                         matrix_field("tanh_diag", dim=2, amplitude=0.25), name=name)
    raise ValueError(name)


CATALOG = ["cauchy1d", "linear1d", "rotation", "tanh2d"]


@pytest.fixture(scope="session")
def catalog():
    return {name: build_model(name) for name in CATALOG}
