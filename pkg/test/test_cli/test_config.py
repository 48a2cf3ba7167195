"""Tests for reading and resolving run configurations."""

import json
from pathlib import Path

import numpy as np
import pytest

from photonq.config import GridSpec, RunConfig, StateSpec, load_config
from photonq.model import DensityMatrix, ExponentialPulse
from photonq.utils import RunConfigurationError

EXAMPLES = Path(__file__).parents[2] / "example"


def _document(**changes):
    document = {
        "model": {"gamma1": 0.5, "gamma2": 0.5},
        "pulse": {"kind": "exponential", "omega": 0.5},
        "state": {"rho_ee": 0.0},
        "grid": {"t_max": 20.0},
    }
    document.update(changes)
    return document


def _write(tmp_path, document) -> Path:
    path = tmp_path / "run.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


@pytest.mark.parametrize("name", ["ground_atom.json", "excited_atom.json", "vsystem.json"])
def test_examples_load(name):  # noqa
    config = load_config(EXAMPLES / name)
    run = config.resolve()
    assert run.model.dim in (2, 3)
    assert len(run.grid.times()) == config.grid.n_points


def test_atom_config_resolves(tmp_path):  # noqa
    run = load_config(_write(tmp_path, _document())).resolve()
    assert run.atom.gamma == pytest.approx(1.0)
    assert run.atom_state.rho_ee == 0.0
    assert isinstance(run.pulse, ExponentialPulse)
    assert isinstance(run.initial, DensityMatrix)
    assert run.time_unit == 1.0
    assert run.grid.times()[-1] == pytest.approx(20.0)


def test_overrides(tmp_path):  # noqa
    path = _write(tmp_path, _document(seed=3))
    assert load_config(path, seed=None).seed == 3
    assert load_config(path, seed=9, tolerance=1e-3).tolerance == 1e-3


def test_normalize_gamma(tmp_path):  # noqa
    document = _document(model={"gamma1": 1.0, "gamma2": 1.0}, normalize_gamma=True)
    run = load_config(_write(tmp_path, document)).resolve()
    assert run.atom.gamma == pytest.approx(1.0)
    assert run.pulse.omega == pytest.approx(0.25)
    assert run.grid.t_max == pytest.approx(40.0)
    record = run.record([(1.0, "R")], 2.0)
    assert record.events[0].time == pytest.approx(2.0)
    assert record.horizon == pytest.approx(4.0)


@pytest.mark.parametrize(
    "changes",
    [
        {"unknown": 1},
        {"model": {"gamma1": 0.5, "gamma2": 0.5, "kappa": 1.0}},
        {"pulse": {"kind": "exponential", "omega": -1.0}},
        {"grid": {"t_max": 1.0, "n_points": 1}},
        {"grid": {"t_min": 2.0, "t_max": 1.0}},
        {"tolerance": 0.0},
        {"state": {"rho_ee": 0.5, "psi": [1.0, 0.0]}},
        {"state": {"rho_ge": [0.1, 0.0]}},
        {"sampler": {"block_mode": "second-order"}},
    ],
)
def test_invalid_documents(tmp_path, changes):  # noqa
    with pytest.raises(RunConfigurationError):
        load_config(_write(tmp_path, _document(**changes)))


def test_unreadable_documents(tmp_path):  # noqa
    with pytest.raises(RunConfigurationError):
        load_config(tmp_path / "missing.json")
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(RunConfigurationError):
        load_config(path)
    path.write_text("[]", encoding="utf-8")
    with pytest.raises(RunConfigurationError):
        load_config(path)


def test_atom_state_errors(tmp_path):  # noqa
    document = _document(state={"rho_ee": 0.5, "rho_ge": [0.6, 0.0]})
    config = load_config(_write(tmp_path, document))
    with pytest.raises(RunConfigurationError):
        config.resolve()
    document = _document(state={"psi": [1.0, 0.0]})
    with pytest.raises(RunConfigurationError):
        load_config(_write(tmp_path, document)).resolve()


def test_matrix_model_states():  # noqa
    config = load_config(EXAMPLES / "vsystem.json")
    assert config.model.L2[0, 2] == 0.5j
    h = float(np.sqrt(0.5))
    psi = StateSpec(psi=[h, [0.0, h], 0.0]).initial(3)
    assert np.allclose(psi, [h, 1j * h, 0.0])
    rho = StateSpec(rho=[[0.5, 0.0], [0.0, 0.5]]).initial(2)
    assert isinstance(rho, DensityMatrix)
    with pytest.raises(RunConfigurationError):
        StateSpec(psi=[1.0, 0.0]).initial(3)
    with pytest.raises(ValueError):
        RunConfig.model_validate(
            _document(model={"dim": 2, "H": [[0.0]], "L1": [[0.0]], "L2": [[0.0]]})
        )


def test_grid_scaling():  # noqa
    grid = GridSpec(t_min=1.0, t_max=3.0, n_points=3)
    assert list(grid.times()) == [1.0, 2.0, 3.0]
    assert grid.scaled(2.0).t_max == 6.0
