import json
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from core.periods import PeriodIntegrator
from core.spectrum import affine_slice, cloud_frame, cloud_sample
from models.forms import LinearFunctional
from models.geometry import Hyperplane, Loop, SliceGrid
from reports import DiagramGenerator, ReportGenerator
from utils.config_loader import DEFAULT_CONFIG, SEED_ENV_VAR, get_config_value, load_config
from utils.geometry_utils import normalize_projective, projective_distance
from utils.serialization import (
    decode_complex,
    load_functional,
    load_loop,
    load_tuple,
    read_json,
    tuple_from_dict,
    tuple_to_dict,
    write_json,
)


class TestConfigLoader:

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv(SEED_ENV_VAR, raising=False)
        config = load_config(None)
        assert config == DEFAULT_CONFIG
        assert config is not DEFAULT_CONFIG

    def test_missing_file(self, tmp_path, monkeypatch):
        monkeypatch.delenv(SEED_ENV_VAR, raising=False)
        assert load_config(str(tmp_path / 'absent.yaml')) == DEFAULT_CONFIG

    def test_shipped_file_matches_defaults(self, monkeypatch):
        monkeypatch.delenv(SEED_ENV_VAR, raising=False)
        shipped = Path(__file__).resolve().parent.parent / 'config.yaml'
        assert load_config(str(shipped)) == DEFAULT_CONFIG

    def test_threshold_keys(self):
        config = load_config(None)
        assert config['spectrum']['verify_tol'] == 1e-6
        assert config['equiv']['residual_tol'] == 1e-7
        assert 'rcond_factor' not in config['numerics']
        assert 'max_condition' not in config['equiv']

    def test_partial_override(self, tmp_path, monkeypatch):
        monkeypatch.delenv(SEED_ENV_VAR, raising=False)
        path = tmp_path / 'config.yaml'
        path.write_text("numerics:\n  seed: 7\nperiods:\n  max_samples: 1024\n")
        config = load_config(str(path))
        assert config['numerics']['seed'] == 7
        assert config['numerics']['membership_tol'] == 1e-8
        assert config['periods']['max_samples'] == 1024
        assert config['periods']['initial_samples'] == 256

    def test_env_seed(self, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, '123')
        assert load_config(None)['numerics']['seed'] == 123

    def test_bad_env_seed(self, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, 'abc')
        assert load_config(None)['numerics']['seed'] == 42

    def test_invalid_yaml(self, tmp_path, monkeypatch):
        monkeypatch.delenv(SEED_ENV_VAR, raising=False)
        path = tmp_path / 'broken.yaml'
        path.write_text("numerics: [unclosed\n")
        assert load_config(str(path)) == DEFAULT_CONFIG

    def test_get_config_value(self):
        config = load_config(None)
        assert get_config_value(config, 'spectrum.method') == 'pencil'
        assert get_config_value(config, 'spectrum.missing', 'fallback') == 'fallback'
        assert get_config_value(config, 'spectrum.method.deeper', 3) == 3


class TestGeometryUtils:

    def test_normalized(self):
        v = normalize_projective([0, 3j, 4])
        assert np.linalg.norm(v) == pytest.approx(1.0)
        assert v[1].imag == pytest.approx(0.0, abs=1e-15)
        assert v[1].real > 0

    def test_zero(self):
        with pytest.raises(ValueError):
            normalize_projective(np.zeros(3))

    def test_projective_distance(self):
        assert projective_distance([1, 2], [2j, 4j]) < 1e-12
        assert projective_distance([1, 0], [0, 1]) == pytest.approx(np.sqrt(2))


class TestSerialization:

    def test_decode_complex(self):
        assert decode_complex(2) == 2
        assert decode_complex([1.5, -2]) == 1.5 - 2j
        with pytest.raises(ValueError):
            decode_complex('1+2j')

    def test_tuple_round_trip(self, tmp_path, split):
        path = tmp_path / 'split.json'
        write_json(tuple_to_dict(split), path)
        loaded = load_tuple(path)
        assert loaded.label == split.label
        assert_allclose(loaded.matrices, split.matrices)

    def test_real_entries(self):
        A = tuple_from_dict({'k': 1, 'n': 1, 'matrices': [[[1]], [[-1]]]})
        assert A.k == 1
        assert A.n == 1

    @pytest.mark.parametrize('data', [
        {'k': 2, 'matrices': [[[1]], [[2]]]},
        {'n': 3, 'matrices': [[[1]], [[2]]]},
        {'k': 1},
    ])
    def test_declared_sizes(self, data):
        with pytest.raises(ValueError):
            tuple_from_dict(data)

    @pytest.mark.parametrize('data, expected', [
        ({'kind': 'trace', 'k': 3}, np.eye(3)),
        ({'kind': 'normalized_trace', 'k': 2}, np.eye(2) / 2),
        ({'diagonal': [0, [1, 1]]}, np.diag([0, 1 + 1j])),
        ({'weight': [[0, 1], [[0, 2], 0]]}, np.array([[0, 1], [2j, 0]])),
    ])
    def test_functionals(self, tmp_path, data, expected):
        path = tmp_path / 'phi.json'
        write_json(data, path)
        assert_allclose(load_functional(path).weight, expected)

    def test_functional_dict(self):
        phi = LinearFunctional.from_diagonal([1, 0], label='phi', central=True)
        restored = LinearFunctional.from_dict(phi.to_dict())
        assert restored.label == 'phi'
        assert restored.claimed_central
        assert_allclose(restored.weight, phi.weight)

    def test_loop_with_bare_numbers(self, tmp_path):
        path = tmp_path / 'loop.json'
        write_json({'kind': 'circle', 'center': [1, [0, 1]], 'direction': [0, 1], 'radius': 0.5}, path)
        loop = load_loop(path)
        assert_allclose(loop.center, [1, 1j])
        assert loop.radius == 0.5
        assert loop.samples == 256

    def test_polygon_loop(self, tmp_path):
        path = tmp_path / 'loop.json'
        write_json({'kind': 'polygon', 'vertices': [[1, 0], [0, 1], [[0, 1], 0]]}, path)
        loop = load_loop(path)
        assert loop.num_edges == 3
        assert loop.dimension == 2

    def test_hyperplane_dict(self):
        plane = Hyperplane([2, 0, 1j], multiplicity=2)
        restored = Hyperplane.from_dict(json.loads(json.dumps(plane.to_dict())))
        assert restored.multiplicity == 2
        assert projective_distance(restored.normal, plane.normal) < 1e-12

    def test_read_json(self, tmp_path):
        path = tmp_path / 'nested' / 'data.json'
        write_json({'a': [1, 2]}, path)
        assert read_json(path) == {'a': [1, 2]}


class TestReports:

    def test_csv_round_trip(self, tmp_path, braid):
        frame = cloud_frame(cloud_sample(braid, 3, seed=4), 3)
        path = tmp_path / 'out' / 'cloud.csv'
        ReportGenerator(load_config(None)).write_csv(frame, path)
        restored = pd.read_csv(path, float_precision="round_trip")
        assert list(restored.columns) == list(frame.columns)
        assert_allclose(restored.to_numpy(dtype=float), frame.to_numpy(dtype=float), rtol=0, atol=0)

    def test_period_report(self, split, phis):
        loop = Loop(kind='circle', center=[1, -1, 0], direction=[1, 0, 0], radius=0.1)
        integrator = PeriodIntegrator()
        certificate = integrator.nontriviality_certificate(split, phis[0], [loop])
        report = ReportGenerator().period_report(certificate.periods[0], certificate)
        assert report['verdict'] == 'NONTRIVIAL'
        assert report['normalized'][0] == pytest.approx(1.0, abs=1e-8)
        json.dumps(report)

    def test_diagnostics_without_points(self):
        report = ReportGenerator().diagnostics_report('Tr', 0.0, [])
        assert report['passed'] == {}
        assert report['points'] == []

    def test_slice_diagram(self, tmp_path, split):
        frame = affine_slice(split, chart=0, grid=SliceGrid(resolution=21))
        path = tmp_path / 'slice.png'
        fig = DiagramGenerator(dpi=50).generate_slice_diagram(frame, title='split', output_path=str(path))
        plt.close(fig)
        assert path.stat().st_size > 0

    def test_cloud_diagram(self, tmp_path, clock_shift):
        frame = cloud_frame(cloud_sample(clock_shift(4), 5), 2)
        fig = DiagramGenerator(dpi=50).generate_cloud_diagram(frame)
        assert fig.axes[0].get_xlabel() == '|z0|'
        plt.close(fig)
