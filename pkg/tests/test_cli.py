import io
import json

import numpy as np
import pandas as pd
import pytest

import workflow
from cli.main import _apply_overrides, build_parser, main
from models.geometry import Loop
from models.pencil import MatrixTuple
from utils.config_loader import load_config
from utils.serialization import tuple_to_dict, write_json


@pytest.fixture
def files(tmp_path, split, braid, diagonal_pair, clock_shift):
    """Input JSON files of the standard tuples, functionals and loops."""
    padded = MatrixTuple.from_matrices(list(clock_shift(3).matrices) + [np.zeros((3, 3))])
    documents = {
        'split': tuple_to_dict(split),
        'braid': tuple_to_dict(braid),
        'diagonal': tuple_to_dict(diagonal_pair),
        'padded': tuple_to_dict(padded),
        'phi_1': {'label': 'phi_1', 'diagonal': [1, 0, 0]},
        'linking': Loop(kind='circle', center=[1, -1, 0], direction=[1, 0, 0], radius=0.1).to_dict(),
        'touching': Loop(kind='circle', center=[1, -1, 0], direction=[1, 0, 0], radius=0.0).to_dict(),
    }
    paths = {}
    for name, data in documents.items():
        paths[name] = str(tmp_path / f'{name}.json')
        write_json(data, paths[name])
    paths['config'] = str(tmp_path / 'missing.yaml')
    return paths


def _run(files, *argv):
    return main(['--config', files['config'], '--log-level', 'WARNING', *argv])


class TestParser:

    def test_subcommands(self):
        args = build_parser().parse_args(['demo', 'rotation', '--q', '4'])
        assert args.command == 'demo'
        assert args.demo == 'rotation'
        assert args.q == 4

    def test_rotation_needs_q_at_least_two(self, files):
        with pytest.raises(SystemExit) as info:
            _run(files, 'demo', 'rotation', '--q', '1')
        assert info.value.code == 1

    def test_missing_command(self):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 1

    def test_complex_arguments(self):
        args = build_parser().parse_args(['demo', 'disk', '--coeffs', '1', '-1', '--ws', '0.5j'])
        assert args.coeffs == [1, -1]
        assert args.ws == [0.5j]

    def test_threshold_flags(self):
        args = build_parser().parse_args(['--null-tol', '1e-6', '--verify-tol', '1e-5', '--period-tol', '1e-9',
                                          '--central-tol', '1e-7', 'det', 'tuple.json'])
        config = _apply_overrides(load_config(None), args)
        assert config['equiv']['null_tol'] == 1e-6
        assert config['spectrum']['verify_tol'] == 1e-5
        assert config['periods']['tolerance'] == 1e-9
        assert config['mcform']['central_tol'] == 1e-7

    def test_thresholds_default_to_config(self):
        config = _apply_overrides(load_config(None), build_parser().parse_args(['det', 'tuple.json']))
        assert config['equiv']['null_tol'] == 1e-8
        assert config['mcform']['central_tol'] == 1e-10

    def test_negative_threshold(self, files):
        with pytest.raises(SystemExit) as info:
            _run(files, '--null-tol', '-1', 'det', files['split'])
        assert info.value.code == 1


class TestCommands:

    def test_det(self, files, capsys):
        assert _run(files, 'det', files['split']) == 0
        document = json.loads(capsys.readouterr().out)
        assert document['degree'] == 3
        assert document['nvars'] == 3
        re, im = document['coefficients']['3,0,0']
        assert re == pytest.approx(1.0, abs=1e-8)
        assert im == pytest.approx(0.0, abs=1e-8)

    def test_arrange(self, files, capsys):
        assert _run(files, 'arrange', files['diagonal']) == 0
        document = json.loads(capsys.readouterr().out)
        assert len(document['planes']) == 2
        assert document['factorization']['max_residual'] <= 1e-9

    def test_arrange_not_commutative(self, files):
        assert _run(files, 'arrange', files['split']) == 3

    def test_check_form(self, files, capsys):
        assert _run(files, 'check-form', files['split'], files['phi_1'], '--points', '2') == 0
        document = json.loads(capsys.readouterr().out)
        assert len(document['points']) == 2
        assert set(document['passed']) == {'euler', 'resolvent_derivative', 'flatness', 'closedness'}
        assert document['functional'] == 'phi_1'

    def test_period(self, files, capsys):
        assert _run(files, 'period', files['split'], files['phi_1'], files['linking']) == 0
        document = json.loads(capsys.readouterr().out)
        assert document['verdict'] == 'NONTRIVIAL'
        assert document['quantized'] == 1

    def test_period_touching_spectrum(self, files):
        assert _run(files, 'period', files['split'], files['phi_1'], files['touching']) == 4

    def test_equiv_not_similar(self, files):
        assert _run(files, 'equiv', files['braid'], files['padded']) == 3

    def test_equiv_self(self, files, capsys):
        assert _run(files, 'equiv', files['split'], files['split']) == 0
        document = json.loads(capsys.readouterr().out)
        assert document['nullspace_dimension'] == 2
        assert document['residual'] <= 1e-8

    def test_sample_without_lines(self, files, capsys):
        assert _run(files, 'sample', files['split'], '--lines', '0') == 0
        frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
        assert frame.empty
        assert 'margin' in frame.columns

    def test_sample_to_file(self, files, tmp_path):
        output = tmp_path / 'cloud.csv'
        plot = tmp_path / 'cloud.png'
        assert _run(files, 'sample', files['braid'], '--lines', '4', '-o', str(output), '--plot', str(plot)) == 0
        frame = pd.read_csv(output)
        assert frame['multiplicity'].sum() == 12
        assert plot.exists()

    def test_slice(self, files, capsys):
        assert _run(files, 'sample', files['split'], '--chart', '0') == 0
        frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
        assert len(frame) == 101 * 101

    def test_disk_singular(self, files, capsys):
        assert _run(files, 'demo', 'disk', '--coeffs', '1', '-1') == 0
        assert json.loads(capsys.readouterr().out)['invertible'] is False

    def test_disk_profile(self, files, capsys):
        assert _run(files, 'demo', 'disk', '--coeffs', '2', '1', '--ws', '0', '1j') == 0
        document = json.loads(capsys.readouterr().out)
        assert [row['winding'] for row in document['period_profile']] == [1, 1]

    def test_rotation_demo(self, files, capsys):
        assert _run(files, 'demo', 'rotation', '--q', '3', '--lines', '5') == 0
        document = json.loads(capsys.readouterr().out)
        assert document['outer_period']['quantized'] == 1
        assert document['locus']['max_deviation'] <= 1e-8

    def test_missing_file(self, files, tmp_path):
        assert _run(files, 'det', str(tmp_path / 'absent.json')) == 1

    def test_malformed_tuple(self, files, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text(json.dumps({'k': 4, 'matrices': [[[1]], [[2]]]}))
        assert _run(files, 'det', str(path)) == 1

    def test_lapack_failure_is_numerical(self, files, monkeypatch):
        def fail(*args, **kwargs):
            raise np.linalg.LinAlgError("SVD did not converge")

        monkeypatch.setattr(workflow, 'compute_det', fail)
        assert _run(files, 'det', files['split']) == 2

    def test_check_form_reports_centrality(self, files, capsys):
        assert _run(files, '--central-tol', '1e-9', 'check-form', files['split'], files['phi_1'], '--points', '1') == 0
        assert json.loads(capsys.readouterr().out)['central'] is True
