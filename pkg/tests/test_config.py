import json
import math

import pytest
import yaml

from meanper.config import (ExperimentConfig, FunctionConfig, create_default_config, default_config,
                            load_config)
from meanper.errors import ConfigError


def fourier_document(**extra):
    data = {
        'phi': {'kind': 'expsum', 'terms': [[1.0, 1.0], [-1.0, 0.0]]},
        'f': {'kind': 'sin', 'omega': 2 * math.pi},
        'radius': 20.0,
    }
    data.update(extra)
    return data


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / 'experiment.json'
    path.write_text(json.dumps(fourier_document()))
    return path


class TestFunctionConfig:
    def test_pair_terms(self):
        phi = FunctionConfig.model_validate({'kind': 'expsum', 'terms': [[1.0, 1.0], [-1.0, 0.0]]})
        spec = phi.to_spec()
        assert spec(0.0) == pytest.approx(0.0)
        assert spec(1.0) == pytest.approx(math.e - 1)

    def test_object_terms_with_complex_values(self):
        phi = FunctionConfig.model_validate({'kind': 'expsum', 'terms': [
            {'weight': 1.0, 'lambda': {'re': 0.0, 'im': 1.0}},
        ]})
        assert phi.to_spec()(math.pi) == pytest.approx(-1.0)

    def test_polyexpsum_pair_terms(self):
        phi = FunctionConfig.model_validate({'kind': 'polyexpsum', 'terms': [[[0.0, 1.0], 0.0]]})
        assert phi.to_spec()(3.0) == pytest.approx(3.0)

    def test_sin_and_cos_expand(self):
        sin = FunctionConfig(kind='sin', omega=2.0).to_spec()
        cos = FunctionConfig.model_validate({'kind': 'cos', 'omega': 2.0, 'amplitude': 3.0}).to_spec()
        assert sin(0.4) == pytest.approx(math.sin(0.8))
        assert cos(0.4) == pytest.approx(3.0 * math.cos(0.8))

    @pytest.mark.parametrize("data", [
        {'kind': 'expsum'},
        {'kind': 'polynomial'},
        {'kind': 'segment_average', 't': -1.0},
        {'kind': 'sin'},
        {'kind': 'bessel'},
    ])
    def test_invalid_functions(self, data):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(fourier_document(phi=data))


class TestValidation:
    def test_defaults(self):
        config = ExperimentConfig.from_dict(fourier_document())
        assert config.K is None
        assert config.theta.kind == 'linear'
        assert config.m_grid == [1.0, 2.0]
        assert config.tolerances.residual == 1e-8
        assert config.outputs.directory == 'results'
        assert len(config.identity_points()) == 8
        assert all(abs(xi) == pytest.approx(3.0) for xi in config.identity_points())

    def test_dotted_diagnostics(self):
        with pytest.raises(ConfigError) as excinfo:
            ExperimentConfig.from_dict(fourier_document(radius=-1.0, grid={'n_radial': 0}))
        diagnostics = excinfo.value.diagnostics
        assert any(d.startswith('radius:') for d in diagnostics)
        assert any(d.startswith('grid.n_radial:') for d in diagnostics)
        assert str(excinfo.value).startswith("Configuration validation failed: ")
        assert excinfo.value.exit_code == 4

    def test_missing_radius(self):
        data = fourier_document()
        del data['radius']
        with pytest.raises(ConfigError, match="radius"):
            ExperimentConfig.from_dict(data)

    def test_unknown_field(self):
        with pytest.raises(ConfigError, match="colour"):
            ExperimentConfig.from_dict(fourier_document(colour='red'))

    def test_joined_value_errors(self):
        with pytest.raises(ConfigError, match="m_grid entries must be positive; norm_p entries must be positive"):
            ExperimentConfig.from_dict(fourier_document(m_grid=[0.0], norm_p=[-1.0]))

    def test_grids(self):
        disk = ExperimentConfig.from_dict(fourier_document(grid={'radius': 2.0, 'n_radial': 2, 'n_angular': 4}))
        assert len(disk.grid.points()) == 9
        line = ExperimentConfig.from_dict(fourier_document(grid={'kind': 'line', 'start': 0.0, 'end': 1.0, 'n': 3}))
        assert line.grid.points() == [0, 0.5, 1.0]
        with pytest.raises(ConfigError, match="points grid needs values"):
            ExperimentConfig.from_dict(fourier_document(grid={'kind': 'points'}))

    def test_theta(self):
        config = ExperimentConfig.from_dict(fourier_document(theta={'kind': 'power', 'p': 2.0}))
        assert config.theta.to_spec()(3.0) == pytest.approx(9.0)
        with pytest.raises(ConfigError, match="power theta needs p"):
            ExperimentConfig.from_dict(fourier_document(theta={'kind': 'power'}))


class TestLoading:
    def test_json_file(self, config_file):
        config = load_config(config_file)
        assert config.radius == 20.0
        assert config.f.kind == 'sin'

    def test_yaml_file(self, tmp_path):
        path = tmp_path / 'experiment.yaml'
        path.write_text(yaml.safe_dump(fourier_document(K=3)))
        assert load_config(path).K == 3

    def test_json_syntax_error_position(self, tmp_path):
        path = tmp_path / 'broken.json'
        path.write_text('{\n  "radius": 20.0,\n  "phi": }\n')
        with pytest.raises(ConfigError, match="line 3, column"):
            load_config(path)

    def test_yaml_syntax_error_position(self, tmp_path):
        path = tmp_path / 'broken.yaml'
        path.write_text('radius: 20.0\nphi: [1, 2\n')
        with pytest.raises(ConfigError, match="YAML error at line"):
            load_config(path)

    def test_top_level_must_be_object(self, tmp_path):
        path = tmp_path / 'list.json'
        path.write_text('[1, 2]')
        with pytest.raises(ConfigError, match="top level"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / 'absent.json')

    def test_precedence(self, config_file, monkeypatch):
        monkeypatch.setenv('MEANPER_OUT', 'from-env')
        monkeypatch.setenv('MEANPER_THREADS', '2')
        config = load_config(config_file)
        assert config.outputs.directory == 'from-env'
        assert config.threads == 2

        overridden = load_config(config_file, {'outputs.directory': 'from-cli', 'radius': 5.0, 'K': None})
        assert overridden.outputs.directory == 'from-cli'
        assert overridden.radius == 5.0
        assert overridden.K is None

    def test_dotted_override(self, config_file):
        config = load_config(config_file, {'tolerances.residual': 1e-6, 'tolerances.identity': 1e-6})
        assert config.tolerances.residual == 1e-6
        assert config.tolerances.identity == 1e-6
        assert config.tolerances.zero_tol == 1e-10


class TestDefaultConfig:
    def test_default_is_fourier(self):
        config = default_config()
        spec = config.phi.to_spec()
        assert spec(2j * math.pi) == pytest.approx(0.0, abs=1e-12)
        assert config.f.to_spec()(0.25) == pytest.approx(1.0)

    @pytest.mark.parametrize("name", ['meanper.json', 'meanper.yaml'])
    def test_create_and_reload(self, tmp_path, name):
        path = create_default_config(tmp_path / name)
        assert path.exists()
        if name.endswith('.yaml'):
            assert path.read_text().startswith('# meanper experiment')
        assert load_config(path) == default_config()

    def test_to_dict_uses_lambda_alias(self):
        data = default_config().to_dict()
        assert 'lambda' in data['phi']['terms'][0]
        assert 'K' not in data
