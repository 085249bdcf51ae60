import os

import pytest
import yaml

from . import exceptions, util


def _write(tmp_path, content):
    fname = tmp_path / 'settings.yml'
    with open(fname, 'w') as f:
        f.write(content)
    return str(fname)


def test_defaults():
    settings = util.load_settings()

    assert settings == util.DEFAULT_SETTINGS
    assert settings is not util.DEFAULT_SETTINGS


def test_overlay(tmp_path):
    fname = _write(tmp_path, yaml.dump({'max_states': 100, 'cache_dir': 'here'}))
    settings = util.load_settings(fname)

    assert settings['max_states'] == 100
    assert settings['cache_dir'] == 'here'
    assert settings['dot_node_cap'] == util.DEFAULT_SETTINGS['dot_node_cap']

    assert util.load_settings(_write(tmp_path, '')) == util.DEFAULT_SETTINGS


@pytest.mark.parametrize('content,key', [
    ('max_sates: 10\n', 'max_sates'),
    ('max_states: ten\n', 'max_states'),
    ('max_states: true\n', 'max_states'),
    ('dot_node_cap: 0\n', 'dot_node_cap'),
    ('cache_dir: 3\n', 'cache_dir'),
    ('- max_states\n', None),
])
def test_malformed(tmp_path, content, key):
    with pytest.raises(exceptions.ConfigurationMalformedError) as excinfo:
        util.load_settings(_write(tmp_path, content))

    assert excinfo.value.key == key


def test_cache_dir(monkeypatch):
    monkeypatch.delenv('CRYPTDFA_CACHE', raising=False)
    assert util.get_cache_dir() is None
    assert util.get_cache_dir({'cache_dir': '~/dfa'}) == os.path.expanduser('~/dfa')

    monkeypatch.setenv('CRYPTDFA_CACHE', '/tmp/dfa')
    assert util.get_cache_dir({'cache_dir': '~/dfa'}) == '/tmp/dfa'


def test_parallelism(monkeypatch):
    monkeypatch.setenv('N_THREADS', '3')
    assert util.get_parallelism() == 3
