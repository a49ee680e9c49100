"""
Pytest fixtures and configuration for shiftdiag tests
"""

import os
import sys

import pytest

# Add project root to path
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, project_root)

from shiftdiag.core.paths import corpus_root  # noqa: E402
from tests.utils.corpus import load_corpus_diagram, load_corpus_model  # noqa: E402


@pytest.fixture(scope="session")
def project_root_dir():
    """Return the project root directory"""
    return project_root


@pytest.fixture(scope="session")
def corpus_dir():
    """Return the example diagram directory"""
    return str(corpus_root())


@pytest.fixture(scope="session")
def corpus_diagram():
    """Factory: parsed corpus diagram by name (cached per session)"""
    cache = {}

    def _load(name):
        if name not in cache:
            cache[name] = load_corpus_diagram(name)
        return cache[name]
    return _load


@pytest.fixture(scope="session")
def corpus_model(corpus_diagram):
    """Factory: model of a corpus diagram from its .cpt file"""
    cache = {}

    def _load(name):
        if name not in cache:
            cache[name] = load_corpus_model(corpus_diagram(name))
        return cache[name]
    return _load


@pytest.fixture(scope="function")
def test_output_dir(tmp_path):
    """Per-test scratch directory for written diagrams, CSVs and reports"""
    out = tmp_path / "output"
    out.mkdir()
    return str(out)
