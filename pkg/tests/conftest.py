"""Pytest fixtures over the shared builders in ``support``."""

import pytest

from fuzzyfd import DictionaryEmbedder, MatcherConfig

from support import CITIES_SYNONYMS, build_cities_relset, write_cities_files


@pytest.fixture
def cities_relset():
    return build_cities_relset()


@pytest.fixture
def cities_provider() -> DictionaryEmbedder:
    return DictionaryEmbedder(CITIES_SYNONYMS)


@pytest.fixture
def cities_config(cities_provider) -> MatcherConfig:
    return MatcherConfig(provider=cities_provider, theta=0.7)


@pytest.fixture
def cities_files(tmp_path):
    return write_cities_files(tmp_path)
