import shutil

import pytest
from hypothesis import settings

from abstext import Engine
from abstext.engine import default_data_dir

settings.register_profile("suite", max_examples=60, deadline=None)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    """Session copy of the bundled fixtures, so nothing touches the package."""
    dst = tmp_path_factory.mktemp("fixtures") / "data"
    shutil.copytree(default_data_dir(), dst)
    return dst


@pytest.fixture(scope="session")
def engine(data_dir) -> Engine:
    """Shared engine for read-only tests."""
    return Engine(data_dir=data_dir)


@pytest.fixture()
def fresh_engine(tmp_path) -> Engine:
    """Private data copy for tests that mutate catalog, lexicon or content."""
    dst = tmp_path / "data"
    shutil.copytree(default_data_dir(), dst)
    return Engine(data_dir=dst)


@pytest.fixture()
def fig_content(engine):
    return engine.get_content("Q62")
