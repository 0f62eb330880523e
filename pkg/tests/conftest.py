import pytest

from chroma_infer.color import load_uw71, published_uw71_path
from chroma_infer.pipeline import default_data_dir


@pytest.fixture(scope="session")
def palette():
    return load_uw71()


@pytest.fixture(scope="session")
def published_palette():
    # as-published coordinates; entry 7 luminance misprint intact
    return load_uw71(published_uw71_path(), validate=False)


@pytest.fixture(scope="session")
def demo_dir():
    return default_data_dir()
