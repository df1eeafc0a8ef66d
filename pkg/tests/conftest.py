import os

import numpy as np
import pytest

LONG = os.environ.get("BOOLSENS_LONG") == "1"
EXTENDED = os.environ.get("BOOLSENS_EXTENDED") == "1"


def pytest_collection_modifyitems(config, items):
    skip_long = pytest.mark.skip(reason="set BOOLSENS_LONG=1 to run")
    skip_ext = pytest.mark.skip(reason="set BOOLSENS_EXTENDED=1 to run")
    for item in items:
        if "long" in item.keywords and not (LONG or EXTENDED):
            item.add_marker(skip_long)
        if "extended" in item.keywords and not EXTENDED:
            item.add_marker(skip_ext)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
