import io

import numpy as np
import pytest

from tests.factories import make_panel


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def csv_text():
    """Wrap CSV text so load functions can read it as a stream."""
    return lambda text: io.StringIO(text)


@pytest.fixture
def panel_factory():
    return make_panel
