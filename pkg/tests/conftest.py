import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest
from importlib import resources

from ncline import parse_presentation


def fixture_text(name):
    return (resources.files("ncline") / "data" / f"{name}.alg").read_text()


@pytest.fixture
def load():
    def _load(name, field=None):
        return parse_presentation(fixture_text(name), field)

    return _load
