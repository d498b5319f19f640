from __future__ import annotations

from pathlib import Path

import pytest

from patternc.body import BodyModel
from patternc.config import parse_config
from patternc.registry import default_registry

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def body():
    return BodyModel()


@pytest.fixture()
def listing1():
    # reference config: high-waist pencil skirt with a fitted waistband
    return parse_config((DATA_DIR / "listing1.json").read_text())


@pytest.fixture()
def listing2():
    # reference config: cropped fitted pants, no waistband, no cuffs
    return parse_config((DATA_DIR / "listing2.json").read_text())


@pytest.fixture()
def listing1_text():
    return (DATA_DIR / "listing1.json").read_text()


@pytest.fixture()
def listing2_text():
    return (DATA_DIR / "listing2.json").read_text()
