import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from headmimic.config import packaged_data_path
from headmimic.limits import LimitTable, fit_pitch_limit_model


@pytest.fixture(scope="session")
def shipped_table() -> LimitTable:
    return LimitTable.from_json_file(packaged_data_path("limits.json"))


@pytest.fixture(scope="session")
def limit_model(shipped_table):
    return fit_pitch_limit_model(shipped_table)
