from dataclasses import asdict

import pytest

from quasiminimal import params
from quasiminimal.oracle import NEVER, HaltingOracle, HaltsAt
from quasiminimal.template import SUNNY, STAIRS, parse_templates


@pytest.fixture(autouse=True)
def restore_params():
    saved = [(spec, asdict(spec)) for spec in (params.BUDGET, params.SELFTEST, params.PLOTS)]
    yield
    for spec, values in saved:
        for name, value in values.items():
            setattr(spec, name, value)


@pytest.fixture
def sunny():
    return parse_templates(SUNNY)


@pytest.fixture
def stairs():
    return parse_templates(STAIRS)


@pytest.fixture
def small_oracle():
    # machines 1 and 3 halt, 2 and 4 never do; 0 halts immediately
    return HaltingOracle({0: HaltsAt(0), 1: HaltsAt(0), 2: NEVER, 3: HaltsAt(2), 4: NEVER})


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write
