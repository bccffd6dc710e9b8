from pathlib import Path

import pytest

from brakesim import IdmParams, load_recording, parse_column_map
from brakesim.dataset_ingest import default_column_map_path

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return DATA_DIR / "golden"


@pytest.fixture(scope="session")
def minimal_dir() -> Path:
    return DATA_DIR / "minimal"


@pytest.fixture(scope="session")
def golden_recording(golden_dir):
    cmap = parse_column_map(default_column_map_path())
    return load_recording(
        golden_dir / "tracks.csv", golden_dir / "tracks_meta.csv", cmap
    )


@pytest.fixture(scope="session")
def minimal_recording(minimal_dir):
    cmap = parse_column_map(default_column_map_path())
    return load_recording(
        minimal_dir / "tracks.csv", minimal_dir / "tracks_meta.csv", cmap
    )


@pytest.fixture
def table_idm() -> IdmParams:
    # the worked examples use v0 = 13.89 m/s rather than the exact 50 km/h
    return IdmParams(v_desired_mps=13.89)
