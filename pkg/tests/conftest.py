import sys
from pathlib import Path

import pytest

SUPPORT = Path(__file__).parent / "support"
sys.path.insert(0, str(SUPPORT))


@pytest.fixture(scope="session")
def seed0_shard_dir(tmp_path_factory):
    """The canonical seed-0 random set used by regression tests: 200 games."""
    from chessworld.randgen import GenConfig, generate_test_set

    out = tmp_path_factory.mktemp("seed0")
    generate_test_set(GenConfig(master_seed=0, target_games=200), out, workers=1)
    return out


@pytest.fixture(scope="session")
def seed0_trajectories(seed0_shard_dir):
    from chessworld import shardio

    paths = sorted(seed0_shard_dir.glob("random-*.cwm"))
    trajs, _ = shardio.read_shards(paths)
    return trajs
