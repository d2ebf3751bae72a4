import numpy as np
import pytest

from qtd.wavepackets import PacketPairSpec


CORPUS_SEED = 20260810


def corpus_spec(rng: np.random.Generator) -> PacketPairSpec:
    """Random valid pair from the acceptance-corpus distribution."""
    return PacketPairSpec(
        theta=rng.uniform(0.0, np.pi / 2 - 0.01),
        phi=rng.uniform(0.0, np.pi),
        u1=rng.uniform(-0.1, 0.1),
        u2=rng.uniform(-0.1, 0.1),
        delta=rng.uniform(1e-3, 0.05),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(CORPUS_SEED)


@pytest.fixture
def fig1_spec():
    """Packet pair at the default sweep parameters (spread 0.01, sum 0.05,
    separation 0.02, equal weights, zero phase)."""
    return PacketPairSpec(np.pi / 4, 0.0, 0.015, 0.035, 0.01)
