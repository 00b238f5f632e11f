from __future__ import annotations

import numpy as np
import pytest

from orthoforms.domain import WittFrame
from orthoforms.quadratic import lattice_from_config, standard_lattice


@pytest.fixture(scope="session", params=[1, 2, 3, 4], ids=lambda n: f"n={n}")
def setup_n(request):
    """(lattice, frame, group, n) for each supported signature (2, n)."""
    n = request.param
    cfg = standard_lattice(n)
    lattice, frame_data, group = lattice_from_config(cfg)
    frame = WittFrame.build(lattice, frame_data["e"], frame_data["e_prime"])
    return lattice, frame, group, n


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)
