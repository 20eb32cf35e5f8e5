"""Pytest configuration and fixtures."""
import os
from pathlib import Path

import pytest

# Pin the seed before the settings module is imported
os.environ.setdefault("BARYCENTRA_SEED", "7")
os.environ.setdefault("BARYCENTRA_LOG_LEVEL", "WARNING")

from barycentra.services.affine import CosetAlgebra, FiniteVectorSpace
from barycentra.services.builtins import builtin
from barycentra.services.convex import Polytope

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir():
    """Directory of the ready-made JSON inputs."""
    return DATA_DIR


@pytest.fixture
def segment():
    """The unit segment [0,1]."""
    return Polytope([[0], [1]])


@pytest.fixture
def triangle():
    """Standard 2-simplex with named vertices."""
    return Polytope([[0, 0], [1, 0], [0, 1]], ["a", "b", "c"])


@pytest.fixture
def square():
    """Unit square, vertices a, b, c, d counterclockwise."""
    return Polytope([[0, 0], [1, 0], [1, 1], [0, 1]], ["a", "b", "c", "d"])


@pytest.fixture
def cube():
    """Unit cube in ℚ³."""
    return Polytope([[x, y, z] for z in (0, 1) for y in (0, 1) for x in (0, 1)])


@pytest.fixture
def gf3_plane():
    """GF(3)²."""
    return FiniteVectorSpace(3, 2)


@pytest.fixture(scope="session")
def gf3_plane_algebra():
    """Coset algebra S(GF(3)²); validated once per session."""
    return CosetAlgebra(FiniteVectorSpace(3, 2))


@pytest.fixture
def t_bundle():
    """The T-algebra built-in."""
    return builtin("t-algebra")


@pytest.fixture
def extended_line_bundle():
    """The extended line built-in."""
    return builtin("extended-line")


@pytest.fixture
def clean_env(monkeypatch):
    """Remove BARYCENTRA_* overrides for tests that read settings afresh."""
    for key in list(os.environ):
        if key.startswith("BARYCENTRA_"):
            monkeypatch.delenv(key, raising=False)
    return monkeypatch
