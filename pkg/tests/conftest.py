"""Shared fixtures"""
from pathlib import Path

import pytest

from src.core.logging_config import setup_logging
from src.material import DetuningGrid, IonClass, hole_pattern

REPO = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session", autouse=True)
def console_logging():
    setup_logging(log_dir=False)


@pytest.fixture
def ion() -> IonClass:
    return IonClass()


@pytest.fixture
def periodic_grid() -> DetuningGrid:
    """120 MHz, an integer number of 6 MHz periods"""
    return DetuningGrid.from_range(-60.0, 59.95, 0.05)


@pytest.fixture
def small_grid() -> DetuningGrid:
    """Symmetric 30 MHz grid for quick pumping runs"""
    return DetuningGrid.from_range(-15.0, 15.0, 0.05)


@pytest.fixture
def zero_field_pattern(ion):
    return hole_pattern(0.0, 0.0, ion)


@pytest.fixture
def write_config(tmp_path):
    """Write YAML text to tmp_path/<name> and return its path"""
    def write(text: str, name: str = "cfg.yaml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return write
