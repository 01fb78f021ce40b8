import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))   # for `reference` imports

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


def gradient_gray(width, height, seed=0, slope=1.1):
    """Smooth monotone-vertical test content, deterministic per seed."""
    rng = np.random.default_rng(seed)
    y = np.arange(height, dtype=np.float64)[:, None]
    x = np.arange(width, dtype=np.float64)[None, :]
    img = 35.0 + slope * y + 18.0 * np.sin(2.0 * np.pi * x / 91.0)
    img = img + rng.integers(-2, 3, size=(height, width))
    return np.clip(np.floor(img + 0.5), 2, 253).astype(np.uint8)


def gradient_rgb(width, height, seed=0, slope=0.9):
    g = gradient_gray(width, height, seed=seed, slope=slope).astype(np.float64)
    img = np.stack([np.clip(g + d, 0, 255) for d in (0.0, 12.0, -9.0)], axis=-1)
    return img.astype(np.uint8)
