import numpy as np
import pytest

import topoprompt as tp


@pytest.fixture(scope="session")
def clean_dataset():
    """The benchmark dataset: 10 images, 1024x1024, 80 ovals, seed 42, no noise."""
    config = tp.SceneConfig(seed=42, noise_sigma=0.0)
    return tp.dataset(config, 10)


@pytest.fixture(scope="session")
def small_scene():
    """A small noise-free scene for fast metric tests."""
    config = tp.SceneConfig(seed=7, width=160, height=160, count=6,
                            noise_sigma=0.0)
    return tp.generate_scene(config)


@pytest.fixture
def row_image():
    """The 1x7 field whose taller non-global peak is the less persistent one."""
    return tp.ScalarImage(7, 1, np.array([0.0, 6.0, 5.8, 7.0, 1.0, 5.0, 0.0]))
