import numpy as np
import pytest

from glideplan import Wind, load_bundled_aircraft, synthetic_grid


@pytest.fixture(scope="session")
def model():
    return load_bundled_aircraft("cessna172")


@pytest.fixture
def calm():
    return Wind(0.0, 0.0)


@pytest.fixture
def flat_grid():
    return synthetic_grid({"nx": 40, "ny": 40, "dx": 100.0, "dy": 100.0,
                           "x0": 0.0, "y0": 0.0, "base": 0.0})


def hill_grid(height=300.0, sigma=300.0, nx=64, ny=64, dx=50.0, dy=50.0,
              cx=1600.0, cy=1600.0, clearance=50.0):
    return synthetic_grid({"nx": nx, "ny": ny, "dx": dx, "dy": dy,
                           "x0": 0.0, "y0": 0.0, "base": 0.0,
                           "hills": [{"cx": cx, "cy": cy, "height": height,
                                      "sigma": sigma}],
                           "clearance_m": clearance})


def random_hill_grid(rng: np.random.Generator, nx=64, ny=64, dx=50.0,
                     dy=50.0, n_hills=3):
    """Random Gaussian-hill DTM with hills kept away from the map corners."""
    hills = []
    for _ in range(rng.integers(1, n_hills + 1)):
        hills.append({
            "cx": float(rng.uniform(0.3, 0.7) * nx * dx),
            "cy": float(rng.uniform(0.3, 0.7) * ny * dy),
            "height": float(rng.uniform(120.0, 350.0)),
            "sigma": float(rng.uniform(200.0, 450.0)),
        })
    return synthetic_grid({"nx": nx, "ny": ny, "dx": dx, "dy": dy,
                           "x0": 0.0, "y0": 0.0, "base": 0.0,
                           "hills": hills, "clearance_m": 50.0})
