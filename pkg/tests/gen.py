"""Random test-data generators (instances and normalized fronts)."""

import numpy as np

from bittp import ProblemInstance


def random_instance(
    rng: np.random.Generator,
    n: int,
    m: int,
    *,
    coord_range: float = 100.0,
    capacity_factor: float = 0.5,
    renting_rate: float | None = None,
) -> ProblemInstance:
    """Random instance with integer-valued data (as in the benchmark files)."""
    span = int(max(coord_range, 2 * n))
    coords = np.unique(rng.integers(0, span + 1, size=(3 * n + 16, 2)), axis=0)
    rng.shuffle(coords)
    coords = coords[:n].astype(float)
    assert coords.shape[0] == n, "coordinate pool too small"
    profits = rng.integers(1, 101, size=m).astype(float)
    weights = rng.integers(1, 51, size=m).astype(float)
    item_city = rng.integers(1, n, size=m)
    if m:
        capacity = max(float(np.floor(weights.sum() * capacity_factor)), float(weights.min()))
    else:
        capacity = 1.0
    if renting_rate is None:
        renting_rate = float(rng.integers(1, 6))
    return ProblemInstance(
        name=f"rand-n{n}-m{m}",
        coords=coords,
        profits=profits,
        weights=weights,
        item_city=item_city,
        capacity=capacity,
        min_speed=0.1,
        max_speed=1.0,
        renting_rate=renting_rate,
    )


def random_front(rng: np.random.Generator, size: int) -> list[tuple[float, float]]:
    """Strictly non-dominated points in the unit square (g and h ascend together)."""
    g = np.unique(rng.random(size + 8))
    h = np.unique(rng.random(size + 8))
    k = min(len(g), len(h), size)
    return list(zip(g[:k].tolist(), h[:k].tolist()))
