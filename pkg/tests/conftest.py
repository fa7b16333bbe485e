import numpy as np
import pytest

from cacrad.preprocess import DiscretizedRoi, MaskedRoi

ACCEPTANCE_RESULTS = []


def record_acceptance(index: int, label: str, passed: bool):
    ACCEPTANCE_RESULTS.append((index, label, bool(passed)))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for index, label, ok in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {index}: {label}")


def random_level_grid(rng, max_dims=(6, 6, 4), ng_max=5):
    """Random small label grid with at least one nonzero voxel.

    Zero marks out-of-ROI; levels are renumbered so max(level) == ng,
    matching the discretizer's output convention.
    """
    dims = tuple(int(rng.integers(1, m + 1)) for m in max_dims)
    ng = int(rng.integers(1, ng_max + 1))
    grid = rng.integers(0, ng + 1, size=dims).astype(np.int64)
    if not (grid > 0).any():
        grid[tuple(rng.integers(0, d) for d in dims)] = ng
    present = grid[grid > 0]
    # renumber to a dense 1..ng' alphabet so DiscretizedRoi accepts it
    levels = np.unique(present)
    remap = np.zeros(levels.max() + 1, dtype=np.int64)
    remap[levels] = np.arange(1, len(levels) + 1)
    grid[grid > 0] = remap[grid[grid > 0]]
    return grid


def disc_from_grid(grid, spacing=(1.0, 1.0, 1.0)):
    idx = np.argwhere(grid > 0)
    levels = grid[grid > 0]
    lo = idx.min(axis=0)
    hi = idx.max(axis=0)
    return DiscretizedRoi(
        indices=idx,
        levels=levels,
        ng=int(levels.max()),
        spacing=tuple(spacing),
        bounds=tuple((int(lo[k]), int(hi[k])) for k in range(3)),
        volume_dims=grid.shape,
    )


def roi_from_values(grid_values, mask, spacing=(1.0, 1.0, 1.0)):
    idx = np.argwhere(mask)
    return MaskedRoi(
        indices=idx,
        values=np.asarray(grid_values, dtype=np.float64)[mask],
        spacing=tuple(spacing),
        volume_dims=mask.shape,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240816)
