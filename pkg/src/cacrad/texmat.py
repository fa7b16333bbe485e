"""Gray-level texture matrices by direct neighborhood enumeration.

All five families share one neighborhood definition: the 26-neighborhood,
collapsed to 13 unique directions (sign folded) for the ordered families.
Matrices hold raw integer counts; normalization is the feature layer's job
so these stay exactly comparable against brute-force oracles.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .preprocess import DiscretizedRoi


def unique_directions():
    """The 13 offsets of the 26-neighborhood with first nonzero component positive."""
    out = []
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            for dz in (-1, 0, 1):
                d = (dx, dy, dz)
                first = next((c for c in d if c != 0), 0)
                if first > 0:
                    out.append(d)
    return tuple(out)


DIRECTIONS_13 = unique_directions()

_NEIGHBORS_26 = tuple(
    (dx, dy, dz)
    for dx in (-1, 0, 1)
    for dy in (-1, 0, 1)
    for dz in (-1, 0, 1)
    if (dx, dy, dz) != (0, 0, 0)
)


@dataclass(frozen=True)
class Glcm:
    counts: np.ndarray  # (n_dirs, ng, ng), symmetric per direction
    directions: tuple
    distance: int


@dataclass(frozen=True)
class Glrlm:
    counts: np.ndarray  # (n_dirs, ng, max_run_length)
    directions: tuple


@dataclass(frozen=True)
class Glszm:
    counts: np.ndarray  # (ng, max_zone_size)


@dataclass(frozen=True)
class Gldm:
    counts: np.ndarray  # (ng, max_dependence + 1); column k = k dependent neighbors
    alpha: int


@dataclass(frozen=True)
class Ngtdm:
    n: np.ndarray  # per level: voxels with >= 1 in-ROI neighbor
    s: np.ndarray  # per level: summed |level - mean neighbor level|
    valid_count: int

    @property
    def p(self) -> np.ndarray:
        if self.valid_count == 0:
            return np.zeros_like(self.s)
        return self.n / self.valid_count


def _overlap(shape, d):
    """Slice pair (src, dst) such that dst = src + d, both in bounds."""
    src, dst = [], []
    for n, delta in zip(shape, d):
        if abs(delta) >= n:
            return None
        if delta >= 0:
            src.append(slice(0, n - delta))
            dst.append(slice(delta, n))
        else:
            src.append(slice(-delta, n))
            dst.append(slice(0, n + delta))
    return tuple(src), tuple(dst)


def compute_glcm(roi: DiscretizedRoi, directions=DIRECTIONS_13, distance: int = 1) -> Glcm:
    """Symmetric co-occurrence counts at the given offset distance, per direction."""
    grid, _ = roi.dense_grid()
    ng = roi.ng
    counts = np.zeros((len(directions), ng, ng), dtype=np.int64)
    for k, d in enumerate(directions):
        step = tuple(c * distance for c in d)
        ov = _overlap(grid.shape, step)
        if ov is None:
            continue
        src, dst = ov
        a = grid[src]
        b = grid[dst]
        valid = (a > 0) & (b > 0)
        np.add.at(counts[k], (a[valid] - 1, b[valid] - 1), 1)
    counts = counts + counts.transpose(0, 2, 1)
    return Glcm(counts=counts, directions=tuple(directions), distance=distance)


def compute_glrlm(roi: DiscretizedRoi, directions=DIRECTIONS_13) -> Glrlm:
    """Maximal same-level collinear runs per direction; gaps break runs."""
    grid, _ = roi.dense_grid()
    ng = roi.ng
    shape = np.array(grid.shape)
    runs_per_dir = []
    max_len = 1
    for d in directions:
        dvec = np.array(d)
        # run starts: ROI voxels whose predecessor along d is absent or differs
        same_prev = np.zeros(grid.shape, dtype=bool)
        ov = _overlap(grid.shape, d)
        if ov is not None:
            src, dst = ov
            same_prev[dst] = (grid[src] == grid[dst]) & (grid[src] > 0)
        starts = np.argwhere((grid > 0) & ~same_prev)
        levels = grid[starts[:, 0], starts[:, 1], starts[:, 2]]
        lengths = np.ones(len(starts), dtype=np.int64)
        cur = starts.copy()
        alive = np.arange(len(starts))
        while alive.size:
            nxt = cur[alive] + dvec
            inb = np.all((nxt >= 0) & (nxt < shape), axis=1)
            cont = np.zeros(len(alive), dtype=bool)
            if inb.any():
                sub = nxt[inb]
                cont[inb] = grid[sub[:, 0], sub[:, 1], sub[:, 2]] == levels[alive[inb]]
            lengths[alive[cont]] += 1
            cur[alive[cont]] = nxt[cont]
            alive = alive[cont]
        runs_per_dir.append((levels, lengths))
        if len(lengths):
            max_len = max(max_len, int(lengths.max()))
    counts = np.zeros((len(directions), ng, max_len), dtype=np.int64)
    for k, (levels, lengths) in enumerate(runs_per_dir):
        np.add.at(counts[k], (levels - 1, lengths - 1), 1)
    return Glrlm(counts=counts, directions=tuple(directions))


def compute_glszm(roi: DiscretizedRoi) -> Glszm:
    """Zones: 26-connected components of equal gray level."""
    grid, _ = roi.dense_grid()
    ng = roi.ng
    visited = np.zeros(grid.shape, dtype=bool)
    nx, ny, nz = grid.shape
    zones = []  # (level, size)
    for x0, y0, z0 in np.argwhere(grid > 0):
        if visited[x0, y0, z0]:
            continue
        level = grid[x0, y0, z0]
        size = 0
        queue = deque([(x0, y0, z0)])
        visited[x0, y0, z0] = True
        while queue:
            x, y, z = queue.popleft()
            size += 1
            for dx, dy, dz in _NEIGHBORS_26:
                u, v, w = x + dx, y + dy, z + dz
                if 0 <= u < nx and 0 <= v < ny and 0 <= w < nz:
                    if not visited[u, v, w] and grid[u, v, w] == level:
                        visited[u, v, w] = True
                        queue.append((u, v, w))
        zones.append((int(level), size))
    max_size = max(s for _, s in zones)
    counts = np.zeros((ng, max_size), dtype=np.int64)
    for level, size in zones:
        counts[level - 1, size - 1] += 1
    return Glszm(counts=counts)


def compute_gldm(roi: DiscretizedRoi, alpha: int = 0) -> Gldm:
    """Dependence counts over in-ROI 26-neighbors with |level diff| <= alpha."""
    grid, off = roi.dense_grid()
    dep = np.zeros(grid.shape, dtype=np.int64)
    for d in _NEIGHBORS_26:
        ov = _overlap(grid.shape, d)
        if ov is None:
            continue
        src, dst = ov
        ok = (grid[src] > 0) & (grid[dst] > 0) & (np.abs(grid[src] - grid[dst]) <= alpha)
        dep[dst] += ok
    rel = roi.indices - off
    deps = dep[rel[:, 0], rel[:, 1], rel[:, 2]]
    counts = np.zeros((roi.ng, int(deps.max()) + 1), dtype=np.int64)
    np.add.at(counts, (roi.levels - 1, deps), 1)
    return Gldm(counts=counts, alpha=alpha)


def compute_ngtdm(roi: DiscretizedRoi) -> Ngtdm:
    """Per-level neighborhood tone differences over in-ROI 26-neighbors.

    Voxels with no in-ROI neighbor are excluded from both n_i and s_i.
    """
    grid, off = roi.dense_grid()
    nb_sum = np.zeros(grid.shape, dtype=np.float64)
    nb_cnt = np.zeros(grid.shape, dtype=np.int64)
    for d in _NEIGHBORS_26:
        ov = _overlap(grid.shape, d)
        if ov is None:
            continue
        src, dst = ov
        in_roi = grid[src] > 0
        nb_sum[dst] += np.where(in_roi, grid[src], 0)
        nb_cnt[dst] += in_roi
    rel = roi.indices - off
    cnt = nb_cnt[rel[:, 0], rel[:, 1], rel[:, 2]]
    tot = nb_sum[rel[:, 0], rel[:, 1], rel[:, 2]]
    has_nb = cnt > 0
    levels = roi.levels[has_nb]
    diffs = np.abs(levels - tot[has_nb] / cnt[has_nb])
    n = np.zeros(roi.ng, dtype=np.int64)
    s = np.zeros(roi.ng, dtype=np.float64)
    np.add.at(n, levels - 1, 1)
    np.add.at(s, levels - 1, diffs)
    return Ngtdm(n=n, s=s, valid_count=int(has_nb.sum()))
