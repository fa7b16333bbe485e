"""Mask-only morphology: triangulated surface, diameters, covariance axes.

The surface is the 0.5-isosurface of the binary mask padded by one voxel
of zeros, polygonised with the classic 256-case tables. With binary corner
values every cut edge is crossed exactly halfway, so vertices are edge
midpoints and no interpolation is needed.
"""

import numpy as np

from ..errors import EmptyMask
from .mc_tables import CORNER_OFFSETS, EDGE_PAIRS, TRI_EDGES

_EDGE_MIDPOINTS = (CORNER_OFFSETS[EDGE_PAIRS[:, 0]] + CORNER_OFFSETS[EDGE_PAIRS[:, 1]]) / 2.0


def triangulate_mask(labels: np.ndarray, spacing) -> np.ndarray:
    """Triangle soup (n_tri, 3 vertices, xyz mm) of the padded 0.5-isosurface."""
    padded = np.zeros(tuple(d + 2 for d in labels.shape), dtype=np.float64)
    padded[1:-1, 1:-1, 1:-1] = labels
    cx, cy, cz = (d - 1 for d in padded.shape)
    case = np.zeros((cx, cy, cz), dtype=np.int64)
    for bit, (ox, oy, oz) in enumerate(CORNER_OFFSETS):
        case |= (padded[ox:ox + cx, oy:oy + cy, oz:oz + cz] < 0.5).astype(np.int64) << bit
    active = np.argwhere((case > 0) & (case < 255))
    rows = TRI_EDGES[case[active[:, 0], active[:, 1], active[:, 2]]]
    tris = []
    for t in range(0, 15, 3):
        has = rows[:, t] >= 0
        if not has.any():
            break
        base = active[has][:, None, :].astype(np.float64)
        corners = base + _EDGE_MIDPOINTS[rows[has][:, t:t + 3]]
        tris.append(corners)
    if not tris:
        return np.zeros((0, 3, 3))
    soup = np.concatenate(tris, axis=0)
    soup -= 1.0  # undo zero padding offset
    return soup * np.asarray(spacing, dtype=np.float64)


def mesh_volume_area(tri: np.ndarray):
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    signed = np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0
    area = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1).sum()
    return abs(float(signed)), float(area)


def surface_voxels(labels: np.ndarray) -> np.ndarray:
    """Indices of mask voxels with at least one missing face neighbor."""
    interior = np.ones(labels.shape, dtype=bool)
    for axis in range(3):
        shifted = np.zeros_like(labels)
        sl = [slice(None)] * 3
        sr = [slice(None)] * 3
        sl[axis] = slice(1, None)
        sr[axis] = slice(None, -1)
        shifted[tuple(sl)] = labels[tuple(sr)]
        interior &= shifted
        shifted = np.zeros_like(labels)
        shifted[tuple(sr)] = labels[tuple(sl)]
        interior &= shifted
    return np.argwhere(labels & ~interior)


def _max_pairwise(points: np.ndarray, chunk: int = 2048) -> float:
    if len(points) < 2:
        return 0.0
    best = 0.0
    for lo in range(0, len(points), chunk):
        block = points[lo:lo + chunk]
        d2 = ((block[:, None, :] - points[None, lo:, :]) ** 2).sum(axis=2)
        best = max(best, float(d2.max()))
    return float(np.sqrt(best))


def shape_features(labels: np.ndarray, spacing) -> dict:
    if not labels.any():
        raise EmptyMask("shape features need at least one mask voxel")
    sp = np.asarray(spacing, dtype=np.float64)
    nvox = int(labels.sum())

    tri = triangulate_mask(labels, sp)
    vol, area = mesh_volume_area(tri)

    surf = surface_voxels(labels).astype(np.float64) * sp
    max3d = _max_pairwise(surf)
    max2d = {}
    for plane, axis in (("XY", 2), ("XZ", 1), ("YZ", 0)):
        keep = [0, 1, 2]
        keep.remove(axis)
        best = 0.0
        for level in np.unique(surf[:, axis]):
            best = max(best, _max_pairwise(surf[surf[:, axis] == level][:, keep]))
        max2d[plane] = best

    centers = np.argwhere(labels).astype(np.float64) * sp
    centered = centers - centers.mean(axis=0)
    cov = centered.T @ centered / nvox
    lam = np.linalg.eigvalsh(cov)
    lam = np.clip(lam, 0.0, None)
    least, minor, major = lam
    if major > 0:
        elongation = float(np.sqrt(minor / major))
        flatness = float(np.sqrt(least / major))
    else:
        elongation = 0.0
        flatness = 0.0

    return {
        "Elongation": elongation,
        "Flatness": flatness,
        "LeastAxisLength": 4.0 * float(np.sqrt(least)),
        "MajorAxisLength": 4.0 * float(np.sqrt(major)),
        "Maximum2DDiameterXY": max2d["XY"],
        "Maximum2DDiameterXZ": max2d["XZ"],
        "Maximum2DDiameterYZ": max2d["YZ"],
        "Maximum3DDiameter": max3d,
        "MeshVolume": vol,
        "MinorAxisLength": 4.0 * float(np.sqrt(minor)),
        "Sphericity": float((36.0 * np.pi * vol ** 2) ** (1.0 / 3.0) / area),
        "SurfaceArea": area,
        "SurfaceVolumeRatio": area / vol,
        "VoxelVolume": nvox * float(sp.prod()),
    }
