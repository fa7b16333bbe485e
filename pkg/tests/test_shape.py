import math

import numpy as np
import pytest

from cacrad.features.shape import (
    mesh_volume_area,
    shape_features,
    surface_voxels,
    triangulate_mask,
)


def test_single_voxel_octahedron():
    mask = np.zeros((3, 3, 3), dtype=bool)
    mask[1, 1, 1] = True
    tri = triangulate_mask(mask, (1.0, 1.0, 1.0))
    vol, area = mesh_volume_area(tri)
    # midpoint-vertex surface of one cube of mask: a regular octahedron
    assert vol == pytest.approx(1.0 / 6.0, rel=1e-12)
    assert area == pytest.approx(math.sqrt(3.0), rel=1e-12)
    assert len(tri) == 8


def test_mesh_is_closed_watertight():
    # closed surface <=> every edge is shared by exactly two triangles
    rng = np.random.default_rng(5)
    mask = rng.random((5, 5, 4)) > 0.5
    if not mask.any():
        mask[2, 2, 2] = True
    tri = triangulate_mask(mask, (1.0, 1.0, 1.0))
    edges = {}
    for t in np.round(tri * 2).astype(np.int64):  # half-integer grid -> ints
        pts = [tuple(p) for p in t]
        if len(set(pts)) < 3:
            continue  # degenerate sliver contributes no area
        for a, b in ((0, 1), (1, 2), (2, 0)):
            key = tuple(sorted((pts[a], pts[b])))
            edges[key] = edges.get(key, 0) + 1
    assert edges and all(v == 2 for v in edges.values())


def test_cube_volume_and_diameters():
    n = 10
    dims = (n + 2, n + 2, n + 2)
    mask = np.zeros(dims, dtype=bool)
    mask[1:n + 1, 1:n + 1, 1:n + 1] = True
    f = shape_features(mask, (1.0, 1.0, 1.0))
    assert f["VoxelVolume"] == pytest.approx(n ** 3)
    # midpoint surface hugs the voxel block to within half a voxel
    assert f["MeshVolume"] == pytest.approx(n ** 3, rel=0.05)
    assert f["SurfaceArea"] == pytest.approx(6 * n * n, rel=0.10)
    # corner-to-corner center distances
    assert f["Maximum3DDiameter"] == pytest.approx(math.sqrt(3) * (n - 1), rel=1e-12)
    assert f["Maximum2DDiameterXY"] == pytest.approx(math.sqrt(2) * (n - 1), rel=1e-12)


def test_two_voxel_diameter():
    mask = np.zeros((5, 1, 1), dtype=bool)
    mask[0, 0, 0] = True
    mask[3, 0, 0] = True
    f = shape_features(mask, (1.0, 1.0, 1.0))
    assert f["Maximum3DDiameter"] == pytest.approx(3.0, rel=1e-12)
    assert f["Maximum2DDiameterXY"] == pytest.approx(3.0, rel=1e-12)
    assert f["Maximum2DDiameterYZ"] == 0.0


def test_ball_mesh_volume_converges():
    r = 8.5
    n = 20
    c = (n - 1) / 2.0
    g = np.mgrid[0:n, 0:n, 0:n].astype(np.float64)
    mask = ((g[0] - c) ** 2 + (g[1] - c) ** 2 + (g[2] - c) ** 2) <= r * r
    tri = triangulate_mask(mask, (1.0, 1.0, 1.0))
    vol, area = mesh_volume_area(tri)
    # the mesh hugs the voxelized solid tightly; the voxelization itself
    # carries a few percent of error against the continuous ball
    assert vol == pytest.approx(float(mask.sum()), rel=0.02)
    true_vol = 4.0 / 3.0 * math.pi * r ** 3
    assert vol == pytest.approx(true_vol, rel=0.05)
    # midpoint (non-smoothed) isosurfaces overestimate smooth areas by a
    # resolution-independent factor, so sphericity plateaus near 0.92
    f = shape_features(mask, (1.0, 1.0, 1.0))
    assert 0.90 < f["Sphericity"] < 1.0
    assert area > 4.0 * math.pi * r ** 2  # always from above


def test_anisotropic_spacing_scales_mesh():
    mask = np.zeros((6, 6, 6), dtype=bool)
    mask[1:5, 1:5, 1:5] = True
    f1 = shape_features(mask, (1.0, 1.0, 1.0))
    f2 = shape_features(mask, (2.0, 1.0, 1.0))
    assert f2["MeshVolume"] == pytest.approx(2.0 * f1["MeshVolume"], rel=1e-9)
    assert f2["VoxelVolume"] == pytest.approx(2.0 * f1["VoxelVolume"], rel=1e-9)


def test_surface_voxels_of_solid_cube():
    mask = np.zeros((6, 6, 6), dtype=bool)
    mask[1:5, 1:5, 1:5] = True
    surf = surface_voxels(mask)
    assert len(surf) == 4 ** 3 - 2 ** 3  # all but the 2x2x2 interior


def test_axis_lengths_of_elongated_block():
    mask = np.zeros((20, 4, 4), dtype=bool)
    mask[1:19, 1:3, 1:3] = True
    f = shape_features(mask, (1.0, 1.0, 1.0))
    assert f["MajorAxisLength"] > f["MinorAxisLength"] >= f["LeastAxisLength"]
    assert 0.0 < f["Elongation"] < 0.5
    # uniform block along x: eigenvalue = population variance of 0..17
    var = np.arange(18).var()
    assert f["MajorAxisLength"] == pytest.approx(4 * math.sqrt(var), rel=1e-9)
