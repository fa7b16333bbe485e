import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cacrad.errors import BadRange, BadSpacing, DimMismatch, EmptyRoi, NonPositiveWidth
from cacrad.nifti import MaskVolume, Volume3D
from cacrad.preprocess import (
    apply_mask,
    clip_and_rescale,
    discretize_fixed_count,
    discretize_fixed_width,
    resample_mask_nearest,
    resample_trilinear,
)

from conftest import roi_from_values


def small_volume(values, spacing=(1.0, 1.0, 1.0)):
    arr = np.asarray(values, dtype=np.float64)
    return Volume3D(dims=arr.shape, spacing=spacing, intensities=arr)


def test_apply_mask_selects_expected_voxels():
    vals = np.arange(8.0).reshape(2, 2, 2)
    mask = np.zeros((2, 2, 2), dtype=bool)
    mask[0, 0, 0] = mask[1, 1, 1] = True
    roi = apply_mask(small_volume(vals), MaskVolume(dims=(2, 2, 2), labels=mask))
    assert sorted(roi.values.tolist()) == [0.0, 7.0]
    assert len(roi) == 2


def test_apply_mask_dim_mismatch():
    with pytest.raises(DimMismatch):
        apply_mask(small_volume(np.zeros((2, 2, 2))),
                   MaskVolume(dims=(3, 3, 3), labels=np.ones((3, 3, 3), bool)))


def test_fixed_width_binning_known_values():
    vals = np.array([[[0.0, 24.9, 25.0, 70.0]]])
    mask = np.ones(vals.shape, dtype=bool)
    roi = roi_from_values(vals, mask)
    disc = discretize_fixed_width(roi, 25.0)
    assert disc.levels.tolist() == [1, 1, 2, 3]
    assert disc.ng == 3


def test_fixed_count_binning_known_values():
    vals = np.array([[[0.0, 1.0, 2.0, 3.0, 4.0]]])
    mask = np.ones(vals.shape, dtype=bool)
    disc = discretize_fixed_count(roi_from_values(vals, mask), 4)
    # bins [0,1),[1,2),[2,3),[3,4]: the max folds into the top bin
    assert disc.levels.tolist() == [1, 2, 3, 4, 4]
    assert disc.ng == 4


def test_discretize_errors():
    vals = np.ones((1, 1, 2))
    roi = roi_from_values(vals, np.ones((1, 1, 2), bool))
    with pytest.raises(NonPositiveWidth):
        discretize_fixed_width(roi, 0.0)
    with pytest.raises(NonPositiveWidth):
        discretize_fixed_count(roi, 0)
    empty = roi_from_values(vals, np.zeros((1, 1, 2), bool))
    with pytest.raises(EmptyRoi):
        discretize_fixed_width(empty, 25.0)


@settings(max_examples=60, deadline=None)
@given(
    vals=st.lists(st.floats(-1000, 2000, allow_nan=False), min_size=1, max_size=40),
    width=st.floats(0.5, 200, allow_nan=False),
)
def test_fixed_width_levels_property(vals, width):
    arr = np.array(vals, dtype=np.float64).reshape(1, 1, -1)
    roi = roi_from_values(arr, np.ones(arr.shape, bool))
    disc = discretize_fixed_width(roi, width)
    assert disc.levels.min() >= 1
    assert disc.levels.max() == disc.ng
    # level is the textbook fixed-width bin of the offset from the minimum
    lo = arr.min()
    for v, lv in zip(roi.values, disc.levels):
        assert lv == int(np.floor((v - lo) / width)) + 1
    # monotone: larger value never gets a smaller level
    order = np.argsort(roi.values, kind="stable")
    assert np.all(np.diff(disc.levels[order]) >= 0)


@settings(max_examples=60, deadline=None)
@given(
    vals=st.lists(st.floats(-500, 500, allow_nan=False), min_size=1, max_size=40),
    n_bins=st.integers(1, 16),
)
def test_fixed_count_levels_property(vals, n_bins):
    arr = np.array(vals, dtype=np.float64).reshape(1, -1, 1)
    roi = roi_from_values(arr, np.ones(arr.shape, bool))
    disc = discretize_fixed_count(roi, n_bins)
    assert disc.levels.min() >= 1
    assert disc.ng <= n_bins
    if arr.min() != arr.max():
        # the top of the range lands exactly in the last bin
        assert disc.levels[np.argmax(roi.values)] == disc.ng


def test_clip_and_rescale_bounds():
    vals = np.array([[[-2000.0, -150.0, 0.0, 1500.0, 3000.0]]])
    out = clip_and_rescale(small_volume(vals), -150.0, 1500.0)
    got = out.intensities.ravel()
    assert got[0] == 0.0 and got[1] == 0.0
    assert got[3] == 1.0 and got[4] == 1.0
    assert 0.0 < got[2] < 1.0
    with pytest.raises(BadRange):
        clip_and_rescale(small_volume(vals), 5.0, 5.0)


def test_resample_constant_volume_stays_constant():
    vol = Volume3D(dims=(6, 6, 4), spacing=(1.0, 1.0, 2.0),
                   intensities=np.full((6, 6, 4), 42.0))
    out = resample_trilinear(vol, (0.5, 0.5, 0.5))
    assert out.dims == (12, 12, 16)
    assert np.allclose(out.intensities, 42.0)


def test_resample_identity_spacing_preserves_values():
    rng = np.random.default_rng(0)
    vol = Volume3D(dims=(5, 4, 3), spacing=(1.0, 1.0, 1.0),
                   intensities=rng.normal(size=(5, 4, 3)))
    out = resample_trilinear(vol, (1.0, 1.0, 1.0))
    assert out.dims == vol.dims
    assert np.allclose(out.intensities, vol.intensities)


def test_resample_linear_ramp_exact_interior():
    # trilinear interpolation reproduces affine fields exactly away from edges
    nx = 16
    ramp = np.tile(np.arange(nx, dtype=np.float64)[:, None, None], (1, 4, 4))
    vol = Volume3D(dims=(nx, 4, 4), spacing=(1.0, 1.0, 1.0), intensities=ramp)
    out = resample_trilinear(vol, (0.5, 1.0, 1.0))
    centers = (np.arange(out.dims[0]) + 0.5) * 0.5 - 0.5
    interior = (centers > 0) & (centers < nx - 1)
    assert np.allclose(out.intensities[interior, 2, 2], centers[interior])


def test_resample_mask_preserves_large_structure():
    mask = np.zeros((8, 8, 8), dtype=bool)
    mask[2:6, 2:6, 2:6] = True
    mv = MaskVolume(dims=(8, 8, 8), labels=mask)
    out = resample_mask_nearest(mv, (1.0, 1.0, 1.0), (0.5, 0.5, 0.5))
    assert out.dims == (16, 16, 16)
    # volume fraction is conserved up to boundary rounding
    frac_in = mask.mean()
    frac_out = out.labels.mean()
    assert abs(frac_in - frac_out) < 0.05
    with pytest.raises(BadSpacing):
        resample_mask_nearest(mv, (1.0, 1.0, 1.0), (0.0, 1.0, 1.0))


def test_resample_bad_spacing():
    vol = Volume3D(dims=(2, 2, 2), spacing=(1, 1, 1), intensities=np.zeros((2, 2, 2)))
    with pytest.raises(BadSpacing):
        resample_trilinear(vol, (-1.0, 1.0, 1.0))
