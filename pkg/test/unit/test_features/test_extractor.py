import numpy as np
import pytest

from bofdb import DescriptorExtractor, Image, ImageTooSmall, extract_descriptors
from bofdb.features.extractor import CLAMP, clamp_descriptor, sift_normalize


@pytest.fixture
def textured_image():
    rng = np.random.default_rng(0)
    return Image(rng.uniform(size=(48, 40)))


def test_constant_image_gives_zero_descriptors():
    ds = extract_descriptors(Image(np.full((32, 32), 0.5)))

    assert len(ds) > 0
    assert np.all(ds.vectors == 0)


def test_grid_count():
    ds = extract_descriptors(Image(np.zeros((64, 64))), grid_step=16, patch_size=16)

    assert len(ds) == 16


def test_keypoints_row_major(textured_image):
    ds = extract_descriptors(textured_image, grid_step=8, patch_size=16)
    nx, ny = DescriptorExtractor(8, 16).grid_shape(40, 48)
    centres = [(kp.y, kp.x) for kp in ds.keypoints]

    assert len(ds) == nx * ny
    assert centres == sorted(centres)
    assert ds.keypoints[0].x == 7.5
    assert ds.keypoints[0].scale == 8.0
    assert all(kp.orientation == 0.0 for kp in ds.keypoints)


def test_descriptor_invariants(textured_image):
    ds = extract_descriptors(textured_image)
    norms = np.linalg.norm(ds.vectors.astype(np.float64), axis=1)

    assert ds.vectors.dtype == np.float32
    assert np.all(ds.vectors >= 0)
    assert np.allclose(norms, 1, atol=1e-6)


def test_deterministic(textured_image):
    a = extract_descriptors(textured_image, image_id=4)
    b = extract_descriptors(textured_image, image_id=4)

    assert a == b
    assert a.vectors.tobytes() == b.vectors.tobytes()


def test_clamp():
    rng = np.random.default_rng(1)
    raw = rng.exponential(size=(20, 128))
    raw[:, 0] = 100.0
    clamped = clamp_descriptor(raw)

    assert np.all(clamped <= CLAMP + 1e-9)
    assert np.allclose(np.linalg.norm(sift_normalize(raw), axis=1), 1)


def test_clamp_zero_histogram():
    assert np.all(sift_normalize(np.zeros(128)) == 0)


def test_image_too_small():
    with pytest.raises(ImageTooSmall):
        extract_descriptors(Image(np.zeros((15, 64))))


def test_image_smaller_than_patch():
    with pytest.raises(ImageTooSmall):
        extract_descriptors(Image(np.zeros((20, 20))), patch_size=24)


class TestDescriptorExtractor:
    def test_patch_size_multiple_of_4(self):
        with pytest.raises(ValueError, match="divisible by 4"):
            DescriptorExtractor(patch_size=10)

    def test_grid_step_positive(self):
        with pytest.raises(ValueError, match="grid_step must be >= 1"):
            DescriptorExtractor(grid_step=0)

    def test_grid_step_type(self):
        with pytest.raises(TypeError, match="grid_step must be an int"):
            DescriptorExtractor(grid_step=2.5)


def _reference_descriptor(pixels, top, left, patch_size):
    """Raw 128-bin histogram of one patch, accumulated pixel by pixel"""
    height, width = pixels.shape
    histogram = np.zeros((4, 4, 8))
    cell = patch_size / 4
    for r in range(patch_size):
        for c in range(patch_size):
            y, x = top + r, left + c
            gx = (pixels[y, min(x + 1, width - 1)] - pixels[y, max(x - 1, 0)]) / 2
            gy = (pixels[min(y + 1, height - 1), x] - pixels[max(y - 1, 0), x]) / 2
            magnitude = np.hypot(gx, gy)
            o = (np.arctan2(gy, gx) % (2 * np.pi)) * 8 / (2 * np.pi)
            o0 = int(np.floor(o))
            u = (r + 0.5) / cell - 0.5
            v = (c + 0.5) / cell - 0.5
            r0, c0 = int(np.floor(u)), int(np.floor(v))
            for i, wi in ((r0, 1 - (u - r0)), (r0 + 1, u - r0)):
                for j, wj in ((c0, 1 - (v - c0)), (c0 + 1, v - c0)):
                    if not (0 <= i < 4 and 0 <= j < 4):
                        continue
                    for k, wk in ((o0 % 8, 1 - (o - o0)), ((o0 + 1) % 8, o - o0)):
                        histogram[i, j, k] += magnitude * wi * wj * wk
    return histogram.reshape(128)


def test_matches_pixel_loop():
    pixels = np.random.default_rng(3).uniform(size=(16, 16))
    ds = extract_descriptors(Image(pixels), grid_step=8, patch_size=16)
    expected = sift_normalize(_reference_descriptor(pixels, 0, 0, 16))

    assert len(ds) == 1
    assert np.allclose(ds.vectors[0], expected, atol=1e-6)


def test_matches_pixel_loop_inner_patch():
    pixels = np.random.default_rng(4).uniform(size=(24, 28))
    ds = extract_descriptors(Image(pixels), grid_step=4, patch_size=8)
    nx, _ = DescriptorExtractor(4, 8).grid_shape(28, 24)
    # second row, third column of the grid
    expected = sift_normalize(_reference_descriptor(pixels, 4, 8, 8))

    assert np.allclose(ds.vectors[nx + 2], expected, atol=1e-6)


def test_vertical_stripes_fill_horizontal_gradient_bins():
    """A vertical stripe pattern only has horizontal gradients, which fall
    in orientation bins 0 and 4"""
    x = np.arange(64)
    pixels = np.tile(0.5 + 0.5 * np.sin(2 * np.pi * x / 8), (64, 1))
    ds = extract_descriptors(Image(pixels))
    by_orientation = ds.vectors.reshape(len(ds), 16, 8).sum(axis=(0, 1))
    reference = _reference_descriptor(pixels, 8, 8, 16).reshape(16, 8).sum(axis=0)

    assert by_orientation[[0, 4]].sum() >= 0.9 * by_orientation.sum()
    assert reference[[0, 4]].sum() >= 0.9 * reference.sum()
