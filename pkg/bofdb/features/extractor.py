import numpy as np

from bofdb.errors import ImageTooSmall
from bofdb.features.descriptor_set import DESCRIPTOR_DIM, DescriptorSet
from bofdb.features.keypoint import Keypoint

SPATIAL_BINS = 4
ORIENTATION_BINS = 8
CLAMP = 0.2
MIN_IMAGE_SIZE = 16


def image_gradients(pixels):
    """Central-difference gradients with replicated edges

    Args:
        pixels (np.ndarray): array of shape (height, width)

    Returns:
        tuple: (gx, gy) arrays of shape (height, width)
    """
    padded = np.pad(pixels, 1, mode="edge")
    gx = (padded[1:-1, 2:] - padded[1:-1, :-2]) / 2.0
    gy = (padded[2:, 1:-1] - padded[:-2, 1:-1]) / 2.0
    return gx, gy


def _spatial_weights(patch_size):
    """Bilinear cell assignment of the pixel offsets 0..patch_size-1

    Returns:
        tuple: (cells, weights) arrays of shape (patch_size, 2). Cells that
            fall outside the 4 spatial bins get weight 0 and index 0.
    """
    width = patch_size / SPATIAL_BINS
    u = (np.arange(patch_size) + 0.5) / width - 0.5
    low = np.floor(u).astype(np.int64)
    frac = u - low
    cells = np.stack([low, low + 1], axis=1)
    weights = np.stack([1.0 - frac, frac], axis=1)
    outside = (cells < 0) | (cells >= SPATIAL_BINS)
    weights[outside] = 0.0
    cells[outside] = 0
    return cells, weights


def clamp_descriptor(histogram):
    """L2-normalises a raw 128-bin histogram and clamps its components

    Args:
        histogram (np.ndarray): raw histogram(s), shape (..., 128)

    Returns:
        np.ndarray: the normalised histogram with every component <= 0.2.
            All-zero histograms are returned unchanged.
    """
    histogram = np.asarray(histogram, dtype=np.float64)
    norms = np.linalg.norm(histogram, axis=-1, keepdims=True)
    safe = np.where(norms > 0, norms, 1.0)
    return np.minimum(histogram / safe, CLAMP)


def sift_normalize(histogram):
    """Classic SIFT post-processing: normalise, clamp at 0.2, renormalise

    Args:
        histogram (np.ndarray): raw histogram(s), shape (..., 128)

    Returns:
        np.ndarray: float64 descriptors of unit norm (or all-zero)
    """
    clamped = clamp_descriptor(histogram)
    norms = np.linalg.norm(clamped, axis=-1, keepdims=True)
    safe = np.where(norms > 0, norms, 1.0)
    return clamped / safe


class DescriptorExtractor:
    """Dense SIFT-like descriptor extractor

    Keypoints are placed on a regular grid at patch centres. Each patch
    accumulates a 4x4 spatial x 8 orientation histogram of gradient
    magnitudes with bilinear binning in all three dimensions. Bins are
    accumulated in row-major pixel order so results are reproducible bit
    for bit. The orientation of every keypoint is 0.

    Args:
        grid_step (int, optional): distance in pixels between patches.
            Defaults to 8.
        patch_size (int, optional): patch side in pixels, at least 8 and
            divisible by 4. Defaults to 16.
    """

    def __init__(self, grid_step=8, patch_size=16) -> None:
        self.grid_step = grid_step
        self.patch_size = patch_size

    @property
    def grid_step(self):
        return self._grid_step

    @grid_step.setter
    def grid_step(self, value):
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
            raise TypeError("grid_step must be an int")
        if value < 1:
            raise ValueError("grid_step must be >= 1")
        self._grid_step = int(value)

    @property
    def patch_size(self):
        return self._patch_size

    @patch_size.setter
    def patch_size(self, value):
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
            raise TypeError("patch_size must be an int")
        if value < 8 or value % 4 != 0:
            raise ValueError("patch_size must be >= 8 and divisible by 4")
        self._patch_size = int(value)

    def grid_shape(self, width, height):
        """Number of patches along each axis

        Returns:
            tuple: (columns, rows)
        """
        nx = (width - self.patch_size) // self.grid_step + 1
        ny = (height - self.patch_size) // self.grid_step + 1
        return nx, ny

    def extract(self, img, image_id=None):
        """Extracts descriptors from an image

        Args:
            img (bofdb.Image): the image
            image_id (int, optional): id attached to the result. Defaults
                to None.

        Raises:
            ImageTooSmall: if the image is smaller than 16 pixels or than
                one patch

        Returns:
            bofdb.DescriptorSet: the descriptors in row-major grid order
        """
        P = self.patch_size
        if min(img.width, img.height) < max(MIN_IMAGE_SIZE, P):
            raise ImageTooSmall(
                "image {}x{} is too small for patch size {}".format(
                    img.width, img.height, P
                )
            )
        nx, ny = self.grid_shape(img.width, img.height)

        gx, gy = image_gradients(img.pixels)
        magnitude = np.hypot(gx, gy)
        theta = np.mod(np.arctan2(gy, gx), 2 * np.pi)
        o = theta * (ORIENTATION_BINS / (2 * np.pi))
        o_low = np.floor(o)
        o_frac = o - o_low
        o_low = o_low.astype(np.int64) % ORIENTATION_BINS
        o_high = (o_low + 1) % ORIENTATION_BINS

        cells, cell_w = _spatial_weights(P)
        tops = np.arange(ny) * self.grid_step
        lefts = np.arange(nx) * self.grid_step
        # absolute pixel coordinates of every patch pixel, patches in
        # row-major grid order, pixels in row-major order inside a patch
        rows = (tops[:, None, None, None] + np.arange(P)[None, None, :, None])
        cols = (lefts[None, :, None, None] + np.arange(P)[None, None, None, :])
        rows = np.broadcast_to(rows, (ny, nx, P, P)).reshape(-1, P * P)
        cols = np.broadcast_to(cols, (ny, nx, P, P)).reshape(-1, P * P)

        mag = magnitude[rows, cols]
        ori_bins = np.stack([o_low[rows, cols], o_high[rows, cols]], axis=-1)
        ori_w = np.stack([1.0 - o_frac[rows, cols], o_frac[rows, cols]], axis=-1)

        # per-pixel spatial bins, identical for every patch
        pr = np.repeat(np.arange(P), P)
        pc = np.tile(np.arange(P), P)
        row_cells, row_w = cells[pr], cell_w[pr]
        col_cells, col_w = cells[pc], cell_w[pc]

        n_patches = nx * ny
        # 8 contributions per pixel: (row bin, col bin, orientation bin)
        index = np.empty((n_patches, P * P, 2, 2, 2), dtype=np.int64)
        weight = np.empty((n_patches, P * P, 2, 2, 2), dtype=np.float64)
        for a in range(2):
            for b in range(2):
                spatial = (row_cells[:, a] * SPATIAL_BINS + col_cells[:, b]) * ORIENTATION_BINS
                sw = row_w[:, a] * col_w[:, b]
                for c in range(2):
                    index[:, :, a, b, c] = spatial[None, :] + ori_bins[:, :, c]
                    weight[:, :, a, b, c] = mag * sw[None, :] * ori_w[:, :, c]
        offsets = (np.arange(n_patches) * DESCRIPTOR_DIM)[:, None, None, None, None]
        raw = np.bincount(
            (index + offsets).ravel(),
            weights=weight.ravel(),
            minlength=n_patches * DESCRIPTOR_DIM,
        ).reshape(n_patches, DESCRIPTOR_DIM)

        vectors = sift_normalize(raw).astype(np.float32)

        radius = P / 2.0
        keypoints = [
            Keypoint(left + (P - 1) / 2.0, top + (P - 1) / 2.0, radius, 0.0)
            for top in tops
            for left in lefts
        ]
        return DescriptorSet(keypoints, vectors, image_id=image_id)


def extract_descriptors(img, grid_step=8, patch_size=16, image_id=None):
    """Extracts dense SIFT-like descriptors

    Args:
        img (bofdb.Image): the image
        grid_step (int, optional): grid spacing in pixels. Defaults to 8.
        patch_size (int, optional): patch side in pixels. Defaults to 16.
        image_id (int, optional): id attached to the result. Defaults to
            None.

    Returns:
        bofdb.DescriptorSet: the descriptors
    """
    extractor = DescriptorExtractor(grid_step=grid_step, patch_size=patch_size)
    return extractor.extract(img, image_id=image_id)
