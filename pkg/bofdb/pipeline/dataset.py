"""Synthetic texture classes standing in for a photographic corpus.

Every image is a seeded, jittered texture plus Gaussian noise:

  - stripes: sinusoidal stripes, period 6-10 px, near-vertical
  - checkerboard: squares of side 6-10 px with a random offset
  - dots: a lattice of discs, spacing 10-14 px, radius 2-3.5 px
  - rings: concentric sinusoidal rings, period 6-10 px, centre jittered
"""

from pathlib import Path

import numpy as np

from bofdb.features.image import Image, encode_image
from bofdb.pipeline.learn_spec import TrainingImage

CLASSES = ("stripes", "checkerboard", "dots", "rings")
NOISE = 0.05


def _stripes(rng, yy, xx):
    period = rng.uniform(6, 10)
    angle = rng.uniform(-0.3, 0.3)
    phase = rng.uniform(0, 2 * np.pi)
    u = xx * np.cos(angle) + yy * np.sin(angle)
    return 0.5 + 0.5 * np.sin(2 * np.pi * u / period + phase)


def _checkerboard(rng, yy, xx):
    side = rng.uniform(6, 10)
    ox, oy = rng.uniform(0, side, size=2)
    cells = np.floor((xx + ox) / side) + np.floor((yy + oy) / side)
    return np.mod(cells, 2)


def _dots(rng, yy, xx):
    spacing = rng.uniform(10, 14)
    radius = rng.uniform(2, 3.5)
    ox, oy = rng.uniform(0, spacing, size=2)
    dx = np.mod(xx + ox, spacing) - spacing / 2
    dy = np.mod(yy + oy, spacing) - spacing / 2
    return (np.hypot(dx, dy) < radius).astype(np.float64)


def _rings(rng, yy, xx):
    period = rng.uniform(6, 10)
    phase = rng.uniform(0, 2 * np.pi)
    height, width = yy.shape
    cy, cx = np.array([height, width]) / 2 + rng.uniform(-6, 6, size=2)
    return 0.5 + 0.5 * np.sin(2 * np.pi * np.hypot(yy - cy, xx - cx) / period + phase)


PATTERNS = {
    "stripes": _stripes,
    "checkerboard": _checkerboard,
    "dots": _dots,
    "rings": _rings,
}


def generate_image(class_label, rng, size=64):
    """One synthetic image

    Args:
        class_label (str): one of CLASSES
        rng (np.random.Generator): the random generator
        size (int, optional): image side in pixels. Defaults to 64.

    Returns:
        bofdb.Image: the image
    """
    if class_label not in PATTERNS:
        raise ValueError("unknown class {}, choose from {}".format(class_label, CLASSES))
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    pixels = PATTERNS[class_label](rng, yy, xx)
    pixels = pixels + rng.normal(0, NOISE, size=pixels.shape)
    return Image(np.clip(pixels, 0, 1))


def synthetic_images(classes=3, per_class=60, seed=0, size=64):
    """Labelled PGM files of the first `classes` synthetic classes

    Image i of class c is drawn from np.random.default_rng([seed, c, i]),
    so a given image doesn't depend on how many others are generated.

    Args:
        classes (int, optional): number of classes, 2 to 4. Defaults to 3.
        per_class (int, optional): images per class. Defaults to 60.
        seed (int, optional): the seed. Defaults to 0.
        size (int, optional): image side. Defaults to 64.

    Returns:
        list: bofdb.pipeline.learn_spec.TrainingImage objects
    """
    if not 2 <= classes <= len(CLASSES):
        raise ValueError("classes must be between 2 and {}".format(len(CLASSES)))
    images = []
    for c, label in enumerate(CLASSES[:classes]):
        for i in range(per_class):
            rng = np.random.default_rng([seed, c, i])
            data = encode_image(generate_image(label, rng, size))
            images.append(TrainingImage(data, label, "{}_{:03d}.pgm".format(label, i)))
    return images


def generate_dataset(directory, classes=3, per_class=60, seed=0, size=64):
    """Writes synthetic PGM files and a manifest.csv (path,class)

    Args:
        directory (str or pathlib.Path): output directory, created if
            needed

    Returns:
        pathlib.Path: the manifest path
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rows = [["path", "class"]]
    for image in synthetic_images(classes, per_class, seed, size):
        (directory / image.name).write_bytes(image.data)
        rows.append([image.name, image.class_label])
    manifest = directory / "manifest.csv"
    np.savetxt(manifest, np.array(rows), fmt="%s", delimiter=",")
    print("Wrote {} images to {}".format(len(rows) - 1, directory))
    return manifest
