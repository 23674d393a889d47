import numpy as np

from bofdb.errors import MalformedImage

LUMINANCE_WEIGHTS = (0.299, 0.587, 0.114)


class Image:
    """A grayscale image with intensities in [0, 1]

    Args:
        pixels (np.ndarray): 2D array of shape (height, width), row-major.

    Attributes:
        pixels (np.ndarray): float64 array of shape (height, width)
        width (int): number of columns
        height (int): number of rows
    """

    def __init__(self, pixels) -> None:
        self.pixels = pixels

    @property
    def pixels(self):
        return self._pixels

    @pixels.setter
    def pixels(self, value):
        value = np.asarray(value, dtype=np.float64)
        if value.ndim != 2 or value.size == 0:
            raise ValueError("pixels must be a non-empty 2D array")
        if not np.all(np.isfinite(value)):
            raise ValueError("pixels must be finite")
        if value.min() < 0 or value.max() > 1:
            raise ValueError("pixels must be in [0, 1]")
        self._pixels = value

    @property
    def width(self):
        return self._pixels.shape[1]

    @property
    def height(self):
        return self._pixels.shape[0]


class _HeaderReader:
    """Reads whitespace separated netpbm header tokens, skipping comments"""

    def __init__(self, data):
        self.data = data
        self.pos = 0

    def token(self):
        data = self.data
        n = len(data)
        while self.pos < n:
            ch = data[self.pos]
            if ch == ord("#"):
                while self.pos < n and data[self.pos] not in (0x0A, 0x0D):
                    self.pos += 1
            elif chr(ch).isspace():
                self.pos += 1
            else:
                break
        start = self.pos
        while self.pos < n and not chr(data[self.pos]).isspace() and data[self.pos] != ord("#"):
            self.pos += 1
        if start == self.pos:
            raise MalformedImage("truncated header")
        return data[start : self.pos]

    def integer(self, name):
        tok = self.token()
        try:
            return int(tok.decode("ascii"))
        except (UnicodeDecodeError, ValueError):
            raise MalformedImage("invalid {} in header".format(name))


def decode_image(data):
    """Decodes a PGM (P2/P5) or PPM (P3/P6) file

    Colour images are converted to grayscale with the luminance weights
    0.299 R + 0.587 G + 0.114 B. Intensities are divided by maxval.

    Args:
        data (bytes): the file content

    Raises:
        MalformedImage: bad magic, truncated payload or maxval outside
            [1, 65535]

    Returns:
        Image: the decoded grayscale image
    """
    data = bytes(data)
    if len(data) < 2:
        raise MalformedImage("truncated header")
    magic = data[:2]
    if magic not in (b"P2", b"P3", b"P5", b"P6"):
        raise MalformedImage("bad magic {!r}".format(magic))
    reader = _HeaderReader(data)
    reader.pos = 2
    width = reader.integer("width")
    height = reader.integer("height")
    maxval = reader.integer("maxval")
    if width < 1 or height < 1:
        raise MalformedImage("image dimensions must be positive")
    if not 1 <= maxval <= 65535:
        raise MalformedImage("maxval must be in [1, 65535], got {}".format(maxval))
    channels = 3 if magic in (b"P3", b"P6") else 1
    count = width * height * channels

    if magic in (b"P5", b"P6"):
        # exactly one whitespace byte separates header and raster
        if reader.pos >= len(data) or not chr(data[reader.pos]).isspace():
            raise MalformedImage("truncated header")
        start = reader.pos + 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        needed = count * dtype.itemsize
        if len(data) - start < needed:
            raise MalformedImage(
                "truncated payload: expected {} bytes, got {}".format(
                    needed, len(data) - start
                )
            )
        raw = np.frombuffer(data, dtype=dtype, count=count, offset=start)
    else:
        tokens = data[reader.pos :].split()
        if len(tokens) < count:
            raise MalformedImage(
                "truncated payload: expected {} samples, got {}".format(
                    count, len(tokens)
                )
            )
        try:
            raw = np.array([int(t) for t in tokens[:count]], dtype=np.int64)
        except ValueError:
            raise MalformedImage("non-integer sample in payload")

    samples = raw.astype(np.float64)
    if samples.max(initial=0) > maxval:
        raise MalformedImage("sample exceeds maxval")
    samples = samples / maxval
    if channels == 3:
        rgb = samples.reshape(height, width, 3)
        r, g, b = LUMINANCE_WEIGHTS
        gray = r * rgb[..., 0] + g * rgb[..., 1] + b * rgb[..., 2]
        # the weights sum to one up to rounding
        pixels = np.clip(gray, 0.0, 1.0)
    else:
        pixels = samples.reshape(height, width)
    return Image(pixels)


def encode_image(img, maxval=255):
    """Writes an image as a binary PGM (P5) file

    Args:
        img (Image): the image
        maxval (int, optional): 255 or 65535. Defaults to 255.

    Returns:
        bytes: the file content
    """
    if maxval not in (255, 65535):
        raise ValueError("maxval must be 255 or 65535")
    header = "P5\n{} {}\n{}\n".format(img.width, img.height, maxval).encode("ascii")
    dtype = np.dtype("u1") if maxval == 255 else np.dtype(">u2")
    raster = np.rint(img.pixels * maxval).astype(dtype)
    return header + raster.tobytes()
