import numpy as np
import pytest

from bofdb import Image, decode_image, encode_image, MalformedImage


def test_decode_p5():
    data = b"P5\n2 2\n255\n" + bytes([0, 255, 128, 64])
    img = decode_image(data)

    assert (img.width, img.height) == (2, 2)
    assert np.allclose(img.pixels, [[0, 1], [128 / 255, 64 / 255]])


def test_decode_p2_with_comments():
    data = b"P2\n# a comment\n3 1 # another\n10\n0 5 10\n"
    img = decode_image(data)

    assert np.allclose(img.pixels, [[0, 0.5, 1]])


def test_decode_p6_white_is_one():
    img = decode_image(b"P6\n1 1\n255\n" + bytes([255, 255, 255]))

    assert img.pixels[0, 0] == pytest.approx(1.0)


def test_decode_p3_luminance():
    img = decode_image(b"P3 1 1 255 255 0 0")

    assert img.pixels[0, 0] == pytest.approx(0.299)


def test_decode_16_bit():
    raster = np.array([0, 65535], dtype=">u2").tobytes()
    img = decode_image(b"P5\n2 1\n65535\n" + raster)

    assert np.allclose(img.pixels, [[0, 1]])


@pytest.mark.parametrize(
    "data",
    [
        b"",
        b"P5\n2",
        b"P7\n1 1\n255\n\x00",
        b"P5\n2 2\n255\n\x00\x00",
        b"P5\n1 1\n0\n\x00",
        b"P5\n1 1\n70000\n\x00\x00",
        b"P2\n2 1\n10\n3\n",
        b"P2\n1 1\n10\n11\n",
    ],
)
def test_malformed(data):
    with pytest.raises(MalformedImage):
        decode_image(data)


def test_encode_decode():
    rng = np.random.default_rng(3)
    img = Image(np.round(rng.uniform(size=(5, 7)) * 255) / 255)
    decoded = decode_image(encode_image(img))

    assert np.allclose(decoded.pixels, img.pixels)


class TestImage:
    def test_pixels_out_of_range(self):
        with pytest.raises(ValueError, match="pixels must be in"):
            Image(np.full((2, 2), 1.5))

    def test_pixels_not_2d(self):
        with pytest.raises(ValueError, match="non-empty 2D array"):
            Image(np.zeros(4))

    def test_encode_wrong_maxval(self):
        with pytest.raises(ValueError, match="maxval must be 255 or 65535"):
            encode_image(Image(np.zeros((2, 2))), maxval=100)
