import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from PIL import Image

import topoprompt as tp
from topoprompt.errors import DecodeError, EmptyImageError, UnsupportedFormatError
from topoprompt.scalar_field import read_pgm, write_pgm

from oracle import direct_gaussian_convolution


def write_p5(path, width, height, maxval, samples):
    dtype = ">u2" if maxval > 255 else "u1"
    raster = np.array(samples, dtype=dtype).tobytes()
    path.write_bytes(f"P5\n{width} {height}\n{maxval}\n".encode() + raster)


class TestScalarImage:
    def test_requires_matching_length(self):
        with pytest.raises(ValueError):
            tp.ScalarImage(2, 2, np.zeros(3))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            tp.ScalarImage(2, 1, np.array([0.0, np.nan]))
        with pytest.raises(ValueError):
            tp.ScalarImage(2, 1, np.array([0.0, np.inf]))

    def test_rejects_empty(self):
        with pytest.raises(EmptyImageError):
            tp.ScalarImage(0, 5, np.zeros(0))

    def test_values_are_immutable(self):
        img = tp.ScalarImage(2, 1, np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            img.values[0] = 5.0


class TestLoadImage:
    def test_pgm_p5_decode(self, tmp_path):
        path = tmp_path / "a.pgm"
        write_p5(path, 2, 2, 255, [0, 255, 128, 64])
        img = tp.load_image(path)
        assert (img.width, img.height) == (2, 2)
        assert img.values.tolist() == [0, 255, 128, 64]

    def test_pgm_p5_invert(self, tmp_path):
        path = tmp_path / "a.pgm"
        write_p5(path, 2, 2, 255, [0, 255, 128, 64])
        img = tp.load_image(path, invert=True)
        assert img.values.tolist() == [255, 0, 127, 191]

    def test_sixteen_bit_png_roundtrip(self, tmp_path):
        # reference codec writes, our loader reads
        path = tmp_path / "a.png"
        Image.fromarray(np.array([[0, 65535, 32768]], dtype=np.uint16)).save(path)
        img = tp.load_image(path)
        assert (img.width, img.height) == (3, 1)
        assert img.values.tolist() == [0, 65535, 32768]

    def test_sixteen_bit_pgm(self, tmp_path):
        path = tmp_path / "a.pgm"
        write_p5(path, 3, 1, 65535, [0, 65535, 32768])
        img = tp.load_image(path)
        assert img.values.tolist() == [0, 65535, 32768]

    def test_pgm_p2_with_comments(self, tmp_path):
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P2 # plain graymap\n# another comment\n3 2\n1000\n"
                         b"0 1000 500\n7 8 9\n")
        img = tp.load_image(path)
        assert img.values.tolist() == [0, 1000, 500, 7, 8, 9]

    def test_pgm_invert_uses_declared_maxval(self, tmp_path):
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P2\n2 1\n100\n10 100\n")
        img = tp.load_image(path, invert=True)
        assert img.values.tolist() == [90, 0]

    def test_eight_bit_png(self, tmp_path):
        path = tmp_path / "a.png"
        Image.fromarray(np.array([[10, 20], [30, 40]], dtype=np.uint8)).save(path)
        img = tp.load_image(path)
        assert img.values.tolist() == [10, 20, 30, 40]

    def test_rgb_png_luminance(self, tmp_path):
        path = tmp_path / "rgb.png"
        rgb = np.zeros((1, 2, 3), dtype=np.uint8)
        rgb[0, 0] = (255, 0, 0)
        rgb[0, 1] = (10, 20, 30)
        Image.fromarray(rgb).save(path)
        img = tp.load_image(path)
        assert img.values[0] == pytest.approx(0.299 * 255)
        assert img.values[1] == pytest.approx(0.299 * 10 + 0.587 * 20 + 0.114 * 30)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            tp.load_image(tmp_path / "nope.png")

    def test_not_an_image(self, tmp_path):
        path = tmp_path / "junk.png"
        path.write_bytes(b"this is not an image at all")
        with pytest.raises(UnsupportedFormatError):
            tp.load_image(path)

    def test_truncated_pgm_raster(self, tmp_path):
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P5\n4 4\n255\n\x00\x01")
        with pytest.raises(DecodeError):
            tp.load_image(path)

    def test_pgm_maxval_out_of_range(self, tmp_path):
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P2\n1 1\n70000\n5\n")
        with pytest.raises(DecodeError):
            tp.load_image(path)

    def test_pgm_zero_dimension(self, tmp_path):
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P2\n0 4\n255\n")
        with pytest.raises(UnsupportedFormatError):
            tp.load_image(path)

    def test_write_read_pgm_roundtrip(self, tmp_path):
        arr = np.arange(12, dtype=np.int64).reshape(3, 4) * 5000
        path = tmp_path / "b.pgm"
        write_pgm(path, arr, maxval=65535)
        back, maxval = read_pgm(path)
        assert maxval == 65535
        assert np.array_equal(back, arr)


class TestNormalize:
    def test_affine_map(self):
        img = tp.ScalarImage(4, 1, np.array([0.0, 255.0, 128.0, 64.0]))
        out = tp.normalize(img)
        assert out.values.tolist() == [0.0, 1.0, 128 / 255, 64 / 255]

    def test_constant_maps_to_zero(self):
        img = tp.ScalarImage(2, 2, np.full(4, 7.0))
        assert tp.normalize(img).values.tolist() == [0.0, 0.0, 0.0, 0.0]

    def test_negative_range(self):
        img = tp.ScalarImage(2, 1, np.array([-2.0, 2.0]))
        assert tp.normalize(img).values.tolist() == [0.0, 1.0]

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=40))
    def test_idempotent(self, vals):
        img = tp.ScalarImage(len(vals), 1, np.array(vals))
        once = tp.normalize(img)
        twice = tp.normalize(once)
        assert np.array_equal(once.values, twice.values)
        if max(vals) > min(vals):
            assert once.values.min() == 0.0 and once.values.max() == 1.0


class TestInvert:
    def test_load_level_involution(self, tmp_path):
        path = tmp_path / "a.pgm"
        write_p5(path, 2, 2, 255, [3, 250, 17, 99])
        plain = tp.load_image(path)
        flipped = tp.load_image(path, invert=True)
        assert np.array_equal(255.0 - flipped.values, plain.values)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(-100, 100), min_size=1, max_size=30))
    def test_field_level_involution(self, vals):
        img = tp.ScalarImage(len(vals), 1, np.array(vals))
        back = tp.invert(tp.invert(img))
        assert np.allclose(back.values, img.values, atol=1e-12)


class TestGaussianSmooth:
    def test_sigma_zero_is_identity(self):
        img = tp.ScalarImage(3, 3, np.arange(9, dtype=float))
        assert tp.gaussian_smooth(img, 0.0) is img

    def test_negative_sigma_raises(self):
        img = tp.ScalarImage(2, 1, np.zeros(2))
        with pytest.raises(ValueError):
            tp.gaussian_smooth(img, -0.5)

    def test_impulse_stays_symmetric(self):
        img = tp.ScalarImage(5, 1, np.array([0.0, 0.0, 1.0, 0.0, 0.0]))
        out = tp.gaussian_smooth(img, 1.0).values
        assert out[0] == pytest.approx(out[4])
        assert out[1] == pytest.approx(out[3])
        assert out[2] == max(out)

    def test_matches_direct_convolution_1x3(self):
        img = tp.ScalarImage(3, 1, np.array([0.0, 1.0, 0.0]))
        out = tp.gaussian_smooth(img, 0.5)
        want = direct_gaussian_convolution([[0.0, 1.0, 0.0]], 0.5)
        assert np.allclose(out.as_array(), want, rtol=1e-12, atol=1e-15)

    def test_matches_direct_convolution_random_2d(self):
        rng = np.random.default_rng(3)
        arr = rng.uniform(0, 1, size=(6, 9))
        out = tp.gaussian_smooth(tp.ScalarImage.from_array(arr), 1.3)
        want = direct_gaussian_convolution(arr.tolist(), 1.3)
        assert np.allclose(out.as_array(), want, rtol=1e-10, atol=1e-12)

    def test_preserves_interior_mass(self):
        # support far enough from the border that clamping never triggers
        arr = np.zeros((31, 31))
        arr[14:17, 14:17] = np.arange(9).reshape(3, 3)
        img = tp.ScalarImage.from_array(arr)
        out = tp.gaussian_smooth(img, 2.0)
        assert out.values.sum() == pytest.approx(arr.sum(), rel=1e-9)

    def test_never_expands_value_range(self):
        rng = np.random.default_rng(4)
        arr = rng.uniform(-5, 5, size=(12, 8))
        img = tp.ScalarImage.from_array(arr)
        for sigma in (0.4, 1.0, 3.0):
            out = tp.gaussian_smooth(img, sigma)
            assert out.values.max() <= arr.max() + 1e-12
            assert out.values.min() >= arr.min() - 1e-12

    def test_kernel_radius_larger_than_image(self):
        img = tp.ScalarImage(3, 2, np.arange(6, dtype=float))
        out = tp.gaussian_smooth(img, 5.0)
        want = direct_gaussian_convolution(img.as_array().tolist(), 5.0)
        assert np.allclose(out.as_array(), want, rtol=1e-10, atol=1e-12)
