import numpy as np
import pytest

from inertialfb.errors import MalformedPGM
from inertialfb.pgm import pgm_read, pgm_write


class TestRoundTrip:
    def test_8bit_binary(self, tmp_path):
        rng = np.random.default_rng(0)
        img = rng.integers(0, 256, size=(12, 7)) / 255.0
        path = tmp_path / "a.pgm"
        pgm_write(path, img, maxval=255)
        back, maxval = pgm_read(path)
        assert maxval == 255
        assert np.array_equal(back, img)

    def test_16bit_binary(self, tmp_path):
        rng = np.random.default_rng(1)
        img = rng.integers(0, 65536, size=(5, 9)) / 65535.0
        path = tmp_path / "b.pgm"
        pgm_write(path, img, maxval=65535)
        back, maxval = pgm_read(path)
        assert maxval == 65535
        assert np.array_equal(back, img)

    def test_ascii_binary_equivalence(self, tmp_path):
        rng = np.random.default_rng(2)
        img = rng.integers(0, 256, size=(6, 6)) / 255.0
        p2 = tmp_path / "ascii.pgm"
        p5 = tmp_path / "binary.pgm"
        pgm_write(p2, img, binary=False)
        pgm_write(p5, img, binary=True)
        a, _ = pgm_read(p2)
        b, _ = pgm_read(p5)
        assert np.array_equal(a, b)

    def test_clamping_on_write(self, tmp_path):
        path = tmp_path / "c.pgm"
        pgm_write(path, np.array([[-0.5, 1.5]]))
        back, _ = pgm_read(path)
        assert np.array_equal(back, [[0.0, 1.0]])


class TestParsing:
    def test_small_ascii_file(self, tmp_path):
        path = tmp_path / "small.pgm"
        path.write_text("P2\n# comment line\n3 2\n255\n0 255 0\n255 0 255\n")
        img, maxval = pgm_read(path)
        assert maxval == 255
        assert np.array_equal(img, [[0.0, 1.0, 0.0], [1.0, 0.0, 1.0]])

    def test_binary_raster_with_whitespace_bytes(self, tmp_path):
        # raster bytes 0x20/0x0a must not be eaten as separators
        path = tmp_path / "ws.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes([32, 10, 13, 9]))
        img, _ = pgm_read(path)
        assert np.array_equal(np.rint(img * 255), [[32, 10], [13, 9]])

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.pgm"
        path.write_bytes(b"P6\n2 2\n255\n1234")
        with pytest.raises(MalformedPGM):
            pgm_read(path)

    def test_truncated_raster_reports_offset(self, tmp_path):
        path = tmp_path / "short.pgm"
        path.write_bytes(b"P5\n4 4\n255\nabc")
        with pytest.raises(MalformedPGM) as exc:
            pgm_read(path)
        assert exc.value.offset == 11

    def test_pixel_out_of_range(self, tmp_path):
        path = tmp_path / "range.pgm"
        path.write_text("P2\n2 1\n255\n12 999\n")
        with pytest.raises(MalformedPGM, match="outside"):
            pgm_read(path)

    def test_bad_maxval(self, tmp_path):
        path = tmp_path / "maxval.pgm"
        path.write_text("P2\n2 1\n70000\n1 2\n")
        with pytest.raises(MalformedPGM, match="maxval"):
            pgm_read(path)
