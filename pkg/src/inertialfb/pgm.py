"""Minimal PGM (P2/P5) reader and writer.

Pixels are normalized to [0, 1] floats on read; the writer clamps to [0, 1]
and quantizes at the requested bit depth. Round trips are lossless at the
file's own depth.
"""

from __future__ import annotations

import numpy as np

from .errors import MalformedPGM


def _is_space(b: int) -> bool:
    return b in b" \t\r\n\x0b\x0c"


class _Tokenizer:
    """Whitespace/comment-aware header scanner tracking the byte offset."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_separators(self):
        d = self.data
        while self.pos < len(d):
            if _is_space(d[self.pos]):
                self.pos += 1
            elif d[self.pos : self.pos + 1] == b"#":
                while self.pos < len(d) and d[self.pos] not in b"\n":
                    self.pos += 1
            else:
                return

    def token(self) -> bytes:
        self.skip_separators()
        start = self.pos
        d = self.data
        while self.pos < len(d) and not _is_space(d[self.pos]) and d[self.pos : self.pos + 1] != b"#":
            self.pos += 1
        if self.pos == start:
            raise MalformedPGM("unexpected end of header", offset=start)
        return d[start : self.pos]

    def integer(self, what: str) -> int:
        start = self.pos
        tok = self.token()
        try:
            return int(tok)
        except ValueError:
            raise MalformedPGM(f"expected integer {what}, got {tok!r}", offset=start) from None


def pgm_read(path) -> tuple[np.ndarray, int]:
    """Read a P2 or P5 file. Returns (image in [0, 1] of shape (rows, cols),
    maxval)."""
    with open(path, "rb") as fh:
        data = fh.read()
    tok = _Tokenizer(data)
    magic = tok.token()
    if magic not in (b"P2", b"P5"):
        raise MalformedPGM(f"bad magic {magic!r}", offset=0)
    cols = tok.integer("width")
    rows = tok.integer("height")
    maxval = tok.integer("maxval")
    if cols <= 0 or rows <= 0:
        raise MalformedPGM(f"bad dimensions {cols}x{rows}", offset=tok.pos)
    if not 0 < maxval <= 65535:
        raise MalformedPGM(f"maxval {maxval} out of range (0, 65535]", offset=tok.pos)
    count = rows * cols

    if magic == b"P2":
        values = np.empty(count, dtype=np.int64)
        for i in range(count):
            start = tok.pos
            values[i] = tok.integer("pixel")
            if values[i] < 0 or values[i] > maxval:
                raise MalformedPGM(f"pixel value {values[i]} outside [0, {maxval}]", offset=start)
    else:
        # exactly one whitespace byte separates the header from the raster
        # (raster bytes may themselves look like whitespace, so no skipping)
        if tok.pos < len(data) and _is_space(data[tok.pos]):
            tok.pos += 1
        start = tok.pos
        width = 1 if maxval < 256 else 2
        raster = data[start : start + count * width]
        if len(raster) != count * width:
            raise MalformedPGM(
                f"raster truncated: need {count * width} bytes, have {len(raster)}",
                offset=start,
            )
        dtype = np.dtype(">u2") if width == 2 else np.dtype("u1")
        values = np.frombuffer(raster, dtype=dtype).astype(np.int64)
        if np.any(values > maxval):
            bad = start + int(np.argmax(values > maxval)) * width
            raise MalformedPGM("pixel value exceeds maxval", offset=bad)

    image = values.astype(float).reshape(rows, cols) / maxval
    return image, maxval


def pgm_write(path, image: np.ndarray, maxval: int = 255, binary: bool = True) -> None:
    """Write an image with values in [0, 1] (clamped) as P5 (default) or P2."""
    if not 0 < maxval <= 65535:
        raise ValueError(f"maxval {maxval} out of range (0, 65535]")
    image = np.asarray(image, dtype=float)
    if image.ndim != 2:
        raise ValueError(f"expected a 2D image, got shape {image.shape}")
    rows, cols = image.shape
    q = np.rint(np.clip(image, 0.0, 1.0) * maxval).astype(np.int64)
    magic = b"P5" if binary else b"P2"
    header = b"%s\n%d %d\n%d\n" % (magic, cols, rows, maxval)
    with open(path, "wb") as fh:
        fh.write(header)
        if binary:
            dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
            fh.write(q.astype(dtype).tobytes())
        else:
            for row in q:
                fh.write((" ".join(str(v) for v in row) + "\n").encode("ascii"))
