"""Binary PGM rendering of bifurcation scans.

PGM is used instead of a compressed format so the diagram bytes are exactly
specifiable: header "P5\\n<width> <height>\\n255\\n" followed by one
grayscale byte per pixel, row-major, top row = states near 1.
"""

from __future__ import annotations

from .ergodic import BifurcationData

# An attracting cycle puts all its samples on a handful of rows; saturating
# the density at a small count keeps cycles as dark as chaotic bands.
COUNT_CAP = 4


def render_bifurcation_pgm(data: BifurcationData, height: int) -> bytes:
    """Render one column per parameter, binning samples over x in [0, 1].

    Pixel value is 255 - round(255 * min(1, count/COUNT_CAP)); escaped
    columns stay all-white.
    """
    if height < 2:
        raise ValueError(f"height must be >= 2, got {height}")
    width = len(data.a_values)
    if width == 0:
        raise ValueError("cannot render an empty scan")

    grid = [[0] * width for _ in range(height)]
    for col in range(width):
        if data.escaped[col]:
            continue
        for x in data.samples[col]:
            row = int((1.0 - x) * height)
            if row < 0:
                row = 0
            elif row > height - 1:
                row = height - 1
            grid[row][col] += 1

    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    pixels = bytearray(width * height)
    idx = 0
    for row in range(height):
        for col in range(width):
            count = grid[row][col]
            if count == 0:
                pixels[idx] = 255
            else:
                density = count / COUNT_CAP
                if density > 1.0:
                    density = 1.0
                pixels[idx] = 255 - int(round(255.0 * density))
            idx += 1
    return bytes(header + pixels)
