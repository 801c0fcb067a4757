"""Multi-octave value noise on a bilinear lattice."""

import numpy as np


def value_noise(gen, shape, base_cells=4, octaves=4, persistence=0.55):
    """Smooth noise in [-1, 1], deterministic per generator state."""
    h, w = shape
    out = np.zeros((h, w), dtype=np.float64)
    total = 0.0
    for o in range(octaves):
        cells = base_cells * (1 << o)
        grid = gen.uniform(-1.0, 1.0, size=(cells + 1, cells + 1))
        ys = np.linspace(0.0, cells, h)
        xs = np.linspace(0.0, cells, w)
        y0 = np.minimum(ys.astype(np.int64), cells - 1)
        x0 = np.minimum(xs.astype(np.int64), cells - 1)
        fy = (ys - y0)[:, None]
        fx = (xs - x0)[None, :]
        g00 = grid[np.ix_(y0, x0)]
        g01 = grid[np.ix_(y0, x0 + 1)]
        g10 = grid[np.ix_(y0 + 1, x0)]
        g11 = grid[np.ix_(y0 + 1, x0 + 1)]
        layer = (
            g00 * (1 - fy) * (1 - fx)
            + g01 * (1 - fy) * fx
            + g10 * fy * (1 - fx)
            + g11 * fy * fx
        )
        amp = persistence**o
        out += amp * layer
        total += amp
    return out / total
