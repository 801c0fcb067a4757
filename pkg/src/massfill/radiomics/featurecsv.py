"""Feature table I/O: one row per sample id, 69 canonical columns.

UTF-8, LF line endings, floats printed with 9 significant digits so files
are byte-reproducible across runs.
"""

import numpy as np

from .names import ALL_NAMES, N_FEATURES


def format_value(x):
    return "%.9g" % float(x)


def write_features(path, rows):
    """rows: iterable of (sample_id, vector of 69 floats)."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(["id"] + ALL_NAMES) + "\n")
        for sample_id, vec in rows:
            vec = np.asarray(vec, dtype=np.float64)
            if vec.shape != (N_FEATURES,):
                raise ValueError(f"{sample_id}: expected {N_FEATURES} values, got {vec.shape}")
            f.write(",".join([str(sample_id)] + [format_value(v) for v in vec]) + "\n")


def read_features(path):
    """Returns (ids list, (n, 69) float64 array)."""
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().rstrip("\n").split(",")
        if header != ["id"] + ALL_NAMES:
            raise ValueError(f"{path}: unexpected header")
        ids = []
        rows = []
        for line in f:
            parts = line.rstrip("\n").split(",")
            ids.append(parts[0])
            rows.append([float(x) for x in parts[1:]])
    return ids, np.asarray(rows, dtype=np.float64).reshape(len(ids), N_FEATURES)
