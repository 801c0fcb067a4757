"""Min-max normalization of the 67 radiomics slots, fitted on training data.

apply() maps the training min to 0 and max to 1 and clamps held-out values
into [0,1]; constant features map to 0. Clinical slots are already coded in
[0,1] and pass through untouched.
"""

import json

import numpy as np

from .names import N_RADIOMICS, RADIOMICS_NAMES


class FeatureNormalizer:
    def __init__(self, vmin=None, vmax=None, fitted_on=""):
        self.vmin = vmin
        self.vmax = vmax
        self.fitted_on = fitted_on

    @property
    def fitted(self):
        return self.vmin is not None

    def _require_fitted(self):
        if not self.fitted:
            raise RuntimeError("normalizer has not been fitted")

    @property
    def constant_mask(self):
        self._require_fitted()
        return self.vmax <= self.vmin

    def fit(self, vectors, fitted_on=""):
        """Fit per-feature min/max on >= 2 radiomics vectors (mass samples)."""
        arr = np.asarray(vectors, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != N_RADIOMICS:
            raise ValueError(f"expected (n, {N_RADIOMICS}) array, got {arr.shape}")
        if arr.shape[0] < 2:
            raise ValueError("need at least 2 training vectors")
        self.vmin = arr.min(axis=0)
        self.vmax = arr.max(axis=0)
        self.fitted_on = fitted_on
        return self

    def apply(self, v):
        self._require_fitted()
        v = np.asarray(v, dtype=np.float64)
        span = self.vmax - self.vmin
        out = np.zeros_like(v)
        nc = span > 0
        out[..., nc] = (v[..., nc] - self.vmin[nc]) / span[nc]
        return np.clip(out, 0.0, 1.0)

    def invert(self, x):
        self._require_fitted()
        x = np.asarray(x, dtype=np.float64)
        span = self.vmax - self.vmin
        out = np.empty_like(x)
        nc = span > 0
        out[..., nc] = x[..., nc] * span[nc] + self.vmin[nc]
        out[..., ~nc] = self.vmin[~nc]
        return out

    def to_json(self, path):
        self._require_fitted()
        payload = {
            "fitted_on": self.fitted_on,
            "features": [
                {"name": n, "min": float(self.vmin[i]), "max": float(self.vmax[i])}
                for i, n in enumerate(RADIOMICS_NAMES)
            ],
        }
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")

    @classmethod
    def from_json(cls, path):
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
        by_name = {e["name"]: e for e in payload["features"]}
        if set(by_name) != set(RADIOMICS_NAMES):
            raise ValueError("normalizer file does not cover the canonical features")
        vmin = np.array([by_name[n]["min"] for n in RADIOMICS_NAMES], dtype=np.float64)
        vmax = np.array([by_name[n]["max"] for n in RADIOMICS_NAMES], dtype=np.float64)
        return cls(vmin, vmax, payload.get("fitted_on", ""))
