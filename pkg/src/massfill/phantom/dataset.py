"""Dataset materialization: phantom samples to PNG files plus a manifest.

The manifest pins every sample's labels, seed and file paths; regenerating
from the same config yields byte-identical files. Split assignment is a
seeded shuffle over all samples with the configured fractions.
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .. import rng
from .pngio import write_gray16, write_mask8
from .sample import make_sample

MANIFEST_VERSION = 1

STRATA = [
    ("low", "normal"),
    ("low", "benign"),
    ("low", "malignant"),
    ("high", "normal"),
    ("high", "benign"),
    ("high", "malignant"),
]


@dataclass
class PhantomDatasetConfig:
    seed: int = 0
    size: int = 64
    distribution: str = "primary"
    counts: dict = field(
        default_factory=lambda: {
            "low-normal": 40,
            "low-benign": 20,
            "low-malignant": 20,
            "high-normal": 40,
            "high-benign": 20,
            "high-malignant": 20,
        }
    )
    split_fractions: dict = field(
        default_factory=lambda: {"train": 0.7, "val": 0.1, "test": 0.2}
    )


def _assign_splits(n, fractions, gen):
    order = gen.permutation(n)
    n_train = int(round(fractions["train"] * n))
    n_val = int(round(fractions["val"] * n))
    splits = [""] * n
    for rank, idx in enumerate(order):
        if rank < n_train:
            splits[idx] = "train"
        elif rank < n_train + n_val:
            splits[idx] = "val"
        else:
            splits[idx] = "test"
    return splits


def iter_sample_specs(config):
    """Deterministic (id, density, birads, seed) tuples for a config."""
    i = 0
    for density, birads in STRATA:
        key = f"{density}-{birads}"
        for _ in range(int(config.counts.get(key, 0))):
            seed = int(rng.derive_key(config.seed, "sample", i)[0] >> 1)
            yield (f"s{i:06d}", density, birads, seed)
            i += 1


def make_dataset(config, out_dir, config_hash="", overwrite=False):
    """Generate all samples and write PNGs plus manifest.json.

    Returns the manifest dict. Refuses to clobber an existing manifest
    unless overwrite is set.
    """
    manifest_path = os.path.join(out_dir, "manifest.json")
    if os.path.exists(manifest_path) and not overwrite:
        raise FileExistsError(f"{manifest_path} exists; pass overwrite to regenerate")
    files_dir = os.path.join(out_dir, "files")
    os.makedirs(files_dir, exist_ok=True)

    specs = list(iter_sample_specs(config))
    splits = _assign_splits(len(specs), config.split_fractions, rng.stream(config.seed, "split"))

    samples = []
    for (sample_id, density, birads, seed), split in zip(specs, splits):
        s = make_sample(seed, density, birads, config.size, config.distribution)
        rel_image = f"files/{sample_id}_image.png"
        rel_opp = f"files/{sample_id}_opposite.png"
        rel_mask = f"files/{sample_id}_mask.png"
        write_gray16(os.path.join(out_dir, rel_image), s.image)
        write_gray16(os.path.join(out_dir, rel_opp), s.opposite)
        write_mask8(os.path.join(out_dir, rel_mask), s.mask)
        samples.append(
            {
                "id": sample_id,
                "split": split,
                "density": density,
                "birads": birads,
                "seed": seed,
                "image": rel_image,
                "opposite": rel_opp,
                "mask": rel_mask,
                "bbox": list(s.bbox) if s.bbox is not None else None,
            }
        )

    manifest = {
        "version": MANIFEST_VERSION,
        "config_hash": config_hash,
        "size": config.size,
        "distribution": config.distribution,
        "samples": samples,
    }
    tmp = manifest_path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    os.replace(tmp, manifest_path)
    return manifest


def load_manifest(path):
    with open(path, "r", encoding="utf-8") as f:
        manifest = json.load(f)
    if manifest.get("version") != MANIFEST_VERSION:
        raise ValueError(f"{path}: unsupported manifest version")
    return manifest


def manifest_samples(manifest, split=None, with_mass=None):
    out = []
    for s in manifest["samples"]:
        if split is not None and s["split"] != split:
            continue
        is_mass = s["birads"] != "normal"
        if with_mass is not None and is_mass != with_mass:
            continue
        out.append(s)
    return out
