"""PNG I/O: 16-bit grayscale images, 8-bit masks.

Intensities in [0,1] are scaled to the full uint16 range on write and back
on read; round-tripping is exact at the 16-bit quantization. Pillow's PNG
writer is deterministic for fixed pixel data, which the dataset determinism
contract relies on.
"""

import numpy as np
from PIL import Image


def write_gray16(path, img):
    arr = np.asarray(img, dtype=np.float64)
    if arr.min() < 0 or arr.max() > 1:
        raise ValueError(f"intensities outside [0,1]: [{arr.min()}, {arr.max()}]")
    q = np.round(arr * 65535.0).astype(np.uint16)
    Image.fromarray(q).save(path, format="PNG")


def read_gray16(path):
    arr = np.array(Image.open(path), dtype=np.uint16)
    return (arr.astype(np.float32) / np.float32(65535.0)).astype(np.float32)


def write_mask8(path, mask):
    q = np.where(np.asarray(mask, dtype=bool), 255, 0).astype(np.uint8)
    Image.fromarray(q, mode="L").save(path, format="PNG")


def read_mask8(path):
    return np.array(Image.open(path), dtype=np.uint8) > 127
