"""Shared checkpoint container.

Layout: magic bytes "RFMK", uint32 format version, uint32 header length, the
UTF-8 JSON header, then raw little-endian float32 tensor payloads in header
order. The header carries the architecture description, tensor
names/shapes/offsets, and any RNG stream states the producer wants to pin.
Files are written atomically (temp + rename) and hashed with SHA-256.
"""

import hashlib
import json
import os
import struct
import tempfile

import numpy as np

MAGIC = b"RFMK"
FORMAT_VERSION = 1


class CheckpointError(RuntimeError):
    pass


def save(path, architecture, tensors, rng_streams=None, meta=None):
    """Write named float32 tensors with a JSON header.

    tensors: dict name -> array; insertion order defines payload order.
    """
    entries = []
    offset = 0
    arrays = []
    for name, arr in tensors.items():
        arr = np.ascontiguousarray(np.asarray(arr, dtype=np.float32))
        entries.append({"name": name, "shape": list(arr.shape), "offset": offset})
        offset += arr.nbytes
        arrays.append(arr)
    header = {
        "architecture": architecture,
        "tensors": entries,
        "rng_streams": rng_streams or {},
        "meta": meta or {},
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    dirname = os.path.dirname(os.path.abspath(path))
    os.makedirs(dirname, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=dirname, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(MAGIC)
            f.write(struct.pack("<I", FORMAT_VERSION))
            f.write(struct.pack("<I", len(blob)))
            f.write(blob)
            for arr in arrays:
                if arr.dtype.byteorder == ">":
                    arr = arr.astype("<f4")
                f.write(arr.tobytes())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load(path):
    """Read a checkpoint; returns (header dict, {name: float32 array})."""
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != MAGIC:
            raise CheckpointError(f"{path}: bad magic {magic!r}")
        version = struct.unpack("<I", f.read(4))[0]
        if version != FORMAT_VERSION:
            raise CheckpointError(f"{path}: unsupported format version {version}")
        hlen = struct.unpack("<I", f.read(4))[0]
        header = json.loads(f.read(hlen).decode("utf-8"))
        payload = f.read()
    tensors = {}
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        start = entry["offset"]
        arr = np.frombuffer(payload, dtype="<f4", count=count, offset=start)
        tensors[entry["name"]] = arr.reshape(shape).copy()
    return header, tensors


def file_sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
