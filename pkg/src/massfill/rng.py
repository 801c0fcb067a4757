"""Named, splittable random streams.

Every stochastic operation in the package draws from an explicit stream
handle instead of global state. A stream is a counter-based Philox generator
keyed by SHA-256 over (root_seed, *path), so the same (seed, path) pair gives
the same byte sequence on any platform, and sibling streams are independent
by construction.
"""

import hashlib

import numpy as np


def derive_key(seed, *path):
    """Return the 128-bit (2-word) Philox key for a (seed, path...) address."""
    h = hashlib.sha256()
    h.update(str(int(seed)).encode("utf-8"))
    for part in path:
        h.update(b"/")
        h.update(str(part).encode("utf-8"))
    digest = h.digest()
    return np.frombuffer(digest, dtype=np.uint64)[:2]


def stream(seed, *path):
    """A fresh Generator for the named stream. Same arguments, same sequence."""
    return np.random.Generator(np.random.Philox(key=derive_key(seed, *path)))


def state_of(gen):
    """Serializable state snapshot of a generator (for checkpoint headers)."""
    st = gen.bit_generator.state
    return {
        "bit_generator": st["bit_generator"],
        "counter": [int(x) for x in st["state"]["counter"]],
        "key": [int(x) for x in st["state"]["key"]],
        "buffer": [int(x) for x in st["buffer"]],
        "buffer_pos": int(st["buffer_pos"]),
        "has_uint32": int(st["has_uint32"]),
        "uinteger": int(st["uinteger"]),
    }


def restore(snapshot):
    """Rebuild a generator from a state_of() snapshot."""
    bg = np.random.Philox()
    bg.state = {
        "bit_generator": snapshot["bit_generator"],
        "state": {
            "counter": np.array(snapshot["counter"], dtype=np.uint64),
            "key": np.array(snapshot["key"], dtype=np.uint64),
        },
        "buffer": np.array(snapshot["buffer"], dtype=np.uint64),
        "buffer_pos": snapshot["buffer_pos"],
        "has_uint32": snapshot["has_uint32"],
        "uinteger": snapshot["uinteger"],
    }
    return np.random.Generator(bg)
