"""Mask sampling and the curriculum schedule.

Mass samples mask round(rate * 69) slots uniformly without replacement;
normal samples (all-zero radiomics by definition) are never masked. The
curriculum ramps the rate linearly from the start value to the final value
over the first half of training, then holds it flat.
"""

import numpy as np

from ..radiomics import N_FEATURES


def sample_mask(rate, gen, is_normal=False):
    """Index set of masked slots for one sample."""
    if not 0.0 <= rate <= 0.95:
        raise ValueError(f"mask rate {rate} outside [0, 0.95]")
    if is_normal:
        return np.zeros(0, dtype=np.int64)
    k = int(round(rate * N_FEATURES))
    if k == 0:
        return np.zeros(0, dtype=np.int64)
    return np.sort(gen.choice(N_FEATURES, size=k, replace=False))


def curriculum_rate(epoch, total_epochs, start, final, fraction=0.5):
    """Masking rate for a 0-based epoch index; non-decreasing in epoch."""
    ramp_epochs = max(1, int(round(fraction * total_epochs)))
    ramp = min(1.0, epoch / ramp_epochs)
    return start + (final - start) * ramp


def batch_mask_flags(rate, gen, is_normal_flags):
    """(B, 69) 0/1 matrix of masked slots for a batch."""
    b = len(is_normal_flags)
    flags = np.zeros((b, N_FEATURES), dtype=np.float32)
    for i, is_normal in enumerate(is_normal_flags):
        idx = sample_mask(rate, gen, is_normal)
        flags[i, idx] = 1.0
    return flags
