"""Masked-reconstruction pretraining of the tabular encoder."""

import math

import numpy as np

from .. import rng
from ..nn import Adam, Tape, backward
from ..nn import checkpoint as ckpt
from .masking import batch_mask_flags, curriculum_rate
from .model import TabularEncoder, TabularEncoderConfig, masked_mse


def pretrain(vectors, is_normal, config, log_every=0):
    """Train on normalized (n, 69) vectors; returns (model, loss history).

    Raises on an empty dataset, on a dataset with no mass samples (nothing
    would ever be masked), and on a non-finite loss.
    """
    vectors = np.asarray(vectors, dtype=np.float32)
    is_normal = np.asarray(is_normal, dtype=bool)
    n = vectors.shape[0]
    if n == 0:
        raise ValueError("empty pretraining dataset")
    if is_normal.all():
        raise ValueError("pretraining needs at least one mass sample")

    model = TabularEncoder(config)
    opt = Adam(model.parameters(), lr=config.learning_rate)
    order_gen = rng.stream(config.seed, "met-batches")
    mask_gen = rng.stream(config.seed, "met-masks")

    history = []
    step = 0
    for epoch in range(config.epochs):
        rate = curriculum_rate(
            epoch,
            config.epochs,
            config.mask_rate_start,
            config.mask_rate_final,
            config.curriculum_fraction,
        )
        order = order_gen.permutation(n)
        for lo in range(0, n, config.batch_size):
            idx = order[lo : lo + config.batch_size]
            vb = vectors[idx]
            flags = batch_mask_flags(rate, mask_gen, is_normal[idx])
            if flags.sum() == 0:
                continue  # all-normal batch contributes no reconstruction loss
            with Tape() as tape:
                _, pred = model.reconstruct(vb, flags)
                loss = masked_mse(pred, vb, flags)
            value = float(loss.data)
            if not math.isfinite(value):
                raise FloatingPointError(
                    f"non-finite loss {value} at epoch {epoch} step {step} "
                    f"(rate {rate:.2f}, batch {idx[:4].tolist()}...)"
                )
            backward(loss, tape)
            opt.step()
            opt.zero_grad()
            history.append({"epoch": epoch, "step": step, "rate": rate, "loss": value})
            if log_every and step % log_every == 0:
                print(f"epoch {epoch:3d} step {step:5d} rate {rate:.2f} loss {value:.5f}")
            step += 1
    return model, history


def save_checkpoint(path, model, history=None, meta=None):
    header_meta = {"frozen": True, "final_loss": history[-1]["loss"] if history else None}
    if meta:
        header_meta.update(meta)
    ckpt.save(
        path,
        {"kind": "tabular-encoder", "config": model.config.to_dict()},
        model.state_arrays(),
        meta=header_meta,
    )
    return path


def load_checkpoint(path):
    header, tensors = ckpt.load(path)
    if header["architecture"].get("kind") != "tabular-encoder":
        raise ValueError(f"{path} is not a tabular encoder checkpoint")
    config = TabularEncoderConfig(**header["architecture"]["config"])
    model = TabularEncoder(config)
    model.load_state(tensors)
    model.requires_grad_(False)
    return model, header
