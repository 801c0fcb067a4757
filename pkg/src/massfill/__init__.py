"""massfill: phantom mammogram synthesis with radiomics-conditioned inpainting.

Subpackages:
    nn         dense-tensor autodiff core (Tensor/Tape/Adam/checkpoints)
    phantom    procedural paired-breast phantom generator
    radiomics  67-feature deterministic extraction and normalization
    met        masked tabular encoder and prompt encoders
    diffusion  pixel-space denoising-diffusion inpainting generator
    evalx      quality metrics, consistency analysis, augmentation study
"""

__version__ = "0.1.0"

from .backend import kernel_backend
