from .tensor import Tensor, Tape, ShapeError, backward, no_grad
from . import ops
from .layers import Module, Linear, LayerNorm, Conv2d, CrossAttention, glorot_uniform
from .adam import Adam, AdamState, adam_step
from . import checkpoint
