from .model import TabularEncoder, TabularEncoderConfig, masked_mse
from .masking import batch_mask_flags, curriculum_rate, sample_mask
from .pretrain import load_checkpoint, pretrain, save_checkpoint
from .probe import auc_score, encode_for_probe, kfold_auc, probe_eval, train_logistic
from .similarity import block_score, embedding_similarity
from .prompts import (
    ConstantPromptEncoder,
    FrozenMetPrompt,
    MlpPromptEncoder,
    clinical_slots,
    normal_prompt,
)
