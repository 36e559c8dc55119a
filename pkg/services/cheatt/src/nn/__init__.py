"""
NN Module - Tabular Transformer encoder, losses, optimizer, gradient audit
"""
from .config import ATTENTION_KINDS, TASKS, ModelConfig
from .encoder import EncoderActivations, TabularModel, embed_columns, encoder_forward, init_params
from .gradcheck import GradientAudit, ParameterAudit, audit_objective, gradient_audit
from .losses import DEFAULT_LAMBDA_CE, loss_masked_pretrain, loss_supervised, sample_mask
from .optim import AdamState, adam_step

__all__ = [
    'ATTENTION_KINDS',
    'AdamState',
    'DEFAULT_LAMBDA_CE',
    'EncoderActivations',
    'GradientAudit',
    'ModelConfig',
    'ParameterAudit',
    'TASKS',
    'TabularModel',
    'adam_step',
    'audit_objective',
    'embed_columns',
    'encoder_forward',
    'gradient_audit',
    'init_params',
    'loss_masked_pretrain',
    'loss_supervised',
    'sample_mask'
]
