# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
from .checkpoint import load_checkpoint, save_checkpoint
from .config import ModelConfig
from .model import ForwardTrace, TransformerLM, forward, init_model, log_softmax, loss_and_grad, param_names, sequence_logits, token_log_likelihoods
from .params import ASCENT, DESCENT, ModelParams, ParamSnapshot, checksum, restore, sgd_step, snapshot
from .train import TrainingLog, epoch_order, train

__all__ = ['load_checkpoint', 'save_checkpoint', 'ModelConfig', 'ForwardTrace', 'TransformerLM', 'forward', 'init_model', 'log_softmax', 'loss_and_grad', 'param_names', 'sequence_logits', 'token_log_likelihoods', 'ASCENT', 'DESCENT', 'ModelParams', 'ParamSnapshot', 'checksum', 'restore', 'sgd_step', 'snapshot', 'TrainingLog', 'epoch_order', 'train']
