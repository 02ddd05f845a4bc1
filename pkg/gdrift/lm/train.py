# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
import logging

import numpy as np
from six.moves import xrange

from ..exceptions import InputError, NumericalError, TrainingError
from .model import loss_and_grad
from .params import DESCENT, sgd_step

__all__ = ['TrainingLog', 'epoch_order', 'train']

log = logging.getLogger(__name__)


class TrainingLog(object):
  __slots__ = ('epoch_losses', 'start_epoch', 'n_samples', 'n_nonmembers', 'lr', 'seed')

  def __init__(self, start_epoch, n_samples, lr, seed):
    self.epoch_losses = []
    self.start_epoch = start_epoch
    self.n_samples = n_samples
    self.n_nonmembers = 0
    self.lr = lr
    self.seed = seed

  def __repr__(self):
    return 'TrainingLog(epochs={0}, final={1!r})'.format(len(self.epoch_losses), self.final_loss)

  @property
  def final_loss(self):
    return self.epoch_losses[-1] if self.epoch_losses else None

  @property
  def epochs_completed(self):
    return self.start_epoch + len(self.epoch_losses)


def epoch_order(seed, epoch, n):
  """The shuffle for one epoch depends only on (seed, epoch), so resumed runs replay it exactly."""
  return np.random.RandomState([seed, epoch]).permutation(n)


def _diverged(result, epoch, loss):
  err = TrainingError(epoch, loss)
  err.training_log = result  # epochs completed before divergence
  return err


def train(params, member_samples, epochs, lr, seed, start_epoch=0):
  """
  Per-sample SGD descent on the first-answer-subtoken loss, shuffling the
  member samples every epoch. Returns a TrainingLog of per-epoch mean losses.
  """
  samples = list(member_samples)
  if not samples:
    raise InputError('cannot train on an empty member set')
  if epochs < 1:
    raise InputError('epochs must be at least 1, got {0}'.format(epochs))
  if lr <= 0:
    raise InputError('learning rate must be positive, got {0!r}'.format(lr))
  nonmembers = [s for s in samples if not getattr(s, 'is_member', True)]
  if nonmembers:
    raise InputError('{0} non-member samples passed to train'.format(len(nonmembers)))

  result = TrainingLog(start_epoch, len(samples), lr, seed)
  for epoch in xrange(start_epoch, start_epoch + epochs):
    total = 0.0
    try:
      for i in epoch_order(seed, epoch, len(samples)):
        loss, grads = loss_and_grad(params, samples[i])
        total += loss
        sgd_step(params, grads, lr, DESCENT)
    except NumericalError:
      raise _diverged(result, epoch, float('nan'))
    mean = total / len(samples)
    if not np.isfinite(mean):
      raise _diverged(result, epoch, mean)
    result.epoch_losses.append(mean)
    log.info('epoch %d: mean member loss %.6f', epoch + 1, mean)
  return result
