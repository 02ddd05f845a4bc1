# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Gradient-drift features: score a sample, take one SGD ascent step on its
first-answer-subtoken loss, score it again, then restore the parameters.

The model is any object exposing `params`, `forward(tokens)` and
`loss_grad_trace(tokens, target)` (see gdrift.lm.TransformerLM).
"""
from __future__ import absolute_import, print_function, unicode_literals
import logging

import numpy as np

from ..exceptions import ContractError, InputError, IntegrityError
from ..lm import ASCENT, checksum, log_softmax, restore, sgd_step, snapshot

__all__ = ['DEFAULT_ETA', 'FEATURE_NAMES', 'DriftFeatures', 'ProbeDirection', 'extract_features', 'gdrift_features', 'make_probe']

log = logging.getLogger(__name__)

DEFAULT_ETA = 1e-2
FEATURE_NAMES = ('loss_before', 'logit_before', 'proj_before', 'loss_after', 'logit_after', 'proj_after', 'hidden_drift')


class ProbeDirection(object):
  __slots__ = ('v', 'seed')

  def __init__(self, v, seed=None):
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or abs(np.linalg.norm(v) - 1.0) > 1e-12:
      raise ContractError('probe direction must be a unit vector')
    self.v = v
    self.seed = seed

  def __repr__(self):
    return 'ProbeDirection(dim={0}, seed={1!r})'.format(self.dim, self.seed)

  @property
  def dim(self):
    return self.v.shape[0]


def make_probe(dim, seed):
  """A random unit vector in R^dim, fixed by `seed`."""
  v = np.random.RandomState(seed).normal(size=dim)
  return ProbeDirection(v / np.linalg.norm(v), seed)


class DriftFeatures(object):
  """The seven drift features, in the fixed order of FEATURE_NAMES."""
  __slots__ = FEATURE_NAMES

  def __init__(self, loss_before, logit_before, proj_before, loss_after, logit_after, proj_after, hidden_drift):
    self.loss_before = loss_before
    self.logit_before = logit_before
    self.proj_before = proj_before
    self.loss_after = loss_after
    self.logit_after = logit_after
    self.proj_after = proj_after
    self.hidden_drift = hidden_drift

  def __repr__(self):
    return 'DriftFeatures({0})'.format(', '.join('{0}={1:.6g}'.format(n, getattr(self, n)) for n in FEATURE_NAMES))

  def as_vector(self):
    return np.array([getattr(self, n) for n in FEATURE_NAMES], dtype=np.float64)

  @classmethod
  def from_vector(cls, values):
    values = [float(x) for x in values]
    if len(values) != len(FEATURE_NAMES):
      raise ContractError('expected {0} drift features, got {1}'.format(len(FEATURE_NAMES), len(values)))
    return cls(*values)

  @property
  def loss_delta(self):
    return self.loss_after - self.loss_before

  @property
  def logit_delta(self):
    return self.logit_after - self.logit_before

  @property
  def proj_delta(self):
    return self.proj_after - self.proj_before

  @property
  def abs_proj_delta(self):
    return abs(self.proj_delta)


def _cross_entropy(logits, target):
  return -float(log_softmax(logits)[target])


def gdrift_features(model, sample, probe, eta=DEFAULT_ETA, allow_zero=False):
  """
  Returns DriftFeatures for one sample. The parameters are snapshotted before
  the ascent step and restored bitwise afterwards, even if the step fails.
  `allow_zero` admits eta == 0, which skips the step so post equals pre.
  """
  if eta < 0 or (eta == 0 and not allow_zero):
    raise InputError('eta must be positive, got {0!r}'.format(eta))
  _, grads, before = model.loss_grad_trace(sample.prompt_tokens, sample.target)
  if probe.dim != before.hidden.shape[0]:
    raise ContractError('probe has dimension {0}, hidden state has {1}'.format(probe.dim, before.hidden.shape[0]))

  if eta == 0:
    after = before
  else:
    snap = snapshot(model.params)
    try:
      sgd_step(model.params, grads, eta, ASCENT)
      after = model.forward(sample.prompt_tokens)
    finally:
      restore(model.params, snap)

  target = sample.target
  return DriftFeatures(
      _cross_entropy(before.logits, target), float(before.logits[target]), float(np.dot(before.hidden, probe.v)),
      _cross_entropy(after.logits, target), float(after.logits[target]), float(np.dot(after.hidden, probe.v)),
      float(np.linalg.norm(after.hidden - before.hidden)))


def extract_features(model, samples, probe, eta=DEFAULT_ETA, progress_every=100):
  """
  Yields (sample, DriftFeatures) in input order. The global parameter checksum
  is compared before and after the whole pass.
  """
  start = checksum(model.params)
  n = 0
  for n, sample in enumerate(samples, 1):
    try:
      features = gdrift_features(model, sample, probe, eta)
    except IntegrityError as e:
      raise IntegrityError('parameter restore failed on sample {0}: {1}'.format(getattr(sample, 'sample_id', n - 1), e))
    yield sample, features
    if progress_every and n % progress_every == 0:
      log.info('extracted drift features for %d samples', n)
  if checksum(model.params) != start:
    raise IntegrityError('parameter checksum changed during extraction of {0} samples'.format(n))
