# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Named parameter tensors with bit-exact snapshot/restore and in-place SGD.
"""
from __future__ import absolute_import, print_function, unicode_literals
import collections
import hashlib

import numpy as np
import six

from ..ad import GradientSet
from ..exceptions import ContractError, IntegrityError

__all__ = ['ASCENT', 'DESCENT', 'ModelParams', 'ParamSnapshot', 'checksum', 'restore', 'sgd_step', 'snapshot']

ASCENT = 'ascent'
DESCENT = 'descent'


class ModelParams(collections.OrderedDict):
  """
  Parameter name to float64 array. The name set is fixed by the ModelConfig
  that produced it; `config` may be None for hand-built parameter sets.
  """

  def __init__(self, *args, **kwargs):
    config = kwargs.pop('config', None)
    super(ModelParams, self).__init__(*args, **kwargs)
    self.config = config

  def __repr__(self):
    return 'ModelParams(n={0}, config={1!r})'.format(len(self), self.config)

  def copy(self):
    return ModelParams(((k, v.copy()) for k, v in six.iteritems(self)), config=self.config)

  def n_elements(self):
    return sum(v.size for v in self.values())


def checksum(params):
  """SHA-256 over names, shapes and little-endian float64 bytes, in name order."""
  h = hashlib.sha256()
  for name, value in six.iteritems(params):
    h.update(name.encode('utf-8'))
    h.update(repr(tuple(value.shape)).encode('utf-8'))
    h.update(np.ascontiguousarray(value, dtype='<f8').tobytes())
  return h.hexdigest()


class ParamSnapshot(object):
  __slots__ = ('tensors', 'checksum', 'config')

  def __init__(self, tensors, checksum, config):
    self.tensors = tensors
    self.checksum = checksum
    self.config = config

  def __repr__(self):
    return 'ParamSnapshot(n={0}, checksum={1})'.format(len(self.tensors), self.checksum[:12])


def snapshot(params):
  tensors = collections.OrderedDict((name, np.array(value, dtype=np.float64, copy=True)) for name, value in six.iteritems(params))
  return ParamSnapshot(tensors, checksum(params), getattr(params, 'config', None))


def restore(params, snap):
  """Copies every snapshotted tensor back into `params` in place, then verifies the checksum."""
  config = getattr(params, 'config', None)
  if config is not None and snap.config is not None and config != snap.config:
    raise IntegrityError('snapshot was taken from a model with a different config')
  if list(params.keys()) != list(snap.tensors.keys()):
    raise IntegrityError('snapshot parameter names do not match the model')
  for name, value in six.iteritems(snap.tensors):
    if params[name].shape != value.shape:
      raise IntegrityError('snapshot tensor {0!r} has shape {1}, model has {2}'.format(name, list(value.shape), list(params[name].shape)))
  for name, value in six.iteritems(snap.tensors):
    np.copyto(params[name], value)
  if checksum(params) != snap.checksum:
    raise IntegrityError('restored parameters do not match the snapshot checksum')


def sgd_step(params, grads, lr, direction):
  """In place: theta <- theta + lr * grad for ascent, theta - lr * grad for descent."""
  if direction not in (ASCENT, DESCENT):
    raise ContractError('unknown SGD direction {0!r}'.format(direction))
  if lr < 0:
    raise ContractError('learning rate must be non-negative, got {0!r}'.format(lr))
  if not isinstance(grads, GradientSet):
    grads = GradientSet(grads)
  grads.check_against(params)
  if lr == 0:
    return
  for name, value in six.iteritems(params):
    if direction == ASCENT:
      value += lr * grads[name]
    else:
      value -= lr * grads[name]
