# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals

import numpy as np

from ..exceptions import ContractError, InputError

__all__ = ['MinMaxScaler', 'normalize_minmax']


class MinMaxScaler(object):
  """
  Per-column affine map to [0, 1] fitted on one matrix (the train split).
  Columns constant at fit time map to 0. Values outside the fitted range
  map outside [0, 1]; nothing is clipped.
  """
  __slots__ = ('mins', 'maxs')

  def __init__(self, mins, maxs):
    self.mins = np.asarray(mins, dtype=np.float64)
    self.maxs = np.asarray(maxs, dtype=np.float64)

  def __repr__(self):
    return 'MinMaxScaler(n_features={0})'.format(self.mins.shape[0])

  @classmethod
  def fit(cls, matrix):
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] < 2:
      raise InputError('min-max statistics need a matrix of at least two rows')
    return cls(matrix.min(axis=0), matrix.max(axis=0))

  def transform(self, matrix):
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape[-1] != self.mins.shape[0]:
      raise ContractError('scaler fitted on {0} features, got {1}'.format(self.mins.shape[0], matrix.shape[-1]))
    span = self.maxs - self.mins
    constant = span <= 0
    out = (matrix - self.mins) / np.where(constant, 1.0, span)
    return np.where(constant, 0.0, out)


def normalize_minmax(train, *others):
  """Fits on `train` and applies the same map to it and every other matrix. Returns (scaled..., scaler)."""
  scaler = MinMaxScaler.fit(train)
  return tuple(scaler.transform(m) for m in (train,) + others) + (scaler,)
