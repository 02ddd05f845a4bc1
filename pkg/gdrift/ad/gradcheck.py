# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Central finite-difference checks for the reverse-mode engine.
"""
from __future__ import absolute_import, print_function, unicode_literals
import collections

import numpy as np
import six
from six.moves import xrange

from ..exceptions import ContractError
from .tensor import Graph, backward

__all__ = ['check_gradients', 'max_relative_error', 'numerical_gradients']

DEFAULT_FLOOR = 1e-3


def _evaluate(build_loss, values):
  graph = Graph()
  tensors = collections.OrderedDict((name, graph.parameter(name, value)) for name, value in six.iteritems(values))
  return build_loss(graph, tensors)


def numerical_gradients(build_loss, values, eps=1e-5):
  """
  Central differences of build_loss(graph, tensors) with respect to every
  element of every named array in `values`.
  """
  grads = collections.OrderedDict()
  for name, value in six.iteritems(values):
    work = collections.OrderedDict((k, np.array(v, dtype=np.float64)) for k, v in six.iteritems(values))
    flat = work[name].reshape(-1)
    grad = np.zeros(flat.shape)
    for i in xrange(flat.size):
      orig = flat[i]
      flat[i] = orig + eps
      plus = _evaluate(build_loss, work).item()
      flat[i] = orig - eps
      minus = _evaluate(build_loss, work).item()
      flat[i] = orig
      grad[i] = (plus - minus) / (2.0 * eps)
    grads[name] = grad.reshape(np.shape(value))
  return grads


def max_relative_error(analytic, numeric, floor=DEFAULT_FLOOR):
  """
  Largest |a - n| / max(|a|, |n|, floor) over every element of every named
  gradient. Near-zero elements are measured against the floor.
  """
  worst = 0.0
  for name in analytic:
    a = np.asarray(analytic[name], dtype=np.float64)
    n = np.asarray(numeric[name], dtype=np.float64)
    if a.shape != n.shape:
      raise ContractError('gradient {0!r} has shape {1} but its numerical estimate has shape {2}'.format(name, list(a.shape), list(n.shape)))
    if a.size == 0:
      continue
    denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
    worst = max(worst, float((np.abs(a - n) / denom).max()))
  return worst


def check_gradients(build_loss, values, eps=1e-5, floor=DEFAULT_FLOOR):
  """Returns (max relative error, analytic GradientSet, numerical gradients)."""
  analytic = backward(_evaluate(build_loss, values))
  numeric = numerical_gradients(build_loss, values, eps=eps)
  return max_relative_error(analytic, numeric, floor), analytic, numeric
