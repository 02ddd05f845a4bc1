# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Differentiable primitives over double-precision numpy arrays. The only
broadcast allowed is a bias add of a [d] vector over the rows of a [n, d]
matrix; every other shape disagreement raises ShapeError.
"""
from __future__ import absolute_import, print_function, unicode_literals
import math

import numpy as np

from ..exceptions import ContractError, ShapeError
from .tensor import Tensor

__all__ = ['add', 'concat_cols', 'cols', 'cross_entropy', 'embedding', 'gelu', 'layer_norm', 'matmul', 'mul', 'reshape', 'row', 'rows', 'scale', 'softmax', 'sum_all', 'transpose']

LAYER_NORM_EPS = 1e-5
_GELU_C = math.sqrt(2.0 / math.pi)
_GELU_K = 0.044715


def _graph(kind, *tensors):
  for t in tensors:
    if not isinstance(t, Tensor):
      raise ContractError('{0}: expected Tensor inputs, got {1!r}'.format(kind, type(t)))
  graph = tensors[0].graph
  for t in tensors[1:]:
    if t.graph is not graph:
      raise ContractError('{0}: inputs belong to different graphs'.format(kind))
  return graph


def matmul(a, b):
  """[m, k] x [k, n] -> [m, n], or [k] x [k, n] -> [n]."""
  graph = _graph('matmul', a, b)
  if b.ndim != 2 or a.ndim not in (1, 2) or a.data.shape[-1] != b.data.shape[0]:
    raise ShapeError('matmul', a.shape, b.shape)
  A, B = a.data, b.data

  def backward_fn(g):
    ga = g.dot(B.T)
    gb = np.outer(A, g) if A.ndim == 1 else A.T.dot(g)
    return ga, gb
  return graph.record('matmul', (a, b), A.dot(B), backward_fn)


def add(a, b):
  graph = _graph('add', a, b)
  if a.data.shape == b.data.shape:
    def backward_fn(g):
      return g, g
  elif a.ndim == 2 and b.ndim == 1 and a.data.shape[1] == b.data.shape[0]:
    def backward_fn(g):
      return g, g.sum(axis=0)
  else:
    raise ShapeError('add', a.shape, b.shape)
  return graph.record('add', (a, b), a.data + b.data, backward_fn)


def mul(a, b):
  """Elementwise product of equally shaped tensors."""
  graph = _graph('mul', a, b)
  if a.data.shape != b.data.shape:
    raise ShapeError('mul', a.shape, b.shape)
  A, B = a.data, b.data

  def backward_fn(g):
    return g * B, g * A
  return graph.record('mul', (a, b), A * B, backward_fn)


def scale(a, factor):
  graph = _graph('scale', a)
  factor = float(factor)

  def backward_fn(g):
    return (g * factor,)
  return graph.record('scale', (a,), a.data * factor, backward_fn)


def sum_all(a):
  graph = _graph('sum_all', a)
  shape = a.data.shape

  def backward_fn(g):
    return (np.full(shape, float(g)),)
  return graph.record('sum_all', (a,), np.asarray(a.data.sum()), backward_fn)


def embedding(table, ids):
  """Gathers rows of a [V, d] table for a sequence of integer ids."""
  graph = _graph('embedding', table)
  if table.ndim != 2:
    raise ShapeError('embedding', table.shape)
  ids = np.asarray(ids, dtype=np.int64)
  if ids.ndim != 1 or ids.size == 0:
    raise ShapeError('embedding', table.shape, ids.shape)
  V = table.data.shape[0]
  if ids.min() < 0 or ids.max() >= V:
    raise IndexError('embedding: id out of range for a table of {0} rows'.format(V))
  shape = table.data.shape

  def backward_fn(g):
    gt = np.zeros(shape)
    np.add.at(gt, ids, g)
    return (gt,)
  return graph.record('embedding', (table,), table.data[ids], backward_fn)


def rows(a, start, stop):
  graph = _graph('rows', a)
  if a.ndim != 2 or not 0 <= start < stop <= a.data.shape[0]:
    raise ShapeError('rows', a.shape, (start, stop))
  shape = a.data.shape

  def backward_fn(g):
    ga = np.zeros(shape)
    ga[start:stop] = g
    return (ga,)
  return graph.record('rows', (a,), a.data[start:stop].copy(), backward_fn)


def row(a, i):
  """Row i of a matrix as a vector."""
  graph = _graph('row', a)
  if a.ndim != 2 or not 0 <= i < a.data.shape[0]:
    raise ShapeError('row', a.shape, (i,))
  shape = a.data.shape

  def backward_fn(g):
    ga = np.zeros(shape)
    ga[i] = g
    return (ga,)
  return graph.record('row', (a,), a.data[i].copy(), backward_fn)


def cols(a, start, stop):
  graph = _graph('cols', a)
  if a.ndim != 2 or not 0 <= start < stop <= a.data.shape[1]:
    raise ShapeError('cols', a.shape, (start, stop))
  shape = a.data.shape

  def backward_fn(g):
    ga = np.zeros(shape)
    ga[:, start:stop] = g
    return (ga,)
  return graph.record('cols', (a,), a.data[:, start:stop].copy(), backward_fn)


def concat_cols(tensors):
  tensors = list(tensors)
  graph = _graph('concat_cols', *tensors)
  if any(t.ndim != 2 for t in tensors) or len(set(t.data.shape[0] for t in tensors)) != 1:
    raise ShapeError('concat_cols', *[t.shape for t in tensors])
  bounds = np.cumsum([0] + [t.data.shape[1] for t in tensors])

  def backward_fn(g):
    return tuple(g[:, bounds[i]:bounds[i + 1]] for i in range(len(tensors)))
  return graph.record('concat_cols', tensors, np.concatenate([t.data for t in tensors], axis=1), backward_fn)


def transpose(a):
  graph = _graph('transpose', a)
  if a.ndim != 2:
    raise ShapeError('transpose', a.shape)

  def backward_fn(g):
    return (g.T,)
  return graph.record('transpose', (a,), a.data.T.copy(), backward_fn)


def reshape(a, shape):
  graph = _graph('reshape', a)
  shape = tuple(int(s) for s in shape)
  if int(np.prod(shape)) != a.data.size or any(s <= 0 for s in shape):
    raise ShapeError('reshape', a.shape, shape)
  orig = a.data.shape

  def backward_fn(g):
    return (g.reshape(orig),)
  return graph.record('reshape', (a,), a.data.reshape(shape).copy(), backward_fn)


def layer_norm(x, gamma, beta, eps=LAYER_NORM_EPS):
  """Normalises over the last axis of a [d] or [n, d] tensor, then applies gamma * xhat + beta."""
  graph = _graph('layer_norm', x, gamma, beta)
  d = x.data.shape[-1]
  if x.ndim not in (1, 2) or gamma.data.shape != (d,) or beta.data.shape != (d,):
    raise ShapeError('layer_norm', x.shape, gamma.shape, beta.shape)
  X, G = x.data, gamma.data
  mu = X.mean(axis=-1, keepdims=True)
  xc = X - mu
  inv = 1.0 / np.sqrt((xc * xc).mean(axis=-1, keepdims=True) + eps)
  xhat = xc * inv

  def backward_fn(g):
    gxhat = g * G
    gx = inv * (gxhat - gxhat.mean(axis=-1, keepdims=True) - xhat * (gxhat * xhat).mean(axis=-1, keepdims=True))
    if X.ndim == 1:
      return gx, g * xhat, g
    return gx, (g * xhat).sum(axis=0), g.sum(axis=0)
  return graph.record('layer_norm', (x, gamma, beta), xhat * G + beta.data, backward_fn)


def softmax(x, causal=False):
  """
  Softmax over the last axis. With causal=True the input must be a square
  [n, n] score matrix and entry (i, j) for j > i gets probability zero.
  """
  graph = _graph('softmax', x)
  if x.ndim not in (1, 2) or (causal and (x.ndim != 2 or x.data.shape[0] != x.data.shape[1])):
    raise ShapeError('softmax', x.shape)
  z = x.data
  if causal:
    n = z.shape[0]
    z = np.where(np.triu(np.ones((n, n), dtype=bool), k=1), -np.inf, z)
  e = np.exp(z - z.max(axis=-1, keepdims=True))
  y = e / e.sum(axis=-1, keepdims=True)

  def backward_fn(g):
    return (y * (g - (g * y).sum(axis=-1, keepdims=True)),)
  return graph.record('softmax', (x,), y, backward_fn)


def gelu(x):
  """GELU, tanh approximation."""
  graph = _graph('gelu', x)
  X = x.data
  t = np.tanh(_GELU_C * (X + _GELU_K * X ** 3))

  def backward_fn(g):
    dt = (1.0 - t * t) * _GELU_C * (1.0 + 3.0 * _GELU_K * X * X)
    return (g * (0.5 * (1.0 + t) + 0.5 * X * dt),)
  return graph.record('gelu', (x,), 0.5 * X * (1.0 + t), backward_fn)


def cross_entropy(logits, target):
  """-log softmax(logits)[target] for a [V] logit vector; gradient is softmax(logits) - onehot(target)."""
  graph = _graph('cross_entropy', logits)
  if logits.ndim != 1:
    raise ShapeError('cross_entropy', logits.shape)
  z = logits.data
  V = z.shape[0]
  target = int(target)
  if not 0 <= target < V:
    raise IndexError('cross_entropy: target {0} out of range for {1} classes'.format(target, V))
  m = z.max()
  e = np.exp(z - m)
  total = e.sum()
  loss = (m - z[target]) + np.log(total)

  def backward_fn(g):
    p = e / total
    p[target] -= 1.0
    return (g * p,)
  return graph.record('cross_entropy', (logits,), np.asarray(loss), backward_fn)
