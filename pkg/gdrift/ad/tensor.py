# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
A dynamic tape for reverse-mode differentiation. Every primitive appends a Node
to its Graph as it runs, so the node list is already in topological order and
backward is a single reverse sweep over it.
"""
from __future__ import absolute_import, print_function, unicode_literals
import collections

import numpy as np
from six.moves import xrange

from ..exceptions import ContractError, NumericalError

__all__ = ['GradientSet', 'Graph', 'Node', 'Tensor', 'backward']


class Tensor(object):
  __slots__ = ('graph', 'node_id', 'data', 'requires_grad')

  def __init__(self, graph, node_id, data, requires_grad):
    self.graph = graph
    self.node_id = node_id
    self.data = data
    self.requires_grad = requires_grad

  def __repr__(self):
    return 'Tensor(node_id={0}, shape={1})'.format(self.node_id, self.shape)

  @property
  def shape(self):
    return list(self.data.shape)

  @property
  def ndim(self):
    return self.data.ndim

  def item(self):
    return float(self.data)


class Node(object):
  __slots__ = ('kind', 'inputs', 'output', 'backward_fn', 'name')

  def __init__(self, kind, inputs, backward_fn=None, name=None):
    self.kind = kind
    self.inputs = inputs
    self.output = None
    self.backward_fn = backward_fn  # g -> tuple of input gradients (None for no gradient)
    self.name = name

  def __repr__(self):
    return 'Node(kind={0!r}, inputs={1})'.format(self.kind, [t.node_id for t in self.inputs])


class Graph(object):
  """
  Records primitives as they execute. A Graph is built by one thread and is
  discarded after backward; parameters are registered as named leaves.
  """
  __slots__ = ('nodes', 'params')

  def __init__(self):
    self.nodes = []
    self.params = collections.OrderedDict()  # { name : Tensor }

  def __len__(self):
    return len(self.nodes)

  def _append(self, node, data, requires_grad):
    tensor = Tensor(self, len(self.nodes), data, requires_grad)
    node.output = tensor
    self.nodes.append(node)
    return tensor

  def parameter(self, name, value):
    if name in self.params:
      raise ContractError('parameter {0!r} registered twice on the same graph'.format(name))
    data = np.asarray(value, dtype=np.float64)
    tensor = self._append(Node('parameter', (), name=name), data, True)
    self.params[name] = tensor
    return tensor

  def constant(self, value):
    data = np.asarray(value, dtype=np.float64)
    return self._append(Node('constant', ()), data, False)

  def record(self, kind, inputs, data, backward_fn):
    if not np.all(np.isfinite(data)):
      raise NumericalError(kind)
    requires_grad = any(t.requires_grad for t in inputs)
    node = Node(kind, tuple(inputs), backward_fn if requires_grad else None)
    return self._append(node, data, requires_grad)


class GradientSet(collections.OrderedDict):
  """Parameter name to gradient array, one entry per parameter of the producing model."""

  def check_against(self, params):
    """Raises ContractError unless names and shapes match `params` (a name to array mapping) pairwise."""
    if set(self.keys()) != set(params.keys()):
      missing = sorted(set(params.keys()) - set(self.keys()))
      extra = sorted(set(self.keys()) - set(params.keys()))
      raise ContractError('gradient names do not match parameters (missing={0}, extra={1})'.format(missing, extra))
    for name, grad in self.items():
      if grad.shape != params[name].shape:
        raise ContractError('gradient {0!r} has shape {1} but parameter has shape {2}'.format(name, list(grad.shape), list(params[name].shape)))


def backward(loss):
  """
  Back-propagates from a scalar loss through its graph. Returns a GradientSet
  holding a gradient for every parameter registered on the graph; parameters
  the loss does not depend on get zeros.
  """
  if not isinstance(loss, Tensor):
    raise ContractError('backward needs a Tensor, got {0!r}'.format(type(loss)))
  if loss.data.shape != ():
    raise ContractError('backward needs a scalar loss, got shape {0}'.format(loss.shape))
  graph = loss.graph

  pending = {loss.node_id: np.ones((), dtype=np.float64)}
  for node_id in xrange(loss.node_id, -1, -1):
    g = pending.get(node_id)
    node = graph.nodes[node_id]
    if g is None or node.backward_fn is None:
      continue
    del pending[node_id]
    for tensor, grad in zip(node.inputs, node.backward_fn(g)):
      if grad is None or not tensor.requires_grad:
        continue
      prev = pending.get(tensor.node_id)
      pending[tensor.node_id] = grad if prev is None else prev + grad

  grads = GradientSet()
  for name, tensor in graph.params.items():
    g = pending.get(tensor.node_id)
    if g is None:
      grads[name] = np.zeros_like(tensor.data)
    else:
      grads[name] = np.array(g, dtype=np.float64).reshape(tensor.data.shape)
  return grads
