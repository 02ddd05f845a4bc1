# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
import collections

from ..exceptions import InputError

__all__ = ['ModelConfig']


class ModelConfig(object):
  __slots__ = ('vocab_size', 'model_dim', 'n_layers', 'n_heads', 'ffn_dim', 'max_seq_len', 'rng_seed')

  FIELDS = ('vocab_size', 'model_dim', 'n_layers', 'n_heads', 'ffn_dim', 'max_seq_len', 'rng_seed')

  def __init__(self, vocab_size, model_dim=64, n_layers=2, n_heads=4, ffn_dim=128, max_seq_len=32, rng_seed=0):
    self.vocab_size = int(vocab_size)
    self.model_dim = int(model_dim)
    self.n_layers = int(n_layers)
    self.n_heads = int(n_heads)
    self.ffn_dim = int(ffn_dim)
    self.max_seq_len = int(max_seq_len)
    self.rng_seed = int(rng_seed)
    self.validate()

  def __repr__(self):
    return 'ModelConfig({0})'.format(', '.join('{0}={1}'.format(k, getattr(self, k)) for k in self.FIELDS))

  def __eq__(self, other):
    return isinstance(other, ModelConfig) and self.to_dict() == other.to_dict()

  def __ne__(self, other):
    return not self == other

  def __hash__(self):
    return hash(tuple(self.to_dict().items()))

  def validate(self):
    for name in self.FIELDS:
      if name != 'rng_seed' and getattr(self, name) <= 0:
        raise InputError('ModelConfig.{0} must be positive, got {1}'.format(name, getattr(self, name)))
    if self.vocab_size < 2:
      raise InputError('ModelConfig.vocab_size must be at least 2, got {0}'.format(self.vocab_size))
    if self.model_dim % self.n_heads != 0:
      raise InputError('model_dim ({0}) is not divisible by n_heads ({1})'.format(self.model_dim, self.n_heads))

  @property
  def head_dim(self):
    return self.model_dim // self.n_heads

  def to_dict(self):
    return collections.OrderedDict((k, getattr(self, k)) for k in self.FIELDS)

  @classmethod
  def from_dict(cls, values):
    unknown = set(values) - set(cls.FIELDS)
    if unknown:
      raise InputError('unknown ModelConfig fields: {0}'.format(sorted(unknown)))
    return cls(**values)
