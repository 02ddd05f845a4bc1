# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
A small pre-norm decoder-only transformer built on the gdrift.ad tape.

The hidden state reported in a ForwardTrace is the final layer-norm output at
the last prompt position, i.e. the vector that the untied output projection
maps to logits.
"""
from __future__ import absolute_import, print_function, unicode_literals
import math

import numpy as np
from six.moves import xrange

from .. import ad
from ..exceptions import InputError
from .params import ModelParams

__all__ = ['ForwardTrace', 'TransformerLM', 'forward', 'init_model', 'log_softmax', 'loss_and_grad', 'param_names', 'sequence_logits', 'token_log_likelihoods']


class ForwardTrace(object):
  __slots__ = ('logits', 'hidden')

  def __init__(self, logits, hidden):
    self.logits = logits  # [V] at the last prompt position
    self.hidden = hidden  # [d] at the same position

  def __repr__(self):
    return 'ForwardTrace(V={0}, d={1})'.format(self.logits.shape[0], self.hidden.shape[0])


def param_names(config):
  names = ['tok_emb', 'pos_emb']
  for i in xrange(config.n_layers):
    p = 'layers.{0}.'.format(i)
    names.extend(p + n for n in (
        'ln1.gamma', 'ln1.beta',
        'attn.wq', 'attn.bq', 'attn.wk', 'attn.bk', 'attn.wv', 'attn.bv', 'attn.wo', 'attn.bo',
        'ln2.gamma', 'ln2.beta',
        'ffn.w1', 'ffn.b1', 'ffn.w2', 'ffn.b2'))
  names.extend(['ln_f.gamma', 'ln_f.beta', 'out.weight'])
  return names


def _shape(config, name):
  V, d, f = config.vocab_size, config.model_dim, config.ffn_dim
  leaf = name.rsplit('.', 1)[-1] if name.startswith('layers.') else name
  if name == 'tok_emb':
    return (V, d)
  if name == 'pos_emb':
    return (config.max_seq_len, d)
  if name == 'out.weight':
    return (d, V)
  if leaf in ('wq', 'wk', 'wv', 'wo'):
    return (d, d)
  if leaf == 'w1':
    return (d, f)
  if leaf == 'w2':
    return (f, d)
  if leaf == 'b1':
    return (f,)
  return (d,)


def init_model(config, seed):
  """
  Deterministic initialisation: scaled normal weights, zero biases and
  layer-norm shifts, unit layer-norm scales.
  """
  rng = np.random.RandomState(seed)
  resid_scale = 1.0 / math.sqrt(2.0 * config.n_layers)
  params = ModelParams(config=config)
  for name in param_names(config):
    shape = _shape(config, name)
    if name.endswith('.gamma'):
      value = np.ones(shape)
    elif len(shape) == 1:
      value = np.zeros(shape)
    elif name in ('tok_emb', 'pos_emb'):
      value = rng.normal(0.0, 1.0 / math.sqrt(config.model_dim), size=shape)
    else:
      value = rng.normal(0.0, 1.0 / math.sqrt(shape[0]), size=shape)
      if name.endswith('attn.wo') or name.endswith('ffn.w2'):
        value *= resid_scale
    params[name] = value
  return params


def _check_tokens(config, tokens):
  tokens = [int(t) for t in tokens]
  if not tokens:
    raise InputError('empty prompt')
  if len(tokens) > config.max_seq_len:
    raise InputError('prompt of {0} tokens exceeds max_seq_len {1}'.format(len(tokens), config.max_seq_len))
  for t in tokens:
    if not 0 <= t < config.vocab_size:
      raise InputError('token id {0} outside vocabulary of size {1}'.format(t, config.vocab_size))
  return tokens


def _body(graph, params, tokens):
  """Registers every parameter on `graph` and returns the final normed hidden states [T, d]."""
  config = params.config
  p = dict((name, graph.parameter(name, value)) for name, value in params.items())
  T = len(tokens)
  dh = config.head_dim
  inv_sqrt = 1.0 / math.sqrt(dh)

  x = ad.add(ad.embedding(p['tok_emb'], tokens), ad.rows(p['pos_emb'], 0, T))
  for i in xrange(config.n_layers):
    l = 'layers.{0}.'.format(i)
    a = ad.layer_norm(x, p[l + 'ln1.gamma'], p[l + 'ln1.beta'])
    q = ad.add(ad.matmul(a, p[l + 'attn.wq']), p[l + 'attn.bq'])
    k = ad.add(ad.matmul(a, p[l + 'attn.wk']), p[l + 'attn.bk'])
    v = ad.add(ad.matmul(a, p[l + 'attn.wv']), p[l + 'attn.bv'])
    heads = []
    for h in xrange(config.n_heads):
      lo, hi = h * dh, (h + 1) * dh
      scores = ad.scale(ad.matmul(ad.cols(q, lo, hi), ad.transpose(ad.cols(k, lo, hi))), inv_sqrt)
      heads.append(ad.matmul(ad.softmax(scores, causal=True), ad.cols(v, lo, hi)))
    attn = heads[0] if len(heads) == 1 else ad.concat_cols(heads)
    x = ad.add(x, ad.add(ad.matmul(attn, p[l + 'attn.wo']), p[l + 'attn.bo']))

    m = ad.layer_norm(x, p[l + 'ln2.gamma'], p[l + 'ln2.beta'])
    f = ad.gelu(ad.add(ad.matmul(m, p[l + 'ffn.w1']), p[l + 'ffn.b1']))
    x = ad.add(x, ad.add(ad.matmul(f, p[l + 'ffn.w2']), p[l + 'ffn.b2']))
  return ad.layer_norm(x, p['ln_f.gamma'], p['ln_f.beta']), p


def _last(graph, params, tokens):
  hf, p = _body(graph, params, tokens)
  hidden = ad.row(hf, len(tokens) - 1)
  return ad.matmul(hidden, p['out.weight']), hidden


def forward(params, prompt_tokens):
  """Causal decoder pass; logits and hidden state at the last prompt position. Never mutates params."""
  tokens = _check_tokens(params.config, prompt_tokens)
  logits, hidden = _last(ad.Graph(), params, tokens)
  return ForwardTrace(logits.data.copy(), hidden.data.copy())


def _loss_grad_trace(params, prompt_tokens, target):
  tokens = _check_tokens(params.config, prompt_tokens)
  graph = ad.Graph()
  logits, hidden = _last(graph, params, tokens)
  loss = ad.cross_entropy(logits, target)
  grads = ad.backward(loss)
  return loss.item(), grads, ForwardTrace(logits.data.copy(), hidden.data.copy())


def loss_and_grad(params, sample):
  """Cross-entropy of the sample's first answer subtoken given its prompt, and its parameter gradients."""
  loss, grads, _ = _loss_grad_trace(params, sample.prompt_tokens, sample.target)
  return loss, grads


def sequence_logits(params, tokens):
  """Next-token logits at every position, [T, V]."""
  tokens = _check_tokens(params.config, tokens)
  graph = ad.Graph()
  hf, p = _body(graph, params, tokens)
  return ad.matmul(hf, p['out.weight']).data.copy()


def log_softmax(logits):
  z = logits - logits.max(axis=-1, keepdims=True)
  return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


def token_log_likelihoods(model, tokens):
  """log p(tokens[t + 1] | tokens[:t + 1]) for t = 0 .. T-2."""
  tokens = list(tokens)
  if len(tokens) < 2:
    raise InputError('need at least two tokens to score a sequence, got {0}'.format(len(tokens)))
  logp = log_softmax(model.sequence_logits(tokens)[:-1])
  return logp[np.arange(len(tokens) - 1), tokens[1:]]


class TransformerLM(object):
  """
  The model interface the attacks consume: the mutable ModelParams plus
  forward, gradient and whole-sequence scoring entry points.
  """
  __slots__ = ('params',)

  def __init__(self, params):
    self.params = params

  def __repr__(self):
    return 'TransformerLM({0!r})'.format(self.params.config)

  @property
  def config(self):
    return self.params.config

  def forward(self, tokens):
    return forward(self.params, tokens)

  def loss_grad_trace(self, tokens, target):
    return _loss_grad_trace(self.params, tokens, target)

  def sequence_logits(self, tokens):
    return sequence_logits(self.params, tokens)
