# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Likelihood-based membership scores. Every score is oriented so that higher
means more member-like. They read the model through `sequence_logits(tokens)`
and never change its parameters.
"""
from __future__ import absolute_import, print_function, unicode_literals
import math
import zlib

import numpy as np
from six.moves import xrange

from ..exceptions import InputError, NumericalError
from ..lm import log_softmax, token_log_likelihoods

__all__ = ['GDRIFT', 'NEIGHBOUR', 'NLL_CAP', 'PERPLEXITY', 'ZLIB', 'AttackScore', 'answer_perplexity', 'compressed_bits', 'min_k_name', 'min_k_score', 'neighbour_score', 'neighbour_score_from', 'neighbour_tokens', 'perplexity', 'perplexity_score', 'sequence_nll', 'zlib_score']

GDRIFT = 'G-Drift'
PERPLEXITY = 'Perplexity-PL'
ZLIB = 'Zlib'
NEIGHBOUR = 'Neighbour-MIA'
NLL_CAP = 50.0  # mean NLL is clipped here before exponentiating


def min_k_name(k_percent):
  return 'Min-k% (k={0:g})'.format(k_percent)


class AttackScore(object):
  __slots__ = ('attack', 'score', 'sample_id')

  def __init__(self, attack, score, sample_id=None):
    score = float(score)
    if not np.isfinite(score):
      raise NumericalError(attack)
    self.attack = attack
    self.score = score
    self.sample_id = sample_id

  def __repr__(self):
    return 'AttackScore({0!r}, {1!r}, sample_id={2!r})'.format(self.attack, self.score, self.sample_id)


def sequence_nll(model, tokens):
  """Mean negative log-likelihood over every predicted token of the sequence."""
  return -float(np.mean(token_log_likelihoods(model, tokens)))


def perplexity(model, tokens):
  return math.exp(min(sequence_nll(model, tokens), NLL_CAP))


def min_k_score(model, tokens, k_percent, sample_id=None):
  """Mean of the lowest k% token log-likelihoods (at least one token)."""
  if not 0 < k_percent <= 100:
    raise InputError('k must lie in (0, 100], got {0!r}'.format(k_percent))
  lls = np.sort(token_log_likelihoods(model, tokens))
  count = max(1, int(len(lls) * k_percent / 100.0))
  return AttackScore(min_k_name(k_percent), np.mean(lls[:count]), sample_id)


def perplexity_score(model, tokens, sample_id=None):
  return AttackScore(PERPLEXITY, -perplexity(model, tokens), sample_id)


def compressed_bits(text):
  """Bit length of the UTF-8 text under zlib at its default level."""
  data = text.encode('utf-8')
  if not data:
    raise InputError('cannot compress empty text')
  return 8 * len(zlib.compress(data))


def zlib_score(model, text, tokens, sample_id=None):
  """Negated ratio of perplexity to compressed bit length."""
  return AttackScore(ZLIB, -perplexity(model, tokens) / compressed_bits(text), sample_id)


def answer_perplexity(model, sample):
  """Perplexity of the answer tokens alone, conditioned on the prompt."""
  lls = token_log_likelihoods(model, sample.sequence_tokens)[-len(sample.answer_tokens):]
  return math.exp(min(-float(np.mean(lls)), NLL_CAP))


def neighbour_tokens(model, tokens, n_prompt, n_neighbours, seed):
  """
  `n_neighbours` variants of `tokens`, each with one prompt token at position
  1..n_prompt-1 replaced by a draw from the model's next-token distribution
  at that position, excluding the original token.
  """
  tokens = list(tokens)
  if n_neighbours < 1:
    raise InputError('need at least one neighbour, got {0}'.format(n_neighbours))
  if n_prompt < 2:
    raise InputError('a prompt of {0} tokens is too short to perturb'.format(n_prompt))
  rng = np.random.RandomState(seed)
  probs = np.exp(log_softmax(model.sequence_logits(tokens)))
  neighbours = []
  for _ in xrange(n_neighbours):
    pos = 1 + rng.randint(n_prompt - 1)
    p = probs[pos - 1].copy()
    p[tokens[pos]] = 0.0
    total = p.sum()
    if total > 0:
      p /= total
    else:
      p = np.ones_like(p)
      p[tokens[pos]] = 0.0
      p /= p.sum()
    neighbour = list(tokens)
    neighbour[pos] = int(rng.choice(len(p), p=p))
    neighbours.append(neighbour)
  return neighbours


def neighbour_score_from(model, tokens, neighbours, sample_id=None):
  """Mean neighbour loss minus the sequence's own loss, for given neighbours."""
  if not neighbours:
    raise InputError('no neighbours to compare against')
  own = sequence_nll(model, tokens)
  others = [sequence_nll(model, n) for n in neighbours]
  return AttackScore(NEIGHBOUR, np.mean(others) - own, sample_id)


def neighbour_score(model, sample, n_neighbours, seed):
  tokens = sample.sequence_tokens
  neighbours = neighbour_tokens(model, tokens, len(sample.prompt_tokens), n_neighbours, seed)
  return neighbour_score_from(model, tokens, neighbours, sample.sample_id)
