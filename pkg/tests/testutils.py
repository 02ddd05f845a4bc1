# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
import contextlib
import io
import os
import shutil
import tempfile

import numpy as np

from gdrift import ad, corpus, lm
from gdrift.harness.config import ExperimentConfig

DESK_SCALE = os.environ.get('GDRIFT_DESK_SCALE', '') not in ('', '0')


def tiny_config(vocab_size=16, model_dim=8, n_layers=1, n_heads=2, ffn_dim=16, max_seq_len=8, rng_seed=0):
  return lm.ModelConfig(vocab_size, model_dim, n_layers, n_heads, ffn_dim, max_seq_len, rng_seed)


def tiny_model(seed=0, **kwargs):
  config = tiny_config(**kwargs)
  return lm.TransformerLM(lm.init_model(config, seed))


def uniform_model(seed=0, **kwargs):
  """Zero output projection: every next-token distribution is uniform."""
  model = tiny_model(seed, **kwargs)
  model.params['out.weight'][...] = 0.0
  return model


class Prompt(object):
  """Just enough of a Sample for the model and attack entry points."""
  __slots__ = ('sample_id', 'prompt_tokens', 'answer_tokens', 'target', 'is_member')

  def __init__(self, prompt_tokens, answer_tokens, sample_id='x', is_member=True):
    self.sample_id = sample_id
    self.prompt_tokens = list(prompt_tokens)
    self.answer_tokens = list(answer_tokens)
    self.target = self.answer_tokens[0]
    self.is_member = is_member

  @property
  def sequence_tokens(self):
    return self.prompt_tokens + self.answer_tokens


class ScalarModel(object):
  """
  One parameter w. The hidden state is [w], the logits are [w, -w] and the
  target is class 0, so loss = log(1 + exp(-2w)) and dloss/dw = -2 / (1 + exp(2w)).
  """

  def __init__(self, w):
    self.params = lm.ModelParams([('w', np.array([float(w)]))])

  def _trace(self, graph):
    w = graph.parameter('w', self.params['w'])
    logits = ad.concat_cols([ad.reshape(w, (1, 1)), ad.reshape(ad.scale(w, -1.0), (1, 1))])
    return ad.reshape(logits, (2,)), w

  def forward(self, tokens):
    logits, hidden = self._trace(ad.Graph())
    return lm.ForwardTrace(logits.data.copy(), hidden.data.copy())

  def loss_grad_trace(self, tokens, target):
    graph = ad.Graph()
    logits, hidden = self._trace(graph)
    loss = ad.cross_entropy(logits, target)
    return loss.item(), ad.backward(loss), lm.ForwardTrace(logits.data.copy(), hidden.data.copy())


def small_world(seed=3, n_facts=60):
  world = corpus.generate_world(seed, n_facts)
  return world, corpus.Tokenizer.for_world(world)


def small_dataset(seed=3, n_facts=60, n_members=20, n_nonmembers=20):
  world, tokenizer = small_world(seed, n_facts)
  samples = corpus.build_membership_dataset(world, seed, n_members, n_nonmembers, tokenizer=tokenizer)
  return world, tokenizer, samples


def small_experiment(directory, seed=5):
  """A config small enough for the whole pipeline to run in seconds."""
  config = ExperimentConfig()
  config.update({
      'corpus': {'n_facts': 60, 'n_members': 20, 'n_nonmembers': 20},
      'model': {'model_dim': 8, 'n_layers': 1, 'n_heads': 2, 'ffn_dim': 16, 'max_seq_len': 24},
      'training': {'epochs': 2, 'lr': 0.05},
      'attack': {'n_neighbours': 2, 'k_percents': '20,50'},
      'classifier': {'folds': 2, 'lambda_grid': '0.001,0.1'},
      'consistency': {'n_facts': 2},
      'output': {'directory': directory},
  })
  config.fill_seeds(seed)
  return config


@contextlib.contextmanager
def temp_dir():
  path = tempfile.mkdtemp(prefix='gdrift-test-')
  try:
    yield path
  finally:
    shutil.rmtree(path, ignore_errors=True)


def round_trip_text(write, *args):
  out = io.StringIO()
  write(out, *args)
  return io.StringIO(out.getvalue())
