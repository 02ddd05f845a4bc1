# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
import math
import unittest

import numpy as np

from gdrift import attacks, lm
from gdrift.exceptions import InputError, NumericalError

from testutils import Prompt, tiny_model, uniform_model


class ConfidentModel(object):
  """Two classes; always puts nearly all mass on token 1."""

  def sequence_logits(self, tokens):
    return np.tile([0.0, 200.0], (len(tokens), 1))


class LikelihoodScoreTest(unittest.TestCase):
  def setUp(self):
    self.model = tiny_model(2)
    self.tokens = [1, 4, 2, 8, 5, 7, 3, 3]

  def test_min_k_all_tokens_is_mean(self):
    lls = lm.token_log_likelihoods(self.model, self.tokens)
    score = attacks.min_k_score(self.model, self.tokens, 100)
    self.assertAlmostEqual(score.score, float(np.mean(lls)), places=12)
    self.assertEqual(score.attack, 'Min-k% (k=100)')

  def test_min_k_takes_lowest(self):
    lls = np.sort(lm.token_log_likelihoods(self.model, self.tokens))
    # 7 scored tokens at 20% is one token; at 50% it is three
    self.assertAlmostEqual(attacks.min_k_score(self.model, self.tokens, 20).score, lls[0], places=12)
    self.assertAlmostEqual(attacks.min_k_score(self.model, self.tokens, 50).score, float(np.mean(lls[:3])), places=12)
    for bad in (0, -5, 101):
      with self.assertRaises(InputError):
        attacks.min_k_score(self.model, self.tokens, bad)

  def test_uniform_model(self):
    model = uniform_model(vocab_size=4)
    tokens = [0, 3, 2, 1, 1]
    for k in (20, 100):
      self.assertAlmostEqual(attacks.min_k_score(model, tokens, k).score, -math.log(4), places=12)
    self.assertAlmostEqual(attacks.perplexity(model, tokens), 4.0, places=9)
    self.assertAlmostEqual(attacks.perplexity_score(model, tokens).score, -4.0, places=9)
    self.assertAlmostEqual(attacks.answer_perplexity(model, Prompt([0, 3], [2, 1])), 4.0, places=9)

  def test_perplexity_is_exp_nll(self):
    self.assertAlmostEqual(attacks.perplexity(self.model, self.tokens), math.exp(attacks.sequence_nll(self.model, self.tokens)), places=9)

  def test_perplexity_cap(self):
    self.assertEqual(attacks.perplexity(ConfidentModel(), [0, 0, 0]), math.exp(attacks.NLL_CAP))

  def test_non_finite_score(self):
    with self.assertRaises(NumericalError):
      attacks.AttackScore(attacks.PERPLEXITY, float('nan'))

  def test_scores_do_not_touch_parameters(self):
    before = lm.checksum(self.model.params)
    attacks.min_k_score(self.model, self.tokens, 20)
    attacks.zlib_score(self.model, 'some text', self.tokens)
    attacks.neighbour_score(self.model, Prompt(self.tokens[:5], self.tokens[5:]), 3, 0)
    self.assertEqual(lm.checksum(self.model.params), before)


class ZlibTest(unittest.TestCase):
  def test_compressed_bits(self):
    self.assertEqual(attacks.compressed_bits('a' * 16), 80)
    text = 'Q: What is the capital of Veloria? A: Marlton'
    self.assertLess(attacks.compressed_bits(text * 2), 2 * attacks.compressed_bits(text))
    with self.assertRaises(InputError):
      attacks.compressed_bits('')

  def test_score(self):
    model = uniform_model(vocab_size=4)
    score = attacks.zlib_score(model, 'a' * 16, [0, 1, 2], sample_id='s1')
    self.assertAlmostEqual(score.score, -4.0 / 80, places=12)
    self.assertEqual((score.attack, score.sample_id), (attacks.ZLIB, 's1'))


class NeighbourTest(unittest.TestCase):
  def setUp(self):
    self.model = tiny_model(3)
    self.sample = Prompt([1, 4, 2, 8, 5], [7, 3])

  def test_neighbours_change_one_prompt_token(self):
    tokens = self.sample.sequence_tokens
    neighbours = attacks.neighbour_tokens(self.model, tokens, 5, 10, seed=1)
    self.assertEqual(len(neighbours), 10)
    for n in neighbours:
      changed = [i for i in range(len(tokens)) if n[i] != tokens[i]]
      self.assertEqual(len(changed), 1)
      self.assertTrue(1 <= changed[0] < 5)
    self.assertEqual(neighbours, attacks.neighbour_tokens(self.model, tokens, 5, 10, seed=1))

  def test_self_comparison_is_zero(self):
    tokens = self.sample.sequence_tokens
    score = attacks.neighbour_score_from(self.model, tokens, [list(tokens)] * 3)
    self.assertAlmostEqual(score.score, 0.0, places=12)

  def test_score_is_mean_difference(self):
    tokens = self.sample.sequence_tokens
    neighbours = attacks.neighbour_tokens(self.model, tokens, 5, 4, seed=7)
    expected = np.mean([attacks.sequence_nll(self.model, n) for n in neighbours]) - attacks.sequence_nll(self.model, tokens)
    score = attacks.neighbour_score(self.model, self.sample, 4, seed=7)
    self.assertAlmostEqual(score.score, expected, places=12)

  def test_bad_arguments(self):
    tokens = self.sample.sequence_tokens
    with self.assertRaises(InputError):
      attacks.neighbour_tokens(self.model, tokens, 5, 0, seed=0)
    with self.assertRaises(InputError):
      attacks.neighbour_tokens(self.model, tokens, 1, 3, seed=0)
    with self.assertRaises(InputError):
      attacks.neighbour_score_from(self.model, tokens, [])
