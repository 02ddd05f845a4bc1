# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
import unittest

import numpy as np

from gdrift import lm
from gdrift.exceptions import InputError, TrainingError

from testutils import Prompt, tiny_model


def _members():
  return [Prompt([1, 2, 3], [4]), Prompt([5, 6], [7]), Prompt([8, 9, 10, 11], [12]), Prompt([2, 2], [13])]


class TrainTest(unittest.TestCase):
  def test_deterministic(self):
    a, b = tiny_model(0), tiny_model(0)
    log_a = lm.train(a.params, _members(), epochs=3, lr=0.05, seed=7)
    log_b = lm.train(b.params, _members(), epochs=3, lr=0.05, seed=7)
    self.assertEqual(lm.checksum(a.params), lm.checksum(b.params))
    self.assertEqual(log_a.epoch_losses, log_b.epoch_losses)
    self.assertEqual(log_a.epochs_completed, 3)

  def test_resume_matches_uninterrupted(self):
    straight, resumed = tiny_model(0), tiny_model(0)
    full = lm.train(straight.params, _members(), epochs=4, lr=0.05, seed=2)
    first = lm.train(resumed.params, _members(), epochs=2, lr=0.05, seed=2)
    rest = lm.train(resumed.params, _members(), epochs=2, lr=0.05, seed=2, start_epoch=2)
    self.assertEqual(lm.checksum(straight.params), lm.checksum(resumed.params))
    self.assertEqual(full.epoch_losses, first.epoch_losses + rest.epoch_losses)
    self.assertEqual(rest.epochs_completed, 4)

  def test_epoch_order(self):
    order = lm.epoch_order(3, 1, 10)
    self.assertEqual(sorted(order.tolist()), list(range(10)))
    self.assertEqual(order.tolist(), lm.epoch_order(3, 1, 10).tolist())

  def test_memorises(self):
    model = tiny_model(0)
    log = lm.train(model.params, _members(), epochs=60, lr=0.05, seed=0)
    self.assertLess(log.final_loss, log.epoch_losses[0])
    self.assertLessEqual(log.epoch_losses[1], log.epoch_losses[0])
    self.assertLessEqual(log.epoch_losses[2], log.epoch_losses[1])

  def test_bad_arguments(self):
    params = tiny_model(0).params
    with self.assertRaises(InputError):
      lm.train(params, _members(), epochs=0, lr=0.05, seed=0)
    with self.assertRaises(InputError):
      lm.train(params, [], epochs=1, lr=0.05, seed=0)
    with self.assertRaises(InputError):
      lm.train(params, _members(), epochs=1, lr=0.0, seed=0)
    with self.assertRaises(InputError):
      lm.train(params, _members() + [Prompt([1], [2], is_member=False)], epochs=1, lr=0.05, seed=0)

  def test_divergence(self):
    model = tiny_model(0)
    model.params['tok_emb'][...] = np.nan
    with self.assertRaises(TrainingError) as cm:
      lm.train(model.params, _members(), epochs=3, lr=0.05, seed=0, start_epoch=5)
    self.assertEqual(cm.exception.epoch, 5)
    self.assertEqual(cm.exception.training_log.epochs_completed, 5)
