# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
import math
import unittest

import numpy as np

from gdrift import attacks, lm
from gdrift.exceptions import ContractError, InputError

from testutils import Prompt, ScalarModel, tiny_model


class ProbeTest(unittest.TestCase):
  def test_make_probe(self):
    probe = attacks.make_probe(8, 3)
    self.assertAlmostEqual(np.linalg.norm(probe.v), 1.0, places=12)
    self.assertEqual(probe.v.tolist(), attacks.make_probe(8, 3).v.tolist())
    self.assertNotEqual(probe.v.tolist(), attacks.make_probe(8, 4).v.tolist())

  def test_not_unit(self):
    with self.assertRaises(ContractError):
      attacks.ProbeDirection([1.0, 1.0])


class DriftFeaturesTest(unittest.TestCase):
  def test_vector(self):
    f = attacks.DriftFeatures.from_vector(range(7))
    self.assertEqual(f.as_vector().tolist(), [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    self.assertEqual((f.loss_delta, f.logit_delta, f.proj_delta, f.abs_proj_delta), (3.0, 3.0, 3.0, 3.0))
    with self.assertRaises(ContractError):
      attacks.DriftFeatures.from_vector([1.0, 2.0])


class GdriftFeaturesTest(unittest.TestCase):
  def setUp(self):
    self.model = tiny_model(6)
    self.sample = Prompt([1, 5, 9, 2], [7, 3])
    self.probe = attacks.make_probe(8, 0)

  def test_closed_form(self):
    w0, eta = 0.5, 0.01
    f = attacks.gdrift_features(ScalarModel(w0), Prompt([0], [0]), attacks.ProbeDirection([1.0]), eta)
    w1 = w0 + eta * (-2.0 / (1.0 + math.exp(2.0 * w0)))
    self.assertAlmostEqual(f.loss_before, math.log1p(math.exp(-2.0 * w0)), places=12)
    self.assertAlmostEqual(f.loss_after, math.log1p(math.exp(-2.0 * w1)), places=12)
    self.assertAlmostEqual(f.logit_before, w0, places=12)
    self.assertAlmostEqual(f.logit_after, w1, places=12)
    self.assertAlmostEqual(f.proj_before, w0, places=12)
    self.assertAlmostEqual(f.proj_after, w1, places=12)
    self.assertAlmostEqual(f.hidden_drift, w0 - w1, places=12)
    self.assertGreater(f.loss_after, f.loss_before)

  def test_restores_parameters(self):
    model = ScalarModel(0.5)
    attacks.gdrift_features(model, Prompt([0], [0]), attacks.ProbeDirection([1.0]), 0.25)
    self.assertEqual(model.params['w'][0], 0.5)

    before = lm.checksum(self.model.params)
    attacks.gdrift_features(self.model, self.sample, self.probe, 0.1)
    self.assertEqual(lm.checksum(self.model.params), before)

  def test_pre_features_match_forward(self):
    f = attacks.gdrift_features(self.model, self.sample, self.probe)
    trace = self.model.forward(self.sample.prompt_tokens)
    self.assertAlmostEqual(f.proj_before, float(np.dot(trace.hidden, self.probe.v)), places=12)
    self.assertAlmostEqual(f.logit_before, trace.logits[7], places=12)
    self.assertAlmostEqual(f.loss_before, -lm.log_softmax(trace.logits)[7], places=12)

  def test_zero_step(self):
    f = attacks.gdrift_features(self.model, self.sample, self.probe, 0.0, allow_zero=True)
    self.assertEqual((f.loss_after, f.logit_after, f.proj_after), (f.loss_before, f.logit_before, f.proj_before))
    self.assertEqual(f.hidden_drift, 0.0)
    with self.assertRaises(InputError):
      attacks.gdrift_features(self.model, self.sample, self.probe, 0.0)
    with self.assertRaises(InputError):
      attacks.gdrift_features(self.model, self.sample, self.probe, -0.1)

  def test_tiny_step_is_continuous(self):
    f = attacks.gdrift_features(self.model, self.sample, self.probe, 1e-10)
    self.assertLess(abs(f.loss_delta), 1e-6)
    self.assertLess(abs(f.logit_delta), 1e-6)
    self.assertLess(f.hidden_drift, 1e-6)

  def test_probe_dimension(self):
    with self.assertRaises(ContractError):
      attacks.gdrift_features(self.model, self.sample, attacks.make_probe(4, 0))

  def test_extract_in_order(self):
    samples = [Prompt([1, 2], [3], sample_id='a'), Prompt([4, 5, 6], [7], sample_id='b'), self.sample]
    before = lm.checksum(self.model.params)
    out = list(attacks.extract_features(self.model, samples, self.probe, progress_every=2))
    self.assertEqual([s for s, _ in out], samples)
    self.assertEqual(out[2][1].as_vector().tolist(), attacks.gdrift_features(self.model, self.sample, self.probe).as_vector().tolist())
    self.assertEqual(lm.checksum(self.model.params), before)

  def test_projection_drift_identity(self):
    _, grads, before = self.model.loss_grad_trace(self.sample.prompt_tokens, self.sample.target)
    snap = lm.snapshot(self.model.params)
    lm.sgd_step(self.model.params, grads, 0.05, lm.ASCENT)
    after = self.model.forward(self.sample.prompt_tokens)
    lm.restore(self.model.params, snap)

    f = attacks.gdrift_features(self.model, self.sample, self.probe, 0.05)
    self.assertLess(abs(f.proj_delta - float(np.dot(after.hidden - before.hidden, self.probe.v))), 1e-10)
    self.assertAlmostEqual(f.hidden_drift, float(np.linalg.norm(after.hidden - before.hidden)), places=12)


class RestoreOverManyCallsTest(unittest.TestCase):
  def test_thousand_samples(self):
    model = tiny_model(8)
    probe = attacks.make_probe(8, 1)
    rng = np.random.RandomState(0)
    samples = [Prompt(rng.randint(16, size=1 + i % 6), rng.randint(16, size=1 + i % 2), sample_id=str(i)) for i in range(1000)]
    before = lm.checksum(model.params)
    n = sum(1 for _ in attacks.extract_features(model, samples, probe, eta=0.05))
    self.assertEqual(n, 1000)
    self.assertEqual(lm.checksum(model.params), before)
