# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
The drift-feature classifier pipeline (train-split normalisation, masked
logistic regression, validation threshold, test ROC) and the feature
ablation table built on it.
"""
from __future__ import absolute_import, print_function, unicode_literals
import collections
import logging

import numpy as np

from ..attacks import FEATURE_NAMES, MinMaxScaler
from ..exceptions import InputError
from .logreg import DEFAULT_FOLDS, DEFAULT_LAMBDA_GRID, fit, threshold_metrics
from .metrics import choose_threshold, roc_auc

__all__ = ['ABLATION_SPECS', 'AblationSpec', 'PipelineResult', 'run_ablation', 'run_pipeline']

log = logging.getLogger(__name__)


class AblationSpec(object):
  __slots__ = ('name', 'feature_mask')

  def __init__(self, name, feature_mask):
    feature_mask = tuple(bool(m) for m in feature_mask)
    if len(feature_mask) != len(FEATURE_NAMES):
      raise InputError('ablation {0!r}: mask must cover all {1} features'.format(name, len(FEATURE_NAMES)))
    if not any(feature_mask):
      raise InputError('ablation {0!r} removes every feature'.format(name))
    self.name = name
    self.feature_mask = feature_mask

  def __repr__(self):
    return 'AblationSpec({0!r}, kept={1})'.format(self.name, self.kept)

  @property
  def kept(self):
    return [n for n, m in zip(FEATURE_NAMES, self.feature_mask) if m]

  @classmethod
  def without(cls, name, *removed):
    for r in removed:
      if r not in FEATURE_NAMES:
        raise InputError('unknown feature {0!r}'.format(r))
    return cls(name, [n not in removed for n in FEATURE_NAMES])

  @classmethod
  def only(cls, name, *kept):
    return cls(name, [n in kept for n in FEATURE_NAMES])


ABLATION_SPECS = (
    AblationSpec.without('all'),
    AblationSpec.without('all but loss before', 'loss_before'),
    AblationSpec.without('all but logit before', 'logit_before'),
    AblationSpec.without('all but feat proj before', 'proj_before'),
    AblationSpec.without('all but loss after', 'loss_after'),
    AblationSpec.without('all but logit after', 'logit_after'),
    AblationSpec.without('all but feat proj after', 'proj_after'),
    AblationSpec.without('all but euclid drift', 'hidden_drift'),
    AblationSpec.without('all but group before', 'loss_before', 'logit_before', 'proj_before'),
    AblationSpec.without('all but group after', 'loss_after', 'logit_after', 'proj_after'),
    AblationSpec.without('all but loss', 'loss_before', 'loss_after'),
    AblationSpec.without('all but logit', 'logit_before', 'logit_after'),
    AblationSpec.without('all but feat proj', 'proj_before', 'proj_after'),
    AblationSpec.only('only euclid drift', 'hidden_drift'),
)


class PipelineResult(object):
  __slots__ = ('model', 'curve', 'auc', 'threshold', 'metrics', 'test_proba')

  def __init__(self, model, curve, auc, threshold, metrics, test_proba):
    self.model = model
    self.curve = curve
    self.auc = auc
    self.threshold = threshold
    self.metrics = metrics
    self.test_proba = test_proba

  def __repr__(self):
    return 'PipelineResult(auc={0:.4f}, threshold={1:.4f})'.format(self.auc, self.threshold)


def _partition(features, labels, split):
  features = np.asarray(features, dtype=np.float64)
  labels = np.asarray(labels).astype(int)
  split = np.asarray(split)
  parts = collections.OrderedDict()
  for name in ('train', 'validation', 'test'):
    rows = split == name
    parts[name] = (features[rows], labels[rows])
  return parts


def run_pipeline(features, labels, split, feature_mask=None, seed=0, lambda_grid=DEFAULT_LAMBDA_GRID, folds=DEFAULT_FOLDS):
  """
  Normalises with train-split min/max, fits on train, picks the probability
  threshold on validation by accuracy and reports ROC/AUC and rates on test.
  """
  parts = _partition(features, labels, split)
  X_train, y_train = parts['train']
  X_val, y_val = parts['validation']
  X_test, y_test = parts['test']
  if feature_mask is None:
    feature_mask = [True] * X_train.shape[1]
  scaler = MinMaxScaler.fit(X_train)
  mask = np.asarray(feature_mask, dtype=bool)
  model = fit(scaler.transform(X_train)[:, mask], y_train, lambda_grid, folds, seed)
  model.feature_mask = mask
  model.scaler = scaler

  if X_val.shape[0]:
    threshold = choose_threshold(model.predict_raw(X_val), y_val, floor=0.0)
  else:
    log.warning('empty validation split; using threshold 0.5')
    threshold = 0.5
  proba = model.predict_raw(X_test)
  curve, auc = roc_auc(proba, y_test)
  return PipelineResult(model, curve, auc, threshold, threshold_metrics(model, X_test, y_test, threshold), proba)


def run_ablation(features, labels, specs, split, seed, lambda_grid=DEFAULT_LAMBDA_GRID, folds=DEFAULT_FOLDS):
  """Refits the pipeline once per spec; returns an OrderedDict of spec name to PipelineResult."""
  table = collections.OrderedDict()
  for spec in specs:
    table[spec.name] = run_pipeline(features, labels, split, spec.feature_mask, seed, lambda_grid, folds)
    log.info('ablation %r: test AUC %.4f', spec.name, table[spec.name].auc)
  return table
