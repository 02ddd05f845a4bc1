# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
L2-regularised logistic regression by full-batch gradient descent with
backtracking line search, with the penalty chosen by stratified k-fold
cross-validated AUC.

The objective is mean log-loss + lambda/2 * |w|^2; the bias is not penalised.
"""
from __future__ import absolute_import, print_function, unicode_literals
import logging

import numpy as np
from six.moves import xrange

from ..exceptions import ContractError, InputError
from .metrics import rates, roc_auc

__all__ = ['DEFAULT_FOLDS', 'DEFAULT_LAMBDA_GRID', 'LogRegModel', 'fit', 'fit_lambda', 'objective', 'predict_proba', 'stratified_folds', 'threshold_metrics']

log = logging.getLogger(__name__)

DEFAULT_LAMBDA_GRID = (0.0, 1e-4, 1e-3, 1e-2, 1e-1)
DEFAULT_FOLDS = 5
GRAD_TOL = 1e-7  # gradient norm; below ~1e-8 the Armijo decrease is lost to rounding of the objective
MAX_ITER = 10000


class LogRegModel(object):
  """
  Weights over the retained features. `feature_mask` and `scaler` describe how
  a raw feature row is reduced and normalised before the weights apply.
  """
  __slots__ = ('weights', 'bias', 'l2_lambda', 'feature_mask', 'scaler', 'converged', 'n_iter', 'cv_auc')

  def __init__(self, weights, bias, l2_lambda, feature_mask=None, scaler=None, converged=True, n_iter=0, cv_auc=None):
    self.weights = np.asarray(weights, dtype=np.float64)
    self.bias = float(bias)
    if l2_lambda < 0:
      raise InputError('l2_lambda must be non-negative, got {0!r}'.format(l2_lambda))
    self.l2_lambda = l2_lambda
    if feature_mask is None:
      feature_mask = np.ones(self.weights.shape[0], dtype=bool)
    self.feature_mask = np.asarray(feature_mask, dtype=bool)
    if int(self.feature_mask.sum()) != self.weights.shape[0]:
      raise ContractError('{0} weights for a mask retaining {1} features'.format(self.weights.shape[0], int(self.feature_mask.sum())))
    self.scaler = scaler
    self.converged = converged
    self.n_iter = n_iter
    self.cv_auc = cv_auc

  def __repr__(self):
    return 'LogRegModel(n_features={0}, lambda={1!r}, converged={2})'.format(self.weights.shape[0], self.l2_lambda, self.converged)

  def prepare(self, raw):
    """Normalises (if a scaler is attached) then masks full feature rows."""
    raw = np.asarray(raw, dtype=np.float64)
    if raw.shape[-1] != self.feature_mask.shape[0]:
      raise ContractError('model expects rows of {0} features, got {1}'.format(self.feature_mask.shape[0], raw.shape[-1]))
    if self.scaler is not None:
      raw = self.scaler.transform(raw)
    return raw[..., self.feature_mask]

  def predict_raw(self, raw):
    return predict_proba(self, self.prepare(raw))


def _sigmoid(z):
  return np.exp(-np.logaddexp(0.0, -z))


def predict_proba(model, rows):
  """sigma(w.f + b) for one prepared row or a matrix of them."""
  rows = np.asarray(rows, dtype=np.float64)
  if rows.shape[-1] != model.weights.shape[0]:
    raise ContractError('model has {0} weights, row has {1} features'.format(model.weights.shape[0], rows.shape[-1]))
  return _sigmoid(rows.dot(model.weights) + model.bias)


def objective(weights, bias, X, y, l2_lambda):
  z = X.dot(weights) + bias
  return float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2_lambda * weights.dot(weights))


def _gradient(weights, bias, X, y, l2_lambda):
  r = _sigmoid(X.dot(weights) + bias) - y
  return X.T.dot(r) / X.shape[0] + l2_lambda * weights, float(np.mean(r))


def _check_xy(X, y):
  X = np.asarray(X, dtype=np.float64)
  y = np.asarray(y, dtype=np.float64)
  if X.ndim != 2 or y.shape != (X.shape[0],):
    raise ContractError('features must be an n x m matrix with n labels')
  return X, y


def fit_lambda(X, y, l2_lambda, max_iter=MAX_ITER, tol=GRAD_TOL):
  """Solves for one fixed penalty. Non-convergence is flagged on the model and logged, not raised."""
  X, y = _check_xy(X, y)
  w = np.zeros(X.shape[1])
  b = 0.0
  step = 1.0
  f = objective(w, b, X, y, l2_lambda)
  converged = False
  n_iter = 0
  for n_iter in xrange(1, max_iter + 1):
    gw, gb = _gradient(w, b, X, y, l2_lambda)
    sq = gw.dot(gw) + gb * gb
    if np.sqrt(sq) < tol:
      converged = True
      break
    step = min(step * 2.0, 1e6)
    while True:
      w_new, b_new = w - step * gw, b - step * gb
      f_new = objective(w_new, b_new, X, y, l2_lambda)
      if f_new <= f - 0.5 * step * sq or step < 1e-16:
        break
      step *= 0.5
    if f_new > f:
      converged = np.sqrt(sq) < tol
      break
    w, b, f = w_new, b_new, f_new
  if not converged:
    log.warning('logistic regression (lambda=%g) stopped after %d iterations without converging', l2_lambda, n_iter)
  return LogRegModel(w, b, l2_lambda, converged=converged, n_iter=n_iter)


def stratified_folds(y, folds, seed):
  """Fold index per sample; each class is shuffled then dealt round-robin."""
  y = np.asarray(y).astype(bool)
  rng = np.random.RandomState(seed)
  assignment = np.zeros(y.shape[0], dtype=int)
  for cls in (True, False):
    idx = np.flatnonzero(y == cls)
    assignment[idx[rng.permutation(idx.shape[0])]] = np.arange(idx.shape[0]) % folds
  return assignment


def fit(features, labels, lambda_grid=DEFAULT_LAMBDA_GRID, folds=DEFAULT_FOLDS, seed=0):
  """
  Picks lambda from `lambda_grid` by mean held-out AUC over stratified folds
  (ties go to the larger lambda) and refits on all the data.
  """
  X, y = _check_xy(features, labels)
  lambda_grid = sorted(float(l) for l in lambda_grid)
  if not lambda_grid or lambda_grid[0] < 0:
    raise InputError('lambda grid must be non-empty and non-negative')
  smallest = int(min(y.sum(), y.shape[0] - y.sum()))
  if smallest < 2:
    raise InputError('need at least two samples of each class, smallest class has {0}'.format(smallest))
  k = min(folds, smallest)

  cv = {}
  if len(lambda_grid) == 1 or k < 2:
    best = lambda_grid[-1]
  else:
    assignment = stratified_folds(y, k, seed)
    for lam in lambda_grid:
      aucs = []
      for fold in xrange(k):
        held = assignment == fold
        model = fit_lambda(X[~held], y[~held], lam)
        aucs.append(roc_auc(predict_proba(model, X[held]), y[held])[1])
      cv[lam] = float(np.mean(aucs))
    best = max(lambda_grid, key=lambda lam: (cv[lam], lam))
    log.info('lambda %g chosen by %d-fold CV (mean AUC %.4f)', best, k, cv[best])
  model = fit_lambda(X, y, best)
  model.cv_auc = cv
  return model


def threshold_metrics(model, features, labels, threshold):
  """TPR, FPR and accuracy of `model` on raw feature rows, predicting member iff probability > threshold."""
  if not 0.0 <= threshold <= 1.0:
    raise InputError('threshold must lie in [0, 1], got {0!r}'.format(threshold))
  return rates(model.predict_raw(features), labels, threshold)
