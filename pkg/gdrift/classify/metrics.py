# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
ROC curves, AUC and confusion-matrix rates. Scores are oriented so that
higher means member (label 1).

AUC is accumulated as an integer count of member/non-member pair wins (two
per win, one per tie) and divided once, so the trapezoid over the ROC curve
and the pair-count definition give identical floats.
"""
from __future__ import absolute_import, print_function, unicode_literals

import numpy as np
from six.moves import xrange

from ..exceptions import InputError

__all__ = ['FPR_GRID', 'RocCurve', 'choose_threshold', 'pair_count_auc', 'rates', 'roc_auc', 'roc_curve', 'tpr_at_fpr']

FPR_GRID = (0.01, 0.05, 0.1, 0.2)


def _check(scores, labels):
  scores = np.asarray(scores, dtype=np.float64)
  labels = np.asarray(labels).astype(bool)
  if scores.shape != labels.shape or scores.ndim != 1:
    raise InputError('scores and labels must be equal-length vectors')
  if not np.all(np.isfinite(scores)):
    raise InputError('scores must be finite')
  n_pos = int(labels.sum())
  n_neg = int(labels.size - n_pos)
  if n_pos == 0 or n_neg == 0:
    raise InputError('ROC analysis needs both members and non-members')
  return scores, labels, n_pos, n_neg


class RocCurve(object):
  """Points from (0, 0) to (1, 1); thresholds[i] is the score cut (member iff score >= cut) giving point i."""
  __slots__ = ('fpr', 'tpr', 'thresholds', 'tp', 'fp', 'n_pos', 'n_neg')

  def __init__(self, tp, fp, thresholds, n_pos, n_neg):
    self.tp = tp
    self.fp = fp
    self.thresholds = thresholds
    self.n_pos = n_pos
    self.n_neg = n_neg
    self.tpr = [t / float(n_pos) for t in tp]
    self.fpr = [f / float(n_neg) for f in fp]

  def __repr__(self):
    return 'RocCurve(points={0})'.format(len(self.tpr))

  def __len__(self):
    return len(self.tpr)

  def points(self):
    return list(zip(self.fpr, self.tpr))

  def doubled_area(self):
    """Twice the unnormalised trapezoid area, an exact integer."""
    return sum((self.fp[i] - self.fp[i - 1]) * (self.tp[i] + self.tp[i - 1]) for i in xrange(1, len(self.tp)))

  def auc(self):
    return self.doubled_area() / float(2 * self.n_pos * self.n_neg)


def roc_curve(scores, labels):
  scores, labels, n_pos, n_neg = _check(scores, labels)
  order = np.argsort(-scores, kind='mergesort')
  tps, fps, thresholds = [0], [0], [float('inf')]
  tp = fp = i = 0
  while i < len(order):
    cut = scores[order[i]]
    while i < len(order) and scores[order[i]] == cut:
      if labels[order[i]]:
        tp += 1
      else:
        fp += 1
      i += 1
    tps.append(tp)
    fps.append(fp)
    thresholds.append(float(cut))
  return RocCurve(tps, fps, thresholds, n_pos, n_neg)


def roc_auc(scores, labels):
  """Returns (RocCurve, AUC)."""
  curve = roc_curve(scores, labels)
  return curve, curve.auc()


def pair_count_auc(scores, labels):
  """P(member score > non-member score) + P(tie) / 2, by counting every pair."""
  scores, labels, n_pos, n_neg = _check(scores, labels)
  pos, neg = scores[labels], scores[~labels]
  doubled = 0
  for p in pos:
    doubled += 2 * int(np.sum(p > neg)) + int(np.sum(p == neg))
  return doubled / float(2 * n_pos * n_neg)


def tpr_at_fpr(curve, max_fpr):
  """Largest TPR reached at a false-positive rate no greater than `max_fpr`."""
  return max(t for f, t in zip(curve.fpr, curve.tpr) if f <= max_fpr + 1e-12)


def rates(scores, labels, threshold):
  """TPR, FPR and accuracy when predicting member iff score > threshold."""
  scores = np.asarray(scores, dtype=np.float64)
  labels = np.asarray(labels).astype(bool)
  predicted = scores > threshold
  n_pos = labels.sum()
  n_neg = labels.size - n_pos
  tp = np.sum(predicted & labels)
  fp = np.sum(predicted & ~labels)
  return {
      'tpr': float(tp) / n_pos if n_pos else 0.0,
      'fpr': float(fp) / n_neg if n_neg else 0.0,
      'accuracy': float(np.sum(predicted == labels)) / labels.size if labels.size else 0.0,
  }


def choose_threshold(scores, labels, floor=None):
  """
  The threshold maximising accuracy under the strict rule. Candidates are
  `floor` (or just below the smallest score) and every distinct score; ties
  go to the smallest candidate.
  """
  scores = np.asarray(scores, dtype=np.float64)
  if scores.size == 0:
    raise InputError('cannot choose a threshold from no scores')
  distinct = np.unique(scores)
  lowest = floor if floor is not None else float(distinct[0]) - 1.0
  candidates = [lowest] + [float(s) for s in distinct if s > lowest]
  best, best_acc = candidates[0], -1.0
  for c in candidates:
    acc = rates(scores, labels, c)['accuracy']
    if acc > best_acc:
      best, best_acc = c, acc
  return best
