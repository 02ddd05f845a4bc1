# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Report tables: the attack comparison, ROC points, the feature ablation, the
drift statistics with their CDFs, and paraphrase consistency. Data tables keep
repr-exact floats; report tables use six decimals.
"""
from __future__ import absolute_import, print_function, unicode_literals
import collections
import re

import numpy as np
import six

from ..attacks import FEATURE_NAMES, MinMaxScaler
from ..classify import FPR_GRID, run_pipeline, tpr_at_fpr
from ..tables import Column, format_float, write_table

__all__ = ['DRIFT_QUANTITIES', 'consistency_summary', 'derived_drift', 'drift_statistics', 'empirical_cdf', 'roc_filename', 'write_ablation', 'write_consistency', 'write_drift', 'write_metrics', 'write_roc']

REPORT_PLACES = 6
DRIFT_QUANTITIES = ('loss_delta', 'logit_delta', 'proj_delta', 'abs_proj_delta', 'hidden_drift')
_F = dict((n, i) for i, n in enumerate(FEATURE_NAMES))


def _fmt(x):
  return format_float(x, REPORT_PLACES)


def roc_filename(attack):
  slug = re.sub(r'[^a-z0-9]+', '-', attack.lower()).strip('-')
  return 'roc/{0}.tsv'.format(slug)


def _tpr_column(fpr):
  return 'tpr@fpr={0:g}'.format(fpr)


def write_metrics(output, results):
  """`results` maps attack name to (RocCurve, auc, threshold, {tpr, fpr, accuracy})."""
  columns = [Column('attack'), Column('auc')]
  columns += [Column(_tpr_column(f)) for f in FPR_GRID]
  columns += [Column('threshold'), Column('tpr'), Column('fpr'), Column('accuracy')]
  rows = []
  for attack, (curve, auc, threshold, rates) in six.iteritems(results):
    row = {'attack': attack, 'auc': _fmt(auc), 'threshold': _fmt(threshold)}
    for f in FPR_GRID:
      row[_tpr_column(f)] = _fmt(tpr_at_fpr(curve, f))
    for key in ('tpr', 'fpr', 'accuracy'):
      row[key] = _fmt(rates[key])
    rows.append(row)
  write_table(output, 'metrics', columns, rows)


def write_roc(output, curve):
  rows = ({'fpr': f, 'tpr': t, 'threshold': c} for f, t, c in zip(curve.fpr, curve.tpr, curve.thresholds))
  write_table(output, 'roc', ('fpr', 'tpr', 'threshold'), rows)


def write_ablation(output, table):
  """`table` maps spec name to (AblationSpec, PipelineResult), in row order."""
  rows = [{'spec': name, 'features': ','.join(spec.kept), 'auc': _fmt(result.auc)} for name, (spec, result) in six.iteritems(table)]
  write_table(output, 'ablation', ('spec', 'features', 'auc'), rows)


def derived_drift(features):
  """Columns of DRIFT_QUANTITIES recomputed from the raw seven-feature matrix."""
  F = np.asarray(features, dtype=np.float64)
  proj_delta = F[:, _F['proj_after']] - F[:, _F['proj_before']]
  return np.column_stack([
      F[:, _F['loss_after']] - F[:, _F['loss_before']],
      F[:, _F['logit_after']] - F[:, _F['logit_before']],
      proj_delta,
      np.abs(proj_delta),
      F[:, _F['hidden_drift']],
  ])


def empirical_cdf(values):
  """(value, fraction <= value) points, starting at fraction 0 and ending at 1."""
  values = np.sort(np.asarray(values, dtype=np.float64))
  if values.size == 0:
    return []
  points = [(float(values[0]), 0.0)]
  n = values.size
  points.extend((float(v), (i + 1) / float(n)) for i, v in enumerate(values))
  return points


def drift_statistics(features, labels, split, seed=0, lambda_grid=None, folds=None):
  """
  Per-class means of each drift quantity, raw and min-max normalised with
  train-split statistics, plus the test AUC of a classifier fitted on that
  quantity alone. Returns (summary rows, CDF rows over normalised values).
  """
  labels = np.asarray(labels).astype(int)
  split = np.asarray(split)
  derived = derived_drift(features)
  normalised = MinMaxScaler.fit(derived[split == 'train']).transform(derived)
  kwargs = {}
  if lambda_grid is not None:
    kwargs['lambda_grid'] = lambda_grid
  if folds is not None:
    kwargs['folds'] = folds

  summary, cdf = [], []
  for j, quantity in enumerate(DRIFT_QUANTITIES):
    row = collections.OrderedDict(quantity=quantity)
    for cls, name in ((1, 'member'), (0, 'nonmember')):
      row[name + '_mean'] = float(np.mean(derived[labels == cls, j]))
      row[name + '_mean_normalised'] = float(np.mean(normalised[labels == cls, j]))
      for value, frac in empirical_cdf(normalised[labels == cls, j]):
        cdf.append({'quantity': quantity, 'class': name, 'value': value, 'cdf': frac})
    row['single_feature_auc'] = run_pipeline(derived[:, j:j + 1], labels, split, seed=seed, **kwargs).auc
    summary.append(row)
  return summary, cdf


def write_drift(report_output, cdf_output, summary, cdf):
  keys = ('member_mean', 'nonmember_mean', 'member_mean_normalised', 'nonmember_mean_normalised', 'single_feature_auc')
  rows = []
  for row in summary:
    out = {'quantity': row['quantity']}
    out.update((k, _fmt(row[k])) for k in keys)
    rows.append(out)
  write_table(report_output, 'drift-report', ('quantity',) + keys, rows)
  write_table(cdf_output, 'drift-cdf', ('quantity', 'class', 'value', 'cdf'), cdf)


def consistency_summary(rows):
  """Per (fact, class): mean and population standard deviation of |delta alpha| across paraphrases."""
  groups = collections.OrderedDict()
  for row in rows:
    groups.setdefault((row['fact_id'], row['class']), []).append(row['abs_delta_alpha'])
  return [{'fact_id': f, 'class': c, 'n_prompts': len(v), 'mean_abs_delta_alpha': float(np.mean(v)), 'std_abs_delta_alpha': float(np.std(v))} for (f, c), v in six.iteritems(groups)]


def write_consistency(output, summary_output, rows):
  table = [dict(r, alpha_before=_fmt(r['alpha_before']), alpha_after=_fmt(r['alpha_after']), abs_delta_alpha=_fmt(r['abs_delta_alpha'])) for r in rows]
  write_table(output, 'consistency', ('fact_id', 'prompt', 'answer', 'class', 'alpha_before', 'alpha_after', 'abs_delta_alpha'), table)
  summary = [dict(s, mean_abs_delta_alpha=_fmt(s['mean_abs_delta_alpha']), std_abs_delta_alpha=_fmt(s['std_abs_delta_alpha'])) for s in consistency_summary(rows)]
  write_table(summary_output, 'consistency-summary', ('fact_id', 'class', 'n_prompts', 'mean_abs_delta_alpha', 'std_abs_delta_alpha'), summary)
