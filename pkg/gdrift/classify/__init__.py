# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
from .metrics import FPR_GRID, RocCurve, choose_threshold, pair_count_auc, rates, roc_auc, roc_curve, tpr_at_fpr
from .logreg import DEFAULT_FOLDS, DEFAULT_LAMBDA_GRID, LogRegModel, fit, fit_lambda, objective, predict_proba, stratified_folds, threshold_metrics
from .ablation import ABLATION_SPECS, AblationSpec, PipelineResult, run_ablation, run_pipeline

__all__ = ['FPR_GRID', 'RocCurve', 'choose_threshold', 'pair_count_auc', 'rates', 'roc_auc', 'roc_curve', 'tpr_at_fpr', 'DEFAULT_FOLDS', 'DEFAULT_LAMBDA_GRID', 'LogRegModel', 'fit', 'fit_lambda', 'objective', 'predict_proba', 'stratified_folds', 'threshold_metrics', 'ABLATION_SPECS', 'AblationSpec', 'PipelineResult', 'run_ablation', 'run_pipeline']
