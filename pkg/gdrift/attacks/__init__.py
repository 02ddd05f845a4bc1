# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
from .gdrift import DEFAULT_ETA, FEATURE_NAMES, DriftFeatures, ProbeDirection, extract_features, gdrift_features, make_probe
from .baselines import GDRIFT, NEIGHBOUR, NLL_CAP, PERPLEXITY, ZLIB, AttackScore, answer_perplexity, compressed_bits, min_k_name, min_k_score, neighbour_score, neighbour_score_from, neighbour_tokens, perplexity, perplexity_score, sequence_nll, zlib_score
from .normalize import MinMaxScaler, normalize_minmax

__all__ = ['DEFAULT_ETA', 'FEATURE_NAMES', 'DriftFeatures', 'ProbeDirection', 'extract_features', 'gdrift_features', 'make_probe', 'GDRIFT', 'NEIGHBOUR', 'NLL_CAP', 'PERPLEXITY', 'ZLIB', 'AttackScore', 'answer_perplexity', 'compressed_bits', 'min_k_name', 'min_k_score', 'neighbour_score', 'neighbour_score_from', 'neighbour_tokens', 'perplexity', 'perplexity_score', 'sequence_nll', 'zlib_score', 'MinMaxScaler', 'normalize_minmax']
