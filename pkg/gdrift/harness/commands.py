# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
The experiment stages. Each command reads its inputs from the run directory,
verifying them against the manifest, and writes its outputs atomically,
registering them in the manifest.
"""
from __future__ import absolute_import, print_function, unicode_literals
import collections
import contextlib
import io
import logging
import os

import numpy as np
import six

from .. import attacks, classify, corpus, lm
from ..exceptions import IntegrityError, TrainingError
from ..tables import read_table, write_table
from . import reports
from .manifest import RunManifest, atomic_write, requires_artifacts

__all__ = ['ARTIFACTS', 'ARTIFACT_SECTIONS', 'Run', 'cmd_ablate', 'cmd_consistency', 'cmd_drift_report', 'cmd_evaluate', 'cmd_extract', 'cmd_gen_data', 'cmd_train', 'run_all']

log = logging.getLogger(__name__)

ARTIFACTS = collections.OrderedDict([
    ('config', 'config.ini'),
    ('dataset', 'dataset.tsv'),
    ('vocab', 'vocab.tsv'),
    ('checkpoint', 'checkpoint.ckpt'),
    ('training_log', 'training_log.tsv'),
    ('features', 'features.tsv'),
    ('scores', 'scores.tsv'),
    ('metrics', 'metrics.tsv'),
    ('metrics_shuffled', 'metrics_shuffled.tsv'),
    ('ablation', 'ablation.tsv'),
    ('drift_report', 'drift_report.tsv'),
    ('drift_cdf', 'drift_cdf.tsv'),
    ('consistency', 'consistency.tsv'),
    ('consistency_summary', 'consistency_summary.tsv'),
])


_DATA_SECTIONS = ('corpus', 'split')
_MODEL_SECTIONS = _DATA_SECTIONS + ('model', 'training')
_ATTACK_SECTIONS = _MODEL_SECTIONS + ('attack',)
_EVALUATION_SECTIONS = _ATTACK_SECTIONS + ('classifier',)

# The config sections each artifact is derived from, keyed by the part of its name before any ':'.
ARTIFACT_SECTIONS = {
    'config': _DATA_SECTIONS,
    'dataset': _DATA_SECTIONS,
    'vocab': _DATA_SECTIONS,
    'checkpoint': _MODEL_SECTIONS,
    'training_log': _MODEL_SECTIONS,
    'features': _ATTACK_SECTIONS,
    'scores': _ATTACK_SECTIONS,
    'metrics': _EVALUATION_SECTIONS,
    'metrics_shuffled': _EVALUATION_SECTIONS,
    'roc': _EVALUATION_SECTIONS,
    'ablation': _EVALUATION_SECTIONS,
    'drift_report': _EVALUATION_SECTIONS,
    'drift_cdf': _EVALUATION_SECTIONS,
    'consistency': _ATTACK_SECTIONS + ('consistency',),
    'consistency_summary': _ATTACK_SECTIONS + ('consistency',),
}


class Run(object):
  """
  An ExperimentConfig bound to its output directory and manifest. Every
  artifact is registered with the hash of the config sections it is derived
  from, and reading it back under a config that differs there raises
  IntegrityError.
  """
  __slots__ = ('config', 'directory', 'manifest')

  def __init__(self, config):
    config.validate()
    self.config = config
    self.directory = config.output.directory
    self.manifest = RunManifest.load(self.directory)

  def __repr__(self):
    return 'Run({0!r})'.format(self.directory)

  def path(self, name):
    return os.path.join(self.directory, ARTIFACTS.get(name, name))

  def artifact_hash(self, name):
    return self.config.config_hash(ARTIFACT_SECTIONS[name.split(':', 1)[0]])

  def register(self, name, relpath=None):
    self.manifest.config_hash = self.config.config_hash()
    self.manifest.register(name, relpath or ARTIFACTS[name], self.artifact_hash(name))
    self.manifest.save()

  def verify(self, name):
    return self.manifest.verify(name, self.artifact_hash(name))

  @contextlib.contextmanager
  def write(self, name, relpath=None, binary=False):
    relpath = relpath or ARTIFACTS[name]
    with atomic_write(os.path.join(self.directory, relpath), binary=binary) as f:
      yield f
    self.register(name, relpath)

  def open(self, name):
    return io.open(self.verify(name), 'r', encoding='utf-8')

  def tokenizer(self):
    with self.open('vocab') as f:
      return corpus.Tokenizer(corpus.read_vocabulary(f))

  def samples(self, tokenizer=None):
    """The dataset records assigned to a split, in file order."""
    with self.open('dataset') as f:
      samples = corpus.read_dataset(f, tokenizer or self.tokenizer())
    return [s for s in samples if s.split is not None]

  def model(self, tokenizer, resuming=False):
    """The checkpointed model. A resumed run may raise training.epochs, so it checks only the checksum."""
    path = self.manifest.verify('checkpoint') if resuming else self.verify('checkpoint')
    with io.open(path, 'rb') as f:
      params, extra = lm.load_checkpoint(f)
    if extra.get('vocab_checksum') != tokenizer.vocab.checksum():
      raise IntegrityError('checkpoint was trained with a different vocabulary than {0}'.format(self.path('vocab')))
    return lm.TransformerLM(params), extra


def cmd_gen_data(run):
  """World, vocabulary and the balanced, split membership dataset."""
  c = run.config
  world = corpus.generate_world(c.corpus.seed, c.corpus.n_facts)
  tokenizer = corpus.Tokenizer.for_world(world)
  samples = corpus.build_membership_dataset(world, c.corpus.seed, c.corpus.n_members, c.corpus.n_nonmembers, c.corpus.future_fraction, tokenizer)
  splits = corpus.split(samples, c.split.fractions, c.split.seed, allow_empty=c.split.allow_empty)
  with run.write('config') as f:
    c.write(f)
  with run.write('vocab') as f:
    corpus.write_vocabulary(f, tokenizer.vocab)
  with run.write('dataset') as f:
    corpus.write_dataset(f, samples)
  log.info('wrote %d samples (vocabulary of %d) to %s', len(samples), len(tokenizer.vocab), run.path('dataset'))
  return splits


def _read_training_log(run, upto):
  if 'training_log' not in run.manifest:
    return []
  with io.open(run.manifest.verify('training_log'), 'r', encoding='utf-8') as f:
    _, _, rows = read_table(f, kind='training-log')
  return [(int(r['epoch']), float(r['mean_loss'])) for r in rows if int(r['epoch']) <= upto]


def _write_training_log(run, rows):
  with run.write('training_log') as f:
    write_table(f, 'training-log', ('epoch', 'mean_loss'), ({'epoch': e, 'mean_loss': l} for e, l in rows))


@requires_artifacts('dataset', 'vocab')
def cmd_train(run, resume=False):
  """
  Fine-tunes on member samples only (all of them, or the train split's with
  training.member_splits = train). With `resume`, continues the saved
  checkpoint up to training.epochs in total.
  """
  c = run.config
  tokenizer = run.tokenizer()
  samples = run.samples(tokenizer)
  members = [s for s in samples if s.is_member and (c.training.member_splits == 'all' or s.split == 'train')]
  n_nonmembers = sum(1 for s in samples if not s.is_member)
  log.info('training on %d member samples (%d non-members held out)', len(members), n_nonmembers)

  if resume:
    model, extra = run.model(tokenizer, resuming=True)
    params = model.params
    start = int(extra.get('epochs_completed', 0))
  else:
    config = lm.ModelConfig(len(tokenizer.vocab), c.model.model_dim, c.model.n_layers, c.model.n_heads, c.model.ffn_dim, c.model.max_seq_len, c.model.init_seed)
    params = lm.init_model(config, c.model.init_seed)
    start = 0
  history = _read_training_log(run, start) if resume else []
  remaining = c.training.epochs - start
  if remaining <= 0:
    log.info('checkpoint already has %d epochs; nothing to do', start)
    return None

  try:
    result = lm.train(params, members, remaining, c.training.lr, c.training.seed, start_epoch=start)
  except TrainingError as e:
    partial = getattr(e, 'training_log', None)
    done = partial.epoch_losses if partial is not None else []
    _write_training_log(run, history + [(start + i + 1, l) for i, l in enumerate(done)])
    raise

  history += [(start + i + 1, l) for i, l in enumerate(result.epoch_losses)]
  _write_training_log(run, history)
  memorised = result.final_loss < c.training.loss_threshold
  extra = {
      'epochs_completed': result.epochs_completed,
      'vocab_checksum': tokenizer.vocab.checksum(),
      'n_members': len(members),
      'n_nonmembers': n_nonmembers,
      'final_loss': result.final_loss,
      'memorised': memorised,
  }
  with run.write('checkpoint', binary=True) as f:
    lm.save_checkpoint(f, params, extra)
  if memorised:
    log.info('final mean member loss %.4f is below %.4f', result.final_loss, c.training.loss_threshold)
  else:
    log.warning('final mean member loss %.4f did not reach %.4f', result.final_loss, c.training.loss_threshold)
  return result


def attack_names(config):
  return [attacks.min_k_name(k) for k in config.attack.k_percents] + [attacks.PERPLEXITY, attacks.ZLIB, attacks.NEIGHBOUR]


def baseline_scores(model, sample, index, config):
  """One score per baseline attack, in attack_names order."""
  tokens = sample.sequence_tokens
  scores = [attacks.min_k_score(model, tokens, k, sample.sample_id) for k in config.attack.k_percents]
  scores.append(attacks.perplexity_score(model, tokens, sample.sample_id))
  scores.append(attacks.zlib_score(model, sample.prompt_text + ' ' + sample.answer_text, tokens, sample.sample_id))
  scores.append(attacks.neighbour_score(model, sample, config.attack.n_neighbours, [config.attack.neighbour_seed, index]))
  return scores


@requires_artifacts('dataset', 'vocab', 'checkpoint')
def cmd_extract(run):
  """Drift features and baseline scores for every split sample, in dataset order."""
  c = run.config
  tokenizer = run.tokenizer()
  samples = run.samples(tokenizer)
  model, _ = run.model(tokenizer)
  probe = attacks.make_probe(model.config.model_dim, c.attack.probe_seed)
  start = lm.checksum(model.params)

  feature_rows = []
  for sample, features in attacks.extract_features(model, samples, probe, c.attack.eta):
    row = collections.OrderedDict([('sample_id', sample.sample_id), ('label', sample.y)])
    row.update(zip(attacks.FEATURE_NAMES, features.as_vector().tolist()))
    feature_rows.append(row)

  names = attack_names(c)
  score_rows = []
  for i, sample in enumerate(samples):
    row = collections.OrderedDict([('sample_id', sample.sample_id), ('label', sample.y)])
    row.update((s.attack, s.score) for s in baseline_scores(model, sample, i, c))
    score_rows.append(row)
  if lm.checksum(model.params) != start:
    raise IntegrityError('model parameters changed during extraction')

  with run.write('features') as f:
    write_table(f, 'features', ('sample_id', 'label') + attacks.FEATURE_NAMES, feature_rows)
  with run.write('scores') as f:
    write_table(f, 'scores', ['sample_id', 'label'] + names, score_rows)
  log.info('extracted features and %d baseline scores for %d samples', len(names), len(samples))
  return feature_rows, score_rows


def _read_matrix(run, name, kind):
  with run.open(name) as f:
    _, header, rows = read_table(f, kind=kind)
  columns = header[2:]
  ids = [r['sample_id'] for r in rows]
  labels = np.array([int(r['label']) for r in rows])
  matrix = np.array([[float(r[c]) for c in columns] for r in rows], dtype=np.float64).reshape(len(rows), len(columns))
  return ids, labels, columns, matrix


def _splits_for(run, ids):
  with run.open('dataset') as f:
    _, _, rows = read_table(f, kind='dataset')
  split_of = dict((r['sample_id'], r['split']) for r in rows)
  missing = [i for i in ids if i not in split_of]
  if missing:
    raise IntegrityError('{0} table rows (e.g. {1}) are not in the dataset'.format(len(missing), missing[0]))
  return np.array([split_of[i] for i in ids])


def load_features(run):
  """(sample ids, labels, 7-column matrix, split names) from the feature table."""
  ids, labels, columns, matrix = _read_matrix(run, 'features', 'features')
  if tuple(columns) != attacks.FEATURE_NAMES:
    raise IntegrityError('feature table columns {0} are not the drift features'.format(columns))
  return ids, labels, matrix, _splits_for(run, ids)


def _classifier_kwargs(config):
  return {'seed': config.classifier.seed, 'lambda_grid': config.classifier.lambda_grid, 'folds': config.classifier.folds}


def _baseline_result(scores, labels, split):
  val, test = split == 'validation', split == 'test'
  threshold = classify.choose_threshold(scores[val], labels[val]) if val.any() else float(np.median(scores[split == 'train']))
  curve, auc = classify.roc_auc(scores[test], labels[test])
  return curve, auc, threshold, classify.rates(scores[test], labels[test], threshold)


def _shuffle_within_splits(labels, split, seed):
  """Permutes labels inside each split, so every split keeps its class counts."""
  rng = np.random.RandomState([seed, 1])
  shuffled = labels.copy()
  for name in corpus.SPLIT_NAMES:
    rows = np.flatnonzero(split == name)
    shuffled[rows] = labels[rows[rng.permutation(rows.shape[0])]]
  return shuffled


@requires_artifacts('dataset', 'features', 'scores')
def cmd_evaluate(run, shuffle_labels=False):
  """
  Test-split comparison of G-Drift against every baseline. With
  `shuffle_labels`, labels are permuted before anything is fitted (a null
  control) and the report goes to metrics_shuffled.tsv.
  """
  c = run.config
  ids, labels, features, split = load_features(run)
  score_ids, score_labels, names, scores = _read_matrix(run, 'scores', 'scores')
  if score_ids != ids or not np.array_equal(score_labels, labels):
    raise IntegrityError('feature and score tables do not list the same samples')
  if shuffle_labels:
    labels = _shuffle_within_splits(labels, split, c.classifier.seed)

  results = collections.OrderedDict()
  gd = classify.run_pipeline(features, labels, split, **_classifier_kwargs(c))
  results[attacks.GDRIFT] = (gd.curve, gd.auc, gd.threshold, gd.metrics)
  for j, name in enumerate(names):
    results[name] = _baseline_result(scores[:, j], labels, split)
  for name, (_, auc, _, _) in six.iteritems(results):
    log.info('%s: test AUC %.4f', name, auc)

  target = 'metrics_shuffled' if shuffle_labels else 'metrics'
  with run.write(target) as f:
    reports.write_metrics(f, results)
  if not shuffle_labels:
    for name, (curve, _, _, _) in six.iteritems(results):
      with run.write('roc:' + name, reports.roc_filename(name)) as f:
        reports.write_roc(f, curve)
  return results


@requires_artifacts('dataset', 'features')
def cmd_ablate(run, specs=classify.ABLATION_SPECS):
  _, labels, features, split = load_features(run)
  results = classify.run_ablation(features, labels, specs, split, **_classifier_kwargs(run.config))
  table = collections.OrderedDict((spec.name, (spec, results[spec.name])) for spec in specs)
  with run.write('ablation') as f:
    reports.write_ablation(f, table)
  return table


@requires_artifacts('dataset', 'features')
def cmd_drift_report(run):
  _, labels, features, split = load_features(run)
  summary, cdf = reports.drift_statistics(features, labels, split, **_classifier_kwargs(run.config))
  with atomic_write(run.path('drift_cdf')) as cdf_f:
    with run.write('drift_report') as f:
      reports.write_drift(f, cdf_f, summary, cdf)
  run.register('drift_cdf')
  return summary, cdf


def _consistency_facts(run, world, samples, fact_ids):
  counterfactuals = dict((s.fact_id, s.answer_text) for s in samples if s.origin == corpus.COUNTERFACTUAL)
  if not fact_ids:
    seen = collections.OrderedDict()
    for s in samples:
      if s.is_member:
        seen.setdefault(s.fact_id, None)
    fact_ids = list(seen)[:run.config.consistency.n_facts]
  facts = []
  for i, fact_id in enumerate(fact_ids):
    fact = world.fact(fact_id)
    wrong = counterfactuals.get(fact_id)
    if wrong is None:
      domain = [o for o in world.domain(fact.relation) if o != fact.object]
      wrong = domain[np.random.RandomState([run.config.corpus.seed, i]).randint(len(domain))]
    facts.append((fact, wrong))
  return facts


@requires_artifacts('dataset', 'vocab', 'checkpoint')
def cmd_consistency(run, fact_ids=None, k=None):
  """
  Projection drift across paraphrases of the same question: each fact with its
  true answer (member) and its counterfactual answer (non-member), on the one
  trained model.
  """
  c = run.config
  k = k or c.consistency.k
  world = corpus.generate_world(c.corpus.seed, c.corpus.n_facts)
  tokenizer = run.tokenizer()
  if corpus.Tokenizer.for_world(world).vocab != tokenizer.vocab:
    raise IntegrityError('the configured world does not reproduce the stored vocabulary')
  model, _ = run.model(tokenizer)
  probe = attacks.make_probe(model.config.model_dim, c.attack.probe_seed)

  rows = []
  for fact, wrong in _consistency_facts(run, world, run.samples(tokenizer), fact_ids):
    for cls, answer in (('member', None), ('nonmember', wrong)):
      for sample in corpus.paraphrase_set(fact, k, tokenizer, answer=answer):
        f = attacks.gdrift_features(model, sample, probe, c.attack.eta)
        rows.append({'fact_id': fact.fact_id, 'prompt': sample.prompt_text, 'answer': sample.answer_text, 'class': cls,
                     'alpha_before': f.proj_before, 'alpha_after': f.proj_after, 'abs_delta_alpha': f.abs_proj_delta})
  with atomic_write(run.path('consistency_summary')) as summary_f:
    with run.write('consistency') as f:
      reports.write_consistency(f, summary_f, rows)
  run.register('consistency_summary')
  return rows


def run_all(run):
  cmd_gen_data(run)
  cmd_train(run)
  cmd_extract(run)
  results = cmd_evaluate(run)
  cmd_ablate(run)
  cmd_drift_report(run)
  cmd_consistency(run)
  return results
