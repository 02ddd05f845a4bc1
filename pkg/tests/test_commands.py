# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
import collections
import io
import os
import unittest

from gdrift import classify, lm
from gdrift.exceptions import IntegrityError
from gdrift.harness import commands
from gdrift.harness.cli import main
from gdrift.tables import read_table

from testutils import small_experiment, temp_dir


def _table(run, name, kind=None):
  with run.open(name) as f:
    return read_table(f, kind)


def _checkpoint(run):
  with io.open(run.manifest.verify('checkpoint'), 'rb') as f:
    return lm.load_checkpoint(f)


class PipelineTest(unittest.TestCase):
  """Every stage once over a tiny run directory."""

  @classmethod
  def setUpClass(cls):
    cls._tmp = temp_dir()
    cls.directory = cls._tmp.__enter__()
    cls.exp_run = commands.Run(small_experiment(cls.directory))
    cls.results = commands.run_all(cls.exp_run)

  @classmethod
  def tearDownClass(cls):
    cls._tmp.__exit__(None, None, None)

  def test_manifest(self):
    for name in commands.ARTIFACTS:
      if name != 'metrics_shuffled':
        self.assertIn(name, self.exp_run.manifest)
        self.exp_run.manifest.verify(name)
    self.assertIn('roc:G-Drift', self.exp_run.manifest)

  def test_dataset(self):
    _, header, rows = _table(self.exp_run, 'dataset', 'dataset')
    self.assertEqual(header, ['sample_id', 'split', 'label', 'origin', 'fact_id', 'template_id', 'prompt', 'answer'])
    self.assertEqual(len(rows), 40)

  def test_split_audit(self):
    _, _, rows = _table(self.exp_run, 'dataset', 'dataset')
    counts = collections.Counter((r['split'], r['label']) for r in rows)
    self.assertEqual(counts, {('train', 'member'): 14, ('train', 'nonmember'): 14, ('validation', 'member'): 2,
                              ('validation', 'nonmember'): 2, ('test', 'member'): 4, ('test', 'nonmember'): 4})
    where = collections.defaultdict(set)
    for r in rows:
      where[r['fact_id']].add(r['split'])
    self.assertTrue(all(len(s) == 1 for s in where.values()))

  def test_training(self):
    _, _, rows = _table(self.exp_run, 'training_log', 'training-log')
    self.assertEqual([int(r['epoch']) for r in rows], [1, 2])
    params, extra = _checkpoint(self.exp_run)
    self.assertEqual(extra['epochs_completed'], 2)
    self.assertEqual(extra['n_members'], 20)
    self.assertEqual(extra['n_nonmembers'], 20)
    self.assertEqual(extra['vocab_checksum'], self.exp_run.tokenizer().vocab.checksum())
    self.assertEqual(params.config.model_dim, 8)

  def test_features_and_scores(self):
    _, header, rows = _table(self.exp_run, 'features', 'features')
    self.assertEqual(header[:2], ['sample_id', 'label'])
    self.assertEqual(len(header), 9)
    self.assertEqual(len(rows), 40)
    _, header, score_rows = _table(self.exp_run, 'scores', 'scores')
    self.assertEqual(header[2:], commands.attack_names(self.exp_run.config))
    self.assertEqual([r['sample_id'] for r in score_rows], [r['sample_id'] for r in rows])

  def test_metrics(self):
    _, _, rows = _table(self.exp_run, 'metrics', 'metrics')
    self.assertEqual([r['attack'] for r in rows], ['G-Drift', 'Min-k% (k=20)', 'Min-k% (k=50)', 'Perplexity-PL', 'Zlib', 'Neighbour-MIA'])
    for r in rows:
      self.assertTrue(0.0 <= float(r['auc']) <= 1.0)
    self.assertEqual(list(self.results), [r['attack'] for r in rows])

  def test_ablation(self):
    _, _, rows = _table(self.exp_run, 'ablation', 'ablation')
    self.assertEqual([r['spec'] for r in rows], [s.name for s in classify.ABLATION_SPECS])

  def test_ablation_all_matches_evaluate(self):
    _, _, metrics = _table(self.exp_run, 'metrics', 'metrics')
    _, _, ablation = _table(self.exp_run, 'ablation', 'ablation')
    gdrift = [r['auc'] for r in metrics if r['attack'] == 'G-Drift']
    everything = [r['auc'] for r in ablation if r['spec'] == 'all']
    self.assertEqual(len(gdrift), 1)
    self.assertEqual(gdrift, everything)
    self.assertEqual(self.results['G-Drift'][1], commands.cmd_ablate(self.exp_run)['all'][1].auc)

  def test_drift_report(self):
    _, _, rows = _table(self.exp_run, 'drift_report', 'drift-report')
    self.assertEqual([r['quantity'] for r in rows], ['loss_delta', 'logit_delta', 'proj_delta', 'abs_proj_delta', 'hidden_drift'])
    _, _, points = _table(self.exp_run, 'drift_cdf', 'drift-cdf')
    self.assertTrue(points)

  def test_consistency(self):
    _, _, rows = _table(self.exp_run, 'consistency', 'consistency')
    self.assertEqual(len(rows), 2 * 2 * 3)
    _, _, summary = _table(self.exp_run, 'consistency_summary', 'consistency-summary')
    self.assertEqual(len(summary), 4)
    self.assertTrue(all(r['n_prompts'] == '3' for r in summary))

  def test_extraction_leaves_checkpoint(self):
    before = self.exp_run.manifest.artifacts['checkpoint'].sha256
    commands.cmd_extract(self.exp_run)
    self.assertEqual(self.exp_run.manifest.artifacts['checkpoint'].sha256, before)

  def test_shuffled_control(self):
    commands.cmd_evaluate(self.exp_run, shuffle_labels=True)
    _, _, rows = _table(self.exp_run, 'metrics_shuffled', 'metrics')
    self.assertEqual(len(rows), 6)


class StageOrderTest(unittest.TestCase):
  def test_missing_inputs(self):
    with temp_dir() as d:
      run = commands.Run(small_experiment(d))
      with self.assertRaises(IntegrityError):
        commands.cmd_train(run)
      with self.assertRaises(IntegrityError):
        commands.cmd_evaluate(run)

  def test_tampered_input(self):
    with temp_dir() as d:
      run = commands.Run(small_experiment(d))
      commands.cmd_gen_data(run)
      with io.open(run.path('dataset'), 'a', encoding='utf-8') as f:
        f.write('\n')
      with self.assertRaises(IntegrityError):
        commands.cmd_train(run)

  def test_every_artifact_has_config_sections(self):
    self.assertEqual(set(commands.ARTIFACTS) - set(commands.ARTIFACT_SECTIONS), set())
    run = commands.Run(small_experiment('unused'))
    self.assertEqual(run.artifact_hash('roc:G-Drift'), run.artifact_hash('metrics'))
    self.assertNotEqual(run.artifact_hash('dataset'), run.artifact_hash('checkpoint'))

  def test_changed_config_is_refused(self):
    with temp_dir() as d:
      run = commands.Run(small_experiment(d))
      commands.cmd_gen_data(run)
      commands.cmd_train(run)
      commands.cmd_extract(run)

      config = small_experiment(d)
      config.update({'corpus': {'future_fraction': 0.25}})
      with self.assertRaises(IntegrityError):
        commands.cmd_train(commands.Run(config))
      config = small_experiment(d)
      config.update({'training': {'lr': 0.01}})
      with self.assertRaises(IntegrityError):
        commands.cmd_extract(commands.Run(config))
      config = small_experiment(d)
      config.update({'attack': {'eta': 0.02}})
      with self.assertRaises(IntegrityError):
        commands.cmd_evaluate(commands.Run(config))

      config = small_experiment(d)
      config.update({'classifier': {'folds': 3}})
      commands.cmd_evaluate(commands.Run(config))

  def test_resume_matches_straight_run(self):
    with temp_dir() as a, temp_dir() as b:
      straight = commands.Run(small_experiment(a))
      commands.cmd_gen_data(straight)
      commands.cmd_train(straight)

      config = small_experiment(b)
      config.update({'training': {'epochs': 1}})
      first = commands.Run(config)
      commands.cmd_gen_data(first)
      commands.cmd_train(first)
      config.update({'training': {'epochs': 2}})
      resumed = commands.Run(config)
      commands.cmd_train(resumed, resume=True)

      params_a, extra_a = _checkpoint(straight)
      params_b, extra_b = _checkpoint(resumed)
      self.assertEqual(lm.checksum(params_a), lm.checksum(params_b))
      self.assertEqual(extra_b['epochs_completed'], 2)
      self.assertEqual(_table(straight, 'training_log')[2], _table(resumed, 'training_log')[2])


class CliTest(unittest.TestCase):
  def test_missing_seed_is_an_error(self):
    with temp_dir() as d:
      self.assertEqual(main(['-q', 'train', '--output-directory', d]), 1)

  def test_stages_share_the_stored_config(self):
    with temp_dir() as d:
      path = os.path.join(d, 'experiment.ini')
      with io.open(path, 'w', encoding='utf-8') as f:
        small_experiment(os.path.join(d, 'run')).write(f)
      self.assertEqual(main(['-q', 'gen-data', '--config', path]), 0)
      self.assertEqual(main(['-q', 'train', '--output-directory', os.path.join(d, 'run'), '--training-epochs', '1']), 0)
      self.assertTrue(os.path.exists(os.path.join(d, 'run', 'checkpoint.ckpt')))
      self.assertTrue(os.path.exists(os.path.join(d, 'run', 'training_log.tsv')))


class DeterminismTest(unittest.TestCase):
  def test_same_seed_same_reports(self):
    outputs = []
    with temp_dir() as a, temp_dir() as b:
      for d in (a, b):
        commands.run_all(commands.Run(small_experiment(d, seed=7)))
        with io.open(os.path.join(d, 'metrics.tsv'), 'rb') as f:
          outputs.append(f.read())
    self.assertEqual(outputs[0], outputs[1])
