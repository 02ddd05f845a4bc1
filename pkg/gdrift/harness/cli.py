# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Command-line entry point:

  gdrift [-v|-q] <command> [--config FILE] [--seed N] [--<section>-<name> VALUE ...]

Commands other than gen-data and run-all start from the config.ini that
gen-data stored in the output directory, unless --config names another file.
"""
from __future__ import absolute_import, print_function, unicode_literals
import argparse
import io
import logging
import os
import sys

from .. import __version__
from ..exceptions import GDriftException
from . import commands
from .config import ExperimentConfig

__all__ = ['build_parser', 'load_config', 'main']

log = logging.getLogger(__name__)

COMMANDS = (
    ('gen-data', 'generate the world, vocabulary and membership dataset'),
    ('train', 'fine-tune the target model on the members'),
    ('extract', 'drift features and baseline scores for every sample'),
    ('evaluate', 'test-split AUC of G-Drift and every baseline'),
    ('ablate', 'feature ablation table'),
    ('drift-report', 'per-class drift statistics and CDFs'),
    ('consistency', 'projection drift across paraphrases'),
    ('run-all', 'every stage in order'),
)
FRESH_COMMANDS = ('gen-data', 'run-all')


def _common_parser():
  parser = argparse.ArgumentParser(add_help=False)
  parser.add_argument('--config', metavar='FILE', help='experiment config file (INI, [meta] version = 1)')
  ExperimentConfig().add_to_argparse(parser)
  return parser


def build_parser():
  parser = argparse.ArgumentParser(prog='gdrift', description='Gradient-drift membership inference auditing on a desk-scale language model.')
  parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
  verbosity = parser.add_mutually_exclusive_group()
  verbosity.add_argument('-v', '--verbose', action='store_true', help='debug logging')
  verbosity.add_argument('-q', '--quiet', action='store_true', help='warnings and errors only')
  common = _common_parser()
  subparsers = parser.add_subparsers(dest='command', metavar='command')
  subparsers.required = True
  for name, help in COMMANDS:
    sub = subparsers.add_parser(name, help=help, parents=[common])
    sub.add_argument('--seed', type=int, required=(name == 'run-all'), help='value for every seed not given explicitly' + (' (required)' if name == 'run-all' else ''))
    if name == 'train':
      sub.add_argument('--resume', action='store_true', help='continue the saved checkpoint up to --training-epochs')
    elif name == 'evaluate':
      sub.add_argument('--shuffle-labels', action='store_true', help='permute membership labels before fitting (null control)')
    elif name == 'consistency':
      sub.add_argument('--facts', metavar='IDS', help='comma-separated fact ids (default: the first --consistency-n-facts member facts)')
  return parser


def load_config(args):
  if args.config:
    with io.open(args.config, encoding='utf-8') as f:
      config = ExperimentConfig.read(f)
  else:
    config = ExperimentConfig()
    directory = args.output__directory or config.output.directory
    stored = os.path.join(directory, commands.ARTIFACTS['config'])
    if args.command not in FRESH_COMMANDS and os.path.exists(stored):
      with io.open(stored, encoding='utf-8') as f:
        config = ExperimentConfig.read(f)
  config.update_from_args(args)
  if args.seed is not None:
    config.fill_seeds(args.seed)
  return config


def _dispatch(args, run):
  if args.command == 'gen-data':
    return commands.cmd_gen_data(run)
  if args.command == 'train':
    return commands.cmd_train(run, resume=args.resume)
  if args.command == 'extract':
    return commands.cmd_extract(run)
  if args.command == 'evaluate':
    return commands.cmd_evaluate(run, shuffle_labels=args.shuffle_labels)
  if args.command == 'ablate':
    return commands.cmd_ablate(run)
  if args.command == 'drift-report':
    return commands.cmd_drift_report(run)
  if args.command == 'consistency':
    facts = [f.strip() for f in args.facts.split(',') if f.strip()] if args.facts else None
    return commands.cmd_consistency(run, facts)
  return commands.run_all(run)


def main(argv=None):
  args = build_parser().parse_args(argv)
  level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
  logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')
  try:
    run = commands.Run(load_config(args))
    _dispatch(args, run)
  except (GDriftException, EnvironmentError) as e:
    print('gdrift: error: {0}'.format(e), file=sys.stderr)
    return 1
  return 0


if __name__ == '__main__':
  sys.exit(main())
