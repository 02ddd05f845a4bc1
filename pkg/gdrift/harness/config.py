# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Experiment configuration: sections of typed options declared on classes,
read from a versioned INI file and overridable as `--<section>-<name>` on the
command line.
"""
from __future__ import absolute_import, print_function, unicode_literals
import collections
import hashlib
import io
import itertools

import six
from six.moves import configparser

from ..exceptions import InputError

__all__ = ['CONFIG_VERSION', 'ExperimentConfig', 'Option', 'Section']

CONFIG_VERSION = 1
META_SECTION = 'meta'


def _parse_floats(text):
  if isinstance(text, (list, tuple)):
    return [float(x) for x in text]
  return [float(x) for x in six.text_type(text).split(',') if x.strip()]


def _render(value):
  if isinstance(value, (list, tuple)):
    return ','.join(_render(v) for v in value)
  if isinstance(value, float):
    return repr(value)
  return six.text_type(value)


class Option(object):
  """A typed configuration value with a default and help text."""
  __slots__ = ('parse', 'default', 'help', 'is_seed', 'choices', 'check', 'name', '_order')
  _counter = itertools.count()

  def __init__(self, parse, default=None, help='', is_seed=False, choices=None, check=None):
    self.parse = parse
    self.default = default
    self.help = help
    self.is_seed = is_seed
    self.choices = choices
    self.check = check
    self.name = None
    self._order = next(Option._counter)

  def __repr__(self):
    return 'Option({0!r}, default={1!r})'.format(self.name, self.default)

  def coerce(self, section, value):
    if value is None:
      return None
    try:
      value = self.parse(value)
    except (TypeError, ValueError):
      raise InputError('{0}.{1}: cannot parse {2!r}'.format(section, self.name, value))
    if self.choices is not None and value not in self.choices:
      raise InputError('{0}.{1}: {2!r} is not one of {3}'.format(section, self.name, value, ', '.join(self.choices)))
    if self.check is not None and not self.check(value):
      raise InputError('{0}.{1}: {2!r} is out of range'.format(section, self.name, value))
    return value


class MetaSection(type):
  """Collects the Option attributes of a Section class, in declaration order."""

  def __new__(mklass, klass_name, bases, attrs):
    options = {}
    for base in bases:
      options.update(getattr(base, '_options', {}))
    for name, attr in list(six.iteritems(attrs)):
      if isinstance(attr, Option):
        attr.name = name
        options[name] = attr
        del attrs[name]
    klass = super(MetaSection, mklass).__new__(mklass, klass_name, bases, attrs)
    klass._options = collections.OrderedDict(sorted(six.iteritems(options), key=lambda kv: kv[1]._order))
    return klass


@six.add_metaclass(MetaSection)
class Section(object):
  name = None
  help = ''

  def __init__(self, **values):
    for key, option in six.iteritems(self._options):
      setattr(self, key, option.default)
    self.update(values)

  def __repr__(self):
    return '{0}({1})'.format(type(self).__name__, ', '.join('{0}={1!r}'.format(k, v) for k, v in self.items()))

  def __eq__(self, other):
    return type(self) is type(other) and list(self.items()) == list(other.items())

  def __ne__(self, other):
    return not self == other

  __hash__ = None

  @classmethod
  def options(cls):
    return cls._options

  def items(self):
    for key in self._options:
      yield key, getattr(self, key)

  def update(self, values):
    for key, value in six.iteritems(values):
      if key not in self._options:
        raise InputError('unknown option {0}.{1}'.format(self.name, key))
      setattr(self, key, self._options[key].coerce(self.name, value))

  def seeds(self):
    return [key for key, option in six.iteritems(self._options) if option.is_seed]


def _positive(x):
  return x > 0


def _fraction(x):
  return 0.0 <= x <= 1.0


class CorpusSection(Section):
  name = 'corpus'
  help = 'synthetic world and membership dataset'
  seed = Option(int, is_seed=True, help='world and dataset seed')
  n_facts = Option(int, 780, 'facts in the world', check=lambda x: x >= 4)
  n_members = Option(int, 500, 'member samples', check=_positive)
  n_nonmembers = Option(int, 500, 'non-member samples', check=lambda x: x >= 0)
  future_fraction = Option(float, 0.5, 'share of non-members that are future facts (the rest are counterfactuals)', check=_fraction)


class ModelSection(Section):
  name = 'model'
  help = 'target transformer'
  model_dim = Option(int, 64, 'residual width d', check=_positive)
  n_layers = Option(int, 2, 'transformer blocks', check=_positive)
  n_heads = Option(int, 4, 'attention heads', check=_positive)
  ffn_dim = Option(int, 128, 'feed-forward width', check=_positive)
  max_seq_len = Option(int, 32, 'longest sequence the model accepts', check=_positive)
  init_seed = Option(int, is_seed=True, help='parameter initialisation seed')


class TrainingSection(Section):
  name = 'training'
  help = 'fine-tuning on the members'
  epochs = Option(int, 50, 'total training epochs', check=_positive)
  lr = Option(float, 0.05, 'SGD learning rate', check=_positive)
  seed = Option(int, is_seed=True, help='epoch shuffle seed')
  member_splits = Option(six.text_type, 'all', 'which members to fine-tune on', choices=('all', 'train'))
  loss_threshold = Option(float, 0.5, 'final mean member loss counted as memorised', check=_positive)


class AttackSection(Section):
  name = 'attack'
  help = 'gradient drift and baseline attacks'
  eta = Option(float, 0.01, 'ascent step size', check=_positive)
  probe_seed = Option(int, is_seed=True, help='probe direction seed')
  k_percents = Option(_parse_floats, [20.0], 'Min-k% percentages (comma separated)', check=lambda ks: bool(ks) and all(0 < k <= 100 for k in ks))
  n_neighbours = Option(int, 25, 'neighbours per sample', check=_positive)
  neighbour_seed = Option(int, is_seed=True, help='neighbour generation seed')


class SplitSection(Section):
  name = 'split'
  help = 'train/validation/test fractions'
  train = Option(float, 0.7, 'train fraction', check=_fraction)
  validation = Option(float, 0.1, 'validation fraction', check=_fraction)
  test = Option(float, 0.2, 'test fraction', check=_fraction)
  seed = Option(int, is_seed=True, help='split shuffle seed')
  allow_empty = Option(lambda x: x if isinstance(x, bool) else six.text_type(x).lower() in ('1', 'true', 'yes'), False, 'permit empty splits')

  @property
  def fractions(self):
    return (self.train, self.validation, self.test)


class ClassifierSection(Section):
  name = 'classifier'
  help = 'logistic regression'
  lambda_grid = Option(_parse_floats, [0.0, 1e-4, 1e-3, 1e-2, 1e-1], 'L2 penalties tried (comma separated)', check=lambda ls: bool(ls) and all(l >= 0 for l in ls))
  folds = Option(int, 5, 'cross-validation folds', check=lambda x: x >= 2)
  seed = Option(int, is_seed=True, help='fold assignment and label-shuffle seed')


class ConsistencySection(Section):
  name = 'consistency'
  help = 'paraphrase drift consistency'
  n_facts = Option(int, 10, 'member facts examined when none are named', check=_positive)
  k = Option(int, 3, 'paraphrases per fact', check=_positive)


class OutputSection(Section):
  name = 'output'
  help = 'artifacts'
  directory = Option(six.text_type, 'gdrift-run', 'directory holding every artifact')


class ExperimentConfig(object):
  SECTIONS = (CorpusSection, ModelSection, TrainingSection, AttackSection, SplitSection, ClassifierSection, ConsistencySection, OutputSection)

  def __init__(self):
    self.sections = collections.OrderedDict((klass.name, klass()) for klass in self.SECTIONS)

  def __getattr__(self, name):
    sections = self.__dict__.get('sections', {})
    if name in sections:
      return sections[name]
    raise AttributeError(name)

  def __repr__(self):
    return 'ExperimentConfig(hash={0})'.format(self.config_hash()[:12])

  def __eq__(self, other):
    return isinstance(other, ExperimentConfig) and self.render() == other.render()

  def __ne__(self, other):
    return not self == other

  __hash__ = None

  def update(self, values):
    """`values` maps section name to a dict of option values."""
    for section, items in six.iteritems(values):
      if section not in self.sections:
        raise InputError('unknown config section {0!r}'.format(section))
      self.sections[section].update(items)

  def unset_seeds(self):
    return ['{0}.{1}'.format(s.name, k) for s in six.itervalues(self.sections) for k in s.seeds() if getattr(s, k) is None]

  def fill_seeds(self, seed):
    """Sets every seed not already given."""
    for section in six.itervalues(self.sections):
      for key in section.seeds():
        if getattr(section, key) is None:
          setattr(section, key, int(seed))

  def validate(self):
    unset = self.unset_seeds()
    if unset:
      raise InputError('seeds not set: {0} (pass --seed or set them in the config file)'.format(', '.join(unset)))
    if abs(sum(self.split.fractions) - 1.0) > 1e-9:
      raise InputError('split fractions {0!r} do not sum to 1'.format(self.split.fractions))
    if self.model.model_dim % self.model.n_heads:
      raise InputError('model_dim {0} is not divisible by n_heads {1}'.format(self.model.model_dim, self.model.n_heads))
    return self

  def render(self, sections=None):
    """Canonical INI text; what config_hash digests and what `write` stores. `sections` restricts it to those names."""
    if sections is not None:
      unknown = [s for s in sections if s not in self.sections]
      if unknown:
        raise InputError('unknown config sections {0!r}'.format(unknown))
    out = io.StringIO()
    out.write('[{0}]\nversion = {1}\n'.format(META_SECTION, CONFIG_VERSION))
    for name, section in six.iteritems(self.sections):
      if sections is not None and name not in sections:
        continue
      out.write('\n[{0}]\n'.format(name))
      for key, value in section.items():
        if value is not None:
          out.write('{0} = {1}\n'.format(key, _render(value)))
    return out.getvalue()

  def config_hash(self, sections=None):
    return hashlib.sha256(self.render(sections).encode('utf-8')).hexdigest()

  def write(self, ostream):
    ostream.write(self.render())

  @classmethod
  def read(cls, istream):
    parser = configparser.RawConfigParser()
    parser.optionxform = str
    try:
      parser.read_file(istream)
    except configparser.Error as e:
      raise InputError('malformed config file: {0}'.format(e))
    if not parser.has_section(META_SECTION) or not parser.has_option(META_SECTION, 'version'):
      raise InputError('config file lacks [{0}] version'.format(META_SECTION))
    version = parser.get(META_SECTION, 'version')
    if version != six.text_type(CONFIG_VERSION):
      raise InputError('config file version {0} but I can read {1}'.format(version, CONFIG_VERSION))
    config = cls()
    for name in parser.sections():
      if name != META_SECTION:
        config.update({name: dict(parser.items(name))})
    return config

  def add_to_argparse(self, parser):
    """One `--<section>-<name>` flag per option, each defaulting to "not given"."""
    for name, section in six.iteritems(self.sections):
      group = parser.add_argument_group(name, section.help)
      for key, option in six.iteritems(section.options()):
        flag = '--{0}-{1}'.format(name, key).replace('_', '-')
        group.add_argument(flag, dest='{0}__{1}'.format(name, key), default=None, metavar=key.upper(), help='{0} (default: {1})'.format(option.help.replace('%', '%%'), _render(option.default) if option.default is not None else 'from --seed'))

  def update_from_args(self, args):
    overrides = collections.defaultdict(dict)
    for dest, value in six.iteritems(vars(args)):
      if '__' in dest and value is not None:
        section, key = dest.split('__', 1)
        if section in self.sections:
          overrides[section][key] = value
    self.update(overrides)
