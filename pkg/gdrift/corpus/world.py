# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
A seeded synthetic world of (subject, relation, object) facts in three
families: capital-style country facts, world facts about landmarks, and
author biographies. Subjects and most objects are invented names so that no
fact can be known to a model before fine-tuning.
"""
from __future__ import absolute_import, print_function, unicode_literals
import collections
import logging
import math

import numpy as np
import six
from six.moves import xrange

from ..exceptions import InputError

__all__ = ['COUNTRY', 'AUTHOR', 'LANDMARK', 'Fact', 'RELATIONS', 'Relation', 'World', 'generate_world', 'render_qa']

log = logging.getLogger(__name__)

COUNTRY = 'country'
AUTHOR = 'author'
LANDMARK = 'landmark'
KINDS = (COUNTRY, AUTHOR, LANDMARK)

CAPITAL_FAMILY = 'capital'
WORLD_FAMILY = 'world'
AUTHOR_FAMILY = 'author'


class Relation(object):
  __slots__ = ('name', 'family', 'subject_kind', 'domain', 'templates')

  def __init__(self, name, family, subject_kind, domain, templates):
    self.name = name
    self.family = family
    self.subject_kind = subject_kind
    self.domain = domain  # key into World.domains
    self.templates = tuple(templates)

  def __repr__(self):
    return 'Relation({0!r}, templates={1})'.format(self.name, len(self.templates))


def _relations(*relations):
  return collections.OrderedDict((r.name, r) for r in relations)


RELATIONS = _relations(
    Relation('capital', CAPITAL_FAMILY, COUNTRY, 'city', (
        'Q: What is the capital of {S}? A:',
        'Q: Which city is the capital of {S}? A:',
        'Q: The capital city of {S} is called what? A:')),
    Relation('language', WORLD_FAMILY, COUNTRY, 'language', (
        'Q: What language is spoken in {S}? A:',
        'Q: Which language do people in {S} speak? A:',
        'Q: The main language of {S} is what? A:')),
    Relation('currency', WORLD_FAMILY, COUNTRY, 'currency', (
        'Q: What is the currency of {S}? A:',
        'Q: Which currency is used in {S}? A:',
        'Q: People in {S} pay with which currency? A:')),
    Relation('dish', WORLD_FAMILY, COUNTRY, 'dish', (
        'Q: What is the national dish of {S}? A:',
        'Q: Which dish is {S} famous for? A:',
        'Q: The best known food of {S} is what? A:')),
    Relation('largest_city', CAPITAL_FAMILY, COUNTRY, 'city', (
        'Q: What is the largest city in {S}? A:',
        'Q: Which city in {S} has the most people? A:',
        'Q: The biggest city of {S} is called what? A:')),
    Relation('located_in', WORLD_FAMILY, LANDMARK, 'city', (
        'Q: Where would you find the {S}? A:',
        'Q: The {S} is located in which city? A:',
        'Q: Which city is home to the {S}? A:')),
    Relation('built_century', WORLD_FAMILY, LANDMARK, 'century', (
        'Q: In which century was the {S} built? A:',
        'Q: When was the {S} built? A: In the',
        'Q: The {S} dates from which century? A:')),
    Relation('architect', WORLD_FAMILY, LANDMARK, AUTHOR, (
        'Q: Who designed the {S}? A:',
        'Q: Which architect planned the {S}? A:',
        'Q: The {S} was designed by whom? A:')),
    Relation('birthplace', AUTHOR_FAMILY, AUTHOR, 'city', (
        'Q: Where was the author {S} born? A:',
        'Q: In which city was {S} born? A:',
        'Q: The writer {S} was born in which city? A:')),
    Relation('genre', AUTHOR_FAMILY, AUTHOR, 'genre', (
        'Q: What genre does {S} write? A:',
        'Q: Which genre is {S} known for? A:',
        'Q: The author {S} writes in which genre? A:')),
    Relation('debut', AUTHOR_FAMILY, AUTHOR, 'title', (
        'Q: What was the first novel by {S}? A:',
        'Q: Which book was the debut of {S}? A:',
        'Q: The author {S} first published which novel? A:')),
    Relation('prize', AUTHOR_FAMILY, AUTHOR, 'prize', (
        'Q: Which prize did {S} win? A:',
        'Q: What award was given to {S}? A:',
        'Q: The writer {S} received which prize? A:')),
    Relation('nationality', AUTHOR_FAMILY, AUTHOR, COUNTRY, (
        'Q: What is the home country of {S}? A:',
        'Q: Which country is the author {S} from? A:',
        'Q: The writer {S} is a citizen of which country? A:')),
)

_ONSETS = ('b', 'd', 'f', 'g', 'k', 'l', 'm', 'n', 'p', 'r', 's', 't', 'v', 'z', 'br', 'dr', 'tr', 'kl', 'st', 'th')
_VOWELS = ('a', 'e', 'i', 'o', 'u', 'ai', 'ou')
_CODAS = ('', '', 'n', 'r', 'l', 's')
_SUFFIXES = {
    COUNTRY: ('ia', 'or', 'and', 'istan'),
    'city': ('ton', 'burg', 'mouth', 'ford', ''),
    'language': ('ese', 'ic', 'ish', 'ian'),
    'title': ('', 'a', 'en'),
}
_LANDMARK_NOUNS = ('Tower', 'Bridge', 'Gate', 'Temple')
_FIXED_DOMAINS = {
    'currency': ('crown', 'mark', 'florin', 'ducat', 'dinar', 'peso', 'franc', 'lira', 'rand', 'shilling', 'taler', 'guilder'),
    'dish': ('stew', 'dumplings', 'flatbread', 'porridge', 'noodles', 'pie', 'curry', 'chowder', 'pancakes', 'sausage', 'risotto', 'goulash'),
    'century': ('tenth', 'eleventh', 'twelfth', 'thirteenth', 'fourteenth', 'fifteenth', 'sixteenth', 'seventeenth', 'eighteenth', 'nineteenth'),
    'genre': ('poetry', 'mystery', 'romance', 'satire', 'horror', 'fantasy', 'drama', 'memoir', 'science fiction', 'historical fiction'),
}
_GENERATED_DOMAIN_SIZES = (('city', 24), ('language', 12), ('title', 16), ('prize', 8))


class Fact(object):
  __slots__ = ('fact_id', 'subject', 'relation', 'object')

  def __init__(self, fact_id, subject, relation, object):
    self.fact_id = fact_id
    self.subject = subject
    self.relation = relation
    self.object = object

  def __repr__(self):
    return 'Fact({0}: {1!r} {2} {3!r})'.format(self.fact_id, self.subject, self.relation, self.object)

  def __eq__(self, other):
    if not isinstance(other, Fact):
      return NotImplemented
    return (self.fact_id, self.subject, self.relation, self.object) == (other.fact_id, other.subject, other.relation, other.object)

  def __ne__(self, other):
    return not self == other

  def __hash__(self):
    return hash((self.fact_id, self.subject, self.relation, self.object))

  @property
  def key(self):
    return (self.subject, self.relation)


class World(list):
  """The list of facts, plus the value domain of every relation."""

  def __init__(self, facts, domains, seed):
    super(World, self).__init__(facts)
    self.domains = domains
    self.seed = seed
    self._by_id = dict((f.fact_id, f) for f in facts)

  def __repr__(self):
    return 'World(seed={0}, n_facts={1})'.format(self.seed, len(self))

  def fact(self, fact_id):
    try:
      return self._by_id[fact_id]
    except KeyError:
      raise InputError('no fact {0!r} in this world'.format(fact_id))

  def domain(self, relation):
    return self.domains[RELATIONS[relation].domain]


class _NameGenerator(object):
  __slots__ = ('rng', 'taken')

  def __init__(self, rng):
    self.rng = rng
    self.taken = set()

  def _syllable(self):
    return _ONSETS[self.rng.randint(len(_ONSETS))] + _VOWELS[self.rng.randint(len(_VOWELS))]

  def name(self, suffixes=('',)):
    while True:
      n = 2 + self.rng.randint(2)
      stem = ''.join(self._syllable() for _ in xrange(n))
      stem += _CODAS[self.rng.randint(len(_CODAS))]
      name = (stem + suffixes[self.rng.randint(len(suffixes))]).capitalize()
      if name not in self.taken:
        self.taken.add(name)
        return name

  def names(self, count, suffixes=('',)):
    return [self.name(suffixes) for _ in xrange(count)]


def _relations_of(kind):
  return [r for r in six.itervalues(RELATIONS) if r.subject_kind == kind]


def generate_world(seed, n_facts):
  """
  Builds `n_facts` facts with unique (subject, relation) keys. The same seed
  always yields the same world.
  """
  if n_facts < 4:
    raise InputError('a world needs at least 4 facts, got {0}'.format(n_facts))
  rng = np.random.RandomState(seed)
  names = _NameGenerator(rng)
  per_kind = sum(len(_relations_of(k)) for k in KINDS)
  n_subjects = max(2, int(math.ceil(float(n_facts) / per_kind)))

  subjects = collections.OrderedDict()
  subjects[COUNTRY] = names.names(n_subjects, _SUFFIXES[COUNTRY])
  subjects[AUTHOR] = names.names(n_subjects)
  subjects[LANDMARK] = ['{0} {1}'.format(names.name(), _LANDMARK_NOUNS[rng.randint(len(_LANDMARK_NOUNS))]) for _ in xrange(n_subjects)]

  domains = collections.OrderedDict()
  for key, size in _GENERATED_DOMAIN_SIZES:
    if key == 'prize':
      domains[key] = [n + ' Prize' for n in names.names(size)]
    else:
      domains[key] = names.names(size, _SUFFIXES.get(key, ('',)))
  for key in sorted(_FIXED_DOMAINS):
    domains[key] = list(_FIXED_DOMAINS[key])
  domains[COUNTRY] = list(subjects[COUNTRY])
  domains[AUTHOR] = list(subjects[AUTHOR])

  candidates = []
  for kind in KINDS:
    for subject in subjects[kind]:
      for relation in _relations_of(kind):
        candidates.append((subject, relation))
  chosen = sorted(rng.permutation(len(candidates))[:n_facts])

  facts = []
  for i in chosen:
    subject, relation = candidates[i]
    domain = [o for o in domains[relation.domain] if o != subject]
    obj = domain[rng.randint(len(domain))]
    facts.append(Fact('f{0:05d}'.format(len(facts)), subject, relation.name, obj))
  log.debug('generated %d facts over %d subjects per kind', len(facts), n_subjects)
  return World(facts, domains, seed)


def render_qa(fact, template_id):
  """Returns (prompt_text, answer_text) for the fact under one of its relation's templates."""
  templates = RELATIONS[fact.relation].templates
  if not 0 <= template_id < len(templates):
    raise InputError('relation {0!r} has templates 0..{1}, got {2}'.format(fact.relation, len(templates) - 1, template_id))
  return templates[template_id].format(S=fact.subject), fact.object
