# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Class-balanced, fact-disjoint train/validation/test splits.

Samples are grouped by fact_id: a member and its counterfactual share a fact
and always travel together. Each split receives the same number of members
and non-members, allotted by largest remainder from the split fractions.
"""
from __future__ import absolute_import, print_function, unicode_literals
import collections
import logging

import numpy as np
from six.moves import xrange

from ..exceptions import InputError

__all__ = ['DEFAULT_FRACTIONS', 'SPLIT_NAMES', 'SplitSet', 'allocate', 'split']

log = logging.getLogger(__name__)

TRAIN = 'train'
VALIDATION = 'validation'
TEST = 'test'
SPLIT_NAMES = (TRAIN, VALIDATION, TEST)
DEFAULT_FRACTIONS = (0.7, 0.1, 0.2)


class SplitSet(object):
  __slots__ = ('train', 'validation', 'test', 'fractions')

  def __init__(self, train, validation, test, fractions):
    self.train = train
    self.validation = validation
    self.test = test
    self.fractions = tuple(fractions)

  def __repr__(self):
    return 'SplitSet(train={0}, validation={1}, test={2})'.format(len(self.train), len(self.validation), len(self.test))

  def __iter__(self):
    return iter((self.train, self.validation, self.test))

  def get(self, name):
    return getattr(self, name)

  @classmethod
  def from_samples(cls, samples, fractions=DEFAULT_FRACTIONS):
    """Regroups samples by the split name each one already carries."""
    parts = collections.OrderedDict((name, []) for name in SPLIT_NAMES)
    for s in samples:
      if s.split not in parts:
        raise InputError('sample {0} has no valid split ({1!r})'.format(s.sample_id, s.split))
      parts[s.split].append(s)
    return cls(fractions=fractions, **parts)


def allocate(n, fractions):
  """Largest-remainder apportionment of n items; ties go to the earlier split."""
  raw = [f * n for f in fractions]
  counts = [int(np.floor(r + 1e-9)) for r in raw]
  remainders = [r - c for r, c in zip(raw, counts)]
  for i in sorted(xrange(len(fractions)), key=lambda i: (-remainders[i], i))[:n - sum(counts)]:
    counts[i] += 1
  return counts


def _check_fractions(fractions, allow_empty):
  fractions = tuple(float(f) for f in fractions)
  if len(fractions) != 3 or any(f < 0 for f in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
    raise InputError('split fractions must be three non-negative numbers summing to 1, got {0!r}'.format(fractions))
  if not allow_empty and any(f == 0 for f in fractions):
    raise InputError('split fractions {0!r} leave a split empty; pass allow_empty to permit this'.format(fractions))
  return fractions


def _groups(samples):
  groups = collections.OrderedDict()
  for s in samples:
    groups.setdefault(s.fact_id, []).append(s)
  pairs, members, others = [], [], []
  for fact_id, group in groups.items():
    n_member = sum(1 for s in group if s.is_member)
    shape = (n_member, len(group) - n_member)
    if shape == (1, 1):
      pairs.append(group)
    elif shape == (1, 0):
      members.append(group)
    elif shape == (0, 1):
      others.append(group)
    else:
      raise InputError('fact {0} has {1} members and {2} non-members; expected at most one of each'.format(fact_id, *shape))
  return pairs, members, others


def _shuffled(rng, items):
  return [items[i] for i in rng.permutation(len(items))]


def split(samples, fractions=DEFAULT_FRACTIONS, seed=0, allow_empty=False):
  """
  Seeded shuffle then per-class stratified assignment. When the classes are
  unequal, surplus single-sample facts of the larger class are dropped.
  Every sample that is kept has its `split` attribute set.
  """
  fractions = _check_fractions(fractions, allow_empty)
  samples = list(samples)
  pairs, members, others = _groups(samples)
  rng = np.random.RandomState(seed)
  pairs, members, others = _shuffled(rng, pairs), _shuffled(rng, members), _shuffled(rng, others)

  n_class = len(pairs) + min(len(members), len(others))
  dropped = len(members) + len(others) - 2 * min(len(members), len(others))
  if n_class == 0:
    raise InputError('no balanced split possible: need both members and non-members')
  if dropped:
    log.warning('dropping %d surplus samples to balance the classes', dropped)
  n_singles = n_class - len(pairs)
  members, others = members[:n_singles], others[:n_singles]

  per_class = allocate(n_class, fractions)
  if not allow_empty and any(c == 0 for c in per_class):
    raise InputError('{0} samples per class cannot fill every split of {1!r}'.format(n_class, fractions))
  per_pair = allocate(len(pairs), fractions)
  # a split cannot take more pairs than its per-class quota
  for i in xrange(3):
    while per_pair[i] > per_class[i]:
      j = next(j for j in xrange(3) if per_pair[j] < per_class[j])
      per_pair[i] -= 1
      per_pair[j] += 1

  assignment = {}

  def assign(groups, counts):
    start = 0
    for name, count in zip(SPLIT_NAMES, counts):
      for group in groups[start:start + count]:
        for s in group:
          assignment[s.sample_id] = name
      start += count

  singles = [c - p for c, p in zip(per_class, per_pair)]
  assign(pairs, per_pair)
  assign(members, singles)
  assign(others, singles)

  parts = collections.OrderedDict((name, []) for name in SPLIT_NAMES)
  for s in samples:
    name = assignment.get(s.sample_id)
    s.split = name
    if name is not None:
      parts[name].append(s)
  result = SplitSet(fractions=fractions, **parts)
  log.info('split %d samples into %r', sum(len(p) for p in result), result)
  return result
