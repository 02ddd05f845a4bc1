# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
import logging

import numpy as np
from six.moves import xrange

from ..exceptions import ConstructionError, InputError
from .tokenizer import Tokenizer
from .world import RELATIONS, render_qa

__all__ = ['COUNTERFACTUAL', 'FUTURE_FACT', 'MEMBER', 'NONMEMBER', 'ORIGINS', 'Sample', 'build_membership_dataset', 'make_sample', 'paraphrase_set']

log = logging.getLogger(__name__)

MEMBER = 'member'
NONMEMBER = 'nonmember'
FUTURE_FACT = 'future_fact'
COUNTERFACTUAL = 'counterfactual'
ORIGINS = (MEMBER, FUTURE_FACT, COUNTERFACTUAL)

PARITY_TOLERANCE = 2.0
PARITY_MIN_CLASS = 100  # below this, a parity miss is only logged


class Sample(object):
  """One (prompt, answer, label) record; `target` is the first subtoken of the answer."""
  __slots__ = ('sample_id', 'prompt_text', 'answer_text', 'prompt_tokens', 'answer_tokens', 'target', 'label', 'origin', 'fact_id', 'template_id', 'split')

  def __init__(self, sample_id, prompt_text, answer_text, prompt_tokens, answer_tokens, label, origin, fact_id, template_id, split=None):
    if origin not in ORIGINS:
      raise InputError('unknown sample origin {0!r}'.format(origin))
    if (label == MEMBER) != (origin == MEMBER) or label not in (MEMBER, NONMEMBER):
      raise InputError('label {0!r} does not agree with origin {1!r}'.format(label, origin))
    if not answer_text or not answer_tokens:
      raise InputError('sample {0} has an empty answer'.format(sample_id))
    self.sample_id = sample_id
    self.prompt_text = prompt_text
    self.answer_text = answer_text
    self.prompt_tokens = list(prompt_tokens)
    self.answer_tokens = list(answer_tokens)
    self.target = self.answer_tokens[0]
    self.label = label
    self.origin = origin
    self.fact_id = fact_id
    self.template_id = template_id
    self.split = split

  def __repr__(self):
    return 'Sample({0}, {1}, {2!r} -> {3!r})'.format(self.sample_id, self.origin, self.prompt_text, self.answer_text)

  @property
  def is_member(self):
    return self.label == MEMBER

  @property
  def y(self):
    return 1 if self.is_member else 0

  @property
  def sequence_tokens(self):
    """Prompt followed by the whole answer; what the likelihood baselines score."""
    return self.prompt_tokens + self.answer_tokens


def make_sample(tokenizer, sample_id, prompt_text, answer_text, origin, fact_id, template_id, split=None):
  label = MEMBER if origin == MEMBER else NONMEMBER
  return Sample(sample_id, prompt_text, answer_text, tokenizer.tokenize(prompt_text), tokenizer.tokenize(answer_text), label, origin, fact_id, template_id, split=split)


def _check_parity(samples):
  members = [len(s.prompt_tokens) for s in samples if s.is_member]
  others = [len(s.prompt_tokens) for s in samples if not s.is_member]
  if not members or not others:
    return
  diff = abs(np.mean(members) - np.mean(others))
  if diff < PARITY_TOLERANCE:
    return
  msg = 'member and non-member prompt lengths differ by {0:.3f} tokens on average'.format(diff)
  if min(len(members), len(others)) >= PARITY_MIN_CLASS:
    raise ConstructionError(msg)
  log.warning(msg)


def build_membership_dataset(world, seed, n_members, n_nonmembers, future_fraction=0.5, tokenizer=None):
  """
  Members are Q&A pairs over facts marked in-training. Non-members are split
  between held-out ("future") facts and counterfactuals: a member's question
  under the same template paired with a wrong object from the relation's
  domain. Returns members, then future facts, then counterfactuals.
  """
  if tokenizer is None:
    tokenizer = Tokenizer.for_world(world)
  if n_members < 1 or n_nonmembers < 0:
    raise InputError('need at least one member and a non-negative number of non-members')
  if not 0.0 <= future_fraction <= 1.0:
    raise InputError('future_fraction must lie in [0, 1], got {0!r}'.format(future_fraction))
  n_future = int(round(n_nonmembers * future_fraction))
  n_counter = n_nonmembers - n_future
  if n_members + n_future > len(world):
    raise InputError('{0} members and {1} future facts need more than the {2} facts in the world'.format(n_members, n_future, len(world)))
  if n_counter > n_members:
    raise InputError('{0} counterfactuals need as many members, have {1}'.format(n_counter, n_members))

  rng = np.random.RandomState(seed)
  order = rng.permutation(len(world))
  member_facts = [world[i] for i in order[:n_members]]
  future_facts = [world[i] for i in order[n_members:n_members + n_future]]

  samples = []

  def add(fact, template_id, origin, answer=None):
    prompt, true_answer = render_qa(fact, template_id)
    sample_id = 's{0:05d}'.format(len(samples))
    samples.append(make_sample(tokenizer, sample_id, prompt, answer or true_answer, origin, fact.fact_id, template_id))
    return samples[-1]

  member_templates = []
  for fact in member_facts:
    t = rng.randint(len(RELATIONS[fact.relation].templates))
    member_templates.append(t)
    add(fact, t, MEMBER)
  for fact in future_facts:
    add(fact, rng.randint(len(RELATIONS[fact.relation].templates)), FUTURE_FACT)
  for i in sorted(rng.choice(n_members, n_counter, replace=False)):
    fact = member_facts[i]
    wrong = [o for o in world.domain(fact.relation) if o != fact.object]
    if not wrong:
      raise ConstructionError('relation {0!r} has no alternative object for fact {1}'.format(fact.relation, fact.fact_id))
    add(fact, member_templates[i], COUNTERFACTUAL, answer=wrong[rng.randint(len(wrong))])

  _check_parity(samples)
  log.info('built %d samples: %d members, %d future facts, %d counterfactuals', len(samples), n_members, n_future, n_counter)
  return samples


def paraphrase_set(fact, k, tokenizer, answer=None):
  """
  The fact asked under its first `k` templates. With `answer` given, every
  paraphrase is paired with that (counterfactual) answer instead of the true one.
  """
  templates = RELATIONS[fact.relation].templates
  if not 1 <= k <= len(templates):
    raise InputError('relation {0!r} has {1} templates, cannot make {2} paraphrases'.format(fact.relation, len(templates), k))
  origin = MEMBER if answer is None else COUNTERFACTUAL
  result = []
  for t in xrange(k):
    prompt, true_answer = render_qa(fact, t)
    result.append(make_sample(tokenizer, '{0}-p{1}'.format(fact.fact_id, t), prompt, answer or true_answer, origin, fact.fact_id, t))
  return result
