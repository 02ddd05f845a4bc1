# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Word-level tokenization with single-character fallback.

The vocabulary holds every word and punctuation mark seen in the world plus
one token per printable ASCII character, so any text can be encoded. A word
missing from the vocabulary is spelled out in character tokens; a character
missing too folds to '?'.
"""
from __future__ import absolute_import, print_function, unicode_literals
import hashlib
import logging
import re
import string

import six

from ..exceptions import InputError, ReaderException
from ..tables import read_table, write_table
from .world import RELATIONS, render_qa

__all__ = ['Tokenizer', 'Vocabulary', 'read_vocabulary', 'write_vocabulary']

log = logging.getLogger(__name__)

ENC = 'utf-8'
WORD_RE = re.compile(r'\w+|[^\w\s]', re.UNICODE)
FALLBACK_CHARS = string.ascii_letters + string.digits + string.punctuation
REPLACEMENT = '?'


def _is_word(token):
  return re.match(r'\w', token, re.UNICODE) is not None


class Vocabulary(object):
  __slots__ = ('tokens', 'index')

  def __init__(self, tokens):
    self.tokens = list(tokens)
    self.index = dict((t, i) for i, t in enumerate(self.tokens))
    if len(self.index) != len(self.tokens):
      raise InputError('vocabulary contains duplicate tokens')
    if REPLACEMENT not in self.index:
      raise InputError('vocabulary lacks the {0!r} replacement token'.format(REPLACEMENT))

  def __repr__(self):
    return 'Vocabulary(size={0})'.format(len(self))

  def __len__(self):
    return len(self.tokens)

  def __contains__(self, token):
    return token in self.index

  def __eq__(self, other):
    return isinstance(other, Vocabulary) and self.tokens == other.tokens

  def __ne__(self, other):
    return not self == other

  __hash__ = None

  def id(self, token):
    return self.index[token]

  def token(self, token_id):
    return self.tokens[token_id]

  def checksum(self):
    return hashlib.sha256('\n'.join(self.tokens).encode(ENC)).hexdigest()

  @classmethod
  def build(cls, texts):
    """Sorted words from `texts`, followed by any fallback characters not already present."""
    words = set()
    for text in texts:
      words.update(WORD_RE.findall(text))
    tokens = sorted(words)
    seen = set(tokens)
    tokens.extend(c for c in FALLBACK_CHARS if c not in seen)
    return cls(tokens)


class Tokenizer(object):
  __slots__ = ('vocab',)

  def __init__(self, vocab):
    self.vocab = vocab

  def __repr__(self):
    return 'Tokenizer({0!r})'.format(self.vocab)

  @classmethod
  def for_world(cls, world):
    texts = []
    for fact in world:
      for template_id in six.moves.xrange(len(RELATIONS[fact.relation].templates)):
        texts.extend(render_qa(fact, template_id))
    for values in six.itervalues(world.domains):
      texts.extend(values)
    return cls(Vocabulary.build(texts))

  def _fallback(self, raw, dest):
    log.debug('%r not in vocabulary, spelling it out', raw)
    for c in raw:
      if c in self.vocab:
        dest.append(self.vocab.id(c))
      else:
        log.debug('%r has no token, using %r', c, REPLACEMENT)
        dest.append(self.vocab.id(REPLACEMENT))

  def tokenize(self, text):
    assert isinstance(text, six.text_type)
    ids = []
    for raw in WORD_RE.findall(text):
      if raw in self.vocab:
        ids.append(self.vocab.id(raw))
      else:
        self._fallback(raw, ids)
    if not ids:
      raise InputError('cannot tokenize empty text')
    return ids

  def detokenize(self, ids):
    """Space-separated tokens, with punctuation attached to what precedes it."""
    out = []
    for i in ids:
      token = self.vocab.token(i)
      if out and _is_word(token):
        out.append(' ')
      out.append(token)
    return ''.join(out)

  def first_subtoken(self, answer_text):
    return self.tokenize(answer_text)[0]


def write_vocabulary(output, vocab):
  write_table(output, 'vocab', ('id', 'token'), ({'id': i, 'token': t} for i, t in enumerate(vocab.tokens)))


def read_vocabulary(istream):
  _, _, rows = read_table(istream, kind='vocab')
  tokens = []
  for n, row in enumerate(rows):
    if int(row['id']) != n:
      raise ReaderException('vocabulary ids must be dense and ordered; found {0} at row {1}'.format(row['id'], n))
    tokens.append(row['token'])
  return Vocabulary(tokens)
