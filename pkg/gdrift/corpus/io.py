# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
The dataset file: a `dataset` table with one sample per line.

Columns: sample_id, split, label, origin, fact_id, template_id, prompt,
answer. Token ids are not stored; they are recomputed with the vocabulary
saved next to the dataset.
"""
from __future__ import absolute_import, print_function, unicode_literals

from ..exceptions import ReaderException
from ..tables import Column, read_table, write_table
from .dataset import make_sample

__all__ = ['DATASET_COLUMNS', 'read_dataset', 'write_dataset']


def _attr(name):
  return lambda s: getattr(s, name)


DATASET_COLUMNS = (
    Column('sample_id', _attr('sample_id')),
    Column('split', _attr('split')),
    Column('label', _attr('label')),
    Column('origin', _attr('origin')),
    Column('fact_id', _attr('fact_id')),
    Column('template_id', _attr('template_id')),
    Column('prompt', _attr('prompt_text')),
    Column('answer', _attr('answer_text')),
)


def write_dataset(output, samples):
  write_table(output, 'dataset', DATASET_COLUMNS, samples)


def read_dataset(istream, tokenizer):
  _, header, rows = read_table(istream, kind='dataset')
  missing = [c.name for c in DATASET_COLUMNS if c.name not in header]
  if missing:
    raise ReaderException('dataset file lacks columns {0}'.format(', '.join(missing)))
  samples = []
  for row in rows:
    sample = make_sample(tokenizer, row['sample_id'], row['prompt'], row['answer'], row['origin'], row['fact_id'], int(row['template_id']), split=row['split'] or None)
    if sample.label != row['label']:
      raise ReaderException('sample {0}: label {1!r} contradicts origin {2!r}'.format(sample.sample_id, row['label'], row['origin']))
    samples.append(sample)
  return samples
