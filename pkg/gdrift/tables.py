# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Tab-delimited text tables: a `# gdrift-<kind> v<version>` line, a header row,
then one record per line. Used for the dataset, vocabulary, feature and score
tables, ROC points and the plain-text reports.
"""
from __future__ import absolute_import, print_function, unicode_literals
import collections
import io
import re

import six

from .exceptions import ReaderException, WriterException

__all__ = ['Column', 'TableWriter', 'format_float', 'read_table', 'write_table']

TABLE_VERSION = 1
DELIMITER = '\t'
_MAGIC = re.compile(r'^# gdrift-(?P<kind>[\w-]+) v(?P<version>\d+)$')


def format_float(value, places=None):
  """repr-exact by default; fixed decimals when `places` is given (reports)."""
  value = float(value)
  if places is None:
    return repr(value)
  return '{0:.{1}f}'.format(value, places)


class Column(object):
  """ Handles column output, wrapping a function that takes a record, returning the value. """
  __slots__ = ('name', 'func', 'default')

  def __init__(self, name, func=None, default=''):
    self.name = name
    self.func = func if func is not None else (lambda record, name=name: record[name])
    self.default = default

  def __call__(self, record):
    v = self.func(record)
    if v is None:
      v = self.default
    elif isinstance(v, float):
      v = format_float(v)
    v = six.text_type(v)
    if DELIMITER in v or '\n' in v:
      raise WriterException('value for column {0!r} contains a tab or newline: {1!r}'.format(self.name, v))
    return v


class TableWriter(object):
  """ One record per line with attributes as columns. """
  __slots__ = ('kind', 'columns', 'output', '_started')

  def __init__(self, kind, columns, output):
    assert all(isinstance(c, Column) for c in columns)
    self.kind = kind
    self.columns = columns
    self.output = output
    self._started = False

  def _line(self, cells):
    self.output.write(DELIMITER.join(cells) + '\n')

  def begin(self):
    self._line(['# gdrift-{0} v{1}'.format(self.kind, TABLE_VERSION)])
    self._line([c.name for c in self.columns])
    self._started = True

  def write(self, record):
    if not self._started:
      self.begin()
    self._line([c(record) for c in self.columns])

  def write_all(self, records):
    if not self._started:
      self.begin()
    for record in records:
      self.write(record)


def write_table(output, kind, columns, records):
  """Writes a whole table to a text stream. Columns may be Column objects or plain key names."""
  columns = [c if isinstance(c, Column) else Column(c) for c in columns]
  TableWriter(kind, columns, output).write_all(records)


def read_table(istream, kind=None):
  """
  Reads a table written by TableWriter. Returns (kind, header, rows) where each
  row is an OrderedDict of text values.
  """
  if isinstance(istream, six.binary_type):
    istream = io.StringIO(istream.decode('utf-8'))
  lines = [line.rstrip('\n') for line in istream]
  if len(lines) < 2:
    raise ReaderException('table is missing its version or header line')
  m = _MAGIC.match(lines[0])
  if m is None:
    raise ReaderException('not a gdrift table: {0!r}'.format(lines[0][:40]))
  if int(m.group('version')) != TABLE_VERSION:
    raise ReaderException('table version {0} but I can read {1}'.format(m.group('version'), TABLE_VERSION))
  if kind is not None and m.group('kind') != kind:
    raise ReaderException('expected a {0!r} table, found {1!r}'.format(kind, m.group('kind')))
  header = lines[1].split(DELIMITER)
  rows = []
  for n, line in enumerate(lines[2:], 3):
    if not line:
      continue
    cells = line.split(DELIMITER)
    if len(cells) != len(header):
      raise ReaderException('line {0} has {1} cells, header has {2}'.format(n, len(cells), len(header)))
    rows.append(collections.OrderedDict(zip(header, cells)))
  return m.group('kind'), header, rows
