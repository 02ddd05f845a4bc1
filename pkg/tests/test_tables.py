# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
import io
import unittest

from gdrift.exceptions import ReaderException, WriterException
from gdrift.tables import Column, format_float, read_table, write_table

from testutils import round_trip_text


class TableTest(unittest.TestCase):
  def test_layout(self):
    out = io.StringIO()
    write_table(out, 'scores', ['id', Column('score', lambda r: r['s'] * 2)], [{'id': 'a', 's': 0.25}, {'id': 'b', 's': 1.5}])
    self.assertEqual(out.getvalue(), '# gdrift-scores v1\nid\tscore\na\t0.5\nb\t3.0\n')

  def test_read(self):
    records = [{'x': 'p q', 'y': 0.1}, {'x': 'r', 'y': None}]
    kind, header, rows = read_table(round_trip_text(write_table, 'demo', ['x', 'y'], records), 'demo')
    self.assertEqual(kind, 'demo')
    self.assertEqual(header, ['x', 'y'])
    self.assertEqual([list(r.items()) for r in rows], [[('x', 'p q'), ('y', '0.1')], [('x', 'r'), ('y', '')]])
    self.assertEqual(float(rows[0]['y']), 0.1)

  def test_reject_tabs(self):
    with self.assertRaises(WriterException):
      write_table(io.StringIO(), 'demo', ['x'], [{'x': 'a\tb'}])
    with self.assertRaises(WriterException):
      write_table(io.StringIO(), 'demo', ['x'], [{'x': 'a\nb'}])

  def test_reader_checks(self):
    with self.assertRaises(ReaderException):
      read_table(io.StringIO('# gdrift-demo v1\nx\n'), 'other')
    with self.assertRaises(ReaderException):
      read_table(io.StringIO('# gdrift-demo v2\nx\n'))
    with self.assertRaises(ReaderException):
      read_table(io.StringIO('x\ty\n1\t2\n'))
    with self.assertRaises(ReaderException):
      read_table(io.StringIO('# gdrift-demo v1\nx\ty\n1\n'))

  def test_format_float(self):
    self.assertEqual(format_float(1.0 / 3), repr(1.0 / 3))
    self.assertEqual(format_float(0.5, 6), '0.500000')
