# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
import io
import unittest

import msgpack

from gdrift import lm
from gdrift.exceptions import IntegrityError, ReaderException, WriterException
from gdrift.wire import Kind, Reader, Writer

from testutils import tiny_config


class WireTest(unittest.TestCase):
  def test_containers_in_sequence(self):
    out = io.BytesIO()
    writer = Writer(out)
    writer.write(Kind.MANIFEST, {'a': 1})
    writer.write(Kind.CHECKPOINT, {'b': [1, 2]}, [b'xy', b''])
    reader = Reader(io.BytesIO(out.getvalue()))
    first, second = list(reader)
    self.assertEqual((first.kind, first.header, first.blobs), (Kind.MANIFEST, {'a': 1}, []))
    self.assertEqual((second.kind, second.header, second.blobs), (Kind.CHECKPOINT, {'b': [1, 2]}, [b'xy', b'']))
    self.assertIsNone(reader.read())

  def test_wrong_kind(self):
    out = io.BytesIO()
    Writer(out).write(Kind.MANIFEST, {})
    with self.assertRaises(ReaderException):
      Reader(io.BytesIO(out.getvalue()), kind=Kind.CHECKPOINT).read()

  def test_wrong_version(self):
    stream = io.BytesIO(msgpack.packb(2) + msgpack.packb('checkpoint') + msgpack.packb({}) + msgpack.packb(0))
    with self.assertRaises(ReaderException):
      Reader(stream).read()

  def test_truncated(self):
    out = io.BytesIO()
    Writer(out).write(Kind.CHECKPOINT, {}, [b'abc'])
    with self.assertRaises(ReaderException):
      Reader(io.BytesIO(out.getvalue()[:-2])).read()

  def test_bad_blobs(self):
    with self.assertRaises(WriterException):
      Writer(io.BytesIO()).write(Kind.CHECKPOINT, {}, ['text'])
    with self.assertRaises(WriterException):
      Writer(io.BytesIO()).write(Kind.CHECKPOINT, {'x': object()})


class CheckpointTest(unittest.TestCase):
  def setUp(self):
    self.params = lm.init_model(tiny_config(), 9)

  def _saved(self, extra=None):
    out = io.BytesIO()
    lm.save_checkpoint(out, self.params, extra)
    return out.getvalue()

  def test_round_trip(self):
    params, extra = lm.load_checkpoint(io.BytesIO(self._saved({'epochs_completed': 3, 'vocab_checksum': 'ab12'})))
    self.assertEqual(params.config, self.params.config)
    self.assertEqual(list(params.keys()), list(self.params.keys()))
    for name in params:
      self.assertEqual(params[name].tobytes(), self.params[name].tobytes())
    self.assertEqual(lm.checksum(params), lm.checksum(self.params))
    self.assertEqual(extra, {'epochs_completed': 3, 'vocab_checksum': 'ab12'})

  def test_loaded_params_are_writable(self):
    params, _ = lm.load_checkpoint(io.BytesIO(self._saved()))
    params['out.weight'][0, 0] += 1.0

  def test_corruption(self):
    data = bytearray(self._saved())
    data[-3] ^= 0x01
    with self.assertRaises(IntegrityError):
      lm.load_checkpoint(io.BytesIO(bytes(data)))

  def test_empty_stream(self):
    with self.assertRaises(ReaderException):
      lm.load_checkpoint(io.BytesIO(b''))
