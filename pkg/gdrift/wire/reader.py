# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals

import msgpack
import six
from six.moves import xrange

from ..exceptions import ReaderException

__all__ = ['Container', 'Reader']


class Container(object):
  __slots__ = ('kind', 'header', 'blobs')

  def __init__(self, kind, header, blobs):
    self.kind = kind
    self.header = header
    self.blobs = blobs

  def __repr__(self):
    return 'Container(kind={0!r}, nblobs={1})'.format(self.kind, len(self.blobs))


class Reader(object):
  __slots__ = ('_unpacker', '_expected_kind')

  WIRE_VERSION = 1  # Version of the wire protocol the reader knows how to process.

  def __init__(self, istream, kind=None):
    """
    @param istream A binary file-like object to read from
    @param kind If given, every container read must be of this kind
    """
    self._unpacker = msgpack.Unpacker(istream, raw=False, use_list=True, strict_map_key=False)
    self._expected_kind = kind

  def __iter__(self):
    return self

  def __next__(self):
    container = self.read()
    if container is None:
      raise StopIteration()
    return container

  def next(self):
    return self.__next__()

  def read(self):
    """Returns the next Container, or None at a clean end of stream."""
    try:
      version = self._unpacker.unpack()
    except msgpack.OutOfData:
      return None
    if version != self.WIRE_VERSION:
      raise ReaderException('Invalid wire format version. Stream has version {0!r} but I can read {1}.'.format(version, self.WIRE_VERSION))
    try:
      kind = self._unpacker.unpack()
      header = self._unpacker.unpack()
      nblobs = self._unpacker.unpack()
      blobs = [self._unpacker.unpack() for _ in xrange(nblobs)]
    except msgpack.OutOfData:
      raise ReaderException('Stream ended in the middle of a container')
    if not isinstance(kind, six.text_type):
      raise ReaderException('Expected a text container kind, got {0!r}'.format(kind))
    if self._expected_kind is not None and kind != self._expected_kind:
      raise ReaderException('Expected a {0!r} container but found {1!r}'.format(self._expected_kind, kind))
    if not isinstance(header, dict):
      raise ReaderException('Expected a map header, got {0!r}'.format(type(header)))
    for i, blob in enumerate(blobs):
      if not isinstance(blob, six.binary_type):
        raise ReaderException('Blob {0} is not binary data'.format(i))
    return Container(kind, header, blobs)
