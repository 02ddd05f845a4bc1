# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Writes versioned msgpack containers:

  <container> ::= <wire_version> <kind> <header> <nblobs> <blob>*
  <header>    ::= { <key> : <value> }
  <blob>      ::= msgpack bin (raw bytes, e.g. little-endian float64 tensors)
"""
from __future__ import absolute_import, print_function, unicode_literals

import msgpack
import six

from ..exceptions import WriterException

__all__ = ['Writer']


class Writer(object):
  __slots__ = ('_ostream', '_packer')

  WIRE_VERSION = 1  # Version of the wire protocol the reader knows how to process.

  def __init__(self, ostream):
    """
    @param ostream A binary file-like object to write to
    """
    if not hasattr(ostream, 'write'):
      raise TypeError('ostream must have a write attr')
    self._ostream = ostream
    self._packer = msgpack.Packer(use_bin_type=True)

  def write(self, kind, header, blobs=()):
    """
    Writes one container to the stream.
    @param kind the container kind, a short text label
    @param header a msgpack-serialisable map describing the blobs
    @param blobs a sequence of bytes objects
    """
    if not isinstance(kind, six.text_type):
      raise WriterException('container kind must be text, got {0!r}'.format(kind))
    blobs = list(blobs)
    for i, blob in enumerate(blobs):
      if not isinstance(blob, six.binary_type):
        raise WriterException('blob {0} of {1!r} container is not bytes'.format(i, kind))
    try:
      packed_header = self._packer.pack(header)
    except (TypeError, ValueError) as e:
      raise WriterException('could not serialise the {0!r} header: {1}'.format(kind, e))

    self._pack(Writer.WIRE_VERSION)
    self._pack(kind)
    self._ostream.write(packed_header)
    self._pack(len(blobs))
    for blob in blobs:
      self._pack(blob)

  def _pack(self, value):
    self._ostream.write(self._packer.pack(value))
