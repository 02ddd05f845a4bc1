# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
Checkpoint container (wire version 1, kind "checkpoint"):

  header = {
    "config":   ModelConfig fields,
    "names":    [parameter name, ...],           in model order
    "shapes":   [[dim, ...], ...],               aligned with names
    "checksum": SHA-256 hex of the parameters (see params.checksum),
    "extra":    free-form map (epochs completed, vocabulary checksum, ...),
  }
  blobs  = one row-major little-endian float64 buffer per parameter.

load_checkpoint(save_checkpoint(p)) reproduces p bit for bit.
"""
from __future__ import absolute_import, print_function, unicode_literals
import collections

import numpy as np
import six

from ..exceptions import IntegrityError, ReaderException
from ..wire import HeaderKey, Kind, Reader, Writer
from .config import ModelConfig
from .params import ModelParams, checksum

__all__ = ['load_checkpoint', 'save_checkpoint']


def save_checkpoint(ostream, params, extra=None):
  names = list(params.keys())
  header = collections.OrderedDict()
  header[HeaderKey.CONFIG] = dict(params.config.to_dict())
  header[HeaderKey.NAMES] = names
  header[HeaderKey.SHAPES] = [list(params[n].shape) for n in names]
  header[HeaderKey.CHECKSUM] = checksum(params)
  header[HeaderKey.EXTRA] = dict(extra or {})
  blobs = [np.ascontiguousarray(params[n], dtype='<f8').tobytes() for n in names]
  Writer(ostream).write(Kind.CHECKPOINT, header, blobs)


def load_checkpoint(istream):
  """Returns (ModelParams, extra). Raises IntegrityError if the stored checksum does not match."""
  container = Reader(istream, kind=Kind.CHECKPOINT).read()
  if container is None:
    raise ReaderException('no checkpoint found in stream')
  header = container.header
  try:
    config = ModelConfig.from_dict(header[HeaderKey.CONFIG])
    names = header[HeaderKey.NAMES]
    shapes = header[HeaderKey.SHAPES]
    expected = header[HeaderKey.CHECKSUM]
  except KeyError as e:
    raise ReaderException('checkpoint header is missing {0}'.format(e))
  if len(names) != len(shapes) or len(names) != len(container.blobs):
    raise ReaderException('checkpoint header lists {0} tensors but holds {1}'.format(len(names), len(container.blobs)))

  params = ModelParams(config=config)
  for name, shape, blob in zip(names, shapes, container.blobs):
    value = np.frombuffer(blob, dtype='<f8')
    if value.size != int(np.prod(shape)):
      raise ReaderException('tensor {0!r} holds {1} values, shape {2} needs {3}'.format(name, value.size, shape, int(np.prod(shape))))
    params[name] = value.reshape(shape).astype(np.float64)
  if checksum(params) != expected:
    raise IntegrityError('checkpoint checksum mismatch')
  extra = dict((k, v) for k, v in six.iteritems(header.get(HeaderKey.EXTRA, {})))
  return params, extra
