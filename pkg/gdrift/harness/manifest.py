# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
"""
The run manifest: every artifact a command wrote, with its SHA-256, so that
later commands can refuse inputs that changed underneath them. Stored as a
"manifest" wire container in the output directory.
"""
from __future__ import absolute_import, print_function, unicode_literals
import collections
import contextlib
import datetime
import functools
import hashlib
import io
import logging
import os
import tempfile

import dateutil.parser
import dateutil.tz
import six

from .. import __version__
from ..exceptions import IntegrityError, ReaderException
from ..wire import HeaderKey, Kind, Reader, Writer

__all__ = ['MANIFEST_NAME', 'Artifact', 'RunManifest', 'atomic_write', 'file_sha256', 'requires_artifacts']

log = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.msgpack'


@contextlib.contextmanager
def atomic_write(path, binary=False):
  """Yields a stream on a temporary file beside `path`; renames it over `path` only on success."""
  directory = os.path.dirname(os.path.abspath(path))
  if not os.path.isdir(directory):
    os.makedirs(directory)
  fd, tmp = tempfile.mkstemp(dir=directory, prefix='.' + os.path.basename(path) + '.', suffix='.tmp')
  try:
    if binary:
      stream = io.open(fd, 'wb')
    else:
      stream = io.open(fd, 'w', encoding='utf-8', newline='\n')
    with stream:
      yield stream
    os.replace(tmp, path)
  except BaseException:
    if os.path.exists(tmp):
      os.remove(tmp)
    raise


def file_sha256(path):
  h = hashlib.sha256()
  with io.open(path, 'rb') as f:
    for chunk in iter(functools.partial(f.read, 1 << 16), b''):
      h.update(chunk)
  return h.hexdigest()


def _now():
  return datetime.datetime.now(dateutil.tz.tzutc()).replace(microsecond=0).isoformat()


class Artifact(object):
  __slots__ = ('name', 'path', 'sha256', 'written', 'config_hash')

  def __init__(self, name, path, sha256, written, config_hash=None):
    self.name = name
    self.path = path  # relative to the run directory
    self.sha256 = sha256
    self.written = written
    self.config_hash = config_hash  # of the config sections the artifact was derived from

  def __repr__(self):
    return 'Artifact({0!r}, {1!r}, {2})'.format(self.name, self.path, self.sha256[:12])

  @property
  def written_at(self):
    return dateutil.parser.parse(self.written)

  def to_dict(self):
    return {'path': self.path, 'sha256': self.sha256, 'written': self.written, 'config_hash': self.config_hash}


class RunManifest(object):
  __slots__ = ('directory', 'config_hash', 'tool_version', 'created', 'updated', 'artifacts')

  def __init__(self, directory, config_hash=None, tool_version=__version__, created=None, updated=None, artifacts=None):
    self.directory = directory
    self.config_hash = config_hash
    self.tool_version = tool_version
    self.created = created or _now()
    self.updated = updated or self.created
    self.artifacts = artifacts if artifacts is not None else collections.OrderedDict()

  def __repr__(self):
    return 'RunManifest({0!r}, artifacts={1})'.format(self.directory, list(self.artifacts))

  def __contains__(self, name):
    return name in self.artifacts

  @property
  def created_at(self):
    return dateutil.parser.parse(self.created)

  @property
  def updated_at(self):
    return dateutil.parser.parse(self.updated)

  def path(self, name):
    return os.path.join(self.directory, self.artifacts[name].path)

  def register(self, name, relpath, config_hash=None):
    """Records (or re-records) an artifact already written under the run directory."""
    stamp = _now()
    self.artifacts[name] = Artifact(name, relpath, file_sha256(os.path.join(self.directory, relpath)), stamp, config_hash)
    self.updated = stamp
    return self.artifacts[name]

  def verify(self, name, config_hash=None):
    """
    Raises IntegrityError unless the artifact exists and still matches its
    checksum and, when `config_hash` is given, was written under that config.
    """
    if name not in self.artifacts:
      raise IntegrityError('the manifest in {0} has no {1!r} artifact; run the command that produces it first'.format(self.directory, name))
    artifact = self.artifacts[name]
    path = os.path.join(self.directory, artifact.path)
    if not os.path.exists(path):
      raise IntegrityError('artifact {0!r} is missing: {1}'.format(name, path))
    if file_sha256(path) != artifact.sha256:
      raise IntegrityError('artifact {0!r} ({1}) does not match its manifest checksum'.format(name, path))
    if config_hash is not None and artifact.config_hash is not None and artifact.config_hash != config_hash:
      raise IntegrityError('artifact {0!r} was written under a different configuration; rerun the command that produces it'.format(name))
    return path

  @classmethod
  def load(cls, directory):
    path = os.path.join(directory, MANIFEST_NAME)
    if not os.path.exists(path):
      return cls(directory)
    with io.open(path, 'rb') as f:
      container = Reader(f, kind=Kind.MANIFEST).read()
    if container is None:
      raise ReaderException('empty manifest: {0}'.format(path))
    h = container.header
    artifacts = collections.OrderedDict()
    for name, a in six.iteritems(h.get(HeaderKey.ARTIFACTS, {})):
      artifacts[name] = Artifact(name, a['path'], a['sha256'], a['written'], a.get('config_hash'))
    return cls(directory, h.get(HeaderKey.CONFIG_HASH), h.get(HeaderKey.TOOL_VERSION), h.get(HeaderKey.CREATED), h.get(HeaderKey.UPDATED), artifacts)

  def save(self):
    header = collections.OrderedDict()
    header[HeaderKey.CONFIG_HASH] = self.config_hash
    header[HeaderKey.TOOL_VERSION] = self.tool_version
    header[HeaderKey.CREATED] = self.created
    header[HeaderKey.UPDATED] = self.updated
    header[HeaderKey.ARTIFACTS] = collections.OrderedDict((n, a.to_dict()) for n, a in six.iteritems(self.artifacts))
    with atomic_write(os.path.join(self.directory, MANIFEST_NAME), binary=True) as f:
      Writer(f).write(Kind.MANIFEST, header)


def requires_artifacts(*names):
  """
  Marks the artifacts a command reads. The command's first argument is its
  Run; each named artifact goes through `run.verify` before the call.
  """
  def dec(fn):
    @functools.wraps(fn)
    def wrapper(run, *args, **kwargs):
      for name in names:
        run.verify(name)
      return fn(run, *args, **kwargs)
    wrapper.required_artifacts = names
    return wrapper
  return dec
