# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals

__all__ = ['Kind', 'HeaderKey']


class Kind(object):
  __slots__ = ()

  CHECKPOINT = 'checkpoint'
  MANIFEST = 'manifest'


class HeaderKey(object):
  __slots__ = ()

  CONFIG = 'config'
  NAMES = 'names'
  SHAPES = 'shapes'
  CHECKSUM = 'checksum'
  EXTRA = 'extra'
  CONFIG_HASH = 'config_hash'
  TOOL_VERSION = 'tool_version'
  CREATED = 'created'
  UPDATED = 'updated'
  ARTIFACTS = 'artifacts'
