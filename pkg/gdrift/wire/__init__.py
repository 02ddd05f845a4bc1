# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
from .constants import HeaderKey, Kind
from .reader import Container, Reader
from .writer import Writer

__all__ = ['Container', 'HeaderKey', 'Kind', 'Reader', 'Writer']
