# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals

__all__ = ['GDriftException', 'ShapeError', 'NumericalError', 'ContractError', 'InputError', 'IntegrityError', 'TrainingError', 'ConstructionError', 'ReaderException', 'WriterException']


class GDriftException(Exception):
  pass


class ShapeError(GDriftException):
  def __init__(self, primitive, *shapes):
    self.primitive = primitive
    self.shapes = tuple(tuple(s) for s in shapes)
    dims = ', '.join(str(list(s)) for s in self.shapes)
    super(ShapeError, self).__init__('{0}: incompatible shapes {1}'.format(primitive, dims))


class NumericalError(GDriftException):
  def __init__(self, primitive):
    self.primitive = primitive
    super(NumericalError, self).__init__('{0}: produced a non-finite value'.format(primitive))


class ContractError(GDriftException):
  pass


class InputError(GDriftException, ValueError):
  pass


class IntegrityError(GDriftException):
  pass


class TrainingError(GDriftException):
  def __init__(self, epoch, loss):
    self.epoch = epoch
    self.loss = loss
    super(TrainingError, self).__init__('training diverged at epoch {0} (mean loss {1!r})'.format(epoch, loss))


class ConstructionError(GDriftException):
  pass


class ReaderException(GDriftException):
  pass


class WriterException(GDriftException):
  pass
