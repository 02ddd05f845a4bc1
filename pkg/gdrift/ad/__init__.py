# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
from .tensor import GradientSet, Graph, Node, Tensor, backward
from .primitives import add, concat_cols, cols, cross_entropy, embedding, gelu, layer_norm, matmul, mul, reshape, row, rows, scale, softmax, sum_all, transpose
from .gradcheck import check_gradients, max_relative_error, numerical_gradients

__all__ = ['GradientSet', 'Graph', 'Node', 'Tensor', 'backward', 'add', 'concat_cols', 'cols', 'cross_entropy', 'embedding', 'gelu', 'layer_norm', 'matmul', 'mul', 'reshape', 'row', 'rows', 'scale', 'softmax', 'sum_all', 'transpose', 'check_gradients', 'max_relative_error', 'numerical_gradients']
