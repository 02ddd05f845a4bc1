# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
from .world import AUTHOR, COUNTRY, LANDMARK, RELATIONS, Fact, Relation, World, generate_world, render_qa
from .tokenizer import Tokenizer, Vocabulary, read_vocabulary, write_vocabulary
from .dataset import COUNTERFACTUAL, FUTURE_FACT, MEMBER, NONMEMBER, Sample, build_membership_dataset, make_sample, paraphrase_set
from .splits import DEFAULT_FRACTIONS, SPLIT_NAMES, SplitSet, allocate, split
from .io import read_dataset, write_dataset

__all__ = ['AUTHOR', 'COUNTRY', 'LANDMARK', 'RELATIONS', 'Fact', 'Relation', 'World', 'generate_world', 'render_qa', 'Tokenizer', 'Vocabulary', 'read_vocabulary', 'write_vocabulary', 'COUNTERFACTUAL', 'FUTURE_FACT', 'MEMBER', 'NONMEMBER', 'Sample', 'build_membership_dataset', 'make_sample', 'paraphrase_set', 'DEFAULT_FRACTIONS', 'SPLIT_NAMES', 'SplitSet', 'allocate', 'split', 'read_dataset', 'write_dataset']
