# vim: set et nosi ai ts=2 sts=2 sw=2:
# -*- coding: utf-8 -*-
import os

from setuptools import setup


def read_local_file(filename):
  with open(os.path.join(os.path.dirname(__file__), filename)) as f:
    return f.read().strip()


README = read_local_file('README')
VERSION = __import__('gdrift').__version__
setup(
    name='gdrift',
    version=VERSION,
    description='Gradient-drift membership inference auditing on a desk-scale transformer',
    long_description=README,
    license='MIT',
    packages=[
        'gdrift',
        'gdrift.ad',
        'gdrift.attacks',
        'gdrift.classify',
        'gdrift.corpus',
        'gdrift.harness',
        'gdrift.lm',
        'gdrift.wire',
    ],
    install_requires=[
        'msgpack >= 1.0',
        'numpy >= 1.17',
        'python-dateutil',
        'six',
    ],
    entry_points={
        'console_scripts': [
            'gdrift = gdrift.harness.cli:main',
        ],
    },
    test_suite='nose.collector',
    tests_require=[
        'nose',
    ],
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'Topic :: Security',
    ],
)
