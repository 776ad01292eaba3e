#!/usr/bin/env python

from setuptools import setup
import os, hybridlr

here = os.path.abspath(os.path.dirname(__file__))

# Get the long description from the README file
with open(os.path.join(here, 'README.rst')) as f:
    long_description = f.read()

with open(os.path.join(here, 'requirements.txt')) as f:
    requirements = [l.strip() for l in f if l.strip() and not l.startswith('#')]

setup(
    name='hybridlr',
    version=hybridlr.version,
    description='Two-stage hybrid credit scoring: tiny neural network features for stepwise logistic regression',
    long_description=long_description,
    packages=['hybridlr'],
    package_data={'hybridlr' : ['../LICENSE.txt']},
    install_requires=requirements,
    test_suite='tests',
    entry_points={
        'console_scripts': [ 'hybridlr=hybridlr:main' ]
    },
    license='BSD',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Financial and Insurance Industry',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Information Analysis',
        'License :: OSI Approved :: BSD License',
        'Programming Language :: Python :: 3',
    ],
)
