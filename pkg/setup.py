#!/usr/bin/env python3
"""
Setup configuration for the Stem Workbench package.

This package runs BM25 retrieval experiments that compare classic
stemmers with stemming performed by large language models.
"""

from setuptools import setup, find_packages
import os

# Read the contents of README file
this_directory = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(this_directory, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

# Read requirements
with open(os.path.join(this_directory, 'requirements.txt')) as f:
    requirements = f.read().splitlines()

# Filter out comments, empty lines and test tooling
dev_requirements = [req for req in requirements if req.startswith('pytest')]
requirements = [req for req in requirements
                if req and not req.startswith('#') and req not in dev_requirements]

setup(
    name='stem-workbench',
    version='0.1.0',
    description='LLM-based stemming for BM25 retrieval experiments',
    long_description=long_description,
    long_description_content_type='text/markdown',
    package_dir={'': 'src'},
    packages=find_packages(where='src'),
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'Topic :: Text Processing :: Indexing',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Operating System :: OS Independent',
    ],
    python_requires='>=3.8',
    install_requires=requirements,
    extras_require={
        'dev': dev_requirements,
    },
    keywords=[
        'information retrieval',
        'stemming',
        'large language models',
        'bm25',
        'trec',
        'query expansion',
        'named entities',
    ],
    entry_points={
        'console_scripts': [
            'stem-workbench=stem_workbench.cli:main',
        ],
    },
    include_package_data=True,
    package_data={
        'stem_workbench': ['data/*.yaml', 'data/toy/*'],
    },
    zip_safe=False,
)
