#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Fri Oct 02 09:05:51 2026

@author: ben
"""

from setuptools import setup, find_packages

setup(name='qthermo',
      version='0.0.1',
      description='Non-extensive thermodynamic formalism on the full shift: q-entropies, q-pressures and deformed Ruelle equations.',
      url='',
      author='Benedict Wilkins',
      author_email='benrjw@gmail.com',
      packages=find_packages(),
      install_requires=["numpy",
                        "scipy",
                        "pandas>=1.5"],
      entry_points={'console_scripts': ['qthermo=qthermo.cli:main']},
      zip_safe=False)
