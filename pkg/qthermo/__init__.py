#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Created on 02-10-2026 09:12:40

    Non-extensive (Tsallis) thermodynamic formalism for the one-sided full shift.
"""
__author__ = "Benedict Wilkins"
__email__ = "benrjw@gmail.com"
__status__ = "Development"

from . import errors
from . import qfun
from . import shift
from . import staticq
from . import ruelle
from . import qsolve
from . import subadd
from . import variational

__all__ = ('errors', 'qfun', 'shift', 'staticq', 'ruelle', 'qsolve', 'subadd', 'variational')
