#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Created on 02-10-2026 09:40:11

    Small general-purpose utilities used by the numerical modules.
"""
__author__ = "Benedict Wilkins"
__email__ = "benrjw@gmail.com"
__status__ = "Development"

from . import debugutils
from . import accumulate
from . import report
from . import optimise

__all__ = ('debugutils', 'accumulate', 'report', 'optimise')
