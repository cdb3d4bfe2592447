#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Created on 02-10-2026 09:20:03

    Exceptions raised across qthermo. The CLI maps them to exit codes.
"""
__author__ = "Benedict Wilkins"
__email__ = "benrjw@gmail.com"
__status__ = "Development"


class QThermoError(Exception):
    pass

class DomainError(QThermoError, ValueError):
    """ An argument lies outside the domain of a function (or a size guard was exceeded). """
    pass

class QExpDomain(DomainError):
    """ 1 + (1-q)u <= 0 for a q-exponential. 

    Args:
        message (str): description.
        location (object, optional): where the offending argument came from, e.g. (symbol, context).
    """

    def __init__(self, message, location=None):
        super(QExpDomain, self).__init__(message)
        self.location = location

class ParseError(QThermoError, ValueError):

    def __init__(self, message, field=None, line=None):
        if line is not None:
            message = "line {0}: {1}".format(line, message)
        if field is not None:
            message = "{0}: {1}".format(field, message)
        super(ParseError, self).__init__(message)
        self.field = field
        self.line = line

class ConvergenceError(QThermoError, RuntimeError):
    """ An iterative method hit its cap or broke down.

    Args:
        message (str): description.
        best (object, optional): best value found before giving up.
    """

    def __init__(self, message, best=None):
        super(ConvergenceError, self).__init__(message)
        self.best = best

class NoPositiveBranch(ConvergenceError):
    pass
