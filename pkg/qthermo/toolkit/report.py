#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Created on 02-10-2026 10:15:27

    Write-once dictionaries for check reports. A check recorded twice is a bug in the caller.
"""
__author__ = "Benedict Wilkins"
__email__ = "benrjw@gmail.com"
__status__ = "Development"

class Report(dict):

    def __init__(self, *args, **kwargs):
        self.update(*args, **kwargs)

    def __setitem__(self, k, v):
        if k in self:
            raise KeyError("Key: {0} already exists.".format(k))
        super(Report, self).__setitem__(k, v)

    def update(self, *args, **kwargs):
        for k, v in dict(*args, **kwargs).items():
            self[k] = v

    @property
    def passed(self):
        """ True if every entry that carries a 'passed' field passed. """
        return all(v.get('passed', True) for v in self.values() if isinstance(v, dict))

    def failures(self):
        return [k for k, v in self.items() if isinstance(v, dict) and not v.get('passed', True)]
