#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Created on 02-10-2026 13:27:51

    The one-sided full shift on {1,...,d}^N at finite resolution: words, locally constant
    potentials, Birkhoff sums and preimages.

    A potential of memory m is a flat table of d^m values indexed lexicographically by its
    first m symbols, index(s_1...s_m) = sum_i (s_i - 1) d^(m-i). An infinite sequence is
    always a finite word followed by a tail long enough to supply the evaluation context.
"""
__author__ = "Benedict Wilkins"
__email__ = "benrjw@gmail.com"
__status__ = "Development"

import json
import logging
import itertools

import numpy as np

from numpy.lib.stride_tricks import sliding_window_view

from .errors import DomainError, ParseError
from .toolkit.debugutils import assertion

logger = logging.getLogger(__name__)

class Word(tuple):
    """ A finite word over the alphabet {1,...,d}.

    Args:
        symbols (iterable): integers in [1, d].
        d (int): alphabet size.
    """

    def __new__(cls, symbols, d):
        symbols = tuple(int(s) for s in symbols)
        assertion(d < 1, DomainError("alphabet size must be >= 1, got {0}".format(d)))
        bad = [s for s in symbols if not 1 <= s <= d]
        assertion(len(bad) > 0, DomainError("symbols {0} outside [1, {1}]".format(bad, d)))
        word = super(Word, cls).__new__(cls, symbols)
        word.d = d
        return word

    def __add__(self, other):
        return Word(tuple(self) + tuple(other), self.d)

    def shift(self, j=1):
        return Word(self[j:], self.d)

    def __str__(self):
        sep = '' if self.d <= 9 else ','
        return sep.join(str(s) for s in self)

    def __repr__(self):
        return "Word('{0}', d={1})".format(str(self), self.d)

def parse_word(text, d):
    """ Parse "1221" (d <= 9) or "1,12,3" into a Word. """
    text = text.strip()
    try:
        symbols = [int(s) for s in text.split(',')] if ',' in text else [int(c) for c in text]
    except ValueError:
        raise ParseError("not a word: '{0}'".format(text), field='word')
    return Word(symbols, d)

def word_index(symbols, d):
    """ Lexicographic index of a sequence of symbols in [1, d]. """
    index = 0
    for s in symbols:
        index = index * d + (s - 1)
    return index

def all_words(d, n):
    """ Every word of length n as rows of an int array (d^n, n), in lexicographic (index) order. """
    if n == 0:
        return np.zeros((1, 0), dtype=int)
    return np.stack(np.unravel_index(np.arange(d ** n), (d,) * n), axis=1) + 1

class Potential:
    """ A locally constant potential A(x) = A(x_1, ..., x_m).

    Args:
        d (int): alphabet size.
        memory (int): number of coordinates A depends on, m >= 1.
        values (array-like): d^m finite values in lexicographic order.
    """

    def __init__(self, d, memory, values):
        values = np.array(values, dtype=float).ravel()
        assertion(d < 1, DomainError("alphabet size must be >= 1, got {0}".format(d)))
        assertion(memory < 1, DomainError("memory must be >= 1, got {0}".format(memory)))
        assertion(values.size != d ** memory, DomainError("expected {0} values for d={1}, memory={2}, got {3}".format(d ** memory, d, memory, values.size)))
        assertion(not np.all(np.isfinite(values)), DomainError("potential values must be finite"))
        self.d = int(d)
        self.memory = int(memory)
        self.values = values
        self.values.flags.writeable = False

    @classmethod
    def constant(cls, d, a, memory=1):
        return cls(d, memory, np.full(d ** memory, float(a)))

    @classmethod
    def from_named(cls, named, d=None):
        """ Build from keys like "12" -> A(1,2). Requires d <= 9; memory is the key length. """
        assertion(len(named) == 0, ParseError("no values given", field='values_named'))
        lengths = {len(k) for k in named}
        assertion(len(lengths) != 1, ParseError("keys of mixed length", field='values_named'))
        m = lengths.pop()
        if d is None:
            d = int(round(len(named) ** (1. / m)))
        assertion(d > 9, ParseError("named keys require d <= 9", field='values_named'))
        assertion(len(named) != d ** m, ParseError("expected {0} keys for d={1}, memory={2}, got {3}".format(d ** m, d, m, len(named)), field='values_named'))
        values = np.empty(d ** m)
        for key, value in named.items():
            try:
                symbols = [int(c) for c in key]
            except ValueError:
                raise ParseError("bad key '{0}'".format(key), field='values_named')
            assertion(not all(1 <= s <= d for s in symbols), ParseError("key '{0}' outside [1, {1}]".format(key, d), field='values_named'))
            i = word_index(symbols, d)
            values[i] = _finite(value, 'values_named')
        return cls(d, m, values)

    def to_named(self):
        assertion(self.d > 9, DomainError("named keys require d <= 9"))
        return {''.join(str(s) for s in w): float(v) for w, v in zip(all_words(self.d, self.memory), self.values)}

    @property
    def size(self):
        return self.values.size

    def index(self, w):
        """ Table index of the context (first m symbols) of w. """
        assertion(len(w) < self.memory, DomainError("word of length {0} is shorter than the memory {1}".format(len(w), self.memory)))
        return word_index(w[:self.memory], self.d)

    def eval(self, w):
        """ A(w) for a word w of length >= m. """
        return float(self.values[self.index(w)])

    def __call__(self, w):
        return self.eval(w)

    def lift(self, memory):
        """ The same function represented with a larger memory. """
        assertion(memory < self.memory, DomainError("cannot lift memory {0} to {1}".format(self.memory, memory)))
        return Potential(self.d, memory, np.repeat(self.values, self.d ** (memory - self.memory)))

    def table(self, k=None):
        """ Values at memory k (default m) as a (d, d^(k-1)) array: row = first symbol, column = the rest. """
        k = self.memory if k is None else k
        return self.lift(k).values.reshape(self.d, self.d ** (k - 1))

    def _binary(self, other, op):
        if isinstance(other, Potential):
            assertion(other.d != self.d, DomainError("alphabet sizes differ: {0} vs {1}".format(self.d, other.d)))
            m = max(self.memory, other.memory)
            return Potential(self.d, m, op(self.lift(m).values, other.lift(m).values))
        return Potential(self.d, self.memory, op(self.values, float(other)))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __radd__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return Potential(self.d, self.memory, float(other) - self.values)

    def __mul__(self, other):
        return self._binary(other, np.multiply)

    def __rmul__(self, other):
        return self._binary(other, np.multiply)

    def __neg__(self):
        return Potential(self.d, self.memory, -self.values)

    def __eq__(self, other):
        if not isinstance(other, Potential):
            return NotImplemented
        return self.d == other.d and self.memory == other.memory and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.d, self.memory, self.values.tobytes()))

    def __repr__(self):
        return "Potential(d={0}, memory={1}, values={2})".format(self.d, self.memory, np.array2string(self.values, precision=6))

def coboundary(f):
    """ The potential f o sigma - f, of memory m(f) + 1. """
    r, d = f.memory, f.d
    i = np.arange(d ** (r + 1))
    return Potential(d, r + 1, f.values[i % d ** r] - f.values[i // d])

def _sequence(A, w, tail):
    tail = () if tail is None else tail
    assertion(len(tail) < A.memory - 1, DomainError("tail of length {0} cannot supply the context of a memory {1} potential".format(len(tail), A.memory)))
    return tuple(w) + tuple(tail)

def birkhoff_sum(A, w, tail=None):
    """ S_n A(x) = sum_{j<n} A(sigma^j x) for x = w.tail, n = len(w).

    Args:
        A (Potential): the potential.
        w (Word): the first n symbols of x.
        tail (Word, optional): the following symbols of x, at least m - 1 of them.
    """
    seq = _sequence(A, w, tail)
    n = len(w)
    if n == 0:
        return 0.
    s = np.asarray(seq[:n + A.memory - 1], dtype=int) - 1
    windows = sliding_window_view(s, A.memory)
    index = windows @ (A.d ** np.arange(A.memory - 1, -1, -1))
    return float(np.sum(A.values[index]))

def birkhoff_sum_naive(A, w, tail=None):
    """ Symbol-by-symbol evaluation of the Birkhoff sum. """
    seq = _sequence(A, w, tail)
    total = 0.
    for j in range(len(w)):
        total += A.eval(seq[j:])
    return total

def birkhoff_table(A, n):
    """ S_n A over all words of length n + m - 1 (every context of the n-step sum), lexicographic order. """
    k = n + A.memory - 1
    total = np.zeros(A.d ** k)
    i = np.arange(A.d ** k)
    for j in range(n):
        # drop the first j symbols, keep the next m
        total += A.values[(i % A.d ** (k - j)) // A.d ** (k - j - A.memory)]
    return total

def preimages(x_prefix, n):
    """ Iterate over the d^n words w with sigma^n(w.x) = x, in lexicographic order. """
    assertion(n < 0, DomainError("n must be >= 0"))
    d = x_prefix.d
    for w in itertools.product(range(1, d + 1), repeat=n):
        yield Word(w, d)

def dist(x, y):
    """ 2^-k where k is the first (0-based) coordinate at which x and y disagree.

    Words of different lengths that agree on the shorter one are at distance at most
    2^-min(len), which is returned.
    """
    n = min(len(x), len(y))
    for k in range(n):
        if x[k] != y[k]:
            return 2. ** -k
    if len(x) == len(y):
        return 0.
    return 2. ** -n

def lipschitz_bound(A):
    """ (max - min) 2^(m-1), a Lipschitz constant of A for dist. """
    return float((A.values.max() - A.values.min()) * 2. ** (A.memory - 1))

# ---------------------------------------------------------------- JSON

def _finite(value, field):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ParseError("not a number: {0!r}".format(value), field=field)
    if not np.isfinite(value):
        raise ParseError("not finite: {0!r}".format(value), field=field)
    return value

def potential_from_json(data):
    """ Build a Potential from a JSON document (str) or an already decoded dict.

    Schema: {"d": int, "memory": int, "values": [...]} in lexicographic order, or
    {"values_named": {"11": ..., "12": ...}} for d <= 9 ("d" optional).

    Raises:
        ParseError: malformed input.
    """
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, line=e.lineno)
    assertion(not isinstance(data, dict), ParseError("expected a JSON object"))
    if "values_named" in data:
        named = data["values_named"]
        assertion(not isinstance(named, dict), ParseError("expected an object", field='values_named'))
        A = Potential.from_named(named, d=data.get("d"))
        assertion("memory" in data and data.get("memory") != A.memory, ParseError("memory {0} does not match key length {1}".format(data.get("memory"), A.memory), field='memory'))
        return A
    for field in ("d", "memory", "values"):
        assertion(field not in data, ParseError("missing", field=field))
    d, memory, values = data["d"], data["memory"], data["values"]
    for field, v in (("d", d), ("memory", memory)):
        assertion(not isinstance(v, int) or isinstance(v, bool) or v < 1, ParseError("expected a positive integer, got {0!r}".format(v), field=field))
    assertion(not isinstance(values, list) or len(values) == 0, ParseError("expected a non-empty list", field='values'))
    values = [_finite(v, 'values') for v in values]
    assertion(len(values) != d ** memory, ParseError("expected {0} values for d={1}, memory={2}, got {3}".format(d ** memory, d, memory, len(values)), field='values'))
    return Potential(d, memory, values)

def potential_to_json(A, named=False):
    if named:
        return json.dumps(dict(d=A.d, memory=A.memory, values_named=A.to_named()))
    return json.dumps(dict(d=A.d, memory=A.memory, values=[float(v) for v in A.values]))

def load_potential(path):
    with open(path, 'r') as f:
        text = f.read()
    logger.debug("loading potential from %s", path)
    return potential_from_json(text)

def save_potential(A, path, named=False):
    with open(path, 'w') as f:
        f.write(potential_to_json(A, named=named))
