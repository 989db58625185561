#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import sys
import logging

import numpy as np
from tqdm import tqdm

__all__ = ['DomainError', 'InvalidParameters', 'InvalidSpec', 'DimensionCapExceeded',
           'NoConvergence', 'NoEigenvalues', 'positive_part', 'negative_part',
           'spectral_positive_part', 'DENSE_CAP', 'check_dense_cap', 'configure_logging', 'progress']

# Default cap on dense eigensolves (matrix dimension).
DENSE_CAP = 4000

class DomainError(ValueError):
   """An argument lies outside the domain of a function (e.g. beta <= 2 or |E| < 2)."""

class InvalidParameters(ValueError):
   """Parameters outside the validity range of a construction or theorem."""

class InvalidSpec(ValueError):
   """A malformed perturbation, lattice or JSON spec."""
   def __init__(self, message, field = None, line = None, column = None):
      self.field = field
      self.line = line
      self.column = column
      location = []
      if line is not None:
         location.append(f"line {line}, column {column}")
      if field is not None:
         location.append(f"field '{field}'")
      if location:
         message = f"{message} ({'; '.join(location)})"
      super(InvalidSpec, self).__init__(message)

class DimensionCapExceeded(ValueError):
   """A dense solve was requested above the configured dimension cap."""

class NoConvergence(RuntimeError):
   """The truncation loop reached its maximum window without settling."""
   def __init__(self, message, report = None):
      super(NoConvergence, self).__init__(message)
      self.report = report

class NoEigenvalues(RuntimeError):
   """An operation required at least one eigenvalue outside the band."""

def positive_part(x):
   """Elementwise max(x, 0)."""
   return np.maximum(x, 0.0)

def negative_part(x):
   """Elementwise max(-x, 0), so that |x| = x_+ + x_-."""
   return np.maximum(np.negative(x), 0.0)

def spectral_positive_part(matrix):
   """Positive part of a symmetric matrix via its spectral decomposition."""
   matrix = np.asarray(matrix, dtype = float)
   values, vectors = np.linalg.eigh(matrix)
   return (vectors * np.maximum(values, 0.0)) @ vectors.T

def check_dense_cap(dimension, cap = DENSE_CAP):
   """Raise DimensionCapExceeded if a dense solve would be too large."""
   if dimension > cap:
      raise DimensionCapExceeded(f"Dense solve of dimension {dimension} exceeds the cap of {cap}.")

def configure_logging(verbose = False, quiet = False) -> None:
   """Configure the root logger for command-line runs."""
   level = logging.WARNING
   if verbose:
      level = logging.DEBUG
   elif quiet:
      level = logging.ERROR
   logging.basicConfig(level = level, stream = sys.stderr,
                       format = '%(asctime)s %(levelname)s %(name)s: %(message)s')

def progress(iterable, total = None, description = None, disable = None):
   """Wrap an iterable in a tqdm progress bar, silent when stderr is not a terminal."""
   if disable is None:
      disable = not sys.stderr.isatty()
   return tqdm(iterable, total = total, desc = description, disable = disable,
               file = sys.stderr, leave = False)
