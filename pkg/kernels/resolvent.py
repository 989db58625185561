#!/usr/bin/env python3
# -*- coding = utf-8 -*-
from dataclasses import dataclass

import numpy as np

from util import DomainError, InvalidParameters

__all__ = ['WHOLE', 'HALF', 'BandParameter', 'band_parameter', 'band_parameter_from_mu',
           'free_resolvent_entry', 'half_line_edge_entry', 'free_resolvent_matrix']

WHOLE = 'whole'
HALF = 'half'

@dataclass(frozen = True)
class BandParameter:
   """Energy beta > 2 outside the band, with beta = mu + 1/mu (mu < 1) and w = 1/mu - mu."""
   beta: float
   mu: float
   w: float

def band_parameter(beta) -> BandParameter:
   if not beta > 2:
      raise DomainError(f"Band parameter requires beta > 2, got {beta}.")
   w = np.sqrt((beta - 2.0) * (beta + 2.0))
   # mu = 2 / (beta + w) avoids cancellation in (beta - w) / 2.
   return BandParameter(float(beta), float(2.0 / (beta + w)), float(w))

def band_parameter_from_mu(mu) -> BandParameter:
   if not 0 < mu < 1:
      raise DomainError(f"Band parameter requires 0 < mu < 1, got {mu}.")
   return BandParameter(float(mu + 1.0 / mu), float(mu), float(1.0 / mu - mu))

def _check_line(line, n, m):
   if line not in [WHOLE, HALF]:
      raise InvalidParameters(f"Invalid line {line!r}, should be '{WHOLE}' or '{HALF}'.")
   if line == HALF and (np.any(np.asarray(n) < 1) or np.any(np.asarray(m) < 1)):
      raise InvalidParameters("Half-line sites start at 1.")

def _entries(line, parameter, n, m):
   low, high = np.minimum(n, m), np.maximum(n, m)
   decay = parameter.mu ** (high - low)
   if line == WHOLE:
      return decay / parameter.w
   # (mu^{-low} - mu^{low}) mu^{high} = mu^{high - low} (1 - mu^{2 low})
   return decay * -np.expm1(2.0 * low * np.log(parameter.mu)) / parameter.w

def free_resolvent_entry(line, beta, n, m) -> float:
   """Matrix element (beta - J_0)^{-1}_{nm} of the free whole-line or half-line operator."""
   _check_line(line, n, m)
   return float(_entries(line, band_parameter(beta), int(n), int(m)))

def half_line_edge_entry(n, m) -> float:
   """The beta = 2 half-line kernel entry min(n, m)."""
   _check_line(HALF, n, m)
   return float(min(int(n), int(m)))

def free_resolvent_matrix(line, beta, sites):
   """Free resolvent restricted to a list of sites; beta = 2 on the half-line gives min(n, m)."""
   sites = np.asarray(sites, dtype = np.int64)
   _check_line(line, sites, sites)
   n, m = np.meshgrid(sites, sites, indexing = 'ij')
   if line == HALF and beta == 2:
      return np.minimum(n, m).astype(float)
   return _entries(line, band_parameter(beta), n, m)
