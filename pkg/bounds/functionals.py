#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import numpy as np

from util import DomainError, InvalidParameters

__all__ = ['band_functional', 'moment_functional', 'shifted_band_functional']

def _magnitudes(E, edge):
   magnitude = np.abs(np.asarray(E, dtype = float))
   if np.any(magnitude < edge):
      raise DomainError(f"Energy {E} lies inside the band [-{edge}, {edge}].")
   return magnitude

def _scalar_or_array(E, values):
   return float(values) if np.ndim(E) == 0 else values

def band_functional(E):
   """sqrt(E^2 - 4) for |E| >= 2."""
   magnitude = _magnitudes(E, 2.0)
   return _scalar_or_array(E, np.sqrt((magnitude - 2.0) * (magnitude + 2.0)))

def moment_functional(E, p, edge = 2.0):
   """|E - nearest edge|^p for energies outside [-edge, edge]."""
   if p < 0:
      raise InvalidParameters(f"Moment power should be nonnegative, got {p}.")
   magnitude = _magnitudes(E, edge)
   return _scalar_or_array(E, (magnitude - edge) ** p)

def shifted_band_functional(E, nu):
   """sqrt((|E| - 2(nu - 1))^2 - 4), the chain functional after stripping nu - 1 directions."""
   magnitude = _magnitudes(E, 2.0 * nu)
   return band_functional(magnitude - 2.0 * (nu - 1))
