#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import numpy as np

__all__ = ['SymmetricTridiagonal']

class SymmetricTridiagonal(object):
   """A real symmetric tridiagonal matrix stored by its diagonal and off-diagonal.

   Row 0 corresponds to lattice site `first`, so site n lives in row n - first.
   """
   def __init__(self, diag, off, first = 0):
      diag = np.asarray(diag, dtype = float)
      off = np.asarray(off, dtype = float)
      if diag.ndim != 1 or off.ndim != 1:
         raise ValueError("Diagonal and off-diagonal should be one-dimensional arrays.")
      if len(off) != max(len(diag) - 1, 0):
         raise ValueError(f"Off-diagonal of length {len(off)} does not match "
                          f"diagonal of length {len(diag)}.")
      self._diag = diag
      self._off = off
      self.first = int(first)

   def __len__(self):
      return len(self._diag)

   def __repr__(self):
      return f"SymmetricTridiagonal(n={len(self)}, first={self.first})"

   @property
   def diag(self):
      return self._diag

   @property
   def off(self):
      return self._off

   @property
   def sites(self):
      """Site labels of the rows, in order."""
      return np.arange(self.first, self.first + len(self))

   def row(self, site):
      """Row index of a site label."""
      return int(site) - self.first

   def norm_bound(self):
      """Gershgorin bound on the spectral norm."""
      radius = np.abs(self._diag).copy()
      radius[:-1] += np.abs(self._off)
      radius[1:] += np.abs(self._off)
      return float(radius.max()) if len(radius) else 0.0

   def toarray(self):
      """Dense representation."""
      return np.diag(self._diag) + np.diag(self._off, 1) + np.diag(self._off, -1)

