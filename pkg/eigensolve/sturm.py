#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import numpy as np

from jacobi.tridiagonal import SymmetricTridiagonal

__all__ = ['count_below', 'bisect_eigenvalues']

def _as_tridiagonal(T):
   if isinstance(T, SymmetricTridiagonal):
      return T.diag, T.off
   matrix = np.atleast_2d(np.asarray(T, dtype = float))
   return np.diag(matrix).copy(), np.diag(matrix, 1).copy()

def count_below(T, x):
   """Number of eigenvalues of a symmetric tridiagonal matrix strictly below x.

   Counts negative pivots of the LDL^T factorization of T - x, with tiny pivots
   replaced by -pivmin so the recurrence never divides by zero. `x` may be an
   array of shifts, in which case an array of counts is returned.
   """
   diag, off = _as_tridiagonal(T)
   shifts = np.atleast_1d(np.asarray(x, dtype = float))
   if len(diag) == 0:
      return 0 if np.ndim(x) == 0 else np.zeros(shifts.shape, dtype = np.int64)
   off_squared = off ** 2
   pivmin = np.finfo(float).tiny * max(1.0, float(off_squared.max()) if len(off) else 1.0)

   count = np.zeros(shifts.shape, dtype = np.int64)
   pivot = diag[0] - shifts
   for i in range(len(diag)):
      if i > 0:
         pivot = (diag[i] - shifts) - off_squared[i - 1] / pivot
      pivot = np.where(np.abs(pivot) < pivmin, -pivmin, pivot)
      count += pivot < 0
   return int(count[0]) if np.ndim(x) == 0 else count

def bisect_eigenvalues(T, lower, upper, tol = None):
   """All eigenvalues in [lower, upper) by bisection on the Sturm count.

   Each eigenvalue index is bracketed separately, so repeated eigenvalues come
   back with their multiplicity.
   """
   diag, off = _as_tridiagonal(T)
   if len(diag) == 0:
      return np.empty(0)
   if tol is None:
      scale = np.abs(diag).max() + (2 * np.abs(off).max() if len(off) else 0.0)
      tol = 1e-12 * max(1.0, scale)
   first, last = count_below(T, np.array([lower, upper]))
   if last <= first:
      return np.empty(0)

   # Bisect all brackets at once; eigenvalue k is the smallest x with count_below(x) > k.
   index = np.arange(first, last)
   left = np.full(len(index), float(lower))
   right = np.full(len(index), float(upper))
   for _ in range(256):
      if np.max(right - left) <= tol:
         break
      middle = 0.5 * (left + right)
      above = count_below(T, middle) > index
      right = np.where(above, middle, right)
      left = np.where(above, left, middle)
   return 0.5 * (left + right)
