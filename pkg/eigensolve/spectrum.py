#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sparse

from util import NoConvergence, InvalidParameters, DENSE_CAP, check_dense_cap
from jacobi.tridiagonal import SymmetricTridiagonal
from jacobi.perturbation import Band, TruncationPlan, HALF_LINE, build_truncated_matrix
from jacobi.lattice_spec import build_lattice_matrix
from eigensolve.sturm import bisect_eigenvalues

__all__ = ['EigenvalueReport', 'WindowSpectrum', 'solver_tolerance', 'split_outside_band', 'eigs_outside_band',
           'window_spectrum', 'converge_spectrum', 'discrete_spectrum', 'dense_eigs_oracle', 'lattice_spectrum']

logger = logging.getLogger(__name__)

@dataclass(frozen = True)
class EigenvalueReport:
   """Eigenvalues outside the essential band, ordered E_1^+ > E_2^+ > ... and E_1^- < E_2^- < ...

   `errors_plus` and `errors_minus` hold per-eigenvalue error estimates. Eigenvalues within
   the band's edge margin are left out of the lists and only counted in `flagged_plus`
   and `flagged_minus`.
   """
   E_plus: tuple = ()
   E_minus: tuple = ()
   errors_plus: tuple = ()
   errors_minus: tuple = ()
   window: tuple = None
   converged: bool = True
   flagged_plus: int = 0
   flagged_minus: int = 0
   band: Band = field(default_factory = Band)
   rounds: int = 0

   @property
   def N_plus(self) -> int:
      return len(self.E_plus)

   @property
   def N_minus(self) -> int:
      return len(self.E_minus)

   @property
   def flagged(self) -> int:
      return self.flagged_plus + self.flagged_minus

   @property
   def max_error(self) -> float:
      return max(self.errors_plus + self.errors_minus, default = 0.0)

   def to_dict(self):
      return {'E_plus': list(self.E_plus), 'E_minus': list(self.E_minus),
              'errors_plus': list(self.errors_plus), 'errors_minus': list(self.errors_minus),
              'window': list(self.window) if self.window is not None else None,
              'converged': self.converged, 'flagged_plus': self.flagged_plus,
              'flagged_minus': self.flagged_minus, 'edge_margin': self.band.edge_margin,
              'band_half_width': self.band.half_width, 'rounds': self.rounds}

def solver_tolerance(T) -> float:
   """Absolute eigenvalue tolerance 1e-12 * max(1, ||T||)."""
   return 1e-12 * max(1.0, T.norm_bound())

@dataclass(frozen = True)
class WindowSpectrum:
   """Eigenvalues of one truncation window, split against the band.

   `edge_plus` and `edge_minus` hold the values inside the edge margin. `bracket_plus`
   and `bracket_minus` count the eigenvalues beyond the margin once the cut bonds are
   replaced by +1 (or -1) on the window's end sites; that operator lies above (below)
   the full one, so the counts bound the full operator's counts. None skips the check.
   """
   plus: np.ndarray
   minus: np.ndarray
   edge_plus: np.ndarray
   edge_minus: np.ndarray
   solver_tol: float
   bracket_plus: int = None
   bracket_minus: int = None

   def unresolved(self) -> int:
      """Eigenvalues the brackets place beyond the margin with no truncated value to match."""
      missing = 0
      if self.bracket_plus is not None:
         missing += max(0, self.bracket_plus - len(self.plus) - len(self.edge_plus))
      if self.bracket_minus is not None:
         missing += max(0, self.bracket_minus - len(self.minus) - len(self.edge_minus))
      return missing

def _eigenvalues_between(T, lower, upper, method, tol):
   """Eigenvalues of T in (lower, upper]."""
   if len(T) == 0:
      return np.empty(0)
   if len(T) == 1:
      value = T.diag
      return value[(value > lower) & (value <= upper)]
   if method == 'lapack':
      return scipy.linalg.eigvalsh_tridiagonal(T.diag, T.off, select = 'v', select_range = (lower, upper),
                                               lapack_driver = 'stebz', tol = tol)
   return bisect_eigenvalues(T, lower, upper, tol = tol)

def _split(T, band, method, tol):
   """(plus descending, minus ascending, edge values above, edge values below)."""
   reach = T.norm_bound() + 1.0
   c = band.half_width

   # Nothing can lie outside the band if the Gershgorin disc stays inside it.
   if reach - 1.0 <= c:
      return np.empty(0), np.empty(0), np.empty(0), np.empty(0)
   plus = np.sort(_eigenvalues_between(T, band.upper, reach, method, tol))[::-1]
   minus = np.sort(_eigenvalues_between(T, -reach, band.lower, method, tol))
   edge_plus = np.sort(_eigenvalues_between(T, c, band.upper, method, tol))[::-1]
   edge_minus = np.sort(_eigenvalues_between(T, band.lower, -c, method, tol))
   return plus, minus, edge_plus, edge_minus

def split_outside_band(T, band = None, method = 'lapack', tol = None):
   """Split the eigenvalues of T outside the band by sign and count the edge-flagged ones.

   Returns (plus descending, minus ascending, flagged above, flagged below).
   """
   if method not in ['lapack', 'sturm']:
      raise InvalidParameters(f"Invalid eigenvalue method {method!r}, should be 'lapack' or 'sturm'.")
   band = band or Band()
   tol = solver_tolerance(T) if tol is None else tol
   plus, minus, edge_plus, edge_minus = _split(T, band, method, tol)
   return plus, minus, len(edge_plus), len(edge_minus)

def eigs_outside_band(T, band = None, method = 'lapack', tol = None):
   """All eigenvalues of T with |E| > c + edge margin, in descending order."""
   plus, minus, _, _ = split_outside_band(T, band, method, tol)
   return np.concatenate([plus, minus[::-1]])

def _shift_ends(T, ends, shift):
   diag = T.diag.copy()
   for row in ends:
      diag[row] += shift
   return SymmetricTridiagonal(diag, T.off, first = T.first)

def window_spectrum(T, band = None, method = 'lapack', half_line = False) -> WindowSpectrum:
   """Split a truncation window's eigenvalues and bracket the counts of the full operator.

   The window must cover the support, so every cut bond carries a = 1.
   """
   if method not in ['lapack', 'sturm']:
      raise InvalidParameters(f"Invalid eigenvalue method {method!r}, should be 'lapack' or 'sturm'.")
   band = band or Band()
   tol = solver_tolerance(T)
   plus, minus, edge_plus, edge_minus = _split(T, band, method, tol)

   # A cut bond [[0, 1], [1, 0]] lies between -I and I on its two end sites.
   ends = [len(T) - 1] if half_line else [0, len(T) - 1]
   upper, lower = _shift_ends(T, ends, 1.0), _shift_ends(T, ends, -1.0)
   above = _eigenvalues_between(upper, band.upper, upper.norm_bound() + 1.0, method, tol)
   below = _eigenvalues_between(lower, -lower.norm_bound() - 1.0, band.lower, method, tol)
   return WindowSpectrum(plus, minus, edge_plus, edge_minus, tol, len(above), len(below))

def _settled(current, previous, threshold):
   """Counts agree and every tracked value, edge values included, moved less than the threshold."""
   for name in ['plus', 'minus', 'edge_plus', 'edge_minus']:
      now, before = getattr(current, name), getattr(previous, name)
      if len(now) != len(before):
         return False
      if len(now) and np.max(np.abs(now - before)) >= threshold:
         return False
   return True

def converge_spectrum(compute, support, plan = None, half_line = False, band = None):
   """Grow the truncation window until the outside eigenvalues settle.

   `compute(window)` returns a WindowSpectrum for the inclusive site window. The window
   is the support padded on each open side by the plan's successive paddings. A window
   counts as settled when its eigenvalues, edge values included, agree with the previous
   window's within max(tolerance, 4 solver_tol) and its brackets see no eigenvalue beyond
   the margin that the truncation has not produced yet.
   """
   plan = plan or TruncationPlan()
   band = band or Band()
   lo, hi = support
   previous, last, rounds = None, None, 0
   for pad in plan.paddings():
      window = (1, hi + pad) if half_line else (lo - pad, hi + pad)
      if window[1] - window[0] + 1 > plan.max_window:
         break
      current = compute(window)
      rounds += 1
      plus, minus = current.plus, current.minus
      flagged_plus, flagged_minus = len(current.edge_plus), len(current.edge_minus)
      solver_tol = current.solver_tol
      threshold = max(plan.tolerance, 4.0 * solver_tol)
      logger.debug("Window %s: %d above, %d below, %d flagged, %d unresolved.", window, len(plus),
                   len(minus), flagged_plus + flagged_minus, current.unresolved())

      if previous is not None:
         # Truncated E^+ can only grow with the window, E^- only shrink.
         k, j = min(len(plus), len(previous.plus)), min(len(minus), len(previous.minus))
         if np.any(plus[:k] < previous.plus[:k] - 2 * solver_tol) or \
               np.any(minus[:j] > previous.minus[:j] + 2 * solver_tol):
            logger.warning("Eigenvalues moved against window monotonicity at window %s.", window)

         if _settled(current, previous, threshold) and current.unresolved() == 0:
            if flagged_plus or flagged_minus:
               logger.warning("%d eigenvalue(s) within %g of the band edge were excluded.",
                              flagged_plus + flagged_minus, band.edge_margin)
            step_plus = np.abs(plus - previous.plus)
            step_minus = np.abs(minus - previous.minus)
            return EigenvalueReport(tuple(plus.tolist()), tuple(minus.tolist()),
                                    tuple((step_plus + solver_tol).tolist()),
                                    tuple((step_minus + solver_tol).tolist()),
                                    window, True, flagged_plus, flagged_minus, band, rounds)
      previous = current
      last = (current, window)

   # The window limit was reached without settling.
   if last is None:
      report = EigenvalueReport(converged = False, band = band, rounds = rounds)
   else:
      current, window = last
      report = EigenvalueReport(tuple(current.plus.tolist()), tuple(current.minus.tolist()),
                                tuple([np.inf] * len(current.plus)), tuple([np.inf] * len(current.minus)),
                                window, False, len(current.edge_plus), len(current.edge_minus), band, rounds)
   raise NoConvergence(f"Eigenvalues did not settle below tolerance {plan.tolerance:g} within "
                       f"{plan.max_window} sites; an eigenvalue is likely too close to the band edge.",
                       report = report)

def discrete_spectrum(spec, plan = None, band = None, method = 'lapack', raise_on_failure = True):
   """Discrete spectrum of a Jacobi operator by the monotone truncation loop."""
   plan = plan or TruncationPlan()
   band = band or Band()
   half_line = spec.kind == HALF_LINE
   support = spec.support()
   if support is None:
      window = (1, plan.initial) if half_line else (-plan.initial, plan.initial)
      return EigenvalueReport(window = window, band = band)

   def compute(window):
      return window_spectrum(build_truncated_matrix(spec, window), band, method, half_line)

   try:
      return converge_spectrum(compute, support, plan, half_line, band)
   except NoConvergence as e:
      if raise_on_failure:
         raise
      logger.warning(str(e))
      return e.report

def dense_eigs_oracle(M, cap = DENSE_CAP):
   """Full spectrum of a symmetric matrix in ascending order by a dense solve."""
   if isinstance(M, SymmetricTridiagonal):
      M = M.toarray()
   elif sparse.issparse(M):
      M = M.toarray()
   M = np.atleast_2d(np.asarray(M, dtype = float))
   if M.ndim != 2 or M.shape[0] != M.shape[1]:
      raise InvalidParameters(f"Expected a square matrix, got shape {M.shape}.")
   check_dense_cap(M.shape[0], cap)
   if not np.allclose(M, M.T, atol = 1e-12 * max(1.0, np.abs(M).max())):
      raise InvalidParameters("Matrix is not symmetric.")
   return scipy.linalg.eigvalsh(M)

def lattice_spectrum(spec, band = None, cap = DENSE_CAP):
   """Eigenvalues of a lattice operator outside [-2 nu, 2 nu] by a dense solve on the box.

   The report counts as converged only when the support keeps the spec's buffer
   distance to the box boundary.
   """
   band = band or Band.for_lattice(spec.nu)
   check_dense_cap(spec.dimension, cap)
   values = scipy.linalg.eigvalsh(build_lattice_matrix(spec).toarray())
   c = band.half_width
   plus = np.sort(values[values > band.upper])[::-1]
   minus = np.sort(values[values < band.lower])
   flagged_plus = int(np.sum((values > c) & (values <= band.upper)))
   flagged_minus = int(np.sum((values < -c) & (values >= band.lower)))
   tol = 1e-12 * max(1.0, float(np.abs(values).max()))

   converged = spec.buffer_ok()
   if not converged:
      logger.warning("Support lies %s sites from the box boundary, closer than the buffer of %d.",
                     spec.boundary_distance(), spec.buffer)
   return EigenvalueReport(tuple(plus.tolist()), tuple(minus.tolist()),
                           tuple([tol] * len(plus)), tuple([tol] * len(minus)),
                           spec.box, converged, flagged_plus, flagged_minus, band, 1)
