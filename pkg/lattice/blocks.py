#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import logging
from types import MappingProxyType
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg
import scipy.sparse as sparse

from util import InvalidSpec, InvalidParameters
from jacobi.perturbation import Band, TruncationPlan
from eigensolve.spectrum import WindowSpectrum, converge_spectrum
from bounds.functionals import band_functional
from bounds.evaluate import RELATIVE_SLACK, make_report, eigen_sum

__all__ = ['BlockJacobiSpec', 'block_matrix', 'block_spectrum', 'block_traces', 'block_lemma51_check',
           'block_lemma51_pair']

logger = logging.getLogger(__name__)

@dataclass(frozen = True)
class BlockJacobiSpec:
   """Whole-line free chain tensored with R^d, plus symmetric d x d blocks B(n) on the diagonal."""
   blocks: dict = field(default_factory = dict)
   fiber: int = None

   def __post_init__(self):
      blocks, dims = {}, set()
      for key, value in dict(self.blocks).items():
         try:
            site = int(key)
         except (TypeError, ValueError):
            raise InvalidSpec(f"Block site {key!r} is not an integer.", field = 'blocks')
         value = np.atleast_2d(np.asarray(value, dtype = float))
         if value.ndim != 2 or value.shape[0] != value.shape[1]:
            raise InvalidSpec(f"Block at site {site} should be a square matrix.", field = 'blocks')
         if not np.all(np.isfinite(value)):
            raise InvalidSpec(f"Block at site {site} is not finite.", field = 'blocks')
         if not np.allclose(value, value.T, atol = 1e-14):
            raise InvalidSpec(f"Block at site {site} is not symmetric.", field = 'blocks')
         dims.add(value.shape[0])
         value = value.copy()
         value.setflags(write = False)
         if np.any(value != 0):
            blocks[site] = value
      if self.fiber is not None:
         dims.add(int(self.fiber))
      if len(dims) > 1:
         raise InvalidSpec(f"Blocks have mixed sizes {sorted(dims)}.", field = 'blocks')
      fiber = dims.pop() if dims else 1
      if fiber < 1:
         raise InvalidSpec(f"Fiber dimension should be at least 1, got {fiber}.", field = 'fiber')
      object.__setattr__(self, 'blocks', MappingProxyType(dict(sorted(blocks.items()))))
      object.__setattr__(self, 'fiber', fiber)

   def __eq__(self, other):
      if not isinstance(other, BlockJacobiSpec):
         return NotImplemented
      return self.fiber == other.fiber and self.blocks.keys() == other.blocks.keys() and \
         all(np.array_equal(self.blocks[k], other.blocks[k]) for k in self.blocks)

   def __hash__(self):
      return hash((self.fiber, tuple(self.blocks.keys())))

   def support(self):
      """(first, last) site carrying a nonzero block, or None when free."""
      if not self.blocks:
         return None
      sites = list(self.blocks)
      return sites[0], sites[-1]

   def block_at(self, site):
      return self.blocks.get(site, np.zeros((self.fiber, self.fiber)))

def _block_operator(spec, window):
   lo, hi = int(window[0]), int(window[1])
   if hi < lo:
      raise InvalidParameters(f"Window {window} is empty.")
   size = hi - lo + 1
   free = sparse.diags([np.ones(size - 1), np.ones(size - 1)], [-1, 1], shape = (size, size))
   hopping = sparse.kron(free, sparse.identity(spec.fiber))
   diagonal = sparse.block_diag([spec.block_at(n) for n in range(lo, hi + 1)])
   return (hopping + diagonal).tocsr()

def block_matrix(spec, window) -> np.ndarray:
   """Dense matrix of (free chain) x I_d + diag(B(n)) on an inclusive site window."""
   return _block_operator(spec, window).toarray()

def _lower_banded(M, bandwidth):
   """Lower banded storage: row k holds the k-th subdiagonal."""
   size = M.shape[0]
   return np.array([np.pad(M.diagonal(-k), (0, k)) if k < size else np.zeros(size)
                    for k in range(bandwidth + 1)])

def _values_between(M, bandwidth, lower, upper):
   """Eigenvalues of a symmetric banded matrix in (lower, upper]."""
   return scipy.linalg.eigvals_banded(_lower_banded(M, bandwidth), lower = True, select = 'v',
                                      select_range = (lower, upper))

def block_spectrum(spec, plan = None, band = None):
   """Converged eigenvalues outside [-2, 2] of a block chain, by banded solves on growing windows.

   The plan's window limit counts matrix rows, so it holds max_window // d sites.
   """
   band = band or Band()
   plan = plan or TruncationPlan()
   d = spec.fiber
   plan = replace(plan, max_window = max(plan.max_window // d, 1),
                  initial = min(plan.initial, max(plan.max_window // d, 1)))
   support = spec.support() or (0, 0)
   norm = max([float(np.abs(scipy.linalg.eigvalsh(b)).max()) for b in spec.blocks.values()], default = 0.0)
   reach = norm + 4.0
   c = band.half_width

   def compute(window):
      M = _block_operator(spec, window)
      plus = np.sort(_values_between(M, d, band.upper, reach))[::-1]
      minus = np.sort(_values_between(M, d, -reach, band.lower))
      edge_plus = np.sort(_values_between(M, d, c, band.upper))[::-1]
      edge_minus = np.sort(_values_between(M, d, band.lower, -c))

      # The cut bonds lie between -I and I on the end sites' fibers.
      ends = np.zeros(M.shape[0])
      ends[:d] = ends[-d:] = 1.0
      above = _values_between(M + sparse.diags(ends), d, band.upper, reach)
      below = _values_between(M - sparse.diags(ends), d, -reach, band.lower)
      return WindowSpectrum(plus, minus, edge_plus, edge_minus, 1e-12 * max(1.0, reach),
                            len(above), len(below))

   return converge_spectrum(compute, support, plan, False, band)

def block_traces(spec):
   """(sum of Tr B^+(n), sum of Tr B^-(n)) from the eigenvalues of each block."""
   plus, minus = 0.0, 0.0
   for block in spec.blocks.values():
      values = scipy.linalg.eigvalsh(block)
      plus += float(np.sum(np.maximum(values, 0.0)))
      minus += float(np.sum(np.maximum(-values, 0.0)))
   return plus, minus

def block_lemma51_check(spec, sign = '+', plan = None, band = None, report = None):
   """Check sum sqrt(E^2 - 4) over one sign against the trace of the matching block parts.

   A precomputed `report` from block_spectrum is reused instead of solving again.
   """
   if sign not in ['+', '-']:
      raise InvalidParameters(f"Sign should be '+' or '-', got {sign!r}.")
   if report is None:
      report = block_spectrum(spec, plan, band)
   lhs, propagated = eigen_sum(report, band_functional, 'plus' if sign == '+' else 'minus')
   plus, minus = block_traces(spec)
   rhs = plus if sign == '+' else minus
   tolerance = RELATIVE_SLACK * max(1.0, abs(rhs)) + propagated
   details = {'fiber': spec.fiber, 'N_plus': report.N_plus, 'N_minus': report.N_minus,
              'flagged': report.flagged}
   return make_report(f'L5_1({sign})', lhs, rhs, tolerance, report.converged, details = details)

def block_lemma51_pair(spec, plan = None, band = None):
   """Both signs of the block check, sharing one spectrum."""
   report = block_spectrum(spec, plan, band)
   return [block_lemma51_check(spec, s, report = report) for s in ['+', '-']]
