#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import logging
from numbers import Real
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from util import InvalidParameters, NoEigenvalues
from jacobi.perturbation import Perturbation, TruncationPlan, HALF_LINE, WHOLE_LINE, build_truncated_matrix
from eigensolve.spectrum import discrete_spectrum
from kernels.resolvent import WHOLE, HALF, band_parameter, free_resolvent_matrix

__all__ = ['L_MU', 'L_GENERAL', 'K_BETA', 'K2_BARGMANN', 'BSKernel', 'build_bs_kernel',
           'generalized_kernel', 'partial_sums_S', 'check_monotone_S', 'check_bond_monotone', 'check_fixed_point',
           'resolvent_domination_check', 'BargmannChain', 'bargmann_chain_check']

logger = logging.getLogger(__name__)

L_MU = 'L_mu'
L_GENERAL = 'L_general'
K_BETA = 'K_beta'
K2_BARGMANN = 'K2_bargmann'

@dataclass(frozen = True)
class BSKernel:
   """A Birman-Schwinger-type kernel B^{1/2} G B^{1/2} over the support sites of b."""
   kind: str
   sites: tuple
   b: tuple
   parameter: object
   line: str
   matrix: np.ndarray = field(repr = False, compare = False)

   @property
   def trace(self) -> float:
      return float(np.trace(self.matrix))

   def eigenvalues(self):
      """Eigenvalues in descending order."""
      return scipy.linalg.eigvalsh(self.matrix)[::-1] if len(self.sites) else np.empty(0)

def _diagonal(b):
   """Sorted support sites and values of a nonnegative diagonal perturbation."""
   if isinstance(b, Perturbation):
      b = b.b
   sites, values = [], []
   for site, value in sorted(dict(b).items()):
      value = float(value)
      if not np.isfinite(value) or value < 0:
         raise InvalidParameters(f"Kernel potentials must be nonnegative, got b = {value} at site {site}.")
      if value > 0:
         sites.append(int(site))
         values.append(value)
   return np.array(sites, dtype = np.int64), np.array(values)

def _chain_products(sites, mus, default = 1.0):
   """Matrix of prod_{k = min(n, m)}^{max(n, m) - 1} mu_k over bond values."""
   core = np.ones((len(sites), len(sites)))
   for i, n in enumerate(sites):
      for j in range(i + 1, len(sites)):
         m = sites[j]
         core[i, j] = core[j, i] = np.prod([mus.get(k, default) for k in range(n, m)])
   return core

def build_bs_kernel(kind, b, parameter = None, line = WHOLE) -> BSKernel:
   """Build L_mu, L_general (per-bond mu_n), K_beta, or the beta = 2 half-line kernel K2."""
   sites, values = _diagonal(b)
   if kind == L_MU:
      if not isinstance(parameter, Real) or not 0 < parameter <= 1:
         raise InvalidParameters(f"L_mu requires 0 < mu <= 1, got {parameter!r}.")
      core = float(parameter) ** np.abs(sites[:, None] - sites[None, :])
   elif kind == L_GENERAL:
      mus = {int(k): float(v) for k, v in dict(parameter or {}).items()}
      core = _chain_products(sites, mus)
   elif kind == K_BETA:
      if not isinstance(parameter, Real):
         raise InvalidParameters(f"K_beta requires a real beta > 2, got {parameter!r}.")
      core = free_resolvent_matrix(line, float(parameter), sites)
   elif kind == K2_BARGMANN:
      line, parameter = HALF, 2.0
      core = free_resolvent_matrix(HALF, 2.0, sites)
   else:
      raise InvalidParameters(f"Invalid kernel kind {kind!r}, should be one of "
                              f"{[L_MU, L_GENERAL, K_BETA, K2_BARGMANN]}.")
   root = np.sqrt(values)
   matrix = root[:, None] * core * root[None, :]
   return BSKernel(kind, tuple(sites.tolist()), tuple(values.tolist()), parameter, line, matrix)

def generalized_kernel(b, mus) -> BSKernel:
   """L_{{mu_n}} with a separate mu_n on each bond; missing bonds take mu = 1."""
   return build_bs_kernel(L_GENERAL, b, mus)

def partial_sums_S(M, n, sign = '+') -> float:
   """Sum of the n largest (sign '+') or n smallest (sign '-') eigenvalues of M."""
   if isinstance(M, BSKernel):
      M = M.matrix
   values = scipy.linalg.eigvalsh(np.atleast_2d(M))
   if not 1 <= n <= len(values):
      raise InvalidParameters(f"Partial sum index {n} out of range [1, {len(values)}].")
   if sign == '+':
      return float(values[::-1][:n].sum())
   if sign == '-':
      return float(values[:n].sum())
   raise InvalidParameters(f"Sign should be '+' or '-', got {sign!r}.")

def _all_partial_sums(matrix):
   return np.cumsum(scipy.linalg.eigvalsh(matrix)[::-1]) if len(matrix) else np.zeros(0)

def check_monotone_S(b, mu_grid, n_values = None) -> float:
   """Minimum over n and adjacent grid points mu < eta of S_n^+(L_eta) - S_n^+(L_mu)."""
   grid = np.asarray(mu_grid, dtype = float)
   if np.any(np.diff(grid) < 0):
      raise InvalidParameters("The mu grid should be sorted in ascending order.")
   sums = np.array([_all_partial_sums(build_bs_kernel(L_MU, b, float(mu)).matrix) for mu in grid])
   if sums.size == 0 or len(grid) < 2:
      return 0.0
   if n_values is not None:
      sums = sums[:, [n - 1 for n in n_values if n <= sums.shape[1]]]
   return float(np.diff(sums, axis = 0).min()) if sums.size else 0.0

def check_bond_monotone(b, mu, bond, grid):
   """Vary one bond value t of the generalized kernel L_{mu_n} over a grid in [0, 1].

   Returns (min forward difference of S_n^+ in t, max |S_n^+(t) - S_n^+(-t)|); the
   partial sums are even in each mu_n and nondecreasing in |mu_n|.
   """
   grid = np.asarray(grid, dtype = float)
   if np.any(np.diff(grid) < 0) or np.any(grid < 0):
      raise InvalidParameters("The grid should be sorted and nonnegative.")
   sites, _ = _diagonal(b)
   base = {k: float(mu) for k in range(int(sites.min()), int(sites.max()))} if len(sites) else {}

   def sums(t):
      return _all_partial_sums(generalized_kernel(b, {**base, int(bond): t}).matrix)

   forward = np.array([sums(t) for t in grid])
   backward = np.array([sums(-t) for t in grid])
   if forward.size == 0:
      return 0.0, 0.0
   difference = float(np.diff(forward, axis = 0).min()) if len(grid) > 1 else 0.0
   return difference, float(np.abs(forward - backward).max())

def check_fixed_point(spec, coupling, plan = None) -> float:
   """Max over j of |lambda E_j^+(K_{E_j^+(W_0 + lambda B)}) - 1| for a diagonal B >= 0."""
   if spec.kind != WHOLE_LINE or not spec.has_free_bonds or np.any(spec.b_values() < 0):
      raise InvalidParameters("The fixed-point check needs a whole-line spec with a = 1 and b >= 0.")
   if not coupling > 0:
      raise InvalidParameters(f"Coupling should be positive, got {coupling}.")
   report = discrete_spectrum(spec.scaled(coupling), plan or TruncationPlan(tolerance = 1e-11))
   if report.N_plus == 0:
      raise NoEigenvalues(f"W_0 + {coupling:g} B has no eigenvalue above the band.")

   # The same index j on both sides.
   residuals = []
   for j, energy in enumerate(report.E_plus):
      kernel = build_bs_kernel(K_BETA, spec, energy).eigenvalues()
      residuals.append(abs(coupling * kernel[j] - 1.0) if j < len(kernel) else np.inf)
   return float(max(residuals))

def _resolvent_columns(diag, off, beta, columns):
   """Columns of (beta - T)^{-1} for a tridiagonal T by a banded solve."""
   size = len(diag)
   banded = np.zeros((3, size))
   banded[0, 1:] = -off
   banded[1, :] = beta - diag
   banded[2, :-1] = -off
   rhs = np.zeros((size, len(columns)))
   rhs[columns, np.arange(len(columns))] = 1.0
   return scipy.linalg.solve_banded((1, 1), banded, rhs)

def resolvent_domination_check(a, beta, window = None) -> float:
   """Min over (n, m) in the window of (beta - J_0)^{-1}_{nm} - (beta - J_0({a_n}))^{-1}_{nm}.

   Half-line, 0 < a_n <= 1. Both inverses are computed on a truncation long enough that
   the boundary changes the window entries by less than 1e-12.
   """
   if isinstance(a, Perturbation):
      a = a.a
   a = {int(k): float(v) for k, v in dict(a).items()}
   if any(not 0 < v <= 1 for v in a.values()):
      raise InvalidParameters("Resolvent domination needs 0 < a_n <= 1 at every bond.")
   parameter = band_parameter(beta)
   spec = Perturbation(HALF_LINE, a, {})
   hi = (spec.support() or (1, 1))[1]
   if window is None:
      window = (1, hi + 1)
   lo_site, hi_site = int(window[0]), int(window[1])
   if lo_site < 1 or hi_site < lo_site:
      raise InvalidParameters(f"Invalid half-line window {window}.")

   # Entries within the window feel the cutoff through mu^{2 distance}.
   pad = int(np.ceil(np.log(1e-12) / np.log(parameter.mu))) + 2
   size = max(hi, hi_site) + pad
   columns = np.arange(lo_site - 1, hi_site)
   perturbed = build_truncated_matrix(spec, (1, size))
   free = build_truncated_matrix(Perturbation(HALF_LINE), (1, size))
   gap = _resolvent_columns(free.diag, free.off, beta, columns) - \
         _resolvent_columns(perturbed.diag, perturbed.off, beta, columns)
   return float(gap[columns, :].min())

@dataclass(frozen = True)
class BargmannChain:
   """Links of the counting chain #{E > beta} <= #{K_beta eigenvalues >= 1} <= Tr K_beta <= Tr K_2."""
   beta: float
   count_above: int
   kernel_count: int
   kernel_trace: float
   bargmann_trace: float

   def links(self):
      return [self.count_above, self.kernel_count, self.kernel_trace, self.bargmann_trace]

   def ordered(self, tol = 1e-10) -> bool:
      links = self.links()
      return all(links[i] <= links[i + 1] + tol for i in range(len(links) - 1))

def bargmann_chain_check(b, beta, plan = None) -> BargmannChain:
   """Evaluate the counting chain for a half-line operator with a = 1 and b >= 0."""
   if isinstance(b, Perturbation):
      if b.kind != HALF_LINE or not b.has_free_bonds:
         raise InvalidParameters("The counting chain needs a half-line spec with a = 1.")
      b = b.b
   sites, values = _diagonal(b)
   if np.any(sites < 1):
      raise InvalidParameters("Half-line sites start at 1.")
   band_parameter(beta)
   spec = Perturbation(HALF_LINE, {}, dict(zip(sites.tolist(), values.tolist())))
   report = discrete_spectrum(spec, plan)
   kernel = build_bs_kernel(K_BETA, spec, float(beta), line = HALF)
   return BargmannChain(float(beta),
                        int(np.sum(np.array(report.E_plus) > beta)),
                        int(np.sum(kernel.eigenvalues() >= 1.0 - 1e-10)),
                        kernel.trace,
                        float(np.dot(sites, values)))
