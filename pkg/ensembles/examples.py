#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import math
import logging
from dataclasses import dataclass

import numpy as np

from util import InvalidParameters
from jacobi.perturbation import Perturbation, TruncationPlan, HALF_LINE, WHOLE_LINE
from eigensolve.spectrum import discrete_spectrum
from bounds.functionals import moment_functional

__all__ = ['EX4_1', 'EX4_2', 'HALF_LINE_SITE1', 'HALF_LINE_BOND1', 'EXAMPLE_IDS', 'AnalyticExample',
           'analytic_example', 'counterexample_theorem3', 'l1_norm', 'moment_lower_bound',
           'theorem3_scaling', 'CounterexampleReport', 'counterexample_report', 'decay_profile',
           'bond_count', 'bond_threshold']

logger = logging.getLogger(__name__)

EX4_1 = 'Ex4_1'
EX4_2 = 'Ex4_2'
HALF_LINE_SITE1 = 'HalfLineSite1'
HALF_LINE_BOND1 = 'HalfLineBond1'
EXAMPLE_IDS = [EX4_1, EX4_2, HALF_LINE_SITE1, HALF_LINE_BOND1]

# Bond scans stop at 40000 sites.
BOND_PLAN = TruncationPlan(max_window = 40000)

@dataclass(frozen = True)
class AnalyticExample:
   """An exactly solvable spec with its closed-form eigenvalues and first-bound sides."""
   id: str
   parameter: float
   spec: Perturbation
   predicted: tuple
   t1_lhs: float
   t1_rhs: float

def _t1_sides(predicted, spec):
   lhs = sum(math.sqrt(E * E - 4.0) for E in predicted)
   rhs = float(np.abs(spec.b_values()).sum() + 4.0 * np.abs(spec.a_deviation()).sum())
   return lhs, rhs

def analytic_example(id, parameter) -> AnalyticExample:
   """Build one of the solvable examples and its predicted eigenvalues (descending)."""
   parameter = float(parameter)
   if id == EX4_1:
      if parameter == 0:
         raise InvalidParameters("Ex4_1 needs b != 0.")
      spec = Perturbation(WHOLE_LINE, {}, {0: parameter})
      predicted = (math.copysign(math.sqrt(parameter ** 2 + 4.0), parameter),)
   elif id == EX4_2:
      if not parameter > 1:
         raise InvalidParameters(f"Ex4_2 needs a > 1, got {parameter}.")
      spec = Perturbation(WHOLE_LINE, {0: parameter}, {})
      predicted = (parameter + 1.0 / parameter, -(parameter + 1.0 / parameter))
   elif id == HALF_LINE_SITE1:
      if not parameter > 0:
         raise InvalidParameters(f"HalfLineSite1 needs b > 0, got {parameter}.")
      spec = Perturbation(HALF_LINE, {}, {1: parameter})
      predicted = (parameter + 1.0 / parameter,) if parameter > 1 else ()
   elif id == HALF_LINE_BOND1:
      if not parameter > 1:
         raise InvalidParameters(f"HalfLineBond1 needs a > 1, got {parameter}.")
      spec = Perturbation(HALF_LINE, {1: parameter}, {})
      if parameter ** 2 > 2:
         mu = 1.0 / math.sqrt(parameter ** 2 - 1.0)
         predicted = (mu + 1.0 / mu, -(mu + 1.0 / mu))
      else:
         predicted = ()
   else:
      raise InvalidParameters(f"Unknown example {id!r}, should be one of {EXAMPLE_IDS}.")
   lhs, rhs = _t1_sides(predicted, spec)
   return AnalyticExample(id, parameter, spec, predicted, lhs, rhs)

def counterexample_theorem3(p, beta, N, m) -> Perturbation:
   """Half-line spec with a = 1 and N spikes b = beta at sites m, 2m, ..., Nm."""
   if not 0 <= p < 0.5:
      raise InvalidParameters(f"The spike construction needs 0 <= p < 1/2, got p = {p}.")
   if not 0 < beta < 1:
      raise InvalidParameters(f"The spike construction needs 0 < beta < 1, got beta = {beta}.")
   if int(N) < 1 or int(m) < 1:
      raise InvalidParameters(f"Need N >= 1 and m >= 1, got N = {N}, m = {m}.")
   if m < 10.0 / beta:
      logger.warning("Spike spacing %d is below 10/beta = %.1f; neighboring spikes interact.", m, 10.0 / beta)
   return Perturbation(HALF_LINE, {}, {k * int(m): float(beta) for k in range(1, int(N) + 1)})

def l1_norm(spec) -> float:
   """l^1 norm of the pair (b, a - 1)."""
   return float(np.abs(spec.b_values()).sum() + np.abs(spec.a_deviation()).sum())

def moment_lower_bound(p, beta, N) -> float:
   """N (beta^2 / 6)^p, the moment sum guaranteed by well-separated spikes."""
   return float(N * (beta ** 2 / 6.0) ** p)

def theorem3_scaling(p, eps, c1 = 0.5, c2 = 1.0):
   """Spike height, count, and spacing (beta, N, m) for a target norm scale eps.

   beta = c1 eps^{2/(1 - 2p)}, N = ceil(c2 eps^{-(1 + 2p)/(1 - 2p)}), m = ceil(10 / beta).
   """
   if not 0 <= p < 0.5:
      raise InvalidParameters(f"Scaling needs 0 <= p < 1/2, got p = {p}.")
   if not eps > 0:
      raise InvalidParameters(f"Scale eps should be positive, got {eps}.")
   beta = c1 * eps ** (2.0 / (1.0 - 2.0 * p))
   N = int(math.ceil(c2 * eps ** (-(1.0 + 2.0 * p) / (1.0 - 2.0 * p)) - 1e-9))
   m = int(math.ceil(10.0 / beta))
   return beta, N, m

@dataclass(frozen = True)
class CounterexampleReport:
   """Norm, computed moment sum, and guaranteed lower bound for a spike construction."""
   p: float
   beta: float
   N: int
   m: int
   norm: float
   moment_sum: float
   lower_bound: float
   ratio: float
   converged: bool
   spec: Perturbation

   def to_dict(self):
      return {'p': self.p, 'beta': self.beta, 'N': self.N, 'm': self.m, 'norm': self.norm,
              'moment_sum': self.moment_sum, 'lower_bound': self.lower_bound,
              'ratio': self.ratio, 'converged': self.converged}

def counterexample_report(p, beta, N, m, norm = l1_norm, plan = None) -> CounterexampleReport:
   """Build the spike construction and evaluate its moment sum against its norm."""
   spec = counterexample_theorem3(p, beta, N, m)
   report = discrete_spectrum(spec, plan, raise_on_failure = False)
   energies = np.array(report.E_plus + report.E_minus)
   moment_sum = float(np.sum(moment_functional(energies, p))) if len(energies) else 0.0
   value = float(norm(spec))
   return CounterexampleReport(float(p), float(beta), int(N), int(m), value, moment_sum,
                               moment_lower_bound(p, beta, N), moment_sum / value, report.converged, spec)

def decay_profile(alpha, cutoff) -> Perturbation:
   """Half-line spec with b_n = n^{-alpha} for n <= cutoff."""
   if not alpha > 1:
      raise InvalidParameters(f"Decay exponent should exceed 1, got {alpha}.")
   if int(cutoff) < 1:
      raise InvalidParameters(f"Cutoff should be at least 1, got {cutoff}.")
   return Perturbation(HALF_LINE, {}, {n: float(n) ** (-alpha) for n in range(1, int(cutoff) + 1)})

def bond_count(a, plan = None, band = None) -> int:
   """Number of eigenvalues outside the band for the half-line spec a_1 = a.

   Close to the threshold the loop can stop at the plan's window limit; the last
   window's count is used then.
   """
   spec = Perturbation(HALF_LINE, {1: a}, {})
   report = discrete_spectrum(spec, plan or BOND_PLAN, band, raise_on_failure = False)
   return report.N_plus + report.N_minus

def bond_threshold(lower = 1.3, upper = 1.5, tol = 1e-6, plan = None):
   """Locate the bond value where the eigenvalue count of HalfLineBond1 jumps, by bisection.

   Returns (threshold, count just below, count just above).
   """
   below, above = bond_count(lower, plan), bond_count(upper, plan)
   if below == above:
      raise InvalidParameters(f"Counts agree at both ends of [{lower}, {upper}]; no jump to locate.")
   while upper - lower > tol:
      middle = 0.5 * (lower + upper)
      if bond_count(middle, plan) == below:
         lower = middle
      else:
         upper = middle
   return 0.5 * (lower + upper), below, bond_count(upper, plan)
