#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import re
import logging
from typing import Callable, Optional
from dataclasses import dataclass, field

import numpy as np

from util import InvalidParameters, positive_part, negative_part
from jacobi.perturbation import Perturbation, HALF_LINE, sandwich_transform
from jacobi.lattice_spec import LatticeSpec, lattice_sandwich
from eigensolve.spectrum import discrete_spectrum, lattice_spectrum
from bounds.functionals import band_functional, moment_functional, shifted_band_functional
from bounds.constants import c_constant, d_constant, classical_constant

__all__ = ['HOLDS', 'VIOLATED', 'INCONCLUSIVE', 'REPORT_FIELDS', 'BoundReport', 'make_report', 'eigen_sum',
           'BoundDefinition', 'THEOREMS', 'theorem_ids', 'parse_theorem', 'resolve_p',
           'evaluate_bound', 'theorem1_rhs', 'theorem1_a_plus_bound', 'large_coupling_check']

logger = logging.getLogger(__name__)

HOLDS = 'holds'
VIOLATED = 'violated'
INCONCLUSIVE = 'inconclusive'

# Serialized fields, in output order.
REPORT_FIELDS = ['theorem', 'lhs', 'rhs', 'slack', 'ratio', 'verdict', 'tolerance']

# Relative slack granted to every verdict on top of the propagated eigenvalue error.
RELATIVE_SLACK = 1e-9

@dataclass(frozen = True)
class BoundReport:
   """One inequality instance: both sides, their difference, and a verdict.

   `category` separates theorem checks from conjecture findings; `details` carries
   extra per-check numbers (eigenvalue counts, per-sign values) that are not serialized.
   """
   theorem: str
   lhs: float
   rhs: float
   slack: float
   ratio: Optional[float]
   verdict: str
   tolerance: float
   category: str = 'theorem'
   details: dict = field(default_factory = dict, compare = False)

   @property
   def holds(self) -> bool:
      return self.verdict == HOLDS

   def to_dict(self):
      return {name: getattr(self, name) for name in REPORT_FIELDS}

def make_report(theorem, lhs, rhs, tolerance, converged = True, category = 'theorem', details = None):
   """Assemble a BoundReport, deriving slack, ratio, and verdict."""
   lhs, rhs, tolerance = float(lhs), float(rhs), float(tolerance)
   slack = rhs - lhs
   ratio = lhs / rhs if rhs > 0 else None
   if not converged:
      verdict = INCONCLUSIVE
   elif slack >= -tolerance:
      verdict = HOLDS
   else:
      verdict = VIOLATED
   return BoundReport(theorem, lhs, rhs, slack, ratio, verdict, tolerance, category, dict(details or {}))

def eigen_sum(report, functional, sides = 'both'):
   """Sum of a functional of |E| over one or both sides of the report, with its propagated error.

   Edge-flagged eigenvalues are not listed but exist; each adds the functional at the
   outer edge of the margin to the error.
   """
   energies, errors, flagged = (), (), 0
   if sides in ['both', 'plus']:
      energies, errors, flagged = report.E_plus, report.errors_plus, report.flagged_plus
   if sides in ['both', 'minus']:
      energies, errors = energies + report.E_minus, errors + report.errors_minus
      flagged += report.flagged_minus
   magnitudes = np.abs(np.array(energies, dtype = float))
   errors = np.array(errors, dtype = float)
   if len(magnitudes) == 0:
      total = 0.0
      propagated = 0.0
   else:
      values = np.asarray(functional(magnitudes), dtype = float)
      total = float(values.sum())
      finite = np.isfinite(errors)
      shifted = np.asarray(functional(magnitudes[finite] + errors[finite]), dtype = float)
      propagated = float(np.sum(shifted - values[finite]))
   if flagged:
      propagated += flagged * float(functional(np.array([report.band.upper]))[0])
   return total, propagated

def _a_deviation(spec):
   return np.abs(spec.a_deviation())

def theorem1_rhs(spec) -> float:
   """sum |b_n| + 4 sum |a_n - 1|."""
   return float(np.abs(spec.b_values()).sum() + 4.0 * _a_deviation(spec).sum())

def theorem1_a_plus_bound(spec) -> float:
   """sum |b_n| + 4 sum (a_n - 1)_+, the conjectured strengthening of the first bound."""
   return float(np.abs(spec.b_values()).sum() + 4.0 * positive_part(spec.a_deviation()).sum())

def _power_sum(spec, q) -> float:
   return float(np.sum(np.abs(spec.b_values()) ** q) + 4.0 * np.sum(_a_deviation(spec) ** q))

def _printed_theorem4_rhs(spec, p) -> float:
   """sum (b_n^+ + 2|a_n - 1|)^p + (b_n^- + 2|a_n - 1|)^p with b^{+-} the positive and negative parts."""
   sites = sorted(set(spec.b) | set(spec.a))
   b = np.array([spec.b_at(n) for n in sites])
   bond = 2.0 * np.abs(np.array([spec.a_at(n) for n in sites]) - 1.0)
   return float(np.sum((positive_part(b) + bond) ** p) + np.sum((negative_part(b) + bond) ** p))

def _sandwich_rhs(spec, p) -> float:
   """sum ((b^+)_+)^p + ((b^-)_-)^p over the sandwich sequences b_n +- (|a_{n-1} - 1| + |a_n - 1|)."""
   upper = sandwich_transform(spec, '+').b_values()
   lower = sandwich_transform(spec, '-').b_values()
   return float(np.sum(positive_part(upper) ** p) + np.sum(negative_part(lower) ** p))

def _bargmann_rhs(spec) -> float:
   """sum n|b_n| + (4n + 2)(a_n - 1)_+ over the half-line."""
   b_part = sum(n * abs(v) for n, v in spec.b.items())
   a_part = sum((4 * n + 2) * max(v - 1.0, 0.0) for n, v in spec.a.items())
   return float(b_part + a_part)

def _lattice_traces(spec, q) -> float:
   """sum_x Tr (V^+(x))_+^q + Tr (V^-(x))_-^q with V^{+-} the bond sandwich potentials."""
   upper = lattice_sandwich(spec, '+') if spec.bonds else spec
   lower = lattice_sandwich(spec, '-') if spec.bonds else spec
   total = 0.0
   for potential, part in [(upper, positive_part), (lower, negative_part)]:
      for value in potential.V.values():
         eigenvalues = np.linalg.eigvalsh(value) if np.ndim(value) else np.array([value])
         total += float(np.sum(part(eigenvalues) ** q))
   return total

def _lattice_e511_rhs(spec) -> float:
   traces = sum(float(np.abs(np.linalg.eigvalsh(v)).sum()) if np.ndim(v) else abs(v) for v in spec.V.values())
   return traces + 4.0 * spec.fiber * sum(abs(w - 1.0) for w in spec.bonds.values())

def _diagonal_only(spec):
   if not spec.has_free_bonds:
      return "it requires a_n = 1 at every bond"
   return None

def _diagonal_nonnegative(spec):
   if not spec.has_free_bonds or np.any(spec.b_values() < 0):
      return "it requires a_n = 1 at every bond and b_n >= 0"
   return None

def _half_line_only(spec):
   if spec.kind != HALF_LINE:
      return "it applies to half-line operators only"
   return None

def _sqrt_both(report, p):
   return eigen_sum(report, band_functional)

def _sqrt_plus(report, p):
   return eigen_sum(report, band_functional, sides = 'plus')

def _moment_both(report, p):
   return eigen_sum(report, lambda E: moment_functional(E, p, report.band.half_width))

def _moment_plus(report, p):
   return eigen_sum(report, lambda E: moment_functional(E, p, report.band.half_width), sides = 'plus')

def _shifted_sqrt(report, p):
   nu = int(round(report.band.half_width / 2.0))
   return eigen_sum(report, lambda E: shifted_band_functional(E, nu))

def _count(report, p):
   return float(report.N_plus + report.N_minus + report.flagged), 0.0

@dataclass(frozen = True)
class BoundDefinition:
   """How to evaluate one inequality: its left side from a spectrum, its right side from a spec."""
   name: str
   scope: str
   lhs: Callable
   rhs: Callable
   min_p: Optional[float] = None
   fixed_p: Optional[float] = None
   requires: Optional[Callable] = None
   category: str = 'theorem'

   @property
   def takes_p(self) -> bool:
      return self.min_p is not None

THEOREMS = {definition.name: definition for definition in [
   # Chain bounds.
   BoundDefinition('T1', 'chain', _sqrt_both, lambda s, p: theorem1_rhs(s)),
   BoundDefinition('E14', 'chain', _moment_both, lambda s, p: 0.5 * theorem1_rhs(s), fixed_p = 0.5),
   BoundDefinition('T2', 'chain', _moment_both, lambda s, p: c_constant(p) * _power_sum(s, p + 0.5), min_p = 0.5),
   BoundDefinition('E16a', 'chain', _moment_both, lambda s, p: theorem1_rhs(s), fixed_p = 1.0),
   BoundDefinition('T4_printed', 'chain', _moment_both, lambda s, p: _printed_theorem4_rhs(s, p), min_p = 1.0),
   BoundDefinition('T4_proof_form', 'chain', _moment_both, lambda s, p: _sandwich_rhs(s, p), min_p = 1.0),
   BoundDefinition('T4_convex', 'chain', _moment_both, lambda s, p: 3.0 ** (p - 1) * _power_sum(s, p), min_p = 1.0),
   BoundDefinition('T2_8', 'chain', _sqrt_plus, lambda s, p: float(s.b_values().sum()),
                   requires = _diagonal_nonnegative),
   BoundDefinition('T2_9', 'chain', _moment_plus,
                   lambda s, p: d_constant(p) * float(np.sum(positive_part(s.b_values()) ** (p + 0.5))),
                   min_p = 0.5, requires = _diagonal_only),
   BoundDefinition('T2_10', 'chain', _moment_plus,
                   lambda s, p: float(np.sum(positive_part(s.b_values()) ** p)),
                   min_p = 1.0, requires = _diagonal_only),
   BoundDefinition('Bargmann', 'chain', _count, lambda s, p: _bargmann_rhs(s), requires = _half_line_only),
   BoundDefinition('T1_conjecture', 'chain', _sqrt_both, lambda s, p: theorem1_a_plus_bound(s),
                   category = 'conjecture'),
   # Lattice bounds.
   BoundDefinition('T5_2', 'lattice', _moment_both, lambda s, p: _lattice_traces(s, p), min_p = 1.0),
   BoundDefinition('T5_3', 'lattice', _moment_both,
                   lambda s, p: 2.0 ** s.nu * classical_constant(p, s.nu) * _lattice_traces(s, p + s.nu / 2),
                   min_p = 1.0),
   BoundDefinition('E5_11', 'lattice', _moment_both, lambda s, p: _lattice_e511_rhs(s), fixed_p = 1.0),
   BoundDefinition('Remark5_a', 'lattice', _shifted_sqrt, lambda s, p: _lattice_traces(s, 1.0)),
   BoundDefinition('Remark5_b', 'lattice', _shifted_sqrt,
                   lambda s, p: 2.0 ** (s.nu - 1) * classical_constant(1.0, s.nu - 1)
                                * _lattice_traces(s, 1.0 + (s.nu - 1) / 2)),
]}

def theorem_ids(scope = None):
   """Registered theorem ids, optionally restricted to 'chain' or 'lattice'."""
   return [name for name, d in THEOREMS.items() if scope is None or d.scope == scope]

def parse_theorem(label):
   """Split a label such as 'T2' or 'T2(p=1.5)' into (id, p)."""
   match = re.fullmatch(r'\s*([A-Za-z0-9_]+)\s*(?:\(\s*p\s*=\s*([^)]+)\))?\s*', str(label))
   if match is None or match.group(1) not in THEOREMS:
      raise InvalidParameters(f"Unknown theorem id {label!r}, should be one of {theorem_ids()}.")
   p = match.group(2)
   try:
      return match.group(1), float(p) if p is not None else None
   except ValueError:
      raise InvalidParameters(f"Invalid power in theorem label {label!r}.")

def resolve_p(definition, p = None):
   """Power used for a theorem: fixed, defaulted to its minimum, or checked against it."""
   if definition.fixed_p is not None:
      return definition.fixed_p
   if not definition.takes_p:
      return None
   if p is None:
      return definition.min_p
   if not p >= definition.min_p:
      raise InvalidParameters(f"{definition.name} requires p >= {definition.min_p:g}, got p = {p:g}.")
   return float(p)

def _label(definition, p):
   return f"{definition.name}(p={p:g})" if definition.takes_p else definition.name

def evaluate_bound(theorem, spec, p = None, report = None, plan = None, band = None) -> BoundReport:
   """Evaluate one inequality on a spec, computing its spectrum unless a report is supplied.

   Returns an 'inconclusive' report instead of raising when the spectrum did not converge.
   """
   if theorem not in THEOREMS:
      theorem, label_p = parse_theorem(theorem)
      p = label_p if p is None else p
   definition = THEOREMS[theorem]
   scope = 'lattice' if isinstance(spec, LatticeSpec) else 'chain'
   if not isinstance(spec, (Perturbation, LatticeSpec)):
      raise InvalidParameters(f"Cannot evaluate bounds on a {type(spec).__name__}.")
   if definition.scope != scope:
      raise InvalidParameters(f"{theorem} is a {definition.scope} bound and does not apply to a {scope} spec.")
   if definition.requires is not None:
      reason = definition.requires(spec)
      if reason is not None:
         raise InvalidParameters(f"{theorem} does not apply to this spec: {reason}.")
   p = resolve_p(definition, p)

   # Compute the spectrum when none was supplied.
   if report is None:
      if scope == 'lattice':
         report = lattice_spectrum(spec)
      else:
         report = discrete_spectrum(spec, plan, band, raise_on_failure = False)

   lhs, propagated = definition.lhs(report, p)
   rhs = definition.rhs(spec, p)
   tolerance = RELATIVE_SLACK * max(1.0, abs(rhs))
   if report.converged:
      tolerance += propagated
   details = {'p': p, 'N_plus': report.N_plus, 'N_minus': report.N_minus, 'flagged': report.flagged}
   result = make_report(_label(definition, p), lhs, rhs, tolerance, report.converged,
                        definition.category, details)
   logger.debug("%s: lhs %.6g, rhs %.6g, %s.", result.theorem, lhs, rhs, result.verdict)
   return result

def large_coupling_check(spec, coupling, n, side = '+', plan = None) -> float:
   """Relative deviation |E_n^{+-}(J_lambda) / lambda - b~_n^{+-}| / |b~_n^{+-}|.

   b~^+ lists the positive b_n in decreasing order, b~^- the negative ones in increasing order.
   """
   if not coupling > 0:
      raise InvalidParameters(f"Coupling should be positive, got {coupling}.")
   if side not in ['+', '-']:
      raise InvalidParameters(f"Side should be '+' or '-', got {side!r}.")
   values = spec.b_values()
   ordered = np.sort(values[values > 0])[::-1] if side == '+' else np.sort(values[values < 0])
   if not 1 <= n <= len(ordered):
      raise InvalidParameters(f"Index {n} is beyond the {len(ordered)} available b~^{side} entries.")

   report = discrete_spectrum(spec.scaled(coupling), plan)
   eigenvalues = report.E_plus if side == '+' else report.E_minus
   if n > len(eigenvalues):
      raise InvalidParameters(f"Only {len(eigenvalues)} eigenvalue(s) on the {side} side, asked for index {n}.")
   target = ordered[n - 1]
   return float(abs(eigenvalues[n - 1] / coupling - target) / abs(target))
