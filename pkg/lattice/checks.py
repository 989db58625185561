#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import logging

import numpy as np
import scipy.linalg
import scipy.sparse as sparse

from util import InvalidParameters, spectral_positive_part, check_dense_cap, DENSE_CAP
from jacobi.lattice_spec import hopping_matrix, build_lattice_matrix, lattice_sandwich
from eigensolve.spectrum import lattice_spectrum
from bounds.evaluate import evaluate_bound, theorem_ids, parse_theorem

__all__ = ['STRIP_CAP', 'lattice_bounds_check', 'axis_hopping', 'strip_inequality_check',
           'strip_trace_check', 'lattice_bracket_gaps']

logger = logging.getLogger(__name__)

# Dense functional calculus is limited to this many sites.
STRIP_CAP = 1500

def lattice_bounds_check(spec, ids = None, p = None):
   """Evaluate lattice bounds on one dense spectrum of the box.

   `ids` holds plain ids or labels such as 'T5_2(p=2)'; an explicit `p` applies to the
   ids that take one.
   """
   report = lattice_spectrum(spec)
   reports = []
   for label in ids or theorem_ids('lattice'):
      theorem, label_p = parse_theorem(label)
      reports.append(evaluate_bound(theorem, spec, p = label_p if label_p is not None else p, report = report))
   return reports

def axis_hopping(spec, axes):
   """Hopping part of H_0(a_b) restricted to bonds along the given axes (fibers included)."""
   hopping = hopping_matrix(spec, axes)
   return sparse.kron(hopping, sparse.identity(spec.fiber)).tocsr() if spec.fiber > 1 else hopping

def _strip_sides(spec, axis, cap):
   if spec.nu < 2:
      raise InvalidParameters("Stripping one coordinate needs nu >= 2; a chain has no second block.")
   if not 0 <= axis < spec.nu:
      raise InvalidParameters(f"Axis {axis} out of range for nu = {spec.nu}.")
   check_dense_cap(spec.dimension, cap)
   nu = spec.nu
   full = build_lattice_matrix(spec).toarray()
   along = axis_hopping(spec, [axis]).toarray()
   rest = full - along
   identity = np.eye(spec.dimension)

   # (H + V - 2 nu)_+ against (H_axis + (H_rest + V - 2(nu - 1))_+ - 2)_+
   left = spectral_positive_part(full - 2.0 * nu * identity)
   inner = spectral_positive_part(rest - 2.0 * (nu - 1) * identity)
   right = spectral_positive_part(along + inner - 2.0 * identity)
   return left, right

def strip_inequality_check(spec, axis = 0, cap = STRIP_CAP) -> float:
   """Smallest eigenvalue of the stripped positive part minus the full one, as matrices."""
   left, right = _strip_sides(spec, axis, cap)
   return float(scipy.linalg.eigvalsh(right - left)[0])

def strip_trace_check(spec, axis = 0, cap = STRIP_CAP):
   """Traces (full, stripped) of the two positive parts; the first never exceeds the second."""
   left, right = _strip_sides(spec, axis, cap)
   return float(np.trace(left)), float(np.trace(right))

def lattice_bracket_gaps(spec, cap = DENSE_CAP):
   """Smallest eigenvalues of H - (H_0 + V^-) and (H_0 + V^+) - H."""
   check_dense_cap(spec.dimension, cap)
   middle = build_lattice_matrix(spec).toarray()
   lower = build_lattice_matrix(lattice_sandwich(spec, '-')).toarray()
   upper = build_lattice_matrix(lattice_sandwich(spec, '+')).toarray()
   return float(scipy.linalg.eigvalsh(middle - lower)[0]), float(scipy.linalg.eigvalsh(upper - middle)[0])
