#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import logging
from types import MappingProxyType
from dataclasses import dataclass, field

import numpy as np

from util import InvalidSpec, InvalidParameters
from jacobi.tridiagonal import SymmetricTridiagonal

__all__ = ['HALF_LINE', 'WHOLE_LINE', 'Perturbation', 'Band', 'TruncationPlan',
           'build_truncated_matrix', 'sandwich_transform', 'spectral_flip', 'bracket_gaps']

logger = logging.getLogger(__name__)

HALF_LINE = 'half_line'
WHOLE_LINE = 'whole_line'

def _freeze(values, name, kind, free_value, positive = False):
   """Validate a site -> value map and drop entries equal to the free value."""
   frozen = {}
   for key, value in dict(values or {}).items():
      try:
         site = int(key)
      except (TypeError, ValueError):
         raise InvalidSpec(f"Site index {key!r} is not an integer.", field = name)
      value = float(value)
      if not np.isfinite(value):
         raise InvalidSpec(f"Value {value} at site {site} is not finite.", field = f"{name}.{site}")
      if positive and value <= 0:
         raise InvalidSpec(f"Off-diagonal entries must be positive, got {value} at bond {site}.",
                           field = f"{name}.{site}")
      if kind == HALF_LINE and site < 1:
         raise InvalidSpec(f"Half-line indices start at 1, got {site}.", field = f"{name}.{site}")
      if value != free_value:
         frozen[site] = value
   return MappingProxyType(dict(sorted(frozen.items())))

@dataclass(frozen = True)
class Perturbation:
   """A finitely supported perturbation of the free Jacobi operator.

   Bond a_n joins sites n and n + 1; b_n sits on site n. Queries outside the
   stored entries return the free values a = 1, b = 0.
   """
   kind: str = WHOLE_LINE
   a: dict = field(default_factory = dict)
   b: dict = field(default_factory = dict)

   def __post_init__(self):
      if self.kind not in [HALF_LINE, WHOLE_LINE]:
         raise InvalidSpec(f"Invalid operator kind '{self.kind}', should be "
                           f"'{HALF_LINE}' or '{WHOLE_LINE}'.", field = 'kind')
      object.__setattr__(self, 'a', _freeze(self.a, 'a', self.kind, 1.0, positive = True))
      object.__setattr__(self, 'b', _freeze(self.b, 'b', self.kind, 0.0))

   def __eq__(self, other):
      if not isinstance(other, Perturbation):
         return NotImplemented
      return self.kind == other.kind and dict(self.a) == dict(other.a) and dict(self.b) == dict(other.b)

   def __hash__(self):
      return hash((self.kind, tuple(self.a.items()), tuple(self.b.items())))

   def a_at(self, n) -> float:
      return self.a.get(int(n), 1.0)

   def b_at(self, n) -> float:
      return self.b.get(int(n), 0.0)

   @property
   def is_free(self) -> bool:
      return not self.a and not self.b

   @property
   def has_free_bonds(self) -> bool:
      """True when every a_n equals 1 (a diagonal perturbation)."""
      return not self.a

   def support(self):
      """Smallest site window [lo, hi] touched by the perturbation, or None if free."""
      sites = list(self.b.keys())
      for n in self.a.keys():
         sites.extend([n, n + 1])
      if not sites:
         return None
      return min(sites), max(sites)

   def with_b(self, b):
      return Perturbation(self.kind, dict(self.a), b)

   def scaled(self, coupling):
      """The perturbation with b replaced by coupling * b."""
      return self.with_b({n: coupling * v for n, v in self.b.items()})

   def b_values(self):
      return np.fromiter(self.b.values(), dtype = float, count = len(self.b))

   def a_deviation(self):
      """Array of a_n - 1 over the stored bonds."""
      return np.fromiter(self.a.values(), dtype = float, count = len(self.a)) - 1.0

@dataclass(frozen = True)
class Band:
   """Essential band [-half_width, half_width] with an exclusion margin at its edges."""
   half_width: float = 2.0
   edge_margin: float = 1e-8

   def __post_init__(self):
      if not self.half_width > 0:
         raise InvalidParameters(f"Band half-width must be positive, got {self.half_width}.")
      if not self.edge_margin > 0:
         raise InvalidParameters(f"Band edge margin must be positive, got {self.edge_margin}.")

   @classmethod
   def for_lattice(cls, nu, edge_margin = 1e-8):
      """Band of the free lattice operator on Z^nu, with the margin scaled by nu."""
      return cls(half_width = 2.0 * nu, edge_margin = edge_margin * nu)

   @property
   def upper(self) -> float:
      return self.half_width + self.edge_margin

   @property
   def lower(self) -> float:
      return -self.half_width - self.edge_margin

@dataclass(frozen = True)
class TruncationPlan:
   """Window growth schedule for the hard-cutoff convergence loop.

   `initial` is the padding added on each open side of the support; it grows by
   `growth` per round until the tracked eigenvalues move less than `tolerance`
   or the window exceeds `max_window` sites.
   """
   initial: int = 64
   growth: float = 2.0
   tolerance: float = 1e-11
   max_window: int = 2 ** 20

   def __post_init__(self):
      if self.initial < 1 or self.initial > self.max_window:
         raise InvalidParameters(f"Initial window {self.initial} should lie in [1, {self.max_window}].")
      if not self.growth > 1:
         raise InvalidParameters(f"Growth factor should exceed 1, got {self.growth}.")
      if not self.tolerance > 0:
         raise InvalidParameters(f"Eigenvalue tolerance should be positive, got {self.tolerance}.")

   def paddings(self):
      """Successive padding sizes, up to the maximum window."""
      pad = self.initial
      while pad <= self.max_window:
         yield int(pad)
         pad = int(np.ceil(pad * self.growth))

def build_truncated_matrix(spec, window, strict = False) -> SymmetricTridiagonal:
   """Hard-cutoff compression of the operator to the sites lo..hi (inclusive)."""
   lo, hi = int(window[0]), int(window[1])
   if hi < lo:
      raise InvalidSpec(f"Empty window [{lo}, {hi}].", field = 'window')
   if spec.kind == HALF_LINE and lo < 1:
      raise InvalidSpec(f"Half-line window must start at site 1 or later, got {lo}.", field = 'window')

   # Make sure the window covers the support.
   support = spec.support()
   if support is not None and (support[0] < lo or support[1] > hi):
      if strict:
         raise InvalidSpec(f"Window [{lo}, {hi}] does not cover the support "
                           f"[{support[0]}, {support[1]}].", field = 'window')
      logger.warning("Window [%d, %d] does not cover the support [%d, %d], extending it.",
                     lo, hi, support[0], support[1])
      lo, hi = min(lo, support[0]), max(hi, support[1])
   if hi - lo + 1 < 2:
      raise InvalidSpec(f"Window size must be at least 2, got {hi - lo + 1}.", field = 'window')

   # Fill in the free values, then overwrite the stored entries inside the window.
   diag = np.zeros(hi - lo + 1)
   off = np.ones(hi - lo)
   for n, value in spec.b.items():
      if lo <= n <= hi:
         diag[n - lo] = value
   for n, value in spec.a.items():
      if lo <= n < hi:
         off[n - lo] = value
   return SymmetricTridiagonal(diag, off, first = lo)

def sandwich_transform(spec, sign = '+') -> Perturbation:
   """Diagonal perturbation b_n +- (|a_{n-1} - 1| + |a_n - 1|) with all a_n = 1."""
   if sign not in ['+', '-']:
      raise InvalidParameters(f"Sandwich sign should be '+' or '-', got {sign!r}.")
   factor = 1.0 if sign == '+' else -1.0
   shifted = dict(spec.b)
   for n, value in spec.a.items():
      # Each bond feeds both of its endpoints.
      for site in [n, n + 1]:
         shifted[site] = shifted.get(site, 0.0) + factor * abs(value - 1.0)
   return Perturbation(spec.kind, {}, shifted)

def spectral_flip(spec) -> Perturbation:
   """The perturbation with b -> -b; its spectrum is the negated spectrum."""
   return spec.with_b({n: -value for n, value in spec.b.items()})

def bracket_gaps(spec, window):
   """Smallest eigenvalues of W - W(b^-) and W(b^+) - W on a common window."""
   support = spec.support()
   if support is not None:
      window = (min(window[0], support[0] - 1 if spec.kind == WHOLE_LINE else 1),
                max(window[1], support[1] + 1))
   middle = build_truncated_matrix(spec, window).toarray()
   lower = build_truncated_matrix(sandwich_transform(spec, '-'), window).toarray()
   upper = build_truncated_matrix(sandwich_transform(spec, '+'), window).toarray()
   return float(np.linalg.eigvalsh(middle - lower)[0]), float(np.linalg.eigvalsh(upper - middle)[0])
