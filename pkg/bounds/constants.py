#!/usr/bin/env python3
# -*- coding = utf-8 -*-
from functools import lru_cache
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma
from scipy.integrate import quad

from util import InvalidParameters

__all__ = ['d_constant', 'c_constant', 'aizenman_lieb_constant', 'classical_constant',
           'BoundConstants', 'aizenman_lieb_identity_check', 'aizenman_lieb_ratio']

@lru_cache(maxsize = None)
def d_constant(p) -> float:
   """d_p = (1/2) Gamma(p + 1) / Gamma(p + 3/2) * Gamma(2) / Gamma(3/2)."""
   if p < 0:
      raise InvalidParameters(f"Moment power should be nonnegative, got {p}.")
   return 0.5 * gamma(p + 1) / gamma(p + 1.5) * gamma(2) / gamma(1.5)

@lru_cache(maxsize = None)
def c_constant(p) -> float:
   """c_p = 3^{p - 1/2} d_p, the constant of the moment bound with exponent p + 1/2."""
   return 3.0 ** (p - 0.5) * d_constant(p)

@lru_cache(maxsize = None)
def aizenman_lieb_constant(p, alpha) -> float:
   """C_{p, alpha} = Gamma(p + 1) / (Gamma(p - alpha) Gamma(alpha + 1))."""
   if not 0 <= alpha < p:
      raise InvalidParameters(f"Need 0 <= alpha < p, got alpha = {alpha}, p = {p}.")
   return gamma(p + 1) / (gamma(p - alpha) * gamma(alpha + 1))

@lru_cache(maxsize = None)
def classical_constant(p, nu) -> float:
   """Semiclassical constant L^cl_{p, nu} = 2^{-nu} pi^{-nu/2} Gamma(p + 1) / Gamma(p + 1 + nu/2).

   nu = 0 gives the empty product 1.
   """
   if p < 0:
      raise InvalidParameters(f"Moment power should be nonnegative, got {p}.")
   if nu < 0 or int(nu) != nu:
      raise InvalidParameters(f"Dimension should be a nonnegative integer, got {nu}.")
   return 2.0 ** (-nu) * np.pi ** (-nu / 2) * gamma(p + 1) / gamma(p + 1 + nu / 2)

def aizenman_lieb_ratio(p) -> float:
   """(1/2) C_{p, 1/2} / C_{p + 1/2, 1}, which reproduces d_p for p > 1/2."""
   return 0.5 * aizenman_lieb_constant(p, 0.5) / aizenman_lieb_constant(p + 0.5, 1.0)

def aizenman_lieb_identity_check(p, alpha, a) -> float:
   """Residual |a_+^p - C_{p, alpha} int_0^inf (a - r)_+^alpha r^{p - alpha - 1} dr|."""
   constant = aizenman_lieb_constant(p, alpha)
   if a <= 0:
      return 0.0

   # The integrand vanishes beyond r = a; quad carries the endpoint singularities as weights.
   integral, _ = quad(lambda r: 1.0, 0.0, a, weight = 'alg', wvar = (p - alpha - 1.0, alpha),
                      epsabs = 1e-14, epsrel = 1e-13)
   return abs(a ** p - constant * integral)

@dataclass(frozen = True)
class BoundConstants:
   """Constants entering the moment bounds at power p in dimension nu."""
   p: float
   nu: int = 1

   @property
   def c_p(self) -> float:
      return c_constant(self.p)

   @property
   def d_p(self) -> float:
      return d_constant(self.p)

   @property
   def classical(self) -> float:
      return classical_constant(self.p, self.nu)

   def C(self, alpha) -> float:
      return aizenman_lieb_constant(self.p, alpha)
