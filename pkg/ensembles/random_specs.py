#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import json
from dataclasses import dataclass, asdict

import numpy as np

from util import InvalidParameters, InvalidSpec
from jacobi.perturbation import Perturbation, HALF_LINE, WHOLE_LINE
from jacobi.lattice_spec import LatticeSpec

__all__ = ['MIXED', 'POSITIVE', 'NEGATIVE', 'EnsembleConfig', 'sample_generator', 'sample',
           'random_ensemble', 'lattice_sample', 'config_from_dict', 'load_config']

MIXED = 'mixed'
POSITIVE = 'positive'
NEGATIVE = 'negative'

@dataclass(frozen = True)
class EnsembleConfig:
   """Seeded random ensemble of finitely supported perturbations.

   Sample k depends only on (seed, k). `a_range` of None keeps every a_n = 1.
   """
   seed: int = 0
   samples: int = 100
   support: tuple = (1, 8)
   b_range: tuple = (0.0, 3.0)
   a_range: tuple = (0.2, 3.0)
   sign: str = MIXED
   kind: str = WHOLE_LINE

   def __post_init__(self):
      object.__setattr__(self, 'support', tuple(int(x) for x in self.support))
      object.__setattr__(self, 'b_range', tuple(float(x) for x in self.b_range))
      if self.a_range is not None:
         object.__setattr__(self, 'a_range', tuple(float(x) for x in self.a_range))
      if not 0 <= self.seed < 2 ** 64:
         raise InvalidParameters(f"Seed should be a 64-bit unsigned integer, got {self.seed}.")
      if self.samples < 0:
         raise InvalidParameters(f"Sample count should be nonnegative, got {self.samples}.")
      if len(self.support) != 2 or not 1 <= self.support[0] <= self.support[1]:
         raise InvalidParameters(f"Support size range {self.support} is empty or invalid.")
      if len(self.b_range) != 2 or not 0 <= self.b_range[0] <= self.b_range[1]:
         raise InvalidParameters(f"Magnitude range {self.b_range} is empty or invalid.")
      if self.a_range is not None and (len(self.a_range) != 2 or not 0 < self.a_range[0] <= self.a_range[1]):
         raise InvalidParameters(f"Off-diagonal range {self.a_range} should be a nonempty subset of (0, inf).")
      if self.sign not in [MIXED, POSITIVE, NEGATIVE]:
         raise InvalidParameters(f"Invalid sign policy {self.sign!r}, should be "
                                 f"'{MIXED}', '{POSITIVE}', or '{NEGATIVE}'.")
      if self.kind not in [HALF_LINE, WHOLE_LINE]:
         raise InvalidParameters(f"Invalid kind {self.kind!r}.")

   def to_dict(self):
      data = asdict(self)
      data['support'] = list(self.support)
      data['b_range'] = list(self.b_range)
      data['a_range'] = list(self.a_range) if self.a_range is not None else None
      return data

def sample_generator(seed, index):
   """Counter-based generator keyed by (seed, index)."""
   return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))

def sample(config, index) -> Perturbation:
   """Sample `index` of the ensemble."""
   if index < 0:
      raise InvalidParameters(f"Sample index should be nonnegative, got {index}.")
   rng = sample_generator(config.seed, index)
   size = int(rng.integers(config.support[0], config.support[1] + 1))
   first = 1 if config.kind == HALF_LINE else 0

   # Diagonal values with the configured signs.
   magnitudes = rng.uniform(config.b_range[0], config.b_range[1], size)
   if config.sign == MIXED:
      signs = rng.choice([-1.0, 1.0], size)
   else:
      signs = np.full(size, 1.0 if config.sign == POSITIVE else -1.0)
   b = {first + k: float(s * v) for k, (s, v) in enumerate(zip(signs, magnitudes))}

   # Off-diagonal values on the bonds inside the support.
   a = {}
   if config.a_range is not None and size > 1:
      values = rng.uniform(config.a_range[0], config.a_range[1], size - 1)
      a = {first + k: float(v) for k, v in enumerate(values)}
   return Perturbation(config.kind, a, b)

def random_ensemble(config):
   """Deterministic stream of the configured samples."""
   for index in range(config.samples):
      yield sample(config, index)

def lattice_sample(config, index, nu = 2, half_width = 15, support_half_width = 3) -> LatticeSpec:
   """Random potential and bonds on a (2 support_half_width) per-axis block centered in a box."""
   rng = sample_generator(config.seed, index)
   box = [(-half_width, half_width - 1)] * nu
   axes = [range(-support_half_width, support_half_width)] * nu
   sites = [tuple(s) for s in np.array(np.meshgrid(*axes, indexing = 'ij')).reshape(nu, -1).T.tolist()]

   magnitudes = rng.uniform(config.b_range[0], config.b_range[1], len(sites))
   if config.sign == MIXED:
      signs = rng.choice([-1.0, 1.0], len(sites))
   else:
      signs = np.full(len(sites), 1.0 if config.sign == POSITIVE else -1.0)
   potential = {site: float(s * v) for site, s, v in zip(sites, signs, magnitudes)}

   bonds = {}
   if config.a_range is not None:
      inside = set(sites)
      for site in sites:
         for axis in range(nu):
            neighbor = site[:axis] + (site[axis] + 1,) + site[axis + 1:]
            if neighbor in inside:
               bonds[(site, neighbor)] = float(rng.uniform(config.a_range[0], config.a_range[1]))
   return LatticeSpec(nu, box, potential, bonds)

def _check_config_fields(data):
   """Raise InvalidSpec on a config field of the wrong JSON type."""
   def number(x, integer):
      kinds = int if integer else (int, float)
      return isinstance(x, kinds) and not isinstance(x, bool)

   for name in ['seed', 'samples']:
      if name in data and not number(data[name], True):
         raise InvalidSpec(f"Expected an integer, got {data[name]!r}.", field = name)
   for name in ['support', 'b_range', 'a_range']:
      value = data.get(name)
      if value is None and (name == 'a_range' or name not in data):
         continue
      if not isinstance(value, list) or len(value) != 2 or not all(number(x, name == 'support') for x in value):
         raise InvalidSpec(f"Expected a pair of {'integers' if name == 'support' else 'numbers'}, "
                           f"got {value!r}.", field = name)
   for name in ['sign', 'kind']:
      if name in data and not isinstance(data[name], str):
         raise InvalidSpec(f"Expected a string, got {data[name]!r}.", field = name)

def config_from_dict(data) -> EnsembleConfig:
   if not isinstance(data, dict):
      raise InvalidSpec("Ensemble config should be a JSON object.")
   known = set(EnsembleConfig.__dataclass_fields__)
   unknown = set(data) - known
   if unknown:
      raise InvalidSpec(f"Unknown ensemble config fields {sorted(unknown)}.", field = sorted(unknown)[0])
   _check_config_fields(data)
   return EnsembleConfig(**data)

def load_config(path) -> EnsembleConfig:
   """Load an ensemble config from a JSON file."""
   with open(path, 'r') as file:
      try:
         data = json.load(file)
      except json.JSONDecodeError as e:
         raise InvalidSpec(f"Malformed JSON: {e.msg}.", line = e.lineno, column = e.colno)
   return config_from_dict(data)
