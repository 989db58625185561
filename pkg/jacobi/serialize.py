#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import json

import numpy as np

from util import InvalidSpec
from jacobi.perturbation import Perturbation, HALF_LINE, WHOLE_LINE
from jacobi.lattice_spec import LatticeSpec

__all__ = ['LATTICE', 'spec_from_dict', 'parse_spec', 'load_spec', 'spec_to_dict', 'dump_spec']

LATTICE = 'lattice'

def _decode_key(key, name):
   """Decode a JSON object key holding a JSON array (a lattice site or bond)."""
   try:
      return json.loads(key)
   except json.JSONDecodeError:
      raise InvalidSpec(f"Key {key!r} is not a JSON array.", field = name)

def _is_integer(value):
   return isinstance(value, int) and not isinstance(value, bool)

def _site(value, key, name):
   if not isinstance(value, list) or not all(_is_integer(x) for x in value):
      raise InvalidSpec(f"Key {key!r} should hold a site as a JSON array of integers.", field = name)
   return tuple(value)

def _object(data, name):
   value = data.get(name, {})
   if not isinstance(value, dict):
      raise InvalidSpec(f"Expected an object, got {type(value).__name__}.", field = name)
   return value

def _lattice_value(value, key, name):
   """A number, or a square block given as nested JSON arrays of numbers."""
   def number(x):
      return isinstance(x, (int, float)) and not isinstance(x, bool)
   if number(value):
      return value
   if isinstance(value, list) and all(isinstance(row, list) and all(number(x) for x in row) for row in value):
      return value
   raise InvalidSpec(f"Entry {key!r}: {value!r} should be a number or a matrix of numbers.",
                     field = f"{name}.{key}")

def _integer_keys(mapping, name):
   if not isinstance(mapping, dict):
      raise InvalidSpec(f"Expected an object, got {type(mapping).__name__}.", field = name)
   decoded = {}
   for key, value in mapping.items():
      try:
         decoded[int(key)] = float(value)
      except (TypeError, ValueError):
         raise InvalidSpec(f"Entry {key!r}: {value!r} should map an integer to a number.",
                           field = f"{name}.{key}")
   return decoded

def spec_from_dict(data):
   """Build a Perturbation or LatticeSpec from a decoded JSON object."""
   if not isinstance(data, dict):
      raise InvalidSpec("Spec should be a JSON object.")
   kind = data.get('kind')
   if kind in [HALF_LINE, WHOLE_LINE]:
      unknown = set(data) - {'kind', 'a', 'b'}
      if unknown:
         raise InvalidSpec(f"Unknown fields {sorted(unknown)} for a {kind} spec.", field = sorted(unknown)[0])
      return Perturbation(kind, _integer_keys(data.get('a', {}), 'a'), _integer_keys(data.get('b', {}), 'b'))
   if kind != LATTICE:
      raise InvalidSpec(f"Invalid kind {kind!r}, should be one of "
                        f"'{HALF_LINE}', '{WHOLE_LINE}', '{LATTICE}'.", field = 'kind')

   # Lattice sites and bonds are JSON arrays encoded as object keys.
   for required in ['nu', 'box']:
      if required not in data:
         raise InvalidSpec(f"Missing required field '{required}'.", field = required)
   for name in ['nu', 'buffer']:
      if name in data and not _is_integer(data[name]):
         raise InvalidSpec(f"Expected an integer, got {data[name]!r}.", field = name)
   potential = {}
   for key, value in _object(data, 'V').items():
      potential[_site(_decode_key(key, 'V'), key, 'V')] = _lattice_value(value, key, 'V')
   bonds = {}
   for key, value in _object(data, 'bonds').items():
      pair = _decode_key(key, 'bonds')
      if not isinstance(pair, list) or len(pair) != 2:
         raise InvalidSpec(f"Bond key {key!r} should hold two sites.", field = 'bonds')
      if not isinstance(value, (int, float)) or isinstance(value, bool):
         raise InvalidSpec(f"Bond {key!r} should carry a number, got {value!r}.", field = f"bonds.{key}")
      bonds[(_site(pair[0], key, 'bonds'), _site(pair[1], key, 'bonds'))] = value
   return LatticeSpec(data['nu'], data['box'], potential, bonds, data.get('buffer', 5))

def parse_spec(text):
   """Parse a JSON spec string, reporting the position of syntax errors."""
   try:
      data = json.loads(text)
   except json.JSONDecodeError as e:
      raise InvalidSpec(f"Malformed JSON: {e.msg}.", line = e.lineno, column = e.colno)
   return spec_from_dict(data)

def load_spec(path):
   """Load a spec from a JSON file."""
   with open(path, 'r') as file:
      return parse_spec(file.read())

def spec_to_dict(spec):
   """JSON-ready representation of a Perturbation or LatticeSpec."""
   if isinstance(spec, Perturbation):
      return {'kind': spec.kind,
              'a': {str(n): float(v) for n, v in spec.a.items()},
              'b': {str(n): float(v) for n, v in spec.b.items()}}
   potential = {}
   for site, value in spec.V.items():
      value = np.asarray(value)
      potential[json.dumps(list(site), separators = (',', ':'))] = \
         value.tolist() if value.ndim else float(value)
   bonds = {json.dumps([list(first), list(second)], separators = (',', ':')): float(w)
            for (first, second), w in spec.bonds.items()}
   return {'kind': LATTICE, 'nu': spec.nu, 'box': [list(r) for r in spec.box],
           'V': potential, 'bonds': bonds, 'buffer': spec.buffer}

def dump_spec(spec, indent = None) -> str:
   return json.dumps(spec_to_dict(spec), indent = indent)
