#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import pathlib

import pytest

from jacobi.perturbation import TruncationPlan

@pytest.fixture
def data_dir():
   """Directory of the JSON spec and ensemble fixtures."""
   return pathlib.Path(__file__).resolve().parent.parent / 'data' / 'specs'

@pytest.fixture
def tight_plan():
   return TruncationPlan(tolerance = 1e-12)

@pytest.fixture
def golden():
   """Compare bytes against a file in data/golden, recording it when it does not exist yet."""
   directory = pathlib.Path(__file__).resolve().parent.parent / 'data' / 'golden'

   def check(name, data):
      path = directory / name
      if not path.exists():
         directory.mkdir(exist_ok = True)
         path.write_bytes(data)
         pytest.skip(f"Recorded {path.name}; later runs compare against it.")
      assert path.read_bytes() == data
   return check
