#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import logging
from typing import Optional
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor

from util import progress
from jacobi.perturbation import Perturbation
from jacobi.serialize import spec_to_dict
from bounds.evaluate import INCONCLUSIVE, evaluate_bound
from ensembles.random_specs import sample

__all__ = ['sweep', 'ProbeResult', 'conjecture_probe', 'sweep_bounds']

logger = logging.getLogger(__name__)

def sweep(evaluate, indices, workers = 1, description = None, disable_progress = None):
   """Apply `evaluate` to every index, in order of the indices whatever the worker count."""
   indices = list(indices)
   if workers <= 1:
      return [evaluate(i) for i in progress(indices, len(indices), description, disable_progress)]
   with ThreadPoolExecutor(max_workers = workers) as pool:
      return list(progress(pool.map(evaluate, indices), len(indices), description, disable_progress))

@dataclass(frozen = True)
class ProbeResult:
   """Smallest slack of the conjectured bound over an ensemble, with its witness."""
   samples: int
   min_slack: Optional[float]
   tolerance: Optional[float]
   index: Optional[int]
   spec: Optional[Perturbation]
   lhs: Optional[float]
   rhs: Optional[float]
   inconclusive: int = 0

   @property
   def finding(self) -> bool:
      """True when some sample undercuts the conjectured bound beyond its tolerance."""
      return self.min_slack is not None and self.min_slack < -self.tolerance

   def to_dict(self):
      return {'samples': self.samples, 'min_slack': self.min_slack, 'tolerance': self.tolerance,
              'index': self.index, 'lhs': self.lhs, 'rhs': self.rhs, 'finding': self.finding,
              'inconclusive': self.inconclusive,
              'spec': spec_to_dict(self.spec) if self.spec is not None else None}

def conjecture_probe(config, plan = None, workers = 1, disable_progress = None) -> ProbeResult:
   """Evaluate the first bound with (a_n - 1)_+ in place of |a_n - 1| across an ensemble."""
   def evaluate(index):
      return evaluate_bound('T1_conjecture', sample(config, index), plan = plan)

   reports = sweep(evaluate, range(config.samples), workers, 'Probe', disable_progress)

   # Lowest slack wins, ties go to the lowest index.
   best, inconclusive = None, 0
   for index, report in enumerate(reports):
      if report.verdict == INCONCLUSIVE:
         inconclusive += 1
         continue
      if best is None or report.slack < reports[best].slack:
         best = index
   if best is None:
      return ProbeResult(config.samples, None, None, None, None, None, None, inconclusive)

   witness = reports[best]
   result = ProbeResult(config.samples, witness.slack, witness.tolerance, best, sample(config, best),
                        witness.lhs, witness.rhs, inconclusive)
   if result.finding:
      logger.warning("Sample %d undercuts the conjectured bound: slack %.3g beyond tolerance %.3g.",
                     best, witness.slack, witness.tolerance)
   return result

def sweep_bounds(config, theorems, plan = None, workers = 1, disable_progress = None):
   """Evaluate (theorem id, p) pairs on every ensemble sample; returns (index, report) pairs."""
   def evaluate(index):
      spec = sample(config, index)
      return [(index, evaluate_bound(theorem, spec, p = p, plan = plan)) for theorem, p in theorems]

   results = sweep(evaluate, range(config.samples), workers, 'Sweep', disable_progress)
   return [pair for batch in results for pair in batch]
