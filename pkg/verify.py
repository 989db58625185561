#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import sys
import logging
import argparse
from typing import Optional
from dataclasses import dataclass

from util import NoConvergence, configure_logging
from jacobi.perturbation import TruncationPlan
from jacobi.lattice_spec import LatticeSpec
from jacobi.serialize import load_spec, spec_to_dict
from eigensolve.spectrum import discrete_spectrum, lattice_spectrum
from bounds.evaluate import THEOREMS, VIOLATED, INCONCLUSIVE, theorem_ids, parse_theorem, evaluate_bound
from ensembles.examples import analytic_example, theorem3_scaling, counterexample_report, EXAMPLE_IDS
from ensembles.random_specs import EnsembleConfig, load_config, sample, lattice_sample
from ensembles.probe import conjecture_probe, sweep, sweep_bounds
from lattice.checks import lattice_bounds_check
from evaluation.reports import JSON, CSV, write_report

__all__ = ['COMMANDS', 'EXIT_OK', 'EXIT_VIOLATION', 'EXIT_INPUT', 'EXIT_INCONCLUSIVE',
           'RunConfig', 'build_parser', 'config_from_args', 'exit_code', 'run', 'main']

logger = logging.getLogger(__name__)

COMMANDS = ['spectrum', 'verify', 'example', 'probe', 'counterexample', 'lattice', 'sweep', 'sample']

# Process exit codes.
EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3

@dataclass(frozen = True)
class RunConfig:
   """Everything one command-line run needs."""
   command: str
   spec: Optional[str] = None
   config: Optional[str] = None
   theorems: tuple = ()
   p: Optional[float] = None
   seed: Optional[int] = None
   samples: Optional[int] = None
   index: int = 0
   example: Optional[str] = None
   parameter: Optional[float] = None
   eps: Optional[float] = None
   beta: Optional[float] = None
   N: Optional[int] = None
   m: Optional[int] = None
   out: Optional[str] = None
   format: str = JSON
   tol: Optional[float] = None
   max_window: Optional[int] = None
   workers: int = 1
   quiet: bool = False

   @property
   def plan(self) -> TruncationPlan:
      defaults = TruncationPlan()
      max_window = self.max_window or defaults.max_window
      return TruncationPlan(initial = min(defaults.initial, max_window),
                            tolerance = self.tol or defaults.tolerance, max_window = max_window)

def exit_code(reports) -> int:
   """0 when every theorem verdict holds, 1 on any violation, else 3 on any inconclusive one."""
   verdicts = [r.verdict for r in reports if getattr(r, 'category', None) == 'theorem']
   if VIOLATED in verdicts:
      return EXIT_VIOLATION
   if INCONCLUSIVE in verdicts:
      return EXIT_INCONCLUSIVE
   return EXIT_OK

def _ensemble(config) -> EnsembleConfig:
   """Ensemble from --config, with --seed and --samples overriding its fields."""
   ensemble = load_config(config.config) if config.config else EnsembleConfig()
   overrides = {}
   if config.seed is not None:
      overrides['seed'] = config.seed
   if config.samples is not None:
      overrides['samples'] = config.samples
   if not overrides:
      return ensemble
   data = ensemble.to_dict()
   data.update(overrides)
   return EnsembleConfig(**data)

def _default_theorems(spec, p):
   """Every theorem-category id that applies to the spec (and to p, when one is given)."""
   scope = 'lattice' if isinstance(spec, LatticeSpec) else 'chain'
   labels = []
   for name in theorem_ids(scope):
      definition = THEOREMS[name]
      if definition.category != 'theorem':
         continue
      if definition.requires is not None and definition.requires(spec) is not None:
         continue
      if p is not None and definition.takes_p and p < definition.min_p:
         continue
      labels.append(name)
   return labels

def _verify(spec, config):
   labels = list(config.theorems) or _default_theorems(spec, config.p)
   if isinstance(spec, LatticeSpec):
      return lattice_bounds_check(spec, labels, config.p)

   # One spectrum serves every theorem on the spec.
   report = discrete_spectrum(spec, config.plan, raise_on_failure = False)
   results = []
   for label in labels:
      theorem, label_p = parse_theorem(label)
      results.append(evaluate_bound(theorem, spec, p = label_p if label_p is not None else config.p,
                                    report = report))
   return results

def _run_spectrum(config):
   spec = load_spec(config.spec)
   if isinstance(spec, LatticeSpec):
      report = lattice_spectrum(spec)
   else:
      report = discrete_spectrum(spec, config.plan, raise_on_failure = False)
   write_report([report], config.out, config.format)
   return EXIT_OK if report.converged else EXIT_INCONCLUSIVE

def _run_verify(config):
   reports = _verify(load_spec(config.spec), config)
   write_report(reports, config.out, config.format)
   return exit_code(reports)

def _run_example(config):
   if config.example is None or config.parameter is None:
      raise ValueError("example needs --id and --parameter.")
   example = analytic_example(config.example, config.parameter)
   report = discrete_spectrum(example.spec, config.plan, raise_on_failure = False)
   computed = list(report.E_plus) + list(report.E_minus[::-1])
   deviation = max((abs(x - y) for x, y in zip(computed, example.predicted)), default = 0.0)
   if len(computed) != len(example.predicted):
      logger.warning("%s: computed %d eigenvalue(s), predicted %d.", example.id, len(computed),
                     len(example.predicted))
      deviation = float('inf')
   bound = evaluate_bound('T1', example.spec, report = report)
   summary = {'id': example.id, 'parameter': example.parameter, 'predicted': list(example.predicted),
              'computed': computed, 'max_deviation': deviation, 'converged': report.converged,
              't1_lhs': example.t1_lhs, 't1_rhs': example.t1_rhs, 'bound': bound.to_dict()}
   write_report([summary], config.out, config.format)
   return exit_code([bound])

def _run_probe(config):
   result = conjecture_probe(_ensemble(config), config.plan, config.workers, config.quiet or None)
   write_report([result], config.out, config.format)

   # Conjecture findings never fail a run.
   return EXIT_OK

def _run_counterexample(config):
   if config.p is None:
      raise ValueError("counterexample needs --p.")
   if config.eps is not None:
      beta, N, m = theorem3_scaling(config.p, config.eps)
   elif None not in (config.beta, config.N, config.m):
      beta, N, m = config.beta, config.N, config.m
   else:
      raise ValueError("counterexample needs --eps, or all of --beta, --N and --m.")
   result = counterexample_report(config.p, beta, N, m, plan = config.plan)
   summary = dict(result.to_dict(), eps = config.eps, spec = spec_to_dict(result.spec))
   write_report([summary], config.out, config.format)
   return EXIT_OK if result.converged else EXIT_INCONCLUSIVE

def _run_lattice(config):
   labels = list(config.theorems) or None
   if config.spec:
      spec = load_spec(config.spec)
      if not isinstance(spec, LatticeSpec):
         raise ValueError(f"{config.spec} holds a {spec.kind} spec, the lattice command needs a lattice one.")
      reports = lattice_bounds_check(spec, labels, config.p)
   else:
      ensemble = _ensemble(config)

      def evaluate(index):
         return lattice_bounds_check(lattice_sample(ensemble, index), labels, config.p)

      batches = sweep(evaluate, range(ensemble.samples), config.workers, 'Lattice', config.quiet or None)
      reports = [report for batch in batches for report in batch]
   write_report(reports, config.out, config.format)
   return exit_code(reports)

def _run_sweep(config):
   pairs = [parse_theorem(label) for label in (config.theorems or ('T1',))]
   theorems = [(theorem, label_p if label_p is not None else config.p) for theorem, label_p in pairs]
   results = sweep_bounds(_ensemble(config), theorems, config.plan, config.workers, config.quiet or None)
   reports = [report for _, report in results]
   write_report(reports, config.out, config.format)
   return exit_code(reports)

def _run_sample(config):
   spec = sample(_ensemble(config), config.index)
   write_report([spec_to_dict(spec)], config.out, config.format)
   return EXIT_OK

RUNNERS = {'spectrum': _run_spectrum, 'verify': _run_verify, 'example': _run_example,
           'probe': _run_probe, 'counterexample': _run_counterexample, 'lattice': _run_lattice,
           'sweep': _run_sweep, 'sample': _run_sample}

def run(config) -> int:
   """Execute one run, writing its reports, and map the outcome to an exit code."""
   try:
      if config.command not in RUNNERS:
         raise ValueError(f"Unknown command {config.command!r}, should be one of {COMMANDS}.")
      if config.command in ['spectrum', 'verify'] and not config.spec:
         raise ValueError(f"{config.command} needs --spec.")
      return RUNNERS[config.command](config)
   except NoConvergence as e:
      logger.error("%s", e)
      return EXIT_INCONCLUSIVE
   except (ValueError, OSError) as e:
      # InvalidSpec, InvalidParameters, DomainError, and DimensionCapExceeded are all ValueErrors.
      logger.error("%s", e)
      return EXIT_INPUT

def build_parser() -> argparse.ArgumentParser:
   ap = argparse.ArgumentParser(description = "Certify eigenvalue moment bounds for Jacobi and lattice operators.")
   ap.add_argument('command', choices = COMMANDS, help = "The check to run.")
   ap.add_argument('--spec', default = None, help = "Path to a JSON spec.")
   ap.add_argument('--config', default = None, help = "Path to a JSON ensemble config.")
   ap.add_argument('--theorem', default = None,
                   help = "Comma-separated theorem ids or labels, such as T1,T2(p=1.5).")
   ap.add_argument('--p', default = None, type = float, help = "Moment power.")
   ap.add_argument('--seed', default = None, type = int, help = "Ensemble seed.")
   ap.add_argument('--samples', default = None, type = int, help = "Ensemble size.")
   ap.add_argument('--index', default = 0, type = int, help = "Sample index for the sample command.")
   ap.add_argument('--id', default = None, choices = EXAMPLE_IDS, help = "Solvable example id.")
   ap.add_argument('--parameter', default = None, type = float, help = "Solvable example parameter.")
   ap.add_argument('--eps', default = None, type = float, help = "Target norm scale of the spike construction.")
   ap.add_argument('--beta', default = None, type = float, help = "Spike height.")
   ap.add_argument('--N', default = None, type = int, help = "Spike count.")
   ap.add_argument('--m', default = None, type = int, help = "Spike spacing.")
   ap.add_argument('--out', default = None, help = "Output path, standard output by default.")
   ap.add_argument('--format', default = JSON, choices = [JSON, CSV], help = "Output format.")
   ap.add_argument('--tol', default = None, type = float, help = "Eigenvalue convergence tolerance.")
   ap.add_argument('--max-window', default = None, type = int, help = "Largest truncation window, in sites.")
   ap.add_argument('--workers', default = 1, type = int, help = "Worker threads for ensembles.")
   ap.add_argument('--quiet', default = False, action = 'store_true', help = "Only log errors.")
   ap.add_argument('--verbose', default = False, action = 'store_true', help = "Log debug output.")
   return ap

def config_from_args(args) -> RunConfig:
   theorems = tuple(t.strip() for t in _split_labels(args.theorem)) if args.theorem else ()
   return RunConfig(command = args.command, spec = args.spec, config = args.config, theorems = theorems,
                    p = args.p, seed = args.seed, samples = args.samples, index = args.index,
                    example = args.id, parameter = args.parameter, eps = args.eps, beta = args.beta,
                    N = args.N, m = args.m, out = args.out, format = args.format, tol = args.tol,
                    max_window = args.max_window, workers = args.workers, quiet = args.quiet)

def _split_labels(text):
   """Split on commas outside parentheses, so 'T2(p=1.5),T1' gives two labels."""
   labels, depth, current = [], 0, ''
   for char in text:
      depth += {'(': 1, ')': -1}.get(char, 0)
      if char == ',' and depth == 0:
         labels.append(current)
         current = ''
      else:
         current += char
   labels.append(current)
   return [label for label in labels if label.strip()]

def main(argv = None) -> int:
   args = build_parser().parse_args(argv)
   configure_logging(args.verbose, args.quiet)
   return run(config_from_args(args))

if __name__ == '__main__':
   sys.exit(main())
