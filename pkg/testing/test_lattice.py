#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import numpy as np
import pytest

from util import InvalidSpec, InvalidParameters
from jacobi.perturbation import Perturbation, WHOLE_LINE
from jacobi.lattice_spec import LatticeSpec, lattice_from_chain
from bounds.evaluate import VIOLATED, INCONCLUSIVE
from lattice.checks import lattice_bounds_check, axis_hopping, strip_inequality_check, strip_trace_check, \
   lattice_bracket_gaps
from lattice.blocks import BlockJacobiSpec, block_matrix, block_spectrum, block_traces, block_lemma51_check, \
   block_lemma51_pair

def _random_box(seed, nu = 2, half_width = 4, reach = 2, bonds = False):
   rng = np.random.default_rng(seed)
   box = [(-half_width, half_width)] * nu
   sites = [tuple(s) for s in np.ndindex(*([2 * reach + 1] * nu))]
   V = {tuple(x - reach for x in s): float(rng.uniform(-3.0, 3.0)) for s in sites}
   weights = {}
   if bonds:
      for site in V:
         neighbor = (site[0] + 1,) + site[1:]
         if neighbor in V:
            weights[(site, neighbor)] = float(rng.uniform(0.2, 2.5))
   return LatticeSpec(nu, box, V, weights)

# Lattice bounds.
def test_origin_potential_bounds(data_dir):
   from jacobi.serialize import load_spec
   spec = load_spec(data_dir / 'lattice_origin.json')
   reports = lattice_bounds_check(spec)
   assert [r.theorem for r in reports] == ['T5_2(p=1)', 'T5_3(p=1)', 'E5_11', 'Remark5_a', 'Remark5_b']
   assert all(r.holds for r in reports)
   assert reports[0].rhs == pytest.approx(8.0)
   assert reports[1].rhs == pytest.approx(4.0 / (8.0 * np.pi) * 64.0)
   assert reports[0].details['N_plus'] == 1

def test_labels_and_powers():
   spec = LatticeSpec(2, [(-10, 10), (-10, 10)], {(0, 0): 8.0})
   reports = lattice_bounds_check(spec, ['T5_2(p=2)', 'T5_3'], p = 1.5)
   assert [r.theorem for r in reports] == ['T5_2(p=2)', 'T5_3(p=1.5)']

def test_one_dimensional_lattice_matches_chain():
   spec = lattice_from_chain(Perturbation(WHOLE_LINE, {}, {0: 1.5}), (-40, 40))
   shifted, moments = lattice_bounds_check(spec, ['Remark5_a', 'T5_2'])
   assert shifted.lhs == pytest.approx(1.5, abs = 1e-9)
   assert abs(shifted.slack) <= shifted.tolerance
   assert moments.lhs == pytest.approx(0.5, abs = 1e-9)

def test_thin_buffer_is_inconclusive():
   spec = LatticeSpec(2, [(-2, 2), (-2, 2)], {(0, 0): 8.0})
   assert all(r.verdict == INCONCLUSIVE for r in lattice_bounds_check(spec))

def test_moment_bound_is_tight_at_large_coupling():
   spec = LatticeSpec(2, [(-10, 10)] * 2, {(0, 0): 1.0, (3, 0): -2.0, (0, 3): 0.5}).scaled(1000.0)
   report, = lattice_bounds_check(spec, ['T5_2(p=1)'])
   assert report.holds
   assert report.rhs == pytest.approx(3500.0)
   assert 0.99 <= report.ratio <= 1.0

@pytest.mark.parametrize('seed', range(4))
def test_random_lattice_bounds(seed):
   spec = _random_box(seed, half_width = 8, bonds = True)
   assert all(r.verdict != VIOLATED for r in lattice_bounds_check(spec))

# Stripping one coordinate.
def test_axis_hopping_splits_the_operator():
   spec = _random_box(0, bonds = True)
   split = axis_hopping(spec, [0]) + axis_hopping(spec, [1])
   assert np.allclose(split.toarray(), axis_hopping(spec, None).toarray())

def test_strip_operator_form_free():
   assert strip_inequality_check(LatticeSpec(2, [(0, 5), (0, 5)])) >= -1e-10

def test_strip_operator_form_fails_for_a_single_site():
   assert strip_inequality_check(LatticeSpec(2, [(-4, 4), (-4, 4)], {(0, 0): 3.0})) < -1e-3

@pytest.mark.parametrize('seed', range(5))
@pytest.mark.parametrize('axis', [0, 1])
def test_strip_trace_form(seed, axis):
   full, stripped = strip_trace_check(_random_box(seed), axis)
   assert full <= stripped + 1e-9

def test_strip_needs_two_dimensions():
   with pytest.raises(InvalidParameters):
      strip_trace_check(LatticeSpec(1, [(0, 5)], {(2,): 1.0}))
   with pytest.raises(InvalidParameters):
      strip_inequality_check(_random_box(0), axis = 2)

@pytest.mark.parametrize('seed', range(3))
def test_lattice_sandwich_brackets(seed):
   lower_gap, upper_gap = lattice_bracket_gaps(_random_box(seed, bonds = True))
   assert lower_gap >= -1e-10 and upper_gap >= -1e-10

# Block chains.
def test_block_matrix_layout():
   block = np.diag([1.5, 0.0])
   M = block_matrix(BlockJacobiSpec({0: block}), (-1, 1))
   assert M.shape == (6, 6)
   assert np.allclose(M[2:4, 2:4], block)
   assert np.allclose(M[0:2, 2:4], np.eye(2))

def test_decoupled_block_is_exact():
   plus, minus = block_lemma51_pair(BlockJacobiSpec({0: np.diag([1.5, 0.0])}))
   assert plus.theorem == 'L5_1(+)' and minus.theorem == 'L5_1(-)'
   assert plus.lhs == pytest.approx(1.5, abs = 1e-8)
   assert plus.rhs == pytest.approx(1.5)
   assert minus.lhs == 0.0 and minus.rhs == 0.0
   assert plus.details['fiber'] == 2

def test_weak_fiber_eigenvalue_is_counted():
   spec = BlockJacobiSpec({0: np.diag([0.01, 1.0])})
   report = block_spectrum(spec)
   assert report.converged and report.N_plus == 2 and report.flagged == 0
   assert sorted(report.E_plus) == pytest.approx([np.sqrt(4.0001), np.sqrt(5.0)], abs = 1e-9)
   plus = block_lemma51_check(spec)
   assert plus.theorem == 'L5_1(+)'
   assert plus.lhs == pytest.approx(1.01, abs = 1e-7)
   assert plus.holds

def test_scalar_blocks_match_chain():
   spec = BlockJacobiSpec({0: -1.5, 2: 2.0})
   assert spec.fiber == 1
   report = block_spectrum(spec)
   assert report.converged and report.N_plus == 1 and report.N_minus == 1
   single = block_lemma51_check(BlockJacobiSpec({0: -1.5}), sign = '-')
   assert single.lhs == pytest.approx(1.5, abs = 1e-8)

@pytest.mark.parametrize('seed', range(4))
def test_random_blocks(seed):
   rng = np.random.default_rng(seed)
   blocks = {}
   for site in range(4):
      raw = rng.uniform(-2.0, 2.0, (2, 2))
      blocks[site] = raw + raw.T
   spec = BlockJacobiSpec(blocks)
   assert all(r.verdict != VIOLATED for r in block_lemma51_pair(spec))

def test_block_traces():
   assert block_traces(BlockJacobiSpec({0: np.diag([1.0, -2.0]), 3: np.diag([0.5, 0.5])})) == \
      pytest.approx((2.0, 2.0))

@pytest.mark.parametrize('blocks', [{0: [[0.0, 1.0], [2.0, 0.0]]}, {0: np.eye(2), 1: np.eye(3)},
                                    {0: [[np.inf]]}, {'x': 1.0}])
def test_invalid_blocks(blocks):
   with pytest.raises(InvalidSpec):
      BlockJacobiSpec(blocks)

def test_block_checks_validation():
   spec = BlockJacobiSpec({0: np.eye(2)})
   assert spec.support() == (0, 0) and BlockJacobiSpec().support() is None
   assert spec == BlockJacobiSpec({0: np.eye(2)}, fiber = 2)
   with pytest.raises(InvalidParameters):
      block_lemma51_check(spec, sign = '*')
   with pytest.raises(InvalidParameters):
      block_matrix(spec, (2, 1))
