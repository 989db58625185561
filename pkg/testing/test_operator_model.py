#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import json

import numpy as np
import pytest
from hypothesis import given, settings

from util import InvalidSpec, InvalidParameters
from jacobi.tridiagonal import SymmetricTridiagonal
from jacobi.perturbation import Perturbation, Band, TruncationPlan, HALF_LINE, WHOLE_LINE, \
   build_truncated_matrix, sandwich_transform, spectral_flip, bracket_gaps
from jacobi.lattice_spec import LatticeSpec, build_lattice_matrix, lattice_sandwich, lattice_from_chain
from jacobi.serialize import parse_spec, spec_from_dict, spec_to_dict, dump_spec, load_spec

from strategies import perturbations

# Truncated matrices.
def test_half_line_site_matrix():
   T = build_truncated_matrix(Perturbation(HALF_LINE, {}, {1: 2.0}), (1, 3))
   assert np.array_equal(T.toarray(), np.array([[2., 1., 0.], [1., 0., 1.], [0., 1., 0.]]))
   assert list(T.sites) == [1, 2, 3]

def test_free_truncation_is_chebyshev():
   T = build_truncated_matrix(Perturbation(), (-49, 50))
   expected = np.sort(2 * np.cos(np.arange(1, 101) * np.pi / 101))
   assert np.allclose(np.linalg.eigvalsh(T.toarray()), expected, atol = 1e-12)

def test_bond_sits_between_its_sites():
   T = build_truncated_matrix(Perturbation(WHOLE_LINE, {0: 2.0}, {}), (-2, 3))
   assert T.off[T.row(0)] == 2.0
   assert np.sum(T.off != 1.0) == 1
   assert np.all(T.diag == 0)

def test_window_extends_to_cover_support(caplog):
   T = build_truncated_matrix(Perturbation(WHOLE_LINE, {}, {10: 1.0}), (0, 5))
   assert T.sites[-1] == 10
   assert "does not cover the support" in caplog.text

def test_strict_window_rejects_partial_cover():
   with pytest.raises(InvalidSpec):
      build_truncated_matrix(Perturbation(WHOLE_LINE, {}, {10: 1.0}), (0, 5), strict = True)

@pytest.mark.parametrize('window', [(3, 2), (4, 4)])
def test_bad_windows(window):
   with pytest.raises(InvalidSpec):
      build_truncated_matrix(Perturbation(), window)

def test_tridiagonal_shape_mismatch():
   with pytest.raises(ValueError):
      SymmetricTridiagonal([1.0, 2.0], [1.0, 1.0])

# Perturbation invariants.
def test_free_values_are_not_stored():
   spec = Perturbation(WHOLE_LINE, {0: 1.0, 1: 2.0}, {3: 0.0, 4: -1.0})
   assert dict(spec.a) == {1: 2.0}
   assert dict(spec.b) == {4: -1.0}
   assert spec.a_at(100) == 1.0 and spec.b_at(-100) == 0.0
   assert spec.support() == (1, 4)

@pytest.mark.parametrize('a, b, kind', [({0: -1.0}, {}, WHOLE_LINE), ({0: 0.0}, {}, WHOLE_LINE),
                                        ({}, {0: 1.0}, HALF_LINE), ({}, {1: float('nan')}, HALF_LINE)])
def test_invalid_perturbations(a, b, kind):
   with pytest.raises(InvalidSpec):
      Perturbation(kind, a, b)

def test_band_and_plan_validation():
   assert Band.for_lattice(2).half_width == 4.0
   with pytest.raises(InvalidParameters):
      Band(edge_margin = 0.0)
   with pytest.raises(InvalidParameters):
      TruncationPlan(initial = 10, max_window = 5)
   assert list(TruncationPlan(initial = 8, max_window = 40).paddings()) == [8, 16, 32]

# Sandwich and flip.
def test_sandwich_single_bond():
   upper = sandwich_transform(Perturbation(WHOLE_LINE, {0: 2.0}, {}), '+')
   assert dict(upper.b) == {0: 1.0, 1: 1.0}
   assert upper.has_free_bonds

def test_sandwich_lower_two_bonds():
   lower = sandwich_transform(Perturbation(WHOLE_LINE, {0: 0.5, 1: 1.5}, {1: 1.0}), '-')
   assert lower.b_at(0) == pytest.approx(-0.5)
   assert lower.b_at(1) == pytest.approx(0.0)
   assert lower.b_at(2) == pytest.approx(-0.5)

def test_sandwich_keeps_diagonal_specs():
   spec = Perturbation(WHOLE_LINE, {}, {0: 1.5, 2: -0.5})
   assert sandwich_transform(spec, '+') == spec
   assert sandwich_transform(spec, '-') == spec

@settings(max_examples = 60, deadline = None)
@given(perturbations())
def test_sandwich_brackets_the_operator(spec):
   lower_gap, upper_gap = bracket_gaps(spec, (-6, 6))
   assert lower_gap >= -1e-10
   assert upper_gap >= -1e-10

@settings(max_examples = 60, deadline = None)
@given(perturbations())
def test_flip_negates_the_spectrum(spec):
   assert spectral_flip(spectral_flip(spec)) == spec
   original = np.linalg.eigvalsh(build_truncated_matrix(spec, (-8, 8)).toarray())
   flipped = np.linalg.eigvalsh(build_truncated_matrix(spectral_flip(spec), (-8, 8)).toarray())
   assert np.allclose(flipped, -original[::-1], atol = 1e-12)

def test_flip_of_free_operator():
   assert spectral_flip(Perturbation()) == Perturbation()
   assert spectral_flip(Perturbation(WHOLE_LINE, {}, {0: 1.5})).b_at(0) == -1.5

# Lattice operators.
def test_chain_lattice_matches_truncation():
   spec = Perturbation(WHOLE_LINE, {0: 2.0, 2: 0.5}, {1: -1.0, 3: 0.7})
   lattice = lattice_from_chain(spec, (-5, 5))
   assert np.allclose(build_lattice_matrix(lattice).toarray(), build_truncated_matrix(spec, (-5, 5)).toarray())

def test_square_box_adjacency():
   M = build_lattice_matrix(LatticeSpec(2, [(0, 2), (0, 2)])).toarray()
   assert M.shape == (9, 9)
   assert sorted(M.sum(axis = 1).tolist()) == [2, 2, 2, 2, 3, 3, 3, 3, 4]
   assert np.allclose(M, M.T)

def test_origin_potential_top_eigenvalue():
   spec = LatticeSpec(2, [(-10, 10), (-10, 10)], {(0, 0): 8.0})
   top = np.linalg.eigvalsh(build_lattice_matrix(spec).toarray())[-1]
   assert 4.0 < top <= 12.0

def test_block_potential_matrix():
   block = np.array([[1.0, 0.5], [0.5, -1.0]])
   spec = LatticeSpec(1, [(0, 3)], {(1,): block})
   M = build_lattice_matrix(spec).toarray()
   assert M.shape == (8, 8)
   assert np.allclose(M[2:4, 2:4], block)
   assert np.allclose(M[0:2, 2:4], np.eye(2))

@pytest.mark.parametrize('kwargs', [
   dict(nu = 2, box = [(0, 3)]),
   dict(nu = 1, box = [(0, 3)], V = {(5,): 1.0}),
   dict(nu = 2, box = [(0, 3), (0, 3)], bonds = {((0, 0), (1, 1)): 2.0}),
   dict(nu = 2, box = [(0, 3), (0, 3)], bonds = {((0, 0), (0, 1)): -1.0}),
   dict(nu = 1, box = [(0, 3)], V = {(0,): 1.0, (1,): np.eye(2)}),
   dict(nu = 1, box = [(0, 3)], V = {(0,): np.array([[0.0, 1.0], [2.0, 0.0]])}),
])
def test_invalid_lattice_specs(kwargs):
   with pytest.raises(InvalidSpec):
      LatticeSpec(**kwargs)

def test_lattice_sandwich_shifts_endpoints():
   spec = LatticeSpec(2, [(-3, 3), (-3, 3)], {(0, 0): 1.0}, {((0, 0), (1, 0)): 1.5})
   upper = lattice_sandwich(spec, '+')
   assert upper.V[(0, 0)] == pytest.approx(1.5)
   assert upper.V[(1, 0)] == pytest.approx(0.5)
   assert not upper.bonds
   assert lattice_sandwich(spec, '-').V[(1, 0)] == pytest.approx(-0.5)

def test_buffer_distance():
   spec = LatticeSpec(2, [(-10, 10), (-10, 10)], {(0, 0): 8.0})
   assert spec.boundary_distance() == 10 and spec.buffer_ok()
   assert not LatticeSpec(1, [(0, 6)], {(2,): 1.0}).buffer_ok()

# JSON codec.
def test_parse_chain_spec():
   spec = parse_spec('{"kind": "whole_line", "a": {"0": 2.0}, "b": {"0": 1.5}}')
   assert spec == Perturbation(WHOLE_LINE, {0: 2.0}, {0: 1.5})

def test_parse_lattice_spec():
   text = '{"kind": "lattice", "nu": 2, "box": [[-15, 15], [-15, 15]], "V": {"[0,0]": 8.0}, ' \
          '"bonds": {"[[0,0],[1,0]]": 2.0}}'
   spec = parse_spec(text)
   assert spec.V[(0, 0)] == 8.0
   assert spec.bond_weight((1, 0), (0, 0)) == 2.0
   assert spec_from_dict(json.loads(dump_spec(spec))) == spec

def test_malformed_json_reports_position():
   with pytest.raises(InvalidSpec) as error:
      parse_spec('{"kind": "whole_line",\n "b": {"0": 1.5,}}')
   assert error.value.line == 2

LATTICE_BOX = {'kind': 'lattice', 'nu': 2, 'box': [[-10, 10], [-10, 10]]}

@pytest.mark.parametrize('data, field', [({'kind': 'whole_line', 'c': {}}, 'c'),
                                         ({'kind': 'periodic'}, 'kind'),
                                         ({'kind': 'lattice', 'nu': 2}, 'box'),
                                         (dict(LATTICE_BOX, V = {'0': 1.0}), 'V'),
                                         (dict(LATTICE_BOX, V = {'[0,0]': 'big'}), 'V.[0,0]'),
                                         (dict(LATTICE_BOX, bonds = {'[[0,0],[0,1]]': None}), 'bonds.[[0,0],[0,1]]'),
                                         (dict(LATTICE_BOX, bonds = {'[[0,0]]': 1.0}), 'bonds'),
                                         (dict(LATTICE_BOX, nu = '2'), 'nu'),
                                         (dict(LATTICE_BOX, buffer = 2.5), 'buffer')])
def test_invalid_spec_fields(data, field):
   with pytest.raises(InvalidSpec) as error:
      spec_from_dict(data)
   assert error.value.field == field

def test_fixture_files_load(data_dir):
   assert load_spec(data_dir / 'ex41.json') == Perturbation(WHOLE_LINE, {}, {0: 1.5})
   assert isinstance(load_spec(data_dir / 'lattice_origin.json'), LatticeSpec)
   assert spec_to_dict(load_spec(data_dir / 'free.json')) == {'kind': 'whole_line', 'a': {}, 'b': {}}
