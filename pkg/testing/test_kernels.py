#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from util import DomainError, InvalidParameters, NoEigenvalues
from jacobi.perturbation import Perturbation, HALF_LINE, WHOLE_LINE, build_truncated_matrix
from kernels.resolvent import WHOLE, HALF, band_parameter, band_parameter_from_mu, free_resolvent_entry, \
   half_line_edge_entry, free_resolvent_matrix
from kernels.birman_schwinger import L_MU, K_BETA, K2_BARGMANN, build_bs_kernel, generalized_kernel, \
   partial_sums_S, check_monotone_S, check_bond_monotone, check_fixed_point, resolvent_domination_check, \
   bargmann_chain_check

def _nonnegative_potentials(first = -4, last = 4):
   values = st.floats(min_value = 0.0, max_value = 3.0, allow_nan = False, allow_subnormal = False)
   return st.dictionaries(st.integers(first, last), values, min_size = 1, max_size = 6)

# Band parameters and free resolvents.
def test_band_parameter():
   parameter = band_parameter(2.5)
   assert parameter.mu == pytest.approx(0.5)
   assert parameter.w == pytest.approx(1.5)
   assert band_parameter_from_mu(0.5).beta == pytest.approx(2.5)

@pytest.mark.parametrize('beta', [2.0, 1.0, -3.0])
def test_band_parameter_domain(beta):
   with pytest.raises(DomainError):
      band_parameter(beta)

def test_band_parameter_near_edge():
   parameter = band_parameter(2.0 + 1e-12)
   assert 0 < parameter.mu < 1
   assert parameter.mu + 1 / parameter.mu == pytest.approx(2.0 + 1e-12, abs = 1e-10)

def test_whole_line_entries_against_solve():
   T = build_truncated_matrix(Perturbation(), (-100, 100)).toarray()
   inverse = np.linalg.inv(2.5 * np.eye(len(T)) - T)
   for n, m in [(0, 0), (0, 3), (-2, 5)]:
      assert inverse[n + 100, m + 100] == pytest.approx(free_resolvent_entry(WHOLE, 2.5, n, m), abs = 1e-12)
   assert free_resolvent_entry(WHOLE, 2.5, 0, 0) == pytest.approx(1 / 1.5)

def test_half_line_entries_against_solve():
   T = build_truncated_matrix(Perturbation(HALF_LINE), (1, 200)).toarray()
   inverse = np.linalg.inv(2.5 * np.eye(len(T)) - T)
   for n, m in [(1, 1), (2, 5), (7, 3)]:
      assert inverse[n - 1, m - 1] == pytest.approx(free_resolvent_entry(HALF, 2.5, n, m), abs = 1e-12)
   assert free_resolvent_entry(HALF, 2.5, 1, 1) == pytest.approx((1 - 0.25) / 1.5)

def test_half_line_edge_kernel():
   assert half_line_edge_entry(3, 5) == 3.0
   assert np.array_equal(free_resolvent_matrix(HALF, 2, [1, 2, 4]), [[1, 1, 1], [1, 2, 2], [1, 2, 4]])
   with pytest.raises(InvalidParameters):
      free_resolvent_entry(HALF, 2.5, 0, 2)
   with pytest.raises(InvalidParameters):
      free_resolvent_entry('ring', 2.5, 0, 2)

# Kernels.
def test_mu_kernel_entries():
   kernel = build_bs_kernel(L_MU, {0: 1.0, 2: 4.0}, 0.5)
   assert np.allclose(kernel.matrix, [[1.0, 0.5], [0.5, 4.0]])
   assert kernel.sites == (0, 2) and kernel.trace == pytest.approx(5.0)
   assert build_bs_kernel(L_MU, {0: 1.0, 1: 0.0}, 0.5).sites == (0,)

def test_single_site_beta_kernel():
   kernel = build_bs_kernel(K_BETA, {0: 1.5}, 2.5)
   assert kernel.eigenvalues() == pytest.approx([1.0])

def test_bargmann_kernel():
   kernel = build_bs_kernel(K2_BARGMANN, {1: 1.0, 2: 1.0})
   assert np.allclose(kernel.matrix, [[1.0, 1.0], [1.0, 2.0]])
   assert kernel.line == HALF and kernel.parameter == 2.0

def test_generalized_kernel_reduces_to_mu_kernel():
   b = {0: 1.0, 1: 2.0, 3: 0.5}
   generalized = generalized_kernel(b, {0: 0.3, 1: 0.3, 2: 0.3})
   assert np.allclose(generalized.matrix, build_bs_kernel(L_MU, b, 0.3).matrix)
   assert generalized_kernel(b, {}).matrix[0, 2] == pytest.approx(np.sqrt(0.5))

@pytest.mark.parametrize('kind, b, parameter', [(L_MU, {0: 1.0}, 1.5), (L_MU, {0: -1.0}, 0.5),
                                                (K_BETA, {0: 1.0}, 'x'), ('L_nu', {0: 1.0}, 0.5)])
def test_invalid_kernels(kind, b, parameter):
   with pytest.raises(InvalidParameters):
      build_bs_kernel(kind, b, parameter)

def test_partial_sums():
   M = np.diag([3.0, 1.0, -2.0])
   assert partial_sums_S(M, 2) == pytest.approx(4.0)
   assert partial_sums_S(M, 1, '-') == pytest.approx(-2.0)
   with pytest.raises(InvalidParameters):
      partial_sums_S(M, 4)
   with pytest.raises(InvalidParameters):
      partial_sums_S(M, 1, '*')

@settings(max_examples = 40, deadline = None)
@given(_nonnegative_potentials())
def test_partial_sums_grow_with_mu(b):
   assert check_monotone_S(b, np.linspace(0.05, 1.0, 12)) >= -1e-10

@settings(max_examples = 30, deadline = None)
@given(_nonnegative_potentials(0, 5), st.floats(0.1, 0.9), st.integers(0, 4))
def test_bond_values_enter_evenly(b, mu, bond):
   difference, asymmetry = check_bond_monotone(b, mu, bond, np.linspace(0.0, 1.0, 9))
   assert difference >= -1e-10
   assert asymmetry <= 1e-10

def test_monotone_grid_must_be_sorted():
   with pytest.raises(InvalidParameters):
      check_monotone_S({0: 1.0}, [0.5, 0.2])

# Fixed point and comparison checks.
def test_fixed_point_single_site():
   assert check_fixed_point(Perturbation(WHOLE_LINE, {}, {0: 1.5}), 1.0) <= 1e-8

@pytest.mark.parametrize('coupling', [0.5, 2.0])
def test_fixed_point_two_sites(coupling):
   assert check_fixed_point(Perturbation(WHOLE_LINE, {}, {0: 1.0, 3: 2.0}), coupling) <= 1e-7

def test_fixed_point_weak_coupling():
   assert check_fixed_point(Perturbation(WHOLE_LINE, {}, {0: 0.01}), 1.0) <= 1e-6

def test_fixed_point_random_ensemble():
   rng = np.random.default_rng(11)
   for _ in range(100):
      sites = rng.choice(6, size = rng.integers(1, 4), replace = False)
      spec = Perturbation(WHOLE_LINE, {}, {int(n): float(rng.uniform(0.2, 3.0)) for n in sites})
      assert check_fixed_point(spec, float(rng.uniform(0.5, 2.0))) <= 1e-6

def test_fixed_point_without_eigenvalues():
   with pytest.raises(NoEigenvalues):
      check_fixed_point(Perturbation(WHOLE_LINE, {}, {0: 0.0}), 1.0)

def test_fixed_point_requires_diagonal_nonnegative():
   with pytest.raises(InvalidParameters):
      check_fixed_point(Perturbation(WHOLE_LINE, {0: 2.0}, {0: 1.0}), 1.0)
   with pytest.raises(InvalidParameters):
      check_fixed_point(Perturbation(WHOLE_LINE, {}, {0: -1.0}), 1.0)

@pytest.mark.parametrize('a', [{1: 0.5}, {1: 0.5, 3: 0.8}, {2: 0.1, 3: 0.1, 4: 0.9}])
@pytest.mark.parametrize('beta', [2.01, 2.5, 4.0])
def test_resolvent_domination(a, beta):
   assert resolvent_domination_check(a, beta) >= -1e-12

def test_resolvent_domination_rejects_large_bonds():
   with pytest.raises(InvalidParameters):
      resolvent_domination_check({1: 1.2}, 2.5)

def test_counting_chain():
   chain = bargmann_chain_check(Perturbation(HALF_LINE, {}, {1: 0.5, 3: 1.0}), 2.1)
   assert chain.ordered()
   assert chain.bargmann_trace == pytest.approx(3.5)

@settings(max_examples = 30, deadline = None)
@given(_nonnegative_potentials(1, 6), st.floats(2.01, 5.0))
def test_counting_chain_is_ordered(b, beta):
   assert bargmann_chain_check(b, beta).ordered()

def test_counting_chain_validation():
   with pytest.raises(InvalidParameters):
      bargmann_chain_check(Perturbation(WHOLE_LINE, {}, {0: 1.0}), 2.5)
   with pytest.raises(DomainError):
      bargmann_chain_check({1: 1.0}, 2.0)
