"""State construction, reductions, and negativity against index oracles.

partial_trace and partial_transpose are checked against direct
index-summation implementations written independently of the library
code, so a bug in the reshaping logic cannot hide in both places.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from svetlichny import states
from conftest import random_density, random_product_two_qubit, random_state


def oracle_partial_trace(matrix: np.ndarray, traced: int) -> np.ndarray:
    """Sum over one qubit index explicitly; traced is the qubit position."""
    t = matrix.reshape(2, 2, 2, 2, 2, 2)
    axes = {0: (0, 3), 1: (1, 4), 2: (2, 5)}[traced]
    return np.trace(t, axis1=axes[0], axis2=axes[1]).reshape(4, 4)


def oracle_partial_transpose(matrix: np.ndarray, second: bool) -> np.ndarray:
    """Transpose one factor of a two-qubit matrix by explicit indexing."""
    t = matrix.reshape(2, 2, 2, 2)
    if second:
        swapped = t.transpose(0, 3, 2, 1)
    else:
        swapped = t.transpose(2, 1, 0, 3)
    return swapped.reshape(4, 4)


class TestValidate:
    def test_accepts_proper_density_matrix(self, rng):
        rho = states.validate(random_density(rng, 8), 3)
        assert rho.qubits == 3
        assert rho.dim == 8

    def test_rejects_non_unit_trace(self):
        with pytest.raises(states.StateError):
            states.validate(np.eye(8), 3)

    def test_rejects_negative_eigenvalue(self):
        m = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
        with pytest.raises(states.StateError):
            states.validate(m, 2)

    def test_rejects_wrong_dimension(self, rng):
        with pytest.raises(states.StateError):
            states.validate(random_density(rng, 4), 3)


class TestPartialTrace:
    @settings(max_examples=200, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
           traced=st.sampled_from(states.LABELS))
    def test_matches_index_oracle(self, seed, traced):
        gen = np.random.default_rng(seed)
        rho = states.validate(random_density(gen, 8), 3)
        reduced = states.partial_trace(rho, traced)
        expected = oracle_partial_trace(rho.matrix, states.LABELS.index(traced))
        assert np.abs(reduced.matrix - expected).max() <= 1e-13

    def test_reduced_state_is_valid(self, rng):
        rho = random_state(rng, 3)
        for label in states.LABELS:
            reduced = states.partial_trace(rho, label)
            assert reduced.qubits == 2
            assert np.trace(reduced.matrix).real == pytest.approx(1.0, abs=1e-12)

    def test_product_state_reduces_to_factor(self):
        rho = states.make_reference("product-000")
        reduced = states.partial_trace(rho, "A")
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 0] = 1.0
        assert np.allclose(reduced.matrix, expected, atol=1e-14)


class TestPartialTranspose:
    @settings(max_examples=200, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
           second=st.booleans())
    def test_matches_index_oracle(self, seed, second):
        gen = np.random.default_rng(seed)
        rho = states.validate(random_density(gen, 4), 2)
        target = "second" if second else "first"
        out = states.partial_transpose(rho, transposed=target)
        expected = oracle_partial_transpose(rho.matrix, second)
        assert np.abs(out - expected).max() <= 1e-13

    def test_involution(self, rng):
        rho = random_state(rng, 2)
        once = states.partial_transpose(rho, transposed="second")
        twice = oracle_partial_transpose(once, second=True)
        assert np.allclose(twice, rho.matrix, atol=1e-14)

    def test_preserves_trace_and_hermiticity(self, rng):
        rho = random_state(rng, 2)
        out = states.partial_transpose(rho, transposed="second")
        assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(out, out.conj().T, atol=1e-13)


class TestNegativity:
    def test_bell_state_is_half(self):
        rho = states.make_reference("Bell-Phi+")
        assert states.negativity(rho) == pytest.approx(0.5, abs=1e-12)

    def test_separable_mixtures_have_zero(self, rng):
        for _ in range(50):
            rho = states.validate(random_product_two_qubit(rng), 2)
            assert states.negativity(rho) <= 1e-12

    def test_transpose_side_is_irrelevant(self, rng):
        rho = random_state(rng, 2)
        first = states.negativity(rho, transposed="first")
        second = states.negativity(rho, transposed="second")
        assert first == pytest.approx(second, abs=1e-12)


class TestExampleFamilies:
    def test_all_families_produce_valid_states(self):
        for family in states.FAMILIES:
            lo, hi = states.FAMILY_RANGES[family]
            param = 0.5 * (lo + hi)
            rho = states.make_example(family, param)
            assert rho.qubits == 3

    def test_out_of_range_parameter_rejected(self):
        with pytest.raises(states.StateError):
            states.make_example(states.FAMILY_PURE_W1, 0.99)
        with pytest.raises(states.StateError):
            states.make_example(states.FAMILY_MIXED_GHZ_2W, 0.81)

    def test_unknown_family_rejected(self):
        with pytest.raises(states.StateError):
            states.make_example("no-such-family", 0.5)

    def test_pure_w_class_amplitudes(self):
        lam = 0.92
        rho = states.make_example(states.FAMILY_PURE_W1, lam)
        m = rho.matrix
        assert m[0, 0].real == pytest.approx(lam * lam, abs=1e-12)
        assert m[5, 5].real == pytest.approx(0.09, abs=1e-12)
        assert m[6, 6].real == pytest.approx(0.91 - lam * lam, abs=1e-12)
        assert np.trace(m).real == pytest.approx(1.0, abs=1e-12)

    def test_identity_w_mixes_toward_identity(self):
        rho = states.make_example(states.FAMILY_IDENTITY_W, 0.99)
        w = states.make_reference("W")
        assert np.abs(rho.matrix - w.matrix).max() <= 0.02


class TestDesignatedReduction:
    def test_maximal_slice_uses_designated_matrix(self):
        theta = 1.2
        reduced = states.example_reduced(states.FAMILY_MAXIMAL_SLICE, theta)
        m = reduced.matrix
        assert m[0, 0].real == pytest.approx(0.5, abs=1e-12)
        assert m[3, 3].real == pytest.approx(0.5, abs=1e-12)
        assert m[0, 3].real == pytest.approx(np.cos(theta), abs=1e-12)
        assert m[1, 1].real == pytest.approx(0.0, abs=1e-12)

    def test_other_families_match_true_partial_trace(self):
        rho = states.make_example(states.FAMILY_GHZ_W_CONVEX, 0.6)
        reduced = states.example_reduced(states.FAMILY_GHZ_W_CONVEX, 0.6)
        traced = states.partial_trace(rho, "A")
        assert np.allclose(reduced.matrix, traced.matrix, atol=1e-13)


class TestReferences:
    def test_ghz_marginals_are_separable(self):
        rho = states.make_reference("GHZ")
        for label in states.LABELS:
            reduced = states.partial_trace(rho, label)
            assert states.negativity(reduced) <= 1e-12

    def test_w_marginals_are_entangled(self):
        rho = states.make_reference("W")
        for label in states.LABELS:
            reduced = states.partial_trace(rho, label)
            assert states.negativity(reduced) > 0.2

    def test_unknown_reference_rejected(self):
        with pytest.raises(states.StateError):
            states.make_reference("nope")
