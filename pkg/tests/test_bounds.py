"""Certificate windows, visibility bounds, and the verdict search.

The frozen decimals were computed from the defining eigenvalue
expressions in a standalone script before this module existed; they pin
the detected route on the first worked family and the undetected route
on the fifth.
"""

from __future__ import annotations

import numpy as np
import pytest

from svetlichny import linalg, operators, states
from svetlichny.bounds import (
    BoundConfig,
    BoundsError,
    SingularDenominatorError,
    Window,
    detect_genuine,
    embed_pair,
    full_report,
    lower_bound_detected,
    lower_bound_undetected,
    product_spectrum,
    upper_bound_detected,
    upper_bound_undetected,
)
from conftest import random_state

XY = operators.plane_witness("xy")
XZ = operators.plane_witness("xz")


def _f1_report(p=0.0065, q=0.95):
    rho = states.make_example(states.FAMILY_PURE_W1, 0.92)
    cfg = BoundConfig(p=p, q=q, witness=XZ, reduced_pair=("A", "C"))
    return rho, cfg, full_report(rho, cfg)


def _f5_report(p=0.993, q=0.89, r=0.0):
    rho = states.make_example(states.FAMILY_IDENTITY_W, 0.82)
    cfg = BoundConfig(p=p, q=q, witness=XY, reduced_pair=("B", "C"), r=r)
    return rho, cfg, full_report(rho, cfg)


class TestWindow:
    def test_empty_flag(self):
        assert not Window(0.2, 0.4).empty
        assert Window(0.4, 0.2).empty

    def test_midpoint_and_contains(self):
        w = Window(0.2, 0.4)
        assert w.midpoint == pytest.approx(0.3)
        assert w.contains(0.25)
        assert not w.contains(0.45)


class TestBoundConfig:
    def test_rejects_out_of_range_visibilities(self):
        for p, q in ((0.0, 0.5), (1.1, 0.5), (0.5, 0.0), (0.5, 1.0001)):
            with pytest.raises(BoundsError):
                BoundConfig(p=p, q=q, witness=XY)

    def test_rejects_bad_r(self):
        with pytest.raises(BoundsError):
            BoundConfig(p=0.5, q=0.5, witness=XY, r=1.0)

    def test_rejects_non_hermitian_witness(self):
        bad = np.zeros((4, 4))
        bad[0, 1] = 1.0
        with pytest.raises((BoundsError, linalg.NotHermitianError)):
            BoundConfig(p=0.5, q=0.5, witness=bad)


class TestEmbedding:
    def test_embed_bc_matches_kron(self, rng):
        op = np.diag([1.0, 2.0, 3.0, 4.0]).astype(complex)
        assert np.allclose(embed_pair(op, ("B", "C")), np.kron(np.eye(2), op))

    def test_embed_ab_matches_kron(self):
        op = np.diag([1.0, 2.0, 3.0, 4.0]).astype(complex)
        assert np.allclose(embed_pair(op, ("A", "B")), np.kron(op, np.eye(2)))

    def test_embedded_spectrum_doubles_multiplicities(self, rng):
        rho = random_state(rng, 2)
        emb = embed_pair(rho.matrix, ("A", "C"))
        values = np.sort(np.linalg.eigvalsh(emb))
        direct = np.sort(np.linalg.eigvalsh(rho.matrix))
        assert np.allclose(values, np.sort(np.concatenate([direct, direct])),
                           atol=1e-12)

    def test_product_spectrum_is_real_and_psd_shaped(self, rng):
        rho = random_state(rng, 3)
        reduced = states.partial_trace(rho, "A")
        spec = product_spectrum(rho, reduced, ("B", "C"))
        assert spec.lambda_min >= -1e-12
        assert spec.lambda_max <= 1.0 + 1e-12


class TestDetectedRoute:
    def test_frozen_f1_intermediates(self):
        _, _, rep = _f1_report()
        assert rep.regime == "detected"
        inter = rep.intermediates
        assert inter["lambda_max_product"] == pytest.approx(
            0.8808899200000001, abs=1e-13)
        assert inter["s_nl"] == pytest.approx(0.0018714354586482213, abs=1e-15)

    def test_frozen_f1_bounds(self):
        _, _, rep = _f1_report()
        assert rep.sv_lower == pytest.approx(4.887513234099837, abs=1e-10)
        assert rep.sv_upper == pytest.approx(5.831777027474353, abs=1e-10)

    def test_frozen_f1_windows(self):
        _, _, rep = _f1_report()
        assert rep.genuine_p_window.lower == pytest.approx(
            0.005620958830012582, abs=1e-13)
        assert rep.genuine_p_window.upper == pytest.approx(
            0.007930771175802629, abs=1e-13)
        assert rep.genuine_q_window.lower == pytest.approx(
            0.951426891272455, abs=1e-13)
        assert rep.genuine_q_window.upper == pytest.approx(
            0.965157936662651, abs=1e-13)
        # the listed visibility sits inside the genuine p window
        assert rep.genuine_p_window.contains(0.0065)
        # admissible windows share an endpoint with the genuine ones
        assert rep.p_window.lower == pytest.approx(rep.genuine_p_window.upper)
        assert rep.q_window.lower == pytest.approx(rep.genuine_q_window.upper)

    def test_bounds_vanish_at_unit_visibility_exactly(self):
        rho, cfg, _ = _f1_report()
        reduced = states.partial_trace(rho, "B")
        from svetlichny.nonlocality import s_nl_detected
        s_nl = s_nl_detected(reduced, XZ)
        one = BoundConfig(p=1.0, q=1.0, witness=XZ, reduced_pair=("A", "C"))
        assert lower_bound_detected(rho, reduced, one, s_nl) == 0.0
        assert upper_bound_detected(rho, reduced, one, s_nl) == 0.0


class TestUndetectedRoute:
    def test_frozen_f5_intermediates(self):
        _, _, rep = _f5_report()
        assert rep.regime == "undetected"
        inter = rep.intermediates
        assert inter["lambda_min_product"] == pytest.approx(
            0.0010125000000000006, abs=1e-14)
        assert inter["lambda_max_product"] == pytest.approx(
            0.4224795982887151, abs=1e-13)
        assert inter["H"] == pytest.approx(-0.7999096086713142, abs=1e-12)
        assert inter["F"] == pytest.approx(1.697542732653113, abs=1e-12)
        assert inter["k"] == pytest.approx(0.2417860474608272, abs=1e-13)
        assert inter["r"] == 0.0

    def test_frozen_f5_windows(self):
        _, _, rep = _f5_report()
        assert rep.genuine_p_window.lower == pytest.approx(
            0.6565886928444555, abs=1e-12)
        assert rep.genuine_p_window.upper == pytest.approx(
            0.730015752789509, abs=1e-12)
        assert rep.genuine_q_window.lower == pytest.approx(
            0.9302511566206606, abs=1e-12)
        assert rep.genuine_q_window.upper == pytest.approx(
            0.9496515532994169, abs=1e-12)

    def test_default_r_used_when_unset(self):
        _, _, rep = _f5_report(r=None)
        from svetlichny.nonlocality import default_r
        rho5 = states.example_reduced(states.FAMILY_IDENTITY_W, 0.82)
        assert rep.intermediates["r"] == pytest.approx(default_r(rho5, XY), abs=1e-15)

    def test_bounds_vanish_at_unit_visibility_exactly(self):
        rho = states.make_example(states.FAMILY_IDENTITY_W, 0.82)
        reduced = states.partial_trace(rho, "A")
        from svetlichny.nonlocality import s_nl_new
        strength = s_nl_new(reduced, XY, 0.0)
        one = BoundConfig(p=1.0, q=1.0, witness=XY, reduced_pair=("B", "C"), r=0.0)
        assert lower_bound_undetected(rho, reduced, one, strength) == 0.0
        assert upper_bound_undetected(rho, reduced, one, strength) == 0.0

    def test_genuine_p_window_tracks_h_sign(self):
        from svetlichny.bounds import p_window_undetected
        from svetlichny.nonlocality import NonlocalityStrength, s_nl_new
        rho = states.make_example(states.FAMILY_IDENTITY_W, 0.82)
        reduced = states.example_reduced(states.FAMILY_IDENTITY_W, 0.82)
        strength = s_nl_new(reduced, XY, 0.0)
        _, genuine = p_window_undetected(rho, reduced, strength)
        assert not genuine.empty
        # a vanishing strength leaves H at the positive product floor, and
        # a positive H has to close the genuine window
        feeble = NonlocalityStrength.undetected(
            s_nl_new=1e-12, k=1e-12, p_max=0.75, r=0.0)
        _, closed = p_window_undetected(rho, reduced, feeble)
        assert closed.empty


class TestVerdict:
    def test_all_example_families_are_genuine(self):
        cases = [
            (states.FAMILY_PURE_W1, 0.92),
            (states.FAMILY_MIXED_GHZ_2W, 0.55),
            (states.FAMILY_MAXIMAL_SLICE, 1.2),
            (states.FAMILY_GHZ_W_CONVEX, 0.6),
            (states.FAMILY_IDENTITY_W, 0.82),
        ]
        for family, param in cases:
            verdict = detect_genuine(states.make_example(family, param))
            assert verdict.outcome == "genuine", (family, param)
            assert verdict.window is not None
            assert verdict.window.contains(verdict.value)
            assert verdict.route in ("detected-p", "detected-q",
                                     "undetected-p", "undetected-q")

    def test_product_state_not_applicable(self):
        verdict = detect_genuine(states.make_reference("product-000"))
        assert verdict.outcome == "not-applicable"
        assert verdict.route is None

    def test_maximally_mixed_not_applicable(self):
        rho = states.validate(np.eye(8) / 8.0, 3)
        assert detect_genuine(rho).outcome == "not-applicable"

    def test_ghz_not_applicable_through_marginals(self):
        # the certificate works through two-qubit marginal entanglement,
        # which the GHZ state does not have
        verdict = detect_genuine(states.make_reference("GHZ"))
        assert verdict.outcome == "not-applicable"

    def test_pair_restriction_respected(self):
        rho = states.make_example(states.FAMILY_PURE_W1, 0.92)
        verdict = detect_genuine(rho, pair=("A", "C"))
        assert verdict.outcome == "genuine"
        assert verdict.pair == ("A", "C")

    def test_verdict_value_sits_at_window_midpoint(self):
        rho = states.make_example(states.FAMILY_IDENTITY_W, 0.82)
        verdict = detect_genuine(rho)
        assert verdict.value == pytest.approx(verdict.window.midpoint, abs=1e-15)


class TestSingularHandling:
    def test_singular_denominator_raises(self):
        # a pure product reduced pair has zero negativity, which the
        # undetected route reports before any denominator is formed
        rho = states.make_reference("product-000")
        cfg = BoundConfig(p=0.5, q=0.5, witness=XY, reduced_pair=("B", "C"),
                          r=0.0)
        from svetlichny.nonlocality import NonlocalityError
        with pytest.raises((NonlocalityError, SingularDenominatorError,
                            BoundsError)):
            full_report(rho, cfg)
