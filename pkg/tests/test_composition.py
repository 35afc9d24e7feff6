"""Tests for the composition audit, reconstruction, and the obstruction
classifier."""
from __future__ import annotations

import numpy as np
import pytest

from fock_toeplitz import (
    BivariatePolynomial,
    Combination,
    DomainError,
    GammaSequence,
    ObstructionCase,
    RadialExponential,
    RadialMonomial,
    audit_hypotheses,
    audit_worked_example,
    classify_obstruction,
    compose_radial,
    gamma_sequence,
    reconstruct_details,
    reconstruct_symbol,
    toeplitz_matrix,
)

LAM_EXAMPLE = complex(2.0, 4.0) / 5.0
BETA = complex(3.0, 4.0) / 5.0
R2 = RadialMonomial(1)


class TestClassifier:
    def test_circle_boundary_point_without_positive_real_part(self):
        verdict = classify_obstruction(1.0 + 1.0j)
        assert verdict.case is ObstructionCase.NONE_ASSERTED
        assert verdict.margin == pytest.approx(0.0, abs=1e-15)

    def test_outside_circle(self):
        verdict = classify_obstruction(3.0)
        assert verdict.case is ObstructionCase.CASE2
        assert verdict.margin == pytest.approx(3.0)

    def test_on_circle_with_real_part_above_one(self):
        verdict = classify_obstruction(complex(32.0, 24.0) / 25.0)
        assert verdict.case is ObstructionCase.CASE1
        assert verdict.margin == pytest.approx(0.28, abs=1e-12)

    def test_inside_circle(self):
        verdict = classify_obstruction(1.0)
        assert verdict.case is ObstructionCase.NONE_ASSERTED
        assert verdict.margin == pytest.approx(1.0)

    def test_strictly_inside_is_never_asserted(self):
        verdict = classify_obstruction(0.5 + 0.5j)
        assert verdict.case is ObstructionCase.NONE_ASSERTED
        assert verdict.margin == pytest.approx(0.5)

    def test_tolerance_controls_the_circle_band(self):
        theta = complex(32.0, 24.0) / 25.0 + 1e-12
        assert classify_obstruction(theta).case is ObstructionCase.CASE1
        assert classify_obstruction(theta, tol=1e-15).case is ObstructionCase.CASE2

    def test_json_shape(self):
        payload = classify_obstruction(3.0).to_json()
        assert payload["case"] == "Case2"
        assert payload["theta"] == {"re": 3.0, "im": 0.0}
        assert payload["margin"] == pytest.approx(3.0)


class TestHypothesisAudit:
    def test_constant_factors_satisfy_everything(self):
        report = audit_hypotheses(RadialMonomial(0), RadialMonomial(0), n_entries=32)
        assert report.hyp1_bounded_psi.bounded
        assert report.hyp2_product_bounded.bounded
        assert report.hyp3_phi_square_class.member
        assert all(ok for _x, ok in report.hyp3_phi_square_class.a_converged)
        np.testing.assert_allclose(report.gamma_tau.values, np.ones(32), rtol=1e-13)

    def test_degree_one_square_fails_boundedness(self):
        report = audit_hypotheses(R2, R2, n_entries=64)
        assert not report.hyp1_bounded_psi.bounded
        assert not report.hyp2_product_bounded.bounded
        assert report.hyp2_product_bounded.growth_exponent == pytest.approx(2.0, abs=0.2)
        assert report.hyp1_bounded_psi.growth_exponent == pytest.approx(1.0, abs=0.2)
        assert "prefix" in report.hyp1_bounded_psi.note

    def test_example_exponential_satisfies_everything(self):
        phi = RadialExponential(LAM_EXAMPLE)
        report = audit_hypotheses(phi, phi, n_entries=40)
        assert report.hyp1_bounded_psi.bounded
        assert report.hyp2_product_bounded.bounded
        assert report.hyp3_phi_square_class.member
        assert report.hyp3_phi_square_class.q_finite
        assert all(ok for _x, ok in report.hyp3_phi_square_class.a_converged)
        n = np.arange(40)
        np.testing.assert_allclose(report.gamma_tau.values, BETA ** (2.0 * (n + 1)), rtol=1e-11)

    def test_decaying_factor_tames_growing_factor(self):
        report = audit_hypotheses(R2, RadialExponential(-1.0), n_entries=48)
        assert report.hyp1_bounded_psi.bounded
        assert report.hyp2_product_bounded.bounded
        assert report.hyp3_phi_square_class.member

    def test_x_samples_are_propagated(self):
        report = audit_hypotheses(
            RadialMonomial(0), RadialMonomial(0), n_entries=16, x_samples=(0.5,)
        )
        assert [x for x, _ok in report.hyp3_phi_square_class.a_converged] == [0.5]

    def test_non_radial_factor_is_rejected(self):
        with pytest.raises(DomainError):
            audit_hypotheses(BivariatePolynomial({(1, 0): 1.0}), RadialMonomial(0))
        with pytest.raises(DomainError):
            audit_hypotheses(RadialMonomial(0), BivariatePolynomial({(0, 1): 1.0}))


class TestComposeRadial:
    def test_identity_composition(self):
        report = compose_radial(RadialMonomial(0), RadialMonomial(0), n_entries=24)
        np.testing.assert_allclose(report.gamma_tau.values, np.ones(24), rtol=1e-13)
        assert report.reconstructed_tau == RadialMonomial(0)
        assert report.obstruction is not None
        assert report.obstruction.case is ObstructionCase.NONE_ASSERTED

    def test_degree_one_square_reconstructs_quartic(self):
        report = compose_radial(R2, R2, n_entries=48)
        n = np.arange(48)
        np.testing.assert_allclose(report.gamma_tau.values, (n + 1.0) ** 2, rtol=1e-12)
        tau = report.reconstructed_tau
        assert tau is not None
        g_tau = gamma_sequence(tau, 48)
        np.testing.assert_allclose(g_tau.values, report.gamma_tau.values, rtol=1e-9)
        assert any("diamond" in note for note in report.notes)

    def test_matrix_product_matches_gamma_product(self):
        for phi, psi in [(R2, RadialExponential(-1.0)), (RadialMonomial(2), R2)]:
            report = compose_radial(phi, psi, n_entries=16)
            product = toeplitz_matrix(phi, 16).entries @ toeplitz_matrix(psi, 16).entries
            np.testing.assert_allclose(
                np.diag(product), report.gamma_tau.values, rtol=1e-12
            )
            off_diag = product - np.diag(np.diag(product))
            np.testing.assert_allclose(off_diag, np.zeros((16, 16)), atol=1e-12)

    def test_example_composition_hits_the_obstruction(self):
        phi = RadialExponential(LAM_EXAMPLE)
        report = compose_radial(phi, phi, n_entries=40)
        n = np.arange(40)
        np.testing.assert_allclose(report.gamma_tau.values, BETA ** (2.0 * (n + 1)), rtol=1e-11)
        # the squared sequence is geometric with ratio β², i.e. λ' = 1 − β⁻²,
        # whose real part 1.28 sits outside the weighted L1 class
        assert report.reconstructed_tau is None
        assert any("outside the weighted L1 class" in note for note in report.notes)
        assert report.obstruction is not None
        assert report.obstruction.case is ObstructionCase.CASE1
        assert report.obstruction.margin == pytest.approx(0.28, abs=1e-9)

    def test_composition_of_radial_factors_commutes(self):
        a = compose_radial(R2, RadialExponential(-1.0), n_entries=24)
        b = compose_radial(RadialExponential(-1.0), R2, n_entries=24)
        np.testing.assert_allclose(a.gamma_tau.values, b.gamma_tau.values, rtol=1e-14)

    def test_json_report_shape(self):
        report = compose_radial(RadialMonomial(0), RadialMonomial(0), n_entries=8)
        payload = report.to_json()
        assert set(payload) == {
            "hyp1",
            "hyp2",
            "hyp3",
            "gamma_tau",
            "tau",
            "obstruction",
            "notes",
        }
        assert payload["tau"] == {"kind": "radial_monomial", "m": 0}


class TestReconstruction:
    def test_constant_sequence(self):
        assert reconstruct_symbol(gamma_sequence(RadialMonomial(0), 16)) == RadialMonomial(0)

    def test_single_monomial(self):
        assert reconstruct_symbol(gamma_sequence(R2, 16)) == R2

    def test_quadratic_combination(self):
        g = gamma_sequence(RadialMonomial(2), 24)
        squared = GammaSequence(
            values=g.values * gamma_sequence(RadialMonomial(0), 24).values,
            abs_err=g.abs_err,
            source="synthetic",
            tol=g.tol,
            method="closed",
        )
        symbol = reconstruct_symbol(squared)
        np.testing.assert_allclose(
            gamma_sequence(symbol, 24).values, squared.values, rtol=1e-10
        )

    def test_geometric_sequence(self):
        lam = 0.3 - 0.2j
        symbol = reconstruct_symbol(gamma_sequence(RadialExponential(lam), 32))
        assert isinstance(symbol, RadialExponential)
        np.testing.assert_allclose(symbol.lam, lam, rtol=1e-11)

    def test_round_trip_over_random_closed_forms(self):
        rng = np.random.default_rng(20240814)
        for _ in range(6):
            lam = float(rng.uniform(-2.0, 0.8))
            g = gamma_sequence(RadialExponential(lam), 24)
            back = reconstruct_symbol(g)
            assert isinstance(back, RadialExponential)
            np.testing.assert_allclose(back.lam, lam, atol=1e-9)
        for _ in range(6):
            weights = rng.integers(-3, 4, size=3)
            if not np.any(weights):
                weights[0] = 1
            parts = tuple(
                (float(w), RadialMonomial(m)) for m, w in enumerate(weights) if w != 0
            )
            symbol = Combination(parts)
            g = gamma_sequence(symbol, 24)
            back = reconstruct_symbol(g)
            assert back is not None
            np.testing.assert_allclose(
                gamma_sequence(back, 24).values, g.values, rtol=1e-9, atol=1e-9
            )

    def test_unrecognized_sequence_returns_the_prefix_verdict(self):
        n = np.arange(24)
        values = np.exp(1j * np.sqrt(n + 1.0)) / (n + 1.0) ** 0.25
        g = GammaSequence(
            values=values,
            abs_err=np.zeros(24),
            source="synthetic",
            tol=1e-12,
            method="closed",
        )
        details = reconstruct_details(g)
        assert details.symbol is None
        assert "canonical datum" in details.note

    def test_short_prefix_is_inconclusive(self):
        g = GammaSequence(
            values=np.array([1.0 + 0j, 2.0 + 0j]),
            abs_err=np.zeros(2),
            source="synthetic",
            tol=1e-12,
            method="closed",
        )
        assert reconstruct_details(g).note == "prefix too short to recognize"


class TestWorkedExample:
    def test_end_to_end_report(self):
        report = audit_worked_example(n_entries=24)
        assert report.gamma_reference_max_err <= 1e-12
        assert report.quadrature_vs_reference_max_err <= 1e-9
        assert report.unit_modulus_max_dev <= 1e-12
        assert report.k_modulus_sq == pytest.approx(2.56, abs=1e-6)
        assert report.k_two_re == pytest.approx(2.56, abs=1e-6)
        assert report.circle_deviation <= 1e-6
        assert report.obstruction.case is ObstructionCase.CASE1
        assert report.composition.hyp1_bounded_psi.bounded
        assert report.composition.hyp2_product_bounded.bounded
        assert report.composition.hyp3_phi_square_class.member
        assert any("tension" in note for note in report.notes)
        assert any("convention" in note for note in report.notes)

    def test_json_report_shape(self):
        payload = audit_worked_example(n_entries=12).to_json()
        for key in (
            "n_entries",
            "symbol",
            "gamma_reference_max_err",
            "quadrature_vs_reference_max_err",
            "unit_modulus_max_dev",
            "gamma_quadrature",
            "composition",
            "fit",
            "k_modulus_sq",
            "k_two_re",
            "circle_deviation",
            "obstruction",
            "notes",
        ):
            assert key in payload
        assert payload["n_entries"] == 12
