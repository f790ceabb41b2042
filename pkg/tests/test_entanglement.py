import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from becphase import (
    ModelParams,
    Scenario,
    SIGMA_YY,
    bell_initial,
    branch_overlap,
    concurrence_wootters,
    concurrence_x_state,
    evolve_joint,
    general_initial,
    hybrid_concurrence,
    macro_both_initial,
    macro_phase_relation,
    macro_single_initial,
    partial_trace,
    purity_oracle,
    weak_coupling_phase,
    witness_micro_macro,
    witness_micro_micro,
    x_state_density,
)
from becphase.entanglement import from_computational, to_computational


def bell_block(eta0: float) -> np.ndarray:
    mat = np.zeros((4, 4), dtype=complex)
    mat[0, 0] = math.cos(eta0) ** 2
    mat[1, 1] = math.sin(eta0) ** 2
    mat[0, 1] = mat[1, 0] = 0.5 * math.sin(2 * eta0)
    return mat


def random_x_state(rng) -> tuple[float, float, float, complex]:
    probs = rng.dirichlet([1.0, 1.0, 1.0, 1.0])
    w, y = probs[0], probs[1]
    x = (probs[2] + probs[3]) / 2
    zmod = rng.uniform(0, math.sqrt(w * y))
    z = zmod * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
    return w, x, y, z


class TestSigmaYY:
    def test_hand_checked_matrix(self):
        sy = np.array([[0, -1j], [1j, 0]])
        comp = np.kron(sy, sy)
        np.testing.assert_array_equal(SIGMA_YY, from_computational(comp))

    def test_basis_permutation_round_trip(self):
        rng = np.random.default_rng(3)
        mat = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        np.testing.assert_allclose(from_computational(to_computational(mat)), mat)


class TestWootters:
    def test_bell_state_maximal(self):
        assert concurrence_wootters(bell_block(math.pi / 4)).value == pytest.approx(
            1.0, abs=1e-12
        )

    def test_product_state_zero(self):
        mat = np.zeros((4, 4), dtype=complex)
        mat[0, 0] = 1.0
        assert concurrence_wootters(mat).value == 0.0

    def test_initial_bell_family(self):
        for eta0 in np.linspace(0.05, 1.5, 20):
            c = concurrence_wootters(bell_block(eta0)).value
            assert c == pytest.approx(abs(math.sin(2 * eta0)), abs=1e-12)

    def test_oracle_state_matches_decay_law(self):
        # C(t) = |sin 2 eta0| e^{-Gamma(t)}
        p = ModelParams(omega=1.0, lambda_c=0.2, alpha=1.0)
        eta0 = 0.5
        t = math.pi / 2 / p.lambda_c / 2  # lambda t = pi/4
        rho = partial_trace(evolve_joint(bell_initial(eta0, p), t, p))
        gamma = 2 * abs(p.alpha) ** 2 * math.sin(p.lambda_c * t) ** 2
        assert concurrence_wootters(rho).value == pytest.approx(
            abs(math.sin(2 * eta0)) * math.exp(-gamma), abs=1e-10
        )

    def test_antipodal_decay_endpoint(self):
        # lambda t = pi/2 gives Gamma = 2 |alpha|^2
        p = ModelParams(omega=1.0, lambda_c=0.2, alpha=1.0)
        eta0 = 0.6
        t = math.pi / 2 / p.lambda_c
        rho = partial_trace(evolve_joint(bell_initial(eta0, p), t, p))
        assert concurrence_wootters(rho).value == pytest.approx(
            abs(math.sin(2 * eta0)) * math.exp(-2.0), abs=1e-10
        )

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(5)
        rho0 = to_computational(bell_block(0.5))
        for _ in range(20):
            u1, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
            u2, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
            u = np.kron(u1, u2)
            rot = from_computational(u @ rho0 @ u.conj().T)
            assert concurrence_wootters(rot).value == pytest.approx(
                math.sin(1.0), abs=1e-9
            )

    def test_rejects_invalid_density(self):
        with pytest.raises(ValueError):
            concurrence_wootters(np.eye(4, dtype=complex))


class TestXState:
    def test_zero_coherence(self):
        assert concurrence_x_state(0.5, 0.1, 0.3, 0.0).value == 0.0

    def test_bell_corner(self):
        assert concurrence_x_state(0.5, 0.0, 0.5, 0.5).value == pytest.approx(1.0)

    def test_unphysical_rejected(self):
        with pytest.raises(ValueError):
            concurrence_x_state(0.5, 0.1, 0.3, 0.5)
        with pytest.raises(ValueError):
            concurrence_x_state(0.6, 0.1, 0.3, 0.0)
        with pytest.raises(ValueError):
            concurrence_x_state(-0.1, 0.3, 0.5, 0.0)

    def test_matches_wootters_on_200_draws(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            w, x, y, z = random_x_state(rng)
            shortcut = concurrence_x_state(w, x, y, z).value
            full = concurrence_wootters(x_state_density(w, x, y, z)).value
            assert abs(shortcut - full) < 1e-10

    @given(
        st.floats(0.01, 0.97),
        st.floats(0.0, 1.0),
        st.floats(0.0, 0.999),
        st.floats(-math.pi, math.pi),
    )
    @settings(max_examples=60)
    def test_matches_wootters_property(self, w_frac, y_frac, z_frac, z_arg):
        w = w_frac
        y = (1.0 - w) * y_frac
        x = (1.0 - w - y) / 2
        z = z_frac * math.sqrt(w * y) * cmath.exp(1j * z_arg)
        shortcut = concurrence_x_state(w, x, y, z).value
        full = concurrence_wootters(x_state_density(w, x, y, z)).value
        assert abs(shortcut - full) < 1e-10


class TestHybridConcurrence:
    def test_orthogonal_branches(self):
        res = hybrid_concurrence(math.pi / 4, 0.0)
        assert res.general == pytest.approx(1.0)
        assert res.verbatim == pytest.approx(1.0)

    def test_zero_mixing(self):
        res = hybrid_concurrence(0.0, 0.3)
        assert res.general == 0.0
        assert res.verbatim == 0.0

    def test_reference_values(self):
        res = hybrid_concurrence(math.pi / 4, math.exp(-2.0))
        assert res.verbatim == pytest.approx(math.sqrt(1 - math.exp(-2.0)), abs=1e-12)
        assert res.general == pytest.approx(math.sqrt(1 - math.exp(-4.0)), abs=1e-12)

    def test_overlap_bound(self):
        with pytest.raises(ValueError):
            hybrid_concurrence(0.5, 1.2)


class TestPurityOracle:
    def test_product_state(self):
        p = ModelParams(omega=1.0, alpha=1.0)
        state = general_initial([1.0, 0.0, 0.0, 0.0], p)
        assert purity_oracle(state, "qubits").value < 1e-5

    def test_macro_both_large_alpha_saturates(self):
        p = ModelParams(omega=1.0, alpha=3.0)
        state = macro_both_initial(math.pi / 4, p)
        assert purity_oracle(state, "qubits").value == pytest.approx(1.0, abs=1e-6)

    def test_adjudicates_overlap_exponent(self):
        # the reduced-purity value equals |sin 2 eta0| sqrt(1 - |overlap|^2)
        p = ModelParams(omega=1.0, alpha=1.0)
        state = macro_both_initial(math.pi / 4, p)
        oracle = purity_oracle(state, "qubits").value
        overlap = branch_overlap(state.branches[0], state.branches[1])
        res = hybrid_concurrence(math.pi / 4, overlap)
        assert oracle == pytest.approx(res.general, abs=1e-9)
        assert abs(oracle - res.verbatim) > 0.05

    def test_single_qubit_cut(self):
        p = ModelParams(omega=1.0, alpha=1.0)
        state = macro_single_initial(math.pi / 4, p)
        # qubit 2 carries the mode entanglement, qubit 1 none
        assert purity_oracle(state, "qubit2").value == pytest.approx(
            math.sqrt(1 - math.exp(-4.0)), abs=1e-6
        )
        assert purity_oracle(state, "qubit1").value < 1e-5

    def test_eta0_scaling(self):
        p = ModelParams(omega=1.0, alpha=1.0)
        eta0 = 0.4
        state = macro_both_initial(eta0, p)
        overlap = branch_overlap(state.branches[0], state.branches[1])
        assert purity_oracle(state, "qubits").value == pytest.approx(
            abs(math.sin(2 * eta0)) * math.sqrt(1 - abs(overlap) ** 2), abs=1e-9
        )

    def test_unsupported_cut(self):
        p = ModelParams(omega=1.0, alpha=1.0)
        state = macro_both_initial(0.5, p)
        with pytest.raises(ValueError):
            purity_oracle(state, "mode")

    def test_rank_gate_on_qubits_cut(self):
        p = ModelParams(omega=1.0, lambda_c=0.1, omega_b=0.7, alpha=1.0)
        state = evolve_joint(general_initial([0.5, 0.5, 0.5, 0.5], p), 1.0, p)
        with pytest.raises(ValueError, match="support"):
            purity_oracle(state, "qubits")


class TestWitnessMicroMicro:
    def test_endpoints(self):
        p = ModelParams(omega=1.0, lambda_c=0.001, alpha=1.0)
        scale = 4 * math.pi * p.lambda_c / p.omega
        assert witness_micro_micro(0.0, p).consistent == 0.0
        assert witness_micro_micro(scale, p).consistent == pytest.approx(1.0)

    def test_round_trip(self):
        p = ModelParams(omega=1.0, lambda_c=0.001, alpha=1.3)
        for conc in (0.1, 0.6, 0.95):
            phase = weak_coupling_phase(conc, p)
            res = witness_micro_micro(phase, p)
            assert res.consistent == pytest.approx(conc, abs=1e-10)

    def test_verbatim_returns_square(self):
        # the printed inversion reproduces C^2, not C
        p = ModelParams(omega=1.0, lambda_c=0.001, alpha=1.0)
        res = witness_micro_micro(weak_coupling_phase(0.6, p), p)
        assert res.verbatim == pytest.approx(0.36, abs=1e-10)

    def test_monotone(self):
        p = ModelParams(omega=1.0, lambda_c=0.001, alpha=1.0)
        scale = 4 * math.pi * p.lambda_c / p.omega
        phases = np.linspace(0, scale, 30)
        vals = [witness_micro_micro(ph, p).consistent for ph in phases]
        assert np.all(np.diff(vals) > 0)

    def test_domain(self):
        p = ModelParams(omega=1.0, lambda_c=0.001, alpha=1.0)
        scale = 4 * math.pi * p.lambda_c / p.omega
        with pytest.raises(ValueError):
            witness_micro_micro(-0.1 * scale, p)
        with pytest.raises(ValueError):
            witness_micro_micro(1.1 * scale, p)

    @given(st.floats(0.0, 0.999))
    @settings(max_examples=50)
    def test_round_trip_property(self, conc):
        p = ModelParams(omega=1.0, lambda_c=0.01, alpha=1.0)
        res = witness_micro_micro(weak_coupling_phase(conc, p), p)
        assert res.consistent == pytest.approx(conc, abs=1e-9)


class TestWitnessMicroMacro:
    def test_macro_both_round_trip(self):
        p = ModelParams(omega=1.0, alpha=1.0)
        for conc in (0.1, 0.5, 0.9):
            phase = macro_phase_relation(conc, Scenario.MACRO_BOTH, p)
            res = witness_micro_macro(phase, Scenario.MACRO_BOTH, p)
            assert res.consistent == pytest.approx(conc, abs=1e-10)
            assert res.verbatim == pytest.approx(conc, abs=1e-10)

    def test_macro_both_reference_point(self):
        # phase (17/64) ln 2 at omega = 1 maps back to C = sqrt(1/2)
        p = ModelParams(omega=1.0, alpha=1.0)
        res = witness_micro_macro((17.0 / 64.0) * math.log(2.0), Scenario.MACRO_BOTH, p)
        assert res.verbatim == pytest.approx(math.sqrt(0.5), abs=1e-12)

    def test_macro_single_round_trip_consistent_inverse(self):
        p = ModelParams(omega=1.0, j_vdw=0.2, alpha=1.0)
        for variant in ("verbatim", "corrected"):
            for conc in (0.2, 0.5, 0.8):
                phase = macro_phase_relation(conc, Scenario.MACRO_SINGLE, p, variant)
                res = witness_micro_macro(phase, Scenario.MACRO_SINGLE, p, variant)
                assert res.consistent == pytest.approx(conc, abs=1e-10)

    def test_macro_single_printed_inverse_fails_round_trip(self):
        # the printed inversion omits an additive term and saturates near 1
        p = ModelParams(omega=1.0, j_vdw=0.2, alpha=1.0)
        phase = macro_phase_relation(0.5, Scenario.MACRO_SINGLE, p, "verbatim")
        res = witness_micro_macro(phase, Scenario.MACRO_SINGLE, p, "verbatim")
        assert abs(res.verbatim - 0.5) > 0.4

    def test_zero_exponent_gives_zero(self):
        p = ModelParams(omega=1.0, alpha=1.0)
        assert witness_micro_macro(0.0, Scenario.MACRO_BOTH, p).consistent == 0.0

    def test_domain(self):
        p = ModelParams(omega=1.0, alpha=1.0)
        with pytest.raises(ValueError):
            witness_micro_macro(-0.5, Scenario.MACRO_BOTH, p)
        with pytest.raises(ValueError):
            witness_micro_macro(0.0, Scenario.MICRO_MICRO, p)
