import math

import numpy as np
import pytest

from conftest import random_freq_params, random_params
from puosc.core import (PhaseState, PuParams, flow_residual, hamiltonian_h1,
                        poisson_j1, poisson_j2)
from puosc.dynamics import (ClassicalSolution, LinearField,
                            Potential, PotentialField, charge_values,
                            conservation_report, cosine_potential,
                            cubic_potential, eval_solution,
                            interaction_compatibility,
                            interaction_transform_constraint, integrate,
                            parse_potential, quartic_potential,
                            structure_discovery, two_route_max_error)
from puosc.errors import (ComplexBranchError, ConstructionError,
                          DivergenceError, InconclusiveTestError,
                          InvalidInputError, InvalidRegimeError,
                          ParameterDomainError)
from puosc.hierarchy import charge_ladder, coefficients_on_h1h2
from puosc.linalg import inverse
from puosc.transform import build
from puosc.dynamics import constraint_residual


class TestClassicalSolution:
    def test_zero_amplitudes(self, p54):
        sol = ClassicalSolution(p54, (0, 0, 0, 0), "nondegenerate")
        assert eval_solution(sol, 3.7).as_array().tolist() == [0.0, 0.0, 0.0, 0.0]

    def test_cosine_mode_derivatives(self, p54):
        sol = ClassicalSolution(p54, (0, 1, 0, 0), "nondegenerate")
        state = eval_solution(sol, 0.0)
        assert state.as_array().tolist() == [1.0, 0.0, -4.0, 0.0]

    def test_degenerate_secular_mode(self):
        p = PuParams.from_frequencies(1.0, 1.0)
        sol = ClassicalSolution(p, (0, 0, 1, 0), "degenerate")
        state = eval_solution(sol, math.pi)
        assert state.q == pytest.approx(0.0, abs=1e-12)
        assert state.qd == pytest.approx(-math.pi, rel=1e-12)

    def test_regime_mismatch_rejected(self, p54):
        with pytest.raises(InvalidRegimeError):
            ClassicalSolution(p54, (1, 0, 0, 0), "degenerate")

    @pytest.mark.parametrize("regime", ["nondegenerate", "degenerate"])
    def test_satisfies_equation_of_motion(self, regime, rng):
        from puosc.modes import d_dt, eval_terms
        from puosc.symmetry import solution_terms
        for _ in range(50):
            if regime == "degenerate":
                w = float(rng.uniform(0.5, 2.0))
                p = PuParams.from_frequencies(w, w)
            else:
                p = random_freq_params(rng)
            amps = tuple(rng.uniform(-1, 1, 4))
            sol = ClassicalSolution(p, amps, regime)
            t = float(rng.uniform(0, 10))
            v = eval_solution(sol, t)
            terms = solution_terms(regime, amps, p)
            for _ in range(4):
                terms = d_dt(terms)
            q4 = eval_terms(terms, t)
            assert abs(q4 + p.alpha * v.qdd + p.beta * v.q) <= 1e-9


class TestPotentials:
    def test_builtins_validate(self):
        for pot in (quartic_potential(0.25), cubic_potential(0.5), cosine_potential(2.0)):
            assert pot.derivative(0.7) == pytest.approx(
                (pot.value(0.7 + 1e-6) - pot.value(0.7 - 1e-6)) / 2e-6, rel=1e-4)

    def test_inconsistent_derivative_rejected(self):
        with pytest.raises(InvalidInputError):
            Potential("on_q", lambda x: x ** 2, lambda x: 3 * x, "broken")

    def test_bad_kind_rejected(self):
        with pytest.raises(InvalidInputError):
            Potential("on_qd", lambda x: x, lambda x: 1.0, "bad-kind")

    def test_parse(self):
        pot = parse_potential("quartic:lam=0.5")
        assert pot.derivative(2.0) == pytest.approx(0.5 * 8.0)
        assert parse_potential("cosine", kind="on_qdd").kind == "on_qdd"
        with pytest.raises(InvalidInputError):
            parse_potential("sextic")
        with pytest.raises(InvalidInputError):
            parse_potential("quartic:mass=2")


class TestIntegration:
    def test_matches_analytic_solution(self, p54):
        sol = ClassicalSolution(p54, (0.3, -0.5, 0.7, 0.2), "nondegenerate")
        v0 = eval_solution(sol, 0.0)
        traj = integrate(LinearField(p54), v0, 1e-3, 10.0)
        worst = 0.0
        for t, state in traj.samples[::250]:
            worst = max(worst, np.max(np.abs(
                state.as_array() - eval_solution(sol, t).as_array())))
        assert worst <= 1e-6

    def test_fourth_order_convergence(self, p54):
        sol = ClassicalSolution(p54, (0.3, -0.5, 0.7, 0.2), "nondegenerate")
        v0 = eval_solution(sol, 0.0)
        exact = eval_solution(sol, 10.0).as_array()

        def terminal_error(h):
            traj = integrate(LinearField(p54), v0, h, 10.0)
            return np.max(np.abs(traj.final_state().as_array() - exact))

        assert terminal_error(0.02) / terminal_error(0.01) >= 14.0

    def test_zero_state_stays_zero(self, p54):
        traj = integrate(PotentialField(p54, quartic_potential(0.25)),
                         PhaseState(0, 0, 0, 0), 1e-2, 2.0)
        assert np.max(np.abs(traj.states)) == 0.0

    def test_divergence_reports_time(self):
        p = PuParams(0.0, -1.0)  # real exponential branch
        with pytest.raises(DivergenceError) as err:
            integrate(LinearField(p), PhaseState(1, 1, 1, 1), 0.05, 800.0)
        assert 0.0 < err.value.t_reached < 800.0

    def test_bad_step_rejected(self, p54):
        with pytest.raises(InvalidInputError):
            integrate(LinearField(p54), PhaseState(1, 0, 0, 0), -0.1, 1.0)
        with pytest.raises(InvalidInputError):
            integrate(LinearField(p54), PhaseState(1, 0, 0, 0), 0.5, 0.2)


class TestConservation:
    def test_linear_charges_conserved(self, p54):
        sol = ClassicalSolution(p54, (0.3, -0.5, 0.7, 0.2), "nondegenerate")
        v0 = eval_solution(sol, 0.0)
        traj = integrate(LinearField(p54), v0, 1e-3, 50.0)
        charges = list(charge_ladder(p54, 6).charges)
        assert max(conservation_report(traj, charges)) <= 1e-8

    def test_constant_trajectory_has_zero_drift(self, p54):
        traj = integrate(LinearField(p54), PhaseState(0, 0, 0, 0), 1e-2, 1.0)
        drifts = conservation_report(traj, list(charge_ladder(p54, 4).charges))
        assert drifts == [0.0, 0.0, 0.0, 0.0]

    def test_interaction_breaks_bare_charge_but_not_augmented(self, p54):
        pot = quartic_potential(0.25)
        sol = ClassicalSolution(p54, (0.3, -0.5, 0.7, 0.2), "nondegenerate")
        v0 = eval_solution(sol, 0.0)
        traj = integrate(PotentialField(p54, pot), v0, 1e-3, 50.0)
        h1 = hamiltonian_h1(p54)
        bare = conservation_report(traj, [h1])[0]
        augmented = conservation_report(traj, [h1], augment=pot)[0]
        assert bare > 1e-3
        assert augmented <= 1e-8

    def test_degenerate_amplitude_growth(self):
        p = PuParams.from_frequencies(1.0, 1.0)
        sol = ClassicalSolution(p, (0.0, 0.0, 1.0, 0.0), "degenerate")
        early = max(abs(eval_solution(sol, t).q) for t in np.linspace(0, 2, 100))
        late = max(abs(eval_solution(sol, t).q) for t in np.linspace(18, 20, 100))
        assert late > 5.0 * early


class TestInteractionCompatibility:
    def test_q_potential_selects_first_tensor(self, p54, rng):
        report = interaction_compatibility(p54, quartic_potential(0.25), rng=rng)
        assert report.compatible_ray == (1.0, 0.0)
        others = [report.residuals[k] for k in range(32) if k not in report.compatible]
        assert min(others) >= 1e-3 * report.scale

    def test_qdd_potential_selects_second_tensor(self, p54, rng):
        pot = quartic_potential(0.25, kind="on_qdd")
        report = interaction_compatibility(p54, pot, rng=rng)
        assert report.compatible_ray == (0.0, 1.0)
        others = [report.residuals[k] for k in range(32) if k not in report.compatible]
        assert min(others) >= 1e-3 * report.scale

    def test_trivial_potential_rejected(self, p54, rng):
        flat = Potential("on_q", lambda x: 0.0, lambda x: 0.0, "flat")
        with pytest.raises(InconclusiveTestError):
            interaction_compatibility(p54, flat, rng=rng)

    def test_compatible_direction_is_exact(self, p54, rng):
        report = interaction_compatibility(p54, cosine_potential(1.5), rng=rng)
        assert len(report.compatible) == 1
        assert report.residuals[report.compatible[0]] <= 1e-9 * report.scale


class TestInteractionTransform:
    def test_example_amplitude(self, p54):
        ax, ay = interaction_transform_constraint(p54, 0.0)
        assert (ax, ay) == (3.0, -3.0)

    def test_zero_radicand_rejected(self, p54):
        g0 = (p54.alpha ** 2 - 4 * p54.beta) / 4.0
        with pytest.raises(ConstructionError):
            interaction_transform_constraint(p54, g0)

    def test_negative_radicand_rejected(self, p54):
        with pytest.raises(ComplexBranchError):
            interaction_transform_constraint(p54, 10.0)

    def test_constraints_hold_through_catalog_spec(self, rng):
        for _ in range(10):
            p = random_freq_params(rng)
            g = float(rng.uniform(-0.3, 0.3))
            try:
                ax, ay = interaction_transform_constraint(p, g)
            except (ComplexBranchError, ConstructionError):
                continue
            spec = build("Ta2+", p, ax=ax, ay=ay, g=g)
            assert constraint_residual(spec, p) <= 1e-10

    def test_ta1_branch_singular(self, p54):
        spec = build("Ta1+", p54, ax=1.0, ay=1.0, g=0.0)
        with pytest.raises(ConstructionError):
            constraint_residual(spec, p54)

    def test_two_route_trajectories_agree(self, p54):
        err = two_route_max_error(p54, 0.5, quartic_potential(0.25),
                                  PhaseState(0.3, -0.2, 0.25, 0.1),
                                  h=1e-3, t_end=10.0)
        assert err <= 1e-6


class TestStructureDiscovery:
    def test_kernel_contains_both_inverse_tensors(self, p54):
        result = structure_discovery(p54)
        span = np.column_stack([k.ravel() for k in result.kernels])
        for tensor in (poisson_j1(p54), poisson_j2(p54)):
            target = inverse(tensor.matrix).ravel()
            coef, _, _, _ = np.linalg.lstsq(span, target, rcond=None)
            assert np.linalg.norm(span @ coef - target) <= 1e-9 * (
                1 + np.linalg.norm(target))

    def test_pairs_generate_the_flow(self, rng):
        for _ in range(10):
            p = random_params(rng)
            for j, h in structure_discovery(p).pairs:
                assert flow_residual(j, h, p) <= 1e-10

    def test_products_are_symmetric(self, rng):
        from puosc.core import companion_field
        p = random_params(rng)
        m = companion_field(p)
        for k in structure_discovery(p).kernels:
            s = k @ m
            assert np.linalg.norm(s - s.T) <= 1e-10 * (1 + np.linalg.norm(s))

    def test_first_ray_recovers_standard_hamiltonian(self, p54):
        result = structure_discovery(p54)
        j1inv = inverse(poisson_j1(p54).matrix)
        span = np.column_stack([k.ravel() for k in result.kernels])
        coef, _, _, _ = np.linalg.lstsq(span, j1inv.ravel(), rcond=None)
        from puosc.core import companion_field, QuadHamiltonian
        k = sum(c * kk for c, kk in zip(coef, result.kernels))
        s = k @ companion_field(p54)
        recovered = QuadHamiltonian(0.5 * (s + s.T), sym_tol=1e-8)
        c1, c2 = coefficients_on_h1h2(p54, recovered)
        assert c1 == pytest.approx(1.0, rel=1e-9)
        assert abs(c2) <= 1e-9

    def test_combination_closure_at_inverse_level(self, p54, rng):
        # (c1 J1 + c2 J2)^-1 stays inside the discovered kernel span
        result = structure_discovery(p54)
        span = np.column_stack([k.ravel() for k in result.kernels])
        for _ in range(10):
            c1, c2 = rng.uniform(-2, 2, 2)
            jbar = c1 * poisson_j1(p54).matrix + c2 * poisson_j2(p54).matrix
            if abs(np.linalg.det(jbar)) < 1e-6:
                continue
            target = inverse(jbar).ravel()
            coef, _, _, _ = np.linalg.lstsq(span, target, rcond=None)
            assert np.linalg.norm(span @ coef - target) <= 1e-9 * (
                1 + np.linalg.norm(target))

    def test_beta_zero_rejected(self):
        with pytest.raises(ParameterDomainError):
            structure_discovery(PuParams(1.0, 0.0))


class TestChargeValues:
    def test_matches_direct_evaluation(self, p54, rng):
        sol = ClassicalSolution(p54, (0.2, 0.1, -0.4, 0.3), "nondegenerate")
        traj = integrate(LinearField(p54), eval_solution(sol, 0.0), 1e-2, 1.0)
        h1 = hamiltonian_h1(p54)
        vals = charge_values(traj, h1)
        for i in (0, 50, 100):
            assert vals[i] == pytest.approx(h1.value(traj.states[i]), rel=1e-12)
