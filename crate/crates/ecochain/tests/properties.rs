//! Cross-module invariants: limit relations between the Malthus and
//! logistic variants, closed-form parameter independence, eigenvalue
//! residuals, and tolerance robustness of the reference runs.

mod common;

use ecochain::equilibria::{self, EquilibriumLabel};
use ecochain::model::{self, Matrix, ModelVariant, State};
use ecochain::scenarios;
use ecochain::simulate::{self, IntegratorConfig};
use ecochain::stability;

/// The Malthus field is the logistic field in the limit of an enormous
/// carrying capacity.
#[test]
fn malthus_is_the_large_capacity_limit_of_logistic() {
    let mut rng = common::rng(0x11A);
    for _ in 0..100 {
        let mut p = common::sample_params(&mut rng);
        p.k = 1e12;
        // States with V <= 10 keep the V^2/K correction below 1e-10.
        let x = common::sample_state(&mut rng, ModelVariant::MalthusEpidemic, 0.0, 10.0);
        let malthus = model::vector_field(ModelVariant::MalthusEpidemic, &p, &x).unwrap();
        let logistic = model::vector_field(ModelVariant::LogisticEpidemic, &p, &x).unwrap();
        let gap = common::max_scaled_gap(&malthus, &logistic);
        assert!(gap < 1e-9, "gap {gap:e} at {p:?}, {x}");
    }
}

/// The logistic coexistence solve converges to the Malthus closed form as
/// K grows without bound.
#[test]
fn coexistence_solve_converges_to_malthus_closed_form() {
    let mut rng = common::rng(0x11B);
    let mut checked = 0;
    while checked < 50 {
        let mut p = common::sample_params(&mut rng);
        p.k = 1e12;
        let malthus_estar = equilibria::malthus_equilibria(&p)
            .into_iter()
            .find(|e| e.label == EquilibriumLabel::EstarTilde)
            .unwrap();
        if !malthus_estar.feasible {
            continue;
        }
        checked += 1;
        let solved = equilibria::logistic_coexistence(&p);
        let eq = solved.solved().expect("regular system at huge K");
        for (a, b) in eq
            .state
            .as_array()
            .iter()
            .zip(malthus_estar.state.as_array())
        {
            let scale = a.abs().max(b.abs()).max(1e-30);
            assert!(
                (a - b).abs() / scale < 1e-6,
                "components {a} vs {b} at {p:?}"
            );
        }
    }
}

/// E3 does not involve (g, f, q) and E4 does not involve (g, beta), as
/// their closed forms dictate.
#[test]
fn boundary_equilibria_ignore_unrelated_rates() {
    let mut rng = common::rng(0x11C);
    for _ in 0..50 {
        let p = common::sample_params(&mut rng);
        let base = equilibria::logistic_boundary_equilibria(&p);
        let e3 = |eqs: &[equilibria::Equilibrium]| {
            eqs.iter()
                .find(|e| e.label == EquilibriumLabel::E3)
                .unwrap()
                .state
        };
        let e4 = |eqs: &[equilibria::Equilibrium]| {
            eqs.iter()
                .find(|e| e.label == EquilibriumLabel::E4)
                .unwrap()
                .state
        };

        let mut q3 = p;
        q3.g = (p.g * 0.5).max(1e-3);
        q3.f = (p.f * 0.7).max(1e-3);
        q3.q = p.q * 1.3;
        let perturbed = equilibria::logistic_boundary_equilibria(&q3);
        assert_eq!(e3(&base), e3(&perturbed), "E3 moved under (g,f,q)");

        let mut q4 = p;
        q4.g = (p.g * 0.6).max(1e-3);
        q4.beta = p.beta * 1.7;
        let perturbed = equilibria::logistic_boundary_equilibria(&q4);
        assert_eq!(e4(&base), e4(&perturbed), "E4 moved under (g,beta)");
    }
}

/// Every reported eigenvalue leaves (M - lambda I) with a tiny smallest
/// singular value, checked through the real 2n x 2n embedding of the
/// complex shift.
#[test]
fn eigenvalues_satisfy_residual_bound() {
    let mut rng = common::rng(0x11D);
    for case in 0..50 {
        let n = if case % 2 == 0 { 3 } else { 4 };
        let m = Matrix::from_fn(n, n, |_, _| rand::Rng::gen_range(&mut rng, -2.0..2.0));
        let norm = m.norm();
        for eig in stability::eigenvalues(&m).unwrap() {
            // [[M - aI, bI], [-bI, M - aI]] shares singular values with
            // M - (a + ib) I.
            let mut embed = Matrix::zeros(2 * n, 2 * n);
            for r in 0..n {
                for c in 0..n {
                    embed[(r, c)] = m[(r, c)];
                    embed[(n + r, n + c)] = m[(r, c)];
                }
                embed[(r, r)] -= eig.re;
                embed[(n + r, n + r)] -= eig.re;
                embed[(r, n + r)] = eig.im;
                embed[(n + r, r)] = -eig.im;
            }
            let smin = embed.svd(false, false).singular_values.min();
            assert!(
                smin < 1e-8 * norm.max(1.0),
                "residual {smin:e} for lambda = {eig} of {m}"
            );
        }
    }
}

/// Characteristic-polynomial coefficients agree with the elementary
/// symmetric functions of the eigenvalues from the independent Schur route.
#[test]
fn char_poly_matches_spectrum_on_random_matrices() {
    let mut rng = common::rng(0x11E);
    for case in 0..100 {
        let n = if case % 2 == 0 { 3 } else { 4 };
        let m = Matrix::from_fn(n, n, |_, _| rand::Rng::gen_range(&mut rng, -1.5..1.5));
        let cp = stability::char_poly(&m).unwrap();
        let eigs = stability::eigenvalues(&m).unwrap();
        let mut poly = vec![stability::Complex64::new(1.0, 0.0)];
        for e in &eigs {
            let mut next = vec![stability::Complex64::new(0.0, 0.0); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k] += c;
                next[k + 1] -= c * e;
            }
            poly = next;
        }
        for (a, b) in cp.coeffs().iter().zip(&poly) {
            let scale = a.abs().max(1.0);
            assert!(
                (a - b.re).abs() / scale < 1e-8 && b.im.abs() < 1e-8,
                "coefficient {a} vs {b} for {m}"
            );
        }
    }
}

/// The Jacobian trace cancels exactly at the Malthus coexistence point:
/// every bracket vanishes there and the prey equation has no self term.
#[test]
fn coexistence_trace_vanishes_on_random_feasible_sets() {
    let mut rng = common::rng(0x7124CE);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 100 {
        attempts += 1;
        assert!(attempts < 100_000, "sampler starved");
        let p = common::sample_params(&mut rng);
        let estar = equilibria::malthus_equilibria(&p)
            .into_iter()
            .find(|e| e.label == EquilibriumLabel::EstarTilde)
            .unwrap();
        if !estar.feasible {
            continue;
        }
        checked += 1;
        let cert = stability::malthus_coexistence_certificate(&p).unwrap();
        assert!(cert.trace_vanishes, "trace {} at {p:?}", cert.trace);
        assert!(cert.unstable_or_marginal);
    }
}

/// Long-term classification names the attractor: E3 for the fig3 run, E1
/// for the fig2 run.
#[test]
fn longterm_matches_the_expected_equilibrium_labels() {
    for (scenario, expected) in [
        (scenarios::fig3(), EquilibriumLabel::E3),
        (scenarios::fig2(), EquilibriumLabel::E1),
    ] {
        let traj = simulate::integrate(
            scenario.variant,
            &scenario.params,
            &scenario.x0,
            &scenario.integrator_config(),
        )
        .unwrap();
        let candidates = equilibria::logistic_boundary_equilibria(&scenario.params);
        match simulate::detect_longterm(&traj, &candidates, scenarios::STATE_TOL).unwrap() {
            simulate::LongTermClass::ConvergedTo { matched, .. } => {
                assert_eq!(matched, Some(expected), "{}", scenario.name);
            }
            other => panic!("{} did not converge: {other:?}", scenario.name),
        }
    }
}

/// The ratio-form feasibility conditions for E3 and E4 agree with direct
/// component signs over random parameter sets.
#[test]
fn e3_e4_feasibility_conditions_match_signs_on_random_sets() {
    let mut rng = common::rng(0x7777);
    for _ in 0..100 {
        let p = common::sample_params(&mut rng);
        let eqs = equilibria::logistic_boundary_equilibria(&p);
        let e3 = eqs
            .iter()
            .find(|e| e.label == EquilibriumLabel::E3)
            .unwrap();
        let e4 = eqs
            .iter()
            .find(|e| e.label == EquilibriumLabel::E4)
            .unwrap();
        let lhs3 = p.r * p.beta * (p.l * p.k - p.mu);
        let rhs3 = p.b * p.k * p.l * p.nu;
        assert_eq!(e3.state.i > 0.0, lhs3 > rhs3, "{p:?}");
        let lhs4 = p.r * p.f * (p.l * p.k - p.mu);
        let rhs4 = p.b * p.k * p.l * p.tau;
        assert_eq!(e4.state.p > 0.0, lhs4 > rhs4, "{p:?}");
    }
}

/// Halving the integrator tolerances moves the fig4 final state by less
/// than 1e-6: the reference runs are tolerance-converged.
#[test]
fn fig4_run_is_tolerance_converged() {
    let s = scenarios::fig4();
    let run = |scale: f64| {
        let cfg = IntegratorConfig {
            rtol: 1e-8 * scale,
            atol: 1e-10 * scale,
            tmax: s.tmax,
            ..Default::default()
        };
        simulate::integrate(s.variant, &s.params, &s.x0, &cfg)
            .unwrap()
            .final_state()
    };
    let coarse = run(1.0);
    let fine = run(0.5);
    for (a, b) in coarse.as_array().iter().zip(fine.as_array()) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

/// Integrating from a state on a face keeps the face exactly, for each of
/// the four populations.
#[test]
fn faces_are_invariant_under_integration() {
    let s = scenarios::fig4();
    let cfg = IntegratorConfig {
        tmax: 25.0,
        ..Default::default()
    };
    for slot in 0..4 {
        let mut x0 = [0.3, 0.6, 0.2, 0.7];
        x0[slot] = 0.0;
        let traj = simulate::integrate(s.variant, &s.params, &State::from_array(x0), &cfg).unwrap();
        assert!(
            traj.states.iter().all(|x| x.as_array()[slot] == 0.0),
            "component {slot} left its face"
        );
    }
}

/// Step-size underflow is reported as an early termination with the partial
/// trajectory intact (triggered here by integrating an exponential blow-up
/// past the overflow point).
#[test]
fn step_underflow_terminates_early_with_reason() {
    let s = scenarios::fig1();
    let cfg = IntegratorConfig {
        tmax: 2000.0,
        ..Default::default()
    };
    // Bottom prey alone grows like e^{rt} in the Malthus chain and
    // overflows near t = 1418 at r = 0.5.
    let x0 = State::new(0.0, 0.0, 0.0, 1.0);
    let traj = simulate::integrate(s.variant, &s.params, &x0, &cfg).unwrap();
    match traj.termination {
        simulate::Termination::StepUnderflow { at } => {
            assert!(at > 1000.0 && at < 2000.0, "underflow at {at}");
        }
        other => panic!("expected step underflow, got {other:?}"),
    }
    assert!(traj.final_time() < 2000.0);
    assert!(traj.states.iter().all(|x| x.is_finite()));
}
