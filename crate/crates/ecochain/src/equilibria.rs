//! Equilibria of every model variant: closed forms where they exist, a dense
//! linear solve for the logistic coexistence point, and the rho thresholds
//! that organize the transcritical bifurcations.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::model::{self, ModelVariant, ParameterSet, State};

/// Condition-number cutoff beyond which the coexistence solve is reported
/// degenerate rather than trusted.
pub const SINGULARITY_THRESHOLD: f64 = 1e12;

/// Labels of all equilibria across the four variants.
///
/// `D*` names belong to the disease-free chain, tilde names (`E0t`, `E1t`,
/// `Estar_t`) to the Malthus epidemic chain, and plain `E` names to the
/// logistic epidemic chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquilibriumLabel {
    D1,
    Dhat,
    Dstar,
    E0Tilde,
    E1Tilde,
    EstarTilde,
    E0,
    E1,
    E2,
    E3,
    E4,
    Estar,
}

impl EquilibriumLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            EquilibriumLabel::D1 => "D1",
            EquilibriumLabel::Dhat => "Dhat",
            EquilibriumLabel::Dstar => "Dstar",
            EquilibriumLabel::E0Tilde => "E0t",
            EquilibriumLabel::E1Tilde => "E1t",
            EquilibriumLabel::EstarTilde => "Estar_t",
            EquilibriumLabel::E0 => "E0",
            EquilibriumLabel::E1 => "E1",
            EquilibriumLabel::E2 => "E2",
            EquilibriumLabel::E3 => "E3",
            EquilibriumLabel::E4 => "E4",
            EquilibriumLabel::Estar => "Estar",
        }
    }
}

impl std::fmt::Display for EquilibriumLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How an equilibrium was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    LinearSolve,
}

/// A labeled equilibrium with feasibility flag and residual.
///
/// `feasible` means every component is nonnegative and finite; infeasible
/// records keep their (negative) components so callers can see why.
/// `residual` is the Euclidean norm of the vector field at `state`.
#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub label: EquilibriumLabel,
    pub state: State,
    pub feasible: bool,
    pub provenance: Provenance,
    pub residual: f64,
}

impl Equilibrium {
    fn from_state(
        label: EquilibriumLabel,
        variant: ModelVariant,
        p: &ParameterSet,
        state: State,
        provenance: Provenance,
    ) -> Self {
        let dx = model::eval_raw(variant, p, &state.as_array());
        let residual = dx.iter().map(|x| x * x).sum::<f64>().sqrt();
        let feasible = state.is_finite() && state.is_nonnegative();
        Self {
            label,
            state,
            feasible,
            provenance,
            residual,
        }
    }
}

/// One entry of the full equilibrium listing for a variant.
#[derive(Debug, Clone, PartialEq)]
pub enum EquilibriumRecord {
    Present(Equilibrium),
    /// The point escapes to infinity in the Malthus limit; it exists at a
    /// finite level only in the logistic case.
    AbsentInMalthus {
        label: EquilibriumLabel,
    },
    Degenerate {
        label: EquilibriumLabel,
        reason: String,
    },
}

impl EquilibriumRecord {
    pub fn label(&self) -> EquilibriumLabel {
        match self {
            EquilibriumRecord::Present(eq) => eq.label,
            EquilibriumRecord::AbsentInMalthus { label } => *label,
            EquilibriumRecord::Degenerate { label, .. } => *label,
        }
    }

    pub fn as_present(&self) -> Option<&Equilibrium> {
        match self {
            EquilibriumRecord::Present(eq) => Some(eq),
            _ => None,
        }
    }
}

/// The two dimensionless thresholds governing the transcritical bifurcations
/// of the disease-free chain: `rho1 = lK/mu` and
/// `rho2 = (fr/(b tau)) (1 - mu/(lK))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdPair {
    pub rho1: f64,
    pub rho2: f64,
}

/// Evaluate the rho thresholds for a (logistic) parameter set.
pub fn thresholds(p: &ParameterSet) -> ThresholdPair {
    let rho1 = p.l * p.k / p.mu;
    let rho2 = (p.f * p.r / (p.b * p.tau)) * (1.0 - p.mu / (p.l * p.k));
    ThresholdPair { rho1, rho2 }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EquilibriaError {
    #[error("degenerate denominator: fc = gq")]
    DegenerateDenominator,
}

/// Equilibria of the logistic disease-free chain: the bottom-prey-only point
/// `D1 = (0, 0, K)`, the top-predator-free point `Dhat`, and coexistence
/// `Dstar`. `Dhat` is feasible iff `rho1 >= 1`, `Dstar` iff `rho2 >= 1`.
pub fn disease_free_equilibria(p: &ParameterSet) -> Vec<Equilibrium> {
    let variant = ModelVariant::LogisticDiseaseFree;
    let d1 = State::new(0.0, 0.0, 0.0, p.k);
    let dhat = State::new(
        0.0,
        (p.r / p.b) * (1.0 - p.mu / (p.l * p.k)),
        0.0,
        p.mu / p.l,
    );
    let shortfall = 1.0 - p.b * p.tau / (p.r * p.f);
    let dstar = State::new(
        (p.l * p.k * shortfall - p.mu) / p.q,
        p.tau / p.f,
        0.0,
        p.k * shortfall,
    );
    vec![
        Equilibrium::from_state(EquilibriumLabel::D1, variant, p, d1, Provenance::ClosedForm),
        Equilibrium::from_state(
            EquilibriumLabel::Dhat,
            variant,
            p,
            dhat,
            Provenance::ClosedForm,
        ),
        Equilibrium::from_state(
            EquilibriumLabel::Dstar,
            variant,
            p,
            dstar,
            Provenance::ClosedForm,
        ),
    ]
}

/// Equilibria of the Malthus disease-free chain. `D1` and `Dstar` recede to
/// infinity as `K` grows without bound; only the Lotka-Volterra center
/// `(0, r/b, mu/l)` survives (reported under the `Dhat` label).
pub fn malthus_disease_free_equilibria(p: &ParameterSet) -> Vec<EquilibriumRecord> {
    let variant = ModelVariant::MalthusDiseaseFree;
    let center = State::new(0.0, p.r / p.b, 0.0, p.mu / p.l);
    vec![
        EquilibriumRecord::AbsentInMalthus {
            label: EquilibriumLabel::D1,
        },
        EquilibriumRecord::Present(Equilibrium::from_state(
            EquilibriumLabel::Dhat,
            variant,
            p,
            center,
            Provenance::ClosedForm,
        )),
        EquilibriumRecord::AbsentInMalthus {
            label: EquilibriumLabel::Dstar,
        },
    ]
}

/// Equilibria of the Malthus epidemic chain: the origin, the top-predator-
/// and disease-free point `E1t = (0, r/b, 0, mu/l)` (always feasible), and
/// the coexistence point `Estar_t` in closed form.
pub fn malthus_equilibria(p: &ParameterSet) -> Vec<Equilibrium> {
    let variant = ModelVariant::MalthusEpidemic;
    let e0 = State::origin();
    let e1 = State::new(0.0, p.r / p.b, 0.0, p.mu / p.l);
    // Interior point: S = r/b from the prey equation, then P and I from the
    // predator and incidence brackets, and V from the susceptible bracket.
    let estar = State::new(
        (p.beta * p.r - p.nu * p.b) / (p.b * p.c),
        p.r / p.b,
        (p.b * p.tau - p.r * p.f) / (p.g * p.b),
        (p.beta * p.r * p.g * p.q - p.beta * p.r * p.f * p.c + p.b * p.g * p.mu * p.c
            - p.b * p.g * p.q * p.nu
            + p.b * p.tau * p.beta * p.c)
            / (p.g * p.b * p.c * p.l),
    );
    vec![
        Equilibrium::from_state(
            EquilibriumLabel::E0Tilde,
            variant,
            p,
            e0,
            Provenance::ClosedForm,
        ),
        Equilibrium::from_state(
            EquilibriumLabel::E1Tilde,
            variant,
            p,
            e1,
            Provenance::ClosedForm,
        ),
        Equilibrium::from_state(
            EquilibriumLabel::EstarTilde,
            variant,
            p,
            estar,
            Provenance::ClosedForm,
        ),
    ]
}

/// Boundary equilibria of the logistic epidemic chain: origin `E0`, the
/// predator/disease-free `E1`, the bottom-prey-only `E2 = (0,0,0,K)`, the
/// top-predator-free `E3`, and the disease-free `E4`.
///
/// Feasibility is decided by direct component nonnegativity.
pub fn logistic_boundary_equilibria(p: &ParameterSet) -> Vec<Equilibrium> {
    let variant = ModelVariant::LogisticEpidemic;
    let e0 = State::origin();
    let e1 = State::new(
        0.0,
        (p.r / p.b) * (1.0 - p.mu / (p.l * p.k)),
        0.0,
        p.mu / p.l,
    );
    let e2 = State::new(0.0, 0.0, 0.0, p.k);
    let rb = p.r * p.beta;
    let e3 = State::new(
        0.0,
        p.nu / p.beta,
        (p.l * p.k * rb - p.l * p.k * p.b * p.nu - p.mu * rb) / (rb * p.beta),
        p.k * (rb - p.b * p.nu) / rb,
    );
    let rf = p.r * p.f;
    let e4 = State::new(
        (rf * p.l * p.k - rf * p.mu - p.tau * p.l * p.k * p.b) / (rf * p.q),
        p.tau / p.f,
        0.0,
        p.k * (rf - p.b * p.tau) / rf,
    );
    [
        (EquilibriumLabel::E0, e0),
        (EquilibriumLabel::E1, e1),
        (EquilibriumLabel::E2, e2),
        (EquilibriumLabel::E3, e3),
        (EquilibriumLabel::E4, e4),
    ]
    .into_iter()
    .map(|(label, state)| Equilibrium::from_state(label, variant, p, state, Provenance::ClosedForm))
    .collect()
}

/// Outcome of the logistic coexistence solve.
#[derive(Debug, Clone, PartialEq)]
pub enum CoexistenceResult {
    Solved(Equilibrium),
    /// The interaction matrix is numerically singular.
    Degenerate {
        condition: f64,
    },
}

impl CoexistenceResult {
    pub fn solved(&self) -> Option<&Equilibrium> {
        match self {
            CoexistenceResult::Solved(eq) => Some(eq),
            CoexistenceResult::Degenerate { .. } => None,
        }
    }
}

/// Interior equilibrium of the logistic epidemic chain.
///
/// Zeroing the bracketed factors of the system leaves a linear system in
/// `(P, S, I, V)`:
///
/// ```text
///       gI + fS          = tau
///  -qP       - beta I + lV = mu
///  -cP + beta S            = nu
///        bS          + rV/K = r
/// ```
///
/// which is solved densely with partial pivoting. No closed form exists in
/// the logistic case.
pub fn logistic_coexistence(p: &ParameterSet) -> CoexistenceResult {
    let a = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0,
            p.f,
            p.g,
            0.0, //
            -p.q,
            0.0,
            -p.beta,
            p.l, //
            -p.c,
            p.beta,
            0.0,
            0.0, //
            0.0,
            p.b,
            0.0,
            p.r / p.k,
        ],
    );
    let rhs = DVector::from_vec(vec![p.tau, p.mu, p.nu, p.r]);

    let svd = a.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if !condition.is_finite() || condition > SINGULARITY_THRESHOLD {
        return CoexistenceResult::Degenerate { condition };
    }

    let lu = a.lu();
    match lu.solve(&rhs) {
        Some(x) => {
            let state = State::new(x[0], x[1], x[2], x[3]);
            CoexistenceResult::Solved(Equilibrium::from_state(
                EquilibriumLabel::Estar,
                ModelVariant::LogisticEpidemic,
                p,
                state,
                Provenance::LinearSolve,
            ))
        }
        None => CoexistenceResult::Degenerate { condition },
    }
}

/// Full equilibrium listing for a variant, as shown by the CLI and used by
/// parameter sweeps.
pub fn equilibria_of(variant: ModelVariant, p: &ParameterSet) -> Vec<EquilibriumRecord> {
    match variant {
        ModelVariant::LogisticDiseaseFree => disease_free_equilibria(p)
            .into_iter()
            .map(EquilibriumRecord::Present)
            .collect(),
        ModelVariant::MalthusDiseaseFree => malthus_disease_free_equilibria(p),
        ModelVariant::MalthusEpidemic => {
            let mut records: Vec<EquilibriumRecord> = malthus_equilibria(p)
                .into_iter()
                .map(EquilibriumRecord::Present)
                .collect();
            // The bottom-prey-only point has no finite Malthus analogue.
            records.push(EquilibriumRecord::AbsentInMalthus {
                label: EquilibriumLabel::E2,
            });
            records
        }
        ModelVariant::LogisticEpidemic => {
            let mut records: Vec<EquilibriumRecord> = logistic_boundary_equilibria(p)
                .into_iter()
                .map(EquilibriumRecord::Present)
                .collect();
            records.push(match logistic_coexistence(p) {
                CoexistenceResult::Solved(eq) => EquilibriumRecord::Present(eq),
                CoexistenceResult::Degenerate { condition } => EquilibriumRecord::Degenerate {
                    label: EquilibriumLabel::Estar,
                    reason: format!("singular interaction matrix (condition {condition:.3e})"),
                },
            });
            records
        }
    }
}

/// Certificate that the bottom-prey-free point of the Malthus chain is never
/// feasible.
#[derive(Debug, Clone, PartialEq)]
pub struct Remark1Report {
    /// The candidate point, with `V = 0`.
    pub point: [f64; 4],
    /// Smallest of the `P`, `S`, `I` components.
    pub min_of_first_three: f64,
    /// True when at least one of `P`, `S`, `I` is negative.
    pub certified_infeasible: bool,
}

/// Evaluate the bottom-prey-free candidate point and certify that it is
/// infeasible: with `V = 0` the susceptible bracket forces
/// `beta I + q P = -mu < 0`, so `P` or `I` must be negative.
pub fn remark1_infeasibility(p: &ParameterSet) -> Result<Remark1Report, EquilibriaError> {
    let den = p.f * p.c - p.g * p.q;
    if den == 0.0 {
        return Err(EquilibriaError::DegenerateDenominator);
    }
    let pp = (p.g * p.mu + p.tau * p.beta - p.nu * p.f) / den;
    let s = (p.g * p.mu * p.c - p.g * p.q * p.nu + p.tau * p.beta * p.c) / (p.beta * den);
    let i = -(p.mu * p.c * p.f - p.q * p.nu * p.f + p.q * p.tau * p.beta) / (p.beta * den);
    let min = pp.min(s).min(i);
    Ok(Remark1Report {
        point: [pp, s, i, 0.0],
        min_of_first_three: min,
        certified_infeasible: min < 0.0,
    })
}

/// The gap `nu/beta - r/b` between the two susceptible levels a
/// top-predator-free Malthus equilibrium would have to satisfy at once.
/// Zero (to rounding) flags the non-generic case where one exists.
pub fn remark2_gap(p: &ParameterSet) -> f64 {
    p.nu / p.beta - p.r / p.b
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig1_params() -> ParameterSet {
        ParameterSet::new(
            0.3,
            0.2,
            0.4,
            0.2,
            0.3,
            0.4,
            0.3,
            0.4,
            0.3,
            0.2,
            0.5,
            f64::INFINITY,
        )
    }

    fn fig4_params() -> ParameterSet {
        ParameterSet::new(0.3, 0.2, 0.4, 0.6, 0.7, 0.9, 0.3, 0.2, 0.2, 0.2, 1.3, 1.0)
    }

    fn fig3_params() -> ParameterSet {
        let mut p = fig4_params();
        p.f = 0.1;
        p
    }

    fn fig2_params() -> ParameterSet {
        let mut p = fig4_params();
        p.beta = 0.1;
        p
    }

    fn find(list: &[Equilibrium], label: EquilibriumLabel) -> &Equilibrium {
        list.iter().find(|e| e.label == label).unwrap()
    }

    #[test]
    fn thresholds_at_fig4_rates() {
        let t = thresholds(&fig4_params());
        assert_relative_eq!(t.rho1, 3.0, max_relative = 1e-12);
        // (0.26/0.18) * (1 - 1/3)
        assert_relative_eq!(t.rho2, 26.0 / 27.0, max_relative = 1e-12);
    }

    #[test]
    fn thresholds_at_boundary() {
        // K = mu/l puts rho1 exactly at 1 and zeroes rho2.
        let mut p = fig4_params();
        p.k = p.mu / p.l;
        let t = thresholds(&p);
        assert_relative_eq!(t.rho1, 1.0, max_relative = 1e-12);
        assert!(t.rho2.abs() < 1e-12);

        let mut p = fig4_params();
        p.l = 0.2;
        p.k = 1.0;
        p.mu = 0.2;
        assert_relative_eq!(thresholds(&p).rho1, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn disease_free_equilibria_at_fig4_rates() {
        let p = fig4_params();
        let eqs = disease_free_equilibria(&p);
        let d1 = find(&eqs, EquilibriumLabel::D1);
        assert_eq!(d1.state.as_array(), [0.0, 0.0, 0.0, 1.0]);
        assert!(d1.feasible);

        let dhat = find(&eqs, EquilibriumLabel::Dhat);
        assert_relative_eq!(dhat.state.s, 26.0 / 27.0, max_relative = 1e-12);
        assert_relative_eq!(dhat.state.v, 1.0 / 3.0, max_relative = 1e-12);
        assert!(dhat.feasible); // rho1 = 3 >= 1

        // rho2 = 26/27 < 1: the coexistence point has negative P.
        let dstar = find(&eqs, EquilibriumLabel::Dstar);
        assert!(dstar.state.p < 0.0);
        assert_relative_eq!(dstar.state.p, (0.1846153846 - 0.2) / 0.7, epsilon = 1e-9);
        assert!(!dstar.feasible);
    }

    #[test]
    fn dhat_infeasible_when_mortality_exceeds_intake() {
        let mut p = fig4_params();
        p.mu = 0.7; // mu > lK, nu raised to keep nu >= mu
        p.nu = 0.7;
        let eqs = disease_free_equilibria(&p);
        assert!(!find(&eqs, EquilibriumLabel::Dhat).feasible);
    }

    #[test]
    fn feasibility_flags_track_thresholds() {
        // Sweep K through both bifurcations and compare flags to the rhos.
        let base = fig4_params();
        for step in 0..60 {
            let mut p = base;
            p.k = 0.05 + 0.025 * step as f64;
            let t = thresholds(&p);
            let eqs = disease_free_equilibria(&p);
            assert_eq!(
                find(&eqs, EquilibriumLabel::Dhat).feasible,
                t.rho1 >= 1.0,
                "K = {}",
                p.k
            );
            assert_eq!(
                find(&eqs, EquilibriumLabel::Dstar).feasible,
                t.rho2 >= 1.0,
                "K = {}",
                p.k
            );
            let boundary = logistic_boundary_equilibria(&p);
            assert_eq!(
                find(&boundary, EquilibriumLabel::E1).feasible,
                t.rho1 >= 1.0
            );
        }
    }

    #[test]
    fn malthus_equilibria_at_fig1_rates() {
        let p = fig1_params();
        let eqs = malthus_equilibria(&p);
        let e1 = find(&eqs, EquilibriumLabel::E1Tilde);
        assert_relative_eq!(e1.state.s, 1.25, max_relative = 1e-12);
        assert_relative_eq!(e1.state.v, 1.0, max_relative = 1e-12);
        assert!(e1.feasible);

        let estar = find(&eqs, EquilibriumLabel::EstarTilde);
        assert_relative_eq!(estar.state.p, 0.1875, max_relative = 1e-12);
        assert_relative_eq!(estar.state.s, 1.25, max_relative = 1e-12);
        assert_relative_eq!(estar.state.i, 0.5, max_relative = 1e-12);
        // V numerator 0.0195 over gbcl = 0.0096.
        assert_relative_eq!(estar.state.v, 2.03125, max_relative = 1e-12);
        assert!(estar.feasible);
        assert!(estar.residual < 1e-12);
    }

    #[test]
    fn malthus_coexistence_infeasible_when_disease_dies_out() {
        // r beta < b nu makes the predator component negative.
        let mut p = fig1_params();
        p.beta = 0.2; // r beta = 0.1 < b nu = 0.12
        let eqs = malthus_equilibria(&p);
        let estar = find(&eqs, EquilibriumLabel::EstarTilde);
        assert!(estar.state.p < 0.0);
        assert!(!estar.feasible);
    }

    #[test]
    fn malthus_feasibility_matches_ratio_conditions() {
        // Componentwise signs agree with the threshold-ratio form of the
        // feasibility conditions: r beta/(b nu) >= 1 for P and
        // rf/(b tau) <= 1 for I.
        let mut rng = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            0.05 + 0.95 * ((rng >> 11) as f64 / (1u64 << 53) as f64)
        };
        let mut checked = 0;
        while checked < 200 {
            let c = next();
            let q = next();
            let b = next();
            let mu = next();
            let p = ParameterSet::new(
                c * next(),
                q * next(),
                c,
                b * next(),
                q,
                b,
                next(),
                next(),
                mu + next(),
                mu,
                next(),
                f64::INFINITY,
            );
            if !model::validate_params(&p, ModelVariant::MalthusEpidemic).is_valid() {
                continue;
            }
            checked += 1;
            let eqs = malthus_equilibria(&p);
            let estar = find(&eqs, EquilibriumLabel::EstarTilde);
            assert_eq!(
                estar.state.p >= 0.0,
                p.r * p.beta / (p.b * p.nu) >= 1.0,
                "P sign vs condition at {p:?}"
            );
            assert_eq!(
                estar.state.i >= 0.0,
                p.r * p.f / (p.b * p.tau) <= 1.0,
                "I sign vs condition at {p:?}"
            );
        }
    }

    #[test]
    fn logistic_boundary_equilibria_at_fig3_rates() {
        let p = fig3_params();
        let eqs = logistic_boundary_equilibria(&p);
        let e3 = find(&eqs, EquilibriumLabel::E3);
        assert_relative_eq!(e3.state.s, 2.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(e3.state.i, 16.0 / 39.0, max_relative = 1e-12);
        assert_relative_eq!(e3.state.v, 7.0 / 13.0, max_relative = 1e-12);
        assert!(e3.feasible);
        assert!(e3.residual < 1e-15);
    }

    #[test]
    fn e4_is_infeasible_at_fig2_rates() {
        let p = fig2_params();
        let eqs = logistic_boundary_equilibria(&p);
        let e4 = find(&eqs, EquilibriumLabel::E4);
        // (0.156 - 0.052 - 0.108)/0.182
        assert_relative_eq!(e4.state.p, -0.004 / 0.182, epsilon = 1e-12);
        assert!(!e4.feasible);
        let e3 = find(&eqs, EquilibriumLabel::E3);
        assert!(!e3.feasible);
    }

    #[test]
    fn e0_and_e2_always_present() {
        let p = fig4_params();
        let eqs = logistic_boundary_equilibria(&p);
        assert_eq!(find(&eqs, EquilibriumLabel::E0).state.as_array(), [0.0; 4]);
        assert_eq!(
            find(&eqs, EquilibriumLabel::E2).state.as_array(),
            [0.0, 0.0, 0.0, p.k]
        );
        assert!(find(&eqs, EquilibriumLabel::E2).feasible);
    }

    #[test]
    fn printed_feasibility_conditions_match_component_signs() {
        // r beta (lK - mu) > b K l nu  <=>  I3 > 0, and
        // r f (lK - mu) > b K l tau    <=>  P4 > 0.
        let sets = [fig2_params(), fig3_params(), fig4_params()];
        for p in sets {
            let eqs = logistic_boundary_equilibria(&p);
            let i3 = find(&eqs, EquilibriumLabel::E3).state.i;
            let lhs3 = p.r * p.beta * (p.l * p.k - p.mu);
            let rhs3 = p.b * p.k * p.l * p.nu;
            assert_eq!(i3 > 0.0, lhs3 > rhs3);
            let p4 = find(&eqs, EquilibriumLabel::E4).state.p;
            let lhs4 = p.r * p.f * (p.l * p.k - p.mu);
            let rhs4 = p.b * p.k * p.l * p.tau;
            assert_eq!(p4 > 0.0, lhs4 > rhs4);
        }
    }

    #[test]
    fn coexistence_solve_matches_fig4_target() {
        let eq = match logistic_coexistence(&fig4_params()) {
            CoexistenceResult::Solved(eq) => eq,
            other => panic!("expected solution, got {other:?}"),
        };
        // Exact solution (2/35, 26/35, 6/35, 17/35).
        assert_relative_eq!(eq.state.p, 2.0 / 35.0, max_relative = 1e-12);
        assert_relative_eq!(eq.state.s, 26.0 / 35.0, max_relative = 1e-12);
        assert_relative_eq!(eq.state.i, 6.0 / 35.0, max_relative = 1e-12);
        assert_relative_eq!(eq.state.v, 17.0 / 35.0, max_relative = 1e-12);
        assert!(eq.feasible);
        assert!(eq.residual < 1e-14);
        assert_eq!(eq.provenance, Provenance::LinearSolve);
    }

    #[test]
    fn coexistence_infeasible_at_fig3_rates() {
        // Cramer-style independent solve as oracle for the P component.
        let p = fig3_params();
        let eq = logistic_coexistence(&p);
        let eq = eq.solved().expect("matrix is regular at fig3 rates");
        assert!(eq.state.p < 0.0);
        assert!(!eq.feasible);
        // Hand elimination: S from the scalar reduction, then P = (3S-2)/4.
        let s = 0.55 / (27.0 / 65.0 - 0.1 + 0.525);
        let expected_p = (3.0 * s - 2.0) / 4.0;
        assert_relative_eq!(eq.state.p, expected_p, epsilon = 1e-12);
        assert!((eq.state.p - (-0.00915)).abs() < 1e-4);
    }

    #[test]
    fn coexistence_p_sign_forced_negative_for_small_beta() {
        // As beta -> 0 the incidence bracket forces P = -nu/c < 0.
        let mut p = fig4_params();
        p.beta = 1e-9;
        let eq = logistic_coexistence(&p);
        let eq = eq.solved().unwrap();
        assert!(eq.state.p < 0.0);
        assert_relative_eq!(eq.state.p, -p.nu / p.c, max_relative = 1e-5);
    }

    #[test]
    fn malthus_listing_reports_absent_bottom_prey_point() {
        let records = equilibria_of(ModelVariant::MalthusEpidemic, &fig1_params());
        assert!(records.iter().any(|r| matches!(
            r,
            EquilibriumRecord::AbsentInMalthus {
                label: EquilibriumLabel::E2
            }
        )));
    }

    #[test]
    fn remark1_point_is_infeasible_at_fig1_rates() {
        let report = remark1_infeasibility(&fig1_params()).unwrap();
        assert_relative_eq!(report.point[0], -12.0, max_relative = 1e-10);
        assert!(report.certified_infeasible);
    }

    #[test]
    fn remark1_rejects_degenerate_denominator() {
        // f c = g q exactly, with the conversion inequalities still valid.
        let p = ParameterSet::new(
            0.2,
            0.1,
            0.4,
            0.2,
            0.2,
            0.4,
            0.3,
            0.4,
            0.3,
            0.2,
            0.5,
            f64::INFINITY,
        );
        assert_eq!(p.f * p.c, p.g * p.q);
        assert_eq!(
            remark1_infeasibility(&p),
            Err(EquilibriaError::DegenerateDenominator)
        );
    }

    #[test]
    fn remark2_gap_at_fig1_rates() {
        let p = fig1_params();
        assert_relative_eq!(remark2_gap(&p), -0.25, max_relative = 1e-12);
        // Constructed equality and scale invariance.
        let mut p2 = p;
        p2.nu = p2.beta * p2.r / p2.b;
        assert!(remark2_gap(&p2).abs() < 1e-15);
        let mut p3 = p;
        p3.nu *= 2.0;
        p3.beta *= 2.0;
        assert_relative_eq!(remark2_gap(&p3), remark2_gap(&p), max_relative = 1e-12);
    }

    #[test]
    fn feasible_equilibria_zero_the_field() {
        // Across all variants: feasible records satisfy the residual bound.
        for p in [fig1_params(), fig2_params(), fig3_params(), fig4_params()] {
            for variant in ModelVariant::ALL {
                if variant.is_logistic() && !p.k.is_finite() {
                    continue;
                }
                for record in equilibria_of(variant, &p) {
                    if let Some(eq) = record.as_present() {
                        if eq.feasible {
                            assert!(
                                eq.residual < 1e-10 * (1.0 + eq.state.norm()),
                                "{} of {variant} at {p:?}",
                                eq.label
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn threshold_pair_invariants_hold_on_random_sets() {
        let mut seed = 0x5eedu64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            0.05 + 0.95 * ((seed >> 11) as f64 / (1u64 << 53) as f64)
        };
        for _ in 0..200 {
            let b = next();
            let c = next();
            let q = next();
            let mu = 0.5 * next();
            let p = ParameterSet::new(
                0.9 * c * next(),
                0.9 * q * next(),
                c,
                0.9 * b * next(),
                q,
                b,
                next(),
                next(),
                mu + 0.5 * next(),
                mu,
                next(),
                0.5 + 4.0 * next(),
            );
            if !model::validate_params(&p, ModelVariant::LogisticEpidemic).is_valid() {
                continue;
            }
            let t = thresholds(&p);
            assert!(t.rho1 > 0.0);
            assert!(t.rho2 < p.f * p.r / (p.b * p.tau));
        }
    }
}
