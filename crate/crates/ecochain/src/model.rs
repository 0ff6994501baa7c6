//! Model definitions: parameters, state, variants, right-hand sides and Jacobians.
//!
//! The food chain couples a top predator `P`, an intermediate population split
//! into susceptibles `S` and infected `I`, and a bottom prey `V`:
//!
//! ```text
//! dP/dt = P (gI + fS - tau)
//! dS/dt = S (lV - beta I - qP - mu)
//! dI/dt = I (beta S - cP - nu)
//! dV/dt = V [r (1 - V/K) - bS]        (logistic; Malthus drops the V/K term)
//! ```
//!
//! Disease-free variants collapse `S` and `I` into the total healthy
//! population `Q = S + I` (with `I = 0`, so `Q = S`); the `S` slot stores `Q`
//! and the `I` slot is pinned to zero.

use thiserror::Error;

/// Dense real matrix used for Jacobians (4x4, or 3x3 for disease-free variants).
pub type Matrix = nalgebra::DMatrix<f64>;

/// Names of the twelve model rates, in canonical order.
pub const PARAM_NAMES: [&str; 12] = [
    "g", "f", "c", "l", "q", "b", "beta", "tau", "nu", "mu", "r", "K",
];

/// The twelve model rates.
///
/// All rates are per unit time; populations are dimensionless densities.
/// `nu = mu + mu0` bundles natural and disease-induced mortality of the
/// infected; `mu0` itself is not stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSet {
    /// Predator conversion rate on infected prey.
    pub g: f64,
    /// Predator conversion rate on susceptible prey.
    pub f: f64,
    /// Predation rate on infected.
    pub c: f64,
    /// Susceptible conversion rate on bottom prey.
    pub l: f64,
    /// Predation rate on susceptibles.
    pub q: f64,
    /// Hunting rate on bottom prey.
    pub b: f64,
    /// Disease incidence rate.
    pub beta: f64,
    /// Top-predator mortality.
    pub tau: f64,
    /// Infected mortality (natural plus disease-induced).
    pub nu: f64,
    /// Natural intermediate mortality.
    pub mu: f64,
    /// Bottom-prey reproduction rate.
    pub r: f64,
    /// Bottom-prey carrying capacity. Ignored by Malthus variants.
    pub k: f64,
}

impl ParameterSet {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        g: f64,
        f: f64,
        c: f64,
        l: f64,
        q: f64,
        b: f64,
        beta: f64,
        tau: f64,
        nu: f64,
        mu: f64,
        r: f64,
        k: f64,
    ) -> Self {
        Self {
            g,
            f,
            c,
            l,
            q,
            b,
            beta,
            tau,
            nu,
            mu,
            r,
            k,
        }
    }

    /// Build a set from the disease-induced mortality `mu0`, with `nu = mu + mu0`.
    #[allow(clippy::too_many_arguments)]
    pub fn with_mu0(
        g: f64,
        f: f64,
        c: f64,
        l: f64,
        q: f64,
        b: f64,
        beta: f64,
        tau: f64,
        mu: f64,
        mu0: f64,
        r: f64,
        k: f64,
    ) -> Self {
        Self::new(g, f, c, l, q, b, beta, tau, mu + mu0, mu, r, k)
    }

    /// Look up a rate by its canonical name (`"beta"`, `"K"`, ...).
    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "g" => self.g,
            "f" => self.f,
            "c" => self.c,
            "l" => self.l,
            "q" => self.q,
            "b" => self.b,
            "beta" => self.beta,
            "tau" => self.tau,
            "nu" => self.nu,
            "mu" => self.mu,
            "r" => self.r,
            "K" => self.k,
            _ => return None,
        })
    }

    /// Return a copy with the named rate replaced; `None` for an unknown name.
    pub fn with(&self, name: &str, value: f64) -> Option<Self> {
        let mut p = *self;
        match name {
            "g" => p.g = value,
            "f" => p.f = value,
            "c" => p.c = value,
            "l" => p.l = value,
            "q" => p.q = value,
            "b" => p.b = value,
            "beta" => p.beta = value,
            "tau" => p.tau = value,
            "nu" => p.nu = value,
            "mu" => p.mu = value,
            "r" => p.r = value,
            "K" => p.k = value,
            _ => return None,
        }
        Some(p)
    }
}

/// Which of the four systems is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelVariant {
    /// Full epidemic chain, unlimited bottom-prey resources.
    MalthusEpidemic,
    /// Full epidemic chain, logistic bottom prey.
    LogisticEpidemic,
    /// Healthy chain `(P, Q, V)` with logistic bottom prey.
    LogisticDiseaseFree,
    /// Healthy chain `(P, Q, V)` with unlimited resources.
    MalthusDiseaseFree,
}

impl ModelVariant {
    pub fn is_logistic(self) -> bool {
        matches!(
            self,
            ModelVariant::LogisticEpidemic | ModelVariant::LogisticDiseaseFree
        )
    }

    pub fn is_disease_free(self) -> bool {
        matches!(
            self,
            ModelVariant::LogisticDiseaseFree | ModelVariant::MalthusDiseaseFree
        )
    }

    /// Dimension of the phase space (3 for disease-free variants).
    pub fn dim(self) -> usize {
        if self.is_disease_free() {
            3
        } else {
            4
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelVariant::MalthusEpidemic => "malthus",
            ModelVariant::LogisticEpidemic => "logistic",
            ModelVariant::LogisticDiseaseFree => "logistic-disease-free",
            ModelVariant::MalthusDiseaseFree => "malthus-disease-free",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "malthus" => ModelVariant::MalthusEpidemic,
            "logistic" => ModelVariant::LogisticEpidemic,
            "logistic-disease-free" => ModelVariant::LogisticDiseaseFree,
            "malthus-disease-free" => ModelVariant::MalthusDiseaseFree,
            _ => return None,
        })
    }

    /// All four variants, for sampling-style tests.
    pub const ALL: [ModelVariant; 4] = [
        ModelVariant::MalthusEpidemic,
        ModelVariant::LogisticEpidemic,
        ModelVariant::LogisticDiseaseFree,
        ModelVariant::MalthusDiseaseFree,
    ];
}

impl std::fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Population 4-vector `(P, S, I, V)`.
///
/// Disease-free variants store `Q` in the `s` slot and keep `i = 0`.
/// Dynamical states are componentwise nonnegative; equilibrium records may
/// carry negative components (that is what infeasibility means).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub p: f64,
    pub s: f64,
    pub i: f64,
    pub v: f64,
}

impl State {
    pub fn new(p: f64, s: f64, i: f64, v: f64) -> Self {
        Self { p, s, i, v }
    }

    pub fn origin() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn from_array(x: [f64; 4]) -> Self {
        Self::new(x[0], x[1], x[2], x[3])
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.p, self.s, self.i, self.v]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|x| x.is_finite())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.as_array().iter().all(|&x| x >= 0.0)
    }

    /// Euclidean norm of the 4-vector.
    pub fn norm(&self) -> f64 {
        self.as_array().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl std::fmt::Display for State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {}, {})", self.p, self.s, self.i, self.v)
    }
}

/// Total environment population `W = P + S + I + V`.
pub fn total_population(x: &State) -> f64 {
    x.p + x.s + x.i + x.v
}

/// Outcome of [`validate_params`]: the list of violated constraints, by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            f.write_str("valid")
        } else {
            write!(f, "violated: {}", self.violations.join(", "))
        }
    }
}

/// Check every parameter constraint; an empty report means the set is valid.
///
/// Positivity applies to all rates, conversion efficiencies must be strict
/// (`g < c`, `f < q`, `l < b`), and `nu >= mu`. `K` must be finite and
/// positive for logistic variants only; Malthus variants ignore it.
pub fn validate_params(p: &ParameterSet, variant: ModelVariant) -> ValidationReport {
    let mut report = ValidationReport::default();
    let rates = [
        ("g", p.g),
        ("f", p.f),
        ("c", p.c),
        ("l", p.l),
        ("q", p.q),
        ("b", p.b),
        ("beta", p.beta),
        ("tau", p.tau),
        ("nu", p.nu),
        ("mu", p.mu),
        ("r", p.r),
    ];
    for (name, value) in rates {
        if !value.is_finite() {
            report.violations.push(format!("{name} finite"));
        } else if value <= 0.0 {
            report.violations.push(format!("{name}>0"));
        }
    }
    if variant.is_logistic() {
        if !p.k.is_finite() {
            report.violations.push("K finite".to_string());
        } else if p.k <= 0.0 {
            report.violations.push("K>0".to_string());
        }
    }
    // NaN rates were already flagged as non-finite above; treat the
    // comparisons as violated for them as well.
    if p.g >= p.c || p.g.is_nan() || p.c.is_nan() {
        report.violations.push("g<c".to_string());
    }
    if p.f >= p.q || p.f.is_nan() || p.q.is_nan() {
        report.violations.push("f<q".to_string());
    }
    if p.l >= p.b || p.l.is_nan() || p.b.is_nan() {
        report.violations.push("l<b".to_string());
    }
    if p.nu < p.mu || p.nu.is_nan() || p.mu.is_nan() {
        report.violations.push("nu>=mu".to_string());
    }
    report
}

/// Errors from state-dependent evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("non-finite state component {component}")]
    NonFiniteState { component: &'static str },
    #[error("negative state component {component} = {value}")]
    NegativeState { component: &'static str, value: f64 },
    #[error("disease-free variant requires I = 0, got I = {value}")]
    InfectedInDiseaseFree { value: f64 },
    #[error("finite-difference step must be positive and finite, got {h}")]
    InvalidStep { h: f64 },
    #[error("finite-difference step underflows component {component}")]
    StepUnderflow { component: &'static str },
}

const COMPONENT_NAMES: [&str; 4] = ["P", "S", "I", "V"];

fn check_state(variant: ModelVariant, x: &State) -> Result<(), ModelError> {
    for (name, value) in COMPONENT_NAMES.iter().zip(x.as_array()) {
        if !value.is_finite() {
            return Err(ModelError::NonFiniteState { component: name });
        }
        if value < 0.0 {
            return Err(ModelError::NegativeState {
                component: name,
                value,
            });
        }
    }
    if variant.is_disease_free() && x.i != 0.0 {
        return Err(ModelError::InfectedInDiseaseFree { value: x.i });
    }
    Ok(())
}

/// Raw algebraic right-hand side, defined for any real input.
///
/// This is the polynomial system itself, with no sign checks; integrator
/// stages and finite-difference probes may legitimately evaluate it a hair
/// outside the nonnegative cone. For disease-free variants the `s` slot is
/// `Q` and the `i` slot of the result is identically zero.
pub(crate) fn eval_raw(variant: ModelVariant, p: &ParameterSet, x: &[f64; 4]) -> [f64; 4] {
    let [pp, s, i, v] = *x;
    match variant {
        ModelVariant::LogisticEpidemic => [
            pp * (p.g * i + p.f * s - p.tau),
            s * (p.l * v - p.beta * i - p.q * pp - p.mu),
            i * (p.beta * s - p.c * pp - p.nu),
            v * (p.r * (1.0 - v / p.k) - p.b * s),
        ],
        ModelVariant::MalthusEpidemic => [
            pp * (p.g * i + p.f * s - p.tau),
            s * (p.l * v - p.beta * i - p.q * pp - p.mu),
            i * (p.beta * s - p.c * pp - p.nu),
            v * (p.r - p.b * s),
        ],
        ModelVariant::LogisticDiseaseFree => [
            pp * (p.f * s - p.tau),
            s * (p.l * v - p.q * pp - p.mu),
            0.0,
            v * (p.r * (1.0 - v / p.k) - p.b * s),
        ],
        ModelVariant::MalthusDiseaseFree => [
            pp * (p.f * s - p.tau),
            s * (p.l * v - p.q * pp - p.mu),
            0.0,
            v * (p.r - p.b * s),
        ],
    }
}

/// Evaluate the right-hand side of the chosen system at `x`.
///
/// Disease-free variants return zero in the `I` slot. Negative and
/// non-finite components are rejected; clamping is the integrator's policy,
/// not the math layer's.
pub fn vector_field(
    variant: ModelVariant,
    p: &ParameterSet,
    x: &State,
) -> Result<State, ModelError> {
    check_state(variant, x)?;
    Ok(State::from_array(eval_raw(variant, p, &x.as_array())))
}

/// Raw analytic Jacobian; 3x3 for disease-free variants (rows/columns P, Q, V).
pub(crate) fn jacobian_raw(variant: ModelVariant, p: &ParameterSet, x: &[f64; 4]) -> Matrix {
    let [pp, s, i, v] = *x;
    // Bottom-right entry is the only difference between the two growth laws.
    let dv_dv = if variant.is_logistic() {
        p.r * (1.0 - v / p.k) - p.b * s - p.r * v / p.k
    } else {
        p.r - p.b * s
    };
    if variant.is_disease_free() {
        Matrix::from_row_slice(
            3,
            3,
            &[
                p.f * s - p.tau,
                p.f * pp,
                0.0,
                -p.q * s,
                p.l * v - p.mu - p.q * pp,
                p.l * s,
                0.0,
                -p.b * v,
                dv_dv,
            ],
        )
    } else {
        Matrix::from_row_slice(
            4,
            4,
            &[
                p.g * i + p.f * s - p.tau,
                p.f * pp,
                p.g * pp,
                0.0,
                -p.q * s,
                p.l * v - p.mu - p.beta * i - p.q * pp,
                -p.beta * s,
                p.l * s,
                -p.c * i,
                p.beta * i,
                p.beta * s - p.c * pp - p.nu,
                0.0,
                0.0,
                -p.b * v,
                0.0,
                dv_dv,
            ],
        )
    }
}

/// Analytic Jacobian of the vector field at `x`.
///
/// Returns a 4x4 matrix, or the 3x3 analogue for disease-free variants
/// (the `I` row and column are dropped).
pub fn jacobian(variant: ModelVariant, p: &ParameterSet, x: &State) -> Result<Matrix, ModelError> {
    check_state(variant, x)?;
    Ok(jacobian_raw(variant, p, &x.as_array()))
}

/// Central finite-difference Jacobian, the oracle for [`jacobian`].
///
/// The step in component `j` is `h * max(1, |x_j|)`. Probe points may dip
/// below zero; the raw polynomial field is evaluated there directly.
pub fn jacobian_fd(
    variant: ModelVariant,
    p: &ParameterSet,
    x: &State,
    h: f64,
) -> Result<Matrix, ModelError> {
    if !h.is_finite() || h <= 0.0 {
        return Err(ModelError::InvalidStep { h });
    }
    check_state(variant, x)?;
    let base = x.as_array();
    let slots: &[usize] = if variant.is_disease_free() {
        &[0, 1, 3]
    } else {
        &[0, 1, 2, 3]
    };
    let n = slots.len();
    let mut m = Matrix::zeros(n, n);
    for (col, &j) in slots.iter().enumerate() {
        let step = h * base[j].abs().max(1.0);
        let mut hi = base;
        let mut lo = base;
        hi[j] += step;
        lo[j] -= step;
        let spread = hi[j] - lo[j];
        if spread == 0.0 {
            return Err(ModelError::StepUnderflow {
                component: COMPONENT_NAMES[j],
            });
        }
        let f_hi = eval_raw(variant, p, &hi);
        let f_lo = eval_raw(variant, p, &lo);
        for (row, &i) in slots.iter().enumerate() {
            m[(row, col)] = (f_hi[i] - f_lo[i]) / spread;
        }
    }
    Ok(m)
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

    #[test]
    fn fig1_parameters_are_valid() {
        let report = validate_params(&fig1_params(), ModelVariant::MalthusEpidemic);
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn conversion_violation_is_named() {
        let mut p = fig1_params();
        p.g = 0.5;
        let report = validate_params(&p, ModelVariant::MalthusEpidemic);
        assert_eq!(report.violations, vec!["g<c".to_string()]);
    }

    #[test]
    fn zero_carrying_capacity_is_flagged_for_logistic() {
        let mut p = fig4_params();
        p.k = 0.0;
        let report = validate_params(&p, ModelVariant::LogisticEpidemic);
        assert!(report.violations.contains(&"K>0".to_string()));
        // Malthus ignores K entirely.
        let report = validate_params(&p, ModelVariant::MalthusEpidemic);
        assert!(report.is_valid());
    }

    #[test]
    fn mu0_constructor_bundles_mortality() {
        let p = ParameterSet::with_mu0(0.3, 0.2, 0.4, 0.2, 0.3, 0.4, 0.3, 0.4, 0.2, 0.1, 0.5, 1.0);
        assert_eq!(p.nu, 0.2 + 0.1);
    }

    #[test]
    fn origin_is_an_equilibrium() {
        let p = fig4_params();
        let dx = vector_field(ModelVariant::LogisticEpidemic, &p, &State::origin()).unwrap();
        assert_eq!(dx.as_array(), [0.0; 4]);
    }

    #[test]
    fn malthus_field_hand_evaluation() {
        // Term-by-term at x = (1,1,1,1) with the fig1 rates.
        let p = fig1_params();
        let dx = vector_field(
            ModelVariant::MalthusEpidemic,
            &p,
            &State::new(1.0, 1.0, 1.0, 1.0),
        )
        .unwrap();
        assert_relative_eq!(dx.p, 0.1, max_relative = 1e-12);
        assert_relative_eq!(dx.s, -0.6, max_relative = 1e-12);
        assert_relative_eq!(dx.i, -0.4, max_relative = 1e-12);
        assert_relative_eq!(dx.v, 0.1, max_relative = 1e-12);
    }

    #[test]
    fn rounded_coexistence_point_nearly_zeroes_the_field() {
        // The 4-decimal fig4 reference values for the coexistence point leave only a rounding
        // residue in the derivative.
        let p = fig4_params();
        let x = State::new(0.0571, 0.7429, 0.1714, 0.4857);
        let dx = vector_field(ModelVariant::LogisticEpidemic, &p, &x).unwrap();
        for component in dx.as_array() {
            assert!(component.abs() <= 1e-3, "residual {component}");
        }
    }

    #[test]
    fn faces_are_invariant() {
        // Each equation carries its own population as a factor, so zeroing a
        // component zeroes its derivative.
        let p = fig4_params();
        for slot in 0..4 {
            let mut x = [0.7, 0.4, 0.3, 0.9];
            x[slot] = 0.0;
            let dx = eval_raw(ModelVariant::LogisticEpidemic, &p, &x);
            assert_eq!(dx[slot], 0.0);
        }
    }

    #[test]
    fn malthus_jacobian_at_origin_is_diagonal() {
        let p = fig1_params();
        let j = jacobian(ModelVariant::MalthusEpidemic, &p, &State::origin()).unwrap();
        let expected =
            Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-0.4, -0.2, -0.3, 0.5]));
        assert_relative_eq!(j, expected, max_relative = 1e-15);
    }

    #[test]
    fn logistic_jacobian_corner_entry_at_capacity() {
        // At V = K the (4,4) entry reduces to -bS - r.
        let p = fig4_params();
        let x = State::new(0.1, 0.5, 0.2, p.k);
        let j = jacobian(ModelVariant::LogisticEpidemic, &p, &x).unwrap();
        assert_relative_eq!(j[(3, 3)], -p.b * 0.5 - p.r, max_relative = 1e-14);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let p = fig4_params();
        let x = State::new(f64::NAN, 0.0, 0.0, 0.0);
        assert!(matches!(
            vector_field(ModelVariant::LogisticEpidemic, &p, &x),
            Err(ModelError::NonFiniteState { .. })
        ));
    }

    #[test]
    fn negative_input_is_rejected_not_clamped() {
        let p = fig4_params();
        let x = State::new(-0.1, 0.2, 0.2, 0.2);
        assert!(matches!(
            vector_field(ModelVariant::LogisticEpidemic, &p, &x),
            Err(ModelError::NegativeState { .. })
        ));
    }

    #[test]
    fn disease_free_requires_zero_infected() {
        let p = fig4_params();
        let x = State::new(0.1, 0.2, 0.3, 0.4);
        assert!(matches!(
            vector_field(ModelVariant::LogisticDiseaseFree, &p, &x),
            Err(ModelError::InfectedInDiseaseFree { .. })
        ));
    }

    #[test]
    fn disease_free_field_matches_epidemic_sum_at_zero_infection() {
        // With I = 0 the Q equation is the sum of the S and I equations.
        let p = fig4_params();
        let x = State::new(0.3, 0.8, 0.0, 0.6);
        let df = vector_field(ModelVariant::LogisticDiseaseFree, &p, &x).unwrap();
        let full = vector_field(ModelVariant::LogisticEpidemic, &p, &x).unwrap();
        assert_relative_eq!(df.s, full.s + full.i, max_relative = 1e-14);
        assert_relative_eq!(df.p, full.p, max_relative = 1e-14);
        assert_relative_eq!(df.v, full.v, max_relative = 1e-14);
        assert_eq!(df.i, 0.0);
    }

    #[test]
    fn fd_jacobian_agrees_in_linear_region() {
        // With I = S = 0 the remaining equations are linear in P and V for
        // the Malthus variant, so central differences are exact to rounding.
        let p = fig1_params();
        let x = State::new(0.8, 0.0, 0.0, 1.2);
        let j = jacobian(ModelVariant::MalthusEpidemic, &p, &x).unwrap();
        let jf = jacobian_fd(ModelVariant::MalthusEpidemic, &p, &x, 1e-6).unwrap();
        // Cancellation in the differences leaves ~1e-16/h of noise.
        assert_relative_eq!(j, jf, epsilon = 1e-9);
    }

    #[test]
    fn fd_jacobian_matches_analytic_at_interior_point() {
        let p = fig1_params();
        let x = State::new(1.0, 1.0, 1.0, 1.0);
        let j = jacobian(ModelVariant::MalthusEpidemic, &p, &x).unwrap();
        let jf = jacobian_fd(ModelVariant::MalthusEpidemic, &p, &x, 1e-6).unwrap();
        for idx in 0..16 {
            let (row, col) = (idx / 4, idx % 4);
            let scale = j[(row, col)].abs().max(1.0);
            assert!((j[(row, col)] - jf[(row, col)]).abs() / scale < 1e-6);
        }
    }

    #[test]
    fn zero_fd_step_is_an_error() {
        let p = fig1_params();
        let x = State::new(1.0, 1.0, 1.0, 1.0);
        assert!(matches!(
            jacobian_fd(ModelVariant::MalthusEpidemic, &p, &x, 0.0),
            Err(ModelError::InvalidStep { .. })
        ));
    }

    #[test]
    fn disease_free_jacobian_is_three_by_three() {
        let p = fig4_params();
        let x = State::new(0.2, 0.5, 0.0, 0.4);
        let j = jacobian(ModelVariant::LogisticDiseaseFree, &p, &x).unwrap();
        assert_eq!(j.nrows(), 3);
        // Dropping the I row/column of the 4x4 Jacobian gives the same matrix.
        let full = jacobian(ModelVariant::LogisticEpidemic, &p, &x).unwrap();
        let keep = [0usize, 1, 3];
        for (ri, &r) in keep.iter().enumerate() {
            for (ci, &c) in keep.iter().enumerate() {
                assert_relative_eq!(j[(ri, ci)], full[(r, c)], max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn total_population_sums_components() {
        assert_eq!(total_population(&State::new(1.0, 2.0, 3.0, 4.0)), 10.0);
        assert_eq!(total_population(&State::origin()), 0.0);
        // Sum of the fig4 coexistence reference components.
        let w = total_population(&State::new(0.0571, 0.7429, 0.1714, 0.4857));
        assert_relative_eq!(w, 1.4571, epsilon = 1e-12);
    }
}
