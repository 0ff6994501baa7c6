//! Three-trophic-level food chain with a transmissible disease at the
//! intermediate level: model evaluation, equilibrium and stability analysis,
//! transcritical-bifurcation sweeps, and adaptive trajectory simulation.
//!
//! The chain couples a top predator `P`, an intermediate population split
//! into susceptibles `S` and infected `I`, and a bottom prey `V` that grows
//! either logistically (finite carrying capacity `K`) or Malthus-style
//! (`K -> infinity`). Setting the disease aside collapses `S + I` into a
//! single healthy population `Q`, giving two further disease-free variants.
//!
//! Organization:
//!
//! * [`model`] — parameters, state, the four variants, right-hand sides,
//!   analytic and finite-difference Jacobians.
//! * [`equilibria`] — closed-form equilibria, the dense linear solve for the
//!   logistic coexistence point, and the `rho1`/`rho2` thresholds.
//! * [`stability`] — eigenvalues, characteristic polynomials, Routh-Hurwitz
//!   tests, classification, and one-parameter bifurcation sweeps.
//! * [`simulate`] — embedded Runge-Kutta 5(4) integration with PI step
//!   control, the total-population boundedness monitor, the Lotka-Volterra
//!   first integral, and long-term behavior detection.
//! * [`scenarios`] — the four bundled reference scenarios run by the CLI's
//!   `reproduce` subcommand.
//! * [`config`] / [`output`] — JSON run configurations, CSV tables, and SVG
//!   line plots for the CLI.

pub mod config;
pub mod equilibria;
pub mod model;
pub mod output;
pub mod scenarios;
pub mod simulate;
pub mod stability;

pub use equilibria::{
    disease_free_equilibria, logistic_boundary_equilibria, logistic_coexistence,
    malthus_equilibria, remark1_infeasibility, remark2_gap, thresholds, Equilibrium,
    EquilibriumLabel, EquilibriumRecord, ThresholdPair,
};
pub use model::{
    jacobian, jacobian_fd, total_population, validate_params, vector_field, ModelVariant,
    ParameterSet, State, ValidationReport,
};
pub use simulate::{
    boundedness_monitor, detect_longterm, integrate, lv_first_integral, IntegratorConfig,
    LongTermClass, Trajectory,
};
pub use stability::{
    bifurcation_sweep, char_poly, classify, eigenvalues, malthus_coexistence_certificate,
    routh_hurwitz, BranchTable, CharPoly, RouthHurwitzVerdict, StabilityClass, StabilityVerdict,
};
