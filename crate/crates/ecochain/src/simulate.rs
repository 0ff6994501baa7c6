//! Trajectory integration with an embedded Dormand-Prince 5(4) pair, the
//! boundedness monitor for the logistic theorem, the Lotka-Volterra first
//! integral of the reduced `P = I = 0` face, and long-term classification.

use thiserror::Error;

use crate::equilibria::{Equilibrium, EquilibriumLabel};
use crate::model::{self, ModelVariant, ParameterSet, State};

/// Step sizes below this terminate the integration.
pub const MIN_STEP: f64 = 1e-14;

/// Tail fraction of a trajectory used for long-term classification.
pub const TAIL_FRACTION: f64 = 0.2;

/// A component whose tail maximum stays below this is reported extinct.
pub const EXTINCTION_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SimulateError {
    #[error("invalid integrator config: {0}")]
    InvalidConfig(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid initial state: {0}")]
    InvalidInitialState(#[from] model::ModelError),
    #[error("boundedness theorem requires finite K (logistic variants)")]
    RequiresLogistic,
    #[error("first integral requires S > 0 and V > 0, got S = {s}, V = {v}")]
    IntegralDomain { s: f64, v: f64 },
    #[error("sample time {t} outside the stored range [0, {tmax}]")]
    SampleOutOfRange { t: f64, tmax: f64 },
    #[error("trajectory tail is shorter than the classification window")]
    TailTooShort,
}

/// Adaptive step control settings.
///
/// The nonnegativity policy is fixed: a step that drives a component below
/// `-atol` is rejected and retried at half the size; components landing in
/// `[-atol, 0)` are snapped to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Relative tolerance on the local error (max norm).
    pub rtol: f64,
    /// Absolute tolerance on the local error.
    pub atol: f64,
    /// Initial step size.
    pub h0: f64,
    /// Largest permitted step size.
    pub hmax: f64,
    /// Final time.
    pub tmax: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            h0: 1e-3,
            hmax: 10.0,
            tmax: 100.0,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), SimulateError> {
        if !self.rtol.is_finite() || self.rtol <= 0.0 {
            return Err(SimulateError::InvalidConfig("rtol>0".into()));
        }
        if !self.atol.is_finite() || self.atol <= 0.0 {
            return Err(SimulateError::InvalidConfig("atol>0".into()));
        }
        if !self.h0.is_finite() || self.h0 <= 0.0 {
            return Err(SimulateError::InvalidConfig("h0>0".into()));
        }
        if self.hmax.is_nan() || self.h0 > self.hmax {
            return Err(SimulateError::InvalidConfig("h0<=hmax".into()));
        }
        if !self.tmax.is_finite() || self.tmax <= 0.0 {
            return Err(SimulateError::InvalidConfig("tmax>0".into()));
        }
        Ok(())
    }
}

/// Accepted/rejected step counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    /// Rejections from the embedded error estimate.
    pub rejected_error: usize,
    /// Rejections from the nonnegativity policy.
    pub rejected_negative: usize,
}

impl StepStats {
    pub fn rejected(&self) -> usize {
        self.rejected_error + self.rejected_negative
    }
}

/// Why the integration stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    /// Reached `tmax`.
    Completed,
    /// Step size underflowed below [`MIN_STEP`] at the recorded time.
    StepUnderflow { at: f64 },
}

/// Time grid, states at accepted steps, and integrator statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub variant: ModelVariant,
    pub params: ParameterSet,
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub(crate) derivs: Vec<[f64; 4]>,
    pub stats: StepStats,
    pub termination: Termination,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn final_state(&self) -> State {
        *self.states.last().unwrap()
    }

    /// Cubic Hermite interpolation between stored steps.
    pub fn sample(&self, t: f64) -> Result<State, SimulateError> {
        let tmax = self.final_time();
        if !(0.0..=tmax).contains(&t) {
            return Err(SimulateError::SampleOutOfRange { t, tmax });
        }
        let j = match self.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(exact) => return Ok(self.states[exact]),
            Err(after) => after - 1,
        };
        let (t0, t1) = (self.times[j], self.times[j + 1]);
        let h = t1 - t0;
        let theta = (t - t0) / h;
        let (th2, th3) = (theta * theta, theta * theta * theta);
        let h00 = 2.0 * th3 - 3.0 * th2 + 1.0;
        let h10 = th3 - 2.0 * th2 + theta;
        let h01 = -2.0 * th3 + 3.0 * th2;
        let h11 = th3 - th2;
        let y0 = self.states[j].as_array();
        let y1 = self.states[j + 1].as_array();
        let d0 = self.derivs[j];
        let d1 = self.derivs[j + 1];
        let mut out = [0.0; 4];
        for idx in 0..4 {
            out[idx] = h00 * y0[idx] + h10 * h * d0[idx] + h01 * y1[idx] + h11 * h * d1[idx];
        }
        Ok(State::from_array(out))
    }

    /// Indices of the tail window (last [`TAIL_FRACTION`] of the time span).
    pub fn tail_start(&self) -> usize {
        let t_cut = self.final_time() * (1.0 - TAIL_FRACTION);
        self.times.partition_point(|&t| t < t_cut)
    }

    /// Per-component (min, max) over the tail window.
    pub fn tail_ranges(&self) -> [(f64, f64); 4] {
        let start = self.tail_start();
        let mut ranges = [(f64::INFINITY, f64::NEG_INFINITY); 4];
        for state in &self.states[start..] {
            for (slot, value) in state.as_array().into_iter().enumerate() {
                ranges[slot].0 = ranges[slot].0.min(value);
                ranges[slot].1 = ranges[slot].1.max(value);
            }
        }
        ranges
    }

    /// Components whose tail maximum stays below [`EXTINCTION_THRESHOLD`].
    pub fn extinct_components(&self) -> [bool; 4] {
        let ranges = self.tail_ranges();
        [
            ranges[0].1 < EXTINCTION_THRESHOLD,
            ranges[1].1 < EXTINCTION_THRESHOLD,
            ranges[2].1 < EXTINCTION_THRESHOLD,
            ranges[3].1 < EXTINCTION_THRESHOLD,
        ]
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate the chosen system from `x0` to `cfg.tmax`.
///
/// Local error per step is held below `atol + rtol * |x|` in the max norm by
/// a PI controller. Steps driving a component below `-atol` are rejected and
/// halved; components landing in `[-atol, 0)` are snapped to zero, so stored
/// states stay in the nonnegative cone.
pub fn integrate(
    variant: ModelVariant,
    p: &ParameterSet,
    x0: &State,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, SimulateError> {
    cfg.validate()?;
    let report = model::validate_params(p, variant);
    if !report.is_valid() {
        return Err(SimulateError::InvalidParams(report.to_string()));
    }
    // x0 must be a valid dynamical state: finite, nonnegative, I = 0 for
    // disease-free variants.
    model::vector_field(variant, p, x0)?;

    let rhs = |x: &[f64; 4]| model::eval_raw(variant, p, x);

    let mut t = 0.0;
    let mut y = x0.as_array();
    let mut k1 = rhs(&y);
    let mut h = cfg.h0.min(cfg.hmax).min(cfg.tmax);

    let mut times = vec![0.0];
    let mut states = vec![*x0];
    let mut derivs = vec![k1];
    let mut stats = StepStats::default();
    let mut termination = Termination::Completed;

    // Hairer-style PI controller constants for a 5(4) pair.
    const SAFE: f64 = 0.9;
    const BETA: f64 = 0.04;
    const EXPO1: f64 = 0.2 - BETA * 0.75;
    const FACC1: f64 = 5.0; // 1 / min shrink factor
    const FACC2: f64 = 0.1; // 1 / max growth factor
    let mut facold: f64 = 1e-4;
    let mut last_rejected = false;

    while t < cfg.tmax {
        let remaining = cfg.tmax - t;
        let last = h >= remaining;
        let hs = if last { remaining } else { h };
        if hs < MIN_STEP {
            termination = Termination::StepUnderflow { at: t };
            break;
        }

        // Stages k2..k7; k7 is the FSAL evaluation at the 5th-order result.
        let mut k = [[0.0; 4]; 7];
        k[0] = k1;
        for stage in 0..6 {
            let mut arg = y;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                let a = A[stage][j];
                if a != 0.0 {
                    for idx in 0..4 {
                        arg[idx] += hs * a * kj[idx];
                    }
                }
            }
            let _ = C; // stage times are implicit: the system is autonomous
            k[stage + 1] = rhs(&arg);
        }
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate() {
            if B[j] != 0.0 {
                for idx in 0..4 {
                    y_new[idx] += hs * B[j] * kj[idx];
                }
            }
        }
        // k7 = f(y_new) was already computed as the last stage above because
        // row 6 of A equals B; reuse it for the error estimate and FSAL.
        let k7 = k[6];

        // Weighted max-norm error estimate.
        let mut err: f64 = 0.0;
        for idx in 0..4 {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                if E[j] != 0.0 {
                    e += E[j] * kj[idx];
                }
            }
            e *= hs;
            let scale = cfg.atol + cfg.rtol * y[idx].abs().max(y_new[idx].abs());
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() || y_new.iter().any(|x| !x.is_finite()) {
            err = f64::INFINITY;
        }

        let fac11 = if err > 0.0 { err.powf(EXPO1) } else { 0.0 };
        if err <= 1.0 {
            // Error test passed; apply the nonnegativity policy.
            let floor = y_new.iter().cloned().fold(f64::INFINITY, f64::min);
            if floor < -cfg.atol {
                stats.rejected_negative += 1;
                h = hs * 0.5;
                last_rejected = true;
                continue;
            }
            let mut snapped = false;
            for value in y_new.iter_mut() {
                if *value < 0.0 {
                    *value = 0.0;
                    snapped = true;
                }
            }
            t = if last { cfg.tmax } else { t + hs };
            y = y_new;
            k1 = if snapped { rhs(&y) } else { k7 };
            times.push(t);
            states.push(State::from_array(y));
            derivs.push(k1);
            stats.accepted += 1;

            let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(FACC2, FACC1);
            facold = err.max(1e-4);
            let mut h_new = hs / fac;
            if last_rejected {
                h_new = h_new.min(hs);
                last_rejected = false;
            }
            h = h_new.min(cfg.hmax);
        } else {
            stats.rejected_error += 1;
            h = hs / (fac11 / SAFE).min(FACC1);
            last_rejected = true;
        }
    }

    Ok(Trajectory {
        variant,
        params: *p,
        times,
        states,
        derivs,
        stats,
        termination,
    })
}

/// Verdict of the boundedness monitor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundednessReport {
    /// `theta = min(tau, mu, nu)`.
    pub theta: f64,
    /// Parabola vertex value `(r + theta)^2 K / (4r)`.
    pub psi_star: f64,
    /// `max(W(0), psi_star/theta)`.
    pub bound: f64,
    pub w_initial: f64,
    pub w_max: f64,
    pub satisfied: bool,
}

/// Check the total-population bound `W(t) <= max(W(0), Psi*/theta)` on every
/// stored state of a logistic trajectory.
pub fn boundedness_monitor(
    traj: &Trajectory,
    p: &ParameterSet,
) -> Result<BoundednessReport, SimulateError> {
    if !traj.variant.is_logistic() {
        return Err(SimulateError::RequiresLogistic);
    }
    let theta = p.tau.min(p.mu).min(p.nu);
    let psi_star = (p.r + theta).powi(2) * p.k / (4.0 * p.r);
    let w_initial = model::total_population(&traj.states[0]);
    let bound = w_initial.max(psi_star / theta);
    let w_max = traj
        .states
        .iter()
        .map(model::total_population)
        .fold(0.0, f64::max);
    Ok(BoundednessReport {
        theta,
        psi_star,
        bound,
        w_initial,
        w_max,
        satisfied: w_max <= bound + 1e-9 * bound,
    })
}

/// Lotka-Volterra first integral of the `P = I = 0` face:
/// `C = bS - r ln S + lV - mu ln V`, conserved by the reduced Malthus flow.
pub fn lv_first_integral(p: &ParameterSet, s: f64, v: f64) -> Result<f64, SimulateError> {
    if !s.is_finite() || !v.is_finite() || s <= 0.0 || v <= 0.0 {
        return Err(SimulateError::IntegralDomain { s, v });
    }
    Ok(p.b * s - p.r * s.ln() + p.l * v - p.mu * v.ln())
}

/// Long-term behavior of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum LongTermClass {
    /// Tail variation below `tol` in every component; matched to the nearest
    /// feasible equilibrium within `10 * tol` when one exists.
    ConvergedTo {
        state: State,
        matched: Option<EquilibriumLabel>,
    },
    /// Some component's tail peak-to-trough exceeds `10 * tol`.
    Oscillatory {
        ranges: [(f64, f64); 4],
    },
    Undetermined,
}

/// Classify the tail of a trajectory against a set of candidate equilibria.
pub fn detect_longterm(
    traj: &Trajectory,
    equilibria: &[Equilibrium],
    tol: f64,
) -> Result<LongTermClass, SimulateError> {
    if traj.len() - traj.tail_start() < 2 {
        return Err(SimulateError::TailTooShort);
    }
    let ranges = traj.tail_ranges();
    let variations: Vec<f64> = ranges.iter().map(|(lo, hi)| hi - lo).collect();
    if variations.iter().all(|&v| v < tol) {
        let state = traj.final_state();
        let matched = equilibria
            .iter()
            .filter(|eq| eq.feasible)
            .map(|eq| {
                let d = state
                    .as_array()
                    .iter()
                    .zip(eq.state.as_array())
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                (eq.label, d)
            })
            .filter(|(_, d)| *d < 10.0 * tol)
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .map(|(label, _)| label);
        Ok(LongTermClass::ConvergedTo { state, matched })
    } else if variations.iter().any(|&v| v > 10.0 * tol) {
        Ok(LongTermClass::Oscillatory { ranges })
    } else {
        Ok(LongTermClass::Undetermined)
    }
}
