//! C ABI for the ecochain library.
//!
//! Handles (`EcoParams`, `EcoEquilibria`, `EcoTrajectory`) are opaque; every
//! function returns an [`EcoStatus`] or a nullable pointer, and the message
//! for the most recent failure on the current thread is available from
//! [`ecochain_last_error`]. The C header is generated into
//! `include/ecochain.h` by cbindgen at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CString};

use ecochain::equilibria::{self, EquilibriumRecord};
use ecochain::model::{self, ModelVariant, ParameterSet, State};
use ecochain::simulate::{self, IntegratorConfig, Termination};
use ecochain::stability::{self, StabilityVerdict};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidParams = 3,
    NumericalFailure = 4,
}

/// Model variant selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcoVariant {
    MalthusEpidemic = 0,
    LogisticEpidemic = 1,
    LogisticDiseaseFree = 2,
    MalthusDiseaseFree = 3,
}

impl From<EcoVariant> for ModelVariant {
    fn from(v: EcoVariant) -> Self {
        match v {
            EcoVariant::MalthusEpidemic => ModelVariant::MalthusEpidemic,
            EcoVariant::LogisticEpidemic => ModelVariant::LogisticEpidemic,
            EcoVariant::LogisticDiseaseFree => ModelVariant::LogisticDiseaseFree,
            EcoVariant::MalthusDiseaseFree => ModelVariant::MalthusDiseaseFree,
        }
    }
}

/// Stability classification of an equilibrium.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcoStabilityVerdict {
    Stable = 0,
    Unstable = 1,
    Nonhyperbolic = 2,
}

/// How an equilibrium entry is to be read.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcoEquilibriumKind {
    /// `state`, `feasible` and `residual` are meaningful.
    Present = 0,
    /// The point recedes to infinity in the Malthus limit.
    AbsentInMalthus = 1,
    /// The defining system is numerically singular.
    Degenerate = 2,
}

/// One equilibrium as seen through the ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EcoEquilibrium {
    pub kind: EcoEquilibriumKind,
    /// NUL-terminated label, e.g. "E1t" or "Dstar".
    pub label: [c_char; 16],
    /// Components (P, S, I, V).
    pub state: [f64; 4],
    pub feasible: bool,
    /// Euclidean norm of the vector field at `state`.
    pub residual: f64,
}

/// Eigenvalue data attached to a classification.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EcoStability {
    pub verdict: EcoStabilityVerdict,
    /// Number of valid entries in the eigenvalue arrays (3 or 4).
    pub n_eigenvalues: u32,
    pub eigenvalues_re: [f64; 4],
    pub eigenvalues_im: [f64; 4],
    /// Eigenvalues with real part above the hyperbolicity threshold.
    pub n_unstable: u32,
    /// Eigenvalues with |real part| within the threshold.
    pub n_center: u32,
}

/// Adaptive integrator settings; pass `ecochain_default_config()` for the
/// library defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EcoIntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub h0: f64,
    pub hmax: f64,
    pub tmax: f64,
}

/// Opaque parameter-set handle.
pub struct EcoParams(ParameterSet);

/// Opaque equilibrium listing.
pub struct EcoEquilibria {
    variant: ModelVariant,
    params: ParameterSet,
    records: Vec<EquilibriumRecord>,
}

/// Opaque trajectory handle.
pub struct EcoTrajectory(simulate::Trajectory);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl AsRef<str>) {
    let cstring =
        CString::new(message.as_ref().replace('\0', " ")).unwrap_or_else(|_| CString::default());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = cstring);
}

/// Message for the most recent failure on this thread.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ecochain_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Allocate a parameter set. Free with `ecochain_params_free`.
///
/// No validation happens here; call `ecochain_params_validate`.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub extern "C" fn ecochain_params_new(
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
) -> *mut EcoParams {
    Box::into_raw(Box::new(EcoParams(ParameterSet::new(
        g, f, c, l, q, b, beta, tau, nu, mu, r, k,
    ))))
}

/// # Safety
/// `params` must come from `ecochain_params_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ecochain_params_free(params: *mut EcoParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Check the parameter constraints for a variant. On `InvalidParams` the
/// violated constraints are listed in `ecochain_last_error()`.
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ecochain_params_validate(
    params: *const EcoParams,
    variant: EcoVariant,
) -> EcoStatus {
    let Some(params) = params.as_ref() else {
        set_error("params is null");
        return EcoStatus::NullPointer;
    };
    let report = model::validate_params(&params.0, variant.into());
    if report.is_valid() {
        EcoStatus::Ok
    } else {
        set_error(report.to_string());
        EcoStatus::InvalidParams
    }
}

/// Evaluate the right-hand side at `x` (length 4) into `out` (length 4).
///
/// # Safety
/// `params`, `x` and `out` must be valid; `x` and `out` must point to 4
/// doubles each.
#[no_mangle]
pub unsafe extern "C" fn ecochain_vector_field(
    variant: EcoVariant,
    params: *const EcoParams,
    x: *const f64,
    out: *mut f64,
) -> EcoStatus {
    let Some(params) = params.as_ref() else {
        set_error("params is null");
        return EcoStatus::NullPointer;
    };
    if x.is_null() || out.is_null() {
        set_error("state pointer is null");
        return EcoStatus::NullPointer;
    }
    let state = State::from_array([*x, *x.add(1), *x.add(2), *x.add(3)]);
    match model::vector_field(variant.into(), &params.0, &state) {
        Ok(dx) => {
            for (i, value) in dx.as_array().iter().enumerate() {
                *out.add(i) = *value;
            }
            EcoStatus::Ok
        }
        Err(err) => {
            set_error(err.to_string());
            EcoStatus::InvalidArgument
        }
    }
}

/// Analytic Jacobian at `x`, written row-major into `out` (room for 16
/// doubles). `*dim` receives 4, or 3 for disease-free variants.
///
/// # Safety
/// As for `ecochain_vector_field`; `out` must hold 16 doubles.
#[no_mangle]
pub unsafe extern "C" fn ecochain_jacobian(
    variant: EcoVariant,
    params: *const EcoParams,
    x: *const f64,
    out: *mut f64,
    dim: *mut u32,
) -> EcoStatus {
    let Some(params) = params.as_ref() else {
        set_error("params is null");
        return EcoStatus::NullPointer;
    };
    if x.is_null() || out.is_null() || dim.is_null() {
        set_error("output pointer is null");
        return EcoStatus::NullPointer;
    }
    let state = State::from_array([*x, *x.add(1), *x.add(2), *x.add(3)]);
    match model::jacobian(variant.into(), &params.0, &state) {
        Ok(j) => {
            let n = j.nrows();
            *dim = n as u32;
            for row in 0..n {
                for col in 0..n {
                    *out.add(row * n + col) = j[(row, col)];
                }
            }
            EcoStatus::Ok
        }
        Err(err) => {
            set_error(err.to_string());
            EcoStatus::InvalidArgument
        }
    }
}

/// Total population `P + S + I + V` of a state vector (length 4).
///
/// # Safety
/// `x` must point to 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn ecochain_total_population(x: *const f64) -> f64 {
    if x.is_null() {
        return f64::NAN;
    }
    *x + *x.add(1) + *x.add(2) + *x.add(3)
}

/// The transcritical thresholds `rho1 = lK/mu` and
/// `rho2 = (fr/(b tau))(1 - mu/(lK))`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ecochain_thresholds(
    params: *const EcoParams,
    rho1: *mut f64,
    rho2: *mut f64,
) -> EcoStatus {
    let Some(params) = params.as_ref() else {
        set_error("params is null");
        return EcoStatus::NullPointer;
    };
    if rho1.is_null() || rho2.is_null() {
        set_error("output pointer is null");
        return EcoStatus::NullPointer;
    }
    let t = equilibria::thresholds(&params.0);
    *rho1 = t.rho1;
    *rho2 = t.rho2;
    EcoStatus::Ok
}

/// Compute all equilibria of a variant. Returns null (with a message) for
/// invalid parameters. Free with `ecochain_equilibria_free`.
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ecochain_equilibria_compute(
    variant: EcoVariant,
    params: *const EcoParams,
) -> *mut EcoEquilibria {
    let Some(params) = params.as_ref() else {
        set_error("params is null");
        return std::ptr::null_mut();
    };
    let variant: ModelVariant = variant.into();
    let report = model::validate_params(&params.0, variant);
    if !report.is_valid() {
        set_error(report.to_string());
        return std::ptr::null_mut();
    }
    let records = equilibria::equilibria_of(variant, &params.0);
    Box::into_raw(Box::new(EcoEquilibria {
        variant,
        params: params.0,
        records,
    }))
}

/// Number of entries in an equilibrium listing.
///
/// # Safety
/// `handle` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ecochain_equilibria_count(handle: *const EcoEquilibria) -> usize {
    handle.as_ref().map_or(0, |h| h.records.len())
}

fn fill_label(out: &mut [c_char; 16], label: &str) {
    let bytes = label.as_bytes();
    let n = bytes.len().min(out.len() - 1);
    for (slot, byte) in out.iter_mut().zip(bytes.iter().take(n)) {
        *slot = *byte as c_char;
    }
    out[n] = 0;
}

/// Fetch one entry of an equilibrium listing.
///
/// # Safety
/// `handle` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ecochain_equilibria_get(
    handle: *const EcoEquilibria,
    index: usize,
    out: *mut EcoEquilibrium,
) -> EcoStatus {
    let Some(handle) = handle.as_ref() else {
        set_error("equilibria handle is null");
        return EcoStatus::NullPointer;
    };
    let Some(out) = out.as_mut() else {
        set_error("output pointer is null");
        return EcoStatus::NullPointer;
    };
    let Some(record) = handle.records.get(index) else {
        set_error(format!(
            "index {index} out of range ({} entries)",
            handle.records.len()
        ));
        return EcoStatus::InvalidArgument;
    };
    out.state = [0.0; 4];
    out.feasible = false;
    out.residual = f64::NAN;
    match record {
        EquilibriumRecord::Present(eq) => {
            out.kind = EcoEquilibriumKind::Present;
            fill_label(&mut out.label, eq.label.as_str());
            out.state = eq.state.as_array();
            out.feasible = eq.feasible;
            out.residual = eq.residual;
        }
        EquilibriumRecord::AbsentInMalthus { label } => {
            out.kind = EcoEquilibriumKind::AbsentInMalthus;
            fill_label(&mut out.label, label.as_str());
        }
        EquilibriumRecord::Degenerate { label, .. } => {
            out.kind = EcoEquilibriumKind::Degenerate;
            fill_label(&mut out.label, label.as_str());
        }
    }
    EcoStatus::Ok
}

/// Classify the `index`-th equilibrium of a listing by its Jacobian
/// spectrum. Fails with `InvalidArgument` for absent or degenerate entries.
///
/// # Safety
/// `handle` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ecochain_equilibria_classify(
    handle: *const EcoEquilibria,
    index: usize,
    out: *mut EcoStability,
) -> EcoStatus {
    let Some(handle) = handle.as_ref() else {
        set_error("equilibria handle is null");
        return EcoStatus::NullPointer;
    };
    let Some(out) = out.as_mut() else {
        set_error("output pointer is null");
        return EcoStatus::NullPointer;
    };
    let Some(record) = handle.records.get(index) else {
        set_error(format!(
            "index {index} out of range ({} entries)",
            handle.records.len()
        ));
        return EcoStatus::InvalidArgument;
    };
    let Some(eq) = record.as_present() else {
        set_error("entry is absent or degenerate, nothing to classify");
        return EcoStatus::InvalidArgument;
    };
    match stability::classify(
        handle.variant,
        &handle.params,
        eq,
        stability::DEFAULT_HYPERBOLICITY_TOL,
    ) {
        Ok(class) => {
            out.verdict = match class.verdict {
                StabilityVerdict::Stable => EcoStabilityVerdict::Stable,
                StabilityVerdict::Unstable => EcoStabilityVerdict::Unstable,
                StabilityVerdict::Nonhyperbolic => EcoStabilityVerdict::Nonhyperbolic,
            };
            out.n_eigenvalues = class.eigenvalues.len() as u32;
            out.eigenvalues_re = [0.0; 4];
            out.eigenvalues_im = [0.0; 4];
            for (i, eig) in class.eigenvalues.iter().enumerate().take(4) {
                out.eigenvalues_re[i] = eig.re;
                out.eigenvalues_im[i] = eig.im;
            }
            out.n_unstable = class.n_unstable as u32;
            out.n_center = class.n_center as u32;
            EcoStatus::Ok
        }
        Err(err) => {
            set_error(err.to_string());
            EcoStatus::NumericalFailure
        }
    }
}

/// # Safety
/// `handle` must come from `ecochain_equilibria_compute`.
#[no_mangle]
pub unsafe extern "C" fn ecochain_equilibria_free(handle: *mut EcoEquilibria) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Library default integrator settings (tmax = 100).
#[no_mangle]
pub extern "C" fn ecochain_default_config() -> EcoIntegratorConfig {
    let d = IntegratorConfig::default();
    EcoIntegratorConfig {
        rtol: d.rtol,
        atol: d.atol,
        h0: d.h0,
        hmax: d.hmax,
        tmax: d.tmax,
    }
}

/// Integrate from `x0` (length 4). Returns null (with a message) on invalid
/// input. Free with `ecochain_trajectory_free`.
///
/// # Safety
/// `params` must be live; `x0` must point to 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn ecochain_integrate(
    variant: EcoVariant,
    params: *const EcoParams,
    x0: *const f64,
    config: EcoIntegratorConfig,
) -> *mut EcoTrajectory {
    let Some(params) = params.as_ref() else {
        set_error("params is null");
        return std::ptr::null_mut();
    };
    if x0.is_null() {
        set_error("x0 is null");
        return std::ptr::null_mut();
    }
    let x0 = State::from_array([*x0, *x0.add(1), *x0.add(2), *x0.add(3)]);
    let cfg = IntegratorConfig {
        rtol: config.rtol,
        atol: config.atol,
        h0: config.h0,
        hmax: config.hmax,
        tmax: config.tmax,
    };
    match simulate::integrate(variant.into(), &params.0, &x0, &cfg) {
        Ok(traj) => Box::into_raw(Box::new(EcoTrajectory(traj))),
        Err(err) => {
            set_error(err.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Number of stored (time, state) samples.
///
/// # Safety
/// `handle` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ecochain_trajectory_len(handle: *const EcoTrajectory) -> usize {
    handle.as_ref().map_or(0, |h| h.0.len())
}

/// Fetch sample `index` into `t` and `state` (length 4).
///
/// # Safety
/// All pointers must be valid; `state` must hold 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn ecochain_trajectory_get(
    handle: *const EcoTrajectory,
    index: usize,
    t: *mut f64,
    state: *mut f64,
) -> EcoStatus {
    let Some(handle) = handle.as_ref() else {
        set_error("trajectory handle is null");
        return EcoStatus::NullPointer;
    };
    if t.is_null() || state.is_null() {
        set_error("output pointer is null");
        return EcoStatus::NullPointer;
    }
    if index >= handle.0.len() {
        set_error(format!(
            "index {index} out of range ({} samples)",
            handle.0.len()
        ));
        return EcoStatus::InvalidArgument;
    }
    *t = handle.0.times[index];
    for (i, value) in handle.0.states[index].as_array().iter().enumerate() {
        *state.add(i) = *value;
    }
    EcoStatus::Ok
}

/// Accepted/rejected step counts, and whether `tmax` was reached
/// (`completed = false` means the step size underflowed).
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ecochain_trajectory_stats(
    handle: *const EcoTrajectory,
    accepted: *mut u64,
    rejected: *mut u64,
    completed: *mut bool,
) -> EcoStatus {
    let Some(handle) = handle.as_ref() else {
        set_error("trajectory handle is null");
        return EcoStatus::NullPointer;
    };
    if accepted.is_null() || rejected.is_null() || completed.is_null() {
        set_error("output pointer is null");
        return EcoStatus::NullPointer;
    }
    *accepted = handle.0.stats.accepted as u64;
    *rejected = handle.0.stats.rejected() as u64;
    *completed = matches!(handle.0.termination, Termination::Completed);
    EcoStatus::Ok
}

/// # Safety
/// `handle` must come from `ecochain_integrate`.
#[no_mangle]
pub unsafe extern "C" fn ecochain_trajectory_free(handle: *mut EcoTrajectory) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}
