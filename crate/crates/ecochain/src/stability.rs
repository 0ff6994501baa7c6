//! Eigenvalue and Routh-Hurwitz classification of equilibria, plus
//! transcritical-bifurcation detection in one-parameter sweeps.
//!
//! Eigenvalues come from a dense Schur reduction; the characteristic
//! polynomial is computed independently by the Faddeev-LeVerrier recursion,
//! so the Routh-Hurwitz route never shares code with the eigensolver it is
//! checked against.

use nalgebra::Complex;
use thiserror::Error;

use crate::equilibria::{self, Equilibrium, EquilibriumLabel, EquilibriumRecord};
use crate::model::{self, Matrix, ModelVariant, ParameterSet};

pub type Complex64 = Complex<f64>;

/// Base tolerance for deciding hyperbolicity; the effective threshold is
/// `tol * (1 + spectral radius)`.
pub const DEFAULT_HYPERBOLICITY_TOL: f64 = 1e-9;

/// Zero tolerance for Routh-Hurwitz quantities.
pub const ROUTH_HURWITZ_TOL: f64 = 1e-12;

/// Parameter tolerance for bisection-refined threshold crossings.
pub const CROSSING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum StabilityError {
    #[error("matrix has non-finite entries")]
    NonFiniteMatrix,
    #[error("Routh-Hurwitz test supports degrees 3 and 4, got {0}")]
    UnsupportedDegree(usize),
    #[error("equilibrium {label} has residual {residual:.3e}, not a zero of the field")]
    ResidualTooLarge { label: &'static str, residual: f64 },
    #[error("equilibrium {label} is infeasible")]
    Infeasible { label: &'static str },
    #[error("internal inconsistency: eigenvalue verdict {verdict:?} vs Routh-Hurwitz {routh:?}")]
    Inconsistent {
        verdict: StabilityVerdict,
        routh: RouthHurwitzVerdict,
    },
    #[error("unknown parameter name {0:?}")]
    UnknownParameter(String),
    #[error("invalid sweep grid: need lo < hi and n >= 1")]
    InvalidGrid,
    #[error("invalid parameters at {param} = {value}: {report}")]
    InvalidSweepPoint {
        param: String,
        value: f64,
        report: String,
    },
}

/// Monic characteristic polynomial `lambda^n + a1 lambda^(n-1) + ... + an`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    coeffs: Vec<f64>,
}

impl CharPoly {
    /// Construct from monic coefficients `[1, a1, ..., an]`.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(
            !coeffs.is_empty() && coeffs[0] == 1.0,
            "polynomial must be monic"
        );
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient `a_k` (with `a_0 = 1`).
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

fn check_finite(m: &Matrix) -> Result<(), StabilityError> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(StabilityError::NonFiniteMatrix)
    }
}

/// All eigenvalues of a small dense real matrix, sorted by real part then
/// imaginary part. Complex eigenvalues appear in conjugate pairs.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>, StabilityError> {
    check_finite(m)?;
    let mut eigs: Vec<Complex64> = m.complex_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(eigs)
}

/// Characteristic polynomial by the Faddeev-LeVerrier recursion:
/// `M_k = A (M_{k-1} + c_{k-1} I)`, `c_k = -tr(M_k)/k`.
///
/// `a1 = -tr(A)` holds exactly up to rounding.
pub fn char_poly(m: &Matrix) -> Result<CharPoly, StabilityError> {
    check_finite(m)?;
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    let mut coeffs = vec![1.0];
    let mut acc = Matrix::identity(n, n);
    for k in 1..=n {
        acc = m * acc;
        let c = -acc.trace() / k as f64;
        coeffs.push(c);
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    Ok(CharPoly::from_coeffs(coeffs))
}

/// Routh-Hurwitz verdict: the first failed or marginal condition is named.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouthHurwitzVerdict {
    Pass,
    Fail { condition: &'static str },
    Marginal { condition: &'static str },
}

impl RouthHurwitzVerdict {
    pub fn is_pass(self) -> bool {
        matches!(self, RouthHurwitzVerdict::Pass)
    }

    pub fn condition(self) -> Option<&'static str> {
        match self {
            RouthHurwitzVerdict::Pass => None,
            RouthHurwitzVerdict::Fail { condition } => Some(condition),
            RouthHurwitzVerdict::Marginal { condition } => Some(condition),
        }
    }
}

impl std::fmt::Display for RouthHurwitzVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RouthHurwitzVerdict::Pass => f.write_str("pass"),
            RouthHurwitzVerdict::Fail { condition } => write!(f, "fail({condition})"),
            RouthHurwitzVerdict::Marginal { condition } => write!(f, "marginal({condition})"),
        }
    }
}

/// Full Routh-Hurwitz test for monic cubics and quartics.
///
/// Degree 3: `a1 > 0`, `a3 > 0`, `a1 a2 > a3`.
/// Degree 4: `a1 > 0`, `a3 > 0`, `a4 > 0`, `a1 a2 a3 > a3^2 + a1^2 a4`.
/// Conditions are scanned in order; a quantity within [`ROUTH_HURWITZ_TOL`]
/// of zero is reported marginal.
pub fn routh_hurwitz(cp: &CharPoly) -> Result<RouthHurwitzVerdict, StabilityError> {
    let quantities: Vec<(&'static str, f64)> = match cp.degree() {
        3 => {
            let (a1, a2, a3) = (cp.coeff(1), cp.coeff(2), cp.coeff(3));
            vec![("a1>0", a1), ("a3>0", a3), ("a1*a2>a3", a1 * a2 - a3)]
        }
        4 => {
            let (a1, a2, a3, a4) = (cp.coeff(1), cp.coeff(2), cp.coeff(3), cp.coeff(4));
            vec![
                ("a1>0", a1),
                ("a3>0", a3),
                ("a4>0", a4),
                (
                    "a1*a2*a3>a3^2+a1^2*a4",
                    a1 * a2 * a3 - a3 * a3 - a1 * a1 * a4,
                ),
            ]
        }
        d => return Err(StabilityError::UnsupportedDegree(d)),
    };
    for (condition, value) in quantities {
        if value.abs() <= ROUTH_HURWITZ_TOL {
            return Ok(RouthHurwitzVerdict::Marginal { condition });
        }
        if value < 0.0 {
            return Ok(RouthHurwitzVerdict::Fail { condition });
        }
    }
    Ok(RouthHurwitzVerdict::Pass)
}

/// Sign pattern of the eigenvalue real parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityVerdict {
    /// All real parts below `-threshold`.
    Stable,
    /// Some real part above `+threshold`, none inside the band.
    Unstable,
    /// Some real part within the threshold band around zero.
    Nonhyperbolic,
}

impl std::fmt::Display for StabilityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StabilityVerdict::Stable => "Stable",
            StabilityVerdict::Unstable => "Unstable",
            StabilityVerdict::Nonhyperbolic => "Nonhyperbolic",
        })
    }
}

/// Eigenvalue-based classification with the Routh-Hurwitz cross-check
/// attached.
///
/// A nonhyperbolic point can still have unstable directions (the Malthus
/// `E1t` has a pure-imaginary pair next to a positive eigenvalue);
/// `n_unstable` reports them.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityClass {
    pub verdict: StabilityVerdict,
    pub eigenvalues: Vec<Complex64>,
    /// Count of eigenvalues with real part above the threshold.
    pub n_unstable: usize,
    /// Count of eigenvalues with |real part| within the threshold.
    pub n_center: usize,
    /// Effective zero band used: `tol * (1 + spectral radius)`.
    pub threshold: f64,
    pub routh_hurwitz: RouthHurwitzVerdict,
}

/// Classify eigenvalue real parts against a scale-aware zero band.
fn verdict_from_eigenvalues(eigs: &[Complex64], tol: f64) -> (StabilityVerdict, usize, usize, f64) {
    let radius = eigs.iter().map(|e| e.norm()).fold(0.0, f64::max);
    let threshold = tol * (1.0 + radius);
    let n_center = eigs.iter().filter(|e| e.re.abs() <= threshold).count();
    let n_unstable = eigs.iter().filter(|e| e.re > threshold).count();
    let verdict = if n_center > 0 {
        StabilityVerdict::Nonhyperbolic
    } else if n_unstable > 0 {
        StabilityVerdict::Unstable
    } else {
        StabilityVerdict::Stable
    };
    (verdict, n_unstable, n_center, threshold)
}

/// Classify an equilibrium from the Jacobian spectrum.
///
/// The Routh-Hurwitz verdict on the independently computed characteristic
/// polynomial is attached; disagreement outside marginal/nonhyperbolic
/// cases is an internal error.
pub fn classify(
    variant: ModelVariant,
    p: &ParameterSet,
    eq: &Equilibrium,
    tol: f64,
) -> Result<StabilityClass, StabilityError> {
    if !eq.state.is_finite() {
        return Err(StabilityError::NonFiniteMatrix);
    }
    if eq.residual > 1e-8 * (1.0 + eq.state.norm()) {
        return Err(StabilityError::ResidualTooLarge {
            label: eq.label.as_str(),
            residual: eq.residual,
        });
    }
    let j = model::jacobian_raw(variant, p, &eq.state.as_array());
    classify_matrix(&j, tol)
}

/// Classification of an explicit Jacobian; exposed for callers that already
/// hold the matrix.
pub fn classify_matrix(j: &Matrix, tol: f64) -> Result<StabilityClass, StabilityError> {
    let eigs = eigenvalues(j)?;
    let (verdict, n_unstable, n_center, threshold) = verdict_from_eigenvalues(&eigs, tol);
    let routh = routh_hurwitz(&char_poly(j)?)?;
    let consistent = match (verdict, routh) {
        (StabilityVerdict::Nonhyperbolic, _) => true,
        (_, RouthHurwitzVerdict::Marginal { .. }) => true,
        (StabilityVerdict::Stable, r) => r.is_pass(),
        (StabilityVerdict::Unstable, r) => !r.is_pass(),
    };
    if !consistent {
        return Err(StabilityError::Inconsistent { verdict, routh });
    }
    Ok(StabilityClass {
        verdict,
        eigenvalues: eigs,
        n_unstable,
        n_center,
        threshold,
        routh_hurwitz: routh,
    })
}

/// Certificate that the Malthus coexistence point sits on the margin of the
/// Routh-Hurwitz conditions.
///
/// At an interior Malthus equilibrium every bracket vanishes, so the
/// Jacobian trace is exactly zero in the algebra and `a1 = -trace` fails the
/// very first condition.
#[derive(Debug, Clone, PartialEq)]
pub struct CoexistenceCertificate {
    pub equilibrium: Equilibrium,
    pub trace: f64,
    /// `|trace| < 1e-10 * (1 + Frobenius norm of the Jacobian)`.
    pub trace_vanishes: bool,
    pub char_poly: CharPoly,
    pub routh_hurwitz: RouthHurwitzVerdict,
    /// True when the first Routh-Hurwitz condition `a1 > 0` fails or is
    /// marginal, i.e. the point cannot be asymptotically stable.
    pub unstable_or_marginal: bool,
}

pub fn malthus_coexistence_certificate(
    p: &ParameterSet,
) -> Result<CoexistenceCertificate, StabilityError> {
    let eqs = equilibria::malthus_equilibria(p);
    let estar = eqs
        .into_iter()
        .find(|e| e.label == EquilibriumLabel::EstarTilde)
        .expect("Malthus listing always contains the coexistence point");
    if !estar.feasible {
        return Err(StabilityError::Infeasible {
            label: estar.label.as_str(),
        });
    }
    let j = model::jacobian_raw(ModelVariant::MalthusEpidemic, p, &estar.state.as_array());
    let trace = j.trace();
    let scale = 1.0 + j.norm();
    let cp = char_poly(&j)?;
    let routh = routh_hurwitz(&cp)?;
    let unstable_or_marginal = matches!(
        routh,
        RouthHurwitzVerdict::Fail { condition: "a1>0" }
            | RouthHurwitzVerdict::Marginal { condition: "a1>0" }
    );
    Ok(CoexistenceCertificate {
        equilibrium: estar,
        trace,
        trace_vanishes: trace.abs() < 1e-10 * scale,
        char_poly: cp,
        routh_hurwitz: routh,
        unstable_or_marginal,
    })
}

/// Which threshold a sweep crossing belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdKind {
    Rho1,
    Rho2,
}

impl std::fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ThresholdKind::Rho1 => "rho1",
            ThresholdKind::Rho2 => "rho2",
        })
    }
}

/// Per-equilibrium column of a sweep row.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchEntry {
    pub label: EquilibriumLabel,
    /// `None` for absent or degenerate records.
    pub feasible: Option<bool>,
    pub class: Option<StabilityVerdict>,
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchRow {
    pub value: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub entries: Vec<BranchEntry>,
}

/// A detected `rho = 1` crossing, refined by bisection.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub kind: ThresholdKind,
    /// Parameter value where the threshold crosses 1, to [`CROSSING_TOL`].
    pub value: f64,
    /// Index of the grid row just below the crossing.
    pub lower_row: usize,
}

/// Feasibility/stability table of all equilibria over a one-parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchTable {
    pub variant: ModelVariant,
    pub param: String,
    pub labels: Vec<EquilibriumLabel>,
    pub rows: Vec<BranchRow>,
    pub crossings: Vec<Crossing>,
}

impl BranchTable {
    /// Evaluate one off-grid row (used to report crossing rows).
    pub fn row_at(&self, base: &ParameterSet, value: f64) -> Option<BranchRow> {
        let p = base.with(&self.param, value)?;
        Some(sweep_row(self.variant, &p, value))
    }
}

fn sweep_row(variant: ModelVariant, p: &ParameterSet, value: f64) -> BranchRow {
    let t = equilibria::thresholds(p);
    let entries = equilibria::equilibria_of(variant, p)
        .into_iter()
        .map(|record| match record {
            EquilibriumRecord::Present(eq) => {
                let class = classify(variant, p, &eq, DEFAULT_HYPERBOLICITY_TOL)
                    .ok()
                    .map(|c| c.verdict);
                BranchEntry {
                    label: eq.label,
                    feasible: Some(eq.feasible),
                    class,
                }
            }
            other => BranchEntry {
                label: other.label(),
                feasible: None,
                class: None,
            },
        })
        .collect();
    BranchRow {
        value,
        rho1: t.rho1,
        rho2: t.rho2,
        entries,
    }
}

/// Sweep one parameter over `[lo, hi]` on `n` points, classify every
/// equilibrium at every grid value, and refine each `rho1 = 1` / `rho2 = 1`
/// sign change by bisection.
pub fn bifurcation_sweep(
    variant: ModelVariant,
    base: &ParameterSet,
    param: &str,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<BranchTable, StabilityError> {
    if base.get(param).is_none() {
        return Err(StabilityError::UnknownParameter(param.to_string()));
    }
    if n < 1 || !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(StabilityError::InvalidGrid);
    }

    let grid: Vec<f64> = if n == 1 {
        vec![lo]
    } else {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    };

    let mut rows = Vec::with_capacity(n);
    for &value in &grid {
        let p = base.with(param, value).unwrap();
        let report = model::validate_params(&p, variant);
        if !report.is_valid() {
            return Err(StabilityError::InvalidSweepPoint {
                param: param.to_string(),
                value,
                report: report.to_string(),
            });
        }
        rows.push(sweep_row(variant, &p, value));
    }

    let mut crossings = Vec::new();
    for kind in [ThresholdKind::Rho1, ThresholdKind::Rho2] {
        let rho_of = |row: &BranchRow| match kind {
            ThresholdKind::Rho1 => row.rho1,
            ThresholdKind::Rho2 => row.rho2,
        };
        for i in 0..rows.len().saturating_sub(1) {
            let f_lo = rho_of(&rows[i]) - 1.0;
            let f_hi = rho_of(&rows[i + 1]) - 1.0;
            if f_lo == 0.0 {
                crossings.push(Crossing {
                    kind,
                    value: rows[i].value,
                    lower_row: i,
                });
            } else if f_lo * f_hi < 0.0 {
                let value =
                    bisect_threshold(variant, base, param, kind, rows[i].value, rows[i + 1].value);
                crossings.push(Crossing {
                    kind,
                    value,
                    lower_row: i,
                });
            }
        }
        // A zero exactly at the last grid point is still a crossing row.
        if let Some(last) = rows.last() {
            if rho_of(last) == 1.0 {
                crossings.push(Crossing {
                    kind,
                    value: last.value,
                    lower_row: rows.len() - 1,
                });
            }
        }
    }
    crossings.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());

    Ok(BranchTable {
        variant,
        param: param.to_string(),
        labels: rows
            .first()
            .map(|r| r.entries.iter().map(|e| e.label).collect())
            .unwrap_or_default(),
        rows,
        crossings,
    })
}

fn bisect_threshold(
    variant: ModelVariant,
    base: &ParameterSet,
    param: &str,
    kind: ThresholdKind,
    mut lo: f64,
    mut hi: f64,
) -> f64 {
    let _ = variant;
    let rho = |x: f64| {
        let p = base.with(param, x).unwrap();
        let t = equilibria::thresholds(&p);
        (match kind {
            ThresholdKind::Rho1 => t.rho1,
            ThresholdKind::Rho2 => t.rho2,
        }) - 1.0
    };
    let mut f_lo = rho(lo);
    while hi - lo > CROSSING_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = rho(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    0.5 * (lo + hi)
}
