//! Command-line front end: simulate trajectories, list equilibria, classify
//! stability, sweep parameters for transcritical crossings, and re-run the
//! bundled reference scenarios.
//!
//! Exit status: 0 on success, 1 on validation errors (the message names the
//! violated constraint), 2 on numerical failure.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ecochain::config::{parse_config, RunConfig};
use ecochain::equilibria::{self, EquilibriumRecord};
use ecochain::model::{validate_params, ModelVariant, ParameterSet, State};
use ecochain::output;
use ecochain::scenarios::{self, Scenario};
use ecochain::simulate::{self, IntegratorConfig, Termination, Trajectory};
use ecochain::stability::{self, StabilityVerdict};

#[derive(Parser)]
#[command(
    name = "ecochain",
    version,
    about = "Ecoepidemic food chain: simulation, equilibria, stability, bifurcation sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a trajectory and emit it as CSV (optionally also SVG).
    Simulate {
        /// JSON run configuration; read from stdin when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG line plot of the populations.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print the equilibrium table with feasibility flags and residuals.
    Equilibria {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print eigenvalues, characteristic polynomials, Routh-Hurwitz verdicts,
    /// and classifications for every equilibrium.
    Stability {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Sweep one parameter and emit the branch table (with refined threshold
    /// crossings) as CSV.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Parameter to sweep; overrides `sweep_param` from the config.
        #[arg(long)]
        param: Option<String>,
        #[arg(long)]
        lo: Option<f64>,
        #[arg(long)]
        hi: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a bundled reference scenario end to end and print its verdict.
    Reproduce {
        /// One of fig1, fig2, fig3, fig4.
        scenario: String,
    },
}

/// Failure with the exit status it maps to.
struct AppError {
    code: u8,
    message: String,
}

impl AppError {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Simulate { config, out, svg } => cmd_simulate(config, out, svg),
        Command::Equilibria { config } => cmd_equilibria(config),
        Command::Stability { config } => cmd_stability(config),
        Command::Sweep {
            config,
            param,
            lo,
            hi,
            n,
            out,
        } => cmd_sweep(config, param, lo, hi, n, out),
        Command::Reproduce { scenario } => cmd_reproduce(&scenario),
    }
}

fn read_config(path: Option<PathBuf>) -> Result<RunConfig, AppError> {
    let text = match path {
        Some(path) => std::fs::read_to_string(&path)
            .map_err(|e| AppError::numerical(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| AppError::numerical(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    parse_config(&text).map_err(|e| AppError::validation(e.to_string()))
}

/// Parse config and check the parameter constraints for its variant.
fn load_checked(
    path: Option<PathBuf>,
) -> Result<(ModelVariant, ParameterSet, RunConfig), AppError> {
    let config = read_config(path)?;
    let variant = config
        .variant()
        .map_err(|e| AppError::validation(e.to_string()))?;
    let params = config
        .params()
        .map_err(|e| AppError::validation(e.to_string()))?;
    let report = validate_params(&params, variant);
    if !report.is_valid() {
        return Err(AppError::validation(report.to_string()));
    }
    Ok((variant, params, config))
}

fn write_output(path: Option<PathBuf>, content: &str) -> Result<(), AppError> {
    match path {
        Some(path) => std::fs::write(&path, content)
            .map_err(|e| AppError::numerical(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_simulate(
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
) -> Result<(), AppError> {
    let (variant, params, config) = load_checked(config)?;
    let x0 = config
        .initial_state()
        .ok_or_else(|| AppError::validation("missing required key \"x0\" for simulate"))?;
    let cfg = config.integrator_config();
    let traj = integrate_checked(variant, &params, &x0, &cfg)?;
    write_output(out, &output::trajectory_csv(&traj))?;
    if let Some(svg_path) = svg {
        let series = output::trajectory_series(&traj);
        let doc = output::svg_line_plot(&format!("{variant} populations"), &series)
            .map_err(|e| AppError::numerical(e.to_string()))?;
        write_output(Some(svg_path), &doc)?;
    }
    if let Termination::StepUnderflow { at } = traj.termination {
        return Err(AppError::numerical(format!(
            "step size underflow at t = {at}; partial trajectory written"
        )));
    }
    Ok(())
}

fn integrate_checked(
    variant: ModelVariant,
    params: &ParameterSet,
    x0: &State,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, AppError> {
    simulate::integrate(variant, params, x0, cfg).map_err(|e| match e {
        simulate::SimulateError::InvalidConfig(_)
        | simulate::SimulateError::InvalidParams(_)
        | simulate::SimulateError::InvalidInitialState(_) => AppError::validation(e.to_string()),
        other => AppError::numerical(other.to_string()),
    })
}

fn format_equilibrium_row(record: &EquilibriumRecord) -> String {
    match record {
        EquilibriumRecord::Present(eq) => {
            let x = eq.state.as_array();
            format!(
                "{:<8} P={:<14.10} S={:<14.10} I={:<14.10} V={:<14.10} feasible={:<5} residual={:.3e} ({})",
                eq.label.to_string(),
                x[0],
                x[1],
                x[2],
                x[3],
                eq.feasible,
                eq.residual,
                match eq.provenance {
                    equilibria::Provenance::ClosedForm => "closed-form",
                    equilibria::Provenance::LinearSolve => "linear-solve",
                }
            )
        }
        EquilibriumRecord::AbsentInMalthus { label } => format!(
            "{:<8} absent in Malthus variant (finite only with logistic growth)",
            label.to_string()
        ),
        EquilibriumRecord::Degenerate { label, reason } => {
            format!("{:<8} degenerate: {reason}", label.to_string())
        }
    }
}

fn cmd_equilibria(config: Option<PathBuf>) -> Result<(), AppError> {
    let (variant, params, _) = load_checked(config)?;
    println!("variant: {variant}");
    if variant.is_logistic() {
        let t = equilibria::thresholds(&params);
        println!("rho1 = {}", output::fmt_sig(t.rho1));
        println!("rho2 = {}", output::fmt_sig(t.rho2));
    }
    for record in equilibria::equilibria_of(variant, &params) {
        println!("{}", format_equilibrium_row(&record));
    }
    Ok(())
}

fn format_complex(z: &stability::Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.10}", z.re)
    } else if z.im > 0.0 {
        format!("{:.10}+{:.10}i", z.re, z.im)
    } else {
        format!("{:.10}-{:.10}i", z.re, -z.im)
    }
}

fn cmd_stability(config: Option<PathBuf>) -> Result<(), AppError> {
    let (variant, params, _) = load_checked(config)?;
    println!("variant: {variant}");
    for record in equilibria::equilibria_of(variant, &params) {
        match record {
            EquilibriumRecord::Present(eq) => {
                println!(
                    "{}",
                    format_equilibrium_row(&EquilibriumRecord::Present(eq.clone()))
                );
                match stability::classify(
                    variant,
                    &params,
                    &eq,
                    stability::DEFAULT_HYPERBOLICITY_TOL,
                ) {
                    Ok(class) => {
                        let eigs: Vec<String> =
                            class.eigenvalues.iter().map(format_complex).collect();
                        println!("  eigenvalues: [{}]", eigs.join(", "));
                        if let Ok(j) = ecochain::model::jacobian(variant, &params, &eq.state) {
                            if let Ok(cp) = stability::char_poly(&j) {
                                let coeffs: Vec<String> =
                                    cp.coeffs().iter().map(|c| output::fmt_sig(*c)).collect();
                                println!("  char poly:   [{}]", coeffs.join(", "));
                            }
                        }
                        println!("  routh-hurwitz: {}", class.routh_hurwitz);
                        let extra = if class.verdict == StabilityVerdict::Nonhyperbolic
                            && class.n_unstable > 0
                        {
                            format!(" ({} unstable direction(s))", class.n_unstable)
                        } else {
                            String::new()
                        };
                        println!("  classification: {}{extra}", class.verdict);
                    }
                    Err(err) => println!("  classification unavailable: {err}"),
                }
            }
            other => println!("{}", format_equilibrium_row(&other)),
        }
    }
    Ok(())
}

fn cmd_sweep(
    config: Option<PathBuf>,
    param: Option<String>,
    lo: Option<f64>,
    hi: Option<f64>,
    n: Option<usize>,
    out: Option<PathBuf>,
) -> Result<(), AppError> {
    let (variant, params, config) = load_checked(config)?;
    let param = param
        .or(config.sweep_param.clone())
        .ok_or_else(|| AppError::validation("missing sweep parameter (--param or sweep_param)"))?;
    let lo = lo
        .or(config.sweep_lo)
        .ok_or_else(|| AppError::validation("missing sweep lower bound (--lo or sweep_lo)"))?;
    let hi = hi
        .or(config.sweep_hi)
        .ok_or_else(|| AppError::validation("missing sweep upper bound (--hi or sweep_hi)"))?;
    let n = n
        .or(config.sweep_n)
        .ok_or_else(|| AppError::validation("missing sweep point count (--n or sweep_n)"))?;

    let table =
        stability::bifurcation_sweep(variant, &params, &param, lo, hi, n).map_err(|e| match e {
            stability::StabilityError::UnknownParameter(_)
            | stability::StabilityError::InvalidGrid
            | stability::StabilityError::InvalidSweepPoint { .. } => {
                AppError::validation(e.to_string())
            }
            other => AppError::numerical(other.to_string()),
        })?;
    for crossing in &table.crossings {
        eprintln!(
            "crossing: {} = 1 at {} = {}",
            crossing.kind,
            table.param,
            output::fmt_sig(crossing.value)
        );
    }
    write_output(out, &output::branch_table_csv(&table, &params))
}

/// Collected pass/fail lines of a reproduce run.
struct Verdict {
    name: &'static str,
    all_pass: bool,
}

impl Verdict {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            all_pass: true,
        }
    }

    fn check(&mut self, what: &str, pass: bool) {
        println!("{}: {what}", if pass { "PASS" } else { "FAIL" });
        self.all_pass &= pass;
    }

    fn finish(self) -> Result<(), AppError> {
        println!(
            "{}: {}",
            self.name,
            if self.all_pass { "PASS" } else { "FAIL" }
        );
        if self.all_pass {
            Ok(())
        } else {
            Err(AppError::numerical(format!("{} verdict FAIL", self.name)))
        }
    }
}

fn max_component_gap(state: &State, target: &[f64; 4]) -> f64 {
    state
        .as_array()
        .iter()
        .zip(target)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn cmd_reproduce(name: &str) -> Result<(), AppError> {
    let scenario = Scenario::by_name(name)
        .ok_or_else(|| AppError::validation(format!("unknown scenario {name:?}")))?;
    match scenario.name {
        "fig1" => reproduce_fig1(scenario),
        "fig2" => reproduce_fig2(scenario),
        "fig3" => reproduce_fig3(scenario),
        "fig4" => reproduce_fig4(scenario),
        _ => unreachable!(),
    }
}

fn describe_state(state: &State) -> String {
    let x = state.as_array();
    format!(
        "({}, {}, {}, {})",
        output::fmt_sig(x[0]),
        output::fmt_sig(x[1]),
        output::fmt_sig(x[2]),
        output::fmt_sig(x[3])
    )
}

fn reproduce_fig1(s: Scenario) -> Result<(), AppError> {
    let mut verdict = Verdict::new("fig1");
    let traj = integrate_checked(s.variant, &s.params, &s.x0, &s.integrator_config())?;
    let long_term = simulate::detect_longterm(&traj, &[], 1e-4)
        .map_err(|e| AppError::numerical(e.to_string()))?;
    verdict.check(
        "trajectory does not converge (sustained oscillation)",
        matches!(long_term, simulate::LongTermClass::Oscillatory { .. }),
    );
    let ranges = traj.tail_ranges();
    let ptp = ranges[0].1 - ranges[0].0;
    verdict.check(
        &format!(
            "tail peak-to-trough of P = {} > {}",
            output::fmt_sig(ptp),
            scenarios::FIG1_OSCILLATION_MIN
        ),
        ptp > scenarios::FIG1_OSCILLATION_MIN,
    );
    let cert = stability::malthus_coexistence_certificate(&s.params)
        .map_err(|e| AppError::numerical(e.to_string()))?;
    println!(
        "coexistence point {} with |a1| = {:.3e}",
        describe_state(&cert.equilibrium.state),
        cert.char_poly.coeff(1).abs()
    );
    verdict.check(
        "characteristic polynomial has a1 = 0 to 1e-12",
        cert.char_poly.coeff(1).abs() < 1e-12,
    );
    verdict.check(
        &format!("Routh-Hurwitz fails at a1 ({})", cert.routh_hurwitz),
        cert.unstable_or_marginal,
    );
    verdict.finish()
}

fn reproduce_fig2(s: Scenario) -> Result<(), AppError> {
    let mut verdict = Verdict::new("fig2");
    println!(
        "note: at these rates the disease-free coexistence E4 has a negative predator \
         component in closed form and the endemic point E3 a negative infected component, \
         so neither is feasible; trajectories settle on the predator- and disease-free \
         point E1 instead."
    );
    let eqs = equilibria::logistic_boundary_equilibria(&s.params);
    let e3 = eqs
        .iter()
        .find(|e| e.label == equilibria::EquilibriumLabel::E3)
        .unwrap();
    let e4 = eqs
        .iter()
        .find(|e| e.label == equilibria::EquilibriumLabel::E4)
        .unwrap();
    verdict.check("E3 infeasible", !e3.feasible);
    verdict.check("E4 infeasible", !e4.feasible);
    let traj = integrate_checked(s.variant, &s.params, &s.x0, &s.integrator_config())?;
    let final_state = traj.final_state();
    let gap = max_component_gap(&final_state, &scenarios::FIG2_TARGET);
    println!("final state {}", describe_state(&final_state));
    verdict.check(
        &format!(
            "integration settles within {} of (0, 0.96296, 0, 0.33333) (gap {:.2e})",
            scenarios::STATE_TOL,
            gap
        ),
        gap < scenarios::STATE_TOL,
    );
    let extinct = traj.extinct_components();
    let mut extinct_names = String::new();
    for (flag, name) in extinct.iter().zip(["P", "S", "I", "V"]) {
        if *flag {
            let _ = write!(extinct_names, "{name} ");
        }
    }
    println!("extinct in the limit: {}", extinct_names.trim_end());
    verdict.finish()
}

fn reproduce_fig3(s: Scenario) -> Result<(), AppError> {
    let mut verdict = Verdict::new("fig3");
    let eqs = equilibria::logistic_boundary_equilibria(&s.params);
    let e3 = eqs
        .iter()
        .find(|e| e.label == equilibria::EquilibriumLabel::E3)
        .unwrap();
    println!("E3 = {}", describe_state(&e3.state));
    let gap = max_component_gap(&e3.state, &scenarios::FIG3_TARGET);
    verdict.check(
        &format!(
            "closed-form E3 within {} of (0, 0.6667, 0.4103, 0.5385) (gap {:.2e})",
            scenarios::STATE_TOL,
            gap
        ),
        gap < scenarios::STATE_TOL,
    );
    let class = stability::classify(
        s.variant,
        &s.params,
        e3,
        stability::DEFAULT_HYPERBOLICITY_TOL,
    )
    .map_err(|e| AppError::numerical(e.to_string()))?;
    verdict.check(
        &format!("E3 classified {}", class.verdict),
        class.verdict == StabilityVerdict::Stable,
    );
    let traj = integrate_checked(s.variant, &s.params, &s.x0, &s.integrator_config())?;
    let gap = max_component_gap(&traj.final_state(), &e3.state.as_array());
    verdict.check(
        &format!("integration attains E3 (gap {gap:.2e})"),
        gap < scenarios::STATE_TOL,
    );
    verdict.finish()
}

fn reproduce_fig4(s: Scenario) -> Result<(), AppError> {
    let mut verdict = Verdict::new("fig4");
    let solved = equilibria::logistic_coexistence(&s.params);
    let estar = solved
        .solved()
        .ok_or_else(|| AppError::numerical("coexistence solve degenerate".to_string()))?;
    println!("Estar = {}", describe_state(&estar.state));
    let gap = max_component_gap(&estar.state, &scenarios::FIG4_TARGET);
    verdict.check(
        &format!(
            "linear-solve coexistence within {} of (0.0571, 0.7429, 0.1714, 0.4857) (gap {:.2e})",
            scenarios::STATE_TOL,
            gap
        ),
        gap < scenarios::STATE_TOL,
    );
    let traj = integrate_checked(s.variant, &s.params, &s.x0, &s.integrator_config())?;
    let final_state = traj.final_state();
    let gap = max_component_gap(&final_state, &scenarios::FIG4_TARGET);
    println!("final state {}", describe_state(&final_state));
    verdict.check(
        &format!("integration settles on the coexistence point (gap {gap:.2e})"),
        gap < scenarios::STATE_TOL,
    );
    verdict.finish()
}
