use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use schwinger::closed_form::{
    closed_moments, phase_sensitivity, uncertainty_bound_check, BoundCheck,
};
use schwinger::oracle::{oracle_state_moments, OracleConfig, OracleDiagnostic};
use schwinger::output::{fmt_f64, write_output};
use schwinger::params::normalize_angle;
use schwinger::surface::surface_document;
use schwinger::sweep::{rows_to_csv, run_sweep, SweepMode, SweepParameter, SweepSpec};
use schwinger::verify::{run_verify, VerifyConfig};
use schwinger::{AngularParams, Error, MomentSet, SqueezeParams, StateParams};

#[derive(Parser, Debug)]
#[command(
    author,
    version,
    about = "Schwinger-boson coherent and squeezed state moments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Means and variances of Jx, Jy, Jz.
    Moments {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = Engine::Closed)]
        engine: Engine,
        #[command(flatten)]
        out: OutArgs,
    },
    /// dJx, dJy and their product along a one-parameter grid.
    Sweep {
        #[arg(long)]
        mode: SweepMode,
        #[arg(long, default_value = "r")]
        parameter: SweepParameter,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Single-mode phase 2θ∓ − φ± of the squeezed mode.
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<f64>,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Mean-surface cloud and uncertainty ellipsoids as JSON.
    Surface {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 9)]
        samples_m: usize,
        #[arg(long, default_value_t = 16)]
        samples_theta: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Seeded closed-form versus oracle comparison.
    Verify {
        #[arg(long, default_value_t = 4.0)]
        j_max: f64,
        #[arg(long, default_value_t = 1.0)]
        r_max: f64,
        #[arg(long, default_value_t = 50)]
        draws: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Minimum detectable phase dJy / |<Jx>|.
    Sensitivity {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct StateArgs {
    #[arg(long)]
    j: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    m: f64,
    #[arg(long, allow_hyphen_values = true)]
    theta_plus: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta_minus: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    r_plus: f64,
    #[arg(long)]
    r_minus: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi_plus: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi_minus: f64,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Engine {
    Closed,
    Oracle,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Verification,
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(format!("i/o error: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

impl StateArgs {
    fn params(&self) -> Result<StateParams, Failure> {
        let angular = AngularParams::new(
            self.j,
            self.m,
            self.theta_plus.unwrap_or(0.0),
            self.theta_minus.unwrap_or(0.0),
        )?;
        let squeeze = SqueezeParams::new(
            self.r_plus,
            self.phi_plus,
            self.r_minus.unwrap_or(0.0),
            self.phi_minus,
        )?;
        Ok(StateParams::new(angular, squeeze)?)
    }

    /// Resolve the sweep state for `mode`, applying `delta` if given.
    fn sweep_params(mut self, mode: SweepMode, delta: Option<f64>) -> Result<StateParams, Failure> {
        match mode {
            SweepMode::SinglePlus => {
                if self.r_minus.is_some_and(|r| r != 0.0) {
                    return Err(Failure::Input(
                        "single_plus does not squeeze the - mode".into(),
                    ));
                }
                if let Some(d) = delta {
                    self.theta_minus = Some(resolve_theta(
                        "theta-minus",
                        self.theta_minus,
                        d,
                        self.phi_plus,
                    )?);
                }
            }
            SweepMode::SingleMinus => {
                if self.r_plus != 0.0 {
                    return Err(Failure::Input(
                        "single_minus does not squeeze the + mode".into(),
                    ));
                }
                if let Some(d) = delta {
                    self.theta_plus = Some(resolve_theta(
                        "theta-plus",
                        self.theta_plus,
                        d,
                        self.phi_minus,
                    )?);
                }
            }
            SweepMode::DoubleSpecial | SweepMode::DoubleSpecialCrossTerm => {
                if delta.is_some() {
                    return Err(Failure::Input(
                        "--delta applies to single-mode sweeps only".into(),
                    ));
                }
                self.r_minus.get_or_insert(self.r_plus);
            }
        }
        self.params()
    }
}

/// `θ = (δ + φ)/2`, checked against an explicitly given `θ`.
fn resolve_theta(name: &str, given: Option<f64>, delta: f64, phi: f64) -> Result<f64, Failure> {
    let theta = 0.5 * (delta + phi);
    if let Some(t) = given {
        if normalize_angle(2.0 * (t - theta)).abs() > 1e-12 {
            return Err(Failure::Input(format!(
                "--{name} {t} is inconsistent with --delta {delta}"
            )));
        }
        return Ok(t);
    }
    Ok(theta)
}

fn emit(out: &OutArgs, bytes: String) -> CmdResult {
    write_output(out.out.as_deref(), bytes.as_bytes())?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

fn csv_vector(out: &mut String, label: &str, v: &[f64]) {
    let cols: Vec<_> = v.iter().map(|&x| fmt_f64(x)).collect();
    let _ = writeln!(out, "{label},{}", cols.join(","));
}

#[derive(Serialize)]
struct MomentsReport {
    params: StateParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed: Option<MomentSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<BoundCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleDiagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    discrepancy: Option<f64>,
}

fn cmd_moments(state: StateArgs, engine: Engine, out: &OutArgs) -> CmdResult {
    let params = state.params()?;
    let closed = match engine {
        Engine::Oracle => None,
        _ => Some(closed_moments(&params)?),
    };
    let oracle = match engine {
        Engine::Closed => None,
        _ => {
            let (cutoff, om) = oracle_state_moments(&params, &OracleConfig::default())?;
            Some(OracleDiagnostic::new(cutoff, om))
        }
    };
    let discrepancy = match (&closed, &oracle) {
        (Some(c), Some(o)) => Some(o.moments.max_abs_diff(c)),
        _ => None,
    };
    let report = MomentsReport {
        params,
        closed,
        bound: closed.as_ref().map(uncertainty_bound_check),
        oracle,
        discrepancy,
    };
    let text = match out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("quantity,x,y,z\n");
            if let Some(c) = &report.closed {
                csv_vector(&mut s, "closed_mean", &c.mean);
                csv_vector(&mut s, "closed_variance", &c.variance);
            }
            if let Some(o) = &report.oracle {
                csv_vector(&mut s, "oracle_mean", &o.moments.mean);
                csv_vector(&mut s, "oracle_variance", &o.moments.variance);
            }
            s
        }
    };
    emit(out, text)
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    mode: SweepMode,
    parameter: SweepParameter,
    rows: &'a [schwinger::sweep::SweepRow],
}

fn cmd_sweep(spec: SweepSpec, mode: SweepMode, out: &OutArgs) -> CmdResult {
    let rows = run_sweep(&spec, mode)?;
    let text = match out.format.unwrap_or(Format::Csv) {
        Format::Csv => rows_to_csv(spec.parameter, &rows),
        Format::Json => to_json(&SweepDocument {
            mode,
            parameter: spec.parameter,
            rows: &rows,
        }),
    };
    emit(out, text)
}

fn cmd_surface(
    state: StateArgs,
    samples_m: usize,
    samples_theta: usize,
    out: &OutArgs,
) -> CmdResult {
    if out.format == Some(Format::Csv) {
        return Err(Failure::Input("surface output is JSON only".into()));
    }
    let doc = surface_document(
        &state.params()?,
        samples_m,
        samples_theta,
        &OracleConfig::default(),
    )?;
    emit(out, to_json(&doc))
}

fn cmd_verify(cfg: VerifyConfig, out: &OutArgs) -> CmdResult {
    let report = run_verify(&cfg)?;
    let text = match out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("family,draws,max_deviation,max_cutoff\n");
            for f in &report.families {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    f.family.name(),
                    f.draws,
                    fmt_f64(f.max_deviation),
                    f.max_cutoff
                );
            }
            s
        }
    };
    emit(out, text)?;
    if report.passed {
        Ok(())
    } else {
        eprintln!(
            "verification failed: max deviation {:e} exceeds tol {:e}",
            report.max_deviation(),
            report.tol
        );
        Err(Failure::Verification)
    }
}

#[derive(Serialize)]
struct SensitivityReport {
    delta_phi: f64,
    #[serde(rename = "dJy")]
    d_jy: f64,
    mean_jx: f64,
}

fn cmd_sensitivity(state: StateArgs, out: &OutArgs) -> CmdResult {
    let params = state.params()?;
    let ms = match closed_moments(&params) {
        Ok(ms) => ms,
        Err(Error::NoClosedForm(_)) => oracle_state_moments(&params, &OracleConfig::default())?
            .1
            .moment_set(),
        Err(e) => return Err(e.into()),
    };
    let report = SensitivityReport {
        delta_phi: phase_sensitivity(&ms)?,
        d_jy: ms.variance[1].sqrt(),
        mean_jx: ms.mean[0],
    };
    let text = match out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => format!(
            "delta_phi,dJy,mean_jx\n{},{},{}\n",
            fmt_f64(report.delta_phi),
            fmt_f64(report.d_jy),
            fmt_f64(report.mean_jx)
        ),
    };
    emit(out, text)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Moments { state, engine, out } => cmd_moments(state, engine, &out),
        Command::Sweep {
            mode,
            parameter,
            from,
            to,
            steps,
            delta,
            state,
            out,
        } => {
            let spec = SweepSpec {
                parameter,
                from,
                to,
                steps,
                fixed: state.sweep_params(mode, delta)?,
            };
            cmd_sweep(spec, mode, &out)
        }
        Command::Surface {
            state,
            samples_m,
            samples_theta,
            out,
        } => cmd_surface(state, samples_m, samples_theta, &out),
        Command::Verify {
            j_max,
            r_max,
            draws,
            tol,
            seed,
            out,
        } => cmd_verify(
            VerifyConfig {
                j_max,
                r_max,
                draws,
                tol,
                seed,
                ..VerifyConfig::default()
            },
            &out,
        ),
        Command::Sensitivity { state, out } => cmd_sensitivity(state, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
