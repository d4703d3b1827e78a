//! One-parameter sweeps of the transverse uncertainties `ΔJx`, `ΔJy` and
//! their product, emitted as CSV or JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::closed_form::{
    sams1_moments, sams1_moments_minus_mode, sams2_variances_special,
    sams2_variances_special_cross_term,
};
use crate::error::{Error, Result};
use crate::output::fmt_f64;
use crate::params::StateParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    R,
    RPlus,
    RMinus,
    M,
    Theta,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::R => "r",
            Self::RPlus => "r_plus",
            Self::RMinus => "r_minus",
            Self::M => "m",
            Self::Theta => "theta",
        }
    }

    fn is_squeeze(self) -> bool {
        matches!(self, Self::R | Self::RPlus | Self::RMinus)
    }
}

impl FromStr for SweepParameter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "r" => Self::R,
            "r_plus" => Self::RPlus,
            "r_minus" => Self::RMinus,
            "m" => Self::M,
            "theta" => Self::Theta,
            other => return Err(format!("unknown sweep parameter '{other}'")),
        })
    }
}

/// Which squeezing family the sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// `+` mode squeezed by `r₊`.
    SinglePlus,
    /// `−` mode squeezed by `r₋`.
    SingleMinus,
    /// Both modes squeezed by the same `r`, zero squeeze phases.
    DoubleSpecial,
    /// As [`SweepMode::DoubleSpecial`] but with the extra `sinh²r(1 + cosh 2r)`
    /// term in `ΔJy²` (see [`sams2_variances_special_cross_term`]).
    DoubleSpecialCrossTerm,
}

impl FromStr for SweepMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "single_plus" => Self::SinglePlus,
            "single_minus" => Self::SingleMinus,
            "double_special" => Self::DoubleSpecial,
            "double_special_cross_term" => Self::DoubleSpecialCrossTerm,
            other => return Err(format!("unknown sweep mode '{other}'")),
        })
    }
}

impl SweepMode {
    fn is_double(self) -> bool {
        matches!(self, Self::DoubleSpecial | Self::DoubleSpecialCrossTerm)
    }
}

/// Grid over one parameter; everything else is taken from `fixed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub fixed: StateParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    #[serde(rename = "dJx")]
    pub d_jx: f64,
    #[serde(rename = "dJy")]
    pub d_jy: f64,
    pub product: f64,
}

impl SweepSpec {
    pub fn validate(&self, mode: SweepMode) -> Result<()> {
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return Err(Error::Domain(format!(
                "sweep range [{}, {}] must be finite with from < to",
                self.from, self.to
            )));
        }
        if self.steps < 2 {
            return Err(Error::Domain(format!(
                "steps = {} must be at least 2",
                self.steps
            )));
        }
        if self.parameter.is_squeeze() && self.from < 0.0 {
            return Err(Error::Domain(format!(
                "squeeze sweep starts at negative r = {}",
                self.from
            )));
        }
        let allowed = match self.parameter {
            SweepParameter::RPlus => mode == SweepMode::SinglePlus,
            SweepParameter::RMinus => mode == SweepMode::SingleMinus,
            _ => true,
        };
        if !allowed {
            return Err(Error::Domain(format!(
                "parameter {} cannot be swept in mode {mode:?}",
                self.parameter.name()
            )));
        }
        self.fixed.validate()
    }

    /// Grid points with exact endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.to - self.from;
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.to
                } else {
                    self.from + span * i as f64 / last as f64
                }
            })
            .collect()
    }

    fn state_at(&self, mode: SweepMode, x: f64) -> StateParams {
        let mut sp = self.fixed;
        match self.parameter {
            SweepParameter::R | SweepParameter::RPlus | SweepParameter::RMinus => match mode {
                SweepMode::SinglePlus => sp.squeeze.r_plus = x,
                SweepMode::SingleMinus => sp.squeeze.r_minus = x,
                _ => {
                    sp.squeeze.r_plus = x;
                    sp.squeeze.r_minus = x;
                }
            },
            SweepParameter::M => sp.angular.m = x,
            SweepParameter::Theta => {
                sp.angular.theta_plus = x;
                sp.angular.theta_minus = x;
            }
        }
        sp
    }
}

fn transverse_variances(sp: &StateParams, mode: SweepMode) -> Result<[f64; 2]> {
    sp.validate()?;
    let p = &sp.angular;
    let s = &sp.squeeze;
    let v = match mode {
        SweepMode::SinglePlus => sams1_moments(p, s.r_plus, s.phi_plus)?.variance,
        SweepMode::SingleMinus => sams1_moments_minus_mode(p, s.r_minus, s.phi_minus)?.variance,
        SweepMode::DoubleSpecial | SweepMode::DoubleSpecialCrossTerm => {
            if s.r_plus != s.r_minus || s.phi_plus != 0.0 || s.phi_minus != 0.0 {
                return Err(Error::Domain(
                    "double_special needs r+ = r- and zero squeeze phases".into(),
                ));
            }
            let f = if mode == SweepMode::DoubleSpecial {
                sams2_variances_special
            } else {
                sams2_variances_special_cross_term
            };
            f(p.j, p.m, p.theta_plus, p.theta_minus, s.r_plus)?
        }
    };
    Ok([v[0], v[1]])
}

/// Evaluate the sweep. Rows follow the grid order.
pub fn run_sweep(spec: &SweepSpec, mode: SweepMode) -> Result<Vec<SweepRow>> {
    spec.validate(mode)?;
    if mode.is_double() && !spec.parameter.is_squeeze() {
        let s = &spec.fixed.squeeze;
        if s.r_plus != s.r_minus {
            return Err(Error::Domain(
                "double_special needs r+ = r- for non-squeeze sweeps".into(),
            ));
        }
    }
    spec.grid()
        .into_iter()
        .map(|x| {
            let [vx, vy] = transverse_variances(&spec.state_at(mode, x), mode)?;
            let (d_jx, d_jy) = (vx.sqrt(), vy.sqrt());
            Ok(SweepRow {
                value: x,
                d_jx,
                d_jy,
                product: d_jx * d_jy,
            })
        })
        .collect()
}

/// CSV with header `<parameter>,dJx,dJy,product` and `\n` line ends.
pub fn rows_to_csv(parameter: SweepParameter, rows: &[SweepRow]) -> String {
    let mut out = format!("{},dJx,dJy,product\n", parameter.name());
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(r.value),
            fmt_f64(r.d_jx),
            fmt_f64(r.d_jy),
            fmt_f64(r.product)
        );
    }
    out
}
