//! Seeded oracle-versus-closed-form equivalence runs.
//!
//! Draws come from `ChaCha8Rng::seed_from_u64(seed)` in a fixed order:
//! family by family, draw by draw, each draw consuming `j`, `m`, `θ₊`,
//! `θ₋`, then the family's squeeze parameters. The same seed therefore
//! always yields the same parameter sets and the same report.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closed_form::{closed_moments, sams2_means};
use crate::error::{Error, Result};
use crate::oracle::{cutoff_floor, oracle_state_moments, OracleConfig};
use crate::params::{amplitudes_from_angular, AngularParams, SqueezeParams, StateParams};

/// Largest `j` accepted by [`run_verify`].
pub const VERIFY_J_MAX: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Samc,
    SinglePlus,
    SingleMinus,
    DoubleSpecial,
    DoubleMeans,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Samc,
        Family::SinglePlus,
        Family::SingleMinus,
        Family::DoubleSpecial,
        Family::DoubleMeans,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Samc => "samc",
            Family::SinglePlus => "single_plus",
            Family::SingleMinus => "single_minus",
            Family::DoubleSpecial => "double_special",
            Family::DoubleMeans => "double_means",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub j_max: f64,
    pub r_max: f64,
    pub draws: usize,
    pub tol: f64,
    pub seed: u64,
    pub oracle: OracleConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            j_max: 4.0,
            r_max: 1.0,
            draws: 50,
            tol: 1e-8,
            seed: 7,
            oracle: OracleConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub family: Family,
    pub draws: usize,
    pub max_deviation: f64,
    pub max_cutoff: usize,
    pub worst: Option<StateParams>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub tol: f64,
    pub families: Vec<FamilyReport>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn max_deviation(&self) -> f64 {
        self.families
            .iter()
            .map(|f| f.max_deviation)
            .fold(0.0, f64::max)
    }
}

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-PI..PI)
}

fn magnitude(rng: &mut ChaCha8Rng, r_max: f64) -> f64 {
    rng.random::<f64>() * r_max
}

/// One random parameter set of the given family.
pub fn draw(rng: &mut ChaCha8Rng, family: Family, j_max: f64, r_max: f64) -> Result<StateParams> {
    // j in (0, j_max]
    let j = j_max * (1.0 - rng.random::<f64>());
    let m = rng.random_range(-j..=j);
    let angular = AngularParams::new(j, m, angle(rng), angle(rng))?;
    let squeeze = match family {
        Family::Samc => SqueezeParams::none(),
        Family::SinglePlus => {
            let r = magnitude(rng, r_max);
            SqueezeParams::plus(r, angle(rng))?
        }
        Family::SingleMinus => {
            let r = magnitude(rng, r_max);
            SqueezeParams::minus(r, angle(rng))?
        }
        Family::DoubleSpecial => {
            let r = magnitude(rng, r_max);
            SqueezeParams::new(r, 0.0, r, 0.0)?
        }
        Family::DoubleMeans => {
            let (rp, phi_p) = (magnitude(rng, r_max), angle(rng));
            let (rm, phi_m) = (magnitude(rng, r_max), angle(rng));
            SqueezeParams::new(rp, phi_p, rm, phi_m)?
        }
    };
    StateParams::new(angular, squeeze)
}

/// Closed-form vs oracle deviation for one state, with the cutoff used.
pub fn deviation(sp: &StateParams, family: Family, oracle: &OracleConfig) -> Result<(f64, usize)> {
    let (cutoff, om) = oracle_state_moments(sp, oracle)?;
    let dev = match family {
        Family::DoubleMeans => {
            let mean = sams2_means(&sp.angular, sp.squeeze.r_plus, sp.squeeze.r_minus)?;
            mean.iter()
                .zip(&om.mean)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        }
        _ => om.max_abs_diff(&closed_moments(sp)?),
    };
    Ok((dev, cutoff))
}

fn check_config(cfg: &VerifyConfig) -> Result<()> {
    if !(cfg.j_max > 0.0 && cfg.j_max.is_finite()) {
        return Err(Error::Domain(format!(
            "j_max = {} must be positive",
            cfg.j_max
        )));
    }
    if !(cfg.r_max >= 0.0 && cfg.r_max.is_finite()) {
        return Err(Error::Domain(format!(
            "r_max = {} must be non-negative",
            cfg.r_max
        )));
    }
    if cfg.draws == 0 {
        return Err(Error::Domain("draws must be at least 1".into()));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::Domain(format!("tol = {} must be positive", cfg.tol)));
    }
    if cfg.j_max > VERIFY_J_MAX {
        let worst = |j: f64| -> Result<usize> {
            let a = amplitudes_from_angular(&AngularParams::new(j, j, 0.0, 0.0)?)?;
            Ok(cutoff_floor(&a, &SqueezeParams::plus(cfg.r_max, 0.0)?))
        };
        return Err(Error::CutoffExplosion {
            required: worst(cfg.j_max)?,
            ceiling: worst(VERIFY_J_MAX)?,
        });
    }
    Ok(())
}

/// Run `draws` random states per family and report the largest deviation.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    check_config(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut families = Vec::with_capacity(Family::ALL.len());
    for family in Family::ALL {
        let mut report = FamilyReport {
            family,
            draws: cfg.draws,
            max_deviation: 0.0,
            max_cutoff: 0,
            worst: None,
        };
        for _ in 0..cfg.draws {
            let sp = draw(&mut rng, family, cfg.j_max, cfg.r_max)?;
            let (dev, cutoff) = deviation(&sp, family, &cfg.oracle)?;
            report.max_cutoff = report.max_cutoff.max(cutoff);
            if !(dev <= report.max_deviation) {
                report.max_deviation = dev;
                report.worst = Some(sp);
            }
        }
        families.push(report);
    }
    let passed = families.iter().all(|f| f.max_deviation <= cfg.tol);
    Ok(VerifyReport {
        seed: cfg.seed,
        tol: cfg.tol,
        families,
        passed,
    })
}
