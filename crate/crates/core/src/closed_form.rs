//! Closed-form first and second moments of `Jx`, `Jy`, `Jz` for coherent
//! and squeezed Schwinger states, the Heisenberg bound and the
//! interferometric phase sensitivity.
//!
//! Conventions: `J₊ = a₊†a₋`, `Jz = ½(n₊ − n₋)`, `α± = √(j ± m) e^{iθ±}`,
//! states written in displacement-first order `D(α) S(ξ) |0,0⟩` with
//! `S(ξ) = exp[½(ξ a†² − ξ* a²)]`. With these conventions the transverse
//! mean is `⟨J₊⟩ = α₊* α₋`, so `⟨Jy⟩ = −√(j² − m²) sin Θ` for `Θ = θ₊ − θ₋`.
//!
//! Every expression is arranged so that `r = 0` reproduces the coherent
//! values bit for bit (`sinh 0 = 0` multiplies every squeeze correction).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{AngularParams, StateParams};

/// Means and variances of the three angular momentum components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean: [f64; 3],
    pub variance: [f64; 3],
}

impl MomentSet {
    pub fn std_dev(&self) -> [f64; 3] {
        self.variance.map(f64::sqrt)
    }

    /// `ΔJx² + ΔJy² + ΔJz²`.
    pub fn total_variance(&self) -> f64 {
        self.variance.iter().sum()
    }

    pub fn mean_norm(&self) -> f64 {
        self.mean.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest absolute difference over all six numbers.
    pub fn max_abs_diff(&self, other: &MomentSet) -> f64 {
        self.mean
            .iter()
            .chain(&self.variance)
            .zip(other.mean.iter().chain(&other.variance))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_r(r: f64) -> Result<()> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::Domain(format!(
            "squeeze magnitude r = {r} must be non-negative"
        )));
    }
    Ok(())
}

fn transverse_mean(p: &AngularParams) -> [f64; 2] {
    let t = p.transverse();
    let theta = p.theta();
    [t * theta.cos(), 0.0 - t * theta.sin()]
}

/// Coherent state: mean `(√(j²−m²) cos Θ, −√(j²−m²) sin Θ, m)`, all variances `j/2`.
pub fn samc_moments(p: &AngularParams) -> Result<MomentSet> {
    p.validate()?;
    let [x, y] = transverse_mean(p);
    let half_j = 0.5 * p.j;
    Ok(MomentSet {
        mean: [x, y, p.m],
        variance: [half_j; 3],
    })
}

/// Transverse variances `(ΔJx², ΔJy²)` under `+`-mode squeezing, as a
/// function of `δ = 2θ₋ − φ` only. No domain checks.
pub fn sams1_xy_variances(j: f64, m: f64, delta: f64, r: f64) -> [f64; 2] {
    let n_minus = j - m;
    let (s, c) = (r.sinh(), r.cosh());
    let common = 0.5 * s * (1.0 + 2.0 * n_minus);
    let cross = n_minus * c * delta.cos();
    [
        0.5 * j + 0.5 * s * (common + cross),
        0.5 * j + 0.5 * s * (common - cross),
    ]
}

/// Single-mode squeezing of the `+` mode with `ξ₊ = r e^{iφ}`.
///
/// Uses `δ = 2θ₋ − φ` and `η = θ₊ − φ/2`.
pub fn sams1_moments(p: &AngularParams, r: f64, phi: f64) -> Result<MomentSet> {
    p.validate()?;
    check_r(r)?;
    let (n_plus, _) = p.populations();
    let (s, c) = (r.sinh(), r.cosh());
    let delta = 2.0 * p.theta_minus - phi;
    let eta = p.theta_plus - 0.5 * phi;
    let [var_x, var_y] = sams1_xy_variances(p.j, p.m, delta, r);
    // (n₊/4)(e^{2r}cos²η + e^{−2r}sin²η) + n₋/4 = j/2 + (n₊/2) s (s + c cos 2η)
    let var_z = 0.5 * p.j + 0.5 * n_plus * s * (s + c * (2.0 * eta).cos()) + 0.5 * s * s * c * c;

    let [x, y] = transverse_mean(p);
    Ok(MomentSet {
        mean: [x, y, p.m + 0.5 * s * s],
        variance: [var_x, var_y, var_z],
    })
}

/// Single-mode squeezing of the `−` mode with `ξ₋ = r e^{iφ}`.
///
/// Obtained from [`sams1_moments`] by exchanging the modes, under which
/// `Jx → Jx`, `Jy → −Jy`, `Jz → −Jz`; the relevant phases become
/// `δ = 2θ₊ − φ` and `η = θ₋ − φ/2`.
pub fn sams1_moments_minus_mode(p: &AngularParams, r: f64, phi: f64) -> Result<MomentSet> {
    p.validate()?;
    let swapped = sams1_moments(&p.mode_swapped(), r, phi)?;
    let s = r.sinh();
    let [x, y] = transverse_mean(p);
    Ok(MomentSet {
        mean: [x, y, p.m - 0.5 * s * s],
        variance: swapped.variance,
    })
}

/// Means under independent squeezing of both modes (any `ξ±`).
pub fn sams2_means(p: &AngularParams, r_plus: f64, r_minus: f64) -> Result<[f64; 3]> {
    p.validate()?;
    check_r(r_plus)?;
    check_r(r_minus)?;
    let [x, y] = transverse_mean(p);
    let (sp, sm) = (r_plus.sinh(), r_minus.sinh());
    Ok([x, y, p.m + 0.5 * (sp * sp - sm * sm)])
}

fn special_check(j: f64, m: f64, r: f64) -> Result<()> {
    AngularParams {
        j,
        m,
        theta_plus: 0.0,
        theta_minus: 0.0,
    }
    .validate()?;
    check_r(r)
}

/// Variances for equal squeezing of both modes, `ξ₊ = ξ₋ = r`.
///
/// `ΔJx²` and `ΔJz²` carry the cross-mode term `sinh²r (1 + cosh 2r)`; in
/// `ΔJy²` the same term enters with opposite sign and cancels the
/// `⟨n₊⟩⟨n₋⟩`-type contribution, so it is absent. See
/// [`sams2_variances_special_cross_term`] for the variant that keeps it.
pub fn sams2_variances_special(
    j: f64,
    m: f64,
    theta_plus: f64,
    theta_minus: f64,
    r: f64,
) -> Result<[f64; 3]> {
    special_check(j, m, r)?;
    let (s, c) = (r.sinh(), r.cosh());
    let (n_plus, n_minus) = (j + m, j - m);
    let (cp, cm) = ((2.0 * theta_plus).cos(), (2.0 * theta_minus).cos());
    let pair = s * s * (1.0 + (2.0 * r).cosh());

    let var_x = 0.5 * (j + s * (s + c * cp) * n_plus + s * (s + c * cm) * n_minus + pair);
    let var_y = 0.5 * (j + s * (s - c * cp) * n_plus + s * (s - c * cm) * n_minus);
    let var_z = 0.5 * j
        + 0.5 * n_plus * s * (s + c * cp)
        + 0.5 * n_minus * s * (s + c * cm)
        + s * s * c * c;
    Ok([var_x, var_y, var_z])
}

/// Equal double-mode squeezing variances with the cross-mode term
/// `sinh²r (1 + cosh 2r)` kept in `ΔJy²` as well.
///
/// This is not the variance of the state (the Fock oracle disagrees in
/// `ΔJy²`); it is kept for comparison with curves drawn from it.
pub fn sams2_variances_special_cross_term(
    j: f64,
    m: f64,
    theta_plus: f64,
    theta_minus: f64,
    r: f64,
) -> Result<[f64; 3]> {
    let mut v = sams2_variances_special(j, m, theta_plus, theta_minus, r)?;
    let s = r.sinh();
    v[1] += 0.5 * s * s * (1.0 + (2.0 * r).cosh());
    Ok(v)
}

/// Closed-form moments for any state that has one: coherent, single-mode
/// squeezed in either mode, or equally squeezed in both modes with zero
/// squeeze phases.
pub fn closed_moments(sp: &StateParams) -> Result<MomentSet> {
    sp.validate()?;
    let p = &sp.angular;
    let s = &sp.squeeze;
    match (s.r_plus > 0.0, s.r_minus > 0.0) {
        (false, false) => samc_moments(p),
        (true, false) => sams1_moments(p, s.r_plus, s.phi_plus),
        (false, true) => sams1_moments_minus_mode(p, s.r_minus, s.phi_minus),
        (true, true) => {
            if s.r_plus == s.r_minus && s.phi_plus == 0.0 && s.phi_minus == 0.0 {
                let mean = sams2_means(p, s.r_plus, s.r_minus)?;
                let variance =
                    sams2_variances_special(p.j, p.m, p.theta_plus, p.theta_minus, s.r_plus)?;
                Ok(MomentSet { mean, variance })
            } else {
                Err(Error::NoClosedForm(
                    "double-mode variances need r+ = r- and zero squeeze phases; \
                     use the oracle engine"
                        .into(),
                ))
            }
        }
    }
}

/// Result of checking `ΔJx² ΔJy² ≥ ¼⟨Jz⟩²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

impl BoundCheck {
    pub fn tolerance(&self) -> f64 {
        1e-9 * self.rhs.max(1.0)
    }

    /// True when the bound holds with equality (within tolerance).
    pub fn saturated(&self) -> bool {
        (self.lhs - self.rhs).abs() <= self.tolerance()
    }
}

pub fn uncertainty_bound_check(ms: &MomentSet) -> BoundCheck {
    let lhs = ms.variance[0] * ms.variance[1];
    let rhs = 0.25 * ms.mean[2] * ms.mean[2];
    let tol = 1e-9 * rhs.max(1.0);
    BoundCheck {
        lhs,
        rhs,
        satisfied: lhs >= rhs - tol,
    }
}

/// Minimum detectable phase `ΔΦ = ΔJy / |⟨Jx⟩|`.
pub fn phase_sensitivity(ms: &MomentSet) -> Result<f64> {
    let jx = ms.mean[0].abs();
    if jx <= 1e-12 * ms.mean_norm().max(1.0) {
        return Err(Error::DegenerateGeometry(format!(
            "<Jx> = {} vanishes; phase sensitivity undefined",
            ms.mean[0]
        )));
    }
    Ok(ms.variance[1].sqrt() / jx)
}
