//! Phase-space geometry: the locus of the mean vector, axis-aligned
//! uncertainty ellipsoids around it, their X–Y projections, and the
//! squeeze strength that minimizes `ΔJy`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::closed_form::{sams1_xy_variances, sams2_means, MomentSet};
use crate::error::{Error, Result};
use crate::params::{AngularParams, SqueezeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipsoidLabel {
    MeanSurface,
    Uncertainty,
}

/// Axis-aligned ellipsoid in `(Jx, Jy, Jz)` space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipsoidDescriptor {
    pub label: EllipsoidLabel,
    pub center: [f64; 3],
    pub semi_axes: [f64; 3],
}

impl EllipsoidDescriptor {
    /// Radius `√(a² + b² + c²)` of the sphere through the tips of the semi-axes.
    pub fn enclosing_radius(&self) -> f64 {
        self.semi_axes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseDescriptor {
    pub center: [f64; 2],
    pub semi_axes: [f64; 2],
    pub area: f64,
}

/// Ellipsoid centred on the mean with semi-axes `(ΔJx, ΔJy, ΔJz)`.
pub fn uncertainty_ellipsoid(ms: &MomentSet) -> Result<EllipsoidDescriptor> {
    for (axis, &v) in ms.variance.iter().enumerate() {
        if v == 0.0 {
            return Err(Error::DegenerateVariance { axis });
        }
        if !(v > 0.0) {
            return Err(Error::Domain(format!(
                "variance {v} on axis {axis} is not positive"
            )));
        }
    }
    Ok(EllipsoidDescriptor {
        label: EllipsoidLabel::Uncertainty,
        center: ms.mean,
        semi_axes: ms.std_dev(),
    })
}

/// Drop the `z` axis.
pub fn xy_projection(e: &EllipsoidDescriptor) -> EllipseDescriptor {
    let [ax, ay, _] = e.semi_axes;
    EllipseDescriptor {
        center: [e.center[0], e.center[1]],
        semi_axes: [ax, ay],
        area: PI * ax * ay,
    }
}

/// Uniform grid of `n` points from `−j` to `j` with exact endpoints.
fn projection_grid(j: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if i + 1 == n {
            j
        } else {
            (-j + 2.0 * j * i as f64 / (n - 1) as f64).clamp(-j, j)
        }
    })
}

/// Mean vectors on the `(m, Θ)` grid, row-major with `m` outer.
///
/// `m` runs over `samples_m` uniform points in `[−j, j]`, `Θ` over
/// `samples_theta` uniform points in `[0, 2π)` (as `θ₊ = Θ`, `θ₋ = 0`).
/// Squeeze magnitudes enter only through the `Jz` shift
/// `½(sinh²r₊ − sinh²r₋)`.
pub fn mean_surface_cloud(
    j: f64,
    s: &SqueezeParams,
    samples_m: usize,
    samples_theta: usize,
) -> Result<Vec<[f64; 3]>> {
    if !(j > 0.0 && j.is_finite()) {
        return Err(Error::Domain(format!("j = {j} must be positive")));
    }
    if samples_m < 2 || samples_theta < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 samples per axis, got {samples_m} x {samples_theta}"
        )));
    }
    s.validate()?;
    let mut cloud = Vec::with_capacity(samples_m * samples_theta);
    for m in projection_grid(j, samples_m) {
        for k in 0..samples_theta {
            let theta = TAU * k as f64 / samples_theta as f64;
            let p = AngularParams::new(j, m, theta, 0.0)?;
            cloud.push(sams2_means(&p, s.r_plus, s.r_minus)?);
        }
    }
    Ok(cloud)
}

/// The `(m, Θ)` pairs visited by [`mean_surface_cloud`], in the same order.
pub fn surface_grid(j: f64, samples_m: usize, samples_theta: usize) -> Vec<(f64, f64)> {
    projection_grid(j, samples_m)
        .flat_map(|m| (0..samples_theta).map(move |k| (m, TAU * k as f64 / samples_theta as f64)))
        .collect()
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Minimizer of single-mode `ΔJy²(r)` at fixed `(j, m, δ)` on `[r_lo, r_hi]`
/// by golden-section search to `|Δr| ≤ 1e−8`.
///
/// Returns `(r_min, ΔJy²(r_min))`. A minimum on either bracket end is
/// reported as [`Error::NoInteriorMinimum`].
pub fn find_r_min(j: f64, m: f64, delta: f64, r_lo: f64, r_hi: f64) -> Result<(f64, f64)> {
    AngularParams::new(j, m, 0.0, 0.0)?;
    if !(r_lo >= 0.0 && r_lo < r_hi && r_hi.is_finite()) {
        return Err(Error::Domain(format!(
            "bracket [{r_lo}, {r_hi}] must satisfy 0 <= r_lo < r_hi"
        )));
    }
    let f = |r: f64| sams1_xy_variances(j, m, delta, r)[1];
    let (mut a, mut b) = (r_lo, r_hi);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-8 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    let r = 0.5 * (a + b);
    let edge = 1e-6 * (r_hi - r_lo).max(1.0);
    if r - r_lo <= edge || r_hi - r <= edge {
        return Err(Error::NoInteriorMinimum {
            lo: r_lo,
            hi: r_hi,
            at: if r - r_lo <= edge { r_lo } else { r_hi },
        });
    }
    Ok((r, f(r)))
}
