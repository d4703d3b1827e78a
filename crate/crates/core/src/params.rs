//! Parameter maps between the angular-momentum description `(j, m, θ±)`
//! and the two bosonic coherent amplitudes `α±`.
//!
//! The populations fix `|α±|² = j ± m`; the phases of the amplitudes are
//! carried over unchanged. Squeezing is described per mode by `ξ± = r± e^{iφ±}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Map an angle to its representative in `(−π, π]`.
pub fn normalize_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Complex amplitudes of the `+` and `−` Schwinger bosons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentAmplitudes {
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
}

impl CoherentAmplitudes {
    pub fn new(alpha_plus: Complex64, alpha_minus: Complex64) -> Self {
        Self {
            alpha_plus,
            alpha_minus,
        }
    }

    /// Mean total boson number `|α₊|² + |α₋|²`.
    pub fn total_number(&self) -> f64 {
        self.alpha_plus.norm_sqr() + self.alpha_minus.norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.alpha_plus.is_finite() && self.alpha_minus.is_finite()
    }
}

/// Angular-momentum parametrization of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularParams {
    pub j: f64,
    pub m: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
}

impl AngularParams {
    /// Validates `j ≥ 0`, `|m| ≤ j` and normalizes both phases.
    pub fn new(j: f64, m: f64, theta_plus: f64, theta_minus: f64) -> Result<Self> {
        let p = Self {
            j,
            m,
            theta_plus: normalize_angle(theta_plus),
            theta_minus: normalize_angle(theta_minus),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j.is_finite() && self.m.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite j = {} or m = {}",
                self.j, self.m
            )));
        }
        if self.j < 0.0 {
            return Err(Error::Domain(format!("j = {} is negative", self.j)));
        }
        if self.m.abs() > self.j {
            return Err(Error::Domain(format!(
                "unphysical projection |m| = {} > j = {}",
                self.m.abs(),
                self.j
            )));
        }
        if !(self.theta_plus.is_finite() && self.theta_minus.is_finite()) {
            return Err(Error::Domain("non-finite coherent phase".into()));
        }
        Ok(())
    }

    /// Relative phase `Θ = θ₊ − θ₋`, normalized to `(−π, π]`.
    pub fn theta(&self) -> f64 {
        normalize_angle(self.theta_plus - self.theta_minus)
    }

    /// Transverse radius `√(j² − m²)` of the mean vector.
    pub fn transverse(&self) -> f64 {
        ((self.j - self.m) * (self.j + self.m)).max(0.0).sqrt()
    }

    /// Populations `(n₊, n₋) = (j + m, j − m)`.
    pub fn populations(&self) -> (f64, f64) {
        (self.j + self.m, self.j - self.m)
    }

    /// Exchange the roles of the two modes: `m → −m`, `θ₊ ↔ θ₋`.
    pub fn mode_swapped(&self) -> Self {
        Self {
            j: self.j,
            m: -self.m,
            theta_plus: self.theta_minus,
            theta_minus: self.theta_plus,
        }
    }
}

/// Per-mode squeeze parameters `ξ± = r± e^{iφ±}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SqueezeParams {
    pub r_plus: f64,
    pub phi_plus: f64,
    pub r_minus: f64,
    pub phi_minus: f64,
}

impl SqueezeParams {
    pub fn new(r_plus: f64, phi_plus: f64, r_minus: f64, phi_minus: f64) -> Result<Self> {
        let s = Self {
            r_plus,
            phi_plus: normalize_angle(phi_plus),
            r_minus,
            phi_minus: normalize_angle(phi_minus),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn plus(r: f64, phi: f64) -> Result<Self> {
        Self::new(r, phi, 0.0, 0.0)
    }

    pub fn minus(r: f64, phi: f64) -> Result<Self> {
        Self::new(0.0, 0.0, r, phi)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in [("r_plus", self.r_plus), ("r_minus", self.r_minus)] {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::Domain(format!(
                    "squeeze magnitude {name} = {r} must be finite and non-negative"
                )));
            }
        }
        if !(self.phi_plus.is_finite() && self.phi_minus.is_finite()) {
            return Err(Error::Domain("non-finite squeeze phase".into()));
        }
        Ok(())
    }

    pub fn xi_plus(&self) -> Complex64 {
        Complex64::from_polar(self.r_plus, self.phi_plus)
    }

    pub fn xi_minus(&self) -> Complex64 {
        Complex64::from_polar(self.r_minus, self.phi_minus)
    }

    pub fn is_none(&self) -> bool {
        self.r_plus == 0.0 && self.r_minus == 0.0
    }

    pub fn mode_swapped(&self) -> Self {
        Self {
            r_plus: self.r_minus,
            phi_plus: self.phi_minus,
            r_minus: self.r_plus,
            phi_minus: self.phi_plus,
        }
    }
}

/// Full physical-space parametrization of the state
/// `D₊(α₊) D₋(α₋) S₊(ξ₊) S₋(ξ₋) |0,0⟩` with `α±` derived from `angular`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    pub angular: AngularParams,
    pub squeeze: SqueezeParams,
}

impl StateParams {
    pub fn new(angular: AngularParams, squeeze: SqueezeParams) -> Result<Self> {
        angular.validate()?;
        squeeze.validate()?;
        Ok(Self { angular, squeeze })
    }

    pub fn coherent(angular: AngularParams) -> Self {
        Self {
            angular,
            squeeze: SqueezeParams::none(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.angular.validate()?;
        self.squeeze.validate()
    }

    pub fn amplitudes(&self) -> Result<CoherentAmplitudes> {
        amplitudes_from_angular(&self.angular)
    }
}

/// `α± = √(j ± m) e^{iθ±}`.
pub fn amplitudes_from_angular(p: &AngularParams) -> Result<CoherentAmplitudes> {
    p.validate()?;
    let (n_plus, n_minus) = p.populations();
    Ok(CoherentAmplitudes {
        alpha_plus: Complex64::from_polar(n_plus.sqrt(), p.theta_plus),
        alpha_minus: Complex64::from_polar(n_minus.sqrt(), p.theta_minus),
    })
}

fn phase_or_zero(z: Complex64) -> f64 {
    if z.norm_sqr() == 0.0 {
        0.0
    } else {
        z.arg()
    }
}

/// Inverse of [`amplitudes_from_angular`]: `j = (|α₊|² + |α₋|²)/2`,
/// `m = (|α₊|² − |α₋|²)/2`. A vanishing amplitude has phase 0.
pub fn angular_from_amplitudes(a: &CoherentAmplitudes) -> AngularParams {
    let n_plus = a.alpha_plus.norm_sqr();
    let n_minus = a.alpha_minus.norm_sqr();
    let j = 0.5 * (n_plus + n_minus);
    // |m| ≤ j can fail by one ulp after rounding
    let m = (0.5 * (n_plus - n_minus)).clamp(-j, j);
    AngularParams {
        j,
        m,
        theta_plus: phase_or_zero(a.alpha_plus),
        theta_minus: phase_or_zero(a.alpha_minus),
    }
}

fn squeeze_mode_forward(alpha: Complex64, r: f64, phi: f64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, phi);
    alpha * r.cosh() - rot * alpha.conj() * r.sinh()
}

fn squeeze_mode_inverse(gamma: Complex64, r: f64, phi: f64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, phi);
    gamma * r.cosh() + rot * gamma.conj() * r.sinh()
}

/// Amplitudes `γ±` of the squeeze-first ordering `S(ξ) D(γ) |0⟩` that
/// produce the same state as the displacement-first ordering `D(α) S(ξ) |0⟩`:
/// `γ = cosh r · α − e^{iφ} sinh r · α*`.
pub fn squeeze_first_amplitudes(
    alpha: &CoherentAmplitudes,
    s: &SqueezeParams,
) -> CoherentAmplitudes {
    CoherentAmplitudes {
        alpha_plus: squeeze_mode_forward(alpha.alpha_plus, s.r_plus, s.phi_plus),
        alpha_minus: squeeze_mode_forward(alpha.alpha_minus, s.r_minus, s.phi_minus),
    }
}

/// Convert squeeze-first amplitudes `γ±` to the canonical displacement-first
/// amplitudes `α±`, so that `S(ξ) D(γ) = D(α) S(ξ)`.
///
/// Per mode this solves `cosh r · α − e^{iφ} sinh r · α* = γ`; the real
/// 2×2 system has determinant `cosh² r − sinh² r = 1` and its inverse is
/// `α = cosh r · γ + e^{iφ} sinh r · γ*`.
pub fn reorder_to_displacement_first(
    gamma: &CoherentAmplitudes,
    s: &SqueezeParams,
) -> CoherentAmplitudes {
    CoherentAmplitudes {
        alpha_plus: squeeze_mode_inverse(gamma.alpha_plus, s.r_plus, s.phi_plus),
        alpha_minus: squeeze_mode_inverse(gamma.alpha_minus, s.r_minus, s.phi_minus),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalize_angle_half_open_interval() {
        assert_eq!(normalize_angle(PI), PI);
        assert!((normalize_angle(-PI) - PI).abs() < 1e-15);
        assert!((normalize_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(normalize_angle(0.25), 0.25);
    }

    #[test]
    fn amplitudes_examples() {
        let a = amplitudes_from_angular(&AngularParams::new(1.0, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(a.alpha_plus, c(1.0, 0.0));
        assert_eq!(a.alpha_minus, c(1.0, 0.0));

        let a =
            amplitudes_from_angular(&AngularParams::new(50.0, -50.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(a.alpha_plus, c(0.0, 0.0));
        assert_eq!(a.alpha_minus, c(10.0, 0.0));

        let a =
            amplitudes_from_angular(&AngularParams::new(2.0, 1.0, PI / 2.0, 0.0).unwrap()).unwrap();
        assert!((a.alpha_plus - c(0.0, 3f64.sqrt())).norm() < 1e-15);
        assert_eq!(a.alpha_minus, c(1.0, 0.0));
    }

    #[test]
    fn rejects_unphysical_projection() {
        assert!(matches!(
            AngularParams::new(1.0, 2.0, 0.0, 0.0),
            Err(Error::Domain(_))
        ));
        let raw = AngularParams {
            j: 1.0,
            m: -1.5,
            theta_plus: 0.0,
            theta_minus: 0.0,
        };
        assert!(amplitudes_from_angular(&raw).is_err());
        assert!(SqueezeParams::new(-0.1, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn angular_examples() {
        let p = angular_from_amplitudes(&CoherentAmplitudes::new(c(1.0, 0.0), c(1.0, 0.0)));
        assert_eq!(
            (p.j, p.m, p.theta_plus, p.theta_minus),
            (1.0, 0.0, 0.0, 0.0)
        );
        let p = angular_from_amplitudes(&CoherentAmplitudes::new(c(0.0, 0.0), c(10.0, 0.0)));
        assert_eq!(
            (p.j, p.m, p.theta_plus, p.theta_minus),
            (50.0, -50.0, 0.0, 0.0)
        );
    }

    #[test]
    fn phase_shift_by_full_turn_is_invisible() {
        let p = AngularParams::new(3.0, 1.0, 0.4, -1.1).unwrap();
        let q = AngularParams::new(3.0, 1.0, 0.4 + 2.0 * PI, -1.1).unwrap();
        let a = amplitudes_from_angular(&p).unwrap();
        let b = amplitudes_from_angular(&q).unwrap();
        assert!((a.alpha_plus - b.alpha_plus).norm() < 1e-14);
        assert_eq!(a.alpha_minus, b.alpha_minus);
    }

    #[test]
    fn reorder_examples() {
        let gamma = CoherentAmplitudes::new(c(0.3, -1.2), c(2.0, 0.5));
        let s = SqueezeParams::none();
        assert_eq!(reorder_to_displacement_first(&gamma, &s), gamma);

        // forward relation at α = 1, r = 1, φ = 0 gives γ = cosh 1 − sinh 1
        let s = SqueezeParams::plus(1.0, 0.0).unwrap();
        let gamma = CoherentAmplitudes::new(c(1f64.cosh() - 1f64.sinh(), 0.0), c(0.0, 0.0));
        let alpha = reorder_to_displacement_first(&gamma, &s);
        assert!((alpha.alpha_plus - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn round_trip_thousand_draws() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let j = rng.random_range(0.0..100.0);
            let m = rng.random_range(-j..=j);
            let p = AngularParams::new(j, m, rng.random_range(-PI..PI), rng.random_range(-PI..PI))
                .unwrap();
            let q = angular_from_amplitudes(&amplitudes_from_angular(&p).unwrap());
            worst = worst.max((q.j - p.j).abs() / p.j.max(1e-300));
            worst = worst.max((q.m - p.m).abs() / p.j.max(1e-300));
        }
        assert!(worst <= 1e-12, "worst relative error {worst}");
    }

    proptest! {
        #[test]
        fn amplitude_round_trip(
            re_p in -10.0f64..10.0, im_p in -10.0f64..10.0,
            re_m in -10.0f64..10.0, im_m in -10.0f64..10.0,
        ) {
            let a = CoherentAmplitudes::new(c(re_p, im_p), c(re_m, im_m));
            let p = angular_from_amplitudes(&a);
            let b = amplitudes_from_angular(&p).unwrap();
            let scale = a.total_number().max(1.0);
            prop_assert!((a.alpha_plus - b.alpha_plus).norm_sqr() <= 1e-24 * scale * scale + 1e-24);
            prop_assert!((a.alpha_minus - b.alpha_minus).norm() <= 1e-12 * scale);
        }

        #[test]
        fn reorder_inverts_forward_relation(
            re in -8.0f64..8.0, im in -8.0f64..8.0,
            r in 0.0f64..2.5, phi in -PI..PI,
        ) {
            let alpha = CoherentAmplitudes::new(c(re, im), c(im, -re));
            let s = SqueezeParams::new(r, phi, 0.5 * r, -phi).unwrap();
            let back = reorder_to_displacement_first(&squeeze_first_amplitudes(&alpha, &s), &s);
            let scale = 1.0 + alpha.alpha_plus.norm() * (2.0 * r).exp();
            prop_assert!((back.alpha_plus - alpha.alpha_plus).norm() <= 1e-12 * scale);
            prop_assert!((back.alpha_minus - alpha.alpha_minus).norm() <= 1e-12 * scale);
        }
    }
}
