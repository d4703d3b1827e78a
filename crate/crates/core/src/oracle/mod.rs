//! Brute-force reference for every closed form: truncated Fock-space
//! matrices for the two Schwinger bosons, the displacement and squeeze
//! operators as matrix exponentials, the product state
//! `D₊(α₊) D₋(α₋) S₊(ξ₊) S₋(ξ₋) |0,0⟩`, and raw expectation values of
//! `Jx`, `Jy`, `Jz` on it.
//!
//! The joint vector is Kronecker ordered with the `+` mode as the slow
//! index: `ψ[p·n + q] = ψ₊[p] ψ₋[q]`. Viewed as an `n × n` matrix `Ψ`,
//! a lifted operator acts as `(A ⊗ B) ψ ↔ A Ψ Bᵀ`.

mod expm;

pub use expm::expm;

use ndarray::{s, Array1, Array2, ArrayView2};
use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::MomentSet;
use crate::error::{Error, Result};
use crate::params::{CoherentAmplitudes, SqueezeParams, StateParams};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Tolerances and limits of the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Upper bound on the top-decile population of each per-mode state.
    pub tail_tol: f64,
    /// Largest per-mode cutoff the policy may choose.
    pub ceiling: usize,
    /// Bound on `‖U†U − I‖_max` over the lower 80% of levels.
    pub unitarity_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            tail_tol: 1e-10,
            ceiling: 4096,
            unitarity_tol: 1e-8,
        }
    }
}

/// Truncated annihilation operator: `a[i][i+1] = √(i+1)`.
pub fn build_annihilation(n_cut: usize) -> Result<Array2<C>> {
    if n_cut < 2 {
        return Err(Error::Domain(format!("cutoff {n_cut} must be at least 2")));
    }
    let mut a = Array2::zeros((n_cut, n_cut));
    for i in 0..n_cut - 1 {
        a[[i, i + 1]] = C::new(((i + 1) as f64).sqrt(), 0.0);
    }
    Ok(a)
}

fn adjoint(m: &Array2<C>) -> Array2<C> {
    m.t().mapv(|z| z.conj())
}

/// Number of levels counted as "lower" for unitarity and residual gates.
fn lower_levels(n: usize) -> usize {
    ((4 * n) / 5).max(1)
}

/// First retained level of the top decile.
fn top_decile_start(n: usize) -> usize {
    n - n.div_ceil(10)
}

/// `‖U†U − I‖_max` restricted to the lower 80% of levels.
pub fn unitarity_defect(u: &Array2<C>) -> f64 {
    let k = lower_levels(u.nrows());
    let uu = adjoint(u).dot(u);
    let mut worst: f64 = 0.0;
    for i in 0..k {
        for l in 0..k {
            let target = if i == l { ONE } else { ZERO };
            worst = worst.max((uu[[i, l]] - target).norm());
        }
    }
    worst
}

fn gated(u: Array2<C>, what: &str, cfg: &OracleConfig) -> Result<Array2<C>> {
    let defect = unitarity_defect(&u);
    if !(defect <= cfg.unitarity_tol) {
        return Err(Error::InadequateCutoff {
            cutoff: u.nrows(),
            detail: format!("{what} unitarity defect {defect:.3e} on lower levels"),
        });
    }
    Ok(u)
}

/// `D(α) = exp(α a† − α* a)` on the truncated space.
pub fn displacement_matrix(alpha: C, n_cut: usize) -> Result<Array2<C>> {
    displacement_matrix_with(alpha, n_cut, &OracleConfig::default())
}

pub fn displacement_matrix_with(alpha: C, n_cut: usize, cfg: &OracleConfig) -> Result<Array2<C>> {
    let a = build_annihilation(n_cut)?;
    if alpha == ZERO {
        return Ok(Array2::from_diag_elem(n_cut, ONE));
    }
    let generator = adjoint(&a) * alpha - a * alpha.conj();
    gated(expm(&generator), "displacement", cfg)
}

/// `S(ξ) = exp[½(ξ a†² − ξ* a²)]` on the truncated space.
pub fn squeeze_matrix(xi: C, n_cut: usize) -> Result<Array2<C>> {
    squeeze_matrix_with(xi, n_cut, &OracleConfig::default())
}

pub fn squeeze_matrix_with(xi: C, n_cut: usize, cfg: &OracleConfig) -> Result<Array2<C>> {
    let a = build_annihilation(n_cut)?;
    if xi == ZERO {
        return Ok(Array2::from_diag_elem(n_cut, ONE));
    }
    let a2 = a.dot(&a);
    let generator = adjoint(&a2) * (0.5 * xi) - a2 * (0.5 * xi.conj());
    gated(expm(&generator), "squeeze", cfg)
}

/// `‖(a − α) D e₀‖` over the lower 80% of levels.
pub fn displacement_eigen_residual(alpha: C, d: &Array2<C>) -> Result<f64> {
    let n = d.nrows();
    let a = build_annihilation(n)?;
    let v = d.column(0).to_owned();
    let av = a.dot(&v);
    let k = lower_levels(n);
    Ok((0..k)
        .map(|i| (av[i] - alpha * v[i]).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Population of the top 10% of Fock levels.
pub fn tail_mass(v: &Array1<C>) -> f64 {
    v.slice(s![top_decile_start(v.len())..])
        .iter()
        .map(|z| z.norm_sqr())
        .sum()
}

fn norm_sqr(v: &Array1<C>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn mode_state(alpha: C, xi: C, n: usize, cfg: &OracleConfig) -> Result<Array1<C>> {
    let squeezed = squeeze_matrix_with(xi, n, cfg)?.column(0).to_owned();
    if alpha == ZERO {
        return Ok(squeezed);
    }
    Ok(displacement_matrix_with(alpha, n, cfg)?.dot(&squeezed))
}

/// Truncated operators and the joint pure state of one oracle run.
#[derive(Debug, Clone)]
pub struct FockWorkspace {
    pub cutoff: usize,
    pub a_matrix: Array2<C>,
    pub state_plus: Array1<C>,
    pub state_minus: Array1<C>,
    pub joint_state: Array1<C>,
    /// Larger of the two per-mode top-decile populations.
    pub tail_mass: f64,
    /// `|1 − ⟨ψ|ψ⟩|` of the joint state.
    pub norm_defect: f64,
}

impl FockWorkspace {
    fn assemble(
        n: usize,
        state_plus: Array1<C>,
        state_minus: Array1<C>,
        cfg: &OracleConfig,
    ) -> Result<Self> {
        for (name, v) in [("+", &state_plus), ("-", &state_minus)] {
            let defect = (1.0 - norm_sqr(v)).abs();
            if defect > 1e-10 {
                return Err(Error::InadequateCutoff {
                    cutoff: n,
                    detail: format!("mode {name} norm defect {defect:.3e}"),
                });
            }
        }
        let tail = tail_mass(&state_plus).max(tail_mass(&state_minus));
        if !(tail < cfg.tail_tol) {
            return Err(Error::InadequateCutoff {
                cutoff: n,
                detail: format!("tail mass {tail:.3e} exceeds {:.1e}", cfg.tail_tol),
            });
        }
        let joint_state = Array1::from_iter(
            state_plus
                .iter()
                .flat_map(|&p| state_minus.iter().map(move |&q| p * q)),
        );
        let norm_defect = (1.0 - norm_sqr(&joint_state)).abs();
        Ok(Self {
            cutoff: n,
            a_matrix: build_annihilation(n)?,
            state_plus,
            state_minus,
            joint_state,
            tail_mass: tail,
            norm_defect,
        })
    }

    /// The joint state as an `n × n` matrix (rows: `+` mode).
    pub fn joint_matrix(&self) -> ArrayView2<'_, C> {
        self.joint_state
            .view()
            .into_shape_with_order((self.cutoff, self.cutoff))
            .expect("joint state has n² entries")
    }
}

/// Build `D(α₊)S(ξ₊)e₀ ⊗ D(α₋)S(ξ₋)e₀` at an explicit cutoff.
pub fn build_state(
    a: &CoherentAmplitudes,
    s: &SqueezeParams,
    n_cut: usize,
) -> Result<FockWorkspace> {
    build_state_with(a, s, n_cut, &OracleConfig::default())
}

pub fn build_state_with(
    a: &CoherentAmplitudes,
    s: &SqueezeParams,
    n_cut: usize,
    cfg: &OracleConfig,
) -> Result<FockWorkspace> {
    s.validate()?;
    if !a.is_finite() {
        return Err(Error::Domain("non-finite coherent amplitude".into()));
    }
    let plus = mode_state(a.alpha_plus, s.xi_plus(), n_cut, cfg)?;
    let minus = mode_state(a.alpha_minus, s.xi_minus(), n_cut, cfg)?;
    FockWorkspace::assemble(n_cut, plus, minus, cfg)
}

/// Initial cutoff `⌈μ + 10√(μ+1) + 20⌉` with `μ = |α|² + sinh² r`, maximized over modes.
pub fn cutoff_floor(a: &CoherentAmplitudes, s: &SqueezeParams) -> usize {
    let mode = |alpha: C, r: f64| {
        let mu = alpha.norm_sqr() + r.sinh().powi(2);
        (mu + 10.0 * (mu + 1.0).sqrt() + 20.0).ceil()
    };
    let floor = mode(a.alpha_plus, s.r_plus).max(mode(a.alpha_minus, s.r_minus));
    if floor.is_finite() && floor < usize::MAX as f64 {
        floor as usize
    } else {
        usize::MAX
    }
}

/// Cutoff floor doubled until both per-mode states have top-decile
/// population below the tail tolerance, together with the resulting workspace.
pub fn build_state_auto(
    a: &CoherentAmplitudes,
    s: &SqueezeParams,
    cfg: &OracleConfig,
) -> Result<FockWorkspace> {
    if !(cfg.tail_tol > 0.0 && cfg.tail_tol <= 1e-4) {
        return Err(Error::Domain(format!(
            "tail tolerance {} outside (0, 1e-4]",
            cfg.tail_tol
        )));
    }
    s.validate()?;
    let mut n = cutoff_floor(a, s);
    loop {
        if n > cfg.ceiling {
            return Err(Error::CutoffExplosion {
                required: n,
                ceiling: cfg.ceiling,
            });
        }
        let plus = mode_state(a.alpha_plus, s.xi_plus(), n, cfg)?;
        let minus = mode_state(a.alpha_minus, s.xi_minus(), n, cfg)?;
        if tail_mass(&plus) < cfg.tail_tol && tail_mass(&minus) < cfg.tail_tol {
            return FockWorkspace::assemble(n, plus, minus, cfg);
        }
        n = n.saturating_mul(2);
    }
}

/// Cutoff chosen by [`build_state_auto`] with the default ceiling.
pub fn cutoff_policy(a: &CoherentAmplitudes, s: &SqueezeParams, tail_tol: f64) -> Result<usize> {
    let cfg = OracleConfig {
        tail_tol,
        ..OracleConfig::default()
    };
    build_state_auto(a, s, &cfg).map(|w| w.cutoff)
}

/// Raw moments extracted from a workspace plus diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleMoments {
    pub mean: [f64; 3],
    pub variance: [f64; 3],
    /// `½⟨JxJy + JyJx⟩ − ⟨Jx⟩⟨Jy⟩`.
    pub covariance_xy: f64,
    pub norm_defect: f64,
    pub tail_mass: f64,
    /// Set when a variance in `[−1e−12, 0)` was clamped to zero.
    pub clamped: bool,
}

impl OracleMoments {
    pub fn moment_set(&self) -> MomentSet {
        MomentSet {
            mean: self.mean,
            variance: self.variance,
        }
    }

    pub fn max_abs_diff(&self, other: &MomentSet) -> f64 {
        self.moment_set().max_abs_diff(other)
    }
}

/// Unclamped moments from one evaluation path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawMoments {
    pub mean: [f64; 3],
    pub second: [f64; 3],
    pub sym_xy: f64,
}

impl RawMoments {
    pub fn variance(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| self.second[k] - self.mean[k] * self.mean[k])
    }

    pub fn max_abs_diff(&self, other: &RawMoments) -> f64 {
        let a = self.mean.iter().chain(&self.second).chain([&self.sym_xy]);
        let b = other
            .mean
            .iter()
            .chain(&other.second)
            .chain([&other.sym_xy]);
        a.zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }
}

/// `Jx ψ`, `Jy ψ`, `Jz ψ` as `n × n` matrices.
fn lifted_actions(w: &FockWorkspace) -> [Array2<C>; 3] {
    let psi = w.joint_matrix();
    let a = &w.a_matrix;
    let ad = adjoint(a);
    let num = ad.dot(a);
    // (A ⊗ B) ψ ↔ A Ψ Bᵀ
    let j_plus = ad.dot(&psi).dot(&a.t());
    let j_minus = a.dot(&psi).dot(&ad.t());
    let jz = (num.dot(&psi) - psi.dot(&num.t())) * 0.5;
    let jx = (&j_plus + &j_minus) * 0.5;
    let jy = (&j_plus - &j_minus) * C::new(0.0, -0.5);
    [jx, jy, jz]
}

fn inner(u: &Array2<C>, v: ArrayView2<'_, C>) -> C {
    u.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Moments from Kronecker-lifted operators applied to the joint vector.
pub fn joint_moments(w: &FockWorkspace) -> Result<RawMoments> {
    let psi = w.joint_matrix();
    let actions = lifted_actions(w);
    let mut mean = [0.0; 3];
    let mut second = [0.0; 3];
    for (k, act) in actions.iter().enumerate() {
        let m = inner(act, psi).conj();
        let scale = act
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
            .max(1.0);
        if m.im.abs() > 1e-10 * scale {
            return Err(Error::OracleGate(format!(
                "imaginary residue {:.3e} in mean of component {k}",
                m.im
            )));
        }
        mean[k] = m.re;
        second[k] = act.iter().map(|z| z.norm_sqr()).sum();
    }
    let sym_xy = inner(&actions[0], actions[1].view()).re;
    Ok(RawMoments {
        mean,
        second,
        sym_xy,
    })
}

fn expect(v: &Array1<C>, op: &Array2<C>) -> C {
    v.iter()
        .zip(op.dot(v).iter())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// Moments from per-mode expectation values, valid because the two
/// modes are uncorrelated in the product state.
pub fn factorized_moments(w: &FockWorkspace) -> RawMoments {
    let a = &w.a_matrix;
    let ad = adjoint(a);
    let (p, q) = (&w.state_plus, &w.state_minus);
    let a2 = a.dot(a);
    let ad2 = ad.dot(&ad);
    let n = ad.dot(a);
    let nn = n.dot(&n);
    let aad = a.dot(&ad);

    let jp = expect(p, &ad) * expect(q, a);
    let jp_jp = expect(p, &ad2) * expect(q, &a2);
    let jm_jm = expect(p, &a2) * expect(q, &ad2);
    let jp_jm = expect(p, &n) * expect(q, &aad);
    let jm_jp = expect(p, &aad) * expect(q, &n);
    let (np, nm) = (expect(p, &n).re, expect(q, &n).re);

    let jx2 = (jp_jp + jp_jm + jm_jp + jm_jm) * 0.25;
    let jy2 = (jp_jp - jp_jm - jm_jp + jm_jm) * -0.25;
    let jz2 = 0.25 * (expect(p, &nn).re - 2.0 * np * nm + expect(q, &nn).re);
    RawMoments {
        mean: [jp.re, jp.im, 0.5 * (np - nm)],
        second: [jx2.re, jy2.re, jz2],
        sym_xy: 0.5 * jp_jp.im,
    }
}

/// Largest cutoff at which both evaluation paths are always compared.
pub const SELF_CHECK_CUTOFF: usize = 25;

/// Means, variances and the xy covariance of `Jx`, `Jy`, `Jz`.
///
/// Uses the joint path; at cutoffs up to [`SELF_CHECK_CUTOFF`] the
/// factorized path is also evaluated and must agree to 1e−10.
pub fn oracle_moments(w: &FockWorkspace) -> Result<OracleMoments> {
    let raw = joint_moments(w)?;
    if w.cutoff <= SELF_CHECK_CUTOFF {
        let other = factorized_moments(w);
        let gap = raw.max_abs_diff(&other);
        if gap > 1e-10 {
            return Err(Error::OracleGate(format!(
                "joint and factorized moments differ by {gap:.3e}"
            )));
        }
    }
    let mut clamped = false;
    let mut variance = raw.variance();
    for v in variance.iter_mut() {
        if *v < -1e-12 {
            return Err(Error::OracleGate(format!("negative variance {v:.3e}")));
        }
        if *v < 0.0 {
            *v = 0.0;
            clamped = true;
        }
    }
    Ok(OracleMoments {
        mean: raw.mean,
        variance,
        covariance_xy: raw.sym_xy - raw.mean[0] * raw.mean[1],
        norm_defect: w.norm_defect,
        tail_mass: w.tail_mass,
        clamped,
    })
}

/// Build the state for `sp` with the cutoff policy and extract its moments.
pub fn oracle_state_moments(
    sp: &StateParams,
    cfg: &OracleConfig,
) -> Result<(usize, OracleMoments)> {
    sp.validate()?;
    let w = build_state_auto(&sp.amplitudes()?, &sp.squeeze, cfg)?;
    Ok((w.cutoff, oracle_moments(&w)?))
}

/// `‖([Jx, Jy] − i Jz) ψ‖` and `‖Jz ψ‖`.
pub fn commutator_residual(w: &FockWorkspace) -> (f64, f64) {
    let a = &w.a_matrix;
    let ad = adjoint(a);
    let num = ad.dot(a);
    let apply = |m: ArrayView2<'_, C>| -> [Array2<C>; 3] {
        let jp = ad.dot(&m).dot(&a.t());
        let jm = a.dot(&m).dot(&ad.t());
        let jz = (num.dot(&m) - m.dot(&num.t())) * 0.5;
        [(&jp + &jm) * 0.5, (&jp - &jm) * C::new(0.0, -0.5), jz]
    };
    let [jx, jy, jz] = apply(w.joint_matrix());
    let jx_jy = apply(jy.view())[0].clone();
    let jy_jx = apply(jx.view())[1].clone();
    let residual = jx_jy - jy_jx - &jz * C::new(0.0, 1.0);
    let norm = |m: &Array2<C>| m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (norm(&residual), norm(&jz))
}

/// Diagnostic dump of one oracle run.
#[derive(Debug, Clone, Serialize)]
pub struct OracleDiagnostic {
    pub cutoff: usize,
    pub norm_defect: f64,
    pub tail_mass: f64,
    pub moments: OracleMoments,
}

impl OracleDiagnostic {
    pub fn new(cutoff: usize, moments: OracleMoments) -> Self {
        Self {
            cutoff,
            norm_defect: moments.norm_defect,
            tail_mass: moments.tail_mass,
            moments,
        }
    }
}
