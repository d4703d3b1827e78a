use thiserror::Error;

/// Errors produced by the parameter maps, closed forms, oracle and geometry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Parameters outside their physical domain (|m| > j, r < 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The Fock truncation is too small for the requested state.
    #[error("inadequate cutoff: n_cut = {cutoff}, {detail}")]
    InadequateCutoff { cutoff: usize, detail: String },

    /// The cutoff policy would exceed its configured ceiling.
    #[error("cutoff explosion: required n_cut {required} exceeds ceiling {ceiling}")]
    CutoffExplosion { required: usize, ceiling: usize },

    /// A quantity is undefined at these parameters (e.g. phase sensitivity with <Jx> = 0).
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// An uncertainty ellipsoid with a zero semi-axis.
    #[error("degenerate variance: component {axis} is zero")]
    DegenerateVariance { axis: usize },

    /// The bracketed minimum sits on an endpoint.
    #[error("no interior minimum in [{lo}, {hi}]: minimum at endpoint r = {at}")]
    NoInteriorMinimum { lo: f64, hi: f64, at: f64 },

    /// No closed form exists for the requested moments.
    #[error("no closed form: {0}")]
    NoClosedForm(String),

    /// A numerical self-consistency gate of the oracle failed.
    #[error("oracle gate failed: {0}")]
    OracleGate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
