//! Mean-surface cloud plus an uncertainty ellipsoid at every grid point.

use serde::Serialize;

use crate::closed_form::closed_moments;
use crate::error::{Error, Result};
use crate::geometry::{
    mean_surface_cloud, surface_grid, uncertainty_ellipsoid, EllipsoidDescriptor,
};
use crate::oracle::{oracle_state_moments, OracleConfig};
use crate::params::{AngularParams, StateParams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceDocument {
    pub cloud: Vec<[f64; 3]>,
    pub ellipsoids: Vec<EllipsoidDescriptor>,
}

/// Grid over `(m, Θ)` at the `j` and squeeze of `params`; the coherent
/// phases are `θ₊ = Θ`, `θ₋ = 0`. Ellipsoids come from the closed forms
/// where they exist and from the oracle otherwise.
pub fn surface_document(
    params: &StateParams,
    samples_m: usize,
    samples_theta: usize,
    oracle: &OracleConfig,
) -> Result<SurfaceDocument> {
    params.validate()?;
    let j = params.angular.j;
    let cloud = mean_surface_cloud(j, &params.squeeze, samples_m, samples_theta)?;
    let ellipsoids = surface_grid(j, samples_m, samples_theta)
        .into_iter()
        .map(|(m, theta)| {
            let sp = StateParams::new(AngularParams::new(j, m, theta, 0.0)?, params.squeeze)?;
            let ms = match closed_moments(&sp) {
                Ok(ms) => ms,
                Err(Error::NoClosedForm(_)) => oracle_state_moments(&sp, oracle)?.1.moment_set(),
                Err(e) => return Err(e),
            };
            uncertainty_ellipsoid(&ms)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SurfaceDocument { cloud, ellipsoids })
}
