//! Dispersion-relation sweeps and the decay constant `k`.
//!
//! For each wavenumber `xi` the temporal eigenvalues are the roots of
//! `det(lambda A0h + i xi A1h + L + xi^2 Bh) = 0`, computed as the spectrum
//! of the companion operator `-(A0h)^{-1} (i xi A1h + L + xi^2 Bh)`. Strict
//! dissipativity means every root has negative real part for `xi != 0`; the
//! sharp decay constant is the grid infimum of `-Re lambda (1 + xi^2)/xi^2`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{complex_eigenvalues, to_complex, CMat4};
use crate::matrices::SymmetricSystem;

#[derive(Debug, Error)]
pub enum DispersionError {
    #[error("invalid xi grid: need 0 < xi_min < xi_max and n >= 2")]
    BadGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSpacing {
    Log,
    Linear,
}

/// The Fourier-symbol pencil `i xi A1h + L + xi^2 Bh`.
pub fn pencil(ss: &SymmetricSystem, xi: f64) -> CMat4 {
    let i = Complex64::new(0.0, 1.0);
    to_complex(&ss.a1h) * (i * xi) + to_complex(&ss.l) + to_complex(&ss.bh) * Complex64::from(xi * xi)
}

/// Generator of the Fourier-mode evolution, `-(A0h)^{-1} (i xi A1h + L + xi^2 Bh)`.
pub fn mode_generator(ss: &SymmetricSystem, xi: f64) -> CMat4 {
    -(to_complex(&ss.a0h_inv()) * pencil(ss, xi))
}

/// The four dispersion eigenvalues at `xi`, sorted by descending real part
/// (ties broken by descending imaginary part).
pub fn dispersion_eigenvalues(ss: &SymmetricSystem, xi: f64) -> [Complex64; 4] {
    let mut eig = complex_eigenvalues(&mode_generator(ss, xi));
    eig.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
    eig
}

/// Residual `|det(lambda A0h + i xi A1h + L + xi^2 Bh)|` scaled by the
/// fourth power of the pencil norm; used to certify returned roots.
pub fn determinant_residual(ss: &SymmetricSystem, xi: f64, lambda: Complex64) -> f64 {
    let m = to_complex(&ss.a0h) * lambda + pencil(ss, xi);
    let scale = m.norm().max(1e-300);
    m.determinant().norm() / scale.powi(4)
}

/// A sampled dispersion curve over a `xi` grid.
#[derive(Debug, Clone)]
pub struct DispersionCurve {
    pub xi_grid: Vec<f64>,
    /// Per-`xi` eigenvalues sorted by descending real part.
    pub lambdas: Vec<[Complex64; 4]>,
    /// Per-`xi` largest real part.
    pub max_re: Vec<f64>,
    /// Grid infimum of `-max_re (1 + xi^2)/xi^2`; positive iff the bound
    /// `Re lambda <= -k xi^2/(1+xi^2)` holds with `k = k_sharp` on the grid.
    pub k_sharp: f64,
    pub dissipative: bool,
    /// First grid point with `max_re >= 0`, when not dissipative.
    pub offending_xi: Option<f64>,
}

/// Build the `xi` grid for a sweep.
pub fn make_grid(
    xi_min: f64,
    xi_max: f64,
    n: usize,
    spacing: GridSpacing,
) -> Result<Vec<f64>, DispersionError> {
    if !(xi_min > 0.0) || !(xi_max > xi_min) || n < 2 {
        return Err(DispersionError::BadGrid);
    }
    let grid = (0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            match spacing {
                GridSpacing::Log => xi_min * (xi_max / xi_min).powf(s),
                GridSpacing::Linear => xi_min + s * (xi_max - xi_min),
            }
        })
        .collect();
    Ok(grid)
}

/// Sweep the dispersion relation over the grid.
///
/// A non-dissipative grid point is reported in the curve (`dissipative`,
/// `offending_xi`), not as an error.
pub fn scan(
    ss: &SymmetricSystem,
    xi_min: f64,
    xi_max: f64,
    n: usize,
    spacing: GridSpacing,
) -> Result<DispersionCurve, DispersionError> {
    let xi_grid = make_grid(xi_min, xi_max, n, spacing)?;
    let lambdas: Vec<[Complex64; 4]> = xi_grid
        .par_iter()
        .map(|&xi| dispersion_eigenvalues(ss, xi))
        .collect();
    let max_re: Vec<f64> = lambdas.iter().map(|l| l[0].re).collect();
    let mut k_sharp = f64::INFINITY;
    let mut offending_xi = None;
    for (&xi, &re) in xi_grid.iter().zip(max_re.iter()) {
        k_sharp = k_sharp.min(-re * (1.0 + xi * xi) / (xi * xi));
        if re >= 0.0 && offending_xi.is_none() {
            offending_xi = Some(xi);
        }
    }
    Ok(DispersionCurve {
        dissipative: offending_xi.is_none(),
        xi_grid,
        lambdas,
        max_re,
        k_sharp,
        offending_xi,
    })
}

/// Check `max_re(xi) <= -k xi^2/(1+xi^2)` on the curve's grid.
///
/// Returns the verdict and the minimum slack. A relative round-off allowance
/// keeps `verify_bound(curve, curve.k_sharp)` true with zero slack at the
/// argmin.
pub fn verify_bound(curve: &DispersionCurve, k: f64) -> (bool, f64) {
    let mut min_slack = f64::INFINITY;
    for (&xi, &re) in curve.xi_grid.iter().zip(curve.max_re.iter()) {
        let envelope = -k * xi * xi / (1.0 + xi * xi);
        min_slack = min_slack.min(envelope - re);
    }
    let tol = 1e-12 * (1.0 + k.abs());
    (min_slack >= -tol, min_slack)
}

/// Curve CSV: `xi, re_lambda_1..4, im_lambda_1..4, envelope`.
pub fn curve_to_csv(curve: &DispersionCurve) -> String {
    let mut out = String::from(
        "xi,re_lambda_1,re_lambda_2,re_lambda_3,re_lambda_4,im_lambda_1,im_lambda_2,im_lambda_3,im_lambda_4,envelope\n",
    );
    for (i, &xi) in curve.xi_grid.iter().enumerate() {
        let l = &curve.lambdas[i];
        let envelope = -curve.k_sharp * xi * xi / (1.0 + xi * xi);
        let fields: Vec<String> = std::iter::once(xi)
            .chain(l.iter().map(|z| z.re))
            .chain(l.iter().map(|z| z.im))
            .chain(std::iter::once(envelope))
            .map(crate::report::fmt_f64)
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
