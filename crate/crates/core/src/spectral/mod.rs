//! Finite-dimensional spectral invariants: eta invariants in closed form and
//! by heat-kernel quadrature, spectral flow, McKean–Singer supertraces, the
//! product formula for eta under a graded factor, and twisted Betti numbers.
//!
//! Eta is normalized as `(1/2√π)∫₀^∞ Tr(A e^{−tA²}) t^{−1/2} dt`, so every
//! nonzero eigenvalue contributes `sign(λ)/2`. [`EtaNormalization::Full`]
//! drops the factor `1/2`.

mod flow;
mod index;
mod operator;

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh, eigvalsh, CMatrix, EigenDecomposition, HERMITIAN_TOL};

pub use flow::{spectral_flow, SpectralFlowOptions, SpectralFlowReport, SpectralPath};
pub use index::{
    betti_from_complex, mckean_singer, product_eta_check, twisted_betti, twisted_betti_bloch, Betti, McKeanSinger,
    ProductEtaCheck,
};
pub use operator::{eta_germ, eta_operator, eta_operator_matrix, EtaMethod};

/// Relative zero tolerance: eigenvalues with `|λ| ≤ 1e−9·ρ(A)` count as kernel.
pub const ZERO_TOL_REL: f64 = 1e-9;
/// Tolerance on the analytic bound of the discarded heat-integral tail.
pub const TAIL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaNormalization {
    #[default]
    Half,
    Full,
}

impl EtaNormalization {
    /// Converts a half-normalized value.
    pub fn apply(self, eta_half: f64) -> f64 {
        match self {
            EtaNormalization::Half => eta_half,
            EtaNormalization::Full => 2.0 * eta_half,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Direct,
    Truncation { radius: usize },
    BlochFiber { p: i64, q: usize },
}

/// A Hermitian matrix with an optional `±1` grading that it anticommutes with.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: CMatrix,
    grading: Option<Vec<i8>>,
    provenance: Provenance,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix, provenance: Provenance) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOL * matrix.max_abs() {
            return Err(Error::NotHermitian { defect });
        }
        Ok(HermitianOperator {
            matrix,
            grading: None,
            provenance,
        })
    }

    /// Attaches a grading `z = diag(±1)`; requires `‖zA + Az‖_max ≤ 1e−12·‖A‖_max`.
    pub fn with_grading(mut self, grading: Vec<i8>) -> Result<Self> {
        check_grading(&self.matrix, &grading)?;
        self.grading = Some(grading);
        Ok(self)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn grading(&self) -> Option<&[i8]> {
        self.grading.as_deref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eigh(&self) -> Result<EigenDecomposition> {
        eigh(&self.matrix)
    }
}

pub(crate) fn check_grading(a: &CMatrix, grading: &[i8]) -> Result<()> {
    if grading.len() != a.rows() || !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "grading of length {} for a {}x{} operator",
            grading.len(),
            a.rows(),
            a.cols()
        )));
    }
    if grading.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::DimensionMismatch("grading entries must be ±1".into()));
    }
    // (zA + Az)_{ij} = (z_i + z_j) A_{ij}
    let mut defect = 0.0f64;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let s = f64::from(grading[i] + grading[j]);
            defect = defect.max((a[(i, j)] * s).norm());
        }
    }
    if defect > 1e-12 * a.max_abs() {
        return Err(Error::GradingNotOdd { defect });
    }
    Ok(())
}

/// `ZERO_TOL_REL·max|λ|`.
pub fn default_zero_tol(values: &[f64]) -> f64 {
    ZERO_TOL_REL * values.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// `½ Σ_{|λ| > zero_tol} sign(λ)`.
pub fn eta_from_values(values: &[f64], zero_tol: f64) -> f64 {
    0.5 * values
        .iter()
        .filter(|x| x.abs() > zero_tol)
        .map(|x| x.signum())
        .sum::<f64>()
}

/// Closed-form eta; `zero_tol = None` uses [`default_zero_tol`].
pub fn eta_closed_form(a: &CMatrix, zero_tol: Option<f64>) -> Result<f64> {
    let values = eigvalsh(a)?;
    let tol = zero_tol.unwrap_or_else(|| default_zero_tol(&values));
    Ok(eta_from_values(&values, tol))
}

/// Kernel dimension at the given (or default) tolerance.
pub fn kernel_dim(values: &[f64], zero_tol: f64) -> usize {
    values.iter().filter(|x| x.abs() <= zero_tol).count()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaEstimate {
    pub eta: f64,
    pub error_bound: f64,
    pub method: String,
    pub params: serde_json::Value,
}

/// Upper bound for `½ Σ_{|λ|≥m} erfc(|λ|U)` with `n` terms, from
/// `erfc(x) ≤ e^{−x²}/(x√π)`.
fn tail_bound(n: usize, m: f64, u: f64) -> f64 {
    let x = m * u;
    if x <= 0.0 {
        return n as f64 * 0.5;
    }
    0.5 * n as f64 * (-x * x).exp() / (x * std::f64::consts::PI.sqrt())
}

/// Smallest `t_max` whose tail bound is below [`TAIL_TOL`].
fn required_t_max(n: usize, m: f64) -> f64 {
    let mut x = 1.0;
    while tail_bound(n, 1.0, x) > TAIL_TOL {
        x += 0.05;
    }
    (x / m).powi(2)
}

/// `(1/√π)∫₀^U Σλ e^{−u²λ²} du` by Gauss–Legendre on panels `[0,a]`, `[a,2a]`, …
fn heat_integral(values: &[f64], u_max: f64, points: usize) -> f64 {
    let lmax = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let rule = GaussLegendre::new(NonZeroUsize::new(points.max(1)).expect("nonzero"));
    let f = |u: f64| values.iter().map(|&l| l * (-(u * l).powi(2)).exp()).sum::<f64>();
    let mut a = (0.05 / lmax).min(u_max);
    let mut total = rule.integrate(0.0, a, f);
    while a < u_max {
        let b = (2.0 * a).min(u_max);
        total += rule.integrate(a, b, f);
        a = b;
    }
    total / std::f64::consts::PI.sqrt()
}

/// Eta by quadrature of the heat integral after `t = u²`, with an analytic
/// bound on the tail beyond `t_max`. `t_max = None` picks the smallest value
/// whose tail bound is below [`TAIL_TOL`]; an explicit `t_max` with a larger
/// tail bound is rejected with the required value.
pub fn eta_quadrature(a: &CMatrix, t_max: Option<f64>, n_points: usize, zero_tol: Option<f64>) -> Result<EtaEstimate> {
    let values = eigvalsh(a)?;
    let tol = zero_tol.unwrap_or_else(|| default_zero_tol(&values));
    let nonzero: Vec<f64> = values.iter().copied().filter(|x| x.abs() > tol).collect();
    let params = |t: f64| serde_json::json!({ "t_max": t, "n_points": n_points, "zero_tol": tol });
    if nonzero.is_empty() {
        return Ok(EtaEstimate {
            eta: 0.0,
            error_bound: 0.0,
            method: "quadrature".into(),
            params: params(0.0),
        });
    }
    let m = nonzero.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    let needed = required_t_max(nonzero.len(), m);
    let t = t_max.unwrap_or(needed);
    let tail = tail_bound(nonzero.len(), m, t.sqrt());
    if tail > TAIL_TOL {
        return Err(Error::TailTooLarge {
            bound: tail,
            required_t_max: needed,
        });
    }
    let fine = heat_integral(&nonzero, t.sqrt(), n_points);
    let coarse = heat_integral(&nonzero, t.sqrt(), (n_points / 2).max(1));
    Ok(EtaEstimate {
        eta: fine,
        error_bound: tail + (fine - coarse).abs(),
        method: "quadrature".into(),
        params: params(t),
    })
}
