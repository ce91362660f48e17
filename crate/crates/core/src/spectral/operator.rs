use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;

use crate::algebra::{AlgebraElement, AlgebraMatrix};
use crate::error::{Error, Result};
use crate::linalg::{eigh, eigvalsh, CMatrix};
use crate::phase::format_rational;
use crate::representations::{left_regular, BlochRepresentation};
use crate::spectral::{default_zero_tol, eta_from_values, EtaEstimate, ZERO_TOL_REL};
use crate::traces::{TraceFunctional, TraceKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaMethod {
    /// `k`-grid average of fiber etas over an `N×N` grid (ℤ², rational flux, `tr₍₂₎`).
    Bloch { grid: usize },
    /// `δ_e`-column of `½ sign(λ_R(A))` on the ball of the given radius, paired with `τ`.
    Truncation { radius: usize },
}

/// Block matrix `[π_k(A_ij)]`.
pub(crate) fn bloch_block_fiber(rep: &BlochRepresentation, a: &AlgebraMatrix, k: (f64, f64)) -> Result<CMatrix> {
    let (n, q) = (a.dim(), rep.dim());
    let mut out = CMatrix::zeros(n * q, n * q);
    for i in 0..n {
        for j in 0..n {
            let f = rep.fiber(a.get(i, j), k)?;
            for r in 0..q {
                for c in 0..q {
                    out[(i * q + r, j * q + c)] = f[(r, c)];
                }
            }
        }
    }
    Ok(out)
}

/// `Σ_ij ‖A_ij‖₁`, an upper bound for the operator norm.
fn l1_scale(a: &AlgebraMatrix) -> f64 {
    (0..a.dim())
        .flat_map(|i| (0..a.dim()).map(move |j| (i, j)))
        .map(|(i, j)| a.get(i, j).l1_norm())
        .sum()
}

fn check_self_adjoint(a: &AlgebraMatrix) -> Result<()> {
    let defect = a.max_distance(&a.adjoint());
    if defect > 1e-12 * l1_scale(a).max(1.0) {
        return Err(Error::NotSelfAdjoint { defect });
    }
    Ok(())
}

fn bloch_eta(a: &AlgebraMatrix, grid: usize) -> Result<f64> {
    let rep = BlochRepresentation::new(a.get(0, 0).multiplier().clone())?;
    let q = rep.dim() as f64;
    // Relative to a bound on the operator norm, not to each fiber, so that
    // rounding-level fiber eigenvalues count as kernel uniformly.
    let tol = ZERO_TOL_REL * l1_scale(a);
    let per_k: Vec<f64> = (0..grid * grid)
        .into_par_iter()
        .map(|i| {
            let k = (TAU * (i / grid) as f64 / grid as f64, TAU * (i % grid) as f64 / grid as f64);
            let vals = eigvalsh(&bloch_block_fiber(&rep, a, k)?.hermitian_part())?;
            Ok(eta_from_values(&vals, tol) / q)
        })
        .collect::<Result<_>>()?;
    Ok(per_k.iter().sum::<f64>() / (grid * grid) as f64)
}

fn truncation_eta(a: &AlgebraMatrix, tau: &TraceFunctional, radius: usize) -> Result<f64> {
    let n = a.dim();
    let blocks: Vec<Vec<_>> = (0..n)
        .map(|i| (0..n).map(|j| left_regular(a.get(i, j), radius)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let basis = blocks[0][0].basis.clone();
    let m = basis.len();
    let mut big = CMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            let b = &blocks[i][j].matrix;
            for r in 0..m {
                for c in 0..m {
                    big[(i * m + r, j * m + c)] = b[(r, c)];
                }
            }
        }
    }
    let dec = eigh(&big.hermitian_part())?;
    let tol = default_zero_tol(&dec.values);
    let e = blocks[0][0]
        .position(&a.get(0, 0).group().identity())
        .expect("identity lies in every ball");
    let weights: Vec<Complex64> = basis.iter().map(|g| tau.basis_value(g)).collect::<Result<_>>()?;
    let v = &dec.vectors;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let col = i * m + e;
        for (r, w) in weights.iter().enumerate() {
            if w.norm() == 0.0 {
                continue;
            }
            let row = i * m + r;
            // (½ sign(M))_{row,col} = Σ_k v_{row,k} s_k conj(v_{col,k})
            let entry: Complex64 = (0..n * m)
                .filter(|&k| dec.values[k].abs() > tol)
                .map(|k| v[(row, k)] * (0.5 * dec.values[k].signum()) * v[(col, k)].conj())
                .sum();
            acc += w * entry;
        }
    }
    Ok(acc.re)
}

/// Eta of a self-adjoint matrix over the algebra against `τ`.
///
/// The Bloch method reports `|η_N − η_{N/2}|` as its error estimate; the
/// truncation method reports the change from radius `R−2` to `R`.
pub fn eta_operator_matrix(a: &AlgebraMatrix, tau: &TraceFunctional, method: EtaMethod) -> Result<EtaEstimate> {
    if a.dim() == 0 {
        return Err(Error::DimensionMismatch("empty operator".into()));
    }
    check_self_adjoint(a)?;
    match method {
        EtaMethod::Bloch { grid } => {
            if !matches!(tau.kind(), TraceKind::Regular) {
                return Err(Error::InapplicableMethod("the Bloch method computes the regular trace only".into()));
            }
            let eta = bloch_eta(a, grid)?;
            let coarse = bloch_eta(a, (grid / 2).max(1))?;
            Ok(EtaEstimate {
                eta,
                error_bound: (eta - coarse).abs(),
                method: "bloch".into(),
                params: serde_json::json!({ "grid": grid }),
            })
        }
        EtaMethod::Truncation { radius } => {
            let needed = (0..a.dim())
                .flat_map(|i| (0..a.dim()).map(move |j| (i, j)))
                .map(|(i, j)| a.get(i, j).sup_support_length())
                .max()
                .unwrap_or(0);
            if radius < needed {
                return Err(Error::TruncationTooSmall { radius, needed });
            }
            let eta = truncation_eta(a, tau, radius)?;
            let coarse = if radius >= 2 { truncation_eta(a, tau, radius - 2)? } else { eta };
            Ok(EtaEstimate {
                eta,
                error_bound: (eta - coarse).abs(),
                method: "truncation".into(),
                params: serde_json::json!({ "radius": radius }),
            })
        }
    }
}

pub fn eta_operator(a: &AlgebraElement, tau: &TraceFunctional, method: EtaMethod) -> Result<EtaEstimate> {
    eta_operator_matrix(&AlgebraMatrix::from_rows(vec![vec![a.clone()]])?, tau, method)
}

/// Tabulates `s ↦ η(s)` over a grid of exponents for a family built by `family`.
pub fn eta_germ<F>(family: F, s_grid: &[Rational64], method: EtaMethod) -> Result<Vec<(String, EtaEstimate)>>
where
    F: Fn(Rational64) -> Result<(AlgebraMatrix, TraceFunctional)>,
{
    s_grid
        .iter()
        .map(|&s| {
            let (a, tau) = family(s)?;
            Ok((format_rational(&s), eta_operator_matrix(&a, &tau, method)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representations::standard_harper;

    #[test]
    fn harper_at_zero_flux_is_symmetric() {
        let h = standard_harper(Rational64::new(0, 1));
        let tau = TraceFunctional::regular(h.multiplier().clone());
        let e = eta_operator(&h, &tau, EtaMethod::Bloch { grid: 32 }).unwrap();
        assert!(e.eta.abs() <= 1e-4);
    }

    #[test]
    fn shifted_harper_is_positive() {
        let h = standard_harper(Rational64::new(1, 3));
        let m = h.multiplier().clone();
        let shifted = h.try_add(&AlgebraElement::unit(m.clone()).scale(Complex64::new(5.0, 0.0))).unwrap();
        let tau = TraceFunctional::regular(m);
        let e = eta_operator(&shifted, &tau, EtaMethod::Bloch { grid: 8 }).unwrap();
        assert!((e.eta - 0.5).abs() <= 1e-12);
        let t = eta_operator(&shifted, &tau, EtaMethod::Truncation { radius: 4 }).unwrap();
        assert!((t.eta - 0.5).abs() <= 1e-10);
    }

    #[test]
    fn non_self_adjoint_is_rejected() {
        let h = standard_harper(Rational64::new(1, 3));
        let m = h.multiplier().clone();
        let bad = h.try_add(&AlgebraElement::unit(m.clone()).scale(Complex64::new(0.0, 1.0))).unwrap();
        let tau = TraceFunctional::regular(m);
        assert!(matches!(
            eta_operator(&bad, &tau, EtaMethod::Bloch { grid: 4 }),
            Err(Error::NotSelfAdjoint { .. })
        ));
    }
}
