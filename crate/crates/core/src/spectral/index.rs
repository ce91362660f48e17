use serde::Serialize;

use crate::algebra::AlgebraMatrix;
use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, CMatrix};
use crate::representations::BlochRepresentation;
use crate::spectral::{check_grading, default_zero_tol, eta_from_values, kernel_dim, operator::bloch_block_fiber};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McKeanSinger {
    /// `dim ker D⁺ − dim ker D⁻`.
    pub index: i64,
    pub kernel_even: usize,
    pub kernel_odd: usize,
    /// `(t, Str e^{−tD²})`.
    pub supertraces: Vec<(f64, f64)>,
}

fn split_indices(grading: &[i8]) -> (Vec<usize>, Vec<usize>) {
    let even = (0..grading.len()).filter(|&i| grading[i] > 0).collect();
    let odd = (0..grading.len()).filter(|&i| grading[i] < 0).collect();
    (even, odd)
}

fn submatrix(a: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])])
}

/// Supertraces of the heat operator from the graded blocks `D⁻D⁺` and
/// `D⁺D⁻` of `D²`, and the index from kernel dimensions of `D`.
pub fn mckean_singer(d: &CMatrix, grading: &[i8], ts: &[f64], zero_tol: Option<f64>) -> Result<McKeanSinger> {
    check_grading(d, grading)?;
    let values = eigvalsh(d)?;
    let tol = zero_tol.unwrap_or_else(|| default_zero_tol(&values));
    let (even, odd) = split_indices(grading);
    // Nonzero eigenvalues of an odd operator come in ±s pairs, one pair per
    // nonzero singular value of D⁺.
    let rank = values.iter().filter(|x| **x > tol).count();
    let kernel_even = even.len() - rank;
    let kernel_odd = odd.len() - rank;
    let d_plus = submatrix(d, &odd, &even);
    let even_block = d_plus.adjoint().matmul(&d_plus)?.hermitian_part();
    let odd_block = d_plus.matmul(&d_plus.adjoint())?.hermitian_part();
    let mu_even = eigvalsh(&even_block)?;
    let mu_odd = eigvalsh(&odd_block)?;
    let supertraces = ts
        .iter()
        .map(|&t| {
            let s = |mu: &[f64]| mu.iter().map(|m| (-t * m.max(0.0)).exp()).sum::<f64>();
            (t, s(&mu_even) - s(&mu_odd))
        })
        .collect();
    Ok(McKeanSinger {
        index: kernel_even as i64 - kernel_odd as i64,
        kernel_even,
        kernel_odd,
        supertraces,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductEtaCheck {
    /// `η(z_N ⊗ D_L + D_N ⊗ 1)`.
    pub lhs: f64,
    /// `η(D_L)·ind(D_N)`.
    pub rhs: f64,
    pub eta_left: f64,
    pub index_right: i64,
}

/// Both sides of the product formula for a Hermitian `D_L` and a graded odd `D_N`.
pub fn product_eta_check(d_l: &CMatrix, d_n: &CMatrix, z_n: &[i8], zero_tol: Option<f64>) -> Result<ProductEtaCheck> {
    check_grading(d_n, z_n)?;
    let z = CMatrix::diag(&z_n.iter().map(|&s| f64::from(s)).collect::<Vec<_>>());
    let d = z.kron(d_l).add(&d_n.kron(&CMatrix::identity(d_l.rows())))?.hermitian_part();
    let vals = eigvalsh(&d)?;
    let vals_l = eigvalsh(d_l)?;
    let lhs = eta_from_values(&vals, zero_tol.unwrap_or_else(|| default_zero_tol(&vals)));
    let eta_left = eta_from_values(&vals_l, zero_tol.unwrap_or_else(|| default_zero_tol(&vals_l)));
    let index_right = mckean_singer(d_n, z_n, &[], zero_tol)?.index;
    Ok(ProductEtaCheck {
        lhs,
        rhs: eta_left * index_right as f64,
        eta_left,
        index_right,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Betti {
    pub b_even: f64,
    pub b_odd: f64,
    pub zero_tol: f64,
}

fn kernel_of_psd(block: &CMatrix, zero_tol: f64) -> Result<usize> {
    let values = eigvalsh(block)?;
    if let Some(&v) = values.iter().find(|&&v| v < -zero_tol) {
        return Err(Error::InapplicableMethod(format!("block is not positive semidefinite (eigenvalue {v:e})")));
    }
    if let Some(&v) = values.iter().find(|&&v| (zero_tol / 10.0..=zero_tol * 10.0).contains(&v)) {
        return Err(Error::KernelAmbiguous { value: v, zero_tol });
    }
    Ok(kernel_dim(&values, zero_tol))
}

/// Kernel dimensions of positive semidefinite Laplacian blocks, with the matrix trace.
pub fn twisted_betti(even: &CMatrix, odd: &CMatrix, zero_tol: f64) -> Result<Betti> {
    Ok(Betti {
        b_even: kernel_of_psd(even, zero_tol)? as f64,
        b_odd: kernel_of_psd(odd, zero_tol)? as f64,
        zero_tol,
    })
}

/// Betti numbers of the graded odd operator `D` from the blocks of `D²`,
/// asserting that the Euler characteristic equals the McKean–Singer index.
pub fn betti_from_complex(d: &CMatrix, grading: &[i8], zero_tol: f64) -> Result<Betti> {
    check_grading(d, grading)?;
    let (even, odd) = split_indices(grading);
    let d2 = d.matmul(d)?.hermitian_part();
    let b = twisted_betti(&submatrix(&d2, &even, &even), &submatrix(&d2, &odd, &odd), zero_tol)?;
    let ms = mckean_singer(d, grading, &[], Some(zero_tol.sqrt()))?;
    if b.b_even - b.b_odd != ms.index as f64 {
        return Err(Error::Degenerate(format!(
            "Euler characteristic {} differs from the index {}",
            b.b_even - b.b_odd,
            ms.index
        )));
    }
    Ok(b)
}

/// `tr₍₂₎`-Betti numbers of Laplacian blocks over `ℂ(ℤ²,σ)` with rational flux:
/// grid averages of `dim ker π_k(Δ)/q`.
pub fn twisted_betti_bloch(even: &AlgebraMatrix, odd: &AlgebraMatrix, grid: usize, zero_tol: f64) -> Result<Betti> {
    let mut out = [0.0f64; 2];
    for (slot, block) in out.iter_mut().zip([even, odd]) {
        if block.dim() == 0 {
            continue;
        }
        let rep = BlochRepresentation::new(block.get(0, 0).multiplier().clone())?;
        let q = rep.dim() as f64;
        let mut acc = 0.0;
        for i in 0..grid * grid {
            let k = (
                std::f64::consts::TAU * (i / grid) as f64 / grid as f64,
                std::f64::consts::TAU * (i % grid) as f64 / grid as f64,
            );
            let f = bloch_block_fiber(&rep, block, k)?;
            acc += kernel_of_psd(&f.hermitian_part(), zero_tol)? as f64 / q;
        }
        *slot = acc / (grid * grid) as f64;
    }
    Ok(Betti {
        b_even: out[0],
        b_odd: out[1],
        zero_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn zero_operator() {
        let ms = mckean_singer(&CMatrix::zeros(2, 2), &[1, -1], &[0.1, 1.0], None).unwrap();
        assert_eq!(ms.index, 0);
        assert!(ms.supertraces.iter().all(|(_, s)| s.abs() < 1e-15));
    }

    #[test]
    fn invertible_odd_operator() {
        let d = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let ms = mckean_singer(&d, &[1, -1], &[0.1, 1.0, 10.0], None).unwrap();
        assert_eq!((ms.index, ms.kernel_even, ms.kernel_odd), (0, 0, 0));
        assert!(ms.supertraces.iter().all(|(_, s)| s.abs() < 1e-14));
    }

    #[test]
    fn product_with_trivial_right_factor() {
        let d_l = CMatrix::diag(&[1.0, 2.0, -3.0]);
        let c = product_eta_check(&d_l, &CMatrix::zeros(1, 1), &[1], None).unwrap();
        assert_eq!((c.lhs, c.rhs, c.index_right), (0.5, 0.5, 1));
    }

    #[test]
    fn circle_complex() {
        let n = 20;
        // d₀: vertices → edges, (d₀f)(e_i) = f(i+1) − f(i).
        let d0 = CMatrix::from_fn(n, n, |e, v| {
            Complex64::new(f64::from(v == (e + 1) % n) - f64::from(v == e), 0.0)
        });
        let mut d = CMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                d[(n + i, j)] = d0[(i, j)];
                d[(j, n + i)] = d0[(i, j)].conj();
            }
        }
        let grading: Vec<i8> = (0..2 * n).map(|i| if i < n { 1 } else { -1 }).collect();
        let b = betti_from_complex(&d, &grading, 1e-9).unwrap();
        assert_eq!((b.b_even, b.b_odd), (1.0, 1.0));
    }

    #[test]
    fn ambiguous_kernel_is_reported() {
        let err = twisted_betti(&CMatrix::diag(&[1e-9, 1.0]), &CMatrix::zeros(1, 1), 1e-9).unwrap_err();
        assert!(matches!(err, Error::KernelAmbiguous { .. }));
    }
}
