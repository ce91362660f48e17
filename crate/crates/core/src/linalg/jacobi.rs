use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Relative Hermiticity tolerance: `‖A − A*‖_max ≤ HERMITIAN_TOL·‖A‖_max`.
pub const HERMITIAN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
    /// `max_j ‖A v_j − λ_j v_j‖ / ‖A‖_F`, zero for the zero matrix.
    pub residual: f64,
}

impl EigenDecomposition {
    /// `V f(Λ) V*`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        CMatrix::from_fn(n, n, |i, j| (0..n).map(|k| v[(i, k)] * fv[k] * v[(j, k)].conj()).sum())
    }

    /// Orthogonal projection onto the span of eigenvectors whose eigenvalue
    /// satisfies `keep`.
    pub fn spectral_projection(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        self.apply_fn(|x| if keep(x) { 1.0 } else { 0.0 })
    }
}

fn check_hermitian(a: &CMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_TOL * a.max_abs() {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

/// Hermitian eigendecomposition by cyclic Jacobi sweeps in fixed pivot order
/// `(0,1), (0,2), …, (n−2,n−1)`. Deterministic for identical input bits.
pub fn eigh(a: &CMatrix) -> Result<EigenDecomposition> {
    check_hermitian(a)?;
    let n = a.rows();
    let (values, vectors) = jacobi(a, true);
    let vectors = vectors.expect("vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let v = CMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    let norm = a.frobenius();
    let mut residual: f64 = 0.0;
    if norm > 0.0 {
        let av = a.matmul(&v)?;
        for j in 0..n {
            let r: f64 = (0..n).map(|i| (av[(i, j)] - v[(i, j)] * sorted[j]).norm_sqr()).sum();
            residual = residual.max(r.sqrt() / norm);
        }
    }
    Ok(EigenDecomposition {
        values: sorted,
        vectors: v,
        residual,
    })
}

/// Ascending eigenvalues only.
pub fn eigvalsh(a: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let (mut values, _) = jacobi(a, false);
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn jacobi(a: &CMatrix, want_vectors: bool) -> (Vec<f64>, Option<CMatrix>) {
    let n = a.rows();
    // Work on the Hermitian part so that tiny input asymmetry cannot bias the result.
    let mut m = CMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let mut v = want_vectors.then(|| CMatrix::identity(n));
    let scale = m.frobenius();
    if n < 2 || scale == 0.0 {
        return ((0..n).map(|i| m[(i, i)].re).collect(), v);
    }
    let target = f64::EPSILON * scale;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut m, v.as_mut(), p, q);
            }
        }
    }
    ((0..n).map(|i| m[(i, i)].re).collect(), v)
}

/// Annihilates `m[p][q]` with `G = [[c, s], [−s e^{−iφ}, c e^{−iφ}]]` acting
/// on coordinates `(p, q)`, where `m[p][q] = |m[p][q]| e^{iφ}`: `m ← G*mG`, `v ← vG`.
fn rotate(m: &mut CMatrix, v: Option<&mut CMatrix>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    if abs < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = Complex64::new(0.0, 0.0);
        m[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = apq / abs;
    let emi = phase.conj();
    let theta = (aqq - app) / (2.0 * abs);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = m.rows();
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -emi * s;
    let g_qq = emi * c;
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * g_pp + mkq * g_qp;
        m[(k, q)] = mkp * g_pq + mkq * g_qq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * mpk + g_qp.conj() * mqk;
        m[(q, k)] = g_pq.conj() * mpk + g_qq.conj() * mqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * g_pp + vkq * g_qp;
            v[(k, q)] = vkp * g_pq + vkq * g_qq;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let b = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        b.add(&b.adjoint()).unwrap()
    }

    #[test]
    fn small_cases() {
        assert_eq!(eigvalsh(&CMatrix::diag(&[3.0, 1.0, 2.0])).unwrap(), vec![1.0, 2.0, 3.0]);
        let x = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = eigvalsh(&x).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn residual_and_orthonormality_on_random_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1, 2, 7, 40] {
            let a = random_hermitian(n, &mut rng);
            let d = eigh(&a).unwrap();
            assert!(d.residual <= 1e-12, "n={n} residual {}", d.residual);
            let av = a.matmul(&d.vectors).unwrap();
            let vl = CMatrix::from_fn(n, n, |i, j| d.vectors[(i, j)] * d.values[j]);
            assert!(av.sub(&vl).unwrap().frobenius() <= 1e-10 * a.frobenius());
            let gram = d.vectors.adjoint().matmul(&d.vectors).unwrap();
            assert!(gram.sub(&CMatrix::identity(n)).unwrap().max_abs() <= 1e-12);
            assert!(d.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(eigh(&a), Err(Error::NotHermitian { .. })));
        assert!(matches!(eigh(&CMatrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn deterministic_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hermitian(12, &mut rng);
        let x = eigh(&a).unwrap();
        let y = eigh(&a).unwrap();
        assert_eq!(x.values, y.values);
        assert_eq!(x.vectors, y.vectors);
    }
}
