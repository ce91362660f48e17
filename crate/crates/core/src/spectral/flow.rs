use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, CMatrix};
use crate::spectral::{eta_from_values, kernel_dim, ZERO_TOL_REL};

type Generator = Arc<dyn Fn(f64) -> CMatrix + Send + Sync>;

/// A path of Hermitian matrices over `t ∈ [0, 1]`.
#[derive(Clone)]
pub enum SpectralPath {
    /// Fixed samples `(t, A_t)`, ascending in `t`, starting at 0 and ending at 1.
    Samples(Vec<(f64, CMatrix)>),
    /// `A₀ + t(A₁ − A₀)`.
    Linear { a0: CMatrix, a1: CMatrix },
    Generator(Generator),
}

impl fmt::Debug for SpectralPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralPath::Samples(s) => write!(f, "Samples({} points)", s.len()),
            SpectralPath::Linear { a0, .. } => write!(f, "Linear({}x{})", a0.rows(), a0.cols()),
            SpectralPath::Generator(_) => write!(f, "Generator"),
        }
    }
}

impl SpectralPath {
    pub fn generator(f: impl Fn(f64) -> CMatrix + Send + Sync + 'static) -> Self {
        SpectralPath::Generator(Arc::new(f))
    }

    fn at(&self, t: f64) -> Option<CMatrix> {
        match self {
            SpectralPath::Samples(_) => None,
            SpectralPath::Linear { a0, a1 } => {
                let d = a1.sub(a0).ok()?;
                a0.add(&d.scale_real(t)).ok().map(|m| m.hermitian_part())
            }
            SpectralPath::Generator(g) => Some(g(t)),
        }
    }

    fn initial(&self, segments: usize) -> Result<Vec<(f64, CMatrix)>> {
        match self {
            SpectralPath::Samples(s) => {
                if s.len() < 2 || s[0].0 != 0.0 || s[s.len() - 1].0 != 1.0 || s.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(Error::Config("path samples must ascend from t = 0 to t = 1".into()));
                }
                Ok(s.clone())
            }
            _ => Ok((0..=segments)
                .map(|i| {
                    let t = i as f64 / segments as f64;
                    (t, self.at(t).expect("callable path"))
                })
                .collect()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SpectralFlowOptions {
    /// Absolute zero tolerance; `None` uses `1e−9` times the largest endpoint spectral radius.
    pub zero_tol: Option<f64>,
    pub initial_segments: usize,
    pub max_evaluations: usize,
    pub min_step: f64,
}

impl Default for SpectralFlowOptions {
    fn default() -> Self {
        SpectralFlowOptions {
            zero_tol: None,
            initial_segments: 16,
            max_evaluations: 20_000,
            min_step: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralFlowReport {
    /// Net count from eigenvalue tracking.
    pub sf: i64,
    /// `[η(A₁) + ½ dim ker A₁] − [η(A₀) + ½ dim ker A₀]`.
    pub eta_formula: f64,
    pub eta_start: f64,
    pub eta_end: f64,
    pub kernel_start: usize,
    pub kernel_end: usize,
    pub zero_tol: f64,
    pub evaluations: usize,
    pub segments: usize,
}

fn negatives(values: &[f64], tol: f64) -> Vec<bool> {
    values.iter().map(|&x| x < -tol).collect()
}

/// Whether the step from `a` to `b` resolves every eigenvalue that could reach zero:
/// the largest displacement must stay below half the smallest gap around such eigenvalues.
fn resolved(a: &[f64], b: &[f64], tol: f64) -> bool {
    let disp = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let (na, nb) = (negatives(a, tol), negatives(b, tol));
    let n = a.len();
    let mut gap = f64::INFINITY;
    let mut any = false;
    for i in 0..n {
        let candidate = na[i] != nb[i] || a[i].abs().min(b[i].abs()) <= disp + tol;
        if !candidate {
            continue;
        }
        any = true;
        for v in [a, b] {
            if i + 1 < n {
                gap = gap.min(v[i + 1] - v[i]);
            }
            if i > 0 {
                gap = gap.min(v[i] - v[i - 1]);
            }
        }
    }
    !any || disp < 0.5 * gap
}

/// Per-index crossings between consecutive samples: `+1` for leaving the
/// negative half-line, `−1` for entering it.
fn crossings(a: &[f64], b: &[f64], tol: f64) -> i64 {
    negatives(a, tol)
        .iter()
        .zip(negatives(b, tol))
        .map(|(&x, y)| i64::from(x && !y) - i64::from(!x && y))
        .sum()
}

/// Spectral flow by eigenvalue tracking with adaptive bisection, checked
/// against the eta/kernel formula. Eigenvalues within the zero tolerance count
/// as nonnegative, which gives endpoint kernels weight ½ in the formula.
pub fn spectral_flow(path: &SpectralPath, opts: &SpectralFlowOptions) -> Result<SpectralFlowReport> {
    let samples = path.initial(opts.initial_segments.max(1))?;
    let mut evaluations = samples.len();
    let mut spectra = Vec::with_capacity(samples.len());
    for (t, m) in &samples {
        spectra.push((*t, eigvalsh(m)?));
    }
    let n = spectra[0].1.len();
    if spectra.iter().any(|(_, v)| v.len() != n) {
        return Err(Error::DimensionMismatch("path samples differ in dimension".into()));
    }
    let radius = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tol = opts
        .zero_tol
        .unwrap_or_else(|| ZERO_TOL_REL * radius(&spectra[0].1).max(radius(&spectra[spectra.len() - 1].1)));

    let mut sf = 0i64;
    let mut segments = 0usize;
    // Depth-first over segments, left to right.
    let mut stack: Vec<((f64, Vec<f64>), (f64, Vec<f64>))> = spectra.windows(2).rev().map(|w| (w[0].clone(), w[1].clone())).collect();
    while let Some(((ta, va), (tb, vb))) = stack.pop() {
        if resolved(&va, &vb, tol) {
            sf += crossings(&va, &vb, tol);
            segments += 1;
            continue;
        }
        let tm = 0.5 * (ta + tb);
        if tb - ta < opts.min_step || evaluations >= opts.max_evaluations {
            return Err(Error::RefinementExhausted { t: tm });
        }
        let Some(m) = path.at(tm) else {
            return Err(Error::RefinementExhausted { t: tm });
        };
        let vm = eigvalsh(&m)?;
        evaluations += 1;
        stack.push(((tm, vm.clone()), (tb, vb)));
        stack.push(((ta, va), (tm, vm)));
    }

    let (v0, v1) = (&spectra[0].1, &spectra[spectra.len() - 1].1);
    let (eta0, eta1) = (eta_from_values(v0, tol), eta_from_values(v1, tol));
    let (k0, k1) = (kernel_dim(v0, tol), kernel_dim(v1, tol));
    let eta_formula = (eta1 + 0.5 * k1 as f64) - (eta0 + 0.5 * k0 as f64);
    if eta_formula != sf as f64 {
        return Err(Error::Degenerate(format!(
            "tracking count {sf} disagrees with the eta/kernel formula {eta_formula}"
        )));
    }
    Ok(SpectralFlowReport {
        sf,
        eta_formula,
        eta_start: eta0,
        eta_end: eta1,
        kernel_start: k0,
        kernel_end: k1,
        zero_tol: tol,
        evaluations,
        segments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn single_upward_crossing() {
        let path = SpectralPath::generator(|t| CMatrix::diag(&[t - 0.5]));
        let r = spectral_flow(&path, &SpectralFlowOptions::default()).unwrap();
        assert_eq!(r.sf, 1);
        assert_eq!(r.eta_formula, 1.0);
    }

    #[test]
    fn constant_path() {
        let a = CMatrix::diag(&[1.0, -1.0, 0.5]);
        let r = spectral_flow(&SpectralPath::Linear { a0: a.clone(), a1: a }, &SpectralFlowOptions::default()).unwrap();
        assert_eq!(r.sf, 0);
    }

    #[test]
    fn endpoint_kernel_counts_half() {
        // diag(t): starts in the kernel, ends positive; no negative eigenvalue is ever lost.
        let r = spectral_flow(&SpectralPath::generator(|t| CMatrix::diag(&[t])), &SpectralFlowOptions::default()).unwrap();
        assert_eq!((r.sf, r.kernel_start, r.eta_end), (0, 1, 0.5));
    }

    #[test]
    fn exact_degenerate_crossing_exhausts_budget() {
        // Two eigenvalues meet exactly at zero and never separate from each other.
        let path = SpectralPath::generator(|t| {
            let x = t - 0.5 + 1e-3;
            CMatrix::from_fn(2, 2, |i, j| if i == j { Complex64::new(x, 0.0) } else { Complex64::new(0.0, 0.0) })
        });
        let opts = SpectralFlowOptions {
            max_evaluations: 200,
            ..Default::default()
        };
        assert!(matches!(spectral_flow(&path, &opts), Err(Error::RefinementExhausted { .. })));
    }
}
