use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::cohomology::GroupCochain;
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::linalg::CMatrix;
use crate::representations::left_regular;

/// `(Σ |a_γ|² (1 + l(γ))^{2s})^{1/2}`.
pub fn sobolev_norm(a: &AlgebraElement, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::Config(format!("Sobolev exponent must be nonnegative, got {s}")));
    }
    let group = a.group();
    let mut acc = 0.0;
    for (g, c) in a.terms() {
        let l = group.word_length(g)? as f64;
        acc += c.norm_sqr() * (1.0 + l).powf(2.0 * s);
    }
    Ok(acc.sqrt())
}

/// `√C(2j, j)`: from `(1+l)ʲ = Σᵢ C(j,i) lⁱ` and Cauchy–Schwarz,
/// `‖a‖_{Hʲ} ≤ √(Σᵢ C(j,i)²) · (Σᵢ ‖lⁱa‖²)^{1/2} ≤ √C(2j,j) Σᵢ ‖lⁱa‖`.
pub fn sobolev_constant(j: usize) -> f64 {
    let mut b = 1.0f64;
    for i in 0..j {
        b = b * (2 * j - i) as f64 / (i + 1) as f64;
    }
    b.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SobolevProfile {
    pub radius: usize,
    /// `(s, ‖a‖_{Hˢ})`.
    pub sobolev: Vec<(f64, f64)>,
    /// `‖𝔡ⁱ(λ_R(a))δ_e‖` for `i = 0..=j_max`.
    pub derivation_norms: Vec<f64>,
    /// `max_i max_γ |(𝔡ⁱ(λ_R(a))δ_e)_γ − l(γ)ⁱ a_γ|`.
    pub identity_defect: f64,
    /// `√C(2j,j)` for each `j ≤ j_max`.
    pub constants: Vec<f64>,
    /// `‖a‖_{Hʲ} / Σ_{i≤j} ‖𝔡ⁱ(a)δ_e‖` for each `j ≤ j_max` (0 for `a = 0`).
    pub ratios: Vec<f64>,
    pub bound_holds: bool,
}

pub fn sobolev_profile(a: &AlgebraElement, s_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    s_grid.iter().map(|&s| Ok((s, sobolev_norm(a, s)?))).collect()
}

/// Iterated commutators `𝔡(T) = [D_l, T]` of the truncated left regular
/// operator with the length operator `D_l`, applied to `δ_e`.
///
/// Because `λ(a)δ_e = a` and the support lies in the ball, `𝔡ʲ(λ_R(a))δ_e`
/// must equal `D_lʲ a` exactly; the defect is reported.
pub fn derivation_chain(a: &AlgebraElement, j_max: usize, radius: usize) -> Result<SobolevProfile> {
    let needed = a.sup_support_length();
    if radius < needed {
        return Err(Error::TruncationTooSmall { radius, needed });
    }
    let group = a.group();
    let t = left_regular(a, radius)?;
    let lengths: Vec<f64> = t.basis.iter().map(|g| group.word_length(g).map(|l| l as f64)).collect::<Result<_>>()?;
    let d = CMatrix::diag(&lengths);
    let e = t.position(&group.identity()).expect("identity lies in the ball");
    let mut cur = t.matrix.clone();
    let mut derivation_norms = Vec::with_capacity(j_max + 1);
    let mut identity_defect = 0.0f64;
    // D_lⁱ(a), applied one factor at a time.
    let mut expected: Vec<Complex64> = t.basis.iter().map(|g| a.coefficient(g)).collect();
    for i in 0..=j_max {
        if i > 0 {
            cur = d.matmul(&cur)?.sub(&cur.matmul(&d)?)?;
            for (x, &l) in expected.iter_mut().zip(&lengths) {
                *x = Complex64::new(l, 0.0) * *x;
            }
        }
        let col = cur.column(e);
        derivation_norms.push(col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt());
        for (c, x) in col.iter().zip(&expected) {
            identity_defect = identity_defect.max((c - x).norm());
        }
    }
    let constants: Vec<f64> = (0..=j_max).map(sobolev_constant).collect();
    let mut ratios = Vec::with_capacity(j_max + 1);
    let mut bound_holds = true;
    for j in 0..=j_max {
        let lhs = sobolev_norm(a, j as f64)?;
        let rhs: f64 = derivation_norms[..=j].iter().sum();
        ratios.push(if rhs > 0.0 { lhs / rhs } else { 0.0 });
        if lhs > constants[j] * rhs * (1.0 + 1e-12) {
            bound_holds = false;
        }
    }
    Ok(SobolevProfile {
        radius,
        sobolev: sobolev_profile(a, &(0..=j_max).map(|j| j as f64).collect::<Vec<_>>())?,
        derivation_norms,
        identity_defect,
        constants,
        ratios,
        bound_holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    pub degree: f64,
    pub residual: f64,
    /// `(r, value)` samples used in the fit.
    pub samples: Vec<(usize, f64)>,
}

/// Least-squares slope of `log value` against `log(1 + r)`.
fn fit(samples: Vec<(usize, f64)>) -> Result<GrowthFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|&(r, v)| ((1.0 + r as f64).ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Degenerate("fewer than two nonzero samples".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let degree = sxy / sxx;
    let residual = (pts.iter().map(|p| (p.1 - my - degree * (p.0 - mx)).powi(2)).sum::<f64>() / n).sqrt();
    Ok(GrowthFit {
        degree,
        residual,
        samples,
    })
}

/// Growth of `max |c(e, g₁, …, gₙ)|` over `gᵢ` on the sphere of radius `r`,
/// for `r` doubling from `max(1, radius/16)` up to `radius` (exhaustive up to
/// 300000 tuples, 20000 samples beyond).
pub fn growth_fit(c: &GroupCochain, radius: usize) -> Result<GrowthFit> {
    let group = c.group();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f17);
    let mut samples = Vec::new();
    let mut r = (radius / 16).max(1);
    while r <= radius {
        let sphere = group.sphere(r);
        let n = c.degree();
        let total = (sphere.len() as f64).powi(n as i32);
        let mut best = 0.0f64;
        let mut eval = |rest: &[GroupElement]| -> Result<()> {
            let mut args = vec![group.identity()];
            args.extend_from_slice(rest);
            best = best.max(c.evaluate(&args)?.norm());
            Ok(())
        };
        if n == 0 {
            eval(&[])?;
        } else if total <= 300_000.0 {
            let mut idx = vec![0usize; n];
            'outer: loop {
                let rest: Vec<GroupElement> = idx.iter().map(|&i| sphere[i].clone()).collect();
                eval(&rest)?;
                for k in 0..n {
                    idx[k] += 1;
                    if idx[k] < sphere.len() {
                        continue 'outer;
                    }
                    idx[k] = 0;
                }
                break;
            }
        } else {
            for _ in 0..20000 {
                let rest: Vec<GroupElement> = (0..n).map(|_| sphere[rng.gen_range(0..sphere.len())].clone()).collect();
                eval(&rest)?;
            }
        }
        samples.push((r, best));
        r *= 2;
    }
    if samples.iter().all(|(_, v)| *v == 0.0) {
        return Err(Error::Degenerate("cochain vanishes on all samples".into()));
    }
    fit(samples)
}

/// Growth of `#(⟨g⟩ ∩ B_r)` for `r` doubling from 1 up to `radius`.
pub fn growth_fit_class(group: &GroupDescriptor, g: &GroupElement, radius: usize) -> Result<GrowthFit> {
    let mut samples = Vec::new();
    let mut r = 1;
    while r <= radius {
        let count = group
            .ball(r)
            .iter()
            .map(|x| group.in_conjugacy_class(g, x))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .filter(|&b| b)
            .count();
        samples.push((r, count as f64));
        r *= 2;
    }
    fit(samples)
}
