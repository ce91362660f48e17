use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{same_multiplier, AlgebraElement};
use crate::cohomology::{sample_tuple, CochainFn, GroupCochain};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::multiplier::Multiplier;
use crate::phase::Phase;
use crate::report::CheckReport;
use crate::traces::TraceFunctional;

/// A multilinear functional on `ℂ(Γ,σ)^{n+1}` given by its values on basis tuples.
#[derive(Clone)]
pub struct CyclicCochain {
    name: String,
    multiplier: Arc<Multiplier>,
    degree: usize,
    f: CochainFn,
}

impl fmt::Debug for CyclicCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CyclicCochain")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .finish()
    }
}

/// `tr₍₂₎(δ_{γ₀}∗…∗δ_{γₙ})`: the accumulated multiplier phase when the product is `e`.
fn regular_trace_of_product(m: &Multiplier, g: &[GroupElement]) -> Result<(Complex64, bool)> {
    let group = m.group();
    let mut acc = g[0].clone();
    let mut phase = Phase::ONE;
    for x in &g[1..] {
        phase *= m.evaluate(&acc, x)?;
        acc = group.multiply(&acc, x)?;
    }
    Ok((phase.to_complex(), acc == group.identity()))
}

impl CyclicCochain {
    pub fn new(
        name: impl Into<String>,
        multiplier: Arc<Multiplier>,
        degree: usize,
        f: impl Fn(&[GroupElement]) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        CyclicCochain {
            name: name.into(),
            multiplier,
            degree,
            f: Arc::new(f),
        }
    }

    /// A trace as a degree-0 cochain.
    pub fn from_trace(tau: TraceFunctional) -> Self {
        let m = tau.multiplier().clone();
        Self::new("trace", m, 0, move |g| tau.basis_value(&g[0]))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn multiplier(&self) -> &Arc<Multiplier> {
        &self.multiplier
    }

    pub fn basis(&self, g: &[GroupElement]) -> Result<Complex64> {
        if g.len() != self.degree + 1 {
            return Err(Error::DimensionMismatch(format!(
                "degree-{} cochain evaluated on {} arguments",
                self.degree,
                g.len()
            )));
        }
        (self.f)(g)
    }

    /// Multilinear extension over the supports of the arguments.
    pub fn evaluate(&self, a: &[AlgebraElement]) -> Result<Complex64> {
        if a.len() != self.degree + 1 {
            return Err(Error::DimensionMismatch(format!("{} arguments", a.len())));
        }
        if a.iter().any(|x| !same_multiplier(x.multiplier(), &self.multiplier)) {
            return Err(Error::MultiplierMismatch);
        }
        let terms: Vec<Vec<(&GroupElement, &Complex64)>> = a.iter().map(|x| x.terms().iter().collect()).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = vec![0usize; terms.len()];
        if terms.iter().any(|t| t.is_empty()) {
            return Ok(acc);
        }
        loop {
            let g: Vec<GroupElement> = idx.iter().zip(&terms).map(|(&i, t)| t[i].0.clone()).collect();
            let c: Complex64 = idx.iter().zip(&terms).map(|(&i, t)| *t[i].1).product();
            acc += c * self.basis(&g)?;
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(acc);
                }
                idx[k] += 1;
                if idx[k] < terms[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// `(bᵗφ)(a₀,…,aₙ₊₁) = Σ_{i=0}^{n} (−1)ⁱ φ(…, aᵢaᵢ₊₁, …) + (−1)ⁿ⁺¹ φ(aₙ₊₁a₀, a₁, …, aₙ)`.
    pub fn cyclic_boundary(&self) -> CyclicCochain {
        let phi = self.clone();
        let m = self.multiplier.clone();
        let n = self.degree;
        Self::new(format!("b({})", self.name), self.multiplier.clone(), n + 1, move |g| {
            let group = m.group();
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..=n {
                let mut args: Vec<GroupElement> = Vec::with_capacity(n + 1);
                args.extend_from_slice(&g[..i]);
                args.push(group.multiply(&g[i], &g[i + 1])?);
                args.extend_from_slice(&g[i + 2..]);
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                acc += s * m.evaluate(&g[i], &g[i + 1])?.to_complex() * (phi.f)(&args)?;
            }
            let mut args = vec![group.multiply(&g[n + 1], &g[0])?];
            args.extend_from_slice(&g[1..=n]);
            let s = if (n + 1) % 2 == 0 { 1.0 } else { -1.0 };
            acc += s * m.evaluate(&g[n + 1], &g[0])?.to_complex() * (phi.f)(&args)?;
            Ok(acc)
        })
    }

    fn sampled(&self, samples: usize, seed: u64, tol: f64, mut check: impl FnMut(&[GroupElement], Complex64, bool) -> Result<f64>) -> Result<CheckReport> {
        let group = self.multiplier.group().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = CheckReport::new(false);
        for i in 0..samples {
            let t = sample_tuple(&group, &mut rng, self.degree + 1, 4, i % 2 == 0)?;
            let is_e = group.multiply_all(t.iter())? == group.identity();
            let v = self.basis(&t)?;
            let d = check(&t, v, is_e)?;
            report.record(d, tol, || t.clone());
        }
        Ok(report)
    }

    /// Vanishes on basis tuples whose product is not `e`.
    pub fn check_localized(&self, samples: usize, seed: u64) -> Result<CheckReport> {
        self.sampled(samples, seed, 0.0, |_, v, is_e| Ok(if is_e { 0.0 } else { v.norm() }))
    }

    /// Vanishes on basis tuples whose product is `e`.
    pub fn check_delocalized(&self, samples: usize, seed: u64) -> Result<CheckReport> {
        self.sampled(samples, seed, 0.0, |_, v, is_e| Ok(if is_e { v.norm() } else { 0.0 }))
    }

    /// `φ(γₙ, γ₀, …, γₙ₋₁) = (−1)ⁿ φ(γ₀, …, γₙ)`.
    pub fn check_cyclic_symmetry(&self, samples: usize, seed: u64, tol: f64) -> Result<CheckReport> {
        let n = self.degree;
        let s = if n % 2 == 0 { 1.0 } else { -1.0 };
        let phi = self.clone();
        self.sampled(samples, seed, tol, move |t, v, _| {
            let mut r = vec![t[n].clone()];
            r.extend_from_slice(&t[..n]);
            Ok((phi.basis(&r)? - s * v).norm())
        })
    }

    /// `|φ − ψ|` on random basis tuples.
    pub fn compare(&self, other: &CyclicCochain, samples: usize, seed: u64, tol: f64) -> Result<CheckReport> {
        if other.degree != self.degree {
            return Err(Error::DimensionMismatch("cochain degrees differ".into()));
        }
        let o = other.clone();
        self.sampled(samples, seed, tol, move |t, v, _| Ok((o.basis(t)? - v).norm()))
    }
}

/// `τ_c(δ_{γ₀},…,δ_{γₙ}) = tr₍₂₎(δ_{γ₀}∗…∗δ_{γₙ})·c(e, γ₁, γ₁γ₂, …, γ₁⋯γₙ)`.
pub fn to_cyclic(c: &GroupCochain, multiplier: Arc<Multiplier>) -> Result<CyclicCochain> {
    if !c.is_invariant() || !c.is_alternating() {
        return Err(Error::MissingFlags(format!(
            "{} must be flagged invariant and alternating",
            c.name()
        )));
    }
    if multiplier.group() != c.group() {
        return Err(Error::MultiplierMismatch);
    }
    let c = c.clone();
    let m = multiplier.clone();
    Ok(CyclicCochain::new(format!("tau[{}]", c.name()), multiplier, c.degree(), move |g| {
        let (phase, is_e) = regular_trace_of_product(&m, g)?;
        if !is_e {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(phase * c.inhomogeneous(&g[1..])?)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupDescriptor;
    use crate::multiplier::Gauge;
    use num_rational::Rational64;

    #[test]
    fn constant_zero_cochain_gives_regular_trace() {
        let m = Arc::new(Multiplier::magnetic(Rational64::new(1, 3), Gauge::Landau));
        let c = GroupCochain::constant(m.group().clone(), 1.0);
        let tau = to_cyclic(&c, m.clone()).unwrap();
        let tr = TraceFunctional::regular(m.clone());
        for g in m.group().ball(3) {
            assert_eq!(tau.basis(&[g.clone()]).unwrap(), tr.basis_value(&g).unwrap());
        }
    }

    #[test]
    fn boundary_of_regular_trace_vanishes() {
        let m = Arc::new(Multiplier::magnetic(Rational64::new(2, 7), Gauge::Symmetric));
        let b = CyclicCochain::from_trace(TraceFunctional::regular(m.clone())).cyclic_boundary();
        for g in m.group().ball(3) {
            let gi = m.group().inverse(&g).unwrap();
            assert!(b.basis(&[g, gi]).unwrap().norm() <= 1e-15);
        }
    }

    #[test]
    fn transfer_commutes_with_differentials() {
        for theta in [Rational64::new(0, 1), Rational64::new(1, 3)] {
            let m = Arc::new(Multiplier::magnetic(theta, Gauge::Symmetric));
            let c = GroupCochain::random_alternating(Arc::new(GroupDescriptor::z2()), 1, 77);
            let lhs = to_cyclic(&c, m.clone()).unwrap().cyclic_boundary();
            let rhs = to_cyclic(&c.differential(), m.clone()).unwrap();
            assert!(lhs.compare(&rhs, 500, 1, 1e-12).unwrap().pass);
        }
    }

    #[test]
    fn flags_are_required() {
        let m = Arc::new(Multiplier::magnetic(Rational64::new(1, 3), Gauge::Landau));
        let c = GroupCochain::new("raw", m.group().clone(), 1, true, false, |_| Ok(Complex64::new(1.0, 0.0)));
        assert!(matches!(to_cyclic(&c, m), Err(Error::MissingFlags(_))));
    }
}
