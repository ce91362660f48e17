//! Homogeneous group cochains, their transfer to cyclic cochains localized at
//! the identity, the cyclic coboundary `bᵗ`, rapid-decay Sobolev norms and the
//! derivation chain of the length operator.

mod cyclic;
mod sobolev;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{splitmix, GroupDescriptor, GroupElement};
use crate::report::CheckReport;

pub use cyclic::{to_cyclic, CyclicCochain};
pub use sobolev::{
    derivation_chain, growth_fit, growth_fit_class, sobolev_constant, sobolev_norm, sobolev_profile, GrowthFit,
    SobolevProfile,
};

pub type CochainFn = Arc<dyn Fn(&[GroupElement]) -> Result<Complex64> + Send + Sync>;

/// A function on `Γ^{n+1}` with its claimed invariance and alternation flags.
#[derive(Clone)]
pub struct GroupCochain {
    name: String,
    group: Arc<GroupDescriptor>,
    degree: usize,
    f: CochainFn,
    invariant: bool,
    alternating: bool,
}

impl fmt::Debug for GroupCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupCochain")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("invariant", &self.invariant)
            .field("alternating", &self.alternating)
            .finish()
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sign_of_permutation(p: &[usize]) -> f64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1.0;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

impl GroupCochain {
    pub fn new(
        name: impl Into<String>,
        group: Arc<GroupDescriptor>,
        degree: usize,
        invariant: bool,
        alternating: bool,
        f: impl Fn(&[GroupElement]) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        GroupCochain {
            name: name.into(),
            group,
            degree,
            f: Arc::new(f),
            invariant,
            alternating,
        }
    }

    /// `c(g₀,g₁,g₂) = ½ det(g₁ − g₀, g₂ − g₀)` on `ℤ²`.
    pub fn area_z2() -> Self {
        Self::new("area-z2", Arc::new(GroupDescriptor::z2()), 2, true, true, |g| {
            let v: Vec<&[i64]> = g.iter().map(|x| x.as_vector().unwrap_or(&[0, 0])).collect();
            let (a, b) = ([v[1][0] - v[0][0], v[1][1] - v[0][1]], [v[2][0] - v[0][0], v[2][1] - v[0][1]]);
            Ok(real(0.5 * (a[0] * b[1] - a[1] * b[0]) as f64))
        })
    }

    /// The constant 0-cochain.
    pub fn constant(group: Arc<GroupDescriptor>, value: f64) -> Self {
        Self::new("constant", group, 0, true, true, move |_| Ok(real(value)))
    }

    /// `c(g₀,g₁) = (g₁ − g₀)_k` on `ℤ^rank`.
    pub fn linear_z(rank: usize, k: usize) -> Self {
        Self::new(format!("linear-z({k})"), Arc::new(GroupDescriptor::free_abelian(rank)), 1, true, true, move |g| {
            let a = g[0].as_vector().map_or(0, |v| v.get(k).copied().unwrap_or(0));
            let b = g[1].as_vector().map_or(0, |v| v.get(k).copied().unwrap_or(0));
            Ok(real((b - a) as f64))
        })
    }

    /// Antisymmetrization of `h(g₀⁻¹g₁, …, g₀⁻¹gₙ)` with hashed uniform values
    /// of `h` in `[−1, 1]`: invariant and alternating.
    pub fn random_alternating(group: Arc<GroupDescriptor>, degree: usize, seed: u64) -> Self {
        let g2 = group.clone();
        let perms = permutations(degree + 1);
        Self::new(format!("random-{degree}-{seed}"), group, degree, true, true, move |g| {
            let mut acc = 0.0;
            for p in &perms {
                let t: Vec<&GroupElement> = p.iter().map(|&i| &g[i]).collect();
                let base = g2.inverse(t[0])?;
                let mut h = splitmix(seed);
                for x in &t[1..] {
                    h = splitmix(h ^ g2.multiply(&base, x)?.fingerprint());
                }
                let u = (h >> 11) as f64 / (1u64 << 53) as f64;
                acc += sign_of_permutation(p) * (2.0 * u - 1.0);
            }
            Ok(real(acc))
        })
    }

    /// Homogeneous cochain `c(γ₀,…,γₙ) = f(γ₀⁻¹γ₁, γ₁⁻¹γ₂, …, γₙ₋₁⁻¹γₙ)` from
    /// inhomogeneous data `f`; invariant by construction.
    pub fn from_inhomogeneous(
        name: impl Into<String>,
        group: Arc<GroupDescriptor>,
        degree: usize,
        alternating: bool,
        f: impl Fn(&[GroupElement]) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        let g2 = group.clone();
        Self::new(name, group, degree, true, alternating, move |g| {
            let steps = g
                .windows(2)
                .map(|w| g2.multiply(&g2.inverse(&w[0])?, &w[1]))
                .collect::<Result<Vec<_>>>()?;
            f(&steps)
        })
    }

    /// `f(g₁,…,gₙ) = c(e, g₁, g₁g₂, …, g₁⋯gₙ)`.
    pub fn inhomogeneous(&self, g: &[GroupElement]) -> Result<Complex64> {
        let mut args = vec![self.group.identity()];
        for x in g {
            let next = self.group.multiply(args.last().expect("nonempty"), x)?;
            args.push(next);
        }
        self.evaluate(&args)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &Arc<GroupDescriptor> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_invariant(&self) -> bool {
        self.invariant
    }

    pub fn is_alternating(&self) -> bool {
        self.alternating
    }

    pub fn evaluate(&self, g: &[GroupElement]) -> Result<Complex64> {
        if g.len() != self.degree + 1 {
            return Err(Error::DimensionMismatch(format!(
                "degree-{} cochain evaluated on {} arguments",
                self.degree,
                g.len()
            )));
        }
        for x in g {
            self.group.check(x)?;
        }
        (self.f)(g)
    }

    /// `(d c)(γ₀,…,γₙ₊₁) = Σⱼ (−1)ʲ c(γ₀,…,γ̂ⱼ,…,γₙ₊₁)`.
    pub fn differential(&self) -> GroupCochain {
        let c = self.clone();
        Self::new(
            format!("d({})", self.name),
            self.group.clone(),
            self.degree + 1,
            self.invariant,
            self.alternating,
            move |g| {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..g.len() {
                    let omitted: Vec<GroupElement> = g.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, x)| x.clone()).collect();
                    let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                    acc += s * (c.f)(&omitted)?;
                }
                Ok(acc)
            },
        )
    }

    /// Checks the claimed flags on random tuples from the box of the given radius.
    pub fn verify_flags(&self, samples: usize, radius: i64, seed: u64, tol: f64) -> Result<CheckReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = CheckReport::new(false);
        let n = self.degree + 1;
        for _ in 0..samples {
            let t: Vec<GroupElement> = (0..n).map(|_| self.group.random_element(&mut rng, radius)).collect();
            let v = self.evaluate(&t)?;
            if self.invariant {
                let h = self.group.random_element(&mut rng, radius);
                let moved = t.iter().map(|x| self.group.multiply(&h, x)).collect::<Result<Vec<_>>>()?;
                let d = (self.evaluate(&moved)? - v).norm();
                report.record(d, tol, || t.clone());
            }
            if self.alternating && n >= 2 {
                let i = rng.gen_range(0..n - 1);
                let mut s = t.clone();
                s.swap(i, i + 1);
                let d = (self.evaluate(&s)? + v).norm();
                report.record(d, tol, || t.clone());
            }
        }
        Ok(report)
    }

    /// Checks `d c = 0` on random tuples.
    pub fn check_closed(&self, samples: usize, radius: i64, seed: u64, tol: f64) -> Result<CheckReport> {
        let dc = self.differential();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = CheckReport::new(false);
        for _ in 0..samples {
            let t: Vec<GroupElement> = (0..=dc.degree).map(|_| self.group.random_element(&mut rng, radius)).collect();
            report.record(dc.evaluate(&t)?.norm(), tol, || t.clone());
        }
        Ok(report)
    }
}

/// Random tuple of `len` elements; with `closed`, the last one makes the product `e`.
pub fn sample_tuple<R: Rng + ?Sized>(group: &GroupDescriptor, rng: &mut R, len: usize, radius: i64, closed: bool) -> Result<Vec<GroupElement>> {
    let mut t: Vec<GroupElement> = (0..len).map(|_| group.random_element(rng, radius)).collect();
    if closed && len > 0 {
        let head = group.multiply_all(t[..len - 1].iter())?;
        t[len - 1] = group.inverse(&head)?;
    }
    Ok(t)
}
