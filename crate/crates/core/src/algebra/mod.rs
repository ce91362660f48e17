//! Finitely supported elements of the twisted group algebra `ℂ(Γ,σ)`.

mod matrix;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::multiplier::{CoboundaryData, Multiplier};

pub use matrix::AlgebraMatrix;

/// Coefficients with modulus below this are dropped after every operation.
pub const PRUNE_TOL: f64 = 1e-15;
/// Left-factor supports at least this large are convolved in parallel.
const PARALLEL_MIN_SUPPORT: usize = 64;

#[derive(Debug, Clone)]
pub struct AlgebraElement {
    multiplier: Arc<Multiplier>,
    terms: BTreeMap<GroupElement, Complex64>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_multiplier(&self.multiplier, &other.multiplier) && self.terms == other.terms
    }
}

pub(crate) fn same_multiplier(a: &Arc<Multiplier>, b: &Arc<Multiplier>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl AlgebraElement {
    pub fn zero(multiplier: Arc<Multiplier>) -> Self {
        AlgebraElement {
            multiplier,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `δ_e`.
    pub fn unit(multiplier: Arc<Multiplier>) -> Self {
        let e = multiplier.group().identity();
        Self::delta(multiplier, e)
    }

    pub fn delta(multiplier: Arc<Multiplier>, g: GroupElement) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(g, Complex64::new(1.0, 0.0));
        AlgebraElement { multiplier, terms }
    }

    pub fn from_terms(multiplier: Arc<Multiplier>, terms: impl IntoIterator<Item = (GroupElement, Complex64)>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (g, c) in terms {
            multiplier.group().check(&g)?;
            *out.entry(g).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Ok(Self::pruned(multiplier, out))
    }

    fn pruned(multiplier: Arc<Multiplier>, mut terms: BTreeMap<GroupElement, Complex64>) -> Self {
        terms.retain(|_, c| c.norm() >= PRUNE_TOL);
        AlgebraElement { multiplier, terms }
    }

    pub fn multiplier(&self) -> &Arc<Multiplier> {
        &self.multiplier
    }

    pub fn group(&self) -> &GroupDescriptor {
        self.multiplier.group()
    }

    pub fn terms(&self) -> &BTreeMap<GroupElement, Complex64> {
        &self.terms
    }

    pub fn coefficient(&self, g: &GroupElement) -> Complex64 {
        self.terms.get(g).copied().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_multiplier(&self.multiplier, &other.multiplier) {
            Ok(())
        } else {
            Err(Error::MultiplierMismatch)
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self.terms.iter().map(|(g, a)| (g.clone(), a * c)).collect();
        Self::pruned(self.multiplier.clone(), terms)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (g, c) in &other.terms {
            *terms.entry(g.clone()).or_default() += c;
        }
        Ok(Self::pruned(self.multiplier.clone(), terms))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Twisted convolution `(f∗g)(γ) = Σ_{γ₁γ₂=γ} f(γ₁)g(γ₂)σ(γ₁,γ₂)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let group = self.group();
        let sigma = &self.multiplier;
        let row = |(g, a): (&GroupElement, &Complex64)| -> Result<Vec<(GroupElement, Complex64)>> {
            other
                .terms
                .iter()
                .map(|(h, b)| Ok((group.multiply(g, h)?, a * b * sigma.evaluate(g, h)?.to_complex())))
                .collect()
        };
        let rows: Vec<Vec<_>> = if self.terms.len() >= PARALLEL_MIN_SUPPORT {
            self.terms.par_iter().map(row).collect::<Result<_>>()?
        } else {
            self.terms.iter().map(row).collect::<Result<_>>()?
        };
        // Rows are merged in the left support order, independent of scheduling.
        let mut terms: BTreeMap<GroupElement, Complex64> = BTreeMap::new();
        for (gh, c) in rows.into_iter().flatten() {
            *terms.entry(gh).or_default() += c;
        }
        Ok(Self::pruned(self.multiplier.clone(), terms))
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut out = Self::unit(self.multiplier.clone());
        for _ in 0..n {
            out = out.convolve(self)?;
        }
        Ok(out)
    }

    /// `(Σ a_γ δ_γ)* = Σ ā_γ σ̄(γ,γ⁻¹) δ_{γ⁻¹}`.
    pub fn involution(&self) -> Self {
        let group = self.group();
        let terms = self
            .terms
            .iter()
            .map(|(g, a)| {
                let gi = group.inverse(g).expect("support elements belong to the group");
                let s = self.multiplier.evaluate(g, &gi).expect("support elements belong to the group");
                (gi, a.conj() * s.conj().to_complex())
            })
            .collect();
        Self::pruned(self.multiplier.clone(), terms)
    }

    /// `b_z: ℂ(Γ,σ′) → ℂ(Γ,σ)`, `δ_γ ↦ z(γ)δ_γ`, where `self` lives over
    /// `σ′` and `target` is `σ`. Requires `σ′ = σ·∂z` on pairs from the support.
    pub fn apply_projective_iso(&self, z: &CoboundaryData, target: Arc<Multiplier>) -> Result<Self> {
        let group = self.group();
        if target.group().as_ref() != group {
            return Err(Error::MultiplierMismatch);
        }
        for g in self.terms.keys() {
            for h in self.terms.keys() {
                let lhs = self.multiplier.evaluate(g, h)?;
                let rhs = target.evaluate(g, h)? * z.coboundary_angle(group, g, h)?.to_phase();
                if !crate::multiplier::phases_agree(&lhs, &rhs) {
                    return Err(Error::NotCohomologous { g: g.clone(), h: h.clone() });
                }
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(g, a)| Ok((g.clone(), a * z.value(group, g)?.to_complex())))
            .collect::<Result<_>>()?;
        Ok(Self::pruned(target, terms))
    }

    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest word length over the support, 0 for the zero element.
    pub fn sup_support_length(&self) -> usize {
        self.terms
            .keys()
            .map(|g| self.group().word_length(g).unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Largest coefficient difference, over the union of supports.
    pub fn max_distance(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (g, a) in &self.terms {
            d = d.max((a - other.coefficient(g)).norm());
        }
        for (g, b) in &other.terms {
            if !self.terms.contains_key(g) {
                d = d.max(b.norm());
            }
        }
        d
    }

    /// `‖a − a*‖_max ≤ tol`.
    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.max_distance(&self.involution()) <= tol
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("operands share a multiplier")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs).expect("operands share a multiplier")
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.convolve(rhs).expect("operands share a multiplier")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
