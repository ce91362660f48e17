//! Linear functionals on `ℂ(Γ,σ)`: the regular trace, conjugacy-class
//! functionals, product traces, traces pulled back along surjections and
//! twisted by unitary representations, and their linear combinations.
//!
//! Every functional is determined by its values on the basis `δ_γ`; the trace,
//! delocalization, positivity and invariance flags are computed from those.

mod unitary;

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{same_multiplier, AlgebraElement, AlgebraMatrix};
use crate::error::{Error, Result};
use crate::group::{Character, GroupDescriptor, GroupElement, Homomorphism};
use crate::multiplier::{phases_agree, Multiplier};
use crate::report::CheckReport;
use crate::sampling::random_element;

pub use unitary::UnitaryRep;

/// Finite groups up to this order are checked on all basis pairs.
pub const EXHAUSTIVE_PAIRS_MAX: usize = 200;

#[derive(Debug, Clone)]
pub enum TraceKind {
    /// `tr₍₂₎(a) = a(e)`.
    Regular,
    /// `tr₁(a) = Σ a_γ`.
    OneDim,
    /// `τ⟨g⟩(a) = Σ_{γ∈⟨g⟩} a_γ`.
    Conjugacy(GroupElement),
    /// `(τ ⊗ tr₍₂₎)(Σ a_{γ,g} δ_{(γ,g)}) = Σ_γ a_{γ,e} τ(δ_γ)` on `Γ × G`, with
    /// `τ` a functional on the untwisted algebra of `Γ`.
    Product(Box<TraceFunctional>),
    /// `τ_H(δ_{π(γ)})` extended linearly.
    Pullback {
        hom: Homomorphism,
        base: Box<TraceFunctional>,
    },
    /// `tr(u(γ)) τ_H(δ_{π(γ)})` extended linearly.
    Unitary {
        rep: UnitaryRep,
        hom: Homomorphism,
        base: Box<TraceFunctional>,
    },
    LinearCombination(Vec<(Complex64, TraceFunctional)>),
}

#[derive(Debug, Clone)]
pub struct TraceFunctional {
    multiplier: Arc<Multiplier>,
    kind: TraceKind,
}

/// Test set for basis-level checks: the whole group when small, else a ball.
fn basis_test_set(group: &GroupDescriptor, radius: usize) -> (Vec<GroupElement>, bool) {
    match group.order() {
        Some(n) if n <= EXHAUSTIVE_PAIRS_MAX => (group.elements().unwrap_or_default(), true),
        _ => (group.ball(radius), false),
    }
}

impl TraceFunctional {
    pub fn regular(multiplier: Arc<Multiplier>) -> Self {
        TraceFunctional {
            multiplier,
            kind: TraceKind::Regular,
        }
    }

    pub fn one_dim(multiplier: Arc<Multiplier>) -> Self {
        TraceFunctional {
            multiplier,
            kind: TraceKind::OneDim,
        }
    }

    pub fn conjugacy(multiplier: Arc<Multiplier>, g: GroupElement) -> Result<Self> {
        multiplier.group().check(&g)?;
        Ok(TraceFunctional {
            multiplier,
            kind: TraceKind::Conjugacy(g),
        })
    }

    /// `left ⊗ tr₍₂₎` on `Γ × G`; `multiplier` must depend only on the `G` components.
    pub fn product(multiplier: Arc<Multiplier>, left: TraceFunctional) -> Result<Self> {
        let group = multiplier.group();
        let Some((gl, gr)) = group.factors() else {
            return Err(Error::Unsupported("a product group for a product trace".into()));
        };
        if left.multiplier.group().as_ref() != gl {
            return Err(Error::MultiplierMismatch);
        }
        let (sl, _) = basis_test_set(gl, 2);
        let (sr, _) = basis_test_set(gr, 2);
        let (el, _) = (gl.identity(), gr.identity());
        let mut rng = ChaCha8Rng::seed_from_u64(0x9e37);
        for _ in 0..400 {
            let pick = |s: &Vec<GroupElement>, rng: &mut ChaCha8Rng| s[rand::Rng::gen_range(rng, 0..s.len())].clone();
            let (a, b) = (pick(&sl, &mut rng), pick(&sl, &mut rng));
            let (x, y) = (pick(&sr, &mut rng), pick(&sr, &mut rng));
            let full = multiplier.evaluate(&GroupElement::pair(a, x.clone()), &GroupElement::pair(b, y.clone()))?;
            let right = multiplier.evaluate(&GroupElement::pair(el.clone(), x), &GroupElement::pair(el.clone(), y))?;
            if !phases_agree(&full, &right) {
                return Err(Error::Unsupported("a multiplier pulled back from the right factor".into()));
            }
        }
        Ok(TraceFunctional {
            multiplier,
            kind: TraceKind::Product(Box::new(left)),
        })
    }

    /// Checks `σ = π*σ_H` on sampled pairs.
    fn check_pullback(multiplier: &Multiplier, hom: &Homomorphism, base: &Multiplier) -> Result<()> {
        let samples = match multiplier.group().order() {
            Some(n) if n <= 64 => multiplier.group().elements().unwrap_or_default(),
            _ => multiplier.group().ball(2),
        };
        hom.verify(multiplier.group(), base.group(), &samples)?;
        for g in &samples {
            for h in &samples {
                let lhs = multiplier.evaluate(g, h)?;
                let rhs = base.evaluate(&hom.apply(g)?, &hom.apply(h)?)?;
                if !phases_agree(&lhs, &rhs) {
                    return Err(Error::MultiplierMismatch);
                }
            }
        }
        Ok(())
    }

    pub fn pullback(multiplier: Arc<Multiplier>, hom: Homomorphism, base: TraceFunctional) -> Result<Self> {
        Self::check_pullback(&multiplier, &hom, &base.multiplier)?;
        Ok(TraceFunctional {
            multiplier,
            kind: TraceKind::Pullback { hom, base: Box::new(base) },
        })
    }

    pub fn unitary(multiplier: Arc<Multiplier>, rep: UnitaryRep, hom: Homomorphism, base: TraceFunctional) -> Result<Self> {
        Self::check_pullback(&multiplier, &hom, &base.multiplier)?;
        rep.verify(multiplier.group())?;
        Ok(TraceFunctional {
            multiplier,
            kind: TraceKind::Unitary {
                rep,
                hom,
                base: Box::new(base),
            },
        })
    }

    pub fn linear_combination(terms: Vec<(Complex64, TraceFunctional)>) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::Config("empty linear combination".into()));
        };
        let multiplier = first.multiplier.clone();
        if terms.iter().any(|(_, t)| !same_multiplier(&t.multiplier, &multiplier)) {
            return Err(Error::MultiplierMismatch);
        }
        Ok(TraceFunctional {
            multiplier,
            kind: TraceKind::LinearCombination(terms),
        })
    }

    /// `self − other`.
    pub fn difference(&self, other: &TraceFunctional) -> Result<Self> {
        Self::linear_combination(vec![
            (Complex64::new(1.0, 0.0), self.clone()),
            (Complex64::new(-1.0, 0.0), other.clone()),
        ])
    }

    pub fn multiplier(&self) -> &Arc<Multiplier> {
        &self.multiplier
    }

    pub fn kind(&self) -> &TraceKind {
        &self.kind
    }

    /// `τ(δ_γ)`.
    pub fn basis_value(&self, g: &GroupElement) -> Result<Complex64> {
        let group = self.multiplier.group();
        group.check(g)?;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Ok(match &self.kind {
            TraceKind::Regular => {
                if *g == group.identity() {
                    one
                } else {
                    zero
                }
            }
            TraceKind::OneDim => one,
            TraceKind::Conjugacy(rep) => {
                if group.in_conjugacy_class(rep, g)? {
                    one
                } else {
                    zero
                }
            }
            TraceKind::Product(left) => {
                let (a, b) = g.as_pair().expect("checked against a product descriptor");
                let (_, gr) = group.factors().expect("product descriptor");
                if *b == gr.identity() {
                    left.basis_value(a)?
                } else {
                    zero
                }
            }
            TraceKind::Pullback { hom, base } => base.basis_value(&hom.apply(g)?)?,
            TraceKind::Unitary { rep, hom, base } => {
                let t = base.basis_value(&hom.apply(g)?)?;
                if t == zero {
                    zero
                } else {
                    rep.image(group, g)?.trace() * t
                }
            }
            TraceKind::LinearCombination(terms) => {
                let mut acc = zero;
                for (c, t) in terms {
                    acc += c * t.basis_value(g)?;
                }
                acc
            }
        })
    }

    pub fn evaluate(&self, a: &AlgebraElement) -> Result<Complex64> {
        if !same_multiplier(a.multiplier(), &self.multiplier) {
            return Err(Error::MultiplierMismatch);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (g, c) in a.terms() {
            acc += c * self.basis_value(g)?;
        }
        Ok(acc)
    }

    /// `τ(Σᵢ Aᵢᵢ)`.
    pub fn matrix_trace(&self, a: &AlgebraMatrix) -> Result<Complex64> {
        match a.diagonal_sum() {
            Some(d) => self.evaluate(&d),
            None => Ok(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn is_delocalized(&self) -> Result<bool> {
        Ok(self.basis_value(&self.multiplier.group().identity())?.norm() <= 1e-15)
    }

    /// `τ(δ_γ∗δ_μ) = τ(δ_μ∗δ_γ)` on all basis pairs of a finite group (order
    /// at most [`EXHAUSTIVE_PAIRS_MAX`]) or on pairs from the ball of the given radius.
    pub fn check_trace_property(&self, radius: usize, tol: f64) -> Result<CheckReport> {
        let group = self.multiplier.group();
        let (elems, exhaustive) = basis_test_set(group, radius);
        let mut report = CheckReport::new(exhaustive);
        for g in &elems {
            for h in &elems {
                let gh = group.multiply(g, h)?;
                let hg = group.multiply(h, g)?;
                let lhs = self.multiplier.evaluate(g, h)?.to_complex() * self.basis_value(&gh)?;
                let rhs = self.multiplier.evaluate(h, g)?.to_complex() * self.basis_value(&hg)?;
                report.record((lhs - rhs).norm(), tol, || vec![g.clone(), h.clone()]);
            }
        }
        Ok(report)
    }

    /// `τ(b_χ(a)) = τ(a)`: on the basis, `χ(γ)τ(δ_γ) = τ(δ_γ)`.
    pub fn check_invariance(&self, chi: &Character, radius: usize, tol: f64) -> Result<CheckReport> {
        let group = self.multiplier.group();
        let (elems, exhaustive) = basis_test_set(group, radius);
        let mut report = CheckReport::new(exhaustive);
        for g in &elems {
            let t = self.basis_value(g)?;
            let moved = chi.evaluate(g)?.to_complex() * t;
            report.record((moved - t).norm(), tol, || vec![g.clone()]);
        }
        Ok(report)
    }

    /// `τ(a*∗a) ≥ −tol` (and real within `tol`) on random elements.
    pub fn check_positivity(&self, samples: usize, seed: u64, tol: f64) -> Result<CheckReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = CheckReport::new(false);
        for _ in 0..samples {
            let a = random_element(&self.multiplier, &mut rng, 4, 3);
            let v = self.evaluate(&a.involution().convolve(&a)?)?;
            let defect = (-v.re).max(0.0).max(v.im.abs());
            report.record(defect, tol, || a.support().cloned().collect());
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::multiplier::{CoboundaryData, Gauge};
    use num_rational::Rational64;

    fn magnetic() -> Arc<Multiplier> {
        Arc::new(Multiplier::magnetic(Rational64::new(1, 3), Gauge::Symmetric))
    }

    #[test]
    fn regular_trace_values() {
        let m = magnetic();
        let tr = TraceFunctional::regular(m.clone());
        let g = GroupElement::vector(&[2, 1]);
        let gi = GroupElement::vector(&[-2, -1]);
        assert_eq!(tr.evaluate(&AlgebraElement::unit(m.clone())).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(tr.evaluate(&AlgebraElement::delta(m.clone(), g.clone())).unwrap(), Complex64::new(0.0, 0.0));
        let prod = AlgebraElement::delta(m.clone(), g.clone()).convolve(&AlgebraElement::delta(m.clone(), gi.clone())).unwrap();
        let expected = m.evaluate(&g, &gi).unwrap().to_complex();
        assert!((tr.evaluate(&prod).unwrap() - expected).norm() <= 1e-15);
        assert!(!tr.is_delocalized().unwrap());
        assert!(tr.check_trace_property(3, 0.0).unwrap().pass);
    }

    #[test]
    fn one_dim_minus_regular_is_delocalized() {
        let m = Arc::new(Multiplier::trivial(Arc::new(GroupDescriptor::z2())));
        let t = TraceFunctional::one_dim(m.clone()).difference(&TraceFunctional::regular(m)).unwrap();
        assert!(t.is_delocalized().unwrap());
    }

    #[test]
    fn conjugacy_functional_on_twisted_s3_is_not_a_trace() {
        let s3 = FiniteGroup::symmetric(3);
        let t12 = s3.index_of_permutation(&[1, 0, 2]).unwrap();
        let g = Arc::new(GroupDescriptor::Finite(s3));
        let z = CoboundaryData::hashed(11, 12);
        let m = Arc::new(Multiplier::coboundary(g.clone(), z));
        let tau = TraceFunctional::conjugacy(m, GroupElement::Index(t12)).unwrap();
        let rep = tau.check_trace_property(0, 1e-12).unwrap();
        assert!(rep.exhaustive && !rep.pass && !rep.witnesses.is_empty());
        let untwisted = TraceFunctional::conjugacy(Arc::new(Multiplier::trivial(g)), GroupElement::Index(t12)).unwrap();
        assert!(untwisted.check_trace_property(0, 0.0).unwrap().pass);
    }

    #[test]
    fn regular_trace_is_positive_and_faithful() {
        let m = magnetic();
        let tr = TraceFunctional::regular(m.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = random_element(&m, &mut rng, 5, 3);
            let v = tr.evaluate(&a.involution().convolve(&a).unwrap()).unwrap();
            let l2 = a.l2_norm().powi(2);
            assert!((v - Complex64::new(l2, 0.0)).norm() <= 1e-12);
        }
        assert!(tr.check_positivity(200, 2, 1e-12).unwrap().pass);
    }
}
