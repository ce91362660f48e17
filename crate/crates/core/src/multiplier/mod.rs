//! Multipliers: normalized 2-cocycles `σ: Γ × Γ → U(1)`.
//!
//! Every multiplier evaluates to a lifted angle in turns. Rational data stays
//! exact through products, pullbacks, coboundary twists and the family `σˢ`.

mod coboundary;
mod geometric;

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement, Homomorphism};
use crate::phase::{Angle, Phase};

pub use coboundary::{CoboundaryData, ZFunction};
pub use geometric::{Gauge, LatticeGeometricData, PsiNormalization};

/// Exact phases compare exactly; anything approximate uses this tolerance.
pub const APPROX_TOL: f64 = 1e-12;
/// Largest finite group checked exhaustively by [`Multiplier::verify_cocycle`].
pub const EXHAUSTIVE_COCYCLE_MAX: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub enum MultiplierKind {
    Trivial,
    /// Flux `θ` and an antisymmetric integer pairing `B` on `ℤᵏ`. Landau
    /// form `θ Σ_{i<j} B_ij γᵢμⱼ`, symmetric form `θ/2 · γᵀBμ`.
    Magnetic {
        theta: Rational64,
        pairing: Vec<Vec<i64>>,
        gauge: Gauge,
    },
    /// Magnetic multiplier with real flux; phases are approximate.
    MagneticReal {
        theta: f64,
        pairing: Vec<Vec<i64>>,
        gauge: Gauge,
    },
    /// Angle table on a finite group.
    Table(Vec<Vec<Angle>>),
    Geometric(LatticeGeometricData),
    /// `σ(γ,μ) = base(π(γ), π(μ))`.
    Pullback { hom: Homomorphism, base: Box<Multiplier> },
    /// `σˢ`, scaling lifted angles by `s`.
    Power { base: Box<Multiplier>, s: Rational64 },
    /// `base · ∂z`.
    CoboundaryTwist { base: Box<Multiplier>, z: CoboundaryData },
    /// Pointwise product of two multipliers on the same group.
    Mul(Box<Multiplier>, Box<Multiplier>),
    /// `σ₁ × σ₂` on a product group.
    External(Box<Multiplier>, Box<Multiplier>),
    Conjugate(Box<Multiplier>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Multiplier {
    group: Arc<GroupDescriptor>,
    kind: MultiplierKind,
}

/// Outcome of a cocycle check.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleReport {
    pub pass: bool,
    pub exhaustive: bool,
    pub triples: usize,
    pub worst_defect: f64,
    pub witness: Option<[GroupElement; 3]>,
}

fn standard_symplectic() -> Vec<Vec<i64>> {
    vec![vec![0, 1], vec![-1, 0]]
}

impl Multiplier {
    pub fn new(group: Arc<GroupDescriptor>, kind: MultiplierKind) -> Result<Self> {
        let m = Multiplier { group, kind };
        m.validate()?;
        Ok(m)
    }

    pub fn trivial(group: Arc<GroupDescriptor>) -> Self {
        Multiplier {
            group,
            kind: MultiplierKind::Trivial,
        }
    }

    /// Magnetic multiplier on `ℤ²` with the standard symplectic pairing.
    pub fn magnetic(theta: Rational64, gauge: Gauge) -> Self {
        Multiplier {
            group: Arc::new(GroupDescriptor::z2()),
            kind: MultiplierKind::Magnetic {
                theta,
                pairing: standard_symplectic(),
                gauge,
            },
        }
    }

    pub fn magnetic_on(group: Arc<GroupDescriptor>, theta: Rational64, pairing: Vec<Vec<i64>>, gauge: Gauge) -> Result<Self> {
        Self::new(group, MultiplierKind::Magnetic { theta, pairing, gauge })
    }

    pub fn magnetic_real(theta: f64, gauge: Gauge) -> Self {
        Multiplier {
            group: Arc::new(GroupDescriptor::z2()),
            kind: MultiplierKind::MagneticReal {
                theta,
                pairing: standard_symplectic(),
                gauge,
            },
        }
    }

    pub fn table(group: Arc<GroupDescriptor>, angles: Vec<Vec<Angle>>) -> Result<Self> {
        Self::new(group, MultiplierKind::Table(angles))
    }

    /// The multiplier of the geometric lattice data, on `ℤ²`.
    pub fn geometric(data: LatticeGeometricData) -> Result<Self> {
        data.check_curvature()?;
        Ok(Multiplier {
            group: Arc::new(GroupDescriptor::z2()),
            kind: MultiplierKind::Geometric(data),
        })
    }

    /// `∂z` as a multiplier.
    pub fn coboundary(group: Arc<GroupDescriptor>, z: CoboundaryData) -> Self {
        let base = Multiplier::trivial(group.clone());
        Multiplier {
            group,
            kind: MultiplierKind::CoboundaryTwist { base: Box::new(base), z },
        }
    }

    pub fn pullback(group: Arc<GroupDescriptor>, hom: Homomorphism, base: Multiplier) -> Result<Self> {
        let samples = sample_elements(&group, 2, 24);
        hom.verify(&group, &base.group, &samples)?;
        Ok(Multiplier {
            group,
            kind: MultiplierKind::Pullback { hom, base: Box::new(base) },
        })
    }

    pub fn twist(&self, z: CoboundaryData) -> Self {
        Multiplier {
            group: self.group.clone(),
            kind: MultiplierKind::CoboundaryTwist {
                base: Box::new(self.clone()),
                z,
            },
        }
    }

    pub fn conj(&self) -> Self {
        Multiplier {
            group: self.group.clone(),
            kind: MultiplierKind::Conjugate(Box::new(self.clone())),
        }
    }

    pub fn mul(&self, other: &Multiplier) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::MultiplierMismatch);
        }
        Ok(Multiplier {
            group: self.group.clone(),
            kind: MultiplierKind::Mul(Box::new(self.clone()), Box::new(other.clone())),
        })
    }

    pub fn external(left: &Multiplier, right: &Multiplier) -> Self {
        let group = GroupDescriptor::product((*left.group).clone(), (*right.group).clone());
        Multiplier {
            group: Arc::new(group),
            kind: MultiplierKind::External(Box::new(left.clone()), Box::new(right.clone())),
        }
    }

    /// `σˢ`. Requires exact rational angle data throughout.
    pub fn power_family(&self, s: Rational64) -> Result<Self> {
        if !self.is_exact() {
            return Err(Error::NoExponentData("the base multiplier has approximate phases".into()));
        }
        Ok(Multiplier {
            group: self.group.clone(),
            kind: MultiplierKind::Power {
                base: Box::new(self.clone()),
                s,
            },
        })
    }

    pub fn group(&self) -> &Arc<GroupDescriptor> {
        &self.group
    }

    pub fn kind(&self) -> &MultiplierKind {
        &self.kind
    }

    /// Flux `θ` of a (possibly scaled) magnetic multiplier, if known exactly.
    pub fn magnetic_flux(&self) -> Option<Rational64> {
        match &self.kind {
            MultiplierKind::Magnetic { theta, pairing, .. } if pairing.len() == 2 => Some(*theta * pairing[0][1]),
            MultiplierKind::Geometric(d) => Some(d.theta()),
            MultiplierKind::Power { base, s } => base.magnetic_flux().map(|t| t * *s),
            MultiplierKind::CoboundaryTwist { base, .. } => base.magnetic_flux(),
            MultiplierKind::Conjugate(b) => b.magnetic_flux().map(|t| -t),
            MultiplierKind::Mul(a, b) => Some(a.magnetic_flux()? + b.magnetic_flux()?),
            MultiplierKind::Trivial if self.group.as_ref() == &GroupDescriptor::z2() => Some(Rational64::zero()),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        match &self.kind {
            MultiplierKind::MagneticReal { .. } => false,
            MultiplierKind::Table(t) => t.iter().flatten().all(|a| a.exact().is_some()),
            MultiplierKind::Pullback { base, .. }
            | MultiplierKind::Power { base, .. }
            | MultiplierKind::CoboundaryTwist { base, .. }
            | MultiplierKind::Conjugate(base) => base.is_exact(),
            MultiplierKind::Mul(a, b) | MultiplierKind::External(a, b) => a.is_exact() && b.is_exact(),
            _ => true,
        }
    }

    fn validate(&self) -> Result<()> {
        match &self.kind {
            MultiplierKind::Magnetic { pairing, .. } | MultiplierKind::MagneticReal { pairing, .. } => {
                let GroupDescriptor::FreeAbelian { rank } = *self.group else {
                    return Err(Error::Unsupported("a free-abelian group for a magnetic multiplier".into()));
                };
                let square = pairing.len() == rank && pairing.iter().all(|r| r.len() == rank);
                if !square {
                    return Err(Error::DimensionMismatch(format!("pairing must be {rank}x{rank}")));
                }
                for i in 0..rank {
                    for j in 0..rank {
                        if pairing[i][j] != -pairing[j][i] {
                            return Err(Error::Config("magnetic pairing must be antisymmetric".into()));
                        }
                    }
                }
            }
            MultiplierKind::Table(t) => {
                let n = self.group.order().filter(|_| matches!(*self.group, GroupDescriptor::Finite(_)));
                let Some(n) = n else {
                    return Err(Error::Unsupported("a finite-table group for a table multiplier".into()));
                };
                if t.len() != n || t.iter().any(|r| r.len() != n) {
                    return Err(Error::DimensionMismatch(format!("phase table must be {n}x{n}")));
                }
            }
            MultiplierKind::Geometric(d) => {
                if *self.group != GroupDescriptor::z2() {
                    return Err(Error::Unsupported("ℤ² for geometric lattice data".into()));
                }
                d.check_curvature()?;
            }
            _ => {}
        }
        Ok(())
    }

    /// Lifted angle of `σ(γ,μ)` in turns.
    pub fn angle(&self, g: &GroupElement, h: &GroupElement) -> Result<Angle> {
        let group = &self.group;
        Ok(match &self.kind {
            MultiplierKind::Trivial => {
                group.check(g)?;
                group.check(h)?;
                Angle::ZERO
            }
            MultiplierKind::Magnetic { theta, pairing, gauge } => {
                Angle::Exact(*theta * magnetic_form(group, pairing, *gauge, g, h)?)
            }
            MultiplierKind::MagneticReal { theta, pairing, gauge } => {
                let f = magnetic_form(group, pairing, *gauge, g, h)?;
                Angle::Approx(theta * (*f.numer() as f64) / (*f.denom() as f64))
            }
            MultiplierKind::Table(t) => match (g, h) {
                (GroupElement::Index(i), GroupElement::Index(j)) if *i < t.len() && *j < t.len() => t[*i][*j],
                _ => {
                    group.check(g)?;
                    group.check(h)?;
                    unreachable!()
                }
            },
            MultiplierKind::Geometric(d) => d.angle(group, g, h)?,
            MultiplierKind::Pullback { hom, base } => {
                group.check(g)?;
                group.check(h)?;
                base.angle(&hom.apply(g)?, &hom.apply(h)?)?
            }
            MultiplierKind::Power { base, s } => base.angle(g, h)?.scale(*s),
            MultiplierKind::CoboundaryTwist { base, z } => base.angle(g, h)? + z.coboundary_angle(group, g, h)?,
            MultiplierKind::Mul(a, b) => a.angle(g, h)? + b.angle(g, h)?,
            MultiplierKind::External(a, b) => {
                let (Some((g1, g2)), Some((h1, h2))) = (g.as_pair(), h.as_pair()) else {
                    group.check(g)?;
                    group.check(h)?;
                    unreachable!()
                };
                a.angle(g1, h1)? + b.angle(g2, h2)?
            }
            MultiplierKind::Conjugate(b) => -b.angle(g, h)?,
        })
    }

    pub fn evaluate(&self, g: &GroupElement, h: &GroupElement) -> Result<Phase> {
        Ok(self.angle(g, h)?.to_phase())
    }

    /// Checks normalization and the cocycle identity
    /// `σ(γ₁γ₂,γ₃)σ(γ₁,γ₂) = σ(γ₁,γ₂γ₃)σ(γ₂,γ₃)`, exhaustively on finite
    /// groups of order at most 24 and on `samples` random triples otherwise.
    pub fn verify_cocycle(&self, samples: usize, seed: u64) -> Result<CocycleReport> {
        let group = &self.group;
        let mut report = CocycleReport {
            pass: true,
            exhaustive: false,
            triples: 0,
            worst_defect: 0.0,
            witness: None,
        };
        let e = group.identity();
        let mut check = |a: &GroupElement, b: &GroupElement, c: &GroupElement| -> Result<()> {
            let lhs = self.evaluate(&group.multiply(a, b)?, c)? * self.evaluate(a, b)?;
            let rhs = self.evaluate(a, &group.multiply(b, c)?)? * self.evaluate(b, c)?;
            let norm = [self.evaluate(&e, a)?, self.evaluate(a, &e)?];
            let mut ok = phases_agree(&lhs, &rhs);
            let mut defect = lhs.distance(&rhs);
            for p in norm {
                ok &= phases_agree(&p, &Phase::ONE);
                defect = defect.max(p.distance(&Phase::ONE));
            }
            report.triples += 1;
            if defect > report.worst_defect || (!ok && report.witness.is_none()) {
                report.worst_defect = report.worst_defect.max(defect);
            }
            if !ok {
                report.pass = false;
                if report.witness.is_none() {
                    report.witness = Some([a.clone(), b.clone(), c.clone()]);
                }
            }
            Ok(())
        };
        match group.order() {
            Some(n) if n <= EXHAUSTIVE_COCYCLE_MAX => {
                let elems = group.elements().unwrap_or_default();
                for a in &elems {
                    for b in &elems {
                        for c in &elems {
                            check(a, b, c)?;
                        }
                    }
                }
                report.exhaustive = true;
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..samples.max(1) {
                    let a = group.random_element(&mut rng, 6);
                    let b = group.random_element(&mut rng, 6);
                    let c = group.random_element(&mut rng, 6);
                    check(&a, &b, &c)?;
                }
            }
        }
        Ok(report)
    }

    /// Whether `other = self · ∂z` on the test set: all pairs of a finite
    /// group, pairs from the radius-5 ball otherwise. Returns a failing pair.
    pub fn cohomology_witness(&self, other: &Multiplier, z: &CoboundaryData) -> Result<Option<(GroupElement, GroupElement)>> {
        if self.group != other.group {
            return Err(Error::MultiplierMismatch);
        }
        let group = &self.group;
        let test = match group.elements() {
            Some(all) => all,
            None => group.ball(5),
        };
        for g in &test {
            for h in &test {
                let lhs = other.evaluate(g, h)?;
                let rhs = self.evaluate(g, h)? * z.coboundary_angle(group, g, h)?.to_phase();
                if !phases_agree(&lhs, &rhs) {
                    return Ok(Some((g.clone(), h.clone())));
                }
            }
        }
        Ok(None)
    }

    pub fn is_cohomologous_via(&self, other: &Multiplier, z: &CoboundaryData) -> Result<bool> {
        Ok(self.cohomology_witness(other, z)?.is_none())
    }

    /// Entrywise equality on the pairs of `elems`.
    pub fn agrees_on(&self, other: &Multiplier, elems: &[GroupElement]) -> Result<bool> {
        for g in elems {
            for h in elems {
                if !phases_agree(&self.evaluate(g, h)?, &other.evaluate(g, h)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Exact equality for exact phases, `APPROX_TOL` otherwise.
pub fn phases_agree(a: &Phase, b: &Phase) -> bool {
    match (a, b) {
        (Phase::Exact(x), Phase::Exact(y)) => x == y,
        _ => a.distance(b) <= APPROX_TOL,
    }
}

fn magnetic_form(
    group: &GroupDescriptor,
    pairing: &[Vec<i64>],
    gauge: Gauge,
    g: &GroupElement,
    h: &GroupElement,
) -> Result<Rational64> {
    group.check(g)?;
    group.check(h)?;
    let (x, y) = (g.as_vector().unwrap_or(&[]), h.as_vector().unwrap_or(&[]));
    let k = x.len();
    Ok(match gauge {
        Gauge::Landau => {
            let mut s = 0i64;
            for i in 0..k {
                for j in i + 1..k {
                    s += pairing[i][j] * x[i] * y[j];
                }
            }
            Rational64::from_integer(s)
        }
        Gauge::Symmetric => {
            let mut s = 0i64;
            for i in 0..k {
                for j in 0..k {
                    s += pairing[i][j] * x[i] * y[j];
                }
            }
            Rational64::new(s, 2)
        }
    })
}

/// Elements used to spot-check homomorphisms and similar maps: the whole
/// group when finite and small, otherwise a ball.
pub(crate) fn sample_elements(group: &GroupDescriptor, radius: usize, max_finite: usize) -> Vec<GroupElement> {
    match group.order() {
        Some(n) if n <= max_finite => group.elements().unwrap_or_default(),
        _ => group.ball(radius),
    }
}
