use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::{splitmix, Character, GroupDescriptor, GroupElement};
use crate::phase::{format_rational, Angle, Phase};

/// A function `z: Γ → U(1)` given through lifted angles.
#[derive(Debug, Clone, PartialEq)]
pub enum ZFunction {
    One,
    /// Angle per element of a finite table.
    Table(Vec<Rational64>),
    /// On `ℤᵏ`: `Σ_{i≤j} Q_ij γᵢγⱼ + Σ Lᵢγᵢ`; only the upper triangle of `Q` is read.
    Quadratic {
        quadratic: Vec<Vec<Rational64>>,
        linear: Vec<Rational64>,
    },
    Character(Character),
    /// Pseudo-random angle `h(γ)/denominator`, with `h(e) = 0`.
    Hashed { seed: u64, denominator: i64 },
    /// Explicit entries; elements not listed have angle 0.
    Map(BTreeMap<GroupElement, Rational64>),
    Conjugate(Box<ZFunction>),
    /// Pointwise product.
    Product(Box<ZFunction>, Box<ZFunction>),
}

impl ZFunction {
    pub fn angle(&self, group: &GroupDescriptor, g: &GroupElement) -> Result<Angle> {
        group.check(g)?;
        Ok(match self {
            ZFunction::One => Angle::ZERO,
            ZFunction::Table(t) => match g {
                GroupElement::Index(i) => Angle::Exact(*t.get(*i).ok_or_else(|| Error::ShapeMismatch {
                    element: g.clone(),
                    expected: "z table",
                })?),
                _ => return Err(Error::ShapeMismatch { element: g.clone(), expected: "z table" }),
            },
            ZFunction::Quadratic { quadratic, linear } => {
                let v = g.as_vector().ok_or_else(|| Error::ShapeMismatch {
                    element: g.clone(),
                    expected: "free-abelian",
                })?;
                let mut q = Rational64::zero();
                for (i, &x) in v.iter().enumerate() {
                    if let Some(l) = linear.get(i) {
                        q += *l * x;
                    }
                    for (j, &y) in v.iter().enumerate().skip(i) {
                        if let Some(c) = quadratic.get(i).and_then(|r| r.get(j)) {
                            q += *c * (x * y);
                        }
                    }
                }
                Angle::Exact(q)
            }
            ZFunction::Character(c) => Angle::Exact(c.evaluate(g)?.turns().unwrap_or_default()),
            ZFunction::Hashed { seed, denominator } => {
                if *g == group.identity() {
                    Angle::ZERO
                } else {
                    let h = splitmix(seed ^ g.fingerprint()) % (*denominator as u64);
                    Angle::Exact(Rational64::new(h as i64, *denominator))
                }
            }
            ZFunction::Map(m) => Angle::Exact(m.get(g).copied().unwrap_or_default()),
            ZFunction::Conjugate(z) => -z.angle(group, g)?,
            ZFunction::Product(a, b) => a.angle(group, g)? + b.angle(group, g)?,
        })
    }

    pub fn value(&self, group: &GroupDescriptor, g: &GroupElement) -> Result<Phase> {
        Ok(self.angle(group, g)?.to_phase())
    }

    pub fn conj(&self) -> ZFunction {
        match self {
            ZFunction::Conjugate(z) => (**z).clone(),
            z => ZFunction::Conjugate(Box::new(z.clone())),
        }
    }
}

/// A normalized `z` with `z(e) = 1`, defining the coboundary `∂z` and the
/// projective isomorphism `b_z`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoboundaryData {
    z: ZFunction,
}

impl CoboundaryData {
    pub fn new(group: &GroupDescriptor, z: ZFunction) -> Result<Self> {
        let at_e = z.value(group, &group.identity())?;
        if !at_e.is_one() {
            let shown = match at_e.turns() {
                Some(q) => format!("exp(2πi·{})", format_rational(&q)),
                None => at_e.to_string(),
            };
            return Err(Error::NotNormalized(shown));
        }
        Ok(CoboundaryData { z })
    }

    pub fn one() -> Self {
        CoboundaryData { z: ZFunction::One }
    }

    /// Random rational-phase `z` with the given denominator.
    pub fn hashed(seed: u64, denominator: i64) -> Self {
        CoboundaryData {
            z: ZFunction::Hashed { seed, denominator },
        }
    }

    /// `z(γ) = exp(−πiθγ₁γ₂)` on `ℤ²`, the gauge change from the symmetric
    /// to the Landau magnetic multiplier.
    pub fn gauge_change(theta: Rational64) -> Self {
        let h = -theta / 2;
        CoboundaryData {
            z: ZFunction::Quadratic {
                quadratic: vec![vec![Rational64::zero(), h], vec![Rational64::zero(), Rational64::zero()]],
                linear: vec![],
            },
        }
    }

    pub fn z(&self) -> &ZFunction {
        &self.z
    }

    pub fn angle(&self, group: &GroupDescriptor, g: &GroupElement) -> Result<Angle> {
        self.z.angle(group, g)
    }

    pub fn value(&self, group: &GroupDescriptor, g: &GroupElement) -> Result<Phase> {
        self.z.value(group, g)
    }

    /// Lifted angle of `∂z(γ,μ) = z(γ)z(μ)z(γμ)⁻¹`.
    pub fn coboundary_angle(&self, group: &GroupDescriptor, g: &GroupElement, h: &GroupElement) -> Result<Angle> {
        let gh = group.multiply(g, h)?;
        Ok(self.z.angle(group, g)? + self.z.angle(group, h)? - self.z.angle(group, &gh)?)
    }

    pub fn conj(&self) -> Self {
        CoboundaryData { z: self.z.conj() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized() {
        let g = GroupDescriptor::z2();
        let mut m = BTreeMap::new();
        m.insert(g.identity(), Rational64::new(1, 3));
        assert!(matches!(CoboundaryData::new(&g, ZFunction::Map(m)), Err(Error::NotNormalized(_))));
        let z = ZFunction::Quadratic {
            quadratic: vec![],
            linear: vec![Rational64::new(1, 5)],
        };
        assert!(CoboundaryData::new(&g, z).is_ok());
    }

    #[test]
    fn hashed_is_normalized_and_deterministic() {
        let g = GroupDescriptor::z2();
        let z = CoboundaryData::hashed(42, 12);
        assert!(z.value(&g, &g.identity()).unwrap().is_one());
        let x = GroupElement::vector(&[2, -1]);
        assert_eq!(z.value(&g, &x).unwrap(), CoboundaryData::hashed(42, 12).value(&g, &x).unwrap());
        let distinct: std::collections::BTreeSet<_> =
            g.ball(3).iter().map(|x| z.angle(&g, x).unwrap().exact().unwrap()).collect();
        assert!(distinct.len() > 4);
    }

    #[test]
    fn character_coboundary_is_trivial() {
        let g = GroupDescriptor::z2();
        let chi = Character::Linear(vec![Rational64::new(1, 7), Rational64::new(2, 5)]);
        let z = CoboundaryData::new(&g, ZFunction::Character(chi)).unwrap();
        for a in g.ball(3) {
            for b in g.ball(3) {
                assert!(z.coboundary_angle(&g, &a, &b).unwrap().to_phase().is_one());
            }
        }
    }
}
