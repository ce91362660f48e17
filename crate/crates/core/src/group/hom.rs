use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};

/// A group homomorphism given elementwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Homomorphism {
    Identity,
    ProjectLeft,
    ProjectRight,
    /// Image index for each element of a finite table.
    Table(Vec<usize>),
    /// Integer matrix `ℤᵏ → ℤᵐ`, rows indexed by target coordinates.
    Linear(Vec<Vec<i64>>),
    /// `ℤᵏ → ℤ/m`, `γ ↦ Σ wᵢγᵢ mod m`, onto a cyclic table indexed by residues.
    ToCyclic { weights: Vec<i64>, modulus: usize },
    /// Constant map onto the given identity element.
    Trivial(GroupElement),
}

impl Homomorphism {
    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        let mismatch = || Error::ShapeMismatch {
            element: g.clone(),
            expected: "homomorphism domain",
        };
        match self {
            Homomorphism::Identity => Ok(g.clone()),
            Homomorphism::ProjectLeft => g.as_pair().map(|(a, _)| a.clone()).ok_or_else(mismatch),
            Homomorphism::ProjectRight => g.as_pair().map(|(_, b)| b.clone()).ok_or_else(mismatch),
            Homomorphism::Table(t) => match g {
                GroupElement::Index(i) if *i < t.len() => Ok(GroupElement::Index(t[*i])),
                _ => Err(mismatch()),
            },
            Homomorphism::Linear(m) => match g {
                GroupElement::Vector(v) if m.iter().all(|row| row.len() == v.len()) => Ok(GroupElement::Vector(
                    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect(),
                )),
                _ => Err(mismatch()),
            },
            Homomorphism::ToCyclic { weights, modulus } => match g {
                GroupElement::Vector(v) if v.len() == weights.len() => {
                    let s: i64 = weights.iter().zip(v).map(|(a, b)| a * b).sum();
                    Ok(GroupElement::Index(s.rem_euclid(*modulus as i64) as usize))
                }
                _ => Err(mismatch()),
            },
            Homomorphism::Trivial(e) => Ok(e.clone()),
        }
    }

    /// Checks `π(gh) = π(g)π(h)` on all pairs from `samples` and that images
    /// belong to `target`.
    pub fn verify(&self, source: &GroupDescriptor, target: &GroupDescriptor, samples: &[GroupElement]) -> Result<()> {
        for g in samples {
            target.check(&self.apply(g)?)?;
            for h in samples {
                let lhs = self.apply(&source.multiply(g, h)?)?;
                let rhs = target.multiply(&self.apply(g)?, &self.apply(h)?)?;
                if lhs != rhs {
                    return Err(Error::MalformedRepresentation(format!("homomorphism fails at ({g}, {h})")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn sign_map_is_a_homomorphism() {
        let s3 = FiniteGroup::symmetric(3);
        let sign: Vec<usize> = (0..6)
            .map(|a| {
                let p = s3.permutation(a).unwrap();
                let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                inv % 2
            })
            .collect();
        let src = GroupDescriptor::Finite(s3);
        let dst = GroupDescriptor::Finite(FiniteGroup::cyclic(2));
        let hom = Homomorphism::Table(sign);
        hom.verify(&src, &dst, &src.elements().unwrap()).unwrap();
        let bad = Homomorphism::Table(vec![0, 1, 1, 1, 1, 1]);
        assert!(bad.verify(&src, &dst, &src.elements().unwrap()).is_err());
    }

    #[test]
    fn reduction_mod_q() {
        let src = GroupDescriptor::z2();
        let dst = GroupDescriptor::Finite(FiniteGroup::cyclic(3));
        let hom = Homomorphism::ToCyclic { weights: vec![1, 2], modulus: 3 };
        hom.verify(&src, &dst, &src.ball(3)).unwrap();
        assert_eq!(hom.apply(&GroupElement::vector(&[1, 1])).unwrap(), GroupElement::Index(0));
    }
}
