use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::phase::Phase;

/// A homomorphism `Γ → U(1)` with rational angles.
#[derive(Debug, Clone, PartialEq)]
pub enum Character {
    Trivial,
    /// Angle per element of a finite table.
    Table(Vec<Rational64>),
    /// `γ ↦ exp(2πi Σ aᵢγᵢ)` on `ℤᵏ`.
    Linear(Vec<Rational64>),
    Product(Box<Character>, Box<Character>),
}

impl Character {
    pub fn evaluate(&self, g: &GroupElement) -> Result<Phase> {
        match (self, g) {
            (Character::Trivial, _) => Ok(Phase::ONE),
            (Character::Table(t), GroupElement::Index(i)) if *i < t.len() => Ok(Phase::from_turns(t[*i])),
            (Character::Linear(a), GroupElement::Vector(v)) if v.len() == a.len() => {
                let q = a
                    .iter()
                    .zip(v)
                    .fold(Rational64::from_integer(0), |acc, (a, &x)| acc + *a * Rational64::from_integer(x));
                Ok(Phase::from_turns(q))
            }
            (Character::Product(a, b), GroupElement::Pair(x, y)) => Ok(a.evaluate(x)? * b.evaluate(y)?),
            _ => Err(Error::ShapeMismatch {
                element: g.clone(),
                expected: "character domain",
            }),
        }
    }

    pub fn is_trivial_on(&self, group: &GroupDescriptor) -> bool {
        match self {
            Character::Trivial => true,
            _ => group
                .generators()
                .iter()
                .all(|g| self.evaluate(g).map(|p| p.is_one()).unwrap_or(false)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn product_characters_are_multiplicative() {
        let g = GroupDescriptor::product(
            GroupDescriptor::Finite(FiniteGroup::symmetric(3)),
            GroupDescriptor::Finite(FiniteGroup::cyclic(3)),
        );
        let chars = g.characters().unwrap();
        assert_eq!(chars.len(), 6);
        let elems = g.elements().unwrap();
        for c in &chars {
            for x in &elems {
                for y in &elems {
                    let lhs = c.evaluate(&g.multiply(x, y).unwrap()).unwrap();
                    assert_eq!(lhs, c.evaluate(x).unwrap() * c.evaluate(y).unwrap());
                }
            }
        }
        assert_eq!(chars.iter().filter(|c| c.is_trivial_on(&g)).count(), 1);
    }

    #[test]
    fn linear_character_on_z2() {
        let c = Character::Linear(vec![Rational64::new(1, 4), Rational64::new(1, 3)]);
        let p = c.evaluate(&GroupElement::vector(&[1, 1])).unwrap();
        assert_eq!(p, Phase::from_turns(Rational64::new(7, 12)));
    }
}
