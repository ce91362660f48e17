//! The lattice model of a multiplier induced by a `ℤ²`-invariant magnetic
//! field on the plane. The potential is the linear 1-form
//! `η = (a₁₁x₁ + a₁₂x₂)dx₁ + (a₂₁x₁ + a₂₂x₂)dx₂` with curvature `a₂₁ − a₁₂`.
//! Translation by `γ` changes it by the exact form `dψ_γ`,
//! `ψ_γ(x) = (a₁₁γ₁ + a₁₂γ₂)x₁ + (a₂₁γ₁ + a₂₂γ₂)x₂ + c_γ`, all in turns.

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::multiplier::ZFunction;
use crate::phase::{format_rational, Angle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    Landau,
    Symmetric,
}

/// How the additive constants of `ψ_γ` are fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiNormalization {
    /// `ψ_γ(0) = 0`.
    Origin,
    /// `ψ_γ(x₀) = 0`.
    BasePoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeGeometricData {
    theta: Rational64,
    potential: [[Rational64; 2]; 2],
    base_point: [i64; 2],
    normalization: PsiNormalization,
    constants: Option<ZFunction>,
}

impl LatticeGeometricData {
    pub fn new(theta: Rational64, gauge: Gauge) -> Self {
        let z = Rational64::zero();
        let potential = match gauge {
            Gauge::Landau => [[z, z], [theta, z]],
            Gauge::Symmetric => [[z, -theta / 2], [theta / 2, z]],
        };
        LatticeGeometricData {
            theta,
            potential,
            base_point: [0, 0],
            normalization: PsiNormalization::Origin,
            constants: None,
        }
    }

    /// Arbitrary linear potential, rejected unless its curvature is `theta`
    /// on every unit plaquette.
    pub fn with_potential(theta: Rational64, potential: [[Rational64; 2]; 2]) -> Result<Self> {
        let data = LatticeGeometricData {
            theta,
            potential,
            base_point: [0, 0],
            normalization: PsiNormalization::Origin,
            constants: None,
        };
        data.check_curvature()?;
        Ok(data)
    }

    pub fn base_point(mut self, x0: [i64; 2]) -> Self {
        self.base_point = x0;
        self
    }

    pub fn normalization(mut self, n: PsiNormalization) -> Self {
        self.normalization = n;
        self
    }

    /// Additive constants `c_γ` in `ψ_γ`.
    pub fn constants(mut self, c: ZFunction) -> Self {
        self.constants = Some(c);
        self
    }

    pub fn theta(&self) -> Rational64 {
        self.theta
    }

    /// Circulation of the potential around the unit square with lower-left
    /// corner `x`, as a sum of exact edge integrals (midpoint rule is exact
    /// for linear integrands).
    pub fn plaquette_flux(&self, x: [i64; 2]) -> Rational64 {
        let a = &self.potential;
        let field = |p: [Rational64; 2], dir: usize| a[dir][0] * p[0] + a[dir][1] * p[1];
        let r = |v: i64| Rational64::from_integer(v);
        let half = Rational64::new(1, 2);
        let (x1, x2) = (r(x[0]), r(x[1]));
        let bottom = field([x1 + half, x2], 0);
        let right = field([x1 + 1, x2 + half], 1);
        let top = field([x1 + half, x2 + 1], 0);
        let left = field([x1, x2 + half], 1);
        bottom + right - top - left
    }

    pub fn check_curvature(&self) -> Result<()> {
        for x in [[0, 0], [1, 0], [0, 1], [-3, 2], [7, -5]] {
            let f = self.plaquette_flux(x);
            if f != self.theta {
                return Err(Error::CurvatureViolated(format!(
                    "flux {} through plaquette at {:?}, expected {}",
                    format_rational(&f),
                    x,
                    format_rational(&self.theta)
                )));
            }
        }
        Ok(())
    }

    /// `ψ_γ(x)` in turns.
    pub fn psi(&self, group: &GroupDescriptor, g: &GroupElement, x: [i64; 2]) -> Result<Angle> {
        self.psi_at(group, g, x.map(Rational64::from_integer))
    }

    /// `ψ_γ` at a point of the plane with rational coordinates; stays exact.
    pub fn psi_at(&self, group: &GroupDescriptor, g: &GroupElement, x: [Rational64; 2]) -> Result<Angle> {
        let v = vector2(g)?;
        let a = &self.potential;
        let linear = |p: [Rational64; 2]| {
            (a[0][0] * v[0] + a[0][1] * v[1]) * p[0] + (a[1][0] * v[0] + a[1][1] * v[1]) * p[1]
        };
        let mut out = Angle::Exact(linear(x));
        if let Some(c) = &self.constants {
            out = out + c.angle(group, g)?;
        }
        if self.normalization == PsiNormalization::BasePoint {
            out = out - Angle::Exact(linear(self.base_point.map(Rational64::from_integer)));
            if let Some(c) = &self.constants {
                out = out - c.angle(group, g)?;
            }
        }
        Ok(out)
    }

    /// `ψ_μ(x₀) + ψ_γ(μx₀) − ψ_{γμ}(x₀)`, with `ℤ²` acting by translation.
    pub fn angle(&self, group: &GroupDescriptor, g: &GroupElement, h: &GroupElement) -> Result<Angle> {
        let x0 = self.base_point;
        let hv = vector2(h)?;
        let gh = group.multiply(g, h)?;
        Ok(self.psi(group, h, x0)? + self.psi(group, g, [x0[0] + hv[0], x0[1] + hv[1]])? - self.psi(group, &gh, x0)?)
    }
}

fn vector2(g: &GroupElement) -> Result<[i64; 2]> {
    match g.as_vector() {
        Some(&[a, b]) => Ok([a, b]),
        _ => Err(Error::ShapeMismatch {
            element: g.clone(),
            expected: "free-abelian rank 2",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_gauges_have_flux_theta() {
        let theta = Rational64::new(2, 7);
        for gauge in [Gauge::Landau, Gauge::Symmetric] {
            let d = LatticeGeometricData::new(theta, gauge);
            d.check_curvature().unwrap();
        }
    }

    #[test]
    fn wrong_curvature_is_rejected() {
        let t = Rational64::new(1, 3);
        let z = Rational64::zero();
        let err = LatticeGeometricData::with_potential(t, [[z, z], [Rational64::new(1, 4), z]]);
        assert!(matches!(err, Err(Error::CurvatureViolated(_))));
        assert!(LatticeGeometricData::with_potential(t, [[Rational64::new(5, 2), -t], [z, Rational64::new(1, 9)]]).is_ok());
    }

    #[test]
    fn psi_is_a_gauge_transformation() {
        // η(x + γ) − η(x) = dψ_γ: the ψ-difference along an edge equals the
        // change of the edge integral under translation.
        let g = GroupDescriptor::z2();
        let d = LatticeGeometricData::new(Rational64::new(1, 3), Gauge::Landau);
        let gamma = GroupElement::vector(&[2, -1]);
        let x = [1, 4];
        let dpsi = d.psi(&g, &gamma, [x[0], x[1] + 1]).unwrap() - d.psi(&g, &gamma, x).unwrap();
        // Landau potential θx₁dx₂: the vertical edge integral shifts by θγ₁.
        assert_eq!(dpsi, Angle::Exact(Rational64::new(2, 3)));
    }
}
