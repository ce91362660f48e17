//! Projective representations: compressions of the left regular
//! representation to word-length balls, and the finite-dimensional Bloch
//! fibers of `ℤ²` with rational flux.

mod bloch;
mod spectrum;

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;

use crate::algebra::AlgebraElement;
use crate::error::Result;
use crate::group::GroupElement;
use crate::linalg::CMatrix;
use crate::multiplier::{Gauge, Multiplier};

pub use bloch::{bloch_fiber, BlochFiber, BlochRepresentation};
pub use spectrum::{butterfly_csv, farey_fractions, spectrum_union, Band, SpectrumUnion, DEFAULT_KGRID};

/// Compression of the left regular representation `λ(a)` to `span{δ_x : x ∈ B_R}`.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    pub radius: usize,
    pub basis: Vec<GroupElement>,
    pub matrix: CMatrix,
    index: HashMap<GroupElement, usize>,
}

impl TruncatedOperator {
    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `λ_R(a)`: entry `(γx, x)` receives `a(γ)σ(γ,x)` whenever both lie in the ball.
pub fn left_regular(a: &AlgebraElement, radius: usize) -> Result<TruncatedOperator> {
    let group = a.group();
    let sigma = a.multiplier();
    let basis = group.ball(radius);
    let index: HashMap<GroupElement, usize> = basis.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    let n = basis.len();
    let mut matrix = CMatrix::zeros(n, n);
    for (j, x) in basis.iter().enumerate() {
        for (g, c) in a.terms() {
            let gx = group.multiply(g, x)?;
            if let Some(&i) = index.get(&gx) {
                matrix[(i, j)] += c * sigma.evaluate(g, x)?.to_complex();
            }
        }
    }
    Ok(TruncatedOperator {
        radius,
        basis,
        matrix,
        index,
    })
}

/// `H = c₁δ_{(1,0)} + c₂(δ_{(1,0)})* + c₃δ_{(0,1)} + c₄(δ_{(0,1)})*` over the
/// given multiplier on `ℤ²`. With `c₁ = c₂` and `c₃ = c₄` real, `H* = H` exactly.
pub fn harper_on(multiplier: Arc<Multiplier>, coeffs: [f64; 4]) -> Result<AlgebraElement> {
    let u = AlgebraElement::delta(multiplier.clone(), GroupElement::vector(&[1, 0]));
    let v = AlgebraElement::delta(multiplier.clone(), GroupElement::vector(&[0, 1]));
    let c = |x: f64| Complex64::new(x, 0.0);
    let parts = [
        u.scale(c(coeffs[0])),
        u.involution().scale(c(coeffs[1])),
        v.scale(c(coeffs[2])),
        v.involution().scale(c(coeffs[3])),
    ];
    let mut h = AlgebraElement::zero(multiplier);
    for p in &parts {
        h = h.try_add(p)?;
    }
    Ok(h)
}

/// Harper element at flux `θ` in the symmetric gauge.
pub fn harper_element(theta: Rational64, coeffs: [f64; 4]) -> AlgebraElement {
    let m = Arc::new(Multiplier::magnetic(theta, Gauge::Symmetric));
    harper_on(m, coeffs).expect("generators of ℤ² share the multiplier")
}

/// The standard Harper operator `u + u* + v + v*`.
pub fn standard_harper(theta: Rational64) -> AlgebraElement {
    harper_element(theta, [1.0; 4])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupDescriptor;

    #[test]
    fn identity_compresses_to_identity() {
        let m = Arc::new(Multiplier::magnetic(Rational64::new(1, 3), Gauge::Landau));
        let t = left_regular(&AlgebraElement::unit(m), 3).unwrap();
        assert_eq!(t.matrix, CMatrix::identity(GroupDescriptor::z2().ball(3).len()));
    }

    #[test]
    fn entries_are_multiplier_values() {
        let m = Arc::new(Multiplier::magnetic(Rational64::new(2, 7), Gauge::Symmetric));
        let g = GroupElement::vector(&[1, -1]);
        let t = left_regular(&AlgebraElement::delta(m.clone(), g.clone()), 4).unwrap();
        let x = GroupElement::vector(&[2, 1]);
        let gx = GroupElement::vector(&[3, 0]);
        let entry = t.matrix[(t.position(&gx).unwrap(), t.position(&x).unwrap())];
        assert_eq!(entry, m.evaluate(&g, &x).unwrap().to_complex());
    }

    #[test]
    fn harper_is_self_adjoint_exactly() {
        for (p, q) in [(0, 1), (1, 2), (1, 3), (3, 8)] {
            let h = standard_harper(Rational64::new(p, q));
            assert_eq!(h.involution(), h);
            assert_eq!(h.terms().len(), 4);
        }
    }

    #[test]
    fn harper_second_moment_at_zero_flux() {
        let h = standard_harper(Rational64::new(0, 1));
        let h2 = h.pow(2).unwrap();
        assert_eq!(h2.coefficient(&GroupElement::vector(&[0, 0])), Complex64::new(4.0, 0.0));
    }
}
