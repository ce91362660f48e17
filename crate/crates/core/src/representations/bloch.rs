use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

use crate::algebra::{same_multiplier, AlgebraElement};
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::linalg::CMatrix;
use crate::multiplier::Multiplier;
use crate::phase::{reduce_turns, Angle, Phase};

/// The `q`-dimensional clock-and-shift representations of `ℂ(ℤ²,σ)` for a
/// multiplier with rational flux `p/q`:
/// `U = e^{ik₁}·diag(1, ζ, …, ζ^{q−1})`, `V = e^{ik₂}·S` with `S e_j = e_{j+1}`,
/// `ζ = e^{2πip/q}`, so that `UV = ζVU`. A generator maps to
/// `π_k(δ_γ) = e^{2πi w(γ)} V^{γ₂} U^{γ₁}`, where `w` absorbs the coboundary
/// between `σ` and the Landau multiplier of the same flux.
#[derive(Debug, Clone)]
pub struct BlochRepresentation {
    multiplier: Arc<Multiplier>,
    p: i64,
    q: usize,
}

#[derive(Debug, Clone)]
pub struct BlochFiber {
    pub p: i64,
    pub q: usize,
    pub k: (f64, f64),
    pub matrix: CMatrix,
}

/// An element with its `k`-independent fiber data precomputed.
#[derive(Debug, Clone)]
pub struct PreparedElement {
    q: usize,
    /// `(γ₁, γ₂, entries)`, entries `(row, col, value at k = 0)`.
    terms: Vec<(i64, i64, Vec<(usize, usize, Complex64)>)>,
}

impl BlochRepresentation {
    pub fn new(multiplier: Arc<Multiplier>) -> Result<Self> {
        if *multiplier.group().as_ref() != GroupDescriptor::z2() {
            return Err(Error::InapplicableMethod("Bloch fibers need the group ℤ²".into()));
        }
        let (e1, e2) = (GroupElement::vector(&[1, 0]), GroupElement::vector(&[0, 1]));
        let comm = multiplier.angle(&e1, &e2)? - multiplier.angle(&e2, &e1)?;
        let Some(flux) = comm.exact() else {
            return Err(Error::InapplicableMethod("flux is not rational".into()));
        };
        let flux = reduce_turns(flux);
        Ok(BlochRepresentation {
            multiplier,
            p: *flux.numer(),
            q: *flux.denom() as usize,
        })
    }

    pub fn flux(&self) -> (i64, usize) {
        (self.p, self.q)
    }

    pub fn dim(&self) -> usize {
        self.q
    }

    fn sigma(&self, a: [i64; 2], b: [i64; 2]) -> Result<Rational64> {
        let ang = self.multiplier.angle(&GroupElement::vector(&a), &GroupElement::vector(&b))?;
        match ang {
            Angle::Exact(x) => Ok(x),
            Angle::Approx(_) => Err(Error::InapplicableMethod("multiplier phases are not exact".into())),
        }
    }

    /// `w` on a coordinate axis, built one step at a time from
    /// `w(γ+μ) = w(γ) + w(μ) − σ(γ,μ)` (the Landau term vanishes on an axis).
    fn w_axis(&self, axis: usize, m: i64) -> Result<Rational64> {
        let mut unit = [0i64; 2];
        unit[axis] = m.signum();
        let w_step = if m < 0 {
            // w(−e) = σ(e, −e) from w(0) = 0 and w(e) = 0.
            let mut pos = [0i64; 2];
            pos[axis] = 1;
            self.sigma(pos, unit)?
        } else {
            Rational64::zero()
        };
        let mut w = Rational64::zero();
        let mut cur = [0i64; 2];
        for _ in 0..m.unsigned_abs() {
            w = w + w_step - self.sigma(cur, unit)?;
            cur[axis] += unit[axis];
        }
        Ok(w)
    }

    /// `w(γ) = w(γ₁e₁) + w(γ₂e₂) − σ(γ₁e₁, γ₂e₂) + φγ₁γ₂`.
    fn w(&self, g: [i64; 2]) -> Result<Rational64> {
        let phi = Rational64::new(self.p, self.q as i64);
        Ok(self.w_axis(0, g[0])? + self.w_axis(1, g[1])? - self.sigma([g[0], 0], [0, g[1]])? + phi * (g[0] * g[1]))
    }

    pub fn prepare(&self, a: &AlgebraElement) -> Result<PreparedElement> {
        if !same_multiplier(a.multiplier(), &self.multiplier) {
            return Err(Error::MultiplierMismatch);
        }
        let q = self.q as i64;
        let mut terms = Vec::with_capacity(a.terms().len());
        for (g, c) in a.terms() {
            let v = g.as_vector().expect("element of ℤ²");
            let (m, n) = (v[0], v[1]);
            let w = self.w([m, n])?;
            let entries = (0..q)
                .map(|j| {
                    let row = (j + n).rem_euclid(q) as usize;
                    let angle = w + Rational64::new((self.p * m).mod_floor(&q) * j, q);
                    (row, j as usize, c * Phase::from_turns(angle).to_complex())
                })
                .collect();
            terms.push((m, n, entries));
        }
        Ok(PreparedElement { q: self.q, terms })
    }

    pub fn fiber(&self, a: &AlgebraElement, k: (f64, f64)) -> Result<CMatrix> {
        Ok(self.prepare(a)?.at(k))
    }
}

impl PreparedElement {
    pub fn at(&self, k: (f64, f64)) -> CMatrix {
        let mut out = CMatrix::zeros(self.q, self.q);
        for (m, n, entries) in &self.terms {
            let bloch = Complex64::from_polar(1.0, k.0 * *m as f64 + k.1 * *n as f64);
            for &(r, c, v) in entries {
                out[(r, c)] += v * bloch;
            }
        }
        out
    }
}

pub fn bloch_fiber(a: &AlgebraElement, k: (f64, f64)) -> Result<BlochFiber> {
    let rep = BlochRepresentation::new(a.multiplier().clone())?;
    Ok(BlochFiber {
        p: rep.p,
        q: rep.q,
        k,
        matrix: rep.fiber(a, k)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplier::{CoboundaryData, Gauge, LatticeGeometricData};
    use crate::representations::standard_harper;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(m: &Arc<Multiplier>, rng: &mut ChaCha8Rng) -> AlgebraElement {
        let terms = (0..4).map(|_| {
            let g = GroupElement::vector(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3)]);
            (g, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        });
        AlgebraElement::from_terms(m.clone(), terms.collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn fibers_are_star_homomorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let theta = Rational64::new(2, 5);
        let multipliers = [
            Multiplier::magnetic(theta, Gauge::Landau),
            Multiplier::magnetic(theta, Gauge::Symmetric),
            Multiplier::magnetic(theta, Gauge::Symmetric).twist(CoboundaryData::hashed(17, 9)),
            Multiplier::geometric(LatticeGeometricData::new(theta, Gauge::Landau).base_point([2, -1])).unwrap(),
        ];
        for m in multipliers {
            let m = Arc::new(m);
            let rep = BlochRepresentation::new(m.clone()).unwrap();
            assert_eq!(rep.flux(), (2, 5));
            for _ in 0..20 {
                let k = (rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3));
                let a = random_element(&m, &mut rng);
                let b = random_element(&m, &mut rng);
                let lhs = rep.fiber(&a.convolve(&b).unwrap(), k).unwrap();
                let rhs = rep.fiber(&a, k).unwrap().matmul(&rep.fiber(&b, k).unwrap()).unwrap();
                assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-12);
                let star = rep.fiber(&a.involution(), k).unwrap();
                assert!(star.sub(&rep.fiber(&a, k).unwrap().adjoint()).unwrap().max_abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn zero_flux_fiber_is_a_cosine_sum() {
        let h = standard_harper(Rational64::new(0, 1));
        for k in [(0.3, 1.1), (2.0, -0.7)] {
            let f = bloch_fiber(&h, k).unwrap();
            assert_eq!(f.q, 1);
            let expected = 2.0 * k.0.cos() + 2.0 * k.1.cos();
            assert!((f.matrix[(0, 0)] - Complex64::new(expected, 0.0)).norm() <= 1e-14);
        }
    }

    #[test]
    fn clock_and_shift_commutation() {
        let m = Arc::new(Multiplier::magnetic(Rational64::new(3, 7), Gauge::Landau));
        let rep = BlochRepresentation::new(m.clone()).unwrap();
        let k = (0.4, 1.3);
        let u = rep.fiber(&AlgebraElement::delta(m.clone(), GroupElement::vector(&[1, 0])), k).unwrap();
        let v = rep.fiber(&AlgebraElement::delta(m, GroupElement::vector(&[0, 1])), k).unwrap();
        let zeta = Phase::from_turns(Rational64::new(3, 7)).to_complex();
        let diff = u.matmul(&v).unwrap().sub(&v.matmul(&u).unwrap().scale(zeta)).unwrap();
        assert!(diff.max_abs() <= 1e-14);
    }
}
