//! Projections over `ℂ(Γ,σ)` built from a finite trivializing cover of a
//! sampled base space, and the degree-1 Lott form on the circle.
//!
//! Patch `i` carries a lift `x̃ᵢ` of every sample point it contains, with
//! `x̃ᵢ = g_ij·x̃ⱼ` (translation on `ℚᵏ`). The projection is
//! `P_ij(x) = e^{−iψ_{g_ij}(x̃ⱼ)} χᵢ(x)χⱼ(x) δ_{g_ij(x)}`.

mod cover;

use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use crate::algebra::{AlgebraElement, AlgebraMatrix};
use crate::cohomology::GroupCochain;
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::multiplier::{phases_agree, Gauge, Multiplier, MultiplierKind};
use crate::phase::{Angle, Phase};
use crate::traces::TraceFunctional;

pub use cover::{CoverData, RampProfile};

/// Coefficient tolerance for the projection identities.
pub const PROJECTION_TOL: f64 = 1e-13;

/// `ψ_γ(x)` in turns for the multipliers that come with a primitive.
///
/// Magnetic multipliers use `ψ_γ(x) = θ Σ_{i<j} B_ij γᵢxⱼ` (Landau) or
/// `θ/2 · γᵀBx` (symmetric); a coboundary twist by `z` adds `z(γ)`.
pub fn psi_angle(m: &Multiplier, g: &GroupElement, x: Option<&[Rational64]>) -> Result<Angle> {
    let group = m.group();
    let need_point = || x.ok_or_else(|| Error::Config("this multiplier needs lifted sample points".into()));
    Ok(match m.kind() {
        MultiplierKind::Trivial => {
            group.check(g)?;
            Angle::ZERO
        }
        MultiplierKind::Magnetic { theta, pairing, gauge } => {
            let x = need_point()?;
            magnetic_primitive(pairing, *gauge, g, x)?.scale(*theta)
        }
        MultiplierKind::MagneticReal { theta, pairing, gauge } => {
            let x = need_point()?;
            Angle::Approx(*theta * magnetic_primitive(pairing, *gauge, g, x)?.as_f64())
        }
        MultiplierKind::Geometric(d) => {
            let x = need_point()?;
            let [a, b] = x else {
                return Err(Error::DimensionMismatch("lift must be a point of the plane".into()));
            };
            d.psi_at(group, g, [*a, *b])?
        }
        MultiplierKind::Power { base, s } => psi_angle(base, g, x)?.scale(*s),
        MultiplierKind::CoboundaryTwist { base, z } => psi_angle(base, g, x)? + z.angle(group, g)?,
        MultiplierKind::Mul(a, b) => psi_angle(a, g, x)? + psi_angle(b, g, x)?,
        MultiplierKind::Conjugate(b) => -psi_angle(b, g, x)?,
        _ => {
            return Err(Error::Unsupported(
                "a trivial, magnetic, geometric or twisted multiplier for the cover projection".into(),
            ))
        }
    })
}

fn magnetic_primitive(pairing: &[Vec<i64>], gauge: Gauge, g: &GroupElement, x: &[Rational64]) -> Result<Angle> {
    let v = g.as_vector().filter(|v| v.len() == x.len() && v.len() == pairing.len()).ok_or_else(|| {
        Error::DimensionMismatch(format!("element {g} and lift of length {} do not match the pairing", x.len()))
    })?;
    let k = v.len();
    let mut s = Rational64::from_integer(0);
    for i in 0..k {
        for j in 0..k {
            let b = pairing[i][j] * v[i];
            match gauge {
                Gauge::Landau if i < j => s += x[j] * b,
                Gauge::Symmetric => s += x[j] * b / 2,
                _ => {}
            }
        }
    }
    Ok(Angle::Exact(s))
}

/// One nonzero entry `phase · weight · δ_element` of `P(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionEntry {
    pub element: GroupElement,
    pub phase: Phase,
    pub weight: f64,
}

impl ProjectionEntry {
    fn to_algebra(&self, m: &Arc<Multiplier>) -> AlgebraElement {
        AlgebraElement::delta(m.clone(), self.element.clone()).scale(self.phase.to_complex() * self.weight)
    }
}

#[derive(Debug, Clone)]
pub struct ProjectionField {
    multiplier: Arc<Multiplier>,
    patches: usize,
    /// `[point][i·m + j]`.
    entries: Vec<Vec<Option<ProjectionEntry>>>,
}

/// Outcome of one projection identity over all grid points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub pass: bool,
    /// Entries whose group elements do not match.
    pub element_failures: usize,
    /// Entries whose phases do not match (exactly, for exact phases).
    pub phase_failures: usize,
    /// Worst coefficient defect of the entrywise symbolic expansion.
    pub coefficient_defect: f64,
    /// Worst coefficient defect of the product computed in the algebra.
    pub numeric_defect: f64,
    pub exact_phases: bool,
    /// `point:i:k` of the first failure.
    pub witness: Option<String>,
}

impl IdentityCheck {
    fn new() -> Self {
        IdentityCheck {
            pass: true,
            element_failures: 0,
            phase_failures: 0,
            coefficient_defect: 0.0,
            numeric_defect: 0.0,
            exact_phases: true,
            witness: None,
        }
    }

    fn fail(&mut self, point: usize, i: usize, k: usize) {
        self.pass = false;
        if self.witness.is_none() {
            self.witness = Some(format!("{point}:{i}:{k}"));
        }
    }

    fn coefficient(&mut self, d: f64, numeric: bool, point: usize, i: usize, k: usize) {
        if numeric {
            self.numeric_defect = self.numeric_defect.max(d);
        } else {
            self.coefficient_defect = self.coefficient_defect.max(d);
        }
        if !(d <= PROJECTION_TOL) {
            self.fail(point, i, k);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionReport {
    pub points: usize,
    pub patches: usize,
    pub idempotent: IdentityCheck,
    pub self_adjoint: IdentityCheck,
}

impl ProjectionReport {
    pub fn pass(&self) -> bool {
        self.idempotent.pass && self.self_adjoint.pass
    }
}

/// `P_ij(x) = e^{−iψ_{g_ij}(x̃ⱼ)} χᵢχⱼ δ_{g_ij}` at every grid point.
pub fn build_projection(cover: &CoverData, multiplier: Arc<Multiplier>) -> Result<ProjectionField> {
    if multiplier.group().as_ref() != cover.group().as_ref() {
        return Err(Error::MultiplierMismatch);
    }
    cover.validate()?;
    let m = cover.patches();
    let mut entries = Vec::with_capacity(cover.len());
    for p in 0..cover.len() {
        let w = cover.weights(p);
        let mut row = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let entry = match cover.transition(p, i, j) {
                    Some(g) if w[i] * w[j] != 0.0 => {
                        let psi = psi_angle(&multiplier, g, cover.lift(p, j))?;
                        Some(ProjectionEntry {
                            element: g.clone(),
                            phase: (-psi).to_phase(),
                            weight: w[i] * w[j],
                        })
                    }
                    _ => None,
                };
                row.push(entry);
            }
        }
        entries.push(row);
    }
    Ok(ProjectionField {
        multiplier,
        patches: m,
        entries,
    })
}

impl ProjectionField {
    pub fn multiplier(&self) -> &Arc<Multiplier> {
        &self.multiplier
    }

    pub fn patches(&self) -> usize {
        self.patches
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, point: usize, i: usize, j: usize) -> Option<&ProjectionEntry> {
        self.entries[point][i * self.patches + j].as_ref()
    }

    /// `P(x)` as a matrix over the algebra.
    pub fn matrix(&self, point: usize) -> AlgebraMatrix {
        let m = self.patches;
        let mut out = AlgebraMatrix::zeros(self.multiplier.clone(), m);
        for i in 0..m {
            for j in 0..m {
                if let Some(e) = self.entry(point, i, j) {
                    out.set(i, j, e.to_algebra(&self.multiplier));
                }
            }
        }
        out
    }

    /// Checks `P² = P` and `P* = P` at every point twice: entrywise with
    /// exact group elements and phases, and by multiplying in the algebra.
    pub fn verify(&self) -> Result<ProjectionReport> {
        let group = self.multiplier.group().clone();
        let m = self.patches;
        let mut idem = IdentityCheck::new();
        let mut adj = IdentityCheck::new();
        for p in 0..self.len() {
            for i in 0..m {
                for k in 0..m {
                    let target = self.entry(p, i, k);
                    if let Some(t) = target {
                        if !t.phase.is_exact() {
                            idem.exact_phases = false;
                            adj.exact_phases = false;
                        }
                    }
                    let mut sum = 0.0;
                    for j in 0..m {
                        let (Some(a), Some(b)) = (self.entry(p, i, j), self.entry(p, j, k)) else {
                            continue;
                        };
                        sum += a.weight * b.weight;
                        let Some(t) = target else {
                            idem.element_failures += 1;
                            idem.fail(p, i, k);
                            continue;
                        };
                        if group.multiply(&a.element, &b.element)? != t.element {
                            idem.element_failures += 1;
                            idem.fail(p, i, k);
                        }
                        let phase = a.phase * b.phase * self.multiplier.evaluate(&a.element, &b.element)?;
                        if !phases_agree(&phase, &t.phase) {
                            idem.phase_failures += 1;
                            idem.fail(p, i, k);
                        }
                    }
                    idem.coefficient((sum - target.map_or(0.0, |t| t.weight)).abs(), false, p, i, k);

                    // (P*)_ik = (P_ki)*
                    match (target, self.entry(p, k, i)) {
                        (None, None) => {}
                        (Some(t), Some(s)) => {
                            if group.inverse(&s.element)? != t.element {
                                adj.element_failures += 1;
                                adj.fail(p, i, k);
                            }
                            let sigma = self.multiplier.evaluate(&s.element, &t.element)?;
                            if !phases_agree(&(s.phase.conj() * sigma.conj()), &t.phase) {
                                adj.phase_failures += 1;
                                adj.fail(p, i, k);
                            }
                            adj.coefficient((s.weight - t.weight).abs(), false, p, i, k);
                        }
                        _ => {
                            adj.element_failures += 1;
                            adj.fail(p, i, k);
                        }
                    }
                }
            }
            let pm = self.matrix(p);
            let d = pm.mul(&pm)?.max_distance(&pm);
            idem.coefficient(d, true, p, 0, 0);
            let d = pm.adjoint().max_distance(&pm);
            adj.coefficient(d, true, p, 0, 0);
        }
        Ok(ProjectionReport {
            points: self.len(),
            patches: m,
            idempotent: idem,
            self_adjoint: adj,
        })
    }
}

/// Grid average of `τ(tr P(x))`.
pub fn rank_trace(field: &ProjectionField, tau: &TraceFunctional) -> Result<Complex64> {
    if field.is_empty() {
        return Err(Error::Config("empty sample grid".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..field.len() {
        acc += tau.matrix_trace(&field.matrix(p))?;
    }
    Ok(acc / field.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LottPairing {
    pub value: f64,
    pub imaginary: f64,
    pub grid: usize,
    pub patches: usize,
}

/// `∫_{S¹} Σ_{i₀,i₁} χ²_{i₀} d(χ²_{i₁}) c(e, g_{i₁i₀})` with centered
/// differences on the uniform grid.
pub fn lott_pairing_circle(cover: &CoverData, c: &GroupCochain) -> Result<LottPairing> {
    if cover.shape().len() != 1 {
        return Err(Error::Config("the Lott pairing needs a cover of the circle".into()));
    }
    if c.degree() != 1 {
        return Err(Error::DimensionMismatch(format!("degree-1 cochain required, got degree {}", c.degree())));
    }
    if c.group().as_ref() != cover.group().as_ref() {
        return Err(Error::Config("cochain and cover live on different groups".into()));
    }
    if *cover.group().as_ref() != GroupDescriptor::free_abelian(1) {
        return Err(Error::Unsupported("the Lott pairing on the circle is implemented for Γ = ℤ".into()));
    }
    let closed = c.check_closed(500, 6, 0x10771, 1e-12)?;
    if !closed.pass {
        return Err(Error::NotClosed(format!(
            "{}: |dc| = {:e} at {:?}",
            c.name(),
            closed.worst_defect,
            closed.witnesses.first()
        )));
    }
    cover.validate()?;
    let n = cover.len();
    let m = cover.patches();
    let h = 1.0 / n as f64;
    let e = cover.group().identity();
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..n {
        let w = cover.weights(p);
        let (next, prev) = (cover.weights((p + 1) % n), cover.weights((p + n - 1) % n));
        for i0 in 0..m {
            let a = w[i0] * w[i0];
            if a == 0.0 {
                continue;
            }
            for i1 in 0..m {
                let d = (next[i1] * next[i1] - prev[i1] * prev[i1]) / (2.0 * h);
                if d == 0.0 {
                    continue;
                }
                let g = cover.transition(p, i1, i0).ok_or_else(|| {
                    Error::Config(format!("grid too coarse: point {p} sees patch {i1} change without lying in it"))
                })?;
                acc += a * d * h * c.evaluate(&[e.clone(), g.clone()])?;
            }
        }
    }
    Ok(LottPairing {
        value: acc.re,
        imaginary: acc.im,
        grid: n,
        patches: m,
    })
}
