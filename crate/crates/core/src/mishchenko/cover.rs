use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};

/// Angle profile `φ(t)` of a ramp, `t ∈ [0,1]`; the two weights across the
/// ramp are `cos φ` and `sin φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RampProfile {
    /// `φ = πt/2`, so the squared weights are `cos²(πt/2)` and `sin²(πt/2)`.
    #[default]
    Cosine,
    /// `φ = π/2 · (3t² − 2t³)`, flat at both ends.
    Smooth,
}

impl RampProfile {
    fn angle(self, t: f64) -> f64 {
        match self {
            RampProfile::Cosine => FRAC_PI_2 * t,
            RampProfile::Smooth => FRAC_PI_2 * t * t * (3.0 - 2.0 * t),
        }
    }
}

/// A finite cover of a sampled base space by patches with transition
/// elements, partition weights with `Σχᵢ² = 1`, and lifted sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverData {
    group: Arc<GroupDescriptor>,
    shape: Vec<usize>,
    points: Vec<Vec<Rational64>>,
    patches: usize,
    /// `[point][i]`.
    weights: Vec<Vec<f64>>,
    /// `[point][i·m + j]`, present iff the point lies in both patches.
    transitions: Vec<Vec<Option<GroupElement>>>,
    /// `[point][i]`, present iff the point lies in the patch.
    lifts: Option<Vec<Vec<Option<Vec<Rational64>>>>>,
}

/// Weights and integer lifts of the circle cover along one axis.
struct Axis {
    weights: Vec<Vec<f64>>,
    /// `x̃ᵢ = −w·ũᵢ` where `ũᵢ` is the representative of the point in patch `i`.
    lifts: Vec<Vec<Option<Rational64>>>,
}

fn circle_axis(grid: usize, m: usize, winding: i64, ramp: Rational64, profile: RampProfile) -> Result<Axis> {
    if m < 2 {
        return Err(Error::Config("a circle cover needs at least two patches".into()));
    }
    if grid == 0 {
        return Err(Error::Config("empty sample grid".into()));
    }
    let arc = Rational64::new(1, m as i64);
    if ramp <= Rational64::zero() || ramp * 4 >= arc {
        return Err(Error::Config(format!("ramp half-width must lie in (0, 1/{})", 4 * m)));
    }
    // Patch k is the open arc (k/m − 2r, (k+1)/m + 2r); the ramp between
    // patches k−1 and k occupies (k/m − r, k/m + r).
    let mut weights = Vec::with_capacity(grid);
    let mut lifts = Vec::with_capacity(grid);
    for n in 0..grid {
        let u = Rational64::new(n as i64, grid as i64);
        let mut w = vec![0.0; m];
        let k = (u * m as i64).round().to_integer();
        let d = u - arc * k;
        if d.abs() < ramp {
            let t = ((d + ramp) / (ramp * 2)).to_f64().unwrap_or(0.0);
            let phi = profile.angle(t);
            let right = (k as usize) % m;
            let left = (right + m - 1) % m;
            w[left] = phi.cos();
            w[right] = phi.sin();
        } else {
            w[(u * m as i64).floor().to_integer() as usize] = 1.0;
        }
        let lift: Vec<Option<Rational64>> = (0..m)
            .map(|i| {
                let lo = arc * i as i64 - ramp * 2;
                let hi = arc * (i as i64 + 1) + ramp * 2;
                [-1i64, 0, 1]
                    .into_iter()
                    .map(|s| u + s)
                    .find(|x| lo < *x && *x < hi)
                    .map(|x| -x * winding)
            })
            .collect();
        weights.push(w);
        lifts.push(lift);
    }
    Ok(Axis { weights, lifts })
}

fn vector_difference(a: &[Rational64], b: &[Rational64]) -> Option<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d.is_integer().then(|| d.to_integer())
        })
        .collect()
}

impl CoverData {
    /// Validates and assembles a cover from explicit data.
    pub fn from_parts(
        group: Arc<GroupDescriptor>,
        shape: Vec<usize>,
        points: Vec<Vec<Rational64>>,
        weights: Vec<Vec<f64>>,
        transitions: Vec<Vec<Option<GroupElement>>>,
        lifts: Option<Vec<Vec<Option<Vec<Rational64>>>>>,
    ) -> Result<Self> {
        let patches = weights.first().map_or(0, |w| w.len());
        let cover = CoverData {
            group,
            shape,
            points,
            patches,
            weights,
            transitions,
            lifts,
        };
        cover.validate()?;
        Ok(cover)
    }

    /// One patch with weight 1 over `grid` sample points.
    pub fn trivial(group: Arc<GroupDescriptor>, grid: usize) -> Result<Self> {
        let e = group.identity();
        Self::from_parts(
            group,
            vec![grid],
            (0..grid).map(|n| vec![Rational64::new(n as i64, grid.max(1) as i64)]).collect(),
            vec![vec![1.0]; grid],
            vec![vec![Some(e)]; grid],
            None,
        )
    }

    /// The circle `ℝ/ℤ` sampled at `n/grid`, covered by `patches` arcs whose
    /// partition weights ramp over half-width `ramp` around `k/patches`. The
    /// transition across `0` from the last patch to the first is `winding`;
    /// all others are `0`. Group `ℤ`.
    pub fn circle(grid: usize, patches: usize, winding: i64, ramp: Rational64, profile: RampProfile) -> Result<Self> {
        let axis = circle_axis(grid, patches, winding, ramp, profile)?;
        let group = Arc::new(GroupDescriptor::free_abelian(1));
        let lifts: Vec<Vec<Option<Vec<Rational64>>>> = axis
            .lifts
            .iter()
            .map(|l| l.iter().map(|x| x.map(|x| vec![x])).collect())
            .collect();
        let transitions = lifts.iter().map(|l| transitions_from_lifts(l)).collect();
        Self::from_parts(
            group,
            vec![grid],
            (0..grid).map(|n| vec![Rational64::new(n as i64, grid as i64)]).collect(),
            axis.weights,
            transitions,
            Some(lifts),
        )
    }

    /// Product of two circle covers on the torus `ℝ²/ℤ²`, sampled on a
    /// `grid × grid` lattice; patch `(a, b)` has index `a·patches[1] + b`.
    /// Group `ℤ²`.
    pub fn torus(grid: usize, patches: [usize; 2], winding: [i64; 2], ramp: Rational64, profile: RampProfile) -> Result<Self> {
        let ax = circle_axis(grid, patches[0], winding[0], ramp, profile)?;
        let ay = circle_axis(grid, patches[1], winding[1], ramp, profile)?;
        let m = patches[0] * patches[1];
        let mut points = Vec::with_capacity(grid * grid);
        let mut weights = Vec::with_capacity(grid * grid);
        let mut lifts = Vec::with_capacity(grid * grid);
        for n1 in 0..grid {
            for n2 in 0..grid {
                points.push(vec![Rational64::new(n1 as i64, grid as i64), Rational64::new(n2 as i64, grid as i64)]);
                let mut w = Vec::with_capacity(m);
                let mut l = Vec::with_capacity(m);
                for a in 0..patches[0] {
                    for b in 0..patches[1] {
                        w.push(ax.weights[n1][a] * ay.weights[n2][b]);
                        l.push(ax.lifts[n1][a].zip(ay.lifts[n2][b]).map(|(x, y)| vec![x, y]));
                    }
                }
                weights.push(w);
                lifts.push(l);
            }
        }
        let transitions = lifts.iter().map(|l| transitions_from_lifts(l)).collect();
        Self::from_parts(
            Arc::new(GroupDescriptor::z2()),
            vec![grid, grid],
            points,
            weights,
            transitions,
            Some(lifts),
        )
    }

    /// Shifts every lift by the same rational vector; transitions are unchanged.
    pub fn with_lift_offset(mut self, offset: &[Rational64]) -> Result<Self> {
        let Some(lifts) = self.lifts.as_mut() else {
            return Err(Error::Config("cover has no lifts to shift".into()));
        };
        for l in lifts.iter_mut().flatten().flatten() {
            if l.len() != offset.len() {
                return Err(Error::DimensionMismatch(format!("offset of length {} for lifts of length {}", offset.len(), l.len())));
            }
            for (x, o) in l.iter_mut().zip(offset) {
                *x += o;
            }
        }
        Ok(self)
    }

    pub fn group(&self) -> &Arc<GroupDescriptor> {
        &self.group
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn patches(&self) -> usize {
        self.patches
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, p: usize) -> &[Rational64] {
        &self.points[p]
    }

    pub fn weights(&self, p: usize) -> &[f64] {
        &self.weights[p]
    }

    pub fn transition(&self, p: usize, i: usize, j: usize) -> Option<&GroupElement> {
        self.transitions[p][i * self.patches + j].as_ref()
    }

    pub fn lift(&self, p: usize, i: usize) -> Option<&[Rational64]> {
        self.lifts.as_ref()?[p][i].as_deref()
    }

    /// Replaces one transition element, for building corrupted fixtures.
    pub fn set_transition(&mut self, p: usize, i: usize, j: usize, g: Option<GroupElement>) {
        self.transitions[p][i * self.patches + j] = g;
    }

    /// Checks shapes, `Σχᵢ² = 1` within `1e−14`, supports inside patches,
    /// `g_ii = e`, the cocycle condition `g_ij g_jk = g_ik` on every triple
    /// overlap, and `x̃ᵢ − x̃ⱼ = g_ij` for lifts.
    pub fn validate(&self) -> Result<()> {
        let m = self.patches;
        let n = self.points.len();
        if m == 0 || n == 0 {
            return Err(Error::Config("cover needs at least one patch and one sample point".into()));
        }
        if self.shape.iter().product::<usize>() != n {
            return Err(Error::DimensionMismatch(format!("grid shape {:?} for {n} points", self.shape)));
        }
        if self.weights.len() != n || self.transitions.len() != n {
            return Err(Error::DimensionMismatch("per-point data must cover every sample point".into()));
        }
        if let Some(l) = &self.lifts {
            if l.len() != n || l.iter().any(|row| row.len() != m) {
                return Err(Error::DimensionMismatch("lifts must be given per point and patch".into()));
            }
        }
        let e = self.group.identity();
        for p in 0..n {
            let w = &self.weights[p];
            if w.len() != m || self.transitions[p].len() != m * m {
                return Err(Error::DimensionMismatch(format!("point {p}: expected {m} weights and {m}x{m} transitions")));
            }
            if w.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(Error::Config(format!("point {p}: weights outside [0,1]")));
            }
            let s: f64 = w.iter().map(|x| x * x).sum();
            if (s - 1.0).abs() > 1e-14 {
                return Err(Error::Config(format!("point {p}: squared weights sum to {s}")));
            }
            let inside: Vec<bool> = (0..m).map(|i| self.transition(p, i, i).is_some()).collect();
            for i in 0..m {
                if w[i] != 0.0 && !inside[i] {
                    return Err(Error::Config(format!("point {p}: weight of patch {i} is nonzero outside it")));
                }
                if let Some(g) = self.transition(p, i, i) {
                    if *g != e {
                        return Err(Error::CoverCocycle(format!("point {p}: g_{i}{i} = {g}")));
                    }
                }
                for j in 0..m {
                    let present = self.transition(p, i, j).is_some();
                    if present != (inside[i] && inside[j]) {
                        return Err(Error::CoverCocycle(format!(
                            "point {p}: g_{i}{j} must be defined exactly on the overlap"
                        )));
                    }
                    if let Some(g) = self.transition(p, i, j) {
                        self.group.check(g)?;
                    }
                }
            }
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let (Some(a), Some(b), Some(c)) =
                            (self.transition(p, i, j), self.transition(p, j, k), self.transition(p, i, k))
                        else {
                            continue;
                        };
                        if self.group.multiply(a, b)? != *c {
                            return Err(Error::CoverCocycle(format!(
                                "point {p}: g_{i}{j}·g_{j}{k} = {a}·{b} differs from g_{i}{k} = {c}"
                            )));
                        }
                    }
                }
            }
            if let Some(lifts) = &self.lifts {
                for i in 0..m {
                    if lifts[p][i].is_some() != inside[i] {
                        return Err(Error::Config(format!("point {p}: lift of patch {i} must exist exactly inside it")));
                    }
                    for j in 0..m {
                        let (Some(a), Some(b), Some(g)) = (&lifts[p][i], &lifts[p][j], self.transition(p, i, j)) else {
                            continue;
                        };
                        if vector_difference(a, b).as_deref() != g.as_vector() {
                            return Err(Error::CoverCocycle(format!("point {p}: lifts of patches {i}, {j} are not related by g_{i}{j} = {g}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn transitions_from_lifts(lifts: &[Option<Vec<Rational64>>]) -> Vec<Option<GroupElement>> {
    let m = lifts.len();
    let mut out = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            out.push(match (&lifts[i], &lifts[j]) {
                (Some(a), Some(b)) => vector_difference(a, b).map(|v| GroupElement::vector(&v)),
                _ => None,
            });
        }
    }
    out
}
