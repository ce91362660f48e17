use std::f64::consts::TAU;
use std::io::Write;

use num_integer::Integer;
use num_rational::Rational64;
use rayon::prelude::*;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::linalg::eigvalsh;
use crate::representations::{standard_harper, BlochRepresentation};

pub const DEFAULT_KGRID: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub lower: f64,
    pub upper: f64,
    /// Fiber eigenvalue indices `first..=last` making up the band.
    pub first: usize,
    pub last: usize,
}

#[derive(Debug, Clone)]
pub struct SpectrumUnion {
    pub p: i64,
    pub q: usize,
    pub grid: usize,
    /// Ascending fiber eigenvalues at `k = 2π(i₁, i₂)/N`, in lexicographic order of `(i₁, i₂)`.
    pub fibers: Vec<Vec<f64>>,
    pub bands: Vec<Band>,
    pub threshold: f64,
}

impl SpectrumUnion {
    pub fn k_at(&self, idx: usize) -> (f64, f64) {
        grid_point(self.grid, idx)
    }

    /// All fiber eigenvalues, sorted.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.fibers.iter().flatten().copied().collect();
        all.sort_by(f64::total_cmp);
        all
    }

    pub fn band_of_index(&self, idx: usize) -> usize {
        self.bands.iter().position(|b| (b.first..=b.last).contains(&idx)).unwrap_or(0)
    }

    pub fn min(&self) -> f64 {
        self.bands.first().map_or(0.0, |b| b.lower)
    }

    pub fn max(&self) -> f64 {
        self.bands.last().map_or(0.0, |b| b.upper)
    }

    /// Distance from `x` to the band union.
    pub fn distance_to_bands(&self, x: f64) -> f64 {
        self.bands
            .iter()
            .map(|b| if x < b.lower { b.lower - x } else if x > b.upper { x - b.upper } else { 0.0 })
            .fold(f64::INFINITY, f64::min)
    }
}

fn grid_point(n: usize, idx: usize) -> (f64, f64) {
    let (i1, i2) = (idx / n, idx % n);
    (TAU * i1 as f64 / n as f64, TAU * i2 as f64 / n as f64)
}

/// Fiber eigenvalues over the uniform `N×N` grid and the bands they form.
///
/// Each fiber eigenvalue index traces an interval over the grid. Consecutive
/// intervals are merged only when they overlap by more than the threshold
/// `max(1e−9, 1e−4·width)`, so bands that merely touch (the central pair for
/// even `q`) stay separate.
pub fn spectrum_union(a: &AlgebraElement, grid: usize) -> Result<SpectrumUnion> {
    let defect = a.max_distance(&a.involution());
    if defect > 1e-12 * a.l1_norm().max(1.0) {
        return Err(Error::NotSelfAdjoint { defect });
    }
    let rep = BlochRepresentation::new(a.multiplier().clone())?;
    let (p, q) = rep.flux();
    let prepared = rep.prepare(a)?;
    let fibers: Vec<Vec<f64>> = (0..grid * grid)
        .into_par_iter()
        .map(|idx| eigvalsh(&prepared.at(grid_point(grid, idx)).hermitian_part()))
        .collect::<Result<_>>()?;
    let mut lo = vec![f64::INFINITY; q];
    let mut hi = vec![f64::NEG_INFINITY; q];
    for f in &fibers {
        for (b, &x) in f.iter().enumerate() {
            lo[b] = lo[b].min(x);
            hi[b] = hi[b].max(x);
        }
    }
    let width = hi.iter().copied().fold(f64::NEG_INFINITY, f64::max) - lo.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = 1e-9f64.max(1e-4 * width);
    let mut bands: Vec<Band> = Vec::new();
    for b in 0..q {
        match bands.last_mut() {
            Some(cur) if lo[b] < cur.upper - threshold => {
                cur.upper = cur.upper.max(hi[b]);
                cur.lower = cur.lower.min(lo[b]);
                cur.last = b;
            }
            _ => bands.push(Band {
                lower: lo[b],
                upper: hi[b],
                first: b,
                last: b,
            }),
        }
    }
    Ok(SpectrumUnion {
        p,
        q,
        grid,
        fibers,
        bands,
        threshold,
    })
}

/// Fractions `p/q` in lowest terms with `0 ≤ p < q ≤ qmax`, ordered by value.
pub fn farey_fractions(qmax: usize) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = (1..=qmax as i64)
        .flat_map(|q| (0..q).map(move |p| (p, q)))
        .filter(|&(p, q)| p.gcd(&q) == 1)
        .collect();
    out.sort_by_key(|&(p, q)| Rational64::new(p, q));
    out
}

/// Writes the Harper spectrum over all fluxes `p/q` with `q ≤ qmax` as CSV
/// rows `theta_num,theta_den,k1,k2,band_index,eigenvalue`.
pub fn butterfly_csv<W: Write + ?Sized>(qmax: usize, grid: usize, out: &mut W) -> Result<()> {
    writeln!(out, "theta_num,theta_den,k1,k2,band_index,eigenvalue")?;
    for (p, q) in farey_fractions(qmax) {
        let h = standard_harper(Rational64::new(p, q));
        let s = spectrum_union(&h, grid)?;
        for (idx, f) in s.fibers.iter().enumerate() {
            let (k1, k2) = s.k_at(idx);
            for (b, x) in f.iter().enumerate() {
                writeln!(out, "{p},{q},{k1:.16e},{k2:.16e},{},{x:.16e}", s.band_of_index(b))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_up_to_four() {
        assert_eq!(
            farey_fractions(4),
            vec![(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4)]
        );
    }

    #[test]
    fn zero_flux_band() {
        let s = spectrum_union(&standard_harper(Rational64::new(0, 1)), 16).unwrap();
        assert_eq!(s.bands.len(), 1);
        assert!((s.min() + 4.0).abs() < 1e-12 && (s.max() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn half_flux_bands() {
        let s = spectrum_union(&standard_harper(Rational64::new(1, 2)), 16).unwrap();
        assert_eq!(s.bands.len(), 2);
        let r = 2.0 * 2f64.sqrt();
        assert!((s.bands[0].lower + r).abs() < 1e-12);
        assert!(s.bands[0].upper.abs() < 1e-12 && s.bands[1].lower.abs() < 1e-12);
        assert!((s.bands[1].upper - r).abs() < 1e-12);
    }
}
