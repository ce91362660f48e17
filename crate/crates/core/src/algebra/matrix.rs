use std::sync::Arc;

use crate::algebra::{same_multiplier, AlgebraElement};
use crate::error::{Error, Result};
use crate::multiplier::Multiplier;

/// Square matrix with entries in `ℂ(Γ,σ)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraMatrix {
    n: usize,
    entries: Vec<AlgebraElement>,
}

impl AlgebraMatrix {
    pub fn from_rows(rows: Vec<Vec<AlgebraElement>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: bad.len() });
        }
        let entries: Vec<_> = rows.into_iter().flatten().collect();
        if let Some(first) = entries.first() {
            if entries.iter().any(|a| !same_multiplier(a.multiplier(), first.multiplier())) {
                return Err(Error::MultiplierMismatch);
            }
        }
        Ok(AlgebraMatrix { n, entries })
    }

    pub fn zeros(multiplier: Arc<Multiplier>, n: usize) -> Self {
        AlgebraMatrix {
            n,
            entries: vec![AlgebraElement::zero(multiplier); n * n],
        }
    }

    pub fn identity(multiplier: Arc<Multiplier>, n: usize) -> Self {
        let mut m = Self::zeros(multiplier.clone(), n);
        for i in 0..n {
            m.entries[i * n + i] = AlgebraElement::unit(multiplier.clone());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, a: AlgebraElement) {
        self.entries[i * self.n + j] = a;
    }

    pub fn mul(&self, other: &AlgebraMatrix) -> Result<AlgebraMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, other.n)));
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = AlgebraElement::zero(self.get(i, j).multiplier().clone());
                for k in 0..n {
                    acc = acc.try_add(&self.get(i, k).convolve(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(AlgebraMatrix { n, entries })
    }

    /// Conjugate transpose with the algebra involution on entries.
    pub fn adjoint(&self) -> AlgebraMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).involution());
            }
        }
        AlgebraMatrix { n, entries }
    }

    /// `Σᵢ Aᵢᵢ`.
    pub fn diagonal_sum(&self) -> Option<AlgebraElement> {
        let first = self.entries.first()?;
        let mut acc = AlgebraElement::zero(first.multiplier().clone());
        for i in 0..self.n {
            acc = acc.try_add(self.get(i, i)).ok()?;
        }
        Some(acc)
    }

    /// `P A Pᵀ` for the permutation matrix of `perm`: entry `(i,j)` becomes
    /// `A[perm⁻¹(i)][perm⁻¹(j)]`.
    pub fn permute(&self, perm: &[usize]) -> AlgebraMatrix {
        let n = self.n;
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                entries[perm[i] * n + perm[j]] = self.get(i, j).clone();
            }
        }
        AlgebraMatrix { n, entries }
    }

    pub fn max_distance(&self, other: &AlgebraMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.max_distance(b))
            .fold(0.0, f64::max)
    }
}
