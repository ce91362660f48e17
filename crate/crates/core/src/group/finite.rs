use std::collections::VecDeque;

use num_integer::Integer;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::GroupElement;

/// Exhaustive associativity check up to this order; sampled above.
const EXHAUSTIVE_ASSOC_MAX: usize = 64;
const SAMPLED_ASSOC_TRIPLES: usize = 20_000;
/// Cap on generator-value assignments tried during character enumeration.
const CHARACTER_SEARCH_CAP: u64 = 2_000_000;

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    base_generators: Vec<usize>,
    generators: Vec<usize>,
    lengths: Vec<usize>,
    perms: Option<Vec<Vec<usize>>>,
}

impl FiniteGroup {
    /// Validates a table and builds the group. The generating set is closed
    /// under inversion automatically.
    pub fn from_table(mul: Vec<Vec<usize>>, identity: usize, generators: Vec<usize>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if identity >= n {
            return Err(Error::InvalidTable(format!("identity {identity} out of range")));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {i} has length {}, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidTable(format!("entry {bad} in row {i} out of range")));
            }
            table.extend_from_slice(row);
        }
        for g in 0..n {
            if table[identity * n + g] != g || table[g * n + identity] != g {
                return Err(Error::InvalidTable(format!("identity law fails at {g}")));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for g in 0..n {
            let row = &table[g * n..(g + 1) * n];
            let mut seen = vec![false; n];
            for &x in row {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidTable(format!("row {g} is not a permutation")));
                }
            }
            inv[g] = row.iter().position(|&x| x == identity).unwrap_or(usize::MAX);
            if inv[g] == usize::MAX || table[inv[g] * n + g] != identity {
                return Err(Error::InvalidTable(format!("element {g} has no two-sided inverse")));
            }
        }
        let assoc = |a: usize, b: usize, c: usize| table[table[a * n + b] * n + c] == table[a * n + table[b * n + c]];
        if n <= EXHAUSTIVE_ASSOC_MAX {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidTable(format!("associativity fails at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x61_73_73_6f_63);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidTable(format!("associativity fails at ({a}, {b}, {c})")));
                }
            }
        }
        if let Some(&bad) = generators.iter().find(|&&g| g >= n) {
            return Err(Error::InvalidTable(format!("generator {bad} out of range")));
        }
        let mut sym: Vec<usize> = generators.iter().flat_map(|&g| [g, inv[g]]).collect();
        sym.sort_unstable();
        sym.dedup();

        let mut lengths = vec![usize::MAX; n];
        lengths[identity] = 0;
        let mut queue = VecDeque::from([identity]);
        while let Some(g) = queue.pop_front() {
            for &s in &sym {
                let h = table[g * n + s];
                if lengths[h] == usize::MAX {
                    lengths[h] = lengths[g] + 1;
                    queue.push_back(h);
                }
            }
        }
        if let Some(g) = lengths.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Unreachable(GroupElement::Index(g)));
        }
        Ok(FiniteGroup {
            n,
            table,
            inv,
            identity,
            base_generators: generators,
            generators: sym,
            lengths,
            perms: None,
        })
    }

    /// Group of the given permutations, which must be closed under
    /// composition `(στ)(i) = σ(τ(i))`. Elements are indexed in the given order.
    fn from_permutations(perms: Vec<Vec<usize>>, generators: Vec<Vec<usize>>) -> Self {
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under composition");
        let mul: Vec<Vec<usize>> = perms
            .iter()
            .map(|s| perms.iter().map(|t| index(&compose(s, t))).collect())
            .collect();
        let id: Vec<usize> = (0..perms[0].len()).collect();
        let gens = generators.iter().map(|g| index(g)).collect();
        let mut g = Self::from_table(mul, index(&id), gens).expect("permutation groups are valid");
        g.perms = Some(perms);
        g
    }

    /// The symmetric group on `{0,…,n−1}`, elements in lexicographic order of
    /// their images, generated by adjacent transpositions.
    pub fn symmetric(n: usize) -> Self {
        let perms = all_permutations(n);
        let gens = (0..n.saturating_sub(1)).map(|i| transposition(n, i, i + 1)).collect();
        Self::from_permutations(perms, gens)
    }

    /// The alternating group, generated by `(0 1 2)` and an `n`-cycle for odd
    /// `n` and by the 3-cycles `(0 1 i)` otherwise.
    pub fn alternating(n: usize) -> Self {
        let perms: Vec<_> = all_permutations(n).into_iter().filter(|p| is_even(p)).collect();
        let gens = if n < 3 {
            vec![]
        } else if n % 2 == 1 {
            vec![cycle(n, &[0, 1, 2]), cycle(n, &(0..n).collect::<Vec<_>>())]
        } else {
            (2..n).map(|i| cycle(n, &[0, 1, i])).collect()
        };
        Self::from_permutations(perms, gens)
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        Self::from_table(mul, 0, gens).expect("cyclic tables are valid")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `ℤ/2 × ℤ/2` with elements `0=e, 1=a, 2=b, 3=ab`.
    pub fn klein_four() -> Self {
        let mul = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        Self::from_table(mul, 0, vec![1, 2]).expect("Klein four-group table is valid")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    #[inline]
    pub fn length(&self, a: usize) -> usize {
        self.lengths[a]
    }

    pub fn diameter(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0)
    }

    /// Symmetric generating set.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Generators as supplied, before symmetrization.
    pub fn base_generators(&self) -> &[usize] {
        &self.base_generators
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (a..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.n).map(|a| self.element_order(a)).fold(1, |acc, o| acc.lcm(&o))
    }

    /// The permutation behind an index, for groups built from permutations.
    pub fn permutation(&self, a: usize) -> Option<&[usize]> {
        self.perms.as_ref().and_then(|p| p.get(a)).map(|p| p.as_slice())
    }

    pub fn index_of_permutation(&self, p: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.iter().position(|q| q == p)
    }

    /// All homomorphisms to `U(1)` as angle tables (in turns), found by trying
    /// every assignment of `exponent`-th roots of unity to the base generators
    /// compatible with their orders, propagating along the Cayley graph, and
    /// keeping the assignments that are multiplicative on every pair.
    pub fn characters(&self) -> Result<Vec<Vec<Rational64>>> {
        let e = self.exponent() as i64;
        let gens = &self.base_generators;
        let choices: Vec<i64> = gens.iter().map(|&g| self.element_order(g) as i64).collect();
        let total = choices.iter().try_fold(1u64, |acc, &c| acc.checked_mul(c as u64));
        match total {
            Some(t) if t <= CHARACTER_SEARCH_CAP => {}
            _ => return Err(Error::Unsupported("a smaller character search space".into())),
        }
        let mut out = Vec::new();
        let mut assign = vec![0i64; gens.len()];
        loop {
            // Generator g of order o takes angle k·(e/o)/e for k in 0..o.
            let values: Vec<i64> = assign
                .iter()
                .zip(&choices)
                .map(|(&k, &o)| k * (e / o))
                .collect();
            if let Some(table) = self.propagate(&values, e) {
                out.push(table.into_iter().map(|v| Rational64::new(v, e)).collect());
            }
            let mut pos = 0;
            loop {
                if pos == assign.len() {
                    return Ok(out);
                }
                assign[pos] += 1;
                if assign[pos] < choices[pos] {
                    break;
                }
                assign[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Extends generator values (numerators over `e`) to a table, or `None`
    /// if the assignment is not a homomorphism.
    fn propagate(&self, values: &[i64], e: i64) -> Option<Vec<i64>> {
        let n = self.n;
        let mut val = vec![i64::MIN; n];
        val[self.identity] = 0;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(g) = queue.pop_front() {
            for (&s, &v) in self.base_generators.iter().zip(values) {
                for (h, w) in [(self.mul(g, s), v), (self.mul(g, self.inv(s)), -v)] {
                    let target = (val[g] + w).rem_euclid(e);
                    if val[h] == i64::MIN {
                        val[h] = target;
                        queue.push_back(h);
                    } else if val[h] != target {
                        return None;
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if val[self.mul(a, b)] != (val[a] + val[b]).rem_euclid(e) {
                    return None;
                }
            }
        }
        Some(val)
    }
}

fn compose(s: &[usize], t: &[usize]) -> Vec<usize> {
    t.iter().map(|&i| s[i]).collect()
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn transposition(n: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(a, b);
    p
}

fn cycle(n: usize, points: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for (k, &a) in points.iter().enumerate() {
        p[a] = points[(k + 1) % points.len()];
    }
    p
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}
