//! Finitely generated groups: explicit multiplication tables, free abelian
//! groups `ℤᵏ` with standard generators, and direct products of these.
//!
//! Every descriptor carries a symmetric generating set; the induced word
//! length is cached for tables, given by the `ℓ¹` norm on `ℤᵏ`, and is the sum
//! of factor lengths on products.

mod character;
mod finite;
mod hom;

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

pub use character::Character;
pub use finite::FiniteGroup;
pub use hom::Homomorphism;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Index(usize),
    Vector(Vec<i64>),
    Pair(Box<GroupElement>, Box<GroupElement>),
}

impl GroupElement {
    pub fn vector(v: &[i64]) -> Self {
        GroupElement::Vector(v.to_vec())
    }

    pub fn pair(a: GroupElement, b: GroupElement) -> Self {
        GroupElement::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_vector(&self) -> Option<&[i64]> {
        match self {
            GroupElement::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&GroupElement, &GroupElement)> {
        match self {
            GroupElement::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Stable 64-bit fingerprint, independent of the platform hasher.
    pub fn fingerprint(&self) -> u64 {
        fn mix(h: u64, x: u64) -> u64 {
            splitmix(h ^ x.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        }
        match self {
            GroupElement::Index(i) => mix(0x11, *i as u64),
            GroupElement::Vector(v) => v.iter().fold(mix(0x22, v.len() as u64), |h, &x| mix(h, x as u64)),
            GroupElement::Pair(a, b) => mix(mix(0x33, a.fingerprint()), b.fingerprint()),
        }
    }
}

pub(crate) fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Index(i) => write!(f, "#{i}"),
            GroupElement::Vector(v) => {
                write!(f, "(")?;
                for (k, x) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            GroupElement::Pair(a, b) => write!(f, "<{a}; {b}>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroupDescriptor {
    Finite(FiniteGroup),
    FreeAbelian { rank: usize },
    Product(Box<GroupDescriptor>, Box<GroupDescriptor>),
}

impl GroupDescriptor {
    pub fn free_abelian(rank: usize) -> Self {
        GroupDescriptor::FreeAbelian { rank }
    }

    pub fn z2() -> Self {
        GroupDescriptor::FreeAbelian { rank: 2 }
    }

    pub fn product(left: GroupDescriptor, right: GroupDescriptor) -> Self {
        GroupDescriptor::Product(Box::new(left), Box::new(right))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GroupDescriptor::Finite(_) => "finite-table",
            GroupDescriptor::FreeAbelian { .. } => "free-abelian",
            GroupDescriptor::Product(..) => "product",
        }
    }

    pub fn factors(&self) -> Option<(&GroupDescriptor, &GroupDescriptor)> {
        match self {
            GroupDescriptor::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupDescriptor::Finite(t) => GroupElement::Index(t.identity()),
            GroupDescriptor::FreeAbelian { rank } => GroupElement::Vector(vec![0; *rank]),
            GroupDescriptor::Product(a, b) => GroupElement::pair(a.identity(), b.identity()),
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        let ok = match (self, g) {
            (GroupDescriptor::Finite(t), GroupElement::Index(i)) => *i < t.order(),
            (GroupDescriptor::FreeAbelian { rank }, GroupElement::Vector(v)) => v.len() == *rank,
            (GroupDescriptor::Product(a, b), GroupElement::Pair(x, y)) => {
                a.check(x)?;
                b.check(y)?;
                true
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                element: g.clone(),
                expected: self.kind_name(),
            })
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        match (self, g, h) {
            (GroupDescriptor::Finite(t), GroupElement::Index(i), GroupElement::Index(j))
                if *i < t.order() && *j < t.order() =>
            {
                Ok(GroupElement::Index(t.mul(*i, *j)))
            }
            (GroupDescriptor::FreeAbelian { rank }, GroupElement::Vector(x), GroupElement::Vector(y))
                if x.len() == *rank && y.len() == *rank =>
            {
                Ok(GroupElement::Vector(x.iter().zip(y).map(|(a, b)| a + b).collect()))
            }
            (GroupDescriptor::Product(a, b), GroupElement::Pair(x1, y1), GroupElement::Pair(x2, y2)) => {
                Ok(GroupElement::pair(a.multiply(x1, x2)?, b.multiply(y1, y2)?))
            }
            _ => {
                self.check(g)?;
                self.check(h)?;
                unreachable!("shape checks accept only matching operands")
            }
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(match (self, g) {
            (GroupDescriptor::Finite(t), GroupElement::Index(i)) => GroupElement::Index(t.inv(*i)),
            (GroupDescriptor::FreeAbelian { .. }, GroupElement::Vector(v)) => {
                GroupElement::Vector(v.iter().map(|x| -x).collect())
            }
            (GroupDescriptor::Product(a, b), GroupElement::Pair(x, y)) => {
                GroupElement::pair(a.inverse(x)?, b.inverse(y)?)
            }
            _ => unreachable!(),
        })
    }

    /// Product of a sequence, left to right.
    pub fn multiply_all<'a>(&self, elems: impl IntoIterator<Item = &'a GroupElement>) -> Result<GroupElement> {
        elems
            .into_iter()
            .try_fold(self.identity(), |acc, g| self.multiply(&acc, g))
    }

    pub fn word_length(&self, g: &GroupElement) -> Result<usize> {
        self.check(g)?;
        Ok(match (self, g) {
            (GroupDescriptor::Finite(t), GroupElement::Index(i)) => t.length(*i),
            (GroupDescriptor::FreeAbelian { .. }, GroupElement::Vector(v)) => {
                v.iter().map(|x| x.unsigned_abs() as usize).sum()
            }
            (GroupDescriptor::Product(a, b), GroupElement::Pair(x, y)) => a.word_length(x)? + b.word_length(y)?,
            _ => unreachable!(),
        })
    }

    /// Symmetric generating set as group elements.
    pub fn generators(&self) -> Vec<GroupElement> {
        match self {
            GroupDescriptor::Finite(t) => t.generators().iter().map(|&i| GroupElement::Index(i)).collect(),
            GroupDescriptor::FreeAbelian { rank } => {
                let mut out = Vec::with_capacity(2 * rank);
                for k in 0..*rank {
                    for s in [1, -1] {
                        let mut v = vec![0; *rank];
                        v[k] = s;
                        out.push(GroupElement::Vector(v));
                    }
                }
                out
            }
            GroupDescriptor::Product(a, b) => {
                let ea = a.identity();
                let eb = b.identity();
                let mut out: Vec<_> = a.generators().into_iter().map(|g| GroupElement::pair(g, eb.clone())).collect();
                out.extend(b.generators().into_iter().map(|g| GroupElement::pair(ea.clone(), g)));
                out
            }
        }
    }

    /// All elements with word length `<= radius`, in lexicographic order.
    pub fn ball(&self, radius: usize) -> Vec<GroupElement> {
        let mut out = match self {
            GroupDescriptor::Finite(t) => (0..t.order())
                .filter(|&i| t.length(i) <= radius)
                .map(GroupElement::Index)
                .collect(),
            GroupDescriptor::FreeAbelian { rank } => {
                let mut out = Vec::new();
                let mut cur = Vec::with_capacity(*rank);
                l1_ball(*rank, radius as i64, &mut cur, &mut out);
                out
            }
            GroupDescriptor::Product(a, b) => {
                let mut out = Vec::new();
                for x in a.ball(radius) {
                    let lx = a.word_length(&x).unwrap_or(usize::MAX);
                    for y in b.ball(radius - lx) {
                        out.push(GroupElement::pair(x.clone(), y));
                    }
                }
                out
            }
        };
        out.sort();
        out
    }

    /// Elements of word length exactly `radius`.
    pub fn sphere(&self, radius: usize) -> Vec<GroupElement> {
        self.ball(radius)
            .into_iter()
            .filter(|g| self.word_length(g).map(|l| l == radius).unwrap_or(false))
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        match self {
            GroupDescriptor::Finite(_) => true,
            GroupDescriptor::FreeAbelian { rank } => *rank == 0,
            GroupDescriptor::Product(a, b) => a.is_finite() && b.is_finite(),
        }
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            GroupDescriptor::Finite(t) => Some(t.order()),
            GroupDescriptor::FreeAbelian { rank } => (*rank == 0).then_some(1),
            GroupDescriptor::Product(a, b) => Some(a.order()? * b.order()?),
        }
    }

    /// Largest word length, for finite groups.
    pub fn diameter(&self) -> Option<usize> {
        match self {
            GroupDescriptor::Finite(t) => Some(t.diameter()),
            GroupDescriptor::FreeAbelian { rank } => (*rank == 0).then_some(0),
            GroupDescriptor::Product(a, b) => Some(a.diameter()? + b.diameter()?),
        }
    }

    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        self.diameter().map(|d| self.ball(d))
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupDescriptor::Finite(t) => t.is_abelian(),
            GroupDescriptor::FreeAbelian { .. } => true,
            GroupDescriptor::Product(a, b) => a.is_abelian() && b.is_abelian(),
        }
    }

    pub fn conjugate(&self, h: &GroupElement, g: &GroupElement) -> Result<GroupElement> {
        let hg = self.multiply(h, g)?;
        self.multiply(&hg, &self.inverse(h)?)
    }

    /// The conjugacy class `{h g h⁻¹}`, sorted.
    pub fn conjugacy_class(&self, g: &GroupElement) -> Result<Vec<GroupElement>> {
        self.check(g)?;
        Ok(match (self, g) {
            (GroupDescriptor::Finite(t), GroupElement::Index(i)) => {
                let set: BTreeSet<usize> = (0..t.order()).map(|h| t.mul(t.mul(h, *i), t.inv(h))).collect();
                set.into_iter().map(GroupElement::Index).collect()
            }
            (GroupDescriptor::FreeAbelian { .. }, _) => vec![g.clone()],
            (GroupDescriptor::Product(a, b), GroupElement::Pair(x, y)) => {
                let cy = b.conjugacy_class(y)?;
                let mut out = Vec::new();
                for u in a.conjugacy_class(x)? {
                    for v in &cy {
                        out.push(GroupElement::pair(u.clone(), v.clone()));
                    }
                }
                out.sort();
                out
            }
            _ => unreachable!(),
        })
    }

    pub fn in_conjugacy_class(&self, g: &GroupElement, x: &GroupElement) -> Result<bool> {
        self.check(x)?;
        Ok(match (self, g, x) {
            (GroupDescriptor::Finite(t), GroupElement::Index(i), GroupElement::Index(j)) => {
                (0..t.order()).any(|h| t.mul(t.mul(h, *i), t.inv(h)) == *j)
            }
            (GroupDescriptor::FreeAbelian { .. }, _, _) => g == x,
            (GroupDescriptor::Product(a, b), GroupElement::Pair(g1, g2), GroupElement::Pair(x1, x2)) => {
                a.in_conjugacy_class(g1, x1)? && b.in_conjugacy_class(g2, x2)?
            }
            _ => {
                self.check(g)?;
                false
            }
        })
    }

    /// Uniform element for finite groups; uniform in the box `[-radius, radius]ᵏ` on `ℤᵏ`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, radius: i64) -> GroupElement {
        match self {
            GroupDescriptor::Finite(t) => GroupElement::Index(rng.gen_range(0..t.order())),
            GroupDescriptor::FreeAbelian { rank } => {
                GroupElement::Vector((0..*rank).map(|_| rng.gen_range(-radius..=radius)).collect())
            }
            GroupDescriptor::Product(a, b) => GroupElement::pair(a.random_element(rng, radius), b.random_element(rng, radius)),
        }
    }

    /// All characters `Γ → U(1)` of a finite group, by brute force over
    /// assignments of roots of unity to the defining generators.
    pub fn characters(&self) -> Result<Vec<Character>> {
        match self {
            GroupDescriptor::Finite(t) => Ok(t.characters()?.into_iter().map(Character::Table).collect()),
            GroupDescriptor::FreeAbelian { rank: 0 } => Ok(vec![Character::Trivial]),
            GroupDescriptor::FreeAbelian { .. } => Err(Error::Unsupported(
                "a finite group: ℤᵏ has a continuum of characters".into(),
            )),
            GroupDescriptor::Product(a, b) => {
                let ca = a.characters()?;
                let cb = b.characters()?;
                let mut out = Vec::with_capacity(ca.len() * cb.len());
                for x in &ca {
                    for y in &cb {
                        out.push(Character::Product(Box::new(x.clone()), Box::new(y.clone())));
                    }
                }
                Ok(out)
            }
        }
    }
}

fn l1_ball(rank: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<GroupElement>) {
    if cur.len() == rank {
        out.push(GroupElement::Vector(cur.clone()));
        return;
    }
    let used: i64 = cur.iter().map(|x| x.abs()).sum();
    let left = budget - used;
    for x in -left..=left {
        cur.push(x);
        l1_ball(rank, budget, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::{HashMap, VecDeque};

    /// Independent BFS on the Cayley graph, the oracle for word lengths.
    fn bfs_lengths(d: &GroupDescriptor, radius: usize) -> HashMap<GroupElement, usize> {
        let gens = d.generators();
        let mut dist = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(d.identity(), 0);
        queue.push_back(d.identity());
        while let Some(g) = queue.pop_front() {
            let l = dist[&g];
            if l == radius {
                continue;
            }
            for s in &gens {
                let h = d.multiply(&g, s).unwrap();
                dist.entry(h.clone()).or_insert_with(|| {
                    queue.push_back(h);
                    l + 1
                });
            }
        }
        dist
    }

    #[test]
    fn z2_word_length_matches_bfs() {
        let d = GroupDescriptor::z2();
        let lengths = bfs_lengths(&d, 8);
        assert_eq!(lengths[&GroupElement::vector(&[3, -2])], 5);
        for (g, l) in &lengths {
            assert_eq!(d.word_length(g).unwrap(), *l);
        }
    }

    #[test]
    fn z2_ball_cardinality() {
        let d = GroupDescriptor::z2();
        for r in 0..8usize {
            let ball = d.ball(r);
            assert_eq!(ball.len(), 2 * r * r + 2 * r + 1);
            let bfs = bfs_lengths(&d, r);
            assert_eq!(ball.len(), bfs.len());
            assert!(ball.windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(d.ball(0), vec![GroupElement::vector(&[0, 0])]);
    }

    #[test]
    fn product_lengths_add() {
        let d = GroupDescriptor::product(GroupDescriptor::Finite(FiniteGroup::symmetric(3)), GroupDescriptor::z2());
        let bfs = bfs_lengths(&d, 4);
        for g in d.ball(4) {
            assert_eq!(d.word_length(&g).unwrap(), bfs[&g], "{g}");
        }
        assert_eq!(d.ball(4).len(), bfs.len());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let d = GroupDescriptor::z2();
        assert!(d.multiply(&GroupElement::Index(0), &d.identity()).is_err());
        assert!(d.word_length(&GroupElement::vector(&[1, 2, 3])).is_err());
    }

    #[test]
    fn random_symmetry_and_subadditivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in [
            GroupDescriptor::z2(),
            GroupDescriptor::Finite(FiniteGroup::symmetric(3)),
            GroupDescriptor::Finite(FiniteGroup::alternating(5)),
        ] {
            for _ in 0..1000 {
                let g = d.random_element(&mut rng, 20);
                let h = d.random_element(&mut rng, 20);
                let lg = d.word_length(&g).unwrap();
                let lh = d.word_length(&h).unwrap();
                let lgh = d.word_length(&d.multiply(&g, &h).unwrap()).unwrap();
                assert_eq!(lg, d.word_length(&d.inverse(&g).unwrap()).unwrap());
                assert!(lgh <= lg + lh);
                assert!((lgh as i64 - lh as i64).unsigned_abs() as usize <= lg);
            }
        }
    }

    #[test]
    fn conjugacy_classes() {
        let s3 = GroupDescriptor::Finite(FiniteGroup::symmetric(3));
        let t12 = GroupElement::Index(FiniteGroup::symmetric(3).index_of_permutation(&[1, 0, 2]).unwrap());
        let class = s3.conjugacy_class(&t12).unwrap();
        assert_eq!(class.len(), 3);
        let g = FiniteGroup::symmetric(3);
        for c in &class {
            let GroupElement::Index(i) = c else { panic!() };
            let p = g.permutation(*i).unwrap();
            let fixed = p.iter().enumerate().filter(|(k, v)| k == *v).count();
            assert_eq!(fixed, 1, "transpositions fix one point");
        }
        assert_eq!(s3.conjugacy_class(&s3.identity()).unwrap(), vec![s3.identity()]);
        let z2 = GroupDescriptor::z2();
        let x = GroupElement::vector(&[1, 1]);
        assert_eq!(z2.conjugacy_class(&x).unwrap(), vec![x]);
    }
}
