use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::linalg::CMatrix;

const UNITARY_TOL: f64 = 1e-10;

/// A finite-dimensional unitary representation given on generators: the
/// base generators of a finite table, or the unit vectors of `ℤᵏ` in order.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    dim: usize,
    generators: Vec<(GroupElement, CMatrix)>,
    /// All images, for finite groups.
    table: Option<HashMap<GroupElement, CMatrix>>,
}

fn unitarity_defect(u: &CMatrix) -> f64 {
    u.adjoint()
        .matmul(u)
        .and_then(|p| p.sub(&CMatrix::identity(u.rows())))
        .map_or(f64::INFINITY, |d| d.max_abs())
}

impl UnitaryRep {
    pub fn new(group: &GroupDescriptor, generators: Vec<(GroupElement, CMatrix)>) -> Result<Self> {
        let dim = generators.first().map_or(0, |(_, u)| u.rows());
        if dim == 0 {
            return Err(Error::MalformedRepresentation("no generator images".into()));
        }
        for (g, u) in &generators {
            group.check(g)?;
            if !u.is_square() || u.rows() != dim {
                return Err(Error::MalformedRepresentation(format!("image of {g} is not {dim}×{dim}")));
            }
            if unitarity_defect(u) > UNITARY_TOL {
                return Err(Error::MalformedRepresentation(format!("image of {g} is not unitary")));
            }
        }
        let table = match group {
            GroupDescriptor::Finite(_) => Some(Self::fill_table(group, &generators, dim)?),
            GroupDescriptor::FreeAbelian { rank } => {
                let expected: Vec<GroupElement> = (0..*rank)
                    .map(|i| GroupElement::Vector((0..*rank).map(|j| i64::from(i == j)).collect()))
                    .collect();
                if generators.iter().map(|(g, _)| g).ne(expected.iter()) {
                    return Err(Error::MalformedRepresentation("ℤᵏ images must be given on e₁, …, e_k".into()));
                }
                None
            }
            GroupDescriptor::Product(..) => {
                return Err(Error::Unsupported("unitary representations of finite groups or ℤᵏ".into()));
            }
        };
        let rep = UnitaryRep { dim, generators, table };
        rep.verify(group)?;
        Ok(rep)
    }

    /// Breadth-first extension `u(sg) = u(s)u(g)` over generators and inverses.
    fn fill_table(group: &GroupDescriptor, gens: &[(GroupElement, CMatrix)], dim: usize) -> Result<HashMap<GroupElement, CMatrix>> {
        let mut steps: Vec<(GroupElement, CMatrix)> = Vec::new();
        for (g, u) in gens {
            steps.push((g.clone(), u.clone()));
            steps.push((group.inverse(g)?, u.adjoint()));
        }
        let mut table = HashMap::new();
        let e = group.identity();
        table.insert(e.clone(), CMatrix::identity(dim));
        let mut queue = VecDeque::from([e]);
        while let Some(g) = queue.pop_front() {
            let ug = table[&g].clone();
            for (s, us) in &steps {
                let sg = group.multiply(s, &g)?;
                if !table.contains_key(&sg) {
                    table.insert(sg.clone(), us.matmul(&ug)?);
                    queue.push_back(sg);
                }
            }
        }
        if Some(table.len()) != group.order() {
            return Err(Error::MalformedRepresentation("generators do not generate the group".into()));
        }
        Ok(table)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, group: &GroupDescriptor, g: &GroupElement) -> Result<CMatrix> {
        if let Some(t) = &self.table {
            return t.get(g).cloned().ok_or_else(|| Error::ShapeMismatch {
                element: g.clone(),
                expected: "element of the represented group",
            });
        }
        group.check(g)?;
        let v = g.as_vector().expect("checked against ℤᵏ");
        let mut out = CMatrix::identity(self.dim);
        for ((_, u), &n) in self.generators.iter().zip(v) {
            let step = if n < 0 { u.adjoint() } else { u.clone() };
            for _ in 0..n.unsigned_abs() {
                out = out.matmul(&step)?;
            }
        }
        Ok(out)
    }

    /// `u(gh) = u(g)u(h)`: on all pairs of a finite group of order at most 64,
    /// else on 500 sampled pairs.
    pub fn verify(&self, group: &GroupDescriptor) -> Result<()> {
        let pairs: Vec<(GroupElement, GroupElement)> = match group.order() {
            Some(n) if n <= 64 => {
                let el = group.elements().unwrap_or_default();
                el.iter().flat_map(|g| el.iter().map(move |h| (g.clone(), h.clone()))).collect()
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(0x7a11);
                (0..500)
                    .map(|_| {
                        let r = rng.gen_range(1..=3);
                        (group.random_element(&mut rng, r), group.random_element(&mut rng, r))
                    })
                    .collect()
            }
        };
        for (g, h) in pairs {
            let lhs = self.image(group, &group.multiply(&g, &h)?)?;
            let rhs = self.image(group, &g)?.matmul(&self.image(group, &h)?)?;
            if lhs.sub(&rhs)?.max_abs() > UNITARY_TOL {
                return Err(Error::MalformedRepresentation(format!("not multiplicative at ({g}, {h})")));
            }
        }
        Ok(())
    }
}
