#![allow(dead_code)]

use std::sync::Arc;

use num_rational::Rational64;
use twisted_core::group::FiniteGroup;
use twisted_core::multiplier::{CoboundaryData, Gauge, Multiplier};
use twisted_core::GroupDescriptor;

pub fn r(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

pub fn s3() -> Arc<GroupDescriptor> {
    Arc::new(GroupDescriptor::Finite(FiniteGroup::symmetric(3)))
}

/// An explicit angle table on a finite group, read off a hashed coboundary.
pub fn table_multiplier(group: Arc<GroupDescriptor>, seed: u64) -> Multiplier {
    let source = Multiplier::coboundary(group.clone(), CoboundaryData::hashed(seed, 12));
    let elems = group.elements().expect("finite group");
    let angles = elems
        .iter()
        .map(|g| elems.iter().map(|h| source.angle(g, h).unwrap()).collect())
        .collect();
    Multiplier::table(group, angles).unwrap()
}

/// `S₃ × ℤ²`.
pub fn s3_times_z2() -> Arc<GroupDescriptor> {
    Arc::new(GroupDescriptor::product(
        GroupDescriptor::Finite(FiniteGroup::symmetric(3)),
        GroupDescriptor::z2(),
    ))
}

/// The algebraic fixtures: `ℤ²`, `S₃` with a table, and `S₃ × ℤ²`, each
/// with the trivial multiplier and a nontrivial one.
pub fn algebra_fixtures() -> Vec<(&'static str, Arc<Multiplier>)> {
    let z2 = Arc::new(GroupDescriptor::z2());
    let table = table_multiplier(s3(), 11);
    vec![
        ("z2/trivial", Arc::new(Multiplier::trivial(z2))),
        ("z2/magnetic-1/3", Arc::new(Multiplier::magnetic(r(1, 3), Gauge::Landau))),
        ("s3/trivial", Arc::new(Multiplier::trivial(s3()))),
        ("s3/table", Arc::new(table.clone())),
        ("s3xz2/trivial", Arc::new(Multiplier::trivial(s3_times_z2()))),
        (
            "s3xz2/table-x-magnetic",
            Arc::new(Multiplier::external(&table, &Multiplier::magnetic(r(1, 3), Gauge::Landau))),
        ),
    ]
}

/// `τ(H⁴)` for the standard Harper operator by enumerating closed walks of
/// length four from the origin, each weighted by `cos(2πθ·area)`.
pub fn harper_fourth_moment_by_walks(theta: f64) -> f64 {
    let steps = [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)];
    let mut total = 0.0;
    for a in steps {
        for b in steps {
            for c in steps {
                for d in steps {
                    let path = [a, b, c, d];
                    let (mut x, mut y, mut twice_area) = (0i64, 0i64, 0i64);
                    for (dx, dy) in path {
                        let (nx, ny) = (x + dx, y + dy);
                        twice_area += x * ny - nx * y;
                        (x, y) = (nx, ny);
                    }
                    if (x, y) == (0, 0) {
                        total += (std::f64::consts::PI * theta * twice_area as f64).cos();
                    }
                }
            }
        }
    }
    total
}
