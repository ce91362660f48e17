//! JSON specifications for groups, multipliers, elements, traces, matrices,
//! covers and cochains. Rationals are strings `"p/q"` and are parsed exactly.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;

use crate::algebra::{AlgebraElement, AlgebraMatrix};
use crate::cohomology::GroupCochain;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupDescriptor, GroupElement};
use crate::linalg::CMatrix;
use crate::mishchenko::{CoverData, RampProfile};
use crate::multiplier::{CoboundaryData, Gauge, LatticeGeometricData, Multiplier, ZFunction};
use crate::phase::{parse_rational, Angle};
use crate::representations::harper_on;
use crate::traces::TraceFunctional;

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpec {
    FiniteTable {
        n: usize,
        mul: Vec<Vec<usize>>,
        identity: usize,
        generators: Vec<usize>,
    },
    FreeAbelian {
        rank: usize,
    },
    Product {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
    Symmetric {
        n: usize,
    },
    Alternating {
        n: usize,
    },
    Cyclic {
        n: usize,
    },
    Trivial,
}

impl GroupSpec {
    /// Short names: `z`, `z2`, `z<k>`, `s<n>`, `a<n>`, `c<n>`, `trivial`.
    pub fn parse_short(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown group '{s}'"));
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        Ok(match s {
            "trivial" => GroupSpec::Trivial,
            "z" => GroupSpec::FreeAbelian { rank: 1 },
            _ if s.starts_with('z') => GroupSpec::FreeAbelian { rank: num(&s[1..])? },
            _ if s.starts_with('s') => GroupSpec::Symmetric { n: num(&s[1..])? },
            _ if s.starts_with('a') => GroupSpec::Alternating { n: num(&s[1..])? },
            _ if s.starts_with('c') => GroupSpec::Cyclic { n: num(&s[1..])? },
            _ => return Err(bad()),
        })
    }

    pub fn build(&self) -> Result<GroupDescriptor> {
        Ok(match self {
            GroupSpec::FiniteTable {
                n,
                mul,
                identity,
                generators,
            } => {
                if mul.len() != *n {
                    return Err(Error::Config(format!("table has {} rows, n = {n}", mul.len())));
                }
                GroupDescriptor::Finite(FiniteGroup::from_table(mul.clone(), *identity, generators.clone())?)
            }
            GroupSpec::FreeAbelian { rank } => GroupDescriptor::free_abelian(*rank),
            GroupSpec::Product { left, right } => GroupDescriptor::product(left.build()?, right.build()?),
            GroupSpec::Symmetric { n } => GroupDescriptor::Finite(FiniteGroup::symmetric(*n)),
            GroupSpec::Alternating { n } => GroupDescriptor::Finite(FiniteGroup::alternating(*n)),
            GroupSpec::Cyclic { n } => GroupDescriptor::Finite(FiniteGroup::cyclic(*n)),
            GroupSpec::Trivial => GroupDescriptor::Finite(FiniteGroup::trivial()),
        })
    }
}

/// A group element: an index into a finite table, an integer vector, or a pair.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ElementSpec {
    Index(usize),
    Vector(Vec<i64>),
    Pair { left: Box<ElementSpec>, right: Box<ElementSpec> },
}

impl ElementSpec {
    pub fn build(&self, group: &GroupDescriptor) -> Result<GroupElement> {
        let g = self.raw();
        group.check(&g)?;
        Ok(g)
    }

    fn raw(&self) -> GroupElement {
        match self {
            ElementSpec::Index(i) => GroupElement::Index(*i),
            ElementSpec::Vector(v) => GroupElement::vector(v),
            ElementSpec::Pair { left, right } => GroupElement::pair(left.raw(), right.raw()),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum GaugeSpec {
    #[default]
    Landau,
    Symmetric,
}

impl From<GaugeSpec> for Gauge {
    fn from(g: GaugeSpec) -> Gauge {
        match g {
            GaugeSpec::Landau => Gauge::Landau,
            GaugeSpec::Symmetric => Gauge::Symmetric,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HashedSpec {
    pub seed: u64,
    pub denominator: i64,
}

/// Exactly one of the fields must be set.
#[derive(Debug, Clone, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ZSpec {
    /// `[[element, "angle"], …]`; unlisted elements get angle 0.
    pub entries: Option<Vec<(ElementSpec, String)>>,
    /// Angle per element of a finite table.
    pub table: Option<Vec<String>>,
    pub hashed: Option<HashedSpec>,
    /// `θ`: the symmetric-to-Landau gauge change on `ℤ²`.
    pub gauge_change: Option<String>,
}

impl ZSpec {
    pub fn build(&self, group: &GroupDescriptor) -> Result<CoboundaryData> {
        let set = [self.entries.is_some(), self.table.is_some(), self.hashed.is_some(), self.gauge_change.is_some()];
        if set.iter().filter(|&&b| b).count() != 1 {
            return Err(Error::Config("z needs exactly one of entries, table, hashed, gauge-change".into()));
        }
        if let Some(entries) = &self.entries {
            let map = entries
                .iter()
                .map(|(g, a)| Ok((g.build(group)?, parse_rational(a)?)))
                .collect::<Result<_>>()?;
            return CoboundaryData::new(group, ZFunction::Map(map));
        }
        if let Some(t) = &self.table {
            let angles = t.iter().map(|a| parse_rational(a)).collect::<Result<_>>()?;
            return CoboundaryData::new(group, ZFunction::Table(angles));
        }
        if let Some(h) = &self.hashed {
            return Ok(CoboundaryData::hashed(h.seed, h.denominator));
        }
        let theta = parse_rational(self.gauge_change.as_deref().unwrap_or_default())?;
        Ok(CoboundaryData::gauge_change(theta))
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MultiplierSpec {
    Trivial,
    Magnetic {
        theta: String,
        #[serde(default)]
        gauge: GaugeSpec,
        /// Antisymmetric integer pairing; the standard symplectic form on `ℤ²` if absent.
        pairing: Option<Vec<Vec<i64>>>,
    },
    Table {
        phases: Vec<Vec<String>>,
    },
    Geometric {
        theta: String,
        #[serde(default)]
        gauge: GaugeSpec,
        potential: Option<[[String; 2]; 2]>,
        base_point: Option<[i64; 2]>,
    },
    Power {
        base: Box<MultiplierSpec>,
        s: String,
    },
    CoboundaryTwist {
        base: Box<MultiplierSpec>,
        z: ZSpec,
    },
    External {
        left: Box<MultiplierSpec>,
        right: Box<MultiplierSpec>,
    },
    Conjugate {
        base: Box<MultiplierSpec>,
    },
}

impl MultiplierSpec {
    /// Short forms: `trivial`, `magnetic:p/q`, `magnetic:p/q:symmetric`.
    pub fn parse_short(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["trivial"] => Ok(MultiplierSpec::Trivial),
            ["magnetic", theta] => Ok(MultiplierSpec::Magnetic {
                theta: theta.to_string(),
                gauge: GaugeSpec::Landau,
                pairing: None,
            }),
            ["magnetic", theta, gauge] => Ok(MultiplierSpec::Magnetic {
                theta: theta.to_string(),
                gauge: match *gauge {
                    "landau" => GaugeSpec::Landau,
                    "symmetric" => GaugeSpec::Symmetric,
                    _ => return Err(Error::Config(format!("unknown gauge '{gauge}'"))),
                },
                pairing: None,
            }),
            _ => Err(Error::Config(format!("unknown multiplier '{s}'"))),
        }
    }

    pub fn build(&self, group: Arc<GroupDescriptor>) -> Result<Multiplier> {
        Ok(match self {
            MultiplierSpec::Trivial => Multiplier::trivial(group),
            MultiplierSpec::Magnetic { theta, gauge, pairing } => {
                let theta = parse_rational(theta)?;
                let pairing = match pairing {
                    Some(p) => p.clone(),
                    None if *group == GroupDescriptor::z2() => vec![vec![0, 1], vec![-1, 0]],
                    None => return Err(Error::Config("a pairing is required off ℤ²".into())),
                };
                Multiplier::magnetic_on(group, theta, pairing, (*gauge).into())?
            }
            MultiplierSpec::Table { phases } => {
                let angles = phases
                    .iter()
                    .map(|row| row.iter().map(|a| parse_rational(a).map(Angle::Exact)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Multiplier::table(group, angles)?
            }
            MultiplierSpec::Geometric {
                theta,
                gauge,
                potential,
                base_point,
            } => {
                if *group != GroupDescriptor::z2() {
                    return Err(Error::Config("geometric multipliers live on ℤ²".into()));
                }
                let theta = parse_rational(theta)?;
                let mut data = match potential {
                    Some(p) => {
                        let q = |s: &String| parse_rational(s);
                        LatticeGeometricData::with_potential(theta, [[q(&p[0][0])?, q(&p[0][1])?], [q(&p[1][0])?, q(&p[1][1])?]])?
                    }
                    None => LatticeGeometricData::new(theta, (*gauge).into()),
                };
                if let Some(x0) = base_point {
                    data = data.base_point(*x0);
                }
                Multiplier::geometric(data)?
            }
            MultiplierSpec::Power { base, s } => base.build(group)?.power_family(parse_rational(s)?)?,
            MultiplierSpec::CoboundaryTwist { base, z } => {
                let z = z.build(&group)?;
                base.build(group)?.twist(z)
            }
            MultiplierSpec::External { left, right } => {
                let Some((gl, gr)) = group.factors() else {
                    return Err(Error::Config("external multipliers need a product group".into()));
                };
                let (l, r) = (left.build(Arc::new(gl.clone()))?, right.build(Arc::new(gr.clone()))?);
                Multiplier::external(&l, &r)
            }
            MultiplierSpec::Conjugate { base } => base.build(group)?.conj(),
        })
    }
}

/// `x`, `[re, im]` or `{"re": x, "im": y}`.
#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ComplexSpec {
    Real(f64),
    Pair([f64; 2]),
    Parts { re: f64, im: f64 },
}

impl From<ComplexSpec> for Complex64 {
    fn from(c: ComplexSpec) -> Complex64 {
        match c {
            ComplexSpec::Real(x) => Complex64::new(x, 0.0),
            ComplexSpec::Pair([re, im]) | ComplexSpec::Parts { re, im } => Complex64::new(re, im),
        }
    }
}

pub fn build_matrix(rows: &[Vec<ComplexSpec>]) -> Result<CMatrix> {
    let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(|&c| c.into()).collect()).collect();
    CMatrix::from_rows(&rows)
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub g: ElementSpec,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// `{"terms": [...]}` or `{"harper": [c₁, c₂, c₃, c₄]}`.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged, deny_unknown_fields)]
pub enum AlgebraSpec {
    Terms { terms: Vec<TermSpec> },
    Harper { harper: [f64; 4] },
}

impl AlgebraSpec {
    pub fn build(&self, m: Arc<Multiplier>) -> Result<AlgebraElement> {
        match self {
            AlgebraSpec::Terms { terms } => {
                let group = m.group().clone();
                let terms = terms
                    .iter()
                    .map(|t| Ok((t.g.build(&group)?, Complex64::new(t.re, t.im))))
                    .collect::<Result<Vec<_>>>()?;
                AlgebraElement::from_terms(m, terms)
            }
            AlgebraSpec::Harper { harper } => harper_on(m, *harper),
        }
    }
}

pub fn build_algebra_matrix(rows: &[Vec<AlgebraSpec>], m: Arc<Multiplier>) -> Result<AlgebraMatrix> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|a| a.build(m.clone())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    AlgebraMatrix::from_rows(rows)
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WeightedTrace {
    pub coef: ComplexSpec,
    pub trace: TraceSpec,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TraceSpec {
    Regular,
    OneDim,
    Conjugacy { g: ElementSpec },
    /// `τ ⊗ tr₍₂₎` with `τ` on the untwisted algebra of the left factor.
    Product { left: Box<TraceSpec> },
    LinearCombination { terms: Vec<WeightedTrace> },
}

impl TraceSpec {
    pub fn build(&self, m: Arc<Multiplier>) -> Result<TraceFunctional> {
        Ok(match self {
            TraceSpec::Regular => TraceFunctional::regular(m),
            TraceSpec::OneDim => TraceFunctional::one_dim(m),
            TraceSpec::Conjugacy { g } => {
                let g = g.build(m.group())?;
                TraceFunctional::conjugacy(m, g)?
            }
            TraceSpec::Product { left } => {
                let Some((gl, _)) = m.group().factors() else {
                    return Err(Error::Config("a product trace needs a product group".into()));
                };
                let lm = Arc::new(Multiplier::trivial(Arc::new(gl.clone())));
                TraceFunctional::product(m, left.build(lm)?)?
            }
            TraceSpec::LinearCombination { terms } => TraceFunctional::linear_combination(
                terms
                    .iter()
                    .map(|t| Ok((t.coef.into(), t.trace.build(m.clone())?)))
                    .collect::<Result<_>>()?,
            )?,
        })
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileSpec {
    #[default]
    Cosine,
    Smooth,
}

impl From<ProfileSpec> for RampProfile {
    fn from(p: ProfileSpec) -> RampProfile {
        match p {
            ProfileSpec::Cosine => RampProfile::Cosine,
            ProfileSpec::Smooth => RampProfile::Smooth,
        }
    }
}

fn default_patches() -> usize {
    2
}

fn default_winding() -> i64 {
    1
}

fn default_ramp() -> String {
    "1/16".into()
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CoverSpec {
    /// Arcs `[k/patches, (k+1)/patches]` widened by `2·ramp`; `winding` is the
    /// jump of the transition across `0`.
    Circle {
        grid: usize,
        #[serde(default = "default_patches")]
        patches: usize,
        #[serde(default = "default_winding")]
        winding: i64,
        #[serde(default = "default_ramp")]
        ramp: String,
        #[serde(default)]
        profile: ProfileSpec,
    },
    Torus {
        grid: usize,
        patches: [usize; 2],
        winding: [i64; 2],
        #[serde(default = "default_ramp")]
        ramp: String,
        #[serde(default)]
        profile: ProfileSpec,
    },
}

impl CoverSpec {
    pub fn build(&self) -> Result<CoverData> {
        match self {
            CoverSpec::Circle {
                grid,
                patches,
                winding,
                ramp,
                profile,
            } => CoverData::circle(*grid, *patches, *winding, parse_rational(ramp)?, (*profile).into()),
            CoverSpec::Torus {
                grid,
                patches,
                winding,
                ramp,
                profile,
            } => CoverData::torus(*grid, *patches, *winding, parse_rational(ramp)?, (*profile).into()),
        }
    }
}

/// Built-in cochains: `area-z2`, `constant`, `linear-z(k)`.
pub fn cochain_by_name(name: &str, group: Arc<GroupDescriptor>) -> Result<GroupCochain> {
    match name {
        "area-z2" => {
            if *group != GroupDescriptor::z2() {
                return Err(Error::Config("area-z2 lives on ℤ²".into()));
            }
            Ok(GroupCochain::area_z2())
        }
        "constant" => Ok(GroupCochain::constant(group, 1.0)),
        _ => {
            let k = name
                .strip_prefix("linear-z(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|k| k.parse::<usize>().ok())
                .ok_or_else(|| Error::Config(format!("unknown cochain '{name}'")))?;
            let GroupDescriptor::FreeAbelian { rank } = *group else {
                return Err(Error::Config("linear-z(k) needs a free abelian group".into()));
            };
            if k >= rank {
                return Err(Error::Config(format!("linear-z({k}) on a group of rank {rank}")));
            }
            Ok(GroupCochain::linear_z(rank, k))
        }
    }
}
