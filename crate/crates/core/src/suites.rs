//! Property suites behind `twisted verify`. Each property reports its
//! tolerance, sample count, worst defect and up to eight witnesses.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::cohomology::{to_cyclic, GroupCochain};
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, GroupElement};
use crate::mishchenko::{build_projection, lott_pairing_circle, rank_trace, CoverData, RampProfile};
use crate::multiplier::{phases_agree, CoboundaryData, Gauge, LatticeGeometricData, Multiplier, MultiplierKind};
use crate::phase::Phase;
use crate::report::CheckReport;
use crate::sampling::{random_element, random_graded, random_hermitian, random_unitary};
use crate::spectral::{
    eta_closed_form, eta_quadrature, mckean_singer, product_eta_check, spectral_flow, SpectralFlowOptions, SpectralPath,
};
use crate::traces::TraceFunctional;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Multiplier,
    Traces,
    Spectral,
    Cohomology,
    Mishchenko,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Algebra,
        Suite::Multiplier,
        Suite::Traces,
        Suite::Spectral,
        Suite::Cohomology,
        Suite::Mishchenko,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Multiplier => "multiplier",
            Suite::Traces => "traces",
            Suite::Spectral => "spectral",
            Suite::Cohomology => "cohomology",
            Suite::Mishchenko => "mishchenko",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub pass: bool,
    pub tolerance: f64,
    pub exhaustive: bool,
    pub checked: usize,
    pub worst_defect: f64,
    pub witnesses: Vec<Vec<String>>,
}

impl PropertyReport {
    fn from_check(name: &str, tolerance: f64, c: CheckReport) -> Self {
        PropertyReport {
            name: name.into(),
            pass: c.pass,
            tolerance,
            exhaustive: c.exhaustive,
            checked: c.checked,
            worst_defect: c.worst_defect,
            witnesses: c.witnesses.iter().map(|w| w.iter().map(|g| g.to_string()).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    pub properties: Vec<PropertyReport>,
}

#[derive(Debug, Clone)]
pub struct SuiteContext {
    pub multiplier: Arc<Multiplier>,
    /// Random samples per sampled law.
    pub samples: usize,
    pub seed: u64,
}

pub fn run_suite(suite: Suite, ctx: &SuiteContext) -> Result<SuiteReport> {
    let properties = match suite {
        Suite::Algebra => algebra(ctx)?,
        Suite::Multiplier => multiplier(ctx)?,
        Suite::Traces => traces(ctx)?,
        Suite::Spectral => spectral(ctx)?,
        Suite::Cohomology => cohomology(ctx)?,
        Suite::Mishchenko => mishchenko(ctx)?,
    };
    Ok(SuiteReport {
        suite,
        pass: properties.iter().all(|p| p.pass),
        properties,
    })
}

/// Coefficient tolerance of the algebraic laws, relative to the ℓ¹ scale.
pub const ALGEBRA_TOL: f64 = 1e-12;

fn support(a: &AlgebraElement) -> Vec<GroupElement> {
    a.support().cloned().collect()
}

fn sampled(samples: usize, seed: u64, mut f: impl FnMut(&mut ChaCha8Rng, &mut CheckReport) -> Result<()>) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new(false);
    for _ in 0..samples {
        f(&mut rng, &mut report)?;
    }
    Ok(report)
}

fn algebra(ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
    let m = &ctx.multiplier;
    let group = m.group().clone();
    let n = ctx.samples;
    let tol = ALGEBRA_TOL;
    let mut out = Vec::new();

    let c = sampled(n, ctx.seed, |rng, rep| {
        let (g, h) = (group.random_element(rng, 4), group.random_element(rng, 4));
        let lhs = AlgebraElement::delta(m.clone(), g.clone()).convolve(&AlgebraElement::delta(m.clone(), h.clone()))?;
        let rhs = AlgebraElement::delta(m.clone(), group.multiply(&g, &h)?).scale(m.evaluate(&g, &h)?.to_complex());
        rep.record(lhs.max_distance(&rhs), tol, || vec![g, h]);
        Ok(())
    })?;
    out.push(PropertyReport::from_check("basis-product", tol, c));

    let one = AlgebraElement::unit(m.clone());
    let c = sampled(n, ctx.seed ^ 1, |rng, rep| {
        let a = random_element(m, rng, 4, 3);
        let d = one.convolve(&a)?.max_distance(&a).max(a.convolve(&one)?.max_distance(&a));
        rep.record(d, tol * a.l1_norm().max(1.0), || support(&a));
        Ok(())
    })?;
    out.push(PropertyReport::from_check("unit", tol, c));

    let c = sampled(n, ctx.seed ^ 2, |rng, rep| {
        let (a, b, c) = (random_element(m, rng, 3, 3), random_element(m, rng, 3, 3), random_element(m, rng, 3, 3));
        let lhs = a.convolve(&b)?.convolve(&c)?;
        let rhs = a.convolve(&b.convolve(&c)?)?;
        let scale = (a.l1_norm() * b.l1_norm() * c.l1_norm()).max(1.0);
        rep.record(lhs.max_distance(&rhs) / scale, tol, || [support(&a), support(&b), support(&c)].concat());
        Ok(())
    })?;
    out.push(PropertyReport::from_check("associativity", tol, c));

    let c = sampled(n, ctx.seed ^ 3, |rng, rep| {
        let (a, b) = (random_element(m, rng, 4, 3), random_element(m, rng, 4, 3));
        let lhs = a.convolve(&b)?.involution();
        let rhs = b.involution().convolve(&a.involution())?;
        let scale = (a.l1_norm() * b.l1_norm()).max(1.0);
        rep.record(lhs.max_distance(&rhs) / scale, tol, || [support(&a), support(&b)].concat());
        Ok(())
    })?;
    out.push(PropertyReport::from_check("involution-antimultiplicative", tol, c));

    let c = sampled(n, ctx.seed ^ 4, |rng, rep| {
        let a = random_element(m, rng, 4, 3);
        let lambda: Complex64 = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let d = a.involution().involution().max_distance(&a).max(
            a.scale(lambda)
                .involution()
                .max_distance(&a.involution().scale(lambda.conj())),
        );
        rep.record(d, tol * a.l1_norm().max(1.0), || support(&a));
        Ok(())
    })?;
    out.push(PropertyReport::from_check("involution-involutive-antilinear", tol, c));

    // b_z: ℂ(Γ, σ·∂z) → ℂ(Γ, σ) is multiplicative.
    let z = CoboundaryData::hashed(ctx.seed, 12);
    let twisted = Arc::new(m.twist(z.clone()));
    let c = sampled(n, ctx.seed ^ 5, |rng, rep| {
        let (a, b) = (random_element(&twisted, rng, 3, 3), random_element(&twisted, rng, 3, 3));
        let lhs = a.convolve(&b)?.apply_projective_iso(&z, m.clone())?;
        let rhs = a.apply_projective_iso(&z, m.clone())?.convolve(&b.apply_projective_iso(&z, m.clone())?)?;
        let scale = (a.l1_norm() * b.l1_norm()).max(1.0);
        rep.record(lhs.max_distance(&rhs) / scale, tol, || [support(&a), support(&b)].concat());
        Ok(())
    })?;
    out.push(PropertyReport::from_check("projective-iso-multiplicative", tol, c));
    Ok(out)
}

fn multiplier(ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
    let m = &ctx.multiplier;
    let group = m.group().clone();
    let mut out = Vec::new();

    let cr = m.verify_cocycle(ctx.samples, ctx.seed)?;
    out.push(PropertyReport {
        name: "cocycle".into(),
        pass: cr.pass,
        tolerance: 0.0,
        exhaustive: cr.exhaustive,
        checked: cr.triples,
        worst_defect: cr.worst_defect,
        witnesses: cr.witness.iter().map(|w| w.iter().map(|g| g.to_string()).collect()).collect(),
    });

    let e = group.identity();
    let c = sampled(ctx.samples, ctx.seed ^ 6, |rng, rep| {
        let g = group.random_element(rng, 5);
        let d = m.evaluate(&e, &g)?.distance(&Phase::ONE).max(m.evaluate(&g, &e)?.distance(&Phase::ONE));
        let exact = m.evaluate(&e, &g)?.is_one() && m.evaluate(&g, &e)?.is_one();
        rep.record(if exact { 0.0 } else { d.max(f64::MIN_POSITIVE) }, 0.0, || vec![g]);
        Ok(())
    })?;
    out.push(PropertyReport::from_check("normalized", 0.0, c));

    let c = sampled(ctx.samples, ctx.seed ^ 7, |rng, rep| {
        let g = group.random_element(rng, 5);
        let gi = group.inverse(&g)?;
        let (a, b) = (m.evaluate(&g, &gi)?, m.evaluate(&gi, &g)?);
        rep.record(if phases_agree(&a, &b) { 0.0 } else { a.distance(&b) }, 0.0, || vec![g]);
        Ok(())
    })?;
    out.push(PropertyReport::from_check("inverse-symmetric", 0.0, c));

    if let MultiplierKind::Magnetic { theta, .. } = m.kind() {
        if *group == GroupDescriptor::z2() {
            let sym = Multiplier::magnetic(*theta, Gauge::Symmetric);
            let landau = Multiplier::magnetic(*theta, Gauge::Landau);
            let mut c = CheckReport::new(false);
            let w = sym.cohomology_witness(&landau, &CoboundaryData::gauge_change(*theta))?;
            c.record(if w.is_some() { 1.0 } else { 0.0 }, 0.0, || w.map(|(a, b)| vec![a, b]).unwrap_or_default());
            out.push(PropertyReport::from_check("gauge-cohomologous", 0.0, c));

            let ball = group.ball(4);
            let mut c = CheckReport::new(true);
            for gauge in [Gauge::Landau, Gauge::Symmetric] {
                let reference = Multiplier::geometric(LatticeGeometricData::new(*theta, gauge))?;
                for x in -1..=1 {
                    for y in -1..=1 {
                        let moved = Multiplier::geometric(LatticeGeometricData::new(*theta, gauge).base_point([x, y]))?;
                        let same = reference.agrees_on(&moved, &ball)?;
                        c.record(if same { 0.0 } else { 1.0 }, 0.0, || vec![GroupElement::vector(&[x, y])]);
                    }
                }
            }
            out.push(PropertyReport::from_check("geometric-base-point-independent", 0.0, c));
        }
    }
    Ok(out)
}

fn traces(ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
    let m = &ctx.multiplier;
    let group = m.group();
    let tr = TraceFunctional::regular(m.clone());
    let mut out = vec![PropertyReport::from_check("regular-trace-property", 0.0, tr.check_trace_property(3, 0.0)?)];

    if group.is_finite() || matches!(**group, GroupDescriptor::Product(..)) {
        if let Ok(chars) = group.characters() {
            let mut all = CheckReport::new(true);
            for chi in &chars {
                let c = tr.check_invariance(chi, 3, 0.0)?;
                all.record(c.worst_defect, 0.0, || c.witnesses.first().cloned().unwrap_or_default());
            }
            out.push(PropertyReport::from_check("regular-character-invariance", 0.0, all));
        }
    }

    out.push(PropertyReport::from_check("regular-positive", 1e-12, tr.check_positivity(ctx.samples.min(200), ctx.seed, 1e-12)?));

    let deloc = TraceFunctional::one_dim(m.clone()).difference(&tr)?;
    let mut c = CheckReport::new(true);
    c.record(if deloc.is_delocalized()? { 0.0 } else { 1.0 }, 0.0, Vec::new);
    c.record(if tr.is_delocalized()? { 1.0 } else { 0.0 }, 0.0, Vec::new);
    out.push(PropertyReport::from_check("delocalization-flags", 0.0, c));
    Ok(out)
}

fn spectral(ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let count = (ctx.samples / 20).clamp(5, 200);
    let mut out = Vec::new();

    let mut quad = CheckReport::new(false);
    let mut odd = CheckReport::new(false);
    let mut unitary = CheckReport::new(false);
    for _ in 0..count {
        let n = rng.gen_range(1..=8);
        let a = random_hermitian(n, &mut rng);
        let closed = eta_closed_form(&a, None)?;
        let q = eta_quadrature(&a, None, 64, None)?;
        quad.record((q.eta - closed).abs(), 1e-6, Vec::new);
        odd.record((eta_closed_form(&a.scale_real(-1.0), None)? + closed).abs(), 1e-9, Vec::new);
        let u = random_unitary(n, &mut rng);
        let conj = u.matmul(&a)?.matmul(&u.adjoint())?.hermitian_part();
        unitary.record((eta_closed_form(&conj, None)? - closed).abs(), 1e-9, Vec::new);
    }
    out.push(PropertyReport::from_check("eta-quadrature-matches-closed-form", 1e-6, quad));
    out.push(PropertyReport::from_check("eta-odd", 1e-9, odd));
    out.push(PropertyReport::from_check("eta-unitary-invariant", 1e-9, unitary));

    let mut sf = CheckReport::new(false);
    for _ in 0..count.min(20) {
        let path = SpectralPath::Linear {
            a0: random_hermitian(12, &mut rng),
            a1: random_hermitian(12, &mut rng),
        };
        let d = match spectral_flow(&path, &SpectralFlowOptions::default()) {
            Ok(r) => (r.sf as f64 - r.eta_formula).abs(),
            Err(Error::Degenerate(_)) => 1.0,
            Err(e) => return Err(e),
        };
        sf.record(d, 1e-9, Vec::new);
    }
    out.push(PropertyReport::from_check("spectral-flow-matches-eta-formula", 1e-9, sf));

    let ts: Vec<f64> = (-6..=4).map(|k| 10f64.powi(k)).collect();
    let mut ms = CheckReport::new(false);
    let mut prod = CheckReport::new(false);
    for _ in 0..count.min(20) {
        let (ne, no) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let rank = rng.gen_range(1..=ne.min(no));
        let (d, z) = random_graded(ne, no, rank, &mut rng);
        let r = mckean_singer(&d, &z, &ts, None)?;
        let worst = r
            .supertraces
            .iter()
            .map(|(_, s)| (s - r.index as f64).abs())
            .fold(0.0, f64::max);
        ms.record(worst, 1e-8, Vec::new);
        let dl = random_hermitian(rng.gen_range(1..=4), &mut rng);
        let p = product_eta_check(&dl, &d, &z, None)?;
        prod.record((p.lhs - p.rhs).abs(), 1e-8, Vec::new);
    }
    out.push(PropertyReport::from_check("mckean-singer-constant", 1e-8, ms));
    out.push(PropertyReport::from_check("product-eta-formula", 1e-8, prod));
    Ok(out)
}

fn cohomology(ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
    let m = &ctx.multiplier;
    let group = m.group().clone();
    let n = ctx.samples.min(500);
    let mut out = Vec::new();

    let c1 = GroupCochain::random_alternating(group.clone(), 1, ctx.seed);
    out.push(PropertyReport::from_check("d-squared-zero", 1e-12, c1.differential().check_closed(n, 4, ctx.seed, 1e-12)?));

    let mut cochains = vec![c1];
    if *group == GroupDescriptor::z2() {
        let area = GroupCochain::area_z2();
        out.push(PropertyReport::from_check("area-closed", 1e-12, area.check_closed(n, 6, ctx.seed, 1e-12)?));
        out.push(PropertyReport::from_check("area-flags", 1e-12, area.verify_flags(n, 6, ctx.seed, 1e-12)?));
        cochains.push(area);
    }
    for c in &cochains {
        let lhs = to_cyclic(c, m.clone())?.cyclic_boundary();
        let rhs = to_cyclic(&c.differential(), m.clone())?;
        out.push(PropertyReport::from_check(
            &format!("transfer-commutes[{}]", c.name()),
            1e-12,
            lhs.compare(&rhs, n, ctx.seed, 1e-12)?,
        ));
        out.push(PropertyReport::from_check(
            &format!("transfer-localized[{}]", c.name()),
            0.0,
            to_cyclic(c, m.clone())?.check_localized(n, ctx.seed)?,
        ));
    }
    Ok(out)
}

fn mishchenko(ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
    let m = &ctx.multiplier;
    let group = m.group();
    let ramp = Rational64::new(1, 16);
    let cover = if **group == GroupDescriptor::z2() {
        CoverData::torus(24, [2, 2], [1, 1], ramp, RampProfile::Cosine)?
    } else if **group == GroupDescriptor::free_abelian(1) {
        CoverData::circle(256, 2, 1, ramp, RampProfile::Cosine)?
    } else {
        CoverData::trivial(group.clone(), 16)?
    };
    let mut out = Vec::new();
    let p = build_projection(&cover, m.clone())?;
    let report = p.verify()?;
    for (name, id) in [("projection-idempotent", &report.idempotent), ("projection-self-adjoint", &report.self_adjoint)] {
        out.push(PropertyReport {
            name: name.into(),
            pass: id.pass && id.exact_phases == m.is_exact(),
            tolerance: crate::mishchenko::PROJECTION_TOL,
            exhaustive: true,
            checked: report.points,
            worst_defect: id.coefficient_defect.max(id.numeric_defect),
            witnesses: id.witness.iter().map(|w| vec![w.clone()]).collect(),
        });
    }
    let mut c = CheckReport::new(true);
    let tr = rank_trace(&p, &TraceFunctional::regular(m.clone()))?;
    c.record((tr - 1.0).norm(), 1e-13, Vec::new);
    out.push(PropertyReport::from_check("rank-trace", 1e-13, c));

    let cochain = GroupCochain::linear_z(1, 0);
    let mut c = CheckReport::new(true);
    for w in [1, 2] {
        let v = lott_pairing_circle(&CoverData::circle(1024, 2, w, ramp, RampProfile::Cosine)?, &cochain)?;
        c.record((v.value - w as f64).abs(), 1e-3, || vec![GroupElement::vector(&[w])]);
    }
    out.push(PropertyReport::from_check("lott-pairing-winding", 1e-3, c));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::phase::Angle;

    fn ctx(m: Multiplier) -> SuiteContext {
        SuiteContext {
            multiplier: Arc::new(m),
            samples: 200,
            seed: 3,
        }
    }

    #[test]
    fn all_suites_pass_on_magnetic_z2() {
        let c = ctx(Multiplier::magnetic(Rational64::new(1, 3), Gauge::Landau));
        for s in Suite::ALL {
            let r = run_suite(s, &c).unwrap();
            assert!(r.pass, "{s}: {:?}", r.properties.iter().filter(|p| !p.pass).collect::<Vec<_>>());
        }
    }

    #[test]
    fn corrupted_table_fails_with_witness() {
        let g = Arc::new(GroupDescriptor::Finite(FiniteGroup::cyclic(3)));
        let mut t = vec![vec![Angle::ZERO; 3]; 3];
        t[1][1] = Angle::Exact(Rational64::new(1, 5));
        let r = run_suite(Suite::Multiplier, &ctx(Multiplier::table(g, t).unwrap())).unwrap();
        assert!(!r.pass);
        let cocycle = &r.properties[0];
        assert!(!cocycle.pass);
        assert_eq!(cocycle.witnesses[0].len(), 3);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
