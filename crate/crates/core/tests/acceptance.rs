//! Acceptance run: one PASS/FAIL line per criterion on stdout
//! (`cargo test --test acceptance -- --nocapture`).

mod common;

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use common::{algebra_fixtures, harper_fourth_moment_by_walks, r, table_multiplier};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twisted_core::cohomology::{derivation_chain, to_cyclic, GroupCochain};
use twisted_core::group::{Character, FiniteGroup, Homomorphism};
use twisted_core::linalg::CMatrix;
use twisted_core::mishchenko::{build_projection, lott_pairing_circle, rank_trace, CoverData, RampProfile};
use twisted_core::multiplier::{Gauge, Multiplier};
use twisted_core::representations::{butterfly_csv, farey_fractions, spectrum_union, standard_harper};
use twisted_core::sampling::{random_element, random_graded, random_hermitian, random_unitary};
use twisted_core::spectral::{
    eta_closed_form, eta_quadrature, mckean_singer, product_eta_check, spectral_flow, SpectralFlowOptions, SpectralPath,
};
use twisted_core::suites::{run_suite, Suite, SuiteContext};
use twisted_core::traces::{TraceFunctional, UnitaryRep};
use twisted_core::{GroupDescriptor, GroupElement};

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

/// Sub-checks that cannot pass as literally stated. The fourth moment of the
/// Harper operator at θ = 1/2 is 20 by the closed-walk count (12 straight
/// walks, 16 flat mixed walks, 8 unit squares with phase −1), not 28.
const KNOWN_FAILURES: &[(usize, &str)] = &[(4, "tr2(H^4) = 28 at theta = 1/2")];

const SEED: u64 = 0xacce;

fn criterion_1() -> Vec<Check> {
    let start = Instant::now();
    let mut out = Vec::new();
    for (name, m) in algebra_fixtures() {
        let ctx = SuiteContext {
            multiplier: m,
            samples: 1000,
            seed: SEED,
        };
        for suite in [Suite::Algebra, Suite::Multiplier] {
            let rep = run_suite(suite, &ctx).unwrap();
            // Gauge and base-point checks belong to criterion 2.
            for p in rep.properties.into_iter().filter(|p| !p.name.starts_with("gauge") && !p.name.starts_with("geometric")) {
                let enough = p.exhaustive || p.checked >= 1000;
                out.push(check(
                    format!("{name}/{}", p.name),
                    p.pass && enough,
                    format!("checked {} worst {:e}", p.checked, p.worst_defect),
                ));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    out.push(check("runtime < 10 s", secs < 10.0, format!("{secs:.2} s")));
    out
}

fn criterion_2() -> Vec<Check> {
    let ctx = SuiteContext {
        multiplier: Arc::new(Multiplier::magnetic(r(1, 3), Gauge::Landau)),
        samples: 1000,
        seed: SEED,
    };
    run_suite(Suite::Multiplier, &ctx)
        .unwrap()
        .properties
        .into_iter()
        .filter(|p| p.name == "gauge-cohomologous" || p.name == "geometric-base-point-independent")
        .map(|p| {
            let checked = if p.name.starts_with("geometric") { p.checked == 18 } else { true };
            check(p.name, p.pass && p.tolerance == 0.0 && checked, format!("checked {}", p.checked))
        })
        .collect()
}

fn criterion_3() -> Vec<Check> {
    let mut out = Vec::new();
    for (name, m) in algebra_fixtures() {
        let tr = TraceFunctional::regular(m.clone());
        let tp = tr.check_trace_property(2, 0.0).unwrap();
        out.push(check(format!("{name}/tr2 trace property"), tp.pass, format!("worst {:e}", tp.worst_defect)));
        if let Ok(chars) = m.group().characters() {
            let ok = chars.iter().all(|chi| tr.check_invariance(chi, 2, 0.0).unwrap().pass);
            out.push(check(format!("{name}/tr2 invariance"), ok, format!("{} characters", chars.len())));
        }
    }

    // A₅ × ℤ/3 with a multiplier pulled back from the right factor.
    let a5 = GroupDescriptor::Finite(FiniteGroup::alternating(5));
    let c3 = Arc::new(GroupDescriptor::Finite(FiniteGroup::cyclic(3)));
    let right = table_multiplier(c3.clone(), 5);
    let left = Multiplier::trivial(Arc::new(a5.clone()));
    let m = Arc::new(Multiplier::external(&left, &right));
    let three_cycle = a5.elements().unwrap().into_iter().find(|g| a5.conjugacy_class(g).unwrap().len() == 20).unwrap();
    let tau = TraceFunctional::conjugacy(Arc::new(left), three_cycle).unwrap();
    let prod = TraceFunctional::product(m.clone(), tau).unwrap();
    let chars = m.group().characters().unwrap();
    let bad: usize = chars.iter().filter(|chi| !prod.check_invariance(chi, 3, 0.0).unwrap().pass).count();
    out.push(check(
        "A5 x Z/3 product trace invariant under all characters",
        bad == 0 && chars.len() == 3,
        format!("{} characters, {bad} violations", chars.len()),
    ));

    // With a ℤ factor the invariance fails.
    let zc = Arc::new(GroupDescriptor::product(GroupDescriptor::free_abelian(1), (*c3).clone()));
    let mz = Arc::new(Multiplier::external(&Multiplier::trivial(Arc::new(GroupDescriptor::free_abelian(1))), &right));
    let tr1 = TraceFunctional::one_dim(Arc::new(Multiplier::trivial(Arc::new(GroupDescriptor::free_abelian(1)))));
    let pz = TraceFunctional::product(mz.clone(), tr1).unwrap();
    let chi = Character::Product(Box::new(Character::Linear(vec![r(1, 4)])), Box::new(Character::Trivial));
    let rep = pz.check_invariance(&chi, 2, 0.0).unwrap();
    out.push(check(
        "Z x Z/3 counterexample character",
        !rep.pass && !rep.witnesses.is_empty() && *mz.group() == zc,
        format!("witness {:?}", rep.witnesses.first()),
    ));

    // H = Γ: τ_{u,Γ} does not depend on u.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let z2 = Arc::new(GroupDescriptor::z2());
    let mag = Arc::new(Multiplier::magnetic(r(1, 3), Gauge::Landau));
    let commuting_pair = |rng: &mut ChaCha8Rng, n: usize| {
        let w = random_unitary(n, rng);
        let diag = |rng: &mut ChaCha8Rng| {
            let d = CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            w.matmul(&d).unwrap().matmul(&w.adjoint()).unwrap()
        };
        let (a, b) = (diag(rng), diag(rng));
        UnitaryRep::new(&z2, vec![(GroupElement::vector(&[1, 0]), a), (GroupElement::vector(&[0, 1]), b)]).unwrap()
    };
    let t1 = TraceFunctional::unitary(
        mag.clone(),
        commuting_pair(&mut rng, 3),
        Homomorphism::Identity,
        TraceFunctional::regular(mag.clone()),
    )
    .unwrap();
    let t2 = TraceFunctional::unitary(
        mag.clone(),
        commuting_pair(&mut rng, 3),
        Homomorphism::Identity,
        TraceFunctional::regular(mag.clone()),
    )
    .unwrap();
    let worst = (0..200)
        .map(|_| {
            let a = random_element(&mag, &mut rng, 6, 3);
            (t1.evaluate(&a).unwrap() - t2.evaluate(&a).unwrap()).norm()
        })
        .fold(0.0, f64::max);
    out.push(check("H = Gamma unitary traces agree", worst <= 1e-10, format!("worst {worst:e}")));

    // Delocalization flags.
    let triv = Arc::new(Multiplier::trivial(z2.clone()));
    let d1 = TraceFunctional::one_dim(triv.clone()).difference(&TraceFunctional::regular(triv.clone())).unwrap();
    let trivial_h = Arc::new(GroupDescriptor::Finite(FiniteGroup::trivial()));
    let base = TraceFunctional::regular(Arc::new(Multiplier::trivial(trivial_h.clone())));
    let hom = Homomorphism::Trivial(trivial_h.identity());
    let u1 = TraceFunctional::unitary(triv.clone(), commuting_pair(&mut rng, 2), hom.clone(), base.clone()).unwrap();
    let u2 = TraceFunctional::unitary(triv.clone(), commuting_pair(&mut rng, 2), hom, base).unwrap();
    let d2 = u1.difference(&u2).unwrap();
    let flags = (
        d1.is_delocalized().unwrap(),
        d2.is_delocalized().unwrap(),
        TraceFunctional::regular(triv).is_delocalized().unwrap(),
    );
    out.push(check(
        "delocalization flags",
        flags == (true, true, false),
        format!("tr1-tr2 {}, tau_u1-tau_u2 {}, tr2 {}", flags.0, flags.1, flags.2),
    ));
    out
}

fn criterion_4() -> Vec<Check> {
    let mut out = Vec::new();
    let s0 = spectrum_union(&standard_harper(r(0, 1)), 128).unwrap();
    out.push(check(
        "theta = 0 band [-4, 4]",
        s0.bands.len() == 1 && (s0.min() + 4.0).abs() <= 1e-6 && (s0.max() - 4.0).abs() <= 1e-6,
        format!("[{}, {}]", s0.min(), s0.max()),
    ));
    let edge = 2.0 * 2f64.sqrt();
    let s1 = spectrum_union(&standard_harper(r(1, 2)), 128).unwrap();
    out.push(check(
        "theta = 1/2 edges ±2√2",
        (s1.min() + edge).abs() <= 1e-6 && (s1.max() - edge).abs() <= 1e-6,
        format!("[{}, {}]", s1.min(), s1.max()),
    ));
    let wrong: Vec<String> = farey_fractions(8)
        .into_iter()
        .filter_map(|(p, q)| {
            let s = spectrum_union(&standard_harper(r(p, q)), 32).unwrap();
            (s.bands.len() != q as usize).then(|| format!("{p}/{q}: {}", s.bands.len()))
        })
        .collect();
    out.push(check("q bands for q <= 8", wrong.is_empty(), format!("{wrong:?}")));

    // Moments: algebraic τ(Hⁿ) vs grid averages of (1/q) tr πₖ(Hⁿ).
    let mut worst_order = f64::INFINITY;
    let mut final_err = 0.0f64;
    for theta in [r(0, 1), r(1, 3), r(1, 2), r(2, 5)] {
        let h = standard_harper(theta);
        let e = GroupElement::vector(&[0, 0]);
        let grids = [2usize, 4, 8, 16, 32];
        let spectra: Vec<_> = grids.iter().map(|&n| spectrum_union(&h, n).unwrap()).collect();
        for n in 1..=8u32 {
            let exact = h.pow(n).unwrap().coefficient(&e).re;
            let errs: Vec<f64> = spectra
                .iter()
                .map(|s| {
                    let avg = s.fibers.iter().map(|f| f.iter().map(|x| x.powi(n as i32)).sum::<f64>()).sum::<f64>()
                        / (s.fibers.len() * s.q) as f64;
                    (avg - exact).abs()
                })
                .collect();
            for w in errs.windows(2) {
                // Below roundoff the ratio carries no information.
                if w[1] > 1e-10 {
                    worst_order = worst_order.min((w[0] / w[1]).log2());
                }
            }
            final_err = final_err.max(*errs.last().unwrap());
        }
    }
    out.push(check(
        "moment matching, order >= 1.8",
        worst_order >= 1.8 && final_err <= 1e-10,
        format!("worst observed order {worst_order}, error at N = 32 {final_err:e}"),
    ));

    let h = standard_harper(r(1, 2));
    let m4 = h.pow(4).unwrap().coefficient(&GroupElement::vector(&[0, 0]));
    let walks = harper_fourth_moment_by_walks(0.5);
    out.push(check(
        "tr2(H^4) matches the closed-walk count at theta = 1/2",
        (m4.re - walks).abs() <= 1e-12 && m4.im.abs() <= 1e-12,
        format!("algebra {m4}, walks {walks}"),
    ));
    out.push(check("tr2(H^4) = 28 at theta = 1/2", (m4.re - 28.0).abs() <= 1e-12, format!("measured {}", m4.re)));

    let start = Instant::now();
    butterfly_csv(8, 128, &mut std::io::sink()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    out.push(check("butterfly qmax = 8, N = 128 under 60 s", secs < 60.0, format!("{secs:.1} s")));
    out
}

fn criterion_5() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let (mut quad, mut odd, mut unit) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = rng.gen_range(1..=40);
        let a = random_hermitian(n, &mut rng);
        let closed = eta_closed_form(&a, None).unwrap();
        quad = quad.max((eta_quadrature(&a, None, 64, None).unwrap().eta - closed).abs());
        odd = odd.max((eta_closed_form(&a.scale_real(-1.0), None).unwrap() + closed).abs());
        let u = random_unitary(n, &mut rng);
        let c = u.adjoint().matmul(&a).unwrap().matmul(&u).unwrap().hermitian_part();
        unit = unit.max((eta_closed_form(&c, None).unwrap() - closed).abs());
    }
    vec![
        check("quadrature vs closed form", quad <= 1e-6, format!("worst {quad:e}")),
        check("eta(-A) = -eta(A)", odd <= 1e-9, format!("worst {odd:e}")),
        check("unitary invariance", unit <= 1e-9, format!("worst {unit:e}")),
    ]
}

fn criterion_6() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut mismatches = Vec::new();
    for i in 0..100 {
        let path = SpectralPath::Linear {
            a0: random_hermitian(12, &mut rng),
            a1: random_hermitian(12, &mut rng),
        };
        match spectral_flow(&path, &SpectralFlowOptions::default()) {
            Ok(rep) if rep.sf as f64 == rep.eta_formula.round() && (rep.eta_formula - rep.eta_formula.round()).abs() <= 1e-9 => {}
            Ok(rep) => mismatches.push(format!("#{i}: {} vs {}", rep.sf, rep.eta_formula)),
            Err(e) => mismatches.push(format!("#{i}: {e}")),
        }
    }
    let diag = SpectralPath::generator(|t| CMatrix::diag(&[t - 0.5]));
    let sf = spectral_flow(&diag, &SpectralFlowOptions::default()).unwrap().sf;
    vec![
        check("100 random 12x12 paths", mismatches.is_empty(), format!("{mismatches:?}")),
        check("diag(t - 1/2) gives +1", sf == 1, format!("sf = {sf}")),
    ]
}

fn criterion_7() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let ts: Vec<f64> = (0..=20).map(|k| 10f64.powf(-1.0 + k as f64 / 10.0)).collect();
    let (mut worst, mut index_errors) = (0.0f64, 0usize);
    for _ in 0..100 {
        let (ne, no) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let rank = rng.gen_range(1..=ne.min(no));
        let (d, z) = random_graded(ne, no, rank, &mut rng);
        let ms = mckean_singer(&d, &z, &ts, None).unwrap();
        let oracle = ne as i64 - no as i64;
        index_errors += usize::from(ms.index != oracle);
        for (_, s) in &ms.supertraces {
            worst = worst.max((s - oracle as f64).abs());
        }
    }
    vec![check(
        "supertrace constant and equal to the rank index",
        worst <= 1e-8 && index_errors == 0,
        format!("worst {worst:e}, index mismatches {index_errors}"),
    )]
}

fn criterion_8() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let dl = random_hermitian(rng.gen_range(1..=10), &mut rng);
        let (ne, no) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let rank = rng.gen_range(1..=ne.min(no));
        let (dn, z) = random_graded(ne, no, rank, &mut rng);
        let p = product_eta_check(&dl, &dn, &z, None).unwrap();
        worst = worst.max((p.lhs - p.rhs).abs());
    }
    vec![check("50 random instances", worst <= 1e-8, format!("worst {worst:e}"))]
}

fn criterion_9() -> Vec<Check> {
    let mut out = Vec::new();
    let area = GroupCochain::area_z2();
    for theta in [r(0, 1), r(1, 3)] {
        let m = Arc::new(Multiplier::magnetic(theta, Gauge::Landau));
        let lhs = to_cyclic(&area, m.clone()).unwrap().cyclic_boundary();
        let rhs = to_cyclic(&area.differential(), m.clone()).unwrap();
        let rep = lhs.compare(&rhs, 500, SEED, 1e-12).unwrap();
        out.push(check(format!("theta = {theta}: b^t tau_c = tau_dc"), rep.pass && rep.checked >= 500, format!("worst {:e}", rep.worst_defect)));
        let loc = to_cyclic(&area, m).unwrap().check_localized(500, SEED).unwrap();
        out.push(check(format!("theta = {theta}: localized"), loc.pass && loc.worst_defect == 0.0, format!("checked {}", loc.checked)));
    }
    out
}

fn criterion_10() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    let m = Arc::new(Multiplier::magnetic(r(1, 3), Gauge::Landau));
    let (mut defect, mut failures) = (0.0f64, 0usize);
    for _ in 0..200 {
        let a = random_element(&m, &mut rng, 8, 3);
        let p = derivation_chain(&a, 4, a.sup_support_length() + 1).unwrap();
        defect = defect.max(p.identity_defect);
        failures += usize::from(!p.bound_holds);
    }
    vec![
        check("d^j(x) delta_e = D_l^j(x) exactly", defect == 0.0, format!("worst {defect:e}")),
        check("bound with the reported constant", failures == 0, format!("{failures} failures of 200")),
    ]
}

fn criterion_11() -> Vec<Check> {
    let mut out = Vec::new();
    let circle = CoverData::circle(256, 2, 1, r(1, 16), RampProfile::Cosine).unwrap();
    let torus = CoverData::torus(24, [2, 2], [1, 1], r(1, 16), RampProfile::Cosine).unwrap();
    let cases = vec![
        ("circle", circle, Arc::new(Multiplier::trivial(Arc::new(GroupDescriptor::free_abelian(1))))),
        ("torus/landau", torus.clone(), Arc::new(Multiplier::magnetic(r(1, 3), Gauge::Landau))),
        ("torus/symmetric", torus, Arc::new(Multiplier::magnetic(r(1, 3), Gauge::Symmetric))),
    ];
    for (name, cover, m) in cases {
        let p = build_projection(&cover, m.clone()).unwrap();
        let rep = p.verify().unwrap();
        let exact = rep.idempotent.exact_phases && rep.self_adjoint.exact_phases;
        out.push(check(
            format!("{name}: P^2 = P, P* = P"),
            rep.pass() && exact,
            format!(
                "{} points, defects {:e} / {:e}",
                rep.points,
                rep.idempotent.coefficient_defect.max(rep.idempotent.numeric_defect),
                rep.self_adjoint.coefficient_defect.max(rep.self_adjoint.numeric_defect)
            ),
        ));
        let tr = rank_trace(&p, &TraceFunctional::regular(m)).unwrap();
        out.push(check(format!("{name}: rank trace 1"), (tr - 1.0).norm() <= 1e-13, format!("{tr}")));
    }
    let c = GroupCochain::linear_z(1, 0);
    for w in [1, 2] {
        let cover = CoverData::circle(1024, 2, w, r(1, 16), RampProfile::Cosine).unwrap();
        let v = lott_pairing_circle(&cover, &c).unwrap().value;
        out.push(check(format!("pairing with winding {w}"), (v - w as f64).abs() <= 1e-3, format!("{v}")));
    }
    out
}

fn criterion_12() -> Vec<Check> {
    let bin = env!("CARGO_BIN_EXE_twisted");
    let configs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<(&str, Vec<String>)> = vec![
        ("verify", vec!["verify".into(), "--config".into(), configs.join("verify-magnetic.json").display().to_string()]),
        ("verify-failing", vec!["verify".into(), "--config".into(), configs.join("corrupted-table.json").display().to_string()]),
        ("butterfly", vec!["butterfly".into(), "--qmax".into(), "4".into(), "--kgrid".into(), "16".into()]),
        ("eta-matrix", vec!["eta".into(), "--config".into(), configs.join("eta-diag.json").display().to_string()]),
        ("eta-germ", vec!["eta".into(), "--config".into(), configs.join("eta-harper.json").display().to_string()]),
        ("spectral-flow", vec!["spectral-flow".into(), "--config".into(), configs.join("spectral-flow-linear.json").display().to_string()]),
        ("betti", vec!["betti".into(), "--config".into(), configs.join("betti-cycle.json").display().to_string()]),
        ("sobolev", vec!["sobolev".into(), "--config".into(), configs.join("sobolev.json").display().to_string()]),
        ("pairing-circle", vec!["pairing-circle".into(), "--config".into(), configs.join("pairing-circle.json").display().to_string()]),
    ];
    runs.into_iter()
        .map(|(name, args)| {
            let outputs: Vec<(Option<i32>, Vec<u8>)> = (0..2)
                .map(|k| {
                    let out = dir.path().join(format!("{name}-{k}"));
                    let status = Command::new(bin)
                        .args(&args)
                        .args(["--seed", "17", "--out"])
                        .arg(&out)
                        .status()
                        .unwrap();
                    (status.code(), std::fs::read(&out).unwrap_or_default())
                })
                .collect();
            let same = outputs[0] == outputs[1] && !outputs[0].1.is_empty();
            check(name, same, format!("exit {:?}, {} bytes", outputs[0].0, outputs[0].1.len()))
        })
        .collect()
}

#[test]
fn acceptance() {
    let criteria: [(usize, &str, fn() -> Vec<Check>); 12] = [
        (1, "algebraic exactness", criterion_1),
        (2, "gauge independence", criterion_2),
        (3, "trace laws", criterion_3),
        (4, "Hofstadter/Bloch", criterion_4),
        (5, "eta engine", criterion_5),
        (6, "spectral flow", criterion_6),
        (7, "McKean-Singer", criterion_7),
        (8, "product formula", criterion_8),
        (9, "cohomology transfer", criterion_9),
        (10, "Sobolev/derivation chain", criterion_10),
        (11, "Mishchenko projection", criterion_11),
        (12, "determinism", criterion_12),
    ];
    // written to the raw handle so the report shows without --nocapture
    let mut out = std::io::stdout().lock();
    let mut unexpected = Vec::new();
    for (id, title, run) in criteria {
        let checks = run();
        let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
        let status = if failed.is_empty() { "PASS" } else { "FAIL" };
        writeln!(out, "criterion {id:>2} [{title}]: {status} ({} checks)", checks.len()).unwrap();
        for c in &failed {
            writeln!(out, "    failed: {}: {}", c.name, c.detail).unwrap();
            if !KNOWN_FAILURES.contains(&(id, c.name.as_str())) {
                unexpected.push(format!("{id}: {}", c.name));
            }
        }
        for &(kid, kname) in KNOWN_FAILURES.iter().filter(|(k, _)| *k == id) {
            if !failed.iter().any(|c| c.name == kname) {
                unexpected.push(format!("{kid}: {kname} was expected to fail but passed"));
            }
        }
    }
    assert!(unexpected.is_empty(), "unexpected outcomes: {unexpected:?}");
}

#[test]
fn cli_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_twisted");
    let configs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let ok = Command::new(bin)
        .args(["verify", "--suite", "algebra", "--group", "z2", "--multiplier", "magnetic:1/3", "--samples", "200"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));

    let failing = Command::new(bin).arg("verify").arg("--config").arg(configs.join("corrupted-table.json")).output().unwrap();
    assert_eq!(failing.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&failing.stdout).unwrap();
    let cocycle = &report["suites"][0]["properties"][0];
    assert_eq!(cocycle["name"], "cocycle");
    assert_eq!(cocycle["witnesses"][0].as_array().unwrap().len(), 3);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let malformed = Command::new(bin).arg("verify").arg("--config").arg(&bad).output().unwrap();
    assert_eq!(malformed.status.code(), Some(2));

    let unknown = Command::new(bin).args(["verify", "--suite", "nope"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    let big = Command::new(bin).args(["butterfly", "--qmax", "65"]).output().unwrap();
    assert_eq!(big.status.code(), Some(2));
}

#[test]
fn cli_documented_values() {
    let bin = env!("CARGO_BIN_EXE_twisted");
    let run = |args: &[&str]| -> serde_json::Value {
        let out = Command::new(bin).args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice(&out.stdout).unwrap()
    };
    assert_eq!(run(&["eta", "--matrix", "[[1,0,0],[0,-2,0],[0,0,3]]"])["eta"], 0.5);
    assert_eq!(run(&["--eta-normalization", "full", "eta", "--matrix", "[[1,0,0],[0,-2,0],[0,0,3]]"])["eta"], 1.0);
    assert_eq!(run(&["sobolev", "--element", "3,-2"])["sobolev"][0]["norm"], 6.0);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sf.json");
    std::fs::write(&cfg, r#"{"generator": "linear", "A0": [[-0.5]], "A1": [[0.5]]}"#).unwrap();
    assert_eq!(run(&["spectral-flow", "--config", cfg.to_str().unwrap()])["sf"], 1);
    let b = run(&["betti", "--cycle", "20"]);
    assert_eq!((b["b_even"].as_f64(), b["b_odd"].as_f64()), (Some(1.0), Some(1.0)));
    let p = run(&["pairing-circle", "--winding", "-1"]);
    assert!((p["pairing"]["value"].as_f64().unwrap() + 1.0).abs() <= 1e-3);
}
