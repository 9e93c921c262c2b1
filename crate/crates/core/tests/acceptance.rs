//! Acceptance checks, one line per criterion.

use ghzwl::construct::{decompose, verify};
use ghzwl::criteria::criterion_i;
use ghzwl::family::{self, boundary, eta_of_k, landmarks, point_c, quartic_coeffs, quartic_roots};
use ghzwl::ghz::GhzState;
use ghzwl::numeric::brent;
use ghzwl::optimizer::{self, appendix_e_correlations, minimize_l, scan_numeric_boundary, Mode, OptimizerConfig};
use ghzwl::reference as refv;
use ghzwl::witness::{g_tilde, g_tilde_bruteforce, lambda_all_partitions, lambda_symmetric, WitnessParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into(), notes: Vec::new() }
}

fn landmark(p16: f64, label: &str) -> family::Landmark {
    landmarks(p16).unwrap().into_iter().find(|l| l.label == label).unwrap()
}

fn c1_landmarks() -> Outcome {
    let s41 = 41f64.sqrt();
    let want = [
        ("A", 0.0, Some(1.0 / 6.0), None),
        ("B", 0.0, Some((5.0 + s41) / 16.0), None),
        ("F", 0.3, Some(5.0 / 6.0), None),
        ("G", 0.3, Some((11.0 - s41) / 16.0), None),
        ("E", 0.0, Some(10.0 / 11.0), Some(80.0 / 11.0)),
        ("D", 0.3, None, Some(22.0 / 3.0)),
        ("I", 0.3, None, Some(20.0 / 3.0)),
        ("J", 0.3, None, Some(8.0)),
    ];
    let mut worst = 0.0f64;
    for (l, p16, v, a) in want {
        let lm = landmark(p16, l);
        worst = worst.max(v.map_or(0.0, |v| (lm.v - v).abs())).max(a.map_or(0.0, |a| (lm.alpha - a).abs()));
    }
    worst = worst.max((landmark(0.3, "I").p2 - refv::P2_I).abs()).max((landmark(0.3, "J").p2 - refv::P2_J).abs());
    outcome(worst < 1e-9, format!("max deviation {worst:.1e}"))
}

fn c2_point_c() -> Outcome {
    let mut worst = 0.0f64;
    let mut eta = 0.0f64;
    for p16 in [0.0, 0.3] {
        let c = point_c(p16).unwrap();
        worst = worst.max((c.v - refv::V_C).abs()).max((c.alpha - refv::ALPHA_C).abs()).max((c.k - refv::K_C).abs());
        eta = eta.max(eta_of_k(c.k, p16).unwrap().eta.abs());
    }
    outcome(worst < refv::C_TOL && eta < 1e-6, format!("max deviation {worst:.1e}, |eta(K_C)| = {eta:.1e}"))
}

fn c3_werner() -> Outcome {
    let margin = |p: f64| criterion_i(&GhzState::werner(p).unwrap()).margin;
    let root = brent(margin, 0.05, 0.5, 1e-15).unwrap();
    let w = WitnessParams::werner();
    let analytic = lambda_symmetric(&w).unwrap();
    let brute = lambda_all_partitions(&w);
    let pass = (root - refv::WERNER_THRESHOLD).abs() < 1e-10
        && (analytic - refv::WERNER_LAMBDA).abs() < 1e-12
        && (brute - refv::WERNER_LAMBDA).abs() < 1e-6;
    outcome(pass, format!("root p = {root:.12}, Lambda = {analytic} (analytic), {brute:.9} (brute force)"))
}

fn c4_appendix_e() -> Outcome {
    let r = appendix_e_correlations();
    let sym_cfg = OptimizerConfig::new(Mode::Symmetric, 7);
    let asym_cfg = OptimizerConfig::new(Mode::Asymmetric, 7);
    let sym = minimize_l(&r, &sym_cfg).unwrap().l_min;
    let asym = minimize_l(&r, &asym_cfg).unwrap().l_min;
    let again = minimize_l(&r, &asym_cfg).unwrap().l_min;
    let ok_sym = (sym - refv::APPENDIX_E_SYMMETRIC).abs() <= refv::APPENDIX_E_TOL;
    let ok_asym = (asym - refv::APPENDIX_E_ASYMMETRIC).abs() <= refv::APPENDIX_E_TOL;
    let det = asym.to_bits() == again.to_bits();
    outcome(
        ok_sym && ok_asym && asym < sym && det,
        format!(
            "symmetric {sym:.4} (want {}), asymmetric {asym:.4} (want {}), ordered {}, deterministic {det}",
            refv::APPENDIX_E_SYMMETRIC,
            refv::APPENDIX_E_ASYMMETRIC,
            asym < sym
        ),
    )
}

fn c5_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_l = 0.0f64;
    for _ in 0..200 {
        let w = WitnessParams::symmetric(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        worst_l = worst_l.max((lambda_symmetric(&w).unwrap() - lambda_all_partitions(&w)).abs());
    }
    let mut worst_g = 0.0f64;
    for _ in 0..1000 {
        let s: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        worst_g = worst_g.max((g_tilde(s) - g_tilde_bruteforce(s)).abs());
    }
    outcome(worst_l < 1e-5 && worst_g < 1e-6, format!("Lambda gap {worst_l:.1e}, g-tilde gap {worst_g:.1e}"))
}

const SEGMENTS: [&str; 10] = ["AB", "FG", "AH/AJ", "EF", "GH", "DE", "IJ", "BC", "CD", "HI"];

fn segment_key(label: &str) -> Vec<&'static str> {
    match label {
        "AH" | "AJ" => vec!["AH/AJ"],
        "CDE" => vec!["CD", "DE"],
        l => SEGMENTS.iter().copied().filter(|s| *s == l).collect(),
    }
}

fn c6_reconstruction() -> Outcome {
    let mut notes = Vec::new();
    let mut all = true;
    for p16 in [0.0, 0.3] {
        for seg in boundary(p16, 50).unwrap() {
            let (mut ok, mut worst, mut first) = (0, 0.0f64, None);
            for pt in &seg.points {
                match decompose(pt, seg.source, seg.label) {
                    Ok(d) => {
                        let rep = verify(&d);
                        worst = worst.max(rep.residual);
                        if rep.ok && rep.residual < refv::RECONSTRUCTION_TOL {
                            ok += 1;
                        } else if first.is_none() {
                            first = Some(format!("v = {:.4}: residual {:.1e}", pt.v, rep.residual));
                        }
                    }
                    Err(e) => {
                        if first.is_none() {
                            first = Some(format!("v = {:.4}, alpha = {:.4}: {e}", pt.v, pt.alpha));
                        }
                    }
                }
            }
            let n = seg.points.len();
            all &= ok == n;
            notes.push(format!(
                "p16 = {p16} {} ({}) {ok}/{n} max residual {worst:.1e}{}",
                seg.label,
                segment_key(seg.label).join("+"),
                first.map(|f| format!("; first failure {f}")).unwrap_or_default()
            ));
        }
    }
    let failed = notes.iter().filter(|n| !n.contains(" 50/50") && !n.contains(" 99/99")).count();
    Outcome { pass: all, detail: format!("{failed} segment runs with failures"), notes }
}

fn c7_scan() -> Outcome {
    let mut notes = Vec::new();
    let mut worst = 0.0f64;
    for p16 in [0.0, 0.3] {
        let scan = scan_numeric_boundary(p16, 60, &OptimizerConfig::default()).unwrap();
        let level = scan.level_set();
        let d = optimizer::distance_to_boundary(p16, &level).unwrap().into_iter().fold(0.0, f64::max);
        notes.push(format!("p16 = {p16}: {} crossings, max deviation {d:.2e}", level.len()));
        worst = worst.max(d);
    }
    Outcome { pass: worst < refv::BOUNDARY_SCAN_TOL, detail: format!("max deviation {worst:.2e}"), notes }
}

fn c8_quartic() -> Outcome {
    let sq = |p: [f64; 3]| [p[0] * p[0], 2.0 * p[0] * p[1], p[1] * p[1] + 2.0 * p[0] * p[2], 2.0 * p[1] * p[2], p[2] * p[2]];
    let exact = quartic_coeffs(9.0) == sq([-1.0, -10.0, 16.0]) && quartic_coeffs(5.0) == sq([5.0, -22.0, 16.0]);
    let mut worst = 0.0f64;
    let mut counts = true;
    for d in [0.25, 0.5, 1.0, 1.5, 2.0] {
        let a = quartic_roots(7.0 + d);
        let mut b: Vec<f64> = quartic_roots(7.0 - d).iter().map(|x| 1.0 - x).collect();
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        counts &= a.len() == b.len();
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).abs());
        }
    }
    outcome(exact && counts && worst < 1e-10, format!("exact expansions {exact}, symmetry gap {worst:.1e}"))
}

fn c9_hierarchy() -> Outcome {
    let rep = optimizer::verify_hierarchy(7).unwrap();
    outcome(
        rep.c1_strict() && rep.c2_strict(),
        format!(
            "criterion I margin {:.4} with criterion II margin {:.4}; symmetric {:.4} vs asymmetric {:.4}",
            rep.c1_margin_i, rep.c1_margin_ii, rep.appendix_e_symmetric, rep.appendix_e_asymmetric
        ),
    )
}

fn main() {
    let checks: [(&str, Duration, fn() -> Outcome); 9] = [
        ("landmark exactness", Duration::from_secs(1), c1_landmarks),
        ("point C", Duration::from_secs(10), c2_point_c),
        ("Werner threshold", Duration::from_secs(60), c3_werner),
        ("symmetric vs asymmetric witnesses", Duration::from_secs(300), c4_appendix_e),
        ("oracle equivalence", Duration::from_secs(300), c5_oracles),
        ("sufficiency reconstruction", Duration::from_secs(120), c6_reconstruction),
        ("numeric boundary scan", Duration::from_secs(1800), c7_scan),
        ("quartic consistency", Duration::from_secs(1), c8_quartic),
        ("hierarchy evidence", Duration::from_secs(300), c9_hierarchy),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in checks.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let el = t.elapsed();
        let pass = o.pass && el <= *budget;
        failed += usize::from(!pass);
        println!(
            "criterion {}: {} {name}: {} ({:.1?}, budget {:?})",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            el,
            budget
        );
        for n in o.notes {
            println!("    {n}");
        }
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
}
