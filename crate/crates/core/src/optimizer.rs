//! Matched-witness search: minimize L = Λ / ⟨M̂⟩ over witness coefficients.
//!
//! Only M_7 and the antidiagonal M_8..M_15 are searched. M_7 is pinned to `Λ·sign(R_7)`,
//! which is never worse than any other admissible value, so the objective reduces to
//! `g / (g|R_7| + Σ_{i≥8} M_i R_i)` with `g` the largest antidiagonal g̃.

use crate::criteria;
use crate::error::{Error, Result};
use crate::family::{boundary, FamilyPoint};
use crate::ghz::{Correlations, GhzState};
use crate::witness::{g_tilde, k_from_m, lambda_antidiag_unchecked, WitnessParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symmetric,
    Asymmetric,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Mode::Symmetric),
            "asymmetric" => Ok(Mode::Asymmetric),
            _ => Err(Error::Invalid(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub mode: Mode,
    pub starts: usize,
    pub seed: u64,
    /// Smallest coordinate step.
    pub tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { mode: Mode::Asymmetric, starts: 200, seed: 0, tol: 1e-6 }
    }
}

impl OptimizerConfig {
    pub fn new(mode: Mode, seed: u64) -> Self {
        OptimizerConfig { mode, seed, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Optimum {
    #[serde(rename = "L_min")]
    pub l_min: f64,
    #[serde(rename = "M")]
    pub m: Vec<f64>,
    pub mode: Mode,
    pub seed: u64,
}

impl Optimum {
    pub fn witness(&self) -> WitnessParams {
        WitnessParams::raw(self.m.clone().try_into().unwrap())
    }
}

/// Antidiagonal coefficients M_8..M_15 from the searched parameters.
fn antidiag(mode: Mode, x: &[f64]) -> [f64; 8] {
    match mode {
        Mode::Symmetric => [x[0], x[1], x[1], x[1], x[1], x[1], x[1], x[2]],
        Mode::Asymmetric => x.try_into().unwrap(),
    }
}

fn full_witness(a: &[f64; 8], m7: f64) -> WitnessParams {
    let mut m = [0.0; 15];
    m[6] = m7;
    m[7..].copy_from_slice(a);
    WitnessParams::raw(m)
}

fn antidiag_lambda(mode: Mode, a: &[f64; 8]) -> f64 {
    let w = full_witness(a, 0.0);
    match mode {
        Mode::Symmetric => {
            let k = k_from_m(&w);
            g_tilde(k.sector(1)).max(g_tilde(k.sector(2)))
        }
        Mode::Asymmetric => lambda_antidiag_unchecked(&w),
    }
}

fn objective(mode: Mode, r: &Correlations, x: &[f64]) -> f64 {
    let a = antidiag(mode, x);
    let g = antidiag_lambda(mode, &a);
    let den = g * r.get(7).abs() + (0..8).map(|i| a[i] * r.get(8 + i)).sum::<f64>();
    if den <= 0.0 || g <= 0.0 {
        f64::INFINITY
    } else {
        g / den
    }
}

fn normalize(x: &mut [f64]) {
    let s = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if s > 0.0 {
        x.iter_mut().for_each(|v| *v /= s);
    }
}

const MAX_SWEEPS: usize = 200;
const IMPROVE_TOL: f64 = 1e-13;

/// Coordinate descent with step halving.
fn descend(mode: Mode, r: &Correlations, mut x: Vec<f64>, tol: f64) -> (Vec<f64>, f64) {
    let mut f = objective(mode, r, &x);
    let mut step = 0.25;
    while step >= tol {
        let mut moved = true;
        let mut sweeps = 0;
        while moved && sweeps < MAX_SWEEPS {
            moved = false;
            sweeps += 1;
            for i in 0..x.len() {
                for sgn in [1.0, -1.0] {
                    let old = x[i];
                    x[i] = old + sgn * step;
                    let v = objective(mode, r, &x);
                    if v < f - IMPROVE_TOL * f {
                        f = v;
                        moved = true;
                        break;
                    }
                    x[i] = old;
                }
            }
            normalize(&mut x);
        }
        step *= 0.5;
    }
    (x, f)
}

fn start(mode: Mode, r: &Correlations, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = if mode == Mode::Symmetric { 3 } else { 8 };
    for _ in 0..1000 {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        if objective(mode, r, &x).is_finite() {
            return x;
        }
    }
    // aligned with the correlations, which always has a positive denominator
    let a: Vec<f64> = (8..=15).map(|i| r.get(i)).collect();
    match mode {
        Mode::Symmetric => vec![a[0], a[1..7].iter().sum::<f64>() / 6.0, a[7]],
        Mode::Asymmetric => a,
    }
}

fn stream_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (i as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

fn search(r: &Correlations, mode: Mode, cfg: &OptimizerConfig) -> (Vec<f64>, f64) {
    let runs: Vec<(Vec<f64>, f64)> = (0..cfg.starts.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, i));
            let x0 = start(mode, r, &mut rng);
            descend(mode, r, x0, cfg.tol)
        })
        .collect();
    runs.into_iter().fold((Vec::new(), f64::INFINITY), |best, run| if run.1 < best.1 { run } else { best })
}

/// Smallest L found and the witness attaining it.
pub fn minimize_l(r: &Correlations, cfg: &OptimizerConfig) -> Result<Optimum> {
    if (8..=15).all(|i| r.get(i) == 0.0) {
        return Err(Error::Degenerate);
    }
    // averaging a witness over qubit permutations keeps ⟨M⟩ on an invariant state and cannot raise Λ
    let mode = if permutation_invariant(r) { Mode::Symmetric } else { cfg.mode };
    let (x, l) = search(r, mode, cfg);
    if !l.is_finite() {
        return Err(Error::Degenerate);
    }
    let a = antidiag(mode, &x);
    let g = antidiag_lambda(mode, &a);
    let m7 = if r.get(7) < 0.0 { -g } else { g };
    let w = full_witness(&a, m7);
    Ok(Optimum { l_min: l, m: w.values().to_vec(), mode: cfg.mode, seed: cfg.seed })
}

/// R_9..R_14 all equal, so the antidiagonal is invariant under every qubit permutation.
pub fn permutation_invariant(r: &Correlations) -> bool {
    let r9 = r.get(9);
    (10..=14).all(|i| (r.get(i) - r9).abs() <= 1e-12 * r9.abs().max(1.0))
}

pub fn minimize_l_state(state: &GhzState, cfg: &OptimizerConfig) -> Result<Optimum> {
    minimize_l(&state.correlations(), cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub p15: f64,
    pub p2: f64,
    #[serde(rename = "L_min")]
    pub l_min: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryScan {
    pub p16: f64,
    pub grid: usize,
    /// Row-major over (p15 index, p2 index); `NaN` outside the physical triangle.
    pub values: Vec<f64>,
    pub p15_max: f64,
    pub p2_max: f64,
}

impl BoundaryScan {
    fn coord(&self, i: usize, j: usize) -> (f64, f64) {
        let h = (self.grid - 1) as f64;
        (self.p15_max * i as f64 / h, self.p2_max * j as f64 / h)
    }

    pub fn points(&self) -> Vec<ScanPoint> {
        let n = self.grid;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let l = self.values[i * n + j];
                if !l.is_nan() {
                    let (p15, p2) = self.coord(i, j);
                    out.push(ScanPoint { p15, p2, l_min: l });
                }
            }
        }
        out
    }

    /// Crossings of `L_min = 1` along grid edges, linearly interpolated.
    pub fn level_set(&self) -> Vec<(f64, f64)> {
        let n = self.grid;
        let mut out = Vec::new();
        let mut edge = |a: (usize, usize), b: (usize, usize)| {
            let (la, lb) = (self.values[a.0 * n + a.1], self.values[b.0 * n + b.1]);
            if la.is_nan() || lb.is_nan() || (la - 1.0).signum() == (lb - 1.0).signum() {
                return;
            }
            let (pa, pb) = (self.coord(a.0, a.1), self.coord(b.0, b.1));
            let t = if la.is_infinite() || lb.is_infinite() { 0.5 } else { (1.0 - la) / (lb - la) };
            out.push((pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1)));
        };
        for i in 0..n {
            for j in 0..n {
                if i + 1 < n {
                    edge((i, j), (i + 1, j));
                }
                if j + 1 < n {
                    edge((i, j), (i, j + 1));
                }
            }
        }
        out
    }
}

/// `L_min` (asymmetric mode) on a `grid × grid` lattice covering the physical triangle.
pub fn scan_numeric_boundary(p16: f64, grid: usize, cfg: &OptimizerConfig) -> Result<BoundaryScan> {
    FamilyPoint::new(p16, 0.5, 8.0)?;
    let grid = grid.max(2);
    let top = (1.0 - p16) / 7.0;
    let cfg = OptimizerConfig { mode: Mode::Asymmetric, ..*cfg };
    let mut scan = BoundaryScan { p16, grid, values: vec![f64::NAN; grid * grid], p15_max: top, p2_max: top };
    let coords: Vec<(usize, usize)> = (0..grid).flat_map(|i| (0..grid).map(move |j| (i, j))).collect();
    let values: Vec<f64> = coords
        .par_iter()
        .map(|&(i, j)| {
            let (p15, p2) = scan.coord(i, j);
            match FamilyPoint::from_probs(p15, p2, p16).and_then(|pt| pt.to_state().map(|_| pt)) {
                Ok(pt) => minimize_l(&pt.correlations(), &cfg).map(|o| o.l_min).unwrap_or(f64::INFINITY),
                Err(_) => f64::NAN,
            }
        })
        .collect();
    scan.values = values;
    Ok(scan)
}

/// Distance in (p15, p2) from a point to the analytic boundary polyline.
pub fn distance_to_boundary(p16: f64, pts: &[(f64, f64)]) -> Result<Vec<f64>> {
    let segs = boundary(p16, 400)?;
    let poly: Vec<(f64, f64)> = segs.iter().flat_map(|s| s.points.iter().map(|p| (p.p15(), p.p2()))).collect();
    let seg_dist = |p: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let l2 = dx * dx + dy * dy;
        let t = if l2 > 0.0 { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / l2).clamp(0.0, 1.0) } else { 0.0 };
        (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
    };
    Ok(pts
        .iter()
        .map(|&p| {
            (0..poly.len())
                .map(|k| seg_dist(p, poly[k], poly[(k + 1) % poly.len()]))
                .fold(f64::INFINITY, f64::min)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HierarchyReport {
    /// Family point satisfying criterion I while violating criterion II.
    pub c1_state: FamilyPoint,
    pub c1_margin_i: f64,
    pub c1_margin_ii: f64,
    pub appendix_e_symmetric: f64,
    pub appendix_e_asymmetric: f64,
    pub werner_p: f64,
    pub werner_passes_c2: bool,
}

impl HierarchyReport {
    pub fn c1_strict(&self) -> bool {
        self.c1_margin_i >= 0.0 && self.c1_margin_ii < 0.0
    }

    pub fn c2_strict(&self) -> bool {
        self.appendix_e_asymmetric < self.appendix_e_symmetric
    }
}

/// Correlations of the Appendix E example, with R_1..R_7 set to zero.
pub fn appendix_e_correlations() -> Correlations {
    let mut r = [0.0; 15];
    r[7..].copy_from_slice(&crate::reference::APPENDIX_E_R);
    Correlations::raw(r)
}

pub fn verify_hierarchy(seed: u64) -> Result<HierarchyReport> {
    // just past the criterion-II line p15 = 1/8, well inside the criterion-I region
    let pt = FamilyPoint::from_probs(0.13, 0.005, 0.0)?;
    let state = pt.to_state()?;
    let i = criteria::criterion_i(&state).margin;
    let ii = criteria::criterion_ii(&state.correlations()).margin;
    let r = appendix_e_correlations();
    let sym = minimize_l(&r, &OptimizerConfig::new(Mode::Symmetric, seed))?.l_min;
    let asym = minimize_l(&r, &OptimizerConfig::new(Mode::Asymmetric, seed))?.l_min;
    let werner_p = 0.19;
    let rep = criteria::evaluate(&GhzState::werner(werner_p)?);
    Ok(HierarchyReport {
        c1_state: pt,
        c1_margin_i: i,
        c1_margin_ii: ii,
        appendix_e_symmetric: sym,
        appendix_e_asymmetric: asym,
        werner_p,
        werner_passes_c2: rep.verdict == criteria::Verdict::PassesC2,
    })
}
