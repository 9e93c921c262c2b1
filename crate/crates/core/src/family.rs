//! Highly symmetric GHZ-diagonal family, its triseparability boundary and landmarks.
//!
//! Points are written in `(v, α)` with `p₁₅ = v(1 − 2p₁₆)/α`, `p₂ = (1 − v)(1 − 2p₁₆)/α`.

use crate::criteria::tau;
use crate::error::{Error, Result};
use crate::ghz::{Correlations, GhzState};
use crate::numeric::{brent, golden_min, poly_eval};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilyPoint {
    pub p16: f64,
    pub v: f64,
    pub alpha: f64,
}

impl FamilyPoint {
    pub fn new(p16: f64, v: f64, alpha: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&p16) {
            return Err(Error::Domain(format!("p16 = {p16} outside [0, 1/2)")));
        }
        if !(-1e-12..=1.0 + 1e-12).contains(&v) || !(alpha > 0.0) {
            return Err(Error::Domain(format!("bad family coordinates v = {v}, alpha = {alpha}")));
        }
        Ok(FamilyPoint { p16, v: v.clamp(0.0, 1.0), alpha })
    }

    pub fn from_probs(p15: f64, p2: f64, p16: f64) -> Result<Self> {
        let s = p15 + p2;
        if s <= 0.0 {
            return Err(Error::Domain("p2 + p15 must be positive".into()));
        }
        Self::new(p16, p15 / s, (1.0 - 2.0 * p16) / s)
    }

    pub fn c(&self) -> f64 {
        1.0 - 2.0 * self.p16
    }

    pub fn p15(&self) -> f64 {
        self.v * self.c() / self.alpha
    }

    pub fn p2(&self) -> f64 {
        (1.0 - self.v) * self.c() / self.alpha
    }

    pub fn p1(&self) -> f64 {
        1.0 - self.p16 - 7.0 * (self.p2() + self.p15())
    }

    pub fn probs(&self) -> [f64; 16] {
        let mut p = [0.0; 16];
        p[0] = self.p1();
        p[1..8].iter_mut().for_each(|x| *x = self.p2());
        p[8..15].iter_mut().for_each(|x| *x = self.p15());
        p[15] = self.p16;
        p
    }

    pub fn to_state(&self) -> Result<GhzState> {
        let p1 = self.p1();
        if p1 < -1e-12 {
            return Err(Error::Unphysical(p1));
        }
        let mut p = self.probs();
        p[0] = p1.max(0.0);
        GhzState::new(p)
    }

    /// `R₁ = .. = R₇ = 1 − 8c/α`, `R₈ = c(1 − 14v/α)`, `R₁₅ = −R₉ = c(1 − (8 − 2v)/α)`.
    pub fn correlations(&self) -> Correlations {
        let c = self.c();
        let r7 = 1.0 - 8.0 * c / self.alpha;
        let r8 = c * (1.0 - 14.0 * self.v / self.alpha);
        let r15 = c * (1.0 - (8.0 - 2.0 * self.v) / self.alpha);
        let mut r = [r7; 15];
        r[7] = r8;
        r[8..14].iter_mut().for_each(|x| *x = -r15);
        r[14] = r15;
        Correlations::raw(r)
    }

    /// `K = −R₈/R₁₅`.
    pub fn k(&self) -> f64 {
        let r = self.correlations();
        -r.get(8) / r.get(15)
    }

    /// `(v, α) → (1 − v, 14 − α)`.
    pub fn mirrored(&self) -> FamilyPoint {
        FamilyPoint { p16: self.p16, v: 1.0 - self.v, alpha: 14.0 - self.alpha }
    }
}

/// `K = (14v − α)/(α − 8 + 2v)`, the coordinate form of `−R₈/R₁₅`.
pub fn k_from_coords(v: f64, alpha: f64) -> f64 {
    (14.0 * v - alpha) / (alpha - 8.0 + 2.0 * v)
}

/// Coefficients `a₀..a₄` of the criterion-III quartic in v.
pub fn quartic_coeffs(alpha: f64) -> [f64; 5] {
    [
        (alpha - 10.0).powi(2),
        60.0 * alpha - 520.0,
        1364.0 - 144.0 * alpha,
        96.0 * alpha - 1184.0,
        256.0,
    ]
}

pub fn quartic_residual(v: f64, alpha: f64) -> f64 {
    poly_eval(&quartic_coeffs(alpha), v)
}

/// Real roots in `[0, 1]`, double roots reported once.
pub fn quartic_roots(alpha: f64) -> Vec<f64> {
    let c = quartic_coeffs(alpha);
    let d1: Vec<f64> = (1..5).map(|i| c[i] * i as f64).collect();
    let d2: Vec<f64> = (1..4).map(|i| d1[i] * i as f64).collect();
    let mut out: Vec<f64> = Vec::new();
    for x0 in crate::numeric::real_poly_roots(&c, 1e-6) {
        // a double root is a simple root of the derivative
        let near_double = poly_eval(&d1, x0).abs() < 1e-4 * (1.0 + poly_eval(&d2, x0).abs());
        let x = if near_double { newton(&d1, &d2, x0) } else { x0 };
        let scale: f64 = c.iter().map(|a| a.abs()).sum();
        if poly_eval(&c, x).abs() > 1e-8 * scale {
            continue;
        }
        if (-1e-12..=1.0 + 1e-12).contains(&x) && !out.iter().any(|y| (y - x).abs() < 1e-6) {
            out.push(x.clamp(0.0, 1.0));
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

fn newton(f: &[f64], df: &[f64], mut x: f64) -> f64 {
    for _ in 0..50 {
        let d = poly_eval(df, x);
        if d == 0.0 {
            break;
        }
        let step = poly_eval(f, x) / d;
        x -= step;
        if step.abs() < 1e-16 {
            break;
        }
    }
    x
}

/// The quartic read as a quadratic in α; returns both roots for a given v.
pub fn quartic_alpha(v: f64) -> Option<(f64, f64)> {
    let b = -20.0 + 60.0 * v - 144.0 * v * v + 96.0 * v.powi(3);
    let c = 100.0 - 520.0 * v + 1364.0 * v * v - 1184.0 * v.powi(3) + 256.0 * v.powi(4);
    let d = b * b - 4.0 * c;
    if d < 0.0 {
        return None;
    }
    let s = d.sqrt();
    // stable pair
    let q = -0.5 * (b + b.signum() * s);
    let (r1, r2) = (q, c / q);
    Some((r1.min(r2), r1.max(r2)))
}

/// Criterion-IV boundary with `R₇ ≥ 0`: `v = ½[1 + (K+1)/τ]`, `α = 7 + (7 − K)/τ`.
pub fn cd_curve(k: f64) -> Result<(f64, f64)> {
    let t = tau(k)?;
    Ok((0.5 * (1.0 + (k + 1.0) / t), 7.0 + (7.0 - k) / t))
}

/// Criterion-IV boundary at `p₁₆ = 0` with `R₇ < 0` (between D and E of the first figure).
pub fn de_curve(k: f64) -> Result<(f64, f64)> {
    let t = tau(k)?;
    let d = 24.0 / (4.0 * t - 7.0 + k);
    Ok((((k + 1.0) * d + 8.0) / 16.0, (t * d + 8.0) / 2.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointC {
    pub v: f64,
    pub alpha: f64,
    pub k: f64,
}

/// Tangency of the criterion-III quartic and the criterion-IV curve.
pub fn point_c(p16: f64) -> Result<PointC> {
    regime(p16)?;
    let resid = |k: f64| match cd_curve(k) {
        Ok((v, a)) => quartic_residual(v, a).abs(),
        Err(_) => f64::INFINITY,
    };
    // coarse bracket, then golden refinement
    let (lo, hi, n) = (0.3, 1.2, 90);
    let h = (hi - lo) / n as f64;
    let mut best = (lo, f64::INFINITY);
    for i in 0..=n {
        let k = lo + h * i as f64;
        let r = resid(k);
        if r < best.1 {
            best = (k, r);
        }
    }
    let (k, r) = golden_min(resid, best.0 - h, best.0 + h, 1e-12);
    if r > 1e-6 {
        return Err(Error::NoIntersection(format!("quartic residual {r:e} at K = {k}")));
    }
    let (v, alpha) = cd_curve(k)?;
    Ok(PointC { v, alpha, k })
}

/// Boundary topology selected by p₁₆.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `p₁₆ = 0`: the physical line α = 7 closes the set between F and G.
    Pure,
    /// `2/9 ≤ p₁₆ < ½`: criterion I at α = 5 closes it and the picture is mirror symmetric.
    Mixed,
}

pub fn regime(p16: f64) -> Result<Regime> {
    if p16 == 0.0 {
        Ok(Regime::Pure)
    } else if (2.0 / 9.0 - 1e-12..0.5).contains(&p16) {
        Ok(Regime::Mixed)
    } else {
        Err(Error::Unsupported(format!("p16 = {p16}; supported values are 0 and [2/9, 1/2)")))
    }
}

/// K at which the criterion-IV curve crosses `α = 8` (R₇ changes sign at p₁₆ = 0).
pub fn k_d_pure() -> Result<f64> {
    let f = |k: f64| cd_curve(k).map(|(_, a)| a - 8.0).unwrap_or(f64::NAN);
    brent(f, 1.0, 4.9, 1e-14).ok_or_else(|| Error::NoIntersection("criterion-IV curve never reaches alpha = 8".into()))
}

/// End of criterion IV. The τ parametrization is exact up to K = 5, where both figures end.
pub const K_END: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Landmark {
    pub label: &'static str,
    pub v: f64,
    pub alpha: f64,
    pub p15: f64,
    pub p2: f64,
    pub p1: f64,
}

fn landmark(label: &'static str, p16: f64, v: f64, alpha: f64) -> Landmark {
    let pt = FamilyPoint { p16, v, alpha };
    Landmark { label, v, alpha, p15: pt.p15(), p2: pt.p2(), p1: pt.p1() }
}

pub fn v_b() -> Result<f64> {
    quartic_roots(9.0).last().copied().ok_or_else(|| Error::NoIntersection("no quartic root at alpha = 9".into()))
}

pub fn v_g() -> Result<f64> {
    quartic_roots(5.0).first().copied().ok_or_else(|| Error::NoIntersection("no quartic root at alpha = 5".into()))
}

pub fn landmarks(p16: f64) -> Result<Vec<Landmark>> {
    let reg = regime(p16)?;
    let c = point_c(p16)?;
    let mut out = vec![landmark("A", p16, 1.0 / 6.0, 9.0), landmark("B", p16, v_b()?, 9.0), landmark("C", p16, c.v, c.alpha)];
    match reg {
        Regime::Pure => {
            let (vd, ad) = cd_curve(k_d_pure()?)?;
            out.push(landmark("D", p16, vd, ad));
            // E: the R₇ < 0 branch meets the line α = 8v
            let f = |k: f64| de_curve(k).map(|(v, a)| a - 8.0 * v).unwrap_or(f64::NAN);
            let ke = brent(f, 4.0, 6.0, 1e-14).ok_or_else(|| Error::NoIntersection("E".into()))?;
            let (ve, ae) = de_curve(ke)?;
            out.push(landmark("E", p16, ve, ae));
            // F, G: criterion-II lines α = 8v and α = 8(1 − v) on the physical line α = 7
            out.push(landmark("F", p16, 7.0 / 8.0, 7.0));
            out.push(landmark("G", p16, 1.0 / 8.0, 7.0));
            out.push(landmark("H", p16, 0.0, 8.0));
        }
        Regime::Mixed => {
            let f = |k: f64| cd_curve(k).map(|(v, _)| v - 1.0).unwrap_or(f64::NAN);
            let kd = brent(f, 3.0, 6.0, 1e-14).ok_or_else(|| Error::NoIntersection("D".into()))?;
            let (vd, ad) = cd_curve(kd)?;
            out.push(landmark("D", p16, vd, ad));
            out.push(landmark("E", p16, 1.0, 6.0));
            out.push(landmark("F", p16, 5.0 / 6.0, 5.0));
            out.push(landmark("G", p16, v_g()?, 5.0));
            out.push(landmark("H", p16, 1.0 - c.v, 14.0 - c.alpha));
            out.push(landmark("I", p16, 1.0 - vd, 14.0 - ad));
            out.push(landmark("J", p16, 0.0, 8.0));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Source {
    I,
    II,
    III,
    IV,
    Physical,
}

impl Source {
    pub fn name(&self) -> &'static str {
        match self {
            Source::I => "I",
            Source::II => "II",
            Source::III => "III",
            Source::IV => "IV",
            Source::Physical => "physical",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySegment {
    pub label: &'static str,
    pub source: Source,
    pub points: Vec<FamilyPoint>,
}

fn lin(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| a + (b - a) * i as f64 / (n - 1) as f64)
}

fn line_segment(label: &'static str, source: Source, p16: f64, from: (f64, f64), to: (f64, f64), n: usize) -> BoundarySegment {
    let points = lin(0.0, 1.0, n)
        .map(|t| FamilyPoint { p16, v: from.0 + t * (to.0 - from.0), alpha: from.1 + t * (to.1 - from.1) })
        .collect();
    BoundarySegment { label, source, points }
}

/// BC arc from `v_B` to `v_C`, or its mirror GH when `mirror` is set.
fn quartic_arc(p16: f64, v_from: f64, v_to: f64, upper: bool, n: usize) -> Result<Vec<FamilyPoint>> {
    lin(v_from, v_to, n)
        .map(|v| {
            let (lo, hi) = quartic_alpha(v).ok_or_else(|| Error::NoIntersection(format!("quartic at v = {v}")))?;
            Ok(FamilyPoint { p16, v, alpha: if upper { hi } else { lo } })
        })
        .collect()
}

fn k_arc<F: Fn(f64) -> Result<(f64, f64)>>(f: F, p16: f64, k_from: f64, k_to: f64, n: usize) -> Result<Vec<FamilyPoint>> {
    lin(k_from, k_to, n)
        .map(|k| {
            let (v, alpha) = f(k)?;
            Ok(FamilyPoint { p16, v, alpha })
        })
        .collect()
}

const ASSEMBLY_GAP: f64 = 1e-4;

/// Closed boundary polyline of the triseparable set, traversed A → B → C → ….
pub fn boundary(p16: f64, n: usize) -> Result<Vec<BoundarySegment>> {
    let n = n.max(2);
    let reg = regime(p16)?;
    let lm = landmarks(p16)?;
    let at = |l: &str| {
        let x = lm.iter().find(|x| x.label == l).unwrap();
        (x.v, x.alpha)
    };
    let c = point_c(p16)?;
    let mut segs = vec![
        line_segment("AB", Source::I, p16, at("A"), at("B"), n),
        BoundarySegment { label: "BC", source: Source::III, points: quartic_arc(p16, at("B").0, c.v, true, n)? },
    ];
    match reg {
        Regime::Pure => {
            let kd = k_d_pure()?;
            let ke = k_from_coords(at("E").0, at("E").1);
            let mut pts = k_arc(cd_curve, p16, c.k, kd, n)?;
            pts.extend(k_arc(de_curve, p16, kd, ke, n)?.into_iter().skip(1));
            segs.push(BoundarySegment { label: "CDE", source: Source::IV, points: pts });
            segs.push(line_segment("EF", Source::II, p16, at("E"), at("F"), n));
            segs.push(line_segment("FG", Source::Physical, p16, at("F"), at("G"), n));
            segs.push(line_segment("GH", Source::II, p16, at("G"), at("H"), n));
            segs.push(line_segment("AH", Source::II, p16, at("H"), at("A"), n));
        }
        Regime::Mixed => {
            let kd = k_from_coords(at("D").0, at("D").1);
            segs.push(BoundarySegment { label: "CD", source: Source::IV, points: k_arc(cd_curve, p16, c.k, kd, n)? });
            segs.push(line_segment("DE", Source::II, p16, at("D"), at("E"), n));
            segs.push(line_segment("EF", Source::II, p16, at("E"), at("F"), n));
            segs.push(line_segment("FG", Source::I, p16, at("F"), at("G"), n));
            segs.push(BoundarySegment { label: "GH", source: Source::III, points: quartic_arc(p16, at("G").0, 1.0 - c.v, false, n)? });
            let hi: Vec<FamilyPoint> = k_arc(cd_curve, p16, c.k, kd, n)?.iter().map(|p| p.mirrored()).collect();
            segs.push(BoundarySegment { label: "HI", source: Source::IV, points: hi });
            segs.push(line_segment("IJ", Source::II, p16, at("I"), at("J"), n));
            segs.push(line_segment("AJ", Source::II, p16, at("J"), at("A"), n));
        }
    }
    for i in 0..segs.len() {
        let a = segs[i].points.last().unwrap();
        let b = segs[(i + 1) % segs.len()].points.first().unwrap();
        let gap = (a.p15() - b.p15()).hypot(a.p2() - b.p2());
        if gap > ASSEMBLY_GAP {
            return Err(Error::Assembly { left: segs[i].label.into(), right: segs[(i + 1) % segs.len()].label.into(), gap });
        }
    }
    Ok(segs)
}

/// Maximizer of the η equation's left side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaSolution {
    pub eta: f64,
    /// Maximum of the left side, zero on the criterion-IV curve.
    pub residual: f64,
    /// The maximizer is negative: the mixture would need a negative weight.
    pub negative: bool,
}

/// `1 − η − |R′₈ − R′₁₅ + η|·√(1 − (R′₉ + η/2)²/((R′₈ + η)R′₁₅))`.
pub fn eta_lhs(r: &Correlations, eta: f64) -> f64 {
    let d = 1.0 - r.get(7).abs();
    let (a, b) = (r.get(8) / d, r.get(15) / d);
    let c = (r.get(8) + 6.0 * r.get(9) + r.get(15)) / (4.0 * d) + 0.5 * eta;
    let arg = 1.0 - c * c / ((a + eta) * b);
    if !(arg >= 0.0) || (a + eta) * b >= 0.0 {
        return f64::NAN;
    }
    1.0 - eta - (a - b + eta).abs() * arg.sqrt()
}

const ETA_SCAN: usize = 4000;
const ETA_NEG_TOL: f64 = 1e-8;

/// η at which [`eta_lhs`] peaks, for the CD-curve state at `k`.
pub fn eta_of_k(k: f64, p16: f64) -> Result<EtaSolution> {
    regime(p16)?;
    let (v, alpha) = cd_curve(k)?;
    let r = FamilyPoint { p16, v, alpha }.correlations();
    eta_max(&r).ok_or_else(|| Error::NoIntersection(format!("eta equation undefined at K = {k}")))
}

pub fn eta_max(r: &Correlations) -> Option<EtaSolution> {
    let f = |e: f64| eta_lhs(r, e);
    let (lo, hi) = (-0.5, 1.0 - 1e-9);
    let h = (hi - lo) / ETA_SCAN as f64;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..=ETA_SCAN {
        let x = lo + h * i as f64;
        let fx = f(x);
        if fx.is_finite() && best.map_or(true, |b| fx > b.1) {
            best = Some((x, fx));
        }
    }
    let (x0, _) = best?;
    let g = |e: f64| {
        let v = f(e);
        if v.is_finite() { -v } else { f64::INFINITY }
    };
    let (eta, m) = golden_min(g, (x0 - h).max(lo), (x0 + h).min(hi), 1e-12);
    Some(EtaSolution { eta, residual: -m, negative: eta < -ETA_NEG_TOL })
}
