//! Tripartite-separability criteria I, I′, II, III and IV with their auxiliary quantities.

use crate::error::{Error, Result};
use crate::ghz::{t_from_r, Correlations, GhzState, TVector};
use crate::numeric::{brent, golden_max};
use crate::witness::{g_tilde, times_gamma};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Products closer to zero than this fail a strict sign test.
pub const SIGN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub applicable: bool,
    pub satisfied: bool,
    pub margin: f64,
}

impl CriterionResult {
    fn from_margin(margin: f64) -> Self {
        CriterionResult { applicable: true, satisfied: margin >= 0.0, margin }
    }

    fn inapplicable(margin: f64) -> Self {
        CriterionResult { applicable: false, satisfied: true, margin }
    }

    pub fn violated(&self) -> bool {
        self.applicable && self.margin < 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    DetectedEntangled,
    PassesC2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    #[serde(rename = "I")]
    pub i: CriterionResult,
    #[serde(rename = "Iprime")]
    pub i_prime: CriterionResult,
    #[serde(rename = "II")]
    pub ii: CriterionResult,
    #[serde(rename = "III")]
    pub iii: CriterionResult,
    #[serde(rename = "IV")]
    pub iv: CriterionResult,
    pub verdict: Verdict,
}

impl CriterionReport {
    pub fn all(&self) -> [(&'static str, CriterionResult); 5] {
        [("I", self.i), ("Iprime", self.i_prime), ("II", self.ii), ("III", self.iii), ("IV", self.iv)]
    }
}

/// R̃₁ from the first antidiagonal sector of T.
pub fn r1_tilde(t: &TVector) -> f64 {
    let s = [t.get(8), t.get(10), t.get(12), t.get(14)];
    let prod = s[0] * s[1] * s[2] * s[3];
    if prod > 0.0 {
        let q = times_gamma([prod / s[0], prod / s[1], prod / s[2], prod / s[3]]);
        if q.iter().product::<f64>() >= 0.0 {
            let num = (s[0] * s[1] + s[2] * s[3]) * (s[0] * s[2] + s[1] * s[3]) * (s[0] * s[3] + s[1] * s[2]);
            return (num / prod).sqrt();
        }
    }
    times_gamma(s).iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

pub fn r2_tilde(t: &TVector) -> f64 {
    t.get(9).abs() + t.get(15).abs()
}

/// `½·min(even-parity half, odd-parity half)` of the diagonal, equal to `(1 − |R₇|)/8`.
fn diag_half(state: &GhzState) -> (f64, f64) {
    let rho = state.density_matrix();
    let d = |i: usize| rho.re(i, i);
    let half = 0.5 * (d(1) + d(4) + d(6) + d(7)).min(d(2) + d(3) + d(5) + d(8));
    let quarter = 0.25
        * (d(1) + d(4) + d(6) + d(7) + d(10) + d(11) + d(13) + d(16))
            .min(d(2) + d(3) + d(5) + d(8) + d(9) + d(12) + d(14) + d(15));
    (half, quarter)
}

fn antidiag_abs(state: &GhzState, i: usize) -> f64 {
    // ρ_{i,17−i} = (p_i − p_{17−i})/2 for i ≤ 8
    let k = i.min(17 - i);
    0.5 * (state.p(k) - state.p(17 - k)).abs()
}

pub fn criterion_i(state: &GhzState) -> CriterionResult {
    let (half, _) = diag_half(state);
    let m = [1, 4, 5, 8].iter().map(|&i| antidiag_abs(state, i)).fold(0.0, f64::max);
    CriterionResult::from_margin(half - m)
}

/// Margin of `|R₇| + R̃₁ ≤ 1`; equals 8× [`criterion_i`] when R̃₁ takes its max branch.
pub fn criterion_i_correlation_form(r: &Correlations) -> f64 {
    1.0 - r.get(7).abs() - r1_tilde(&t_from_r(r))
}

pub fn criterion_i_prime(state: &GhzState) -> CriterionResult {
    let (half, quarter) = diag_half(state);
    let m = (1..=8).map(|i| antidiag_abs(state, i)).fold(0.0, f64::max);
    CriterionResult::from_margin(half.max(quarter) - m)
}

pub fn criterion_ii(r: &Correlations) -> CriterionResult {
    CriterionResult::from_margin(1.0 - (r.get(7).abs() + r.get(8).abs() + r.get(15).abs()))
}

pub fn antidiag_sum(r: &Correlations) -> f64 {
    (8..=15).map(|i| r.get(i)).sum()
}

/// Closed-form right side of criterion III, `|R₈ − R₁₅|·√(1 − S²/(16R₈R₁₅))`.
pub fn r1_tilde_prime(r: &Correlations) -> f64 {
    let (r8, r15) = (r.get(8), r.get(15));
    let s = antidiag_sum(r);
    (r8 - r15).abs() * (1.0 - s * s / (16.0 * r8 * r15)).max(0.0).sqrt()
}

/// Optimal criterion-III witness found numerically.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriterionIiiWitness {
    /// `max Σ K T′ / g̃₁` over the sector with `K₁₀ = K₁₂`.
    pub value: f64,
    pub m8: f64,
    pub m9: f64,
    pub m15: f64,
    pub g1: f64,
    pub g2: f64,
}

impl CriterionIiiWitness {
    /// The bound holds only when the second sector stays below the first.
    pub fn valid(&self) -> bool {
        self.g2 <= self.g1 * (1.0 + 1e-9)
    }
}

pub fn criterion_iii_witness(r: &Correlations) -> CriterionIiiWitness {
    let (r8, r15) = (r.get(8), r.get(15));
    let s = antidiag_sum(r);
    let ratio = |k: &[f64]| {
        let g = g_tilde([k[0], k[1], k[1], k[2]]);
        if g <= 0.0 {
            return f64::NEG_INFINITY;
        }
        (k[0] * r8 + 0.5 * k[1] * s - k[2] * r15) / g
    };
    let mut starts: Vec<(Vec<f64>, f64)> = Vec::new();
    let n = 24;
    for i in 0..n {
        for j in 0..=n / 2 {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            let b = std::f64::consts::PI * (j as f64 / (n / 2) as f64 - 0.5);
            let k = vec![a.cos() * b.cos(), a.sin() * b.cos(), b.sin()];
            let v = ratio(&k);
            starts.push((k, v));
        }
    }
    starts.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let mut best = (starts[0].0.clone(), starts[0].1);
    for (k0, _) in starts.iter().take(3) {
        let (k, v) = crate::numeric::compass_max(ratio, k0, 0.1, 1e-9);
        if v > best.1 {
            best = (k, v);
        }
    }
    let k = best.0;
    let m9 = 0.5 * k[1];
    let (m8, m15) = (k[0] + m9, m9 - k[2]);
    let g1 = g_tilde([k[0], k[1], k[1], k[2]]);
    let g2 = (m8 + m9).abs().max((m9 + m15).abs());
    CriterionIiiWitness { value: best.1, m8, m9, m15, g1, g2 }
}

/// Criterion III. Applicable when R₈R₁₅ < 0, the closed form's branch condition holds and
/// the optimal witness keeps `g̃₂ ≤ g̃₁`.
pub fn criterion_iii(r: &Correlations) -> CriterionResult {
    let (r8, r15) = (r.get(8), r.get(15));
    let s = antidiag_sum(r);
    let p = r8 * r15;
    let margin = if p != 0.0 { 1.0 - r.get(7).abs() - r1_tilde_prime(r) } else { f64::NAN };
    if p < -SIGN_TOL && (8.0 * p).abs() >= (s * (r8 + r15)).abs() && criterion_iii_witness(r).valid() {
        CriterionResult::from_margin(margin)
    } else {
        CriterionResult::inapplicable(margin)
    }
}

const TAU_S_MIN: f64 = 1e-6;
const TAU_SCAN: usize = 10_000;

fn t_abs(s: f64) -> f64 {
    let s2 = s * s;
    (1.0 - 4.0 / s2) * (s - 2.0) - (4.0 / s2) * ((1.0 - s) * (4.0 - s2)).max(0.0).sqrt()
}

fn tau_objective(s: f64, k: f64) -> f64 {
    let t = t_abs(s);
    (s * (1.0 - k) + t * (1.0 + k) + k + 5.0) / (s - t - 2.0).abs()
}

/// τ(K) = max over s ∈ [0, 1] of the criterion-IV ratio.
pub fn tau(k: f64) -> Result<f64> {
    if !k.is_finite() {
        return Err(Error::Domain(format!("tau needs finite K, got {k}")));
    }
    let h = (1.0 - TAU_S_MIN) / TAU_SCAN as f64;
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for i in 0..=TAU_SCAN {
        let s = TAU_S_MIN + h * i as f64;
        let v = tau_objective(s, k);
        if v.is_finite() && v > best.1 {
            best = (s, v);
        }
    }
    if !best.1.is_finite() {
        return Err(Error::Domain(format!("no finite tau candidate at K = {k}")));
    }
    let lo = (best.0 - h).max(TAU_S_MIN);
    let hi = (best.0 + h).min(1.0);
    let (_, v) = golden_max(|s| tau_objective(s, k), lo, hi, 1e-10);
    Ok(v.max(best.1))
}

/// One admissible witness on the criterion-IV constraint: (M₁₅, M₈, Λ).
#[derive(Clone, Copy, Debug)]
struct IvNode {
    m15: f64,
    m8: f64,
}

const IV_M15_RANGE: f64 = 8.0;
const IV_M15_SCAN: usize = 10_000;
const IV_M8_RANGE: f64 = 20.0;
const IV_M8_SCAN: usize = 800;

fn iv_constraint(m8: f64, m15: f64) -> f64 {
    g_tilde([m8 + 1.0, -2.0, -2.0, -1.0 - m15]) - iv_lambda(m8, m15)
}

fn iv_lambda(m8: f64, m15: f64) -> f64 {
    (m8 - 1.0).abs().max((m15 - 1.0).abs())
}

fn iv_roots(m15: f64) -> Vec<f64> {
    let h = 2.0 * IV_M8_RANGE / IV_M8_SCAN as f64;
    let mut out = Vec::new();
    let mut prev = (-IV_M8_RANGE, iv_constraint(-IV_M8_RANGE, m15));
    for i in 1..=IV_M8_SCAN {
        let x = -IV_M8_RANGE + h * i as f64;
        let fx = iv_constraint(x, m15);
        if prev.1 == 0.0 {
            out.push(prev.0);
        } else if prev.1 * fx < 0.0 {
            if let Some(r) = brent(|m| iv_constraint(m, m15), prev.0, x, 1e-13) {
                out.push(r);
            }
        }
        prev = (x, fx);
    }
    out
}

fn iv_nodes() -> &'static Vec<IvNode> {
    static NODES: OnceLock<Vec<IvNode>> = OnceLock::new();
    NODES.get_or_init(|| {
        let h = 2.0 * IV_M15_RANGE / IV_M15_SCAN as f64;
        let mut v = Vec::new();
        for i in 0..=IV_M15_SCAN {
            let m15 = -IV_M15_RANGE + h * i as f64;
            for m8 in iv_roots(m15) {
                v.push(IvNode { m15, m8 });
            }
        }
        v
    })
}

fn iv_value(r8: f64, s: f64, r15: f64, m8: f64, m15: f64) -> f64 {
    (m8 * r8 - s + m15 * r15).abs() / iv_lambda(m8, m15)
}

/// Root of the constraint on the branch through `m8_guess`.
fn iv_track(m15: f64, m8_guess: f64) -> Option<f64> {
    let mut d = 1e-3;
    while d < 1.0 {
        let (a, b) = (m8_guess - d, m8_guess + d);
        if iv_constraint(a, m15) * iv_constraint(b, m15) <= 0.0 {
            return brent(|m| iv_constraint(m, m15), a, b, 1e-14);
        }
        d *= 2.0;
    }
    None
}

/// Route (a): maximize over the one-parameter criterion-IV witness family.
pub fn r_double_prime_direct(r8: f64, s: f64, r15: f64) -> f64 {
    let nodes = iv_nodes();
    let mut order: Vec<(f64, IvNode)> = nodes.iter().map(|n| (iv_value(r8, s, r15, n.m8, n.m15), *n)).collect();
    order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let h = 2.0 * IV_M15_RANGE / IV_M15_SCAN as f64;
    let mut best = order.first().map(|x| x.0).unwrap_or(0.0);
    for &(_, n) in order.iter().take(4) {
        let f = |m15: f64| match iv_track(m15, n.m8) {
            Some(m8) => iv_value(r8, s, r15, m8, m15),
            None => f64::NEG_INFINITY,
        };
        let lo = (n.m15 - h).max(-IV_M15_RANGE);
        let hi = (n.m15 + h).min(IV_M15_RANGE);
        let (_, v) = golden_max(f, lo, hi, 1e-12);
        best = best.max(v);
    }
    // M₈ = −M₁₅ → ±∞ stays on the constraint
    best.max((r8 - r15).abs())
}

/// Largest K for which the τ route describes the optimal witness; beyond it the optimum
/// runs off to the `M₈ = −M₁₅ → ∞` limit.
pub const TAU_K_MAX: f64 = 5.0;

/// Route (b): `|R₁₅|·τ(−R₈/R₁₅)` for family correlations (R₉ = .. = R₁₄ = −R₁₅).
pub fn r_double_prime_family(r8: f64, r15: f64) -> Result<f64> {
    if r15 == 0.0 {
        return Err(Error::Degenerate);
    }
    Ok(r15.abs() * tau(-r8 / r15)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RDoublePrime {
    pub value: f64,
    /// Second route, present when R has the family shape with R₈R₁₅ < 0.
    pub family_route: Option<f64>,
    /// R₁₅ = 0, so only the direct route is defined.
    pub degenerate: bool,
}

fn family_shaped(r: &Correlations) -> bool {
    let r15 = r.get(15);
    (9..=14).all(|i| (r.get(i) + r15).abs() <= 1e-12)
}

pub fn r_double_prime(r: &Correlations) -> RDoublePrime {
    let (r8, r15) = (r.get(8), r.get(15));
    let s: f64 = (9..=14).map(|i| r.get(i)).sum();
    let value = r_double_prime_direct(r8, s, r15);
    let k = -r8 / r15;
    let family_route =
        if family_shaped(r) && k > 0.0 && k <= TAU_K_MAX { r_double_prime_family(r8, r15).ok() } else { None };
    RDoublePrime { value, family_route, degenerate: r15 == 0.0 }
}

pub fn criterion_iv(r: &Correlations) -> CriterionResult {
    CriterionResult::from_margin(1.0 - r.get(7).abs() - r_double_prime(r).value)
}

pub fn evaluate(state: &GhzState) -> CriterionReport {
    let r = state.correlations();
    let i = criterion_i(state);
    let i_prime = criterion_i_prime(state);
    let ii = criterion_ii(&r);
    let iii = criterion_iii(&r);
    let iv = criterion_iv(&r);
    let any = [i, i_prime, ii, iii, iv].iter().any(|c| c.violated());
    let verdict = if any { Verdict::DetectedEntangled } else { Verdict::PassesC2 };
    CriterionReport { i, i_prime, ii, iii, iv, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghz::{state_from_correlations, GhzState};
    use crate::witness::permute_correlations;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t_of(v: [f64; 4]) -> TVector {
        let mut t = [0.0; 16];
        t[8] = v[0];
        t[10] = v[1];
        t[12] = v[2];
        t[14] = v[3];
        TVector { t }
    }

    /// Family correlations from (p₁ − p₁₆, p₂ − p₁₅) and the diagonal value.
    fn family_r(d: f64, e: f64, r7: f64) -> Correlations {
        let mut r = [0.0; 15];
        r[..7].iter_mut().for_each(|x| *x = r7);
        r[7] = d + 7.0 * e;
        r[8..14].iter_mut().for_each(|x| *x = e - d);
        r[14] = d - e;
        Correlations::raw(r)
    }

    #[test]
    fn r1_tilde_examples() {
        let p = 0.4;
        let w = t_from_r(&GhzState::werner(p).unwrap().correlations());
        assert!((r1_tilde(&w) - 4.0 * p).abs() < 1e-14);
        let t = 0.3;
        assert!((r1_tilde(&t_of([t, t, t, t])) - 2.0 * 2f64.sqrt() * t).abs() < 1e-14);
        assert_eq!(r1_tilde(&t_of([1.0, 0.0, 0.0, 0.0])), 1.0);
    }

    #[test]
    fn r1_tilde_matches_sampled_dual() {
        // R̃₁ = max over K of Σ K T / g̃(K)
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let tv = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let ratio = |k: &[f64; 4]| k.iter().zip(tv.iter()).map(|(a, b)| a * b).sum::<f64>() / g_tilde(*k);
            let mut k = [0.0; 4];
            let mut best = f64::NEG_INFINITY;
            for _ in 0..20_000 {
                let c = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                if ratio(&c) > best {
                    best = ratio(&c);
                    k = c;
                }
            }
            let mut step = 0.1;
            while step > 1e-7 {
                for _ in 0..200 {
                    let mut c = k;
                    c.iter_mut().for_each(|x| *x += step * rng.gen_range(-1.0..1.0));
                    if ratio(&c) > best {
                        best = ratio(&c);
                        k = c;
                    }
                }
                step *= 0.5;
            }
            let exact = r1_tilde(&t_of(tv));
            assert!(best <= exact + 1e-9, "{best} > {exact}");
            assert!(best > exact * (1.0 - 1e-4), "{best} vs {exact}");
        }
    }

    #[test]
    fn r2_tilde_examples() {
        assert_eq!(r2_tilde(&t_from_r(&GhzState::werner(0.3).unwrap().correlations())), 0.0);
        let mut t = [0.0; 16];
        t[9] = 0.3;
        t[15] = -0.2;
        assert!((r2_tilde(&TVector { t }) - 0.5).abs() < 1e-15);
        assert_eq!(r2_tilde(&TVector { t: [0.0; 16] }), 0.0);
    }

    #[test]
    fn criterion_i_werner() {
        for p in [0.0, 0.1, 0.2, 0.3, 0.5, 1.0] {
            let m = criterion_i(&GhzState::werner(p).unwrap()).margin;
            assert!((m - ((1.0 - p) / 8.0 - p / 2.0)).abs() < 1e-15);
        }
        assert!(criterion_i(&GhzState::werner(0.2).unwrap()).margin.abs() < 1e-15);
        assert!((criterion_i(&GhzState::uniform()).margin - 0.125).abs() < 1e-15);
    }

    #[test]
    fn criterion_i_prime_examples() {
        let mut p = [0.02; 16];
        p[1] = 0.7;
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= s);
        let st = GhzState::new(p).unwrap();
        assert!(criterion_i(&st).margin > 0.0);
        assert!(criterion_i_prime(&st).margin < 0.0);
        for q in [0.1, 0.4] {
            let w = GhzState::werner(q).unwrap();
            assert!((criterion_i_prime(&w).margin - criterion_i(&w).margin).abs() < 1e-15);
        }
        assert!((criterion_i_prime(&GhzState::uniform()).margin - 0.125).abs() < 1e-15);
    }

    #[test]
    fn criterion_ii_examples() {
        assert!((criterion_ii(&GhzState::pure(1).unwrap().correlations()).margin + 2.0).abs() < 1e-14);
        assert_eq!(criterion_ii(&GhzState::uniform().correlations()).margin, 1.0);
    }

    #[test]
    fn criterion_iii_applicability() {
        let r = GhzState::werner(0.3).unwrap().correlations();
        assert!(!criterion_iii(&r).applicable);
        let r = crate::family::FamilyPoint::new(0.0, 0.73885, 8.95).unwrap().correlations();
        assert!(criterion_iii_witness(&r).valid());
        assert!(criterion_iii(&r).applicable);
        // closed form still evaluates but the optimal witness has g̃₂ > g̃₁
        let r = family_r(0.1, -0.1, 0.2);
        let w = criterion_iii_witness(&r);
        assert!((w.value - r1_tilde_prime(&r)).abs() < 1e-9 && !w.valid());
        assert!(!criterion_iii(&r).applicable);
    }

    #[test]
    fn criterion_iii_witness_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let mut n = 0;
        while n < 50 {
            let (r8, r15): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let r = family_r((r8 + 7.0 * r15) / 8.0, (r8 - r15) / 8.0, 0.0);
            let s = antidiag_sum(&r);
            if r8 * r15 >= -1e-3 || (8.0 * r8 * r15).abs() < (s * (r8 + r15)).abs() {
                continue;
            }
            let w = criterion_iii_witness(&r);
            assert!((w.value - r1_tilde_prime(&r)).abs() < 1e-7 * (1.0 + w.value), "{w:?} vs {}", r1_tilde_prime(&r));
            n += 1;
        }
    }

    #[test]
    fn tau_at_point_c() {
        let k = 0.6626275;
        let t = tau(k).unwrap();
        assert!((t - 3.3354).abs() < 2e-4, "{t}");
        let alpha = 7.0 + (7.0 - k) / t;
        assert!((alpha - 8.900032).abs() < 5e-6);
    }

    #[test]
    fn iv_asymptotic_branch() {
        for m in [50.0, 400.0, -50.0, -400.0] {
            assert!(iv_constraint(-m, m).abs() < 1e-9 * m.abs());
        }
    }

    #[test]
    fn r_double_prime_zero() {
        let r = Correlations::raw([0.0; 15]);
        assert!(r_double_prime(&r).value.abs() < 1e-12);
    }

    #[test]
    fn r_double_prime_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut n = 0;
        while n < 500 {
            let r8: f64 = rng.gen_range(-1.0..1.0);
            let r15: f64 = rng.gen_range(-1.0..1.0);
            if r8 * r15 >= -1e-3 || -r8 / r15 > 5.0 {
                continue;
            }
            let r = family_r((r8 + 7.0 * r15) / 8.0, (r8 - r15) / 8.0, 0.0);
            assert!((r.get(8) - r8).abs() < 1e-14 && (r.get(15) - r15).abs() < 1e-14);
            let rd = r_double_prime(&r);
            let b = rd.family_route.unwrap();
            assert!((rd.value - b).abs() < 1e-6 * (1.0 + b), "R8={r8} R15={r15}: {} vs {b}", rd.value);
            n += 1;
        }
    }

    #[test]
    fn criterion_i_both_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut checked = 0;
        for _ in 0..2000 {
            let mut p = [0.0; 16];
            p.iter_mut().for_each(|x| *x = rng.gen::<f64>().powi(3));
            let s: f64 = p.iter().sum();
            p.iter_mut().for_each(|x| *x /= s);
            let st = GhzState::new(p).unwrap();
            let r = st.correlations();
            let t = t_from_r(&r);
            let s4 = [t.get(8), t.get(10), t.get(12), t.get(14)];
            let maxb = times_gamma(s4).iter().fold(0.0f64, |a, x| a.max(x.abs()));
            if (r1_tilde(&t) - maxb).abs() < 1e-15 {
                checked += 1;
                assert!((8.0 * criterion_i(&st).margin - criterion_i_correlation_form(&r)).abs() < 1e-12);
            }
        }
        assert!(checked > 100);
    }

    fn rand_state(rng: &mut ChaCha8Rng) -> GhzState {
        let mut p = [0.0; 16];
        p.iter_mut().for_each(|x| *x = rng.gen::<f64>().powi(2));
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= s);
        GhzState::new(p).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let w = evaluate(&GhzState::werner(0.3).unwrap());
        assert_eq!(w.verdict, Verdict::DetectedEntangled);
        assert!(w.i.margin < 0.0);
        assert_eq!(evaluate(&GhzState::uniform()).verdict, Verdict::PassesC2);
        let j = serde_json::to_value(w).unwrap();
        for k in ["I", "Iprime", "II", "III", "IV"] {
            assert!(j[k]["margin"].is_number() && j[k]["applicable"].is_boolean());
        }
        assert_eq!(j["verdict"], "detected-entangled");
    }

    #[test]
    fn margins_invariant_under_qubit_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let perms = [[2, 1, 3, 4], [1, 3, 2, 4], [4, 2, 3, 1], [2, 3, 4, 1], [3, 4, 1, 2], [4, 3, 2, 1]];
        for _ in 0..50 {
            let st = rand_state(&mut rng);
            let a = evaluate(&st);
            for perm in perms {
                let r2 = permute_correlations(&st.correlations(), perm);
                let b = evaluate(&state_from_correlations(&r2).unwrap());
                // criterion I reads the four entries singled out by the pair {3,4}
                let keeps_pair = perm[2] + perm[3] == 7;
                for ((name, x), (_, y)) in a.all().iter().zip(b.all().iter()) {
                    if *name == "I" && !keeps_pair {
                        continue;
                    }
                    assert_eq!(x.applicable, y.applicable);
                    if x.applicable {
                        assert!((x.margin - y.margin).abs() < 1e-9, "{name} {perm:?}");
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn i_prime_never_weaker(p in proptest::array::uniform16(0.0f64..1.0)) {
            let s: f64 = p.iter().sum();
            prop_assume!(s > 1e-3);
            let mut q = p;
            q.iter_mut().for_each(|x| *x /= s);
            let st = GhzState::new(q).unwrap();
            prop_assert!(criterion_i_prime(&st).margin <= criterion_i(&st).margin + 1e-15);
        }
    }
}
