//! Explicit triseparable decompositions of family states on the boundary.
//!
//! A construction is a short list of seed product states (qubits 1, 2 single, 3, 4 the
//! pair). Each seed is averaged over the 24 qubit permutations and over the 16 Pauli
//! strings that fix every GHZ basis state; both operations are local, so every image is a
//! product state for some 1|1|2 partition, and the average is GHZ-diagonal and permutation
//! symmetric. A fully separable diagonal state (computational basis product states) makes up
//! the remaining diagonal part.

use crate::criteria::antidiag_sum;
use crate::error::{Error, Result};
use crate::family::{FamilyPoint, Source};
use crate::ghz::{Correlations, GhzState, PauliString, LABELS};
use crate::numeric::golden_min;
use crate::witness::{permute_correlations, qubit_state, Partition};
use nalgebra::SMatrix;
use num_complex::Complex64 as C64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

type CMat16 = SMatrix<C64, 16, 16>;

/// Absolute tolerance for negative corrector entries before a construction is rejected.
pub const CORRECTOR_TOL: f64 = 1e-12;
/// Reconstruction tolerance for solved-angle constructions.
pub const RECON_TOL: f64 = 1e-8;

const PERMS: [[usize; 4]; 24] = {
    let mut out = [[0usize; 4]; 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && b != c && a != c {
                    out[n] = [a, b, c, 6 - a - b - c];
                    n += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

/// The 16 Pauli strings (up to sign) that fix every GHZ basis state.
pub const STABILIZERS: [&str; 16] = [
    "IIII", "IIZZ", "IZIZ", "IZZI", "ZIIZ", "ZIZI", "ZZII", "ZZZZ", "XXXX", "XXYY", "XYXY", "XYYX",
    "YXXY", "YXYX", "YYXX", "YYYY",
];

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Seed product state: qubits 1 and 2 single, qubits 3, 4 the pair (basis |00⟩, |01⟩, |10⟩, |11⟩).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Seed {
    pub weight: f64,
    pub a: [C64; 2],
    pub b: [C64; 2],
    pub pair: [C64; 4],
}

impl Seed {
    pub fn new(weight: f64, a: (f64, f64), b: (f64, f64), pair: [C64; 4]) -> Self {
        Seed { weight, a: qubit_state(a.0, a.1), b: qubit_state(b.0, b.1), pair }
    }

    /// The same seed with Z applied to qubit 1: every antidiagonal correlation changes sign.
    pub fn flipped(mut self) -> Self {
        self.a[1] = -self.a[1];
        self
    }

    pub fn vector(&self) -> [C64; 16] {
        let mut v = [C64::new(0.0, 0.0); 16];
        for (g, x) in v.iter_mut().enumerate() {
            let bit = |q: usize| (g >> (3 - q)) & 1;
            *x = self.a[bit(0)] * self.b[bit(1)] * self.pair[2 * bit(2) + bit(3)];
        }
        v
    }

    /// Correlations of the symmetrized seed, per unit weight.
    pub fn correlations(&self) -> [f64; 15] {
        let v = self.vector();
        let mut r = [0.0; 15];
        for (i, ri) in r.iter_mut().enumerate() {
            *ri = expectation(&PauliString::label(i + 1), &v);
        }
        let raw = Correlations::raw(r);
        let mut out = [0.0; 15];
        for p in PERMS {
            let perm = [p[0] + 1, p[1] + 1, p[2] + 1, p[3] + 1];
            let rp = permute_correlations(&raw, perm);
            for i in 0..15 {
                out[i] += rp.values()[i] / 24.0;
            }
        }
        out
    }
}

fn expectation(p: &PauliString, v: &[C64; 16]) -> f64 {
    let mut s = C64::new(0.0, 0.0);
    for (b, x) in v.iter().enumerate() {
        let (b2, ph) = p.apply_basis(b);
        s += v[b2].conj() * ph * x;
    }
    s.re
}

fn pauli1(p: u8, v: [C64; 2]) -> [C64; 2] {
    match p {
        b'X' => [v[1], v[0]],
        b'Y' => [c(0.0, -1.0) * v[1], c(0.0, 1.0) * v[0]],
        b'Z' => [v[0], -v[1]],
        _ => v,
    }
}

fn pauli2(p: u8, q: u8, v: [C64; 4]) -> [C64; 4] {
    // first factor acts on the high bit
    let hi0 = pauli1(p, [v[0], v[2]]);
    let hi1 = pauli1(p, [v[1], v[3]]);
    let w = [hi0[0], hi1[0], hi0[1], hi1[1]];
    let lo0 = pauli1(q, [w[0], w[1]]);
    let lo1 = pauli1(q, [w[2], w[3]]);
    [lo0[0], lo0[1], lo1[0], lo1[1]]
}

/// Bloch angles `(θ, φ)` of a single-qubit vector, global phase dropped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bloch {
    pub theta: f64,
    pub phi: f64,
}

impl Bloch {
    pub fn from_vector(v: [C64; 2]) -> Self {
        let theta = 2.0 * v[1].norm().atan2(v[0].norm());
        let phi = if v[0].norm() < 1e-300 || v[1].norm() < 1e-300 { 0.0 } else { v[1].arg() - v[0].arg() };
        Bloch { theta, phi }
    }

    pub fn vector(&self) -> [C64; 2] {
        qubit_state(self.theta, self.phi)
    }
}

/// One weighted product state `|a⟩|b⟩|pair⟩` for a 1|1|2 partition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductTerm {
    pub weight: f64,
    pub partition: Partition,
    /// State of the lower-numbered single qubit.
    pub first: Bloch,
    pub second: Bloch,
    /// Pair state over the partition's pair `(i, j)`, `i < j`, basis |00⟩, |01⟩, |10⟩, |11⟩.
    pub pair: [C64; 4],
}

impl ProductTerm {
    pub fn vector(&self) -> [C64; 16] {
        let (s1, s2) = self.partition.singles();
        let (p1, p2) = self.partition.pair;
        let a = self.first.vector();
        let b = self.second.vector();
        let mut v = [C64::new(0.0, 0.0); 16];
        for (g, x) in v.iter_mut().enumerate() {
            let bit = |q: usize| (g >> (4 - q)) & 1;
            *x = a[bit(s1)] * b[bit(s2)] * self.pair[2 * bit(p1) + bit(p2)];
        }
        v
    }

    pub fn pair_norm(&self) -> f64 {
        self.pair.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Serialize for ProductTerm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ProductTerm", 5)?;
        st.serialize_field("weight", &self.weight)?;
        st.serialize_field("partition", &self.partition.name())?;
        st.serialize_field("first", &self.first)?;
        st.serialize_field("second", &self.second)?;
        let pair: Vec<[f64; 2]> = self.pair.iter().map(|z| [z.re, z.im]).collect();
        st.serialize_field("pair", &pair)?;
        st.end()
    }
}

/// All 384 images of a seed, merged where they coincide.
pub fn expand_seed(seed: &Seed) -> Vec<ProductTerm> {
    let mut out = Vec::with_capacity(384);
    let w = seed.weight / (24.0 * 16.0);
    for perm in PERMS {
        for g in STABILIZERS {
            let g = g.as_bytes();
            let a = pauli1(g[perm[0]], seed.a);
            let b = pauli1(g[perm[1]], seed.b);
            let mut pair = pauli2(g[perm[2]], g[perm[3]], seed.pair);
            let (mut first, mut second) = (a, b);
            if perm[0] > perm[1] {
                std::mem::swap(&mut first, &mut second);
            }
            if perm[2] > perm[3] {
                pair.swap(1, 2);
            }
            let partition = Partition::new(perm[2] + 1, perm[3] + 1).unwrap();
            out.push(ProductTerm {
                weight: w,
                partition,
                first: Bloch::from_vector(first),
                second: Bloch::from_vector(second),
                pair: normalize_phase(pair),
            });
        }
    }
    merge_terms(out)
}

fn normalize_phase(v: [C64; 4]) -> [C64; 4] {
    let k = (0..4).max_by(|&i, &j| v[i].norm().partial_cmp(&v[j].norm()).unwrap()).unwrap();
    let ph = C64::from_polar(1.0, -v[k].arg());
    v.map(|z| z * ph)
}

fn merge_terms(terms: Vec<ProductTerm>) -> Vec<ProductTerm> {
    let key = |t: &ProductTerm| {
        let q = |x: f64| (x * 1e9).round() as i64;
        let vecs = [t.first.vector(), t.second.vector()];
        let mut k = vec![t.partition.index() as i64];
        for v in vecs {
            let v = normalize_phase([v[0], v[1], C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
            k.extend([q(v[0].re), q(v[0].im), q(v[1].re), q(v[1].im)]);
        }
        for z in t.pair {
            k.extend([q(z.re), q(z.im)]);
        }
        k
    };
    let mut idx: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut out: Vec<ProductTerm> = Vec::new();
    for t in terms {
        let k = key(&t);
        match idx.get(&k) {
            Some(&i) => out[i].weight += t.weight,
            None => {
                idx.insert(k, out.len());
                out.push(t);
            }
        }
    }
    out
}

/// Computational basis product state `|b⟩` as a term for partition 1|2|34.
pub fn basis_term(b: usize, weight: f64) -> ProductTerm {
    let bit = |q: usize| (b >> (3 - q)) & 1;
    let single = |x: usize| Bloch { theta: if x == 0 { 0.0 } else { PI }, phi: 0.0 };
    let mut pair = [C64::new(0.0, 0.0); 4];
    pair[2 * bit(2) + bit(3)] = C64::new(1.0, 0.0);
    ProductTerm { weight, partition: Partition { pair: (3, 4) }, first: single(bit(0)), second: single(bit(1)), pair }
}

/// Symmetrized correlations of a weighted seed list (weights not normalized).
pub fn seeds_correlations(seeds: &[Seed]) -> [f64; 15] {
    let mut r = [0.0; 15];
    for s in seeds {
        let rs = s.correlations();
        for i in 0..15 {
            r[i] += s.weight * rs[i];
        }
    }
    r
}

fn z_sign(label: usize, b: usize) -> f64 {
    let l = LABELS[label].as_bytes();
    let mut s = 1.0;
    for q in 0..4 {
        if l[q] == b'Z' && (b >> (3 - q)) & 1 == 1 {
            s = -s;
        }
    }
    s
}

/// Computational diagonal `⟨b|ρ|b⟩` of a GHZ-diagonal operator with trace `tr` and correlations `r`.
pub fn diagonal(tr: f64, r: &[f64; 15]) -> [f64; 16] {
    let mut d = [0.0; 16];
    for (b, x) in d.iter_mut().enumerate() {
        *x = (tr + (0..7).map(|i| r[i] * z_sign(i, b)).sum::<f64>()) / 16.0;
    }
    d
}

/// A triseparable decomposition of a target state.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub segment: String,
    pub target: GhzState,
    pub seeds: Vec<Seed>,
    pub terms: Vec<ProductTerm>,
    /// Weights of the diagonal corrector on |0000⟩ … |1111⟩.
    pub corrector: [f64; 16],
    pub params: BTreeMap<String, f64>,
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Decomposition", 5)?;
        st.serialize_field("segment", &self.segment)?;
        st.serialize_field("target", &self.target.probs().to_vec())?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("corrector", &self.corrector.to_vec())?;
        st.serialize_field("terms", &self.terms)?;
        st.end()
    }
}

/// Builds the decomposition from seeds and fills the diagonal with the corrector.
pub fn assemble(segment: &str, target: GhzState, seeds: Vec<Seed>, params: BTreeMap<String, f64>) -> Result<Decomposition> {
    let rs = seeds_correlations(&seeds);
    let tr: f64 = seeds.iter().map(|s| s.weight).sum();
    if seeds.iter().any(|s| s.weight < 0.0) || tr > 1.0 + 1e-12 {
        return Err(Error::Infeasible(format!("seed weights invalid (total {tr})")));
    }
    let rt = target.correlations();
    let dt = diagonal(1.0, rt.values());
    let ds = diagonal(tr, &rs);
    let mut corrector = [0.0; 16];
    for b in 0..16 {
        let x = dt[b] - ds[b];
        if x < -CORRECTOR_TOL {
            return Err(Error::Infeasible(format!(
                "diagonal corrector entry {x:.3e} at |{b:04b}> is negative"
            )));
        }
        corrector[b] = x.max(0.0);
    }
    let mut terms: Vec<ProductTerm> = seeds.iter().flat_map(expand_seed).collect();
    for (b, &w) in corrector.iter().enumerate() {
        if w > 0.0 {
            terms.push(basis_term(b, w));
        }
    }
    Ok(Decomposition { segment: segment.to_string(), target, seeds, terms, corrector, params })
}

/// Outcome of [`verify`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub terms: usize,
    pub weight_sum: f64,
    pub min_weight: f64,
    pub max_norm_error: f64,
    /// Largest entrywise deviation of the assembled matrix from the target.
    pub residual: f64,
    pub weights_ok: bool,
    pub ok: bool,
}

pub fn assembled_matrix(terms: &[ProductTerm]) -> CMat16 {
    let mut m = CMat16::zeros();
    for t in terms {
        let v = t.vector();
        for i in 0..16 {
            if v[i].norm_sqr() == 0.0 {
                continue;
            }
            let wi = v[i] * t.weight;
            for j in 0..16 {
                m[(i, j)] += wi * v[j].conj();
            }
        }
    }
    m
}

pub fn verify(dec: &Decomposition) -> VerifyReport {
    let weight_sum: f64 = dec.terms.iter().map(|t| t.weight).sum();
    let min_weight = dec.terms.iter().map(|t| t.weight).fold(f64::INFINITY, f64::min);
    let max_norm_error = dec
        .terms
        .iter()
        .map(|t| {
            let n1: f64 = t.first.vector().iter().map(|z| z.norm_sqr()).sum();
            let n2: f64 = t.second.vector().iter().map(|z| z.norm_sqr()).sum();
            (n1.sqrt() - 1.0).abs().max((n2.sqrt() - 1.0).abs()).max((t.pair_norm() - 1.0).abs())
        })
        .fold(0.0, f64::max);
    let m = assembled_matrix(&dec.terms);
    let target = dec.target.density_matrix();
    let residual = (m - target.0).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let weights_ok = min_weight >= 0.0 && (weight_sum - 1.0).abs() < 1e-10;
    let ok = weights_ok && max_norm_error < 1e-12 && residual < RECON_TOL;
    VerifyReport { terms: dec.terms.len(), weight_sum, min_weight, max_norm_error, residual, weights_ok, ok }
}

fn bell(kind: &str, phase: f64) -> [C64; 4] {
    let e = C64::from_polar(FRAC_1_SQRT_2, phase);
    let z = C64::new(0.0, 0.0);
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    match kind {
        "00" => [h, z, z, e],
        _ => [z, h, e, z],
    }
}

fn state_from(r: [f64; 15]) -> GhzState {
    crate::ghz::state_from_correlations(&Correlations::raw(r)).expect("closed form is a state")
}

fn family_r(d: f64, r7: f64, r8: f64, r9: f64, r15: f64) -> [f64; 15] {
    let mut r = [d; 15];
    r[6] = r7;
    r[7] = r8;
    r[8..14].iter_mut().for_each(|x| *x = r9);
    r[14] = r15;
    r
}

/// The eight sign and shift variants of the criterion-I seed, total weight `w`.
pub fn rho1_seeds(phi1: f64, phi2: f64, w: f64) -> Vec<Seed> {
    let mut out = Vec::with_capacity(8);
    for k0 in 0..2 {
        for k1 in 0..2 {
            for k2 in 0..2 {
                let sg = if k0 == 0 { 1.0 } else { -1.0 };
                let a = sg * (phi1 + k1 as f64 * PI);
                let b = sg * (phi2 + k2 as f64 * PI);
                out.push(Seed::new(w / 8.0, (FRAC_PI_2, a), (FRAC_PI_2, b), bell("00", -(a + b))));
            }
        }
    }
    out
}

/// `ϱ̄₁(φ₁, φ₂)` in closed form.
pub fn rho1_bar(phi1: f64, phi2: f64) -> GhzState {
    let (cp, cm) = ((phi1 + phi2).cos(), (phi1 - phi2).cos());
    let sp2 = (phi1 + phi2).sin().powi(2);
    state_from(family_r(1.0 / 6.0, 0.0, 0.5 * (cp * cp + cp * cm), -(1.0 + sp2) / 6.0, 0.5 * (cp * cp - cp * cm)))
}

/// `ϱ̄₁` from its product terms.
pub fn rho1_bar_from_terms(phi1: f64, phi2: f64) -> GhzState {
    state_from(seeds_correlations(&rho1_seeds(phi1, phi2, 1.0)))
}

/// `ϱ̄₂₃(θ, φ)` (`upper = true`) or `ϱ̄₄₅(θ, φ)` in closed form.
pub fn rho23_45_bar(theta: f64, phi: f64, upper: bool) -> GhzState {
    let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
    let sg = if upper { 1.0 } else { -1.0 };
    state_from(family_r(sg * (1.0 + c2) / 6.0, c2, s2 * phi.cos().powi(2), -sg * s2 / 6.0, s2 * phi.sin().powi(2)))
}

fn theta_variants(theta: f64) -> [f64; 4] {
    [theta, -theta, theta + PI, -theta + PI]
}

/// Seeds of `ϱ̄₂₃` or `ϱ̄₄₅`, four θ variants each of the two eigenvector cases.
pub fn rho23_45_seeds(theta: f64, phi: f64, upper: bool, w: f64) -> Vec<Seed> {
    let mut out = Vec::with_capacity(8);
    for t in theta_variants(theta) {
        let pair = |k: &str, ph: f64| bell(k, ph);
        if upper {
            out.push(Seed::new(w / 8.0, (t, phi), (t, -phi), pair("00", 0.0)));
            out.push(Seed::new(w / 8.0, (t, phi), (t, PI - phi), pair("00", PI)));
        } else {
            out.push(Seed::new(w / 8.0, (t, phi), (t + PI, phi), pair("01", PI)));
            out.push(Seed::new(w / 8.0, (t, phi), (t + PI, phi + PI), pair("01", 0.0)));
        }
    }
    out
}

/// Seeds for the `K ≥ 5` lines: antidiagonal `(−cos²φ, ±cos2φ/6, sin²φ)·sin²θ`.
pub fn rho_k5_seeds(theta: f64, phi: f64, upper: bool, w: f64) -> Vec<Seed> {
    if upper {
        vec![Seed::new(w, (theta, phi), (theta, phi + PI), bell("00", 0.0))]
    } else {
        vec![Seed::new(w, (theta, phi), (theta - PI, -phi), bell("01", 0.0))]
    }
}

/// `r₀..r₃` of the criterion-III seed.
pub fn r_params(phi1: f64, phi2: f64, phi3: f64) -> [f64; 4] {
    let (c1, s1, c2, s2, c3, s3) = (phi1.cos(), phi1.sin(), phi2.cos(), phi2.sin(), phi3.cos(), phi3.sin());
    [c1 * c2 * c3, c1 * s2 * s3, s1 * c2 * s3, s1 * s2 * c3]
}

/// `ϱ̄₇(θ, φ₁, φ₂, φ₃)` in closed form.
pub fn rho7_bar(theta: f64, phi1: f64, phi2: f64, phi3: f64) -> GhzState {
    let [r0, r1, r2, r3] = r_params(phi1, phi2, phi3);
    let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
    state_from(family_r((1.0 + c2) / 6.0, c2, s2 * r0, s2 * (-r0 + r3 + 2.0 * r1 + 2.0 * r2) / 6.0, -s2 * r3))
}

pub fn rho7_seeds(theta: f64, phi1: f64, phi2: f64, phi3: f64, w: f64) -> Vec<Seed> {
    let variants = [
        (phi1, phi2, phi3),
        (phi1 + PI, phi2, phi3 + PI),
        (-phi1, -phi2, -phi3),
        (-phi1 + PI, -phi2, -phi3 + PI),
    ];
    let mut out = Vec::with_capacity(16);
    for (a, b, p3) in variants {
        for t in theta_variants(theta) {
            out.push(Seed::new(w / 16.0, (t, a), (t, b), bell("00", p3)));
        }
    }
    out
}

/// `ϱ̄₈(θ)` in closed form.
pub fn rho8_bar(theta: f64) -> GhzState {
    let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
    state_from(family_r(-(1.0 + c2) / 6.0, c2, -s2, -s2 / 6.0, 0.0))
}

pub fn rho8_seeds(theta: f64, w: f64) -> Vec<Seed> {
    [0.0, PI]
        .iter()
        .map(|&p3| {
            let b = [C64::new(-(theta / 2.0).sin(), 0.0), C64::from_polar((theta / 2.0).cos(), p3)];
            Seed { weight: w / 2.0, a: qubit_state(theta, 0.0), b, pair: bell("01", -p3) }
        })
        .collect()
}

fn flip_all(seeds: Vec<Seed>, flip: bool) -> Vec<Seed> {
    if flip { seeds.into_iter().map(Seed::flipped).collect() } else { seeds }
}

fn target_of(pt: &FamilyPoint) -> Result<GhzState> {
    pt.to_state()
}

/// Criterion-I lines: `ρ = (1 − κ)ρ′ + κϱ̄₁` with `ρ′` diagonal.
pub fn decompose_line_ab_fg(pt: &FamilyPoint) -> Result<Decomposition> {
    let target = target_of(pt)?;
    let cp2 = (6.0 * pt.v - pt.alpha + 4.0) / (2.0 * (7.0 - pt.alpha));
    let lo = ((41f64.sqrt() - 3.0) / 8.0).powi(2);
    if !(lo - 1e-12..=1.0 + 1e-12).contains(&cp2) || !cp2.is_finite() {
        return Err(Error::Domain(format!("cos²φ₊ = {cp2} outside [{lo}, 1]")));
    }
    let cp = cp2.clamp(lo, 1.0).sqrt();
    let cm = ((4.0 * cp * cp - 2.0) / (3.0 * cp)).clamp(-1.0, 1.0);
    let (fp, fm) = (cp.acos(), cm.acos());
    let (phi1, phi2) = (0.5 * (fp + fm), 0.5 * (fp - fm));
    let kappa = 4.0 * (pt.alpha - 7.0).abs() * pt.c() / pt.alpha;
    let seeds = flip_all(rho1_seeds(phi1, phi2, kappa), pt.alpha < 7.0);
    let params = BTreeMap::from([
        ("kappa".to_string(), kappa),
        ("cos2_phi_plus".to_string(), cp2),
        ("cos_phi_minus".to_string(), cm),
        ("phi1".to_string(), phi1),
        ("phi2".to_string(), phi2),
    ]);
    assemble(if pt.alpha < 7.0 { "FG" } else { "AB" }, target, seeds, params)
}

/// Criterion-II lines. All seeds are equatorial; the four sign cases of `(R₈, R₁₅)` pick the
/// eigenvector family, and `R₉ = −R₁₅` fixes the mixing.
pub fn decompose_line_ii(pt: &FamilyPoint, label: &str) -> Result<Decomposition> {
    let target = target_of(pt)?;
    let r = pt.correlations();
    let (r8, r15) = (r.get(8), r.get(15));
    let flip = r15 < 0.0 || (r15 == 0.0 && r8 < 0.0);
    let (t8, t15) = if flip { (-r8, -r15) } else { (r8, r15) };
    let mut params = BTreeMap::new();
    let seeds = if t8 >= 0.0 {
        // ϱ̄₂₃ / ϱ̄₄₅ mixture
        let a = 0.5 * (t8 + 7.0 * t15);
        let b = 0.5 * (t8 - 5.0 * t15);
        if b < -1e-14 {
            return Err(Error::Infeasible(format!("R8/R15 = {} below 5", t8 / t15)));
        }
        let b = b.max(0.0);
        let phi = (t8 / (t8 + t15)).sqrt().acos();
        params.insert("p".into(), a / (a + b));
        params.insert("cos2_theta".into(), 0.0);
        params.insert("cos2_phi".into(), t8 / (t8 + t15));
        let mut s = rho23_45_seeds(FRAC_PI_2, phi, true, a);
        s.extend(rho23_45_seeds(FRAC_PI_2, phi, false, b));
        s
    } else {
        let k = -t8 / t15;
        if k < 5.0 - 1e-12 {
            return Err(Error::Infeasible(format!("K = {k} below 5")));
        }
        let y = (0.5 * (t8 + 7.0 * t15)).clamp(0.0, t15);
        let y2 = t15 - y;
        let x = 0.5 * (-t8 - 7.0 * t15) + y;
        let x2 = -t8 - x;
        if x < -1e-14 || x2 < -1e-14 {
            return Err(Error::Infeasible(format!("K = {k}: negative amounts {x}, {x2}")));
        }
        let (x, x2) = (x.max(0.0), x2.max(0.0));
        let (wa, wb) = (x + y, x2 + y2);
        let ang = |xx: f64, w: f64| if w > 0.0 { (xx / w).clamp(0.0, 1.0).sqrt().acos() } else { 0.0 };
        params.insert("p".into(), wa / (wa + wb));
        params.insert("K".into(), k);
        let mut s = rho_k5_seeds(FRAC_PI_2, ang(x, wa), true, wa);
        s.extend(rho_k5_seeds(FRAC_PI_2, ang(x2, wb), false, wb));
        s
    };
    params.insert("flipped".into(), if flip { 1.0 } else { 0.0 });
    let seeds: Vec<Seed> = flip_all(seeds, flip).into_iter().filter(|s| s.weight > 0.0).collect();
    assemble(label, target, seeds, params)
}

/// Smallest seed weight reproducing antidiagonal `(R₈, S, R₁₅)` with one equatorial criterion-III seed.
pub fn r1_prime(r8: f64, s: f64, r15: f64) -> f64 {
    let p = r8 * r15;
    if p >= 0.0 {
        return if s == 0.0 && p == 0.0 { (r8 - r15).abs() } else { f64::INFINITY };
    }
    (r8 - r15).abs() * (1.0 - s * s / (16.0 * p)).max(0.0).sqrt()
}

/// Angles `(φ, φ₃)` with `φ₁ = φ₂ = φ` such that `A·(r₀, r₁, r₃) = (R₈, S/4, −R₁₅)`.
fn solve_rho7_angles(r8: f64, s: f64, r15: f64, a: f64) -> (f64, f64) {
    let (r0, r1, r3) = (r8 / a, s / (4.0 * a), -r15 / a);
    let c3 = (r0 + r3).clamp(-1.0, 1.0);
    let c2phi = if c3.abs() > 1e-300 { ((r0 - r3) / c3).clamp(-1.0, 1.0) } else { 1.0 };
    let phi = 0.5 * c2phi.acos();
    let s3 = r1.signum() * (1.0 - c3 * c3).max(0.0).sqrt();
    (phi, s3.atan2(c3))
}

/// Criterion-III curves: a single equatorial `ϱ̄₇` plus the diagonal corrector.
pub fn decompose_curve_bc(pt: &FamilyPoint, label: &str) -> Result<Decomposition> {
    let target = target_of(pt)?;
    let r = pt.correlations();
    let (r8, r15, s) = (r.get(8), r.get(15), antidiag_sum(&r));
    let a = r1_prime(r8, s, r15);
    if !a.is_finite() || a > 1.0 + 1e-12 {
        return Err(Error::Infeasible(format!("criterion-III weight {a}")));
    }
    let margin = 1.0 - r.get(7).abs() - a;
    if margin > 1e-8 {
        return Err(Error::Domain(format!("criterion III holds strictly (margin {margin:.3e}); no equality decomposition")));
    }
    let (phi, phi3) = solve_rho7_angles(r8, s, r15, a);
    let params = BTreeMap::from([
        ("sin2_theta".to_string(), a),
        ("phi".to_string(), phi),
        ("phi3".to_string(), phi3),
    ]);
    assemble(label, target, rho7_seeds(FRAC_PI_2, phi, phi, phi3, a), params)
}

/// Weight `e ≥ 0` of `ϱ̄₈` (sign `eps`) minimizing `e + R̃′₁` of the remainder.
fn best_eta(r8: f64, s: f64, r15: f64, eps: f64, cap: f64) -> (f64, f64) {
    let f = |e: f64| e + r1_prime(r8 + eps * e, s + 2.0 * eps * e, r15);
    let n = 2000;
    let h = cap / n as f64;
    let mut best = (0.0, f(0.0));
    for i in 0..=n {
        let e = h * i as f64;
        let v = f(e);
        if v < best.1 {
            best = (e, v);
        }
    }
    let g = |e: f64| {
        let v = f(e);
        if v.is_finite() { v } else { f64::INFINITY }
    };
    let (e, v) = golden_min(g, (best.0 - h).max(0.0), best.0 + h, 1e-13);
    if v <= best.1 { (e, v) } else { best }
}

/// Criterion-IV curves: `ϱ̄₇` mixed with `ϱ̄₈` plus the diagonal corrector.
pub fn decompose_curve_cd_point(pt: &FamilyPoint, label: &str) -> Result<Decomposition> {
    let target = target_of(pt)?;
    let r = pt.correlations();
    let (r8, r15, s) = (r.get(8), r.get(15), antidiag_sum(&r));
    let d = 1.0 - r.get(7).abs();
    let cands = [1.0, -1.0].map(|eps| (eps, best_eta(r8, s, r15, eps, d)));
    let (eps, (e, total)) = cands.into_iter().min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap()).unwrap();
    if total > d + 1e-9 {
        return Err(Error::Infeasible(format!("eta construction needs {total} > 1 - |R7| = {d}")));
    }
    let (q8, qs) = (r8 + eps * e, s + 2.0 * eps * e);
    let a = r1_prime(q8, qs, r15);
    let (phi, phi3) = solve_rho7_angles(q8, qs, r15, a);
    let mut seeds = rho7_seeds(FRAC_PI_2, phi, phi, phi3, a);
    seeds.extend(flip_all(rho8_seeds(FRAC_PI_2, e), eps < 0.0));
    let seeds: Vec<Seed> = seeds.into_iter().filter(|x| x.weight > 0.0).collect();
    let params = BTreeMap::from([
        ("eta".to_string(), e / (a + e)),
        ("rho7_weight".to_string(), a),
        ("rho8_weight".to_string(), e),
        ("phi".to_string(), phi),
        ("phi3".to_string(), phi3),
    ]);
    assemble(label, target, seeds, params)
}

/// CD-curve state at `K` (criterion-IV parametrization) and its decomposition.
pub fn decompose_curve_cd(k: f64, p16: f64) -> Result<Decomposition> {
    let c = crate::family::point_c(p16)?;
    if k < c.k - 1e-9 {
        return Err(Error::Infeasible(format!("negative eta: K = {k} below K_C = {}", c.k)));
    }
    let (v, alpha) = crate::family::cd_curve(k)?;
    decompose_curve_cd_point(&FamilyPoint::new(p16, v, alpha)?, "CD")
}

/// Dispatches on the boundary source.
pub fn decompose(pt: &FamilyPoint, source: Source, label: &str) -> Result<Decomposition> {
    match source {
        Source::I => decompose_line_ab_fg(pt),
        Source::II | Source::Physical => decompose_line_ii(pt, label),
        Source::III => decompose_curve_bc(pt, label),
        Source::IV => decompose_curve_cd_point(pt, label),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: &GhzState, b: &GhzState, tol: f64) {
        let d = a.correlations().max_abs_diff(&b.correlations());
        assert!(d < tol, "{d:e}\n{:?}\n{:?}", a.correlations(), b.correlations());
    }

    #[test]
    fn perms_are_distinct() {
        let mut p = PERMS.to_vec();
        p.sort();
        p.dedup();
        assert_eq!(p.len(), 24);
    }

    #[test]
    fn stabilizers_fix_ghz_basis() {
        for g in STABILIZERS {
            let p = PauliString::parse(g).unwrap();
            for j in 1..=16 {
                let v = crate::ghz::ghz_basis_state(j).unwrap();
                let e = expectation(&p, &v);
                assert!((e.abs() - 1.0).abs() < 1e-12, "{g} {j}");
            }
        }
    }

    #[test]
    fn rho1_examples() {
        let r = rho1_bar(0.0, 0.0).correlations();
        assert!((r.get(8) - 1.0).abs() < 1e-12 && r.get(15).abs() < 1e-12 && (r.get(9) + 1.0 / 6.0).abs() < 1e-12);
        let r = rho1_bar(FRAC_PI_2, 0.0).correlations();
        assert!(r.get(8).abs() < 1e-12 && r.get(15).abs() < 1e-12 && (r.get(9) + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_match_product_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let a: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-PI..PI));
            close(&rho1_bar(a[0], a[1]), &rho1_bar_from_terms(a[0], a[1]), 1e-12);
            for up in [true, false] {
                let s = state_from(seeds_correlations(&rho23_45_seeds(a[0], a[1], up, 1.0)));
                close(&rho23_45_bar(a[0], a[1], up), &s, 1e-12);
            }
            let s = state_from(seeds_correlations(&rho7_seeds(a[0], a[1], a[2], a[3], 1.0)));
            close(&rho7_bar(a[0], a[1], a[2], a[3]), &s, 1e-12);
            close(&rho8_bar(a[0]), &state_from(seeds_correlations(&rho8_seeds(a[0], 1.0))), 1e-12);
        }
    }

    #[test]
    fn k5_seed_correlations() {
        let (th, ph): (f64, f64) = (0.7, 0.4);
        let u = th.sin().powi(2);
        for (up, sg) in [(true, 1.0), (false, -1.0)] {
            let r = seeds_correlations(&rho_k5_seeds(th, ph, up, 1.0));
            assert!((r[0] - sg * (1.0 + th.cos().powi(2)) / 6.0).abs() < 1e-12);
            assert!((r[7] + u * ph.cos().powi(2)).abs() < 1e-12);
            assert!((r[8] - sg * u * (2.0 * ph).cos() / 6.0).abs() < 1e-12);
            assert!((r[14] - u * ph.sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn rho7_r_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let (p, p3): (f64, f64) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
            let [r0, r1, r2, r3] = r_params(p, p, p3);
            assert!((r1 - r2).abs() < 1e-12);
            assert!(((r0 + r3).powi(2) * (r0 * r3 + r1 * r1) - r0 * r3).abs() < 1e-12);
        }
    }

    #[test]
    fn rho8_theta_half_pi() {
        let r = rho8_bar(FRAC_PI_2).correlations();
        assert!(r.get(7).abs() < 1e-12 && (r.get(8) + 1.0).abs() < 1e-12 && r.get(15).abs() < 1e-12);
    }

    #[test]
    fn single_term_verifies() {
        let t = basis_term(5, 1.0);
        let mut p = [0.0; 16];
        p[0] = 1.0;
        let dec = Decomposition {
            segment: "x".into(),
            target: GhzState::new(p).unwrap(),
            seeds: vec![],
            terms: vec![t],
            corrector: [0.0; 16],
            params: BTreeMap::new(),
        };
        let m = assembled_matrix(&dec.terms);
        assert!((m[(5, 5)].re - 1.0).abs() < 1e-15);
        let mut bad = dec.clone();
        bad.terms[0].weight = 0.7;
        assert!(!verify(&bad).weights_ok);
    }

    #[test]
    fn ab_examples() {
        let a = FamilyPoint::new(0.0, 1.0 / 6.0, 9.0).unwrap();
        let d = decompose_line_ab_fg(&a).unwrap();
        assert!((d.params["cos2_phi_plus"] - 1.0).abs() < 1e-12);
        let lo = ((41f64.sqrt() - 3.0) / 8.0).powi(2);
        let b = FamilyPoint::new(0.3, (5.0 + 41f64.sqrt()) / 16.0, 9.0).unwrap();
        let d = decompose_line_ab_fg(&b).unwrap();
        assert!((d.params["cos2_phi_plus"] - lo).abs() < 1e-12);
        assert!((d.params["kappa"] - 8.0 * 0.4 / 9.0).abs() < 1e-12);
        assert!(verify(&d).ok, "{:?}", verify(&d));
    }

    #[test]
    fn ah_mixing_matches_paper() {
        for v in [0.02, 0.1, 1.0 / 6.0] {
            let pt = FamilyPoint::new(0.0, v, 8.0 + 6.0 * v).unwrap();
            let d = decompose_line_ii(&pt, "AH").unwrap();
            assert!((d.params["p"] - (3.0 * v + 0.5)).abs() < 1e-12);
            let rep = verify(&d);
            assert!(rep.ok, "{rep:?}");
            let r = pt.correlations();
            assert!((r.get(7) + r.get(8) + r.get(15) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fig2_ef_mixing() {
        for v in [5.0 / 6.0, 0.9, 1.0] {
            let pt = FamilyPoint::new(0.3, v, 6.0 * v).unwrap();
            let d = decompose_line_ii(&pt, "EF").unwrap();
            assert!((d.params["p"] - (7.0 - 6.0 * v) / 2.0).abs() < 1e-12, "{:?}", d.params);
            assert!(verify(&d).ok);
        }
    }

    #[test]
    fn interior_bc_point_is_rejected() {
        let pt = FamilyPoint::new(0.3, 0.74, 8.8).unwrap();
        assert!(crate::criteria::criterion_iii(&pt.correlations()).margin > 1e-3);
        assert!(matches!(decompose_curve_bc(&pt, "BC"), Err(Error::Domain(_))));
    }

    #[test]
    fn cd_below_c_is_rejected() {
        let c = crate::family::point_c(0.3).unwrap();
        assert!(decompose_curve_cd(c.k - 0.05, 0.3).is_err());
        let d = decompose_curve_cd(c.k, 0.3).unwrap();
        assert!(d.params["eta"].abs() < 1e-6);
        assert!(verify(&d).ok);
    }

    #[test]
    fn cd_eta_matches_family_eta() {
        let d = decompose_curve_cd(2.0, 0.3).unwrap();
        let s = crate::family::eta_of_k(2.0, 0.3).unwrap();
        assert!((d.params["eta"] - s.eta).abs() < 1e-6, "{} {}", d.params["eta"], s.eta);
        assert!(verify(&d).ok);
    }
}
