//! Witness operators `M̂ = Σ M_i P_i`, the K transform, the reduced X-matrix and the
//! maximal expectation Λ over tripartite product states.

use crate::error::{Error, Result};
use crate::ghz::{label_index, Correlations, GhzState, PauliString, LABELS};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Coefficients M_1..M_15.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessParams {
    m: [f64; 15],
}

impl WitnessParams {
    pub fn new(m: [f64; 15]) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("witness coefficients must be finite".into()));
        }
        if m.iter().all(|&x| x == 0.0) {
            return Err(Error::Invalid("witness coefficients are all zero".into()));
        }
        Ok(WitnessParams { m })
    }

    /// No validation; the zero witness is allowed.
    pub fn raw(m: [f64; 15]) -> Self {
        WitnessParams { m }
    }

    pub fn from_slice(m: &[f64]) -> Result<Self> {
        let arr: [f64; 15] = m
            .try_into()
            .map_err(|_| Error::Invalid(format!("expected 15 coefficients, got {}", m.len())))?;
        Self::new(arr)
    }

    /// Symmetric witness from its four free antidiagonal values and M_7.
    pub fn symmetric(m7: f64, m8: f64, m9: f64, m15: f64) -> Self {
        let mut m = [0.0; 15];
        m[6] = m7;
        m[7] = m8;
        m[8..14].iter_mut().for_each(|x| *x = m9);
        m[14] = m15;
        WitnessParams { m }
    }

    /// M_7 = 2, M_8 = M_15 = 1, M_9..M_14 = -1.
    pub fn werner() -> Self {
        Self::symmetric(2.0, 1.0, -1.0, 1.0)
    }

    pub fn get(&self, i: usize) -> f64 {
        self.m[i - 1]
    }

    pub fn set(&mut self, i: usize, v: f64) {
        self.m[i - 1] = v;
    }

    pub fn values(&self) -> &[f64; 15] {
        &self.m
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut m = self.m;
        m.iter_mut().for_each(|x| *x *= c);
        WitnessParams { m }
    }

    pub fn expectation(&self, r: &Correlations) -> f64 {
        self.m.iter().zip(r.values()).map(|(a, b)| a * b).sum()
    }

    /// Antidiagonal part of the expectation, indices 8..15.
    pub fn antidiag_expectation(&self, r: &Correlations) -> f64 {
        (8..=15).map(|i| self.get(i) * r.get(i)).sum()
    }

    pub fn diagonal_vanishes(&self, tol: f64) -> bool {
        self.m[..6].iter().all(|x| x.abs() <= tol)
    }

    /// Checks M_1 = .. = M_6 = 0 and M_9 = .. = M_14, reporting the first failure.
    pub fn check_symmetric(&self, tol: f64) -> Result<()> {
        let scale = 1.0 + self.m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        for i in 1..=6 {
            if self.get(i).abs() > tol * scale {
                return Err(Error::AssumptionViolation(format!("M_{i} = {} is not zero", self.get(i))));
            }
        }
        for i in 10..=14 {
            if (self.get(i) - self.get(9)).abs() > tol * scale {
                return Err(Error::AssumptionViolation(format!(
                    "M_{i} = {} differs from M_9 = {}",
                    self.get(i),
                    self.get(9)
                )));
            }
        }
        Ok(())
    }
}

/// K_0..K_15.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KCoefficients {
    pub k: [f64; 16],
}

impl KCoefficients {
    /// Sector 1 is (K_8, K_10, K_12, K_14), sector 2 is (K_9, K_11, K_13, K_15).
    pub fn sector(&self, which: u8) -> [f64; 4] {
        let o = if which == 1 { 8 } else { 9 };
        [self.k[o], self.k[o + 2], self.k[o + 4], self.k[o + 6]]
    }
}

pub fn k_from_m(w: &WitnessParams) -> KCoefficients {
    let m = |i: usize| w.get(i);
    let mut k = [0.0; 16];
    k[0] = m(1);
    k[1] = -m(1);
    k[2] = m(2) + m(3);
    k[3] = m(2) - m(3);
    k[4] = m(4) + m(5);
    k[5] = m(4) - m(5);
    k[6] = m(6) + m(7);
    k[7] = m(6) - m(7);
    k[8] = m(8) - m(9);
    k[9] = m(8) + m(9);
    k[10] = m(10) + m(11);
    k[11] = m(10) - m(11);
    k[12] = m(12) + m(13);
    k[13] = m(12) - m(13);
    k[14] = m(14) - m(15);
    k[15] = m(14) + m(15);
    KCoefficients { k }
}

/// Inverse of [`k_from_m`]. `K_1` is implied by `K_0` and ignored.
pub fn m_from_k(kc: &KCoefficients) -> WitnessParams {
    let k = &kc.k;
    let mut m = [0.0; 15];
    m[0] = k[0];
    m[1] = 0.5 * (k[2] + k[3]);
    m[2] = 0.5 * (k[2] - k[3]);
    m[3] = 0.5 * (k[4] + k[5]);
    m[4] = 0.5 * (k[4] - k[5]);
    m[5] = 0.5 * (k[6] + k[7]);
    m[6] = 0.5 * (k[6] - k[7]);
    m[7] = 0.5 * (k[8] + k[9]);
    m[8] = 0.5 * (k[9] - k[8]);
    m[9] = 0.5 * (k[10] + k[11]);
    m[10] = 0.5 * (k[10] - k[11]);
    m[11] = 0.5 * (k[12] + k[13]);
    m[12] = 0.5 * (k[12] - k[13]);
    m[13] = 0.5 * (k[14] + k[15]);
    m[14] = 0.5 * (k[15] - k[14]);
    WitnessParams { m }
}

/// A 1|1|2 split of the four qubits, identified by its two-qubit party.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    pub pair: (usize, usize),
}

impl Partition {
    pub const ALL: [Partition; 6] = [
        Partition { pair: (3, 4) },
        Partition { pair: (2, 4) },
        Partition { pair: (2, 3) },
        Partition { pair: (1, 4) },
        Partition { pair: (1, 3) },
        Partition { pair: (1, 2) },
    ];

    pub fn new(a: usize, b: usize) -> Result<Self> {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        if a < 1 || b > 4 || a == b {
            return Err(Error::Invalid(format!("bad qubit pair ({a},{b})")));
        }
        Ok(Partition { pair: (a, b) })
    }

    pub fn singles(&self) -> (usize, usize) {
        let s: Vec<usize> = (1..=4).filter(|q| *q != self.pair.0 && *q != self.pair.1).collect();
        (s[0], s[1])
    }

    /// New position `k` holds old qubit `perm[k]`.
    pub fn perm(&self) -> [usize; 4] {
        let (s1, s2) = self.singles();
        [s1, s2, self.pair.0, self.pair.1]
    }

    pub fn index(&self) -> usize {
        Partition::ALL.iter().position(|p| p == self).unwrap()
    }

    pub fn name(&self) -> String {
        let (s1, s2) = self.singles();
        format!("{}|{}|{}{}", s1, s2, self.pair.0, self.pair.1)
    }
}

/// `table[p][i]` = new 0-based label index of old label `i` under partition `p`'s relabeling.
fn relabel_table() -> &'static [[usize; 15]; 6] {
    static T: OnceLock<[[usize; 15]; 6]> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = [[0usize; 15]; 6];
        for (pi, p) in Partition::ALL.iter().enumerate() {
            let perm = p.perm();
            for (i, l) in LABELS.iter().enumerate() {
                let b = l.as_bytes();
                let nl: String = perm.iter().map(|&q| b[q - 1] as char).collect();
                t[pi][i] = label_index(&nl).expect("label set closed under permutation") - 1;
            }
        }
        t
    })
}

/// Coefficients seen from a partition, with its pair moved to qubits 3,4.
pub fn relabel(w: &WitnessParams, p: Partition) -> WitnessParams {
    let t = &relabel_table()[p.index()];
    let mut m = [0.0; 15];
    for i in 0..15 {
        m[t[i]] = w.m[i];
    }
    WitnessParams { m }
}

/// Applies a qubit permutation to correlations: new qubit `k` is old qubit `perm[k]`.
pub fn permute_correlations(r: &Correlations, perm: [usize; 4]) -> Correlations {
    let mut out = [0.0; 15];
    for (i, l) in LABELS.iter().enumerate() {
        let b = l.as_bytes();
        let nl: String = perm.iter().map(|&q| b[q - 1] as char).collect();
        out[label_index(&nl).unwrap() - 1] = r.values()[i];
    }
    Correlations::raw(out)
}

/// Bloch angles of the two single-qubit parties.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductAngles {
    pub theta1: f64,
    pub phi1: f64,
    pub theta2: f64,
    pub phi2: f64,
}

pub fn qubit_state(theta: f64, phi: f64) -> [C64; 2] {
    [C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)]
}

pub type XMatrix = [[C64; 4]; 4];

/// `(a·cc − i·b·cs − i·c·sc + d·ss)` for sector `(a, b, c, d)`.
pub fn g_value(s: [f64; 4], phi1: f64, phi2: f64) -> C64 {
    let (c1, s1) = (phi1.cos(), phi1.sin());
    let (c2, s2) = (phi2.cos(), phi2.sin());
    C64::new(s[0] * c1 * c2 + s[3] * s1 * s2, -(s[1] * c1 * s2 + s[2] * s1 * c2))
}

/// Reduced 4×4 operator on the pair, basis order |00⟩, |10⟩, |01⟩, |11⟩.
pub fn x_matrix(w: &WitnessParams, p: Partition, a: &ProductAngles) -> XMatrix {
    let k = k_from_m(&relabel(w, p)).k;
    let (c1, c2) = (a.theta1.cos(), a.theta2.cos());
    let ss = a.theta1.sin() * a.theta2.sin();
    let z = C64::new(0.0, 0.0);
    let re = |x: f64| C64::new(x, 0.0);
    let mut x = [[z; 4]; 4];
    x[0][0] = re(k[0] + k[2] * c2 + k[4] * c1 + k[6] * c1 * c2);
    x[3][3] = re(k[0] - k[2] * c2 - k[4] * c1 + k[6] * c1 * c2);
    x[1][1] = re(k[1] + k[3] * c2 + k[5] * c1 + k[7] * c1 * c2);
    x[2][2] = re(k[1] - k[3] * c2 - k[5] * c1 + k[7] * c1 * c2);
    let g1 = g_value([k[8], k[10], k[12], k[14]], a.phi1, a.phi2) * ss;
    let g2 = g_value([k[9], k[11], k[13], k[15]], a.phi1, a.phi2) * ss;
    x[0][3] = g1;
    x[3][0] = g1.conj();
    x[1][2] = g2;
    x[2][1] = g2.conj();
    x
}

/// Same matrix by contracting the explicit 16×16 operator with the single-qubit states.
pub fn x_matrix_explicit(w: &WitnessParams, p: Partition, a: &ProductAngles) -> XMatrix {
    let (s1, s2) = p.singles();
    let (q3, q4) = p.pair;
    let psi1 = qubit_state(a.theta1, a.phi1);
    let psi2 = qubit_state(a.theta2, a.phi2);
    let index = |x1: usize, x2: usize, x3: usize, x4: usize| -> usize {
        let mut bits = [0usize; 5];
        bits[s1] = x1;
        bits[s2] = x2;
        bits[q3] = x3;
        bits[q4] = x4;
        (bits[1] << 3) | (bits[2] << 2) | (bits[3] << 1) | bits[4]
    };
    // pair basis order |00⟩, |10⟩, |01⟩, |11⟩ as (x3, x4)
    let local = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let mut op = [[C64::new(0.0, 0.0); 16]; 16];
    for i in 1..=15 {
        let mi = w.get(i);
        if mi == 0.0 {
            continue;
        }
        let ps = PauliString::label(i);
        for b in 0..16 {
            let (nb, ph) = ps.apply_basis(b);
            op[nb][b] += ph * mi;
        }
    }
    let mut x = [[C64::new(0.0, 0.0); 4]; 4];
    for (r, &(r3, r4)) in local.iter().enumerate() {
        for (c, &(c3, c4)) in local.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for a1 in 0..2 {
                for a2 in 0..2 {
                    for b1 in 0..2 {
                        for b2 in 0..2 {
                            let amp = (psi1[a1] * psi2[a2]).conj() * psi1[b1] * psi2[b2];
                            acc += amp * op[index(a1, a2, r3, r4)][index(b1, b2, c3, c4)];
                        }
                    }
                }
            }
            x[r][c] = acc;
        }
    }
    x
}

/// Largest eigenvalues of the two 2×2 blocks of an X-type matrix.
pub fn eigen_candidates(x: &XMatrix) -> Result<(f64, f64)> {
    let scale = 1.0 + x.iter().flatten().fold(0.0f64, |a, z| a.max(z.norm()));
    for (r, c) in [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)] {
        if x[r][c].norm() > 1e-12 * scale {
            return Err(Error::NotXType);
        }
    }
    let top = |a: f64, d: f64, off: C64| 0.5 * (a + d) + (0.25 * (a - d).powi(2) + off.norm_sqr()).sqrt();
    Ok((top(x[0][0].re, x[3][3].re, x[0][3]), top(x[1][1].re, x[2][2].re, x[1][2])))
}

const GAMMA: [[f64; 4]; 4] = [
    [-1.0, 1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, 1.0],
    [1.0, 1.0, 1.0, -1.0],
];

pub fn gamma() -> [[f64; 4]; 4] {
    GAMMA
}

pub fn times_gamma(v: [f64; 4]) -> [f64; 4] {
    let mut o = [0.0; 4];
    for (j, oj) in o.iter_mut().enumerate() {
        *oj = (0..4).map(|i| v[i] * GAMMA[i][j]).sum();
    }
    o
}

/// Products below this fraction of `max|K|⁴` are too close to zero for the closed form.
pub const G_TILDE_DEGENERACY: f64 = 1e-10;

/// `max_{φ1,φ2} |g(φ1, φ2)|` in closed form.
///
/// Near `ξβγδ = 0` rounding noise can flip the branch test or blow up the quotient, so that
/// band is handed to [`g_tilde_bruteforce`]. An exact zero takes the max branch.
pub fn g_tilde(s: [f64; 4]) -> f64 {
    let kmax = s.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let v = times_gamma(s);
    let (xi, be, ga, de) = (v[0] / 4.0, v[1] / 4.0, v[2] / 4.0, v[3] / 4.0);
    let prod = xi * be * ga * de;
    if prod > G_TILDE_DEGENERACY * kmax.powi(4) {
        let q = times_gamma([xi * be * ga, xi * be * de, xi * ga * de, be * ga * de]);
        if q.iter().product::<f64>() >= 0.0 {
            let num = (xi * be + ga * de) * (xi * ga + be * de) * (xi * de + be * ga);
            return (num / prod).sqrt();
        }
        kmax
    } else if prod > 0.0 {
        profile_max(s, BAND_SCAN).max(kmax)
    } else {
        kmax
    }
}

/// Λ = max(|M_7|, g̃_1, g̃_2) for symmetric coefficients.
pub fn lambda_symmetric(w: &WitnessParams) -> Result<f64> {
    w.check_symmetric(1e-12)?;
    let k = k_from_m(w);
    Ok(w.get(7).abs().max(g_tilde(k.sector(1))).max(g_tilde(k.sector(2))))
}

/// Analytic Λ over all partitions when M_1..M_6 vanish.
pub fn lambda_antidiag(w: &WitnessParams) -> Result<f64> {
    if !w.diagonal_vanishes(0.0) {
        return Err(Error::AssumptionViolation("M_1..M_6 must vanish".into()));
    }
    Ok(lambda_antidiag_unchecked(w))
}

pub(crate) fn lambda_antidiag_unchecked(w: &WitnessParams) -> f64 {
    let mut best = w.get(7).abs();
    for p in Partition::ALL {
        let k = k_from_m(&relabel(w, p));
        best = best.max(g_tilde(k.sector(1))).max(g_tilde(k.sector(2)));
    }
    best
}

const BF_GRID: usize = 48;
const BF_STEP_MIN: f64 = 1e-7;
const BF_STARTS: usize = 4;
const BF_PROFILE_SCAN: usize = 2000;

/// Grid search plus pattern refinement of a 2-D function, maximizing.
fn maximize_2d<F: Fn(f64, f64) -> f64>(f: F, lo: [f64; 2], hi: [f64; 2], periodic: bool) -> f64 {
    let n = BF_GRID;
    let h = [(hi[0] - lo[0]) / n as f64, (hi[1] - lo[1]) / n as f64];
    let npts = if periodic { n } else { n + 1 };
    let mut cells = Vec::with_capacity(npts * npts);
    for i in 0..npts {
        for j in 0..npts {
            let (x, y) = (lo[0] + h[0] * i as f64, lo[1] + h[1] * j as f64);
            cells.push((x, y, f(x, y)));
        }
    }
    cells.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap());
    let clamp = |v: f64, k: usize| if periodic { v } else { v.clamp(lo[k], hi[k]) };
    let dirs = [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0), (2.0, 1.0), (1.0, 2.0), (2.0, -1.0), (1.0, -2.0)];
    let mut best = f64::NEG_INFINITY;
    for &(x0, y0, f0) in cells.iter().take(BF_STARTS) {
        let (mut x, mut y, mut fv) = (x0, y0, f0);
        let mut step = h[0].max(h[1]);
        while step >= BF_STEP_MIN {
            let mut moved = true;
            while moved {
                moved = false;
                for (dx, dy) in dirs {
                    for sgn in [1.0, -1.0] {
                        let nx = clamp(x + sgn * dx * step, 0);
                        let ny = clamp(y + sgn * dy * step, 1);
                        let v = f(nx, ny);
                        if v > fv {
                            x = nx;
                            y = ny;
                            fv = v;
                            moved = true;
                        }
                    }
                }
            }
            step *= 0.5;
        }
        best = best.max(fv);
    }
    best
}

/// Numerical `max |g|`; oracle for [`g_tilde`].
///
/// For fixed φ₁, `g = A cos φ₂ + B sin φ₂` and the maximum over φ₂ is the top eigenvalue of
/// a real 2×2 Gram matrix, leaving a 1-D scan over φ₁.
pub fn g_tilde_bruteforce(s: [f64; 4]) -> f64 {
    profile_max(s, BF_PROFILE_SCAN)
}

const BAND_SCAN: usize = 256;

fn profile_max(s: [f64; 4], n: usize) -> f64 {
    let [a, b, c, d] = s;
    let profile = |f1: f64| {
        let (c1, s1) = (f1.cos(), f1.sin());
        let ca = C64::new(a * c1, -c * s1);
        let cb = C64::new(d * s1, -b * c1);
        let (p, q) = (ca.norm_sqr(), cb.norm_sqr());
        let r = (ca * cb.conj()).re;
        (0.5 * (p + q) + (0.25 * (p - q).powi(2) + r * r).sqrt()).sqrt()
    };
    crate::numeric::scan_max(profile, 0.0, PI, n, 1e-12).1
}

/// Λ for one partition by numerical maximization over the product angles.
///
/// The block diagonals depend only on θ and the corners only on φ through `|g|`, so the
/// φ and θ maximizations are carried out one after the other.
pub fn lambda_bruteforce(w: &WitnessParams, p: Partition) -> f64 {
    let k = k_from_m(&relabel(w, p)).k;
    let g1 = g_tilde_bruteforce([k[8], k[10], k[12], k[14]]);
    let g2 = g_tilde_bruteforce([k[9], k[11], k[13], k[15]]);
    let top = |a: f64, d: f64, off: f64| 0.5 * (a + d) + (0.25 * (a - d).powi(2) + off * off).sqrt();
    let f = |t1: f64, t2: f64| {
        let (c1, c2) = (t1.cos(), t2.cos());
        let ss = t1.sin() * t2.sin();
        let m11 = k[0] + k[2] * c2 + k[4] * c1 + k[6] * c1 * c2;
        let m44 = k[0] - k[2] * c2 - k[4] * c1 + k[6] * c1 * c2;
        let m22 = k[1] + k[3] * c2 + k[5] * c1 + k[7] * c1 * c2;
        let m33 = k[1] - k[3] * c2 - k[5] * c1 + k[7] * c1 * c2;
        top(m11, m44, ss * g1).max(top(m22, m33, ss * g2))
    };
    maximize_2d(f, [0.0, 0.0], [PI, PI], false)
}

pub fn lambda_all_partitions(w: &WitnessParams) -> f64 {
    Partition::ALL.iter().map(|&p| lambda_bruteforce(w, p)).fold(f64::NEG_INFINITY, f64::max)
}

/// Λ by the cheapest exact route: symmetric formula, antidiagonal formula, else brute force.
pub fn lambda(w: &WitnessParams) -> f64 {
    if let Ok(l) = lambda_symmetric(w) {
        l
    } else if w.diagonal_vanishes(0.0) {
        lambda_antidiag_unchecked(w)
    } else {
        lambda_all_partitions(w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub expectation: f64,
    pub lambda: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub entangled: bool,
}

/// Expectation Σ M_i R_i (cross-checked against Σ K_i T_i), Λ and L = Λ / expectation.
pub fn witness_report(w: &WitnessParams, state: &GhzState) -> Result<WitnessReport> {
    let r = state.correlations();
    let e = w.expectation(&r);
    let t = crate::ghz::t_from_r(&r);
    let ekt: f64 = k_from_m(w).k.iter().zip(t.t.iter()).map(|(a, b)| a * b).sum();
    debug_assert!((e - ekt).abs() < 1e-12);
    if ekt <= 0.0 {
        return Err(Error::NonpositiveDenominator(ekt));
    }
    let lam = lambda(w);
    let l = lam / e;
    Ok(WitnessReport { expectation: e, lambda: lam, l, entangled: l < 1.0 })
}

/// JSON witness document `{"M":[..15]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessDoc {
    #[serde(rename = "M")]
    pub m: Vec<f64>,
}

impl WitnessDoc {
    pub fn to_params(&self) -> Result<WitnessParams> {
        WitnessParams::from_slice(&self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;
    use crate::ghz::GhzState;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_m(rng: &mut ChaCha8Rng) -> WitnessParams {
        let mut m = [0.0; 15];
        m.iter_mut().for_each(|x| *x = rng.gen_range(-1.0..1.0));
        WitnessParams::raw(m)
    }

    fn rand_angles(rng: &mut ChaCha8Rng) -> ProductAngles {
        ProductAngles {
            theta1: rng.gen_range(0.0..PI),
            phi1: rng.gen_range(0.0..TAU),
            theta2: rng.gen_range(0.0..PI),
            phi2: rng.gen_range(0.0..TAU),
        }
    }

    fn max_diff(a: &XMatrix, b: &XMatrix) -> f64 {
        a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn k_transform_examples() {
        let k = k_from_m(&WitnessParams::werner()).k;
        assert_eq!(k[8], 2.0);
        assert_eq!([k[10], k[12], k[14]], [-2.0, -2.0, -2.0]);
        assert_eq!((k[6], k[7]), (2.0, -2.0));
        assert_eq!([k[9], k[11], k[13], k[15]], [0.0; 4]);
        let z = k_from_m(&WitnessParams::raw([0.0; 15]));
        assert!(z.k.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn k_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let m = rand_m(&mut rng);
            let back = m_from_k(&k_from_m(&m));
            for i in 1..=15 {
                assert!((back.get(i) - m.get(i)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn relabel_swaps_listed_labels() {
        // partition 1|3|24 swaps qubits 2 and 3, moving the pair to the end
        let p = Partition::new(2, 4).unwrap();
        assert_eq!(p.perm(), [1, 3, 2, 4]);
        let mut m = [0.0; 15];
        m[1] = 1.0; // IZIZ
        m[8] = 2.0; // XXYY
        let r = relabel(&WitnessParams::raw(m), p);
        assert_eq!(r.get(1), 1.0); // IIZZ
        assert_eq!(r.get(10), 2.0); // XYXY
    }

    #[test]
    fn x_matrix_matches_explicit_contraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let m = rand_m(&mut rng);
            let a = rand_angles(&mut rng);
            for p in Partition::ALL {
                let d = max_diff(&x_matrix(&m, p, &a), &x_matrix_explicit(&m, p, &a));
                assert!(d < 1e-12, "partition {} diff {d}", p.name());
            }
        }
    }

    #[test]
    fn x_matrix_zero_theta_is_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = rand_m(&mut rng);
        let a = ProductAngles { theta1: 0.0, phi1: 1.0, theta2: 0.0, phi2: 2.0 };
        let x = x_matrix(&m, Partition::ALL[0], &a);
        assert_eq!(x[0][3], C64::new(0.0, 0.0));
        assert_eq!(x[1][2], C64::new(0.0, 0.0));
        let k = k_from_m(&m).k;
        assert!((x[0][0].re - (k[0] + k[2] + k[4] + k[6])).abs() < 1e-14);
    }

    #[test]
    fn criterion_one_matrix_shape() {
        let w = WitnessParams::symmetric(1.0, 0.5, -0.5, 0.5);
        let t = 0.7;
        let (f1, f2) = (0.3, 1.1);
        let a = ProductAngles { theta1: t, phi1: f1, theta2: t, phi2: f2 };
        let x = x_matrix(&w, Partition::ALL[0], &a);
        let c = t.cos() * t.cos();
        assert!((x[0][0].re - c).abs() < 1e-14 && (x[3][3].re - c).abs() < 1e-14);
        assert!((x[1][1].re + c).abs() < 1e-14 && (x[2][2].re + c).abs() < 1e-14);
        let want = C64::from_polar(t.sin() * t.sin(), f1 + f2);
        assert!((x[0][3] - want).norm() < 1e-14 || (x[0][3] - want.conj()).norm() < 1e-14);
    }

    #[test]
    fn eigen_candidates_examples() {
        let z = C64::new(0.0, 0.0);
        let re = |v: f64| C64::new(v, 0.0);
        let mut x = [[z; 4]; 4];
        x[0][0] = re(0.3);
        x[1][1] = re(-0.2);
        x[2][2] = re(0.5);
        x[3][3] = re(0.1);
        let (l1, l2) = eigen_candidates(&x).unwrap();
        assert!((l1 - 0.3).abs() < 1e-15 && (l2 - 0.5).abs() < 1e-15);
        let mut y = [[z; 4]; 4];
        y[0][3] = C64::new(0.6, 0.8);
        y[3][0] = y[0][3].conj();
        assert!((eigen_candidates(&y).unwrap().0 - 1.0).abs() < 1e-15);
        y[0][1] = re(0.1);
        assert!(eigen_candidates(&y).is_err());
    }

    #[test]
    fn eigen_candidates_match_dense_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let m = rand_m(&mut rng);
            let a = rand_angles(&mut rng);
            let x = x_matrix(&m, Partition::ALL[rng.gen_range(0..6)], &a);
            let (l1, l2) = eigen_candidates(&x).unwrap();
            let h = nalgebra::Matrix4::<C64>::from_fn(|r, c| x[r][c]);
            let ev = h.symmetric_eigenvalues();
            let top = ev.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!((l1.max(l2) - top).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_identity() {
        let g = gamma();
        for i in 0..4 {
            for j in 0..4 {
                let sq: f64 = (0..4).map(|k| g[i][k] * g[k][j]).sum();
                assert_eq!(sq, if i == j { 4.0 } else { 0.0 });
                assert_eq!(g[i][j], g[j][i]);
            }
        }
    }

    #[test]
    fn g_tilde_examples() {
        assert_eq!(g_tilde([2.0, -2.0, -2.0, -2.0]), 2.0);
        assert_eq!(g_tilde([1.0, 0.0, 0.0, 0.0]), 1.0);
        assert!((g_tilde([1.0, 1.0, 1.0, 1.0]) - 2f64.sqrt()).abs() < 1e-15);
        assert!((g_tilde_bruteforce([1.0, 1.0, 1.0, 1.0]) - 2f64.sqrt()).abs() < 1e-9);
        let at = g_value([1.0, 1.0, 1.0, 1.0], PI / 4.0, PI / 4.0).norm();
        assert!((at - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_symmetric(&WitnessParams::werner()).unwrap(), 2.0);
        let only7 = WitnessParams::symmetric(1.0, 0.0, 0.0, 0.0);
        assert_eq!(lambda_symmetric(&only7).unwrap(), 1.0);
        let c1 = WitnessParams::symmetric(1.0, 0.5, -0.5, 0.5);
        assert!((lambda_symmetric(&c1).unwrap() - 1.0).abs() < 1e-15);
        assert!((lambda_all_partitions(&c1) - 1.0).abs() < 1e-6);
        let mut bad = WitnessParams::werner();
        bad.set(10, 0.0);
        assert!(matches!(lambda_symmetric(&bad), Err(Error::AssumptionViolation(_))));
    }

    #[test]
    fn bruteforce_examples() {
        let w = WitnessParams::werner();
        assert!((lambda_bruteforce(&w, Partition::ALL[0]) - 2.0).abs() < 1e-6);
        let only7 = WitnessParams::symmetric(1.0, 0.0, 0.0, 0.0);
        for p in Partition::ALL {
            assert!((lambda_bruteforce(&only7, p) - 1.0).abs() < 1e-12);
        }
        assert_eq!(lambda_all_partitions(&WitnessParams::raw([0.0; 15])), 0.0);
    }

    fn appendix_b_witness(x: f64) -> WitnessParams {
        let mut k = [0.0; 16];
        k[8] = 1.0;
        k[10] = -1.0;
        k[12] = -1.0;
        k[14] = -1.0;
        k[9] = x;
        k[11] = -x;
        k[13] = -x;
        k[15] = -x;
        m_from_k(&KCoefficients { k })
    }

    #[test]
    fn asymmetric_partition_example() {
        let w = appendix_b_witness(1.0);
        assert!((lambda_bruteforce(&w, Partition::new(2, 4).unwrap()) - 2.0).abs() < 1e-6);
        assert!((lambda_bruteforce(&w, Partition::new(3, 4).unwrap()) - 1.0).abs() < 1e-6);
        for x in [0.0, 0.4, 1.3] {
            let w = appendix_b_witness(x);
            assert!((lambda_all_partitions(&w) - (1.0 + x)).abs() < 1e-6);
            assert!((lambda_antidiag(&w).unwrap() - (1.0 + x)).abs() < 1e-12);
        }
    }

    #[test]
    fn werner_report() {
        for p in [0.1, 0.2, 0.5, 0.9] {
            let r = witness_report(&WitnessParams::werner(), &GhzState::werner(p).unwrap()).unwrap();
            assert!((r.expectation - 10.0 * p).abs() < 1e-13);
            assert_eq!(r.lambda, 2.0);
            assert!((r.l - 1.0 / (5.0 * p)).abs() < 1e-12);
            assert_eq!(r.entangled, p > 0.2);
        }
        let e = witness_report(&WitnessParams::werner(), &GhzState::uniform());
        assert!(matches!(e, Err(Error::NonpositiveDenominator(_))));
    }

    #[test]
    fn expectation_equals_kt() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let m = rand_m(&mut rng);
            let mut p = [0.0; 16];
            p.iter_mut().for_each(|x| *x = rng.gen::<f64>());
            let s: f64 = p.iter().sum();
            p.iter_mut().for_each(|x| *x /= s);
            let r = GhzState::new(p).unwrap().correlations();
            let t = crate::ghz::t_from_r(&r);
            let kt: f64 = k_from_m(&m).k.iter().zip(t.t.iter()).map(|(a, b)| a * b).sum();
            assert!((m.expectation(&r) - kt).abs() < 1e-12);
        }
    }

    #[test]
    fn monte_carlo_witness_validity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let w = WitnessParams::werner();
        let lam = lambda_symmetric(&w).unwrap();
        let ops: Vec<_> = (1..=15).map(|i| PauliString::label(i)).collect();
        for _ in 0..100_000 {
            let a = rand_angles(&mut rng);
            let p = Partition::ALL[rng.gen_range(0..6)];
            let (s1, s2) = p.singles();
            let q1 = qubit_state(a.theta1, a.phi1);
            let q2 = qubit_state(a.theta2, a.phi2);
            let mut pair = [C64::new(0.0, 0.0); 4];
            pair.iter_mut().for_each(|z| *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let n: f64 = pair.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            pair.iter_mut().for_each(|z| *z /= n);
            let mut psi = [C64::new(0.0, 0.0); 16];
            for (b, amp) in psi.iter_mut().enumerate() {
                let bit = |q: usize| (b >> (4 - q)) & 1;
                *amp = q1[bit(s1)] * q2[bit(s2)] * pair[(bit(p.pair.0) << 1) | bit(p.pair.1)];
            }
            let mut e = 0.0;
            for (i, op) in ops.iter().enumerate() {
                let mi = w.values()[i];
                if mi == 0.0 {
                    continue;
                }
                let v = op.apply(&psi);
                let ev: C64 = psi.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                e += mi * ev.re;
            }
            assert!(lam - e >= -1e-12);
        }
    }

    #[test]
    fn g_tilde_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let s = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            assert!((g_tilde(s) - g_tilde_bruteforce(s)).abs() < 1e-6, "{s:?}");
        }
        // almost degenerate sector
        let s = [1.1143201535066678, 1.114320174012851, -1.11423713826758, 1.1143201944678278];
        assert!((g_tilde(s) - g_tilde_bruteforce(s)).abs() < 1e-9);
        let w = [2.0, -2.0, -2.0, -2.0];
        assert_eq!(g_tilde(w), 2.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn lambda_invariant_under_relabeling(m in proptest::array::uniform15(-1.0f64..1.0), pi in 0usize..6) {
            let w = WitnessParams::raw(m);
            let w2 = relabel(&w, Partition::ALL[pi]);
            let a = lambda_antidiag_unchecked(&WitnessParams::raw({ let mut v = m; v[..6].iter_mut().for_each(|x| *x = 0.0); v }));
            let b = lambda_antidiag_unchecked(&WitnessParams::raw({ let mut v = *w2.values(); v[..6].iter_mut().for_each(|x| *x = 0.0); v }));
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn g_tilde_scales(s in proptest::array::uniform4(-2.0f64..2.0), c in 0.1f64..3.0) {
            let a = g_tilde(s) * c;
            let b = g_tilde([s[0] * c, s[1] * c, s[2] * c, s[3] * c]);
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + a));
        }
    }
}
