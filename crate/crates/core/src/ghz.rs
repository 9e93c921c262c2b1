//! Four-qubit GHZ-diagonal states: basis, density matrices, correlation and T vectors.
//!
//! Qubit 1 is the most significant bit of a computational index. Matrix accessors
//! that take `(i, j)` are 1-based so that `entry(1, 16)` is the top-right corner.

use crate::error::{Error, Result};
use nalgebra::SMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

pub type CMat16 = SMatrix<C64, 16, 16>;
pub type CVec16 = [C64; 16];

/// The 15 Pauli strings of a GHZ-diagonal expansion, in index order 1..15.
pub const LABELS: [&str; 15] = [
    "IIZZ", "IZIZ", "IZZI", "ZIIZ", "ZIZI", "ZZII", "ZZZZ", "XXXX", "XXYY", "XYXY", "XYYX", "YXXY",
    "YXYX", "YYXX", "YYYY",
];

/// 1-based index of a label, or `None` if it is not one of the 15 strings.
pub fn label_index(label: &str) -> Option<usize> {
    LABELS.iter().position(|l| *l == label).map(|i| i + 1)
}

/// A four-qubit Pauli string.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PauliString(pub [u8; 4]);

impl PauliString {
    pub fn parse(s: &str) -> Result<Self> {
        let b = s.as_bytes();
        if b.len() != 4 || !b.iter().all(|c| b"IXYZ".contains(c)) {
            return Err(Error::Invalid(format!("bad Pauli string {s:?}")));
        }
        Ok(PauliString([b[0], b[1], b[2], b[3]]))
    }

    /// String for label index `i` (1..15).
    pub fn label(i: usize) -> Self {
        PauliString::parse(LABELS[i - 1]).unwrap()
    }

    pub fn as_string(&self) -> String {
        self.0.iter().map(|&c| c as char).collect()
    }

    /// `P|b⟩ = phase · |b'⟩`.
    pub fn apply_basis(&self, b: usize) -> (usize, C64) {
        let mut out = b;
        let mut phase = C64::new(1.0, 0.0);
        for q in 0..4 {
            let shift = 3 - q;
            let bit = (b >> shift) & 1;
            match self.0[q] {
                b'X' => out ^= 1 << shift,
                b'Y' => {
                    out ^= 1 << shift;
                    phase *= if bit == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) };
                }
                b'Z' => {
                    if bit == 1 {
                        phase = -phase;
                    }
                }
                _ => {}
            }
        }
        (out, phase)
    }

    pub fn apply(&self, v: &CVec16) -> CVec16 {
        let mut out = [C64::new(0.0, 0.0); 16];
        for (b, a) in v.iter().enumerate() {
            let (nb, ph) = self.apply_basis(b);
            out[nb] += ph * a;
        }
        out
    }

    /// Dense matrix built as a Kronecker product of single-qubit Paulis.
    pub fn matrix(&self) -> CMat16 {
        let single = |c: u8| -> [[C64; 2]; 2] {
            let z = C64::new(0.0, 0.0);
            let o = C64::new(1.0, 0.0);
            let i = C64::new(0.0, 1.0);
            match c {
                b'X' => [[z, o], [o, z]],
                b'Y' => [[z, -i], [i, z]],
                b'Z' => [[o, z], [z, -o]],
                _ => [[o, z], [z, o]],
            }
        };
        let mats: Vec<_> = self.0.iter().map(|&c| single(c)).collect();
        CMat16::from_fn(|r, c| {
            let mut v = C64::new(1.0, 0.0);
            for q in 0..4 {
                let s = 3 - q;
                v *= mats[q][(r >> s) & 1][(c >> s) & 1];
            }
            v
        })
    }
}

fn zero16() -> CVec16 {
    [C64::new(0.0, 0.0); 16]
}

/// |GHZ_j⟩ for j = 1..16.
pub fn ghz_basis_state(j: usize) -> Result<CVec16> {
    if !(1..=16).contains(&j) {
        return Err(Error::IndexOutOfRange(j));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let b = j - 1;
    let mut v = zero16();
    if j <= 8 {
        v[b] += h;
        v[b ^ 15] += h;
    } else {
        v[b ^ 15] += h;
        v[b] -= h;
    }
    Ok(v)
}

/// Index of the basis state sharing the same antidiagonal pair as `j`.
pub fn partner(j: usize) -> usize {
    17 - j
}

/// `S[i][j]` = eigenvalue of Pauli string `i+1` on |GHZ_{j+1}⟩.
pub fn sign_table() -> &'static [[i8; 16]; 15] {
    static TABLE: OnceLock<[[i8; 16]; 15]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[0i8; 16]; 15];
        for (i, row) in t.iter_mut().enumerate() {
            let p = PauliString::label(i + 1);
            for (j, s) in row.iter_mut().enumerate() {
                let g = ghz_basis_state(j + 1).unwrap();
                let pg = p.apply(&g);
                let ev: C64 = g.iter().zip(pg.iter()).map(|(a, b)| a.conj() * b).sum();
                *s = ev.re.round() as i8;
            }
        }
        t
    })
}

/// Probability vector over the GHZ basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhzState {
    p: [f64; 16],
}

pub const PROB_CLAMP: f64 = 1e-12;
pub const NORM_TOL: f64 = 1e-12;

impl GhzState {
    /// Validates probabilities. Entries in `[-1e-12, 0)` are clamped and the vector renormalized.
    pub fn new(p: [f64; 16]) -> Result<Self> {
        let mut p = p;
        let mut clamped = false;
        for (i, x) in p.iter_mut().enumerate() {
            if !x.is_finite() {
                return Err(Error::Invalid(format!("p[{}] is not finite", i + 1)));
            }
            if *x < 0.0 {
                if *x < -PROB_CLAMP {
                    return Err(Error::NegativeProbability { index: i + 1, value: *x });
                }
                *x = 0.0;
                clamped = true;
            }
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > NORM_TOL * 16.0 {
            return Err(Error::NotNormalized(s));
        }
        if clamped || s != 1.0 {
            p.iter_mut().for_each(|x| *x /= s);
        }
        Ok(GhzState { p })
    }

    pub fn from_slice(p: &[f64]) -> Result<Self> {
        let arr: [f64; 16] = p
            .try_into()
            .map_err(|_| Error::Invalid(format!("expected 16 probabilities, got {}", p.len())))?;
        Self::new(arr)
    }

    pub fn uniform() -> Self {
        GhzState { p: [1.0 / 16.0; 16] }
    }

    /// Pure |GHZ_j⟩⟨GHZ_j|.
    pub fn pure(j: usize) -> Result<Self> {
        if !(1..=16).contains(&j) {
            return Err(Error::IndexOutOfRange(j));
        }
        let mut p = [0.0; 16];
        p[j - 1] = 1.0;
        Ok(GhzState { p })
    }

    /// `p |GHZ_1⟩⟨GHZ_1| + (1-p) I/16`.
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Invalid(format!("Werner parameter {p} outside [0,1]")));
        }
        let mut v = [(1.0 - p) / 16.0; 16];
        v[0] += p;
        Ok(GhzState { p: v })
    }

    /// 1-based probability accessor.
    pub fn p(&self, j: usize) -> f64 {
        self.p[j - 1]
    }

    pub fn probs(&self) -> &[f64; 16] {
        &self.p
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        density_matrix(self)
    }

    pub fn correlations(&self) -> Correlations {
        correlations(self)
    }
}

/// 16×16 density matrix with 1-based entry access.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(pub CMat16);

impl DensityMatrix {
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.0[(i - 1, j - 1)]
    }

    /// Real part of a 1-based entry; GHZ-diagonal matrices are real.
    pub fn re(&self, i: usize, j: usize) -> f64 {
        self.entry(i, j).re
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.0 - self.0.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    /// True when every entry off the diagonal and antidiagonal is exactly zero.
    pub fn is_x_type(&self) -> bool {
        (0..16).all(|r| (0..16).all(|c| r == c || r + c == 15 || self.0[(r, c)] == C64::new(0.0, 0.0)))
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (self.0 - other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn density_matrix(state: &GhzState) -> DensityMatrix {
    let mut m = CMat16::zeros();
    for j in 1..=16 {
        let pj = state.p(j);
        if pj == 0.0 {
            continue;
        }
        let g = ghz_basis_state(j).unwrap();
        for r in 0..16 {
            if g[r] == C64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..16 {
                m[(r, c)] += pj * g[r] * g[c].conj();
            }
        }
    }
    DensityMatrix(m)
}

/// The 15 correlations R_1..R_15.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Correlations {
    r: [f64; 15],
}

impl Correlations {
    pub fn new(r: [f64; 15]) -> Result<Self> {
        for (i, x) in r.iter().enumerate() {
            if !x.is_finite() || x.abs() > 1.0 + 1e-12 {
                return Err(Error::Invalid(format!("|R_{}| = {} exceeds 1", i + 1, x)));
            }
        }
        Ok(Correlations { r })
    }

    /// Builds without range checks; used for witness-algebra experiments on arbitrary vectors.
    pub fn raw(r: [f64; 15]) -> Self {
        Correlations { r }
    }

    pub fn from_slice(r: &[f64]) -> Result<Self> {
        let arr: [f64; 15] = r
            .try_into()
            .map_err(|_| Error::Invalid(format!("expected 15 correlations, got {}", r.len())))?;
        Self::new(arr)
    }

    /// 1-based accessor.
    pub fn get(&self, i: usize) -> f64 {
        self.r[i - 1]
    }

    pub fn values(&self) -> &[f64; 15] {
        &self.r
    }

    pub fn max_abs_diff(&self, other: &Correlations) -> f64 {
        self.r.iter().zip(other.r.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Correlations through the eigenvalue sign table.
pub fn correlations(state: &GhzState) -> Correlations {
    let s = sign_table();
    let mut r = [0.0; 15];
    for (i, ri) in r.iter_mut().enumerate() {
        *ri = (0..16).map(|j| s[i][j] as f64 * state.p[j]).sum();
    }
    Correlations { r }
}

/// Correlations as explicit traces `Tr(ρ P_i)`.
pub fn correlations_by_trace(rho: &DensityMatrix) -> Correlations {
    let mut r = [0.0; 15];
    for (i, ri) in r.iter_mut().enumerate() {
        let p = PauliString::label(i + 1).matrix();
        *ri = (rho.0 * p).trace().re;
    }
    Correlations { r }
}

/// Inverse of the trace map. Fails if a probability is below the clamp tolerance.
pub fn state_from_correlations(r: &Correlations) -> Result<GhzState> {
    let s = sign_table();
    let mut p = [0.0; 16];
    for (j, pj) in p.iter_mut().enumerate() {
        let acc: f64 = (0..15).map(|i| s[i][j] as f64 * r.r[i]).sum();
        *pj = (1.0 + acc) / 16.0;
    }
    if let Some((i, &v)) = p
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < -PROB_CLAMP)
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
    {
        return Err(Error::NegativeProbability { index: i + 1, value: v });
    }
    GhzState::new(p)
}

/// T_0..T_15 built pairwise from R (with R_0 = 0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TVector {
    pub t: [f64; 16],
}

impl TVector {
    pub fn get(&self, i: usize) -> f64 {
        self.t[i]
    }
}

pub fn t_from_r(r: &Correlations) -> TVector {
    let rr = |i: usize| if i == 0 { 0.0 } else { r.get(i) };
    let mut t = [0.0; 16];
    for i in 0..8 {
        let (a, b) = (rr(2 * i), rr(2 * i + 1));
        if i == 4 || i == 7 {
            t[2 * i] = 0.5 * (a - b);
            t[2 * i + 1] = 0.5 * (a + b);
        } else {
            t[2 * i] = 0.5 * (a + b);
            t[2 * i + 1] = 0.5 * (a - b);
        }
    }
    TVector { t }
}

/// JSON state document: `{"probs":[..16]}` and/or `{"correlations":[..15]}`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct StateDoc {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub probs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub correlations: Option<Vec<f64>>,
}

impl StateDoc {
    pub fn from_state(s: &GhzState) -> Self {
        StateDoc {
            probs: Some(s.probs().to_vec()),
            correlations: Some(s.correlations().values().to_vec()),
        }
    }

    /// Probabilities take precedence when both blocks are present.
    pub fn to_state(&self) -> Result<GhzState> {
        match (&self.probs, &self.correlations) {
            (Some(p), _) => GhzState::from_slice(p),
            (None, Some(r)) => state_from_correlations(&Correlations::from_slice(r)?),
            (None, None) => Err(Error::Invalid("state document needs probs or correlations".into())),
        }
    }
}
