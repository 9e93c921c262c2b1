//! Small scalar routines: bracketed roots, golden-section search, polynomial roots.

use nalgebra::DMatrix;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `f` on `[a, b]` by golden-section search. Returns `(x, f(x))`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    let mut best = (x, fx);
    for (xx, ff) in [(c, fc), (d, fd)] {
        if ff > best.1 {
            best = (xx, ff);
        }
    }
    best
}

pub fn golden_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, fx) = golden_max(|x| -f(x), a, b, tol);
    (x, -fx)
}

/// Dense scan followed by golden-section refinement around the best sample.
pub fn scan_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize, tol: f64) -> (f64, f64) {
    let h = (b - a) / (n - 1) as f64;
    let mut bi = 0;
    let mut bv = f64::NEG_INFINITY;
    for i in 0..n {
        let v = f(a + h * i as f64);
        if v.is_finite() && v > bv {
            bv = v;
            bi = i;
        }
    }
    if !bv.is_finite() {
        return (f64::NAN, f64::NAN);
    }
    let lo = a + h * bi.saturating_sub(1) as f64;
    let hi = (a + h * (bi + 1) as f64).min(b);
    let (x, v) = golden_max(&f, lo, hi, tol);
    if v.is_finite() && v >= bv {
        (x, v)
    } else {
        (a + h * bi as f64, bv)
    }
}

/// Compass search maximizing `f` from `x0`: axis moves with step halving down to `tol`.
pub fn compass_max<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], step: f64, tol: f64) -> (Vec<f64>, f64) {
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut step = step;
    while step >= tol {
        let mut moved = true;
        while moved {
            moved = false;
            for i in 0..x.len() {
                for sgn in [1.0, -1.0] {
                    let mut y = x.clone();
                    y[i] += sgn * step;
                    let fy = f(&y);
                    if fy > fx {
                        x = y;
                        fx = fy;
                        moved = true;
                    }
                }
            }
        }
        step *= 0.5;
    }
    (x, fx)
}

/// Brent's method on a sign-changing bracket.
pub fn brent<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Option<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Some(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Some(b)
}

/// Real roots of `Σ c[i] x^i` via companion-matrix eigenvalues, polished by Newton steps.
/// Roots whose imaginary part is below `imag_tol` (relative) are kept.
pub fn real_poly_roots(c: &[f64], imag_tol: f64) -> Vec<f64> {
    let mut c = c.to_vec();
    while c.len() > 1 && c[c.len() - 1] == 0.0 {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return vec![];
    }
    let lead = c[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    let eig = m.complex_eigenvalues();
    let mut out: Vec<f64> = eig
        .iter()
        .filter(|z| z.im.abs() <= imag_tol * (1.0 + z.re.abs()))
        .map(|z| polish_root(&c, z.re))
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

pub fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn poly_deriv(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, &ci)| ci * i as f64).collect()
}

fn polish_root(c: &[f64], mut x: f64) -> f64 {
    let d = poly_deriv(c);
    for _ in 0..30 {
        let fx = poly_eval(c, x);
        let dx = poly_eval(&d, x);
        if dx == 0.0 {
            break;
        }
        let step = fx / dx;
        let nx = x - step;
        if poly_eval(c, nx).abs() > fx.abs() {
            break;
        }
        x = nx;
        if step.abs() < 1e-16 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}
