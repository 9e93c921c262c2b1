//! Published reference values used by `reproduce` and the acceptance checks.

/// Label, v, α and p16 of each published landmark. Rounded entries carry their printed precision.
pub struct LandmarkRef {
    pub label: &'static str,
    pub p16: f64,
    pub v: Option<f64>,
    pub alpha: Option<f64>,
    pub tol: f64,
}

pub const SQRT41: f64 = 6.403_124_237_432_849;

pub const LANDMARKS: [LandmarkRef; 13] = [
    LandmarkRef { label: "A", p16: 0.0, v: Some(1.0 / 6.0), alpha: Some(9.0), tol: 1e-9 },
    LandmarkRef { label: "B", p16: 0.0, v: Some((5.0 + SQRT41) / 16.0), alpha: Some(9.0), tol: 1e-9 },
    LandmarkRef { label: "C", p16: 0.0, v: Some(0.749_239_4), alpha: Some(8.900_032), tol: 5e-6 },
    LandmarkRef { label: "E", p16: 0.0, v: Some(10.0 / 11.0), alpha: Some(80.0 / 11.0), tol: 1e-9 },
    LandmarkRef { label: "F", p16: 0.0, v: Some(7.0 / 8.0), alpha: Some(7.0), tol: 1e-9 },
    LandmarkRef { label: "G", p16: 0.0, v: Some(1.0 / 8.0), alpha: Some(7.0), tol: 1e-9 },
    LandmarkRef { label: "C", p16: 0.3, v: Some(0.749_239_4), alpha: Some(8.900_032), tol: 5e-6 },
    LandmarkRef { label: "D", p16: 0.3, v: None, alpha: Some(22.0 / 3.0), tol: 1e-9 },
    LandmarkRef { label: "F", p16: 0.3, v: Some(5.0 / 6.0), alpha: Some(5.0), tol: 1e-9 },
    LandmarkRef { label: "G", p16: 0.3, v: Some((11.0 - SQRT41) / 16.0), alpha: Some(5.0), tol: 1e-9 },
    LandmarkRef { label: "H", p16: 0.3, v: Some(0.2508), alpha: Some(5.50), tol: 5e-3 },
    LandmarkRef { label: "I", p16: 0.3, v: None, alpha: Some(20.0 / 3.0), tol: 1e-9 },
    LandmarkRef { label: "J", p16: 0.3, v: None, alpha: Some(8.0), tol: 1e-9 },
];

/// p2 at I and J for p16 = 0.3.
pub const P2_I: f64 = 0.06;
pub const P2_J: f64 = 0.05;

pub const K_C: f64 = 0.662_627_5;
pub const V_C: f64 = 0.749_239_4;
pub const ALPHA_C: f64 = 8.900_032;
pub const C_TOL: f64 = 5e-6;

pub const WERNER_THRESHOLD: f64 = 0.2;
pub const WERNER_LAMBDA: f64 = 2.0;

/// R_8..R_15 of the state separating symmetric from asymmetric witnesses.
pub const APPENDIX_E_R: [f64; 8] = [0.3255, -0.5260, 0.0739, 0.4046, -0.8764, -0.4321, -0.5037, 0.8752];
pub const APPENDIX_E_SYMMETRIC: f64 = 0.6641;
pub const APPENDIX_E_ASYMMETRIC: f64 = 0.5347;
pub const APPENDIX_E_TOL: f64 = 5e-3;

pub const BOUNDARY_SCAN_TOL: f64 = 2e-3;
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
