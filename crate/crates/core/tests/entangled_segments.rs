//! Boundary points whose diagonal sector admits no separable decomposition: a witness with
//! nonzero M_1..M_6 detects them, and the construction reports a negative corrector.

use ghzwl::construct::decompose;
use ghzwl::family::{cd_curve, quartic_alpha, FamilyPoint, Source};
use ghzwl::witness::{lambda_all_partitions, witness_report, WitnessParams};

fn witness(md: f64, m7: f64, m8: f64, m9: f64, m15: f64) -> WitnessParams {
    let mut m = [md; 15];
    m[6] = m7;
    m[7] = m8;
    m[8..14].iter_mut().for_each(|x| *x = m9);
    m[14] = m15;
    WitnessParams::new(m).unwrap()
}

#[test]
fn cd_point_at_p16_03_is_entangled() {
    let (v, alpha) = cd_curve(4.8).unwrap();
    let pt = FamilyPoint::new(0.3, v, alpha).unwrap();
    let w = witness(0.2096, -0.2164, -1.0, -0.2505, 0.3007);
    let rep = witness_report(&w, &pt.to_state().unwrap()).unwrap();
    assert!(rep.l < 0.97, "L = {}", rep.l);
    assert!((rep.lambda - lambda_all_partitions(&w)).abs() < 1e-12);
    assert!(decompose(&pt, Source::IV, "CD").is_err());
}

#[test]
fn bc_point_at_p16_0_is_entangled() {
    let v = 0.74;
    let alpha = quartic_alpha(v).unwrap().1;
    let pt = FamilyPoint::new(0.0, v, alpha).unwrap();
    let w = witness(-0.4991, 0.6158, -0.1201, -1.0, 0.8878);
    let rep = witness_report(&w, &pt.to_state().unwrap()).unwrap();
    assert!(rep.l < 0.995, "L = {}", rep.l);
    assert!(decompose(&pt, Source::III, "BC").is_err());
}

#[test]
fn same_points_pass_with_antidiagonal_witnesses_only() {
    use ghzwl::optimizer::{minimize_l, OptimizerConfig};
    let (v, alpha) = cd_curve(4.8).unwrap();
    let r = FamilyPoint::new(0.3, v, alpha).unwrap().correlations();
    let o = minimize_l(&r, &OptimizerConfig { starts: 50, ..Default::default() }).unwrap();
    assert!(o.l_min > 1.0 - 1e-4, "L_min = {}", o.l_min);
}
