//! Landmarks and boundary segments of the symmetric family for p16 = 0 and 0.3.

use ghzwl::family::{boundary, eta_of_k, landmarks, point_c};

fn main() -> ghzwl::Result<()> {
    for p16 in [0.0, 0.3] {
        println!("p16 = {p16}");
        for l in landmarks(p16)? {
            println!("  {} v = {:.7} alpha = {:.6} (p15 = {:.5}, p2 = {:.5})", l.label, l.v, l.alpha, l.p15, l.p2);
        }
        for s in boundary(p16, 20)? {
            println!("  segment {:4} from criterion {:8} {} points", s.label, s.source.name(), s.points.len());
        }
        let c = point_c(p16)?;
        for dk in [-0.1, 0.0, 1.0, 3.0] {
            let e = eta_of_k(c.k + dk, p16)?;
            println!("  eta(K_C {dk:+}) = {:+.6} (max of F {:.1e}, negative {})", e.eta, e.residual, e.negative);
        }
    }
    Ok(())
}
