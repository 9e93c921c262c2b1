//! Decomposes points along every boundary segment and reports reconstruction residuals.
//!
//! Usage: cargo run --release --example decompose_boundary -- [p16] [points]

use ghzwl::construct::{decompose, verify};
use ghzwl::family::boundary;

fn main() -> ghzwl::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let p16: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.3);
    let n: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(20);
    println!("segment source ok/total max_residual first_failure");
    for seg in boundary(p16, n)? {
        let (mut ok, mut worst, mut fail) = (0, 0.0f64, None);
        for pt in &seg.points {
            match decompose(pt, seg.source, seg.label) {
                Ok(d) => {
                    let rep = verify(&d);
                    worst = worst.max(rep.residual);
                    if rep.ok {
                        ok += 1;
                    } else if fail.is_none() {
                        fail = Some(format!("v={:.5} residual {:.2e}", pt.v, rep.residual));
                    }
                }
                Err(e) => {
                    if fail.is_none() {
                        fail = Some(format!("v={:.5} alpha={:.5}: {e}", pt.v, pt.alpha));
                    }
                }
            }
        }
        println!("{:4} {:8} {:>3}/{:<3} {:.2e} {}", seg.label, seg.source.name(), ok, seg.points.len(), worst, fail.unwrap_or_default());
    }
    Ok(())
}
