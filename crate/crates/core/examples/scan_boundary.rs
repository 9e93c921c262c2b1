use ghzwl::optimizer::{distance_to_boundary, scan_numeric_boundary, OptimizerConfig};
use std::time::Instant;

fn main() {
    let mut args = std::env::args().skip(1);
    let p16: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let grid: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(30);
    let t = Instant::now();
    let scan = scan_numeric_boundary(p16, grid, &OptimizerConfig::default()).expect("scan");
    let level = scan.level_set();
    let d = distance_to_boundary(p16, &level).expect("boundary");
    let (k, worst) = d.iter().enumerate().fold((0, 0.0f64), |b, (i, &x)| if x > b.1 { (i, x) } else { b });
    if std::env::var("VERBOSE").is_ok() {
        for (p, dist) in level.iter().zip(&d) {
            let pt = ghzwl::family::FamilyPoint::from_probs(p.0, p.1, p16).unwrap();
            println!("{:.5} {:.5}  v={:.4} a={:.4}  d={:.2e}", p.0, p.1, pt.v, pt.alpha, dist);
        }
    }
    println!("p16 = {p16}, grid {grid}: {} crossings, max deviation {worst:.2e} at {:?} ({:.1?})", level.len(), level.get(k), t.elapsed());
}
