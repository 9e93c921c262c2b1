use ghzwl::optimizer::{appendix_e_correlations, minimize_l, Mode, OptimizerConfig};
use std::time::Instant;

fn main() {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let r = appendix_e_correlations();
    for mode in [Mode::Symmetric, Mode::Asymmetric] {
        let t = Instant::now();
        let o = minimize_l(&r, &OptimizerConfig::new(mode, seed)).expect("optimizer");
        println!("{mode:?}: L_min = {:.5}  ({:.2?})", o.l_min, t.elapsed());
        println!("  M = {:?}", o.m.iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>());
    }
}
