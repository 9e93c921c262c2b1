//! GHZ basis, density matrix and correlation vector of a generalized Werner state.

use ghzwl::ghz::{correlations_by_trace, ghz_basis_state, t_from_r, GhzState, LABELS};

fn main() -> ghzwl::Result<()> {
    let v = ghz_basis_state(1)?;
    println!("|GHZ_1> nonzero amplitudes: {:?}", v.iter().enumerate().filter(|(_, a)| a.norm() > 0.0).map(|(i, a)| (i, a.re)).collect::<Vec<_>>());
    let s = GhzState::werner(0.3)?;
    let rho = s.density_matrix();
    println!("rho[1,1] = {:.5}, rho[1,16] = {:.5}, X-type: {}", rho.re(1, 1), rho.re(1, 16), rho.is_x_type());
    let r = s.correlations();
    let r2 = correlations_by_trace(&rho);
    println!("trace route agrees to {:.1e}", r.max_abs_diff(&r2));
    for (i, l) in LABELS.iter().enumerate() {
        println!("  R{:<2} {l} = {:+.4}", i + 1, r.get(i + 1));
    }
    println!("T = {:?}", t_from_r(&r).t.iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>());
    Ok(())
}
