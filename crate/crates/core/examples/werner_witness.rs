//! Λ of the Werner witness by the closed form and by brute force, and L across the threshold.

use ghzwl::ghz::GhzState;
use ghzwl::witness::{k_from_m, lambda_all_partitions, lambda_symmetric, witness_report, WitnessParams};

fn main() -> ghzwl::Result<()> {
    let w = WitnessParams::werner();
    println!("K = {:?}", k_from_m(&w).k);
    println!("Lambda: closed form {}, brute force {:.9}", lambda_symmetric(&w)?, lambda_all_partitions(&w));
    for p in [0.1, 0.2, 0.3, 0.5, 1.0] {
        let rep = witness_report(&w, &GhzState::werner(p)?)?;
        println!("p = {p:.2}: <M> = {:.3}, L = {:.4}, entangled {}", rep.expectation, rep.l, rep.entangled);
    }
    Ok(())
}
