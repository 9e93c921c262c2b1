//! Evidence that each criterion set is strictly stronger than the previous one.

fn main() -> ghzwl::Result<()> {
    let rep = ghzwl::optimizer::verify_hierarchy(7)?;
    println!("C1 vs C2: family point {:?}", rep.c1_state);
    println!("  criterion I margin {:+.4}, criterion II margin {:+.4}", rep.c1_margin_i, rep.c1_margin_ii);
    println!("C2 vs C3: symmetric L_min {:.4}, asymmetric L_min {:.4}", rep.appendix_e_symmetric, rep.appendix_e_asymmetric);
    println!("Werner p = {} passes C2: {}", rep.werner_p, rep.werner_passes_c2);
    Ok(())
}
