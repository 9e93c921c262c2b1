//! One explicit triseparable decomposition, written as JSON, with its reconstruction check.

use ghzwl::construct::{decompose_line_ab_fg, verify};
use ghzwl::family::FamilyPoint;

fn main() -> ghzwl::Result<()> {
    let pt = FamilyPoint::new(0.0, 0.4, 9.0)?;
    let dec = decompose_line_ab_fg(&pt)?;
    let rep = verify(&dec);
    println!("{} terms, weights sum to {:.12}, residual {:.1e}, ok {}", rep.terms, rep.weight_sum, rep.residual, rep.ok);
    println!("params {:?}", dec.params);
    let json = serde_json::to_string(&dec)?;
    println!("JSON document: {} bytes, first term {}", json.len(), serde_json::to_string(&dec.terms[0])?);
    Ok(())
}
