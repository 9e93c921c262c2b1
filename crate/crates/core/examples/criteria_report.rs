//! Criteria I, I', II, III and IV on a few states.

use ghzwl::criteria::evaluate;
use ghzwl::family::FamilyPoint;
use ghzwl::ghz::GhzState;

fn main() -> ghzwl::Result<()> {
    let states = [
        ("Werner p=0.19", GhzState::werner(0.19)?),
        ("Werner p=0.30", GhzState::werner(0.3)?),
        ("family p15=0.13 p2=0.005", FamilyPoint::from_probs(0.13, 0.005, 0.0)?.to_state()?),
        ("family v=0.5 alpha=8.5", FamilyPoint::new(0.0, 0.5, 8.5)?.to_state()?),
    ];
    for (name, s) in &states {
        let rep = evaluate(s);
        print!("{name:26} {:?}:", rep.verdict);
        for (c, r) in rep.all() {
            print!(" {c}={:+.4}{}", r.margin, if r.applicable { "" } else { "(n/a)" });
        }
        println!();
    }
    Ok(())
}
