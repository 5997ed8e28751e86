//! Builds a weak witness for the order relation, verifies it, and refines it
//! into a strong one.

use zlab::families::FamilySpec;
use zlab::regularity::{contiguous_blocks, minimal_witness, refine_to_strong, Mode};
use zlab::RegularityTuple;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = FamilySpec::Order { n: 400 }.instance()?;
    // 8 blocks of 50 on each side: only the 8 diagonal cells are mixed
    let parts = vec![contiguous_blocks(400, 8), contiguous_blocks(400, 8)];
    let delta = 0.2;
    let tuple = RegularityTuple::new(vec![0.5, 0.5], 4.0)?;
    let weak = minimal_witness(&inst, parts, delta, tuple)?;
    let outcome = weak.verify(&inst, Mode::Weak)?;
    println!("weak: passed={} meagre mass={:.4} bad cells={}", outcome.passed, outcome.meagre_mass, weak.sigma().len());

    let refined = refine_to_strong(&inst, &weak)?;
    let strong = refined.witness.verify(&inst, Mode::Strong)?;
    println!(
        "strong: passed={} blocks={:?} piece sizes={:?} slack={:?}",
        strong.passed,
        refined.witness.block_counts(),
        refined.piece_size,
        strong.equipartition_slack
    );
    println!("claims: {:?}", refined.claims());
    Ok(())
}
