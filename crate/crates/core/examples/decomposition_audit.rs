//! Splits the edges of a relation along a witness into those in bad cells and
//! those in good cells, and compares the bad-cell count with its cap.

use zlab::experiments::audit_decomposition;
use zlab::families::FamilySpec;
use zlab::regularity::{contiguous_blocks, minimal_witness, refine_to_strong};
use zlab::RegularityTuple;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = FamilySpec::Order { n: 80 }.instance()?;
    let parts = vec![contiguous_blocks(80, 8), contiguous_blocks(80, 8)];
    let weak = minimal_witness(&inst, parts, 0.15, RegularityTuple::new(vec![1.0, 1.0], 6.0)?)?;
    let strong = refine_to_strong(&inst, &weak)?.witness;
    for (name, w) in [("weak", &weak), ("strong", &strong)] {
        let a = audit_decomposition(&inst, w)?;
        println!(
            "{name:<6}: I1={} I2={} edges={} bad cells={} cap={:.1} within cap={} near equal={}",
            a.i1, a.i2, a.edges, a.sigma_count, a.sigma_cap, a.within_cap, a.near_equal
        );
    }
    Ok(())
}
