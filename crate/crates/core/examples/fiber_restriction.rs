//! Restricts a strong witness with singleton blocks in class 0 to the common
//! fibre of those pins. Shows the projected mass beside the scaled coefficient.

use zlab::hypergraph::Instance;
use zlab::regularity::{restrict, Mode, RegularityWitness};
use zlab::RegularityTuple;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // class 0 has 2 pins; class 1 has 4 elements in blocks {0,1},{2,3}
    let inst = Instance::from_sizes(&[2, 4], vec![vec![0, 0], vec![0, 2], vec![1, 0], vec![1, 1], vec![1, 2]])?;
    let parts = vec![vec![vec![0], vec![1]], vec![vec![0, 1], vec![2, 3]]];
    let tuple = RegularityTuple::new(vec![0.0, 1.0], 2.0)?;
    let w = RegularityWitness::new(0.4, tuple, parts, vec![vec![0, 0], vec![0, 1], vec![1, 1]])?;
    println!("source strong: {}", w.verify(&inst, Mode::Strong)?.passed);

    let r = restrict(&inst, &w)?;
    println!("fibre edges: {:?}", r.instance.edges());
    println!("same coefficient: passed={} mass ratio={:.3}", r.witness.verify(&r.instance, Mode::Weak)?.passed, r.mass_ratio);
    let scaled = r.scaled_witness()?;
    println!("coefficient u*lambda={}: passed={}", scaled.tuple().lambda(), scaled.verify(&r.instance, Mode::Weak)?.passed);
    Ok(())
}
