//! Decides `K_{u,u}`-freeness for a few generated families and prints any witness.

use zlab::families::FamilySpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = [
        FamilySpec::ProjectivePlane { q: 5 },
        FamilySpec::Order { n: 12 },
        FamilySpec::GridPointLine { m: 5, p: 7 },
        FamilySpec::Random { sizes: vec![20, 20], p: 0.3, seed: 7 },
    ];
    for spec in &specs {
        let inst = spec.instance()?;
        for u in 2..=3 {
            match inst.find_complete(u) {
                Some(w) => {
                    assert!(w.check(&inst, u));
                    println!("{:<18} {:<22} u={u}: contains {:?}", spec.name(), spec.params(), w.parts);
                }
                None => println!("{:<18} {:<22} u={u}: free", spec.name(), spec.params()),
            }
        }
    }
    Ok(())
}
