//! Evaluates the bound functions `F^ε_c`, `E_c` and the `γ_i` for a few tuples.

use zlab::bounds::{dominance, gammas, prelim_fixed_point, BoundReport};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for c in [vec![2.0, 2.0], vec![1.0, 3.0], vec![2.0, 2.0, 2.0]] {
        println!("c = {c:?}: gamma = {:?}", gammas(&c)?);
        for n in [10u64, 100, 1000] {
            let sizes = vec![n; c.len()];
            let r = BoundReport::evaluate(&c, &sizes, 0.05, 2, None)?;
            let nf: Vec<f64> = sizes.iter().map(|&x| x as f64).collect();
            let d = dominance(&c, &nf, 0.05)?;
            println!(
                "  n = {n:>5}: E = {:>12.2}  F = {:>12.2}  F/(E n^eps) = {:.3}  hypotheses hold: {}",
                r.e_value, r.f_value, d.ratio, d.hypothesis_holds
            );
        }
    }
    println!("fixed-point iterates from c = 2: {:?}", prelim_fixed_point(2.0, 6)?);
    Ok(())
}
