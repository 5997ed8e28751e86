//! Estimates a regularity tuple for the order relation by searching witnesses
//! over a grid of `δ` and fitting `ln K_i` against `ln(1/δ)`.

use zlab::families::FamilySpec;
use zlab::regularity::{estimate_on_instance, EstimateConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = FamilySpec::Order { n: 128 }.instance()?;
    let est = estimate_on_instance(&inst, &EstimateConfig::default())?;
    for p in &est.points {
        println!("delta={:<8} blocks={:?} meagre={:.4} verified={}", p.delta, p.blocks, p.meagre_mass, p.verified);
    }
    println!("c_hat = {:?}", est.c_hat);
    println!("lambda_hat = {:?}", est.lambda_hat);
    Ok(())
}
