//! Restriction of a strong witness to the common fiber of class 0.
//!
//! With class 0 split into singletons `{a_1}, ..., {a_u}`, the relation
//! `R = ⋂_e E(a_e, ·)` on the remaining classes inherits the other partitions
//! and the projection of the bad cells. Each good cell of `R` is an
//! intersection of good cells of `E`, hence homogeneous.
//!
//! The projected bad mass is bounded by the original one, which is at most
//! `λ δ u n_2⋯n_k`. Keeping the coefficient `λ` therefore needs the bad mass
//! to be `u` times smaller than what the input witness guarantees;
//! [`Restriction::mass_ratio`] reports how close it is, and
//! [`Restriction::scaled_witness`] carries the coefficient `uλ` that always
//! suffices.

use serde::{Deserialize, Serialize};

use super::{Cell, Mode, RegularityWitness, WitnessError};
use crate::hypergraph::Instance;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Restriction {
    /// The common fiber relation on classes `1..k`.
    pub instance: Instance,
    /// Partitions of classes `1..k`, projected bad cells, exponents without
    /// `c_1`, same `δ` and `λ`.
    pub witness: RegularityWitness,
    /// Number of pins `u`.
    pub pins: usize,
    pub bad_mass: u128,
    /// `bad_mass / (λ δ n_2⋯n_k)`.
    pub mass_ratio: f64,
}

impl Restriction {
    /// The restricted witness with coefficient `uλ`.
    pub fn scaled_witness(&self) -> Result<RegularityWitness, WitnessError> {
        let w = &self.witness;
        let lambda = w.tuple().lambda() * self.pins.max(1) as f64;
        let tuple = crate::bounds::RegularityTuple::new(w.tuple().exponents().to_vec(), lambda)?;
        RegularityWitness::new(w.delta(), tuple, w.parts().to_vec(), w.sigma().clone())
    }
}

/// Needs a witness passing strong verification whose class-0 blocks are all
/// singletons, with `δ < u^{−c_1}` for `u = n_1`.
pub fn restrict(instance: &Instance, witness: &RegularityWitness) -> Result<Restriction, WitnessError> {
    let k = witness.k();
    if k < 2 {
        return Err(WitnessError::Arity(k));
    }
    if !witness.verify(instance, Mode::Strong)?.passed {
        return Err(WitnessError::NotStrong);
    }
    if witness.parts()[0].iter().any(|b| b.len() != 1) {
        return Err(WitnessError::NotSingletons);
    }
    let u = witness.parts()[0].len();
    let delta = witness.delta();
    let limit = (u as f64).powf(-witness.tuple().exponents()[0]);
    if delta >= limit {
        return Err(WitnessError::DeltaTooLarge { delta, limit });
    }

    let pins: Vec<usize> = (0..u).collect();
    let fiber = instance.intersect_fibers(0, &pins)?;
    let sigma: Vec<Cell> = witness.sigma().iter().map(|c| c[1..].to_vec()).collect();
    let tuple = witness.tuple().without(0)?;
    let lambda = tuple.lambda();
    let restricted = RegularityWitness::new(delta, tuple, witness.parts()[1..].to_vec(), sigma)?;
    let bad_mass = restricted.bad_mass();
    let rest_size = fiber.product_size() as f64;
    Ok(Restriction {
        instance: fiber,
        witness: restricted,
        pins: u,
        bad_mass,
        mass_ratio: bad_mass as f64 / (lambda * delta * rest_size),
    })
}
