//! Edge-count bounds for `K_{u,...,u}`-free k-partite relations, and the
//! regularity partitions those bounds are built from.
//!
//! - [`hypergraph`]: k-partite relations, induced instances, exact
//!   `K_{u,...,u}` search.
//! - [`bounds`]: the exponent functions `γ_i`, the products `E_c` and the
//!   full bound `F^ε_c`, closed-form binary exponents and classical baselines.
//! - [`regularity`]: regularity witnesses, their verification, weak-to-strong
//!   refinement, fiber restriction, and an empirical tuple estimator.
//! - [`families`]: deterministic relation families (projective planes, grids,
//!   orders, modular sums, random).
//! - [`experiments`]: sweeps producing bound reports and the bad/good cell
//!   decomposition audit.

pub mod bounds;
pub mod cli;
pub mod experiments;
pub mod families;
pub mod hypergraph;
pub mod regularity;

pub use bounds::{BoundReport, RegularityTuple};
pub use hypergraph::{CompleteWitness, Element, Instance, Relation};
pub use regularity::{Mode, RegularityWitness, VerificationOutcome};
