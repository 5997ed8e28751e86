//! Regularity witnesses: per-class partitions with a set of bad cells, checked
//! against the three conditions of a (strong) distal regularity tuple.
//!
//! Given `δ`, exponents `c̄` and coefficient `λ`, a witness for an instance
//! passes when
//!
//! - (a) the bad cells cover at most `λ δ n_1⋯n_k` tuples,
//! - (b) every other cell is homogeneous (all edges or none),
//! - (c) class `i` has at most `λ δ^{−c_i}` blocks,
//!
//! and, in strong mode, every class partition is an equipartition.

mod estimate;
mod refine;
mod restrict;

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{BoundsError, RegularityTuple};
use crate::hypergraph::{HypergraphError, Instance};

pub use estimate::{estimate_on_instance, estimate_tuple, ClassFit, EstimateConfig, GridPoint, TupleEstimate};
pub use refine::{refine_to_strong, Refinement};
pub use restrict::{restrict, Restriction};

/// A cell: one block index per class.
pub type Cell = Vec<usize>;

#[derive(Debug, Error, PartialEq)]
pub enum WitnessError {
    #[error("delta = {0} must lie in (0, 1)")]
    Delta(f64),
    #[error("witness has {witness} classes, instance has {instance}")]
    ArityMismatch { witness: usize, instance: usize },
    #[error("class {class} has no blocks")]
    NoBlocks { class: usize },
    #[error("block {block} of class {class} is empty")]
    EmptyBlock { class: usize, block: usize },
    #[error("element {element} of class {class} appears in more than one block")]
    Overlap { class: usize, element: usize },
    #[error("element {element} of class {class} is out of range (class size {size})")]
    ElementOutOfRange { class: usize, element: usize, size: usize },
    #[error("element {element} of class {class} is in no block")]
    Uncovered { class: usize, element: usize },
    #[error("bad cell {cell:?} does not index existing blocks")]
    SigmaOutOfRange { cell: Cell },
    #[error("tuple has {tuple} exponents for {classes} classes")]
    TupleArity { tuple: usize, classes: usize },
    #[error("precondition failed: the witness does not pass weak verification")]
    NotWeak,
    #[error("precondition failed: the witness does not pass strong verification")]
    NotStrong,
    #[error("precondition failed: delta = {delta} must be below {limit}")]
    DeltaTooLarge { delta: f64, limit: f64 },
    #[error("precondition failed: class 0 must be partitioned into singletons")]
    NotSingletons,
    #[error("cannot restrict a witness of arity {0}")]
    Arity(usize),
    #[error("delta grid needs at least 3 points, got {0}")]
    GridTooShort(usize),
    #[error("delta grid must be strictly decreasing inside (0, 1)")]
    GridOrder,
    #[error("class sizes must be positive")]
    EmptyClass,
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Weak,
    Strong,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weak" => Ok(Mode::Weak),
            "strong" => Ok(Mode::Strong),
            other => Err(format!("unknown mode {other:?}, expected weak or strong")),
        }
    }
}

/// Partitions `P_i = A^i_1 ⊔ ⋯ ⊔ A^i_{K_i}` (as class index lists), the bad
/// cells `Σ`, and the parameters `δ`, `c̄`, `λ` they are claimed to satisfy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WitnessRepr", into = "WitnessRepr")]
pub struct RegularityWitness {
    delta: f64,
    tuple: RegularityTuple,
    parts: Vec<Vec<Vec<usize>>>,
    sigma: BTreeSet<Cell>,
}

#[derive(Serialize, Deserialize)]
struct WitnessRepr {
    delta: f64,
    lambda: f64,
    c: Vec<f64>,
    parts: Vec<Vec<Vec<usize>>>,
    sigma: Vec<Cell>,
}

impl TryFrom<WitnessRepr> for RegularityWitness {
    type Error = WitnessError;

    fn try_from(r: WitnessRepr) -> Result<Self, Self::Error> {
        let tuple = RegularityTuple::new(r.c, r.lambda)?;
        RegularityWitness::new(r.delta, tuple, r.parts, r.sigma)
    }
}

impl From<RegularityWitness> for WitnessRepr {
    fn from(w: RegularityWitness) -> Self {
        WitnessRepr {
            delta: w.delta,
            lambda: w.tuple.lambda(),
            c: w.tuple.exponents().to_vec(),
            parts: w.parts,
            sigma: w.sigma.into_iter().collect(),
        }
    }
}

impl RegularityWitness {
    /// Checks everything that does not need the instance: `δ ∈ (0,1)`, tuple
    /// arity, nonempty disjoint blocks, and bad cells within range.
    pub fn new<S>(delta: f64, tuple: RegularityTuple, parts: Vec<Vec<Vec<usize>>>, sigma: S) -> Result<Self, WitnessError>
    where
        S: IntoIterator<Item = Cell>,
    {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(WitnessError::Delta(delta));
        }
        if tuple.k() != parts.len() {
            return Err(WitnessError::TupleArity {
                tuple: tuple.k(),
                classes: parts.len(),
            });
        }
        for (class, blocks) in parts.iter().enumerate() {
            if blocks.is_empty() {
                return Err(WitnessError::NoBlocks { class });
            }
            let mut seen = HashSet::new();
            for (block, members) in blocks.iter().enumerate() {
                if members.is_empty() {
                    return Err(WitnessError::EmptyBlock { class, block });
                }
                for &element in members {
                    if !seen.insert(element) {
                        return Err(WitnessError::Overlap { class, element });
                    }
                }
            }
        }
        let sigma: BTreeSet<Cell> = sigma.into_iter().collect();
        for cell in &sigma {
            let ok = cell.len() == parts.len() && cell.iter().zip(&parts).all(|(&j, blocks)| j < blocks.len());
            if !ok {
                return Err(WitnessError::SigmaOutOfRange { cell: cell.clone() });
            }
        }
        Ok(RegularityWitness { delta, tuple, parts, sigma })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn tuple(&self) -> &RegularityTuple {
        &self.tuple
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<Vec<usize>>] {
        &self.parts
    }

    pub fn sigma(&self) -> &BTreeSet<Cell> {
        &self.sigma
    }

    pub fn block_counts(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// Number of tuples in a cell.
    pub fn cell_size(&self, cell: &[usize]) -> u128 {
        cell.iter().zip(&self.parts).map(|(&j, blocks)| blocks[j].len() as u128).product()
    }

    /// `Σ_{cells in Σ} ∏ |A^i_{j_i}|`.
    pub fn bad_mass(&self) -> u128 {
        self.sigma.iter().map(|c| self.cell_size(c)).sum()
    }

    /// Max minus min block size, per class.
    pub fn equipartition_slack(&self) -> Vec<usize> {
        self.parts
            .iter()
            .map(|blocks| {
                let sizes = blocks.iter().map(Vec::len);
                sizes.clone().max().unwrap_or(0) - sizes.min().unwrap_or(0)
            })
            .collect()
    }

    /// Checks that the blocks cover exactly the instance's classes.
    pub fn check_structure(&self, instance: &Instance) -> Result<(), WitnessError> {
        if instance.k() != self.k() {
            return Err(WitnessError::ArityMismatch {
                witness: self.k(),
                instance: instance.k(),
            });
        }
        for (class, (blocks, size)) in self.parts.iter().zip(instance.sizes()).enumerate() {
            let mut covered = vec![false; size];
            for &element in blocks.iter().flatten() {
                if element >= size {
                    return Err(WitnessError::ElementOutOfRange { class, element, size });
                }
                covered[element] = true;
            }
            if let Some(element) = covered.iter().position(|c| !c) {
                return Err(WitnessError::Uncovered { class, element });
            }
        }
        Ok(())
    }

    /// Block index of every element, per class.
    pub(crate) fn assignment(&self, sizes: &[usize]) -> Vec<Vec<usize>> {
        self.parts
            .iter()
            .zip(sizes)
            .map(|(blocks, &n)| {
                let mut of = vec![0; n];
                for (b, members) in blocks.iter().enumerate() {
                    for &x in members {
                        of[x] = b;
                    }
                }
                of
            })
            .collect()
    }

    /// Edge count of every cell that contains at least one edge.
    pub fn cell_edge_counts(&self, instance: &Instance) -> HashMap<Cell, u64> {
        let assign = self.assignment(&instance.sizes());
        let mut counts: HashMap<Cell, u64> = HashMap::new();
        for edge in instance.edges() {
            let cell: Cell = edge.iter().zip(&assign).map(|(&x, of)| of[x]).collect();
            *counts.entry(cell).or_default() += 1;
        }
        counts
    }

    pub fn verify(&self, instance: &Instance, mode: Mode) -> Result<VerificationOutcome, WitnessError> {
        verify(instance, self, mode)
    }
}

/// Result of checking a witness; `passed` is the conjunction of the flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationOutcome {
    pub mode: Mode,
    pub passed: bool,
    /// Bad-cell mass divided by `n_1⋯n_k`.
    pub meagre_mass: f64,
    pub meagre_ok: bool,
    /// `K_i / (λ δ^{−c_i})` per class.
    pub max_size_ratio: Vec<f64>,
    pub size_ok: bool,
    /// Good cells that are not homogeneous, sorted.
    pub offending_cells: Vec<Cell>,
    /// Max minus min block size, per class.
    pub equipartition_slack: Vec<usize>,
    pub equipartition_ok: bool,
}

pub fn verify(instance: &Instance, witness: &RegularityWitness, mode: Mode) -> Result<VerificationOutcome, WitnessError> {
    witness.check_structure(instance)?;
    let delta = witness.delta;
    let lambda = witness.tuple.lambda();
    let total = instance.product_size();

    let mass = witness.bad_mass();
    let meagre_mass = if total == 0 { 0.0 } else { mass as f64 / total as f64 };
    let meagre_ok = mass as f64 <= lambda * delta * total as f64;

    let max_size_ratio: Vec<f64> = witness
        .block_counts()
        .iter()
        .enumerate()
        .map(|(i, &k)| k as f64 / witness.tuple.block_cap(i, delta))
        .collect();
    let size_ok = max_size_ratio.iter().all(|&r| r <= 1.0);

    let mut offending_cells: Vec<Cell> = witness
        .cell_edge_counts(instance)
        .into_iter()
        .filter(|(cell, count)| (*count as u128) < witness.cell_size(cell) && !witness.sigma.contains(cell))
        .map(|(cell, _)| cell)
        .collect();
    offending_cells.sort_unstable();

    let equipartition_slack = witness.equipartition_slack();
    let equipartition_ok = equipartition_slack.iter().all(|&s| s <= 1);

    let passed = meagre_ok && size_ok && offending_cells.is_empty() && (mode == Mode::Weak || equipartition_ok);
    Ok(VerificationOutcome {
        mode,
        passed,
        meagre_mass,
        meagre_ok,
        max_size_ratio,
        size_ok,
        offending_cells,
        equipartition_slack,
        equipartition_ok,
    })
}

/// Contiguous blocks `[0, s), [s, 2s), ...` of a class of size `n`.
pub fn contiguous_blocks(n: usize, blocks: usize) -> Vec<Vec<usize>> {
    let blocks = blocks.clamp(1, n.max(1));
    (0..blocks)
        .map(|b| (b * n / blocks..(b + 1) * n / blocks).collect())
        .filter(|v: &Vec<usize>| !v.is_empty())
        .collect()
}

/// The witness whose bad cells are exactly the non-homogeneous cells of the
/// given partitions.
pub fn minimal_witness(
    instance: &Instance,
    parts: Vec<Vec<Vec<usize>>>,
    delta: f64,
    tuple: RegularityTuple,
) -> Result<RegularityWitness, WitnessError> {
    let probe = RegularityWitness::new(delta, tuple, parts, Vec::new())?;
    probe.check_structure(instance)?;
    let sigma: Vec<Cell> = probe
        .cell_edge_counts(instance)
        .into_iter()
        .filter(|(cell, count)| (*count as u128) < probe.cell_size(cell))
        .map(|(cell, _)| cell)
        .collect();
    RegularityWitness::new(probe.delta, probe.tuple, probe.parts, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;

    fn order_witness(n: u64, delta: f64) -> (Instance, RegularityWitness) {
        let inst = FamilySpec::Order { n }.instance().unwrap();
        let blocks = (1.0 / delta).ceil() as usize;
        let part = contiguous_blocks(n as usize, blocks);
        let sigma: Vec<Cell> = (0..part.len()).map(|j| vec![j, j]).collect();
        let tuple = RegularityTuple::new(vec![1.0, 1.0], 3.0).unwrap();
        let w = RegularityWitness::new(delta, tuple, vec![part.clone(), part], sigma).unwrap();
        (inst, w)
    }

    #[test]
    fn order_diagonal_witness_passes() {
        let (inst, w) = order_witness(100, 0.1);
        // rounding of 1/δ may give 10 or 11 blocks
        assert!(w.block_counts()[0] >= 10);
        let out = w.verify(&inst, Mode::Weak).unwrap();
        assert!(out.passed, "{out:?}");
        assert!((out.meagre_mass - 0.1).abs() < 0.02);
        let strong = w.verify(&inst, Mode::Strong).unwrap();
        assert!(strong.passed);
    }

    #[test]
    fn full_relation_single_cell() {
        let inst = FamilySpec::Random { sizes: vec![4, 3, 2], p: 1.0, seed: 0 }.instance().unwrap();
        let parts: Vec<_> = inst.sizes().iter().map(|&n| vec![(0..n).collect()]).collect();
        let tuple = RegularityTuple::new(vec![0.0; 3], 2.0).unwrap();
        let w = RegularityWitness::new(0.3, tuple, parts, Vec::new()).unwrap();
        assert!(w.verify(&inst, Mode::Strong).unwrap().passed);

        let mut edges = inst.edges().to_vec();
        edges.pop();
        let holed = Instance::new(inst.classes().to_vec(), edges).unwrap();
        let out = w.verify(&holed, Mode::Weak).unwrap();
        assert!(!out.passed);
        assert_eq!(out.offending_cells, vec![vec![0, 0, 0]]);
    }

    #[test]
    fn too_many_blocks_fails_condition_c() {
        let (inst, w) = order_witness(100, 0.1);
        let tight = RegularityTuple::new(vec![0.5, 0.5], 1.5).unwrap();
        let w = RegularityWitness::new(w.delta(), tight, w.parts().to_vec(), w.sigma().clone()).unwrap();
        let out = w.verify(&inst, Mode::Weak).unwrap();
        assert!(!out.size_ok && !out.passed);
        assert!(out.offending_cells.is_empty());
    }

    #[test]
    fn strong_mode_needs_equipartition() {
        let inst = FamilySpec::Random { sizes: vec![5, 2], p: 1.0, seed: 0 }.instance().unwrap();
        let parts = vec![vec![vec![0], vec![1, 2, 3, 4]], vec![vec![0, 1]]];
        let tuple = RegularityTuple::new(vec![1.0, 1.0], 4.0).unwrap();
        let w = RegularityWitness::new(0.5, tuple, parts, Vec::new()).unwrap();
        assert!(w.verify(&inst, Mode::Weak).unwrap().passed);
        let strong = w.verify(&inst, Mode::Strong).unwrap();
        assert!(!strong.passed && !strong.equipartition_ok);
        assert_eq!(strong.equipartition_slack, vec![3, 0]);
    }

    #[test]
    fn structural_errors_are_distinct() {
        let tuple = RegularityTuple::new(vec![1.0, 1.0], 2.0).unwrap();
        assert_eq!(
            RegularityWitness::new(0.2, tuple.clone(), vec![vec![vec![0], vec![]], vec![vec![0]]], Vec::new()).unwrap_err(),
            WitnessError::EmptyBlock { class: 0, block: 1 }
        );
        assert_eq!(
            RegularityWitness::new(0.2, tuple.clone(), vec![vec![vec![0, 1], vec![1]], vec![vec![0]]], Vec::new()).unwrap_err(),
            WitnessError::Overlap { class: 0, element: 1 }
        );
        assert!(matches!(
            RegularityWitness::new(0.2, tuple.clone(), vec![vec![vec![0]], vec![vec![0]]], vec![vec![0, 1]]),
            Err(WitnessError::SigmaOutOfRange { .. })
        ));
        assert_eq!(
            RegularityWitness::new(1.0, tuple.clone(), vec![vec![vec![0]], vec![vec![0]]], Vec::new()).unwrap_err(),
            WitnessError::Delta(1.0)
        );
        let inst = Instance::from_sizes(&[2, 1], vec![]).unwrap();
        let w = RegularityWitness::new(0.2, tuple, vec![vec![vec![0]], vec![vec![0]]], Vec::new()).unwrap();
        assert_eq!(w.verify(&inst, Mode::Weak).unwrap_err(), WitnessError::Uncovered { class: 0, element: 1 });
    }

    #[test]
    fn witness_json_matches_documented_format() {
        let json = r#"{"delta":0.1,"lambda":3.0,"c":[1.0,1.0],"parts":[[[0,1,2],[3,4,5]],[[0,1],[2,3],[4,5]]],"sigma":[[0,0],[1,2]]}"#;
        let w: RegularityWitness = serde_json::from_str(json).unwrap();
        assert_eq!(w.block_counts(), vec![2, 3]);
        assert_eq!(w.bad_mass(), 12);
        assert_eq!(serde_json::to_string(&w).unwrap(), json);
        let short = r#"{"delta":0.1,"lambda":3.0,"c":[1,1],"parts":[[[0,1,2],[3,4,5]],[[0,1],[2,3],[4,5]]],"sigma":[[0,0],[1,2]]}"#;
        assert!(serde_json::from_str::<RegularityWitness>(short).is_ok());
        let bad = r#"{"delta":0.1,"lambda":1.0,"c":[1,1],"parts":[[[0]],[[0]]],"sigma":[]}"#;
        assert!(serde_json::from_str::<RegularityWitness>(bad).is_err());
    }

    #[test]
    fn verify_ignores_block_order() {
        let (inst, w) = order_witness(60, 0.2);
        let before = w.verify(&inst, Mode::Strong).unwrap();
        let k0 = w.parts()[0].len();
        // reverse the blocks of class 0 and relabel Σ to match
        let mut parts = w.parts().to_vec();
        parts[0].reverse();
        let sigma: Vec<Cell> = w.sigma().iter().map(|c| vec![k0 - 1 - c[0], c[1]]).collect();
        let permuted = RegularityWitness::new(w.delta(), w.tuple().clone(), parts, sigma).unwrap();
        let after = permuted.verify(&inst, Mode::Strong).unwrap();
        assert_eq!(before.passed, after.passed);
        assert_eq!(before.meagre_mass, after.meagre_mass);
    }

    #[test]
    fn minimal_witness_has_no_offenders() {
        let inst = FamilySpec::Random { sizes: vec![12, 9], p: 0.4, seed: 2 }.instance().unwrap();
        let parts = vec![contiguous_blocks(12, 3), contiguous_blocks(9, 3)];
        let tuple = RegularityTuple::new(vec![1.0, 1.0], 40.0).unwrap();
        let w = minimal_witness(&inst, parts, 0.9, tuple).unwrap();
        let out = w.verify(&inst, Mode::Weak).unwrap();
        assert!(out.offending_cells.is_empty());
    }
}
