//! Weak witness to strong witness with exponents raised by one.
//!
//! Every block `A` of class `i` is cut into pieces of size
//! `N_i = ⌈δ^{c_i+1} n_i / 2⌉` plus a remainder shorter than `N_i`. Sizes are
//! then evened out to `⌊n_i/L_i⌋` or `⌈n_i/L_i⌉`: full pieces only shrink and
//! stay inside their parent block, remainders absorb the surplus. A cell made
//! of full pieces is bad exactly when its parent cell was; every cell touching
//! a remainder is bad.

use serde::{Deserialize, Serialize};

use super::{Cell, Mode, RegularityWitness, WitnessError};
use crate::hypergraph::{product_indices, Instance};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub witness: RegularityWitness,
    /// `N_i`.
    pub piece_size: Vec<usize>,
    /// Remainder blocks per class; they come first in each class.
    pub remainder_blocks: Vec<usize>,
    /// Full pieces per class (`K'_i`).
    pub full_blocks: Vec<usize>,
    /// Elements in remainder blocks per class, after balancing.
    pub remainder_mass: Vec<usize>,
    pub bad_mass: u128,
    source_blocks: Vec<usize>,
    source_delta: f64,
    source_lambda: f64,
    source_c: Vec<f64>,
    sizes: Vec<usize>,
}

/// Which of the quantitative guarantees hold for a refinement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementClaims {
    /// `K'_i ≤ 2 δ^{−(c_i+1)}`.
    pub full_block_bound: bool,
    /// Remainder of class `i` holds at most `λ δ n_i` elements.
    pub remainder_mass_bound: bool,
    /// Bad mass at most `(k+1) λ δ n_1⋯n_k`.
    pub bad_mass_bound: bool,
    /// `L_i ≤ K_i + K'_i`.
    pub block_count_bound: bool,
}

impl RefinementClaims {
    pub fn all(&self) -> bool {
        self.full_block_bound && self.remainder_mass_bound && self.bad_mass_bound && self.block_count_bound
    }
}

impl Refinement {
    pub fn claims(&self) -> RefinementClaims {
        let d = self.source_delta;
        let lam = self.source_lambda;
        let k = self.sizes.len();
        let total: f64 = self.sizes.iter().map(|&n| n as f64).product();
        RefinementClaims {
            full_block_bound: self
                .full_blocks
                .iter()
                .zip(&self.source_c)
                .all(|(&kp, &c)| kp as f64 <= 2.0 * d.powf(-(c + 1.0))),
            remainder_mass_bound: self
                .remainder_mass
                .iter()
                .zip(&self.sizes)
                .all(|(&m, &n)| m as f64 <= lam * d * n as f64),
            bad_mass_bound: self.bad_mass as f64 <= (k as f64 + 1.0) * lam * d * total,
            block_count_bound: self
                .witness
                .block_counts()
                .iter()
                .zip(self.source_blocks.iter().zip(&self.full_blocks))
                .all(|(&l, (&kk, &kp))| l <= kk + kp),
        }
    }
}

struct ClassCut {
    blocks: Vec<Vec<usize>>,
    remainders: usize,
    /// Parent block of each full piece.
    parent: Vec<usize>,
}

fn cut_class(blocks: &[Vec<usize>], n: usize, piece: usize) -> ClassCut {
    let mut full = Vec::new();
    let mut parent = Vec::new();
    let mut rest = Vec::new();
    for (p, block) in blocks.iter().enumerate() {
        let mut members = block.clone();
        members.sort_unstable();
        let whole = members.len() / piece * piece;
        for chunk in members[..whole].chunks(piece) {
            full.push(chunk.to_vec());
            parent.push(p);
        }
        if whole < members.len() {
            rest.push(members[whole..].to_vec());
        }
    }

    let count = full.len() + rest.len();
    let (q, r) = (n / count, n % count);
    // The +1 slots go to full pieces first; full pieces never need to grow.
    let target = |slot: usize| q + usize::from(slot < r);
    let mut pool = Vec::new();
    for (slot, b) in full.iter_mut().enumerate() {
        let t = target(slot);
        debug_assert!(b.len() >= t);
        pool.extend(b.drain(t..));
    }
    for (j, b) in rest.iter_mut().enumerate() {
        let t = target(full.len() + j);
        if b.len() > t {
            pool.extend(b.drain(t..));
        }
    }
    for (j, b) in rest.iter_mut().enumerate() {
        let t = target(full.len() + j);
        while b.len() < t {
            b.push(pool.pop().expect("sizes sum to n"));
        }
        b.sort_unstable();
    }
    debug_assert!(pool.is_empty());

    let remainders = rest.len();
    rest.extend(full);
    ClassCut { blocks: rest, remainders, parent }
}

/// Needs a witness passing weak verification with `δ < 1/λ`. The result has
/// exponents `c_i + 1` and coefficient `(k+2)λ`.
pub fn refine_to_strong(instance: &Instance, witness: &RegularityWitness) -> Result<Refinement, WitnessError> {
    if !witness.verify(instance, Mode::Weak)?.passed {
        return Err(WitnessError::NotWeak);
    }
    let delta = witness.delta();
    let lambda = witness.tuple().lambda();
    if delta >= 1.0 / lambda {
        return Err(WitnessError::DeltaTooLarge { delta, limit: 1.0 / lambda });
    }
    let sizes = instance.sizes();
    let k = sizes.len();
    let c = witness.tuple().exponents();

    let piece_size: Vec<usize> = sizes
        .iter()
        .zip(c)
        .map(|(&n, &ci)| ((0.5 * delta.powf(ci + 1.0) * n as f64).ceil() as usize).max(1))
        .collect();
    let cuts: Vec<ClassCut> = witness
        .parts()
        .iter()
        .zip(sizes.iter().zip(&piece_size))
        .map(|(blocks, (&n, &p))| cut_class(blocks, n, p))
        .collect();

    let counts: Vec<usize> = cuts.iter().map(|cc| cc.blocks.len()).collect();
    let mut sigma: Vec<Cell> = Vec::new();
    for cell in product_indices(&counts) {
        let touches_rest = cell.iter().zip(&cuts).any(|(&j, cc)| j < cc.remainders);
        if touches_rest {
            sigma.push(cell);
            continue;
        }
        let parent: Cell = cell.iter().zip(&cuts).map(|(&j, cc)| cc.parent[j - cc.remainders]).collect();
        if witness.sigma().contains(&parent) {
            sigma.push(cell);
        }
    }

    let tuple = witness.tuple().shifted(1.0, (k as f64 + 2.0) * lambda)?;
    let remainder_blocks: Vec<usize> = cuts.iter().map(|cc| cc.remainders).collect();
    let full_blocks: Vec<usize> = cuts.iter().map(|cc| cc.parent.len()).collect();
    let remainder_mass: Vec<usize> = cuts
        .iter()
        .map(|cc| cc.blocks[..cc.remainders].iter().map(Vec::len).sum())
        .collect();
    let parts = cuts.into_iter().map(|cc| cc.blocks).collect();
    let refined = RegularityWitness::new(delta, tuple, parts, sigma)?;
    let bad_mass = refined.bad_mass();
    Ok(Refinement {
        witness: refined,
        piece_size,
        remainder_blocks,
        full_blocks,
        remainder_mass,
        bad_mass,
        source_blocks: witness.block_counts(),
        source_delta: delta,
        source_lambda: lambda,
        source_c: c.to_vec(),
        sizes,
    })
}
