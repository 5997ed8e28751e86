//! Empirical regularity exponents.
//!
//! For each `δ` on a grid, a greedy search splits blocks until the
//! non-homogeneous cells hold at most `δ n_1⋯n_k` tuples, then merges blocks
//! while that stays true. Exponents come from least-squares fits of
//! `log K_i` against `log(1/δ)`.
//!
//! Each step splits the block carrying the most bad mass (ties: the class with
//! fewer blocks, then lowest index). Its elements are ordered by index, by
//! degree into the block's bad cells, and by a seeded shuffle; the cut point
//! along those orders is the one that most lowers impurity, the number of
//! tuples on the minority side (edge or non-edge) of each bad cell. Under raw
//! bad mass, peeling single elements would win instead. Without any impurity
//! gain the block is halved.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Cell, Mode, RegularityWitness, WitnessError};
use crate::bounds::RegularityTuple;
use crate::families::splitmix64;
use crate::hypergraph::{Instance, Relation};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateConfig {
    /// Strictly decreasing, inside `(0, 1)`, at least 3 points.
    pub delta_grid: Vec<f64>,
    /// Candidate evaluations allowed per grid point.
    pub budget: usize,
    pub seed: u64,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            delta_grid: vec![0.25, 0.125, 0.0625, 0.03125],
            budget: 20_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub delta: f64,
    /// Whether a partition with bad mass at most `δ` was found in budget.
    pub found: bool,
    pub blocks: Vec<usize>,
    /// Bad mass over `n_1⋯n_k` of the final partition.
    pub meagre_mass: f64,
    pub evaluations: usize,
    /// The partition with the fitted tuple; present when the point was used
    /// in the fit.
    pub witness: Option<RegularityWitness>,
    /// Weak verification of `witness`.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassFit {
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleEstimate {
    pub points: Vec<GridPoint>,
    pub fits: Vec<ClassFit>,
    /// Fitted slopes; `None` when fewer than two grid points succeeded.
    pub c_hat: Option<Vec<f64>>,
    /// `max K_i δ^{ĉ_i}` over fitted points; may be below 1.
    pub lambda_hat: Option<f64>,
    /// Some grid point ran out of budget.
    pub budget_exhausted: bool,
}

/// Samples classes of the given sizes from the relation and estimates on the
/// induced instance.
pub fn estimate_tuple(relation: &Relation, sizes: &[usize], config: &EstimateConfig) -> Result<TupleEstimate, WitnessError> {
    if sizes.contains(&0) {
        return Err(WitnessError::EmptyClass);
    }
    let classes = relation.sample_classes(sizes)?;
    let instance = relation.induce(&classes)?;
    estimate_on_instance(&instance, config)
}

pub fn estimate_on_instance(instance: &Instance, config: &EstimateConfig) -> Result<TupleEstimate, WitnessError> {
    let grid = &config.delta_grid;
    if grid.len() < 3 {
        return Err(WitnessError::GridTooShort(grid.len()));
    }
    let ordered = grid.windows(2).all(|w| w[0] > w[1]) && grid[0] < 1.0 && grid[grid.len() - 1] > 0.0;
    if !ordered {
        return Err(WitnessError::GridOrder);
    }
    let sizes = instance.sizes();
    if sizes.contains(&0) {
        return Err(WitnessError::EmptyClass);
    }

    let searched: Vec<Searched> = grid
        .par_iter()
        .enumerate()
        .map(|(idx, &delta)| {
            let seed = splitmix64(config.seed ^ splitmix64(idx as u64 + 1));
            Search::new(instance, seed).run(delta, config.budget)
        })
        .collect();

    let k = instance.k();
    let used: Vec<usize> = (0..searched.len()).filter(|&j| searched[j].found).collect();
    let budget_exhausted = used.len() < searched.len();
    let mut fits = Vec::new();
    let mut c_hat = None;
    let mut lambda_hat = None;
    let mut tuple = None;
    if used.len() >= 2 {
        let x: Vec<f64> = used.iter().map(|&j| (1.0 / grid[j]).ln()).collect();
        for i in 0..k {
            let y: Vec<f64> = used.iter().map(|&j| (searched[j].blocks.len_of(i) as f64).ln()).collect();
            fits.push(least_squares(&x, &y));
        }
        let slopes: Vec<f64> = fits.iter().map(|f| f.slope).collect();
        let need = |c: &[f64]| {
            used.iter()
                .flat_map(|&j| (0..k).map(move |i| (j, i)))
                .map(|(j, i)| searched[j].blocks.len_of(i) as f64 * grid[j].powf(c[i]))
                .fold(f64::MIN, f64::max)
        };
        lambda_hat = Some(need(&slopes));
        let clamped: Vec<f64> = slopes.iter().map(|&s| s.max(0.0)).collect();
        let lambda = need(&clamped).max(1.0) * (1.0 + 1e-9);
        tuple = Some(RegularityTuple::new(clamped, lambda)?);
        c_hat = Some(slopes);
    }

    let mut points = Vec::with_capacity(searched.len());
    for (j, s) in searched.into_iter().enumerate() {
        let delta = grid[j];
        let blocks = s.blocks.counts();
        let (witness, verified) = match (&tuple, s.found) {
            (Some(t), true) => {
                let w = RegularityWitness::new(delta, t.clone(), s.blocks.parts, s.sigma)?;
                let ok = w.verify(instance, Mode::Weak)?.passed;
                (Some(w), ok)
            }
            _ => (None, false),
        };
        points.push(GridPoint {
            delta,
            found: s.found,
            blocks,
            meagre_mass: s.meagre_mass,
            evaluations: s.evaluations,
            witness,
            verified,
        });
    }
    Ok(TupleEstimate {
        points,
        fits,
        c_hat,
        lambda_hat,
        budget_exhausted,
    })
}

fn least_squares(x: &[f64], y: &[f64]) -> ClassFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = x.iter().zip(y).map(|(a, b)| b - (intercept + slope * a)).collect();
    ClassFit {
        slope,
        intercept,
        residuals,
    }
}

struct Partition {
    parts: Vec<Vec<Vec<usize>>>,
    /// Block of each element.
    of: Vec<Vec<usize>>,
    /// Position of each element inside its block.
    at: Vec<Vec<usize>>,
}

impl Partition {
    fn trivial(sizes: &[usize]) -> Self {
        Partition {
            parts: sizes.iter().map(|&n| vec![(0..n).collect()]).collect(),
            of: sizes.iter().map(|&n| vec![0; n]).collect(),
            at: sizes.iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    fn len_of(&self, i: usize) -> usize {
        self.parts[i].len()
    }

    fn counts(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    fn reindex(&mut self, i: usize) {
        for (b, members) in self.parts[i].iter().enumerate() {
            for (p, &x) in members.iter().enumerate() {
                self.of[i][x] = b;
                self.at[i][x] = p;
            }
        }
    }

    /// Moves `moved` out of block `b` of class `i` into a new last block.
    fn split(&mut self, i: usize, b: usize, moved: Vec<usize>) {
        let mut keep = vec![true; self.of[i].len()];
        for &x in &moved {
            keep[x] = false;
        }
        self.parts[i][b].retain(|&x| keep[x]);
        self.parts[i].push(moved);
        self.reindex(i);
    }

    fn merge(&mut self, i: usize, a: usize, b: usize) {
        let absorbed = self.parts[i].remove(b);
        self.parts[i][a].extend(absorbed);
        self.parts[i][a].sort_unstable();
        self.reindex(i);
    }

    fn cell_of(&self, edge: &[usize]) -> Cell {
        edge.iter().zip(&self.of).map(|(&x, of)| of[x]).collect()
    }

    fn cell_size(&self, cell: &[usize]) -> u128 {
        cell.iter().zip(&self.parts).map(|(&j, p)| p[j].len() as u128).product()
    }
}

struct Searched {
    found: bool,
    blocks: Partition,
    sigma: Vec<Cell>,
    meagre_mass: f64,
    evaluations: usize,
}

struct Search<'a> {
    instance: &'a Instance,
    part: Partition,
    rng: ChaCha8Rng,
    evaluations: usize,
}

impl<'a> Search<'a> {
    fn new(instance: &'a Instance, seed: u64) -> Self {
        Search {
            instance,
            part: Partition::trivial(&instance.sizes()),
            rng: ChaCha8Rng::seed_from_u64(seed),
            evaluations: 0,
        }
    }

    /// Mixed-radix key of the cell holding `edge`.
    fn key(&self, edge: &[usize], strides: &[u128]) -> u128 {
        edge.iter().zip(&self.part.of).zip(strides).map(|((&x, of), &s)| of[x] as u128 * s).sum()
    }

    fn strides(&self) -> Vec<u128> {
        let mut strides = Vec::with_capacity(self.instance.k());
        let mut acc = 1u128;
        for p in &self.part.parts {
            strides.push(acc);
            acc *= p.len() as u128;
        }
        strides
    }

    fn mixed_cells(&self) -> (Vec<Cell>, u128) {
        let strides = self.strides();
        let mut counts: HashMap<u128, u128> = HashMap::new();
        for e in self.instance.edges() {
            *counts.entry(self.key(e, &strides)).or_default() += 1;
        }
        let mut mixed = Vec::new();
        let mut mass = 0;
        for (key, n) in counts {
            let cell: Cell = self
                .part
                .parts
                .iter()
                .zip(&strides)
                .map(|(p, &s)| (key / s % p.len() as u128) as usize)
                .collect();
            let size = self.part.cell_size(&cell);
            if n < size {
                mass += size;
                mixed.push(cell);
            }
        }
        mixed.sort_unstable();
        (mixed, mass)
    }

    fn run(mut self, delta: f64, budget: usize) -> Searched {
        let total = self.instance.product_size();
        let target = delta * total as f64;
        let (mut mixed, mut mass) = self.mixed_cells();
        let mut found = mass as f64 <= target;
        while !found && self.evaluations < budget {
            self.split_step(&mixed, budget);
            (mixed, mass) = self.mixed_cells();
            found = mass as f64 <= target;
        }
        if found {
            (mixed, mass) = self.merge_phase(target, budget, mixed, mass);
        }
        Searched {
            found,
            meagre_mass: if total == 0 { 0.0 } else { mass as f64 / total as f64 },
            blocks: self.part,
            sigma: mixed,
            evaluations: self.evaluations,
        }
    }

    /// Merges neighbouring blocks (ordered by least element) while the bad
    /// mass stays within `target`.
    fn merge_phase(&mut self, target: f64, budget: usize, mut mixed: Vec<Cell>, mut mass: u128) -> (Vec<Cell>, u128) {
        let k = self.instance.k();
        'outer: loop {
            for i in 0..k {
                let mut by_min: Vec<usize> = (0..self.part.len_of(i)).collect();
                by_min.sort_by_key(|&b| self.part.parts[i][b].iter().min().copied());
                for pair in by_min.windows(2) {
                    if self.evaluations >= budget {
                        break 'outer;
                    }
                    self.evaluations += 1;
                    let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                    let before = self.part.parts[i].clone();
                    self.part.merge(i, a, b);
                    let (m, ms) = self.mixed_cells();
                    if ms as f64 <= target {
                        (mixed, mass) = (m, ms);
                        continue 'outer;
                    }
                    self.part.parts[i] = before;
                    self.part.reindex(i);
                }
            }
            break;
        }
        (mixed, mass)
    }

    fn split_step(&mut self, mixed: &[Cell], budget: usize) {
        let k = self.instance.k();
        let index: HashMap<&Cell, usize> = mixed.iter().enumerate().map(|(m, c)| (c, m)).collect();
        // rows[i][b]: mixed cells with block b in class i; slot[i][m]: position of m in its row
        let mut rows: Vec<Vec<Vec<usize>>> = (0..k).map(|i| vec![Vec::new(); self.part.len_of(i)]).collect();
        let mut slot: Vec<Vec<usize>> = vec![vec![0; mixed.len()]; k];
        for (m, cell) in mixed.iter().enumerate() {
            for i in 0..k {
                slot[i][m] = rows[i][cell[i]].len();
                rows[i][cell[i]].push(m);
            }
        }
        // counts[i][b][x_pos * width + slot]: edges of element x into each mixed cell of its row
        let mut counts: Vec<Vec<Vec<u32>>> = (0..k)
            .map(|i| {
                (0..self.part.len_of(i))
                    .map(|b| vec![0; self.part.parts[i][b].len() * rows[i][b].len()])
                    .collect()
            })
            .collect();
        for e in self.instance.edges() {
            let cell = self.part.cell_of(e);
            if let Some(&m) = index.get(&cell) {
                for i in 0..k {
                    let b = cell[i];
                    let width = rows[i][b].len();
                    counts[i][b][self.part.at[i][e[i]] * width + slot[i][m]] += 1;
                }
            }
        }

        // target: the block carrying the most bad mass
        let mut target: Option<(u128, usize, usize, usize)> = None;
        for i in 0..k {
            for b in 0..self.part.len_of(i) {
                let len = self.part.parts[i][b].len() as u128;
                if len < 2 || rows[i][b].is_empty() {
                    continue;
                }
                let row_mass: u128 = rows[i][b].iter().map(|&m| self.part.cell_size(&mixed[m])).sum();
                let better = match target {
                    None => true,
                    Some((tm, tk, _, _)) => row_mass > tm || (row_mass == tm && self.part.len_of(i) < tk),
                };
                if better {
                    target = Some((row_mass, self.part.len_of(i), i, b));
                }
            }
        }
        let Some((_, _, i, b)) = target else { return };
        let members = self.part.parts[i][b].clone();
        let row = &rows[i][b];
        let width = row.len();
        let other: Vec<u128> = row.iter().map(|&m| self.part.cell_size(&mixed[m]) / members.len() as u128).collect();
        let cnt = &counts[i][b];
        let degree: Vec<u32> = (0..members.len()).map(|p| cnt[p * width..(p + 1) * width].iter().sum()).collect();
        let mut by_degree: Vec<usize> = (0..members.len()).collect();
        by_degree.sort_by_key(|&p| (degree[p], members[p]));
        let mut shuffled: Vec<usize> = (0..members.len()).collect();
        shuffled.shuffle(&mut self.rng);
        let orders = [(0..members.len()).collect::<Vec<usize>>(), by_degree, shuffled];

        let mut best: Option<(u128, usize, usize)> = None;
        for (o, order) in orders.iter().enumerate() {
            if self.evaluations >= budget {
                break;
            }
            self.evaluations += 1;
            let (cut, gain) = best_cut(order, cnt, width, &other);
            if best.is_none_or(|(g, _, _)| gain > g) {
                best = Some((gain, o, cut));
            }
        }
        let moved: Vec<usize> = match best {
            Some((gain, o, cut)) if gain > 0 => orders[o][cut..].iter().map(|&p| members[p]).collect(),
            _ => members[members.len() / 2..].to_vec(),
        };
        let mut moved = moved;
        moved.sort_unstable();
        self.part.split(i, b, moved);
    }
}

/// Tuples on the minority side of a cell with `count` edges out of `size`.
fn impurity(count: u128, size: u128) -> u128 {
    count.min(size - count)
}

/// Best cut of `order` for one row: returns the cut position (elements
/// `order[cut..]` move out) and the impurity removed.
fn best_cut(order: &[usize], cnt: &[u32], width: usize, other: &[u128]) -> (usize, u128) {
    let len = order.len() as u128;
    let total: Vec<u128> = (0..width)
        .map(|s| order.iter().map(|&p| cnt[p * width + s] as u128).sum())
        .collect();
    let before: u128 = (0..width).map(|s| impurity(total[s], len * other[s])).sum();
    let mut left = vec![0u128; width];
    let mut best = (order.len() / 2, 0u128);
    for t in 1..order.len() {
        let p = order[t - 1];
        for s in 0..width {
            left[s] += cnt[p * width + s] as u128;
        }
        let (lt, rt) = (t as u128, len - t as u128);
        let after: u128 = (0..width)
            .map(|s| impurity(left[s], lt * other[s]) + impurity(total[s] - left[s], rt * other[s]))
            .sum();
        let gain = before - after;
        if gain > best.1 {
            best = (t, gain);
        }
    }
    best
}
