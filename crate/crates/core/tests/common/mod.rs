#![allow(dead_code)]

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use zlab::bounds::RegularityTuple;
use zlab::hypergraph::Instance;
use zlab::regularity::{Cell, RegularityWitness};

/// All `u`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, u: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, u: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == u {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < u - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, u, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, u, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Tries every choice of `u` elements per class.
pub fn naive_contains(inst: &Instance, u: usize) -> bool {
    let k = inst.k();
    let edges: HashSet<&Vec<usize>> = inst.edges().iter().collect();
    let choices: Vec<Vec<Vec<usize>>> = inst.sizes().iter().map(|&n| subsets(n, u)).collect();
    if choices.iter().any(Vec::is_empty) {
        return false;
    }
    let mut pick = vec![0usize; k];
    loop {
        let parts: Vec<&Vec<usize>> = (0..k).map(|i| &choices[i][pick[i]]).collect();
        if all_tuples_present(&parts, &edges) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn all_tuples_present(parts: &[&Vec<usize>], edges: &HashSet<&Vec<usize>>) -> bool {
    let k = parts.len();
    let u = parts[0].len();
    let mut idx = vec![0usize; k];
    let mut tuple = vec![0usize; k];
    loop {
        for i in 0..k {
            tuple[i] = parts[i][idx[i]];
        }
        if !edges.contains(&tuple) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == k {
                return true;
            }
            idx[i] += 1;
            if idx[i] < u {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

pub fn random_instance(rng: &mut impl Rng, sizes: &[usize], p: f64) -> Instance {
    let edges = product(sizes).into_iter().filter(|_| rng.random_bool(p)).collect();
    Instance::from_sizes(sizes, edges).unwrap()
}

pub fn product(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |j| {
                    let mut t = t.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    out
}

/// Random partition of `0..n` into `blocks` nonempty blocks.
pub fn random_partition(rng: &mut impl Rng, n: usize, blocks: usize) -> Vec<Vec<usize>> {
    let mut elems: Vec<usize> = (0..n).collect();
    elems.shuffle(rng);
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, n - 1, blocks - 1).into_iter().map(|x| x + 1).collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut out = Vec::new();
    let mut start = 0;
    for c in cuts {
        let mut b = elems[start..c].to_vec();
        b.sort_unstable();
        out.push(b);
        start = c;
    }
    out
}

/// Cuts `0..n` into `blocks` contiguous blocks with sizes within one, after a shuffle.
pub fn random_equipartition(rng: &mut impl Rng, n: usize, blocks: usize) -> Vec<Vec<usize>> {
    let mut elems: Vec<usize> = (0..n).collect();
    elems.shuffle(rng);
    (0..blocks)
        .map(|b| {
            let mut v = elems[b * n / blocks..(b + 1) * n / blocks].to_vec();
            v.sort_unstable();
            v
        })
        .collect()
}

/// Block-structured instance: each cell is full, empty, or (with probability
/// `p_mixed`) random. Returns the instance and the cells drawn as random.
pub fn block_instance(rng: &mut impl Rng, sizes: &[usize], parts: &[Vec<Vec<usize>>], p_mixed: f64) -> (Instance, Vec<Cell>) {
    let counts: Vec<usize> = parts.iter().map(Vec::len).collect();
    let mut edges = Vec::new();
    let mut mixed = Vec::new();
    for cell in product(&counts) {
        let kind = if rng.random_bool(p_mixed) { 2 } else { rng.random_range(0..2) };
        let members: Vec<Vec<usize>> = cell.iter().zip(parts).map(|(&j, p)| p[j].clone()).collect();
        let tuples = product(&members.iter().map(Vec::len).collect::<Vec<_>>());
        for t in tuples {
            let e: Vec<usize> = t.iter().zip(&members).map(|(&x, m)| m[x]).collect();
            let keep = match kind {
                0 => false,
                1 => true,
                _ => rng.random_bool(0.5),
            };
            if keep {
                edges.push(e);
            }
        }
        if kind == 2 {
            mixed.push(cell);
        }
    }
    (Instance::from_sizes(sizes, edges).unwrap(), mixed)
}

pub fn bad_mass(parts: &[Vec<Vec<usize>>], sigma: &[Cell]) -> u128 {
    sigma
        .iter()
        .map(|c| c.iter().zip(parts).map(|(&j, p)| p[j].len() as u128).product::<u128>())
        .sum()
}

pub struct Fuzzed {
    pub instance: Instance,
    pub witness: RegularityWitness,
}

/// A weak witness with `δ < 1/λ`, or `None` when the draw cannot satisfy
/// the constraints.
pub fn fuzz_weak(rng: &mut impl RngCore, k: usize, max_n: usize) -> Option<Fuzzed> {
    let sizes: Vec<usize> = (0..k).map(|_| rng.random_range(2..=max_n)).collect();
    let parts: Vec<Vec<Vec<usize>>> = sizes
        .iter()
        .map(|&n| {
            let blocks = rng.random_range(1..=n.min(6));
            random_partition(rng, n, blocks)
        })
        .collect();
    let p_mixed = rng.random_range(0.0..0.3);
    let (instance, mut sigma) = block_instance(rng, &sizes, &parts, p_mixed);
    // a few homogeneous cells may be declared bad too
    if rng.random_bool(0.3) {
        let counts: Vec<usize> = parts.iter().map(Vec::len).collect();
        sigma.push(counts.iter().map(|&c| rng.random_range(0..c)).collect());
        sigma.sort();
        sigma.dedup();
    }
    let c: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..2.0)).collect();
    let delta = rng.random_range(0.02..0.4);
    let total: f64 = sizes.iter().map(|&n| n as f64).product();
    let mass = bad_mass(&parts, &sigma) as f64 / total;
    let mut need = (mass / delta).max(1.0 + 1e-6);
    for (p, ci) in parts.iter().zip(&c) {
        need = need.max(p.len() as f64 * delta.powf(*ci));
    }
    need *= 1.0 + 1e-9;
    if need * delta >= 1.0 {
        return None;
    }
    let lambda = rng.random_range(need..1.0 / delta);
    let tuple = RegularityTuple::new(c, lambda).unwrap();
    let witness = RegularityWitness::new(delta, tuple, parts, sigma).unwrap();
    Some(Fuzzed { instance, witness })
}

/// A strong witness whose class-0 blocks are singletons, with
/// `δ < u^{−c_1}`, or `None` when the draw is infeasible.
pub fn fuzz_strong_singletons(rng: &mut impl RngCore, k: usize) -> Option<Fuzzed> {
    let u = rng.random_range(1..=5usize);
    let mut sizes = vec![u];
    sizes.extend((1..k).map(|_| rng.random_range(2..=if k == 2 { 40 } else { 16 })));
    let mut parts: Vec<Vec<Vec<usize>>> = vec![(0..u).map(|j| vec![j]).collect()];
    for &n in &sizes[1..] {
        let blocks = rng.random_range(1..=n.min(5));
        parts.push(random_equipartition(rng, n, blocks));
    }
    let p_mixed = rng.random_range(0.0..0.3);
    let (instance, mut sigma) = block_instance(rng, &sizes, &parts, p_mixed);
    if rng.random_bool(0.3) {
        let counts: Vec<usize> = parts.iter().map(Vec::len).collect();
        sigma.push(counts.iter().map(|&c| rng.random_range(0..c)).collect());
        sigma.sort();
        sigma.dedup();
    }
    let c: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..2.0)).collect();
    let limit = (u as f64).powf(-c[0]).min(0.9);
    let delta = rng.random_range(0.01 * limit..limit);
    let total: f64 = sizes.iter().map(|&n| n as f64).product();
    let mass = bad_mass(&parts, &sigma) as f64 / total;
    let mut need = (mass / delta).max(1.0 + 1e-6);
    for (p, ci) in parts.iter().zip(&c) {
        need = need.max(p.len() as f64 * delta.powf(*ci));
    }
    need *= 1.0 + 1e-9;
    let lambda = need * rng.random_range(1.0..2.0);
    let tuple = RegularityTuple::new(c, lambda).unwrap();
    let witness = RegularityWitness::new(delta, tuple, parts, sigma).unwrap();
    Some(Fuzzed { instance, witness })
}
