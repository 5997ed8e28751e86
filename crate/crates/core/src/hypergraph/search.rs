//! Exact `K_{u,...,u}` search.
//!
//! The search picks a pivot coordinate (fewest distinct vertices among the
//! current tuples, ties to the lowest class), enumerates u-subsets of its
//! candidate vertices in lexicographic order while intersecting their fibers,
//! and recurses on the common section with one coordinate fewer. A branch is
//! cut as soon as the running section has fewer than `u` vertices in some
//! class. For two remaining coordinates the fibers are bitset rows.
//!
//! The first witness in that order is returned, so results are deterministic
//! even though the top-level branches run in parallel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Instance;

/// `u` class indices per class, sorted, such that their product lies in the edge set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteWitness {
    pub parts: Vec<Vec<usize>>,
}

impl CompleteWitness {
    /// Independent re-check of all `u^k` tuples.
    pub fn check(&self, instance: &Instance, u: usize) -> bool {
        if self.parts.len() != instance.k() {
            return false;
        }
        for part in &self.parts {
            if part.len() != u || part.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
        }
        let mut tuple = vec![0usize; instance.k()];
        every_tuple(&self.parts, 0, &mut tuple, &mut |t| instance.contains_edge(t))
    }
}

fn every_tuple(parts: &[Vec<usize>], depth: usize, tuple: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if depth == parts.len() {
        return f(tuple);
    }
    for &j in &parts[depth] {
        tuple[depth] = j;
        if !every_tuple(parts, depth + 1, tuple, f) {
            return false;
        }
    }
    true
}

pub(super) fn find_complete(instance: &Instance, u: usize) -> Option<CompleteWitness> {
    let k = instance.k();
    if u == 0 {
        return Some(CompleteWitness { parts: vec![Vec::new(); k] });
    }
    let data: Vec<u32> = instance.edges().iter().flat_map(|e| e.iter().map(|&j| j as u32)).collect();
    let parts = search(k, &data, u, true)?;
    Some(CompleteWitness {
        parts: parts.into_iter().map(|p| p.into_iter().map(|j| j as usize).collect()).collect(),
    })
}

/// `data` holds sorted, distinct tuples of the given width, flattened.
/// Returns `u` values per coordinate on success.
fn search(width: usize, data: &[u32], u: usize, parallel: bool) -> Option<Vec<Vec<u32>>> {
    let len = data.len() / width;
    if len < u.saturating_pow(width as u32) {
        return None;
    }
    if width == 1 {
        return Some(vec![data[..u].to_vec()]);
    }
    let distinct = distinct_counts(width, data);
    if distinct.iter().any(|&d| d < u) {
        return None;
    }
    let pivot = (0..width).min_by_key(|&c| (distinct[c], c)).unwrap();

    // Tuples sharing a pivot value stay lexicographically sorted once that
    // coordinate is dropped, so each fiber is sorted too.
    let mut keys: Vec<u32> = Vec::new();
    let mut fibers: Vec<Vec<u32>> = Vec::new();
    let mut grouped: std::collections::BTreeMap<u32, Vec<u32>> = std::collections::BTreeMap::new();
    for t in data.chunks_exact(width) {
        let rest = grouped.entry(t[pivot]).or_default();
        rest.extend(t[..pivot].iter().chain(&t[pivot + 1..]));
    }
    let need = u.saturating_pow(width as u32 - 1);
    for (key, fiber) in grouped {
        if fiber.len() / (width - 1) >= need {
            keys.push(key);
            fibers.push(fiber);
        }
    }
    if keys.len() < u {
        return None;
    }

    let rest = if width == 2 {
        let family = BitRows::new(&fibers);
        pick_subsets(&family, u, parallel)
    } else {
        let family = TupleRows { width: width - 1, rows: fibers };
        pick_subsets(&family, u, parallel)
    }?;
    let (chosen, mut parts) = rest;
    parts.insert(pivot, chosen.into_iter().map(|i| keys[i]).collect());
    Some(parts)
}

fn distinct_counts(width: usize, data: &[u32]) -> Vec<usize> {
    (0..width)
        .map(|c| {
            let mut vals: Vec<u32> = data.chunks_exact(width).map(|t| t[c]).collect();
            vals.sort_unstable();
            vals.dedup();
            vals.len()
        })
        .collect()
}

/// Fibers of the pivot vertices with the set algebra the subset search needs.
trait FiberFamily: Sync {
    type Set: Send;
    fn rows(&self) -> usize;
    fn row(&self, i: usize) -> Self::Set;
    fn meet(&self, acc: &Self::Set, i: usize) -> Self::Set;
    fn viable(&self, set: &Self::Set, u: usize) -> bool;
    fn finish(&self, set: &Self::Set, u: usize) -> Option<Vec<Vec<u32>>>;
}

struct BitRows {
    rows: Vec<Vec<u64>>,
}

impl BitRows {
    fn new(fibers: &[Vec<u32>]) -> Self {
        let top = fibers.iter().flat_map(|f| f.iter()).copied().max().unwrap_or(0) as usize;
        let words = top / 64 + 1;
        let rows = fibers
            .iter()
            .map(|f| {
                let mut row = vec![0u64; words];
                for &v in f {
                    row[v as usize / 64] |= 1 << (v % 64);
                }
                row
            })
            .collect();
        BitRows { rows }
    }
}

impl FiberFamily for BitRows {
    type Set = Vec<u64>;

    fn rows(&self) -> usize {
        self.rows.len()
    }

    fn row(&self, i: usize) -> Vec<u64> {
        self.rows[i].clone()
    }

    fn meet(&self, acc: &Vec<u64>, i: usize) -> Vec<u64> {
        acc.iter().zip(&self.rows[i]).map(|(a, b)| a & b).collect()
    }

    fn viable(&self, set: &Vec<u64>, u: usize) -> bool {
        set.iter().map(|w| w.count_ones() as usize).sum::<usize>() >= u
    }

    fn finish(&self, set: &Vec<u64>, u: usize) -> Option<Vec<Vec<u32>>> {
        let mut out = Vec::with_capacity(u);
        for (w, &word) in set.iter().enumerate() {
            let mut bits = word;
            while bits != 0 && out.len() < u {
                let b = bits.trailing_zeros();
                out.push(w as u32 * 64 + b);
                bits &= bits - 1;
            }
        }
        (out.len() == u).then(|| vec![out])
    }
}

struct TupleRows {
    width: usize,
    rows: Vec<Vec<u32>>,
}

impl FiberFamily for TupleRows {
    type Set = Vec<u32>;

    fn rows(&self) -> usize {
        self.rows.len()
    }

    fn row(&self, i: usize) -> Vec<u32> {
        self.rows[i].clone()
    }

    fn meet(&self, acc: &Vec<u32>, i: usize) -> Vec<u32> {
        let w = self.width;
        let other = &self.rows[i];
        let (mut a, mut b) = (0, 0);
        let mut out = Vec::new();
        while a < acc.len() && b < other.len() {
            match acc[a..a + w].cmp(&other[b..b + w]) {
                std::cmp::Ordering::Less => a += w,
                std::cmp::Ordering::Greater => b += w,
                std::cmp::Ordering::Equal => {
                    out.extend_from_slice(&acc[a..a + w]);
                    a += w;
                    b += w;
                }
            }
        }
        out
    }

    fn viable(&self, set: &Vec<u32>, u: usize) -> bool {
        set.len() / self.width >= u.saturating_pow(self.width as u32)
            && distinct_counts(self.width, set).iter().all(|&d| d >= u)
    }

    fn finish(&self, set: &Vec<u32>, u: usize) -> Option<Vec<Vec<u32>>> {
        search(self.width, set, u, false)
    }
}

/// First (lexicographic) u-subset of rows whose common section completes.
fn pick_subsets<F: FiberFamily>(family: &F, u: usize, parallel: bool) -> Option<(Vec<usize>, Vec<Vec<u32>>)> {
    let n = family.rows();
    let from_first = |first: usize| -> Option<(Vec<usize>, Vec<Vec<u32>>)> {
        let start = family.row(first);
        if !family.viable(&start, u) {
            return None;
        }
        let mut chosen = vec![first];
        descend(family, u, first + 1, &mut chosen, &start)
    };
    let last_first = n - u;
    if parallel {
        (0..=last_first).into_par_iter().find_map_first(from_first)
    } else {
        (0..=last_first).find_map(from_first)
    }
}

fn descend<F: FiberFamily>(
    family: &F,
    u: usize,
    next: usize,
    chosen: &mut Vec<usize>,
    acc: &F::Set,
) -> Option<(Vec<usize>, Vec<Vec<u32>>)> {
    if chosen.len() == u {
        return family.finish(acc, u).map(|parts| (chosen.clone(), parts));
    }
    let remaining = u - chosen.len();
    for i in next..=family.rows() - remaining {
        let meet = family.meet(acc, i);
        if !family.viable(&meet, u) {
            continue;
        }
        chosen.push(i);
        if let Some(found) = descend(family, u, i + 1, chosen, &meet) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}
