//! Deterministic relation families with canonical classes.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Element, Generator, HypergraphError, Instance, Relation};

/// Largest plane order accepted by [`extremal_incidence_counts`].
pub const MAX_TABLE_Q: u64 = 13;

/// Largest `n_1⋯n_k` that [`FamilySpec::instance`] materialises.
pub const MAX_INSTANCE_TUPLES: u128 = 1 << 26;

#[derive(Debug, Error, PartialEq)]
pub enum FamilyError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("probability {0} is not in [0, 1]")]
    Probability(f64),
    #[error("modulus must be at least 2, got {0}")]
    Modulus(u64),
    #[error("residue {residue} is not below modulus {modulus}")]
    Residue { residue: u64, modulus: u64 },
    #[error("parameter {name} = {value} is out of range")]
    Parameter { name: &'static str, value: u64 },
    #[error("plane order {q} exceeds the table limit {max}")]
    TooLarge { q: u64, max: u64 },
    #[error("instance would have {tuples} tuples, above the limit {max}")]
    InstanceTooLarge { tuples: u128, max: u128 },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum FamilySpec {
    /// Points and lines of the plane over `Z/q`, incidence = orthogonality.
    ProjectivePlane { q: u64 },
    /// Points of `[m]²` against lines `y ≡ a x + b (mod p)`.
    GridPointLine { m: u64, p: u64 },
    /// `x < y` on `{1, ..., n}`.
    Order { n: u64 },
    /// Two classes of `n` seeded integer intervals, related when they meet.
    IntervalOverlap {
        n: u64,
        #[serde(default)]
        seed: u64,
    },
    /// Strict componentwise dominance between two classes of `n` seeded points of `Z^dim`.
    BoxOrder {
        n: u64,
        dim: u64,
        #[serde(default)]
        seed: u64,
    },
    /// `Σ x_i mod modulus ∈ residues` on `k` classes `{0, ..., size−1}`.
    ModularSum {
        k: usize,
        #[serde(alias = "n")]
        modulus: u64,
        residues: Vec<u64>,
        #[serde(default)]
        size: Option<u64>,
    },
    /// Independent edges with probability `p`, decided by a seeded hash.
    Random { sizes: Vec<u64>, p: f64, seed: u64 },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::ProjectivePlane { .. } => "projective_plane",
            FamilySpec::GridPointLine { .. } => "grid_point_line",
            FamilySpec::Order { .. } => "order",
            FamilySpec::IntervalOverlap { .. } => "interval_overlap",
            FamilySpec::BoxOrder { .. } => "box_order",
            FamilySpec::ModularSum { .. } => "modular_sum",
            FamilySpec::Random { .. } => "random",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            FamilySpec::ModularSum { k, .. } => *k,
            FamilySpec::Random { sizes, .. } => sizes.len(),
            _ => 2,
        }
    }

    /// The same family with its size parameter replaced: `q` for planes,
    /// `m` for grids, `size` for modular sums, every class for random, `n` otherwise.
    pub fn resized(&self, size: u64) -> FamilySpec {
        let mut out = self.clone();
        match &mut out {
            FamilySpec::ProjectivePlane { q } => *q = size,
            FamilySpec::GridPointLine { m, .. } => *m = size,
            FamilySpec::Order { n } | FamilySpec::IntervalOverlap { n, .. } | FamilySpec::BoxOrder { n, .. } => *n = size,
            FamilySpec::ModularSum { size: s, .. } => *s = Some(size),
            FamilySpec::Random { sizes, .. } => sizes.iter_mut().for_each(|n| *n = size),
        }
        out
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            FamilySpec::IntervalOverlap { seed, .. } | FamilySpec::BoxOrder { seed, .. } | FamilySpec::Random { seed, .. } => {
                Some(*seed)
            }
            _ => None,
        }
    }

    /// The same family with its seed replaced; unseeded families are unchanged.
    pub fn with_seed(&self, seed: u64) -> FamilySpec {
        let mut out = self.clone();
        match &mut out {
            FamilySpec::IntervalOverlap { seed: s, .. } | FamilySpec::BoxOrder { seed: s, .. } | FamilySpec::Random { seed: s, .. } => {
                *s = seed
            }
            _ => {}
        }
        out
    }

    /// Parameters as `key=value` pairs joined by `;`, seed excluded.
    pub fn params(&self) -> String {
        match self {
            FamilySpec::ProjectivePlane { q } => format!("q={q}"),
            FamilySpec::GridPointLine { m, p } => format!("m={m};p={p}"),
            FamilySpec::Order { n } | FamilySpec::IntervalOverlap { n, .. } => format!("n={n}"),
            FamilySpec::BoxOrder { n, dim, .. } => format!("n={n};dim={dim}"),
            FamilySpec::ModularSum { k, modulus, residues, size } => {
                let r: Vec<String> = residues.iter().map(u64::to_string).collect();
                format!("k={k};modulus={modulus};residues={};size={}", r.join(" "), size.unwrap_or(*modulus))
            }
            FamilySpec::Random { sizes, p, .. } => {
                let s: Vec<String> = sizes.iter().map(u64::to_string).collect();
                format!("sizes={};p={p}", s.join(" "))
            }
        }
    }

    pub fn generate(&self) -> Result<Relation, FamilyError> {
        generate(self)
    }

    /// The relation induced on its canonical classes.
    pub fn instance(&self) -> Result<Instance, FamilyError> {
        let rel = generate(self)?;
        let classes = rel.classes().expect("generated relations carry classes").to_vec();
        let tuples = classes.iter().map(|c| c.len() as u128).product::<u128>();
        if tuples > MAX_INSTANCE_TUPLES {
            return Err(FamilyError::InstanceTooLarge { tuples, max: MAX_INSTANCE_TUPLES });
        }
        Ok(rel.induce(&classes)?)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.params())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn ints(range: impl Iterator<Item = i64>) -> Vec<Element> {
    range.map(Element::from).collect()
}

/// Nonzero triples over `Z/q` with first nonzero coordinate 1, lexicographic.
fn projective_points(q: i64) -> Vec<Element> {
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    for x in 0..q {
        for y in 0..q {
            for z in 0..q {
                let first = [x, y, z].into_iter().find(|&v| v != 0);
                if first == Some(1) {
                    out.push(Element::from(vec![x, y, z]));
                }
            }
        }
    }
    out
}

/// Distinct seeded points of `[0, span)^dim`.
fn seeded_points(rng: &mut ChaCha8Rng, n: u64, dim: usize, span: i64) -> Vec<Element> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n as usize);
    while (out.len() as u64) < n {
        let p: Vec<i64> = (0..dim).map(|_| rng.random_range(0..span)).collect();
        if seen.insert(p.clone()) {
            out.push(Element::from(p));
        }
    }
    out
}

fn seeded_intervals(rng: &mut ChaCha8Rng, n: u64) -> Vec<Element> {
    let span = 4 * n as i64 + 4;
    let max_len = n as i64 + 1;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n as usize);
    while (out.len() as u64) < n {
        let l = rng.random_range(0..span);
        let r = l + rng.random_range(0..max_len);
        if seen.insert((l, r)) {
            out.push(Element::from(vec![l, r]));
        }
    }
    out
}

pub fn generate(spec: &FamilySpec) -> Result<Relation, FamilyError> {
    let generator = Generator {
        family: spec.name().to_string(),
        params: spec.params(),
        seed: spec.seed(),
    };
    let (relation, classes) = match spec {
        &FamilySpec::ProjectivePlane { q } => {
            if !is_prime(q) {
                return Err(FamilyError::NotPrime(q));
            }
            let q = q as i64;
            let rel = Relation::new(2, move |t| {
                let (a, b) = (t[0].coords(), t[1].coords());
                a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>().rem_euclid(q) == 0
            })?;
            let pts = projective_points(q);
            (rel, vec![pts.clone(), pts])
        }
        &FamilySpec::GridPointLine { m, p } => {
            if m == 0 {
                return Err(FamilyError::Parameter { name: "m", value: m });
            }
            if p < 2 {
                return Err(FamilyError::Modulus(p));
            }
            let (m, p) = (m as i64, p as i64);
            let rel = Relation::new(2, move |t| {
                let (pt, line) = (t[0].coords(), t[1].coords());
                (pt[1] - line[0] * pt[0] - line[1]).rem_euclid(p) == 0
            })?;
            let points = (0..m).flat_map(|x| (0..m).map(move |y| Element::from(vec![x, y]))).collect();
            let lines = (0..p).flat_map(|a| (0..p).map(move |b| Element::from(vec![a, b]))).collect();
            (rel, vec![points, lines])
        }
        &FamilySpec::Order { n } => {
            let rel = Relation::new(2, |t| t[0].scalar() < t[1].scalar())?;
            let class = ints(1..=n as i64);
            (rel, vec![class.clone(), class])
        }
        &FamilySpec::IntervalOverlap { n, seed } => {
            let rel = Relation::new(2, |t| {
                let (a, b) = (t[0].coords(), t[1].coords());
                a[0] <= b[1] && b[0] <= a[1]
            })?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let left = seeded_intervals(&mut rng, n);
            let right = seeded_intervals(&mut rng, n);
            (rel, vec![left, right])
        }
        &FamilySpec::BoxOrder { n, dim, seed } => {
            if dim == 0 {
                return Err(FamilyError::Parameter { name: "dim", value: dim });
            }
            let rel = Relation::new(2, |t| t[0].coords().iter().zip(t[1].coords()).all(|(x, y)| x < y))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let span = (n as i64).max(1) * 4;
            let left = seeded_points(&mut rng, n, dim as usize, span);
            let right = seeded_points(&mut rng, n, dim as usize, span);
            (rel, vec![left, right])
        }
        FamilySpec::ModularSum { k, modulus, residues, size } => {
            let (k, modulus) = (*k, *modulus);
            if k == 0 {
                return Err(FamilyError::Parameter { name: "k", value: 0 });
            }
            if modulus < 2 {
                return Err(FamilyError::Modulus(modulus));
            }
            if let Some(&residue) = residues.iter().find(|&&r| r >= modulus) {
                return Err(FamilyError::Residue { residue, modulus });
            }
            let allowed: HashSet<i64> = residues.iter().map(|&r| r as i64).collect();
            let m = modulus as i64;
            let rel = Relation::new(k, move |t| allowed.contains(&t.iter().map(|e| e.scalar()).sum::<i64>().rem_euclid(m)))?;
            let class = ints(0..size.unwrap_or(modulus) as i64);
            (rel, vec![class; k])
        }
        FamilySpec::Random { sizes, p, seed } => {
            let (p, seed) = (*p, *seed);
            if !(0.0..=1.0).contains(&p) {
                return Err(FamilyError::Probability(p));
            }
            if sizes.is_empty() {
                return Err(FamilyError::Parameter { name: "sizes", value: 0 });
            }
            // p = 1 must accept everything, so compare against a 2^64 threshold
            let threshold = (p * 2f64.powi(64)).min(u64::MAX as f64);
            let rel = Relation::new(sizes.len(), move |t| {
                let mut h = splitmix64(seed);
                for e in t {
                    for &v in e.coords() {
                        h = splitmix64(h ^ v as u64);
                    }
                    h = splitmix64(h ^ 0xA5A5);
                }
                p >= 1.0 || (h as f64) < threshold
            })?;
            let classes = sizes.iter().map(|&n| ints(0..n as i64)).collect();
            (rel, classes)
        }
    };
    Ok(relation.with_classes(classes)?.with_generator(generator))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceRow {
    pub q: u64,
    pub points: usize,
    pub lines: usize,
    pub incidences: usize,
    pub kuu_free: bool,
}

/// Point/line/incidence counts of the planes of the given prime orders, each
/// with its `K_{2,2}`-freeness decided by exact search.
pub fn extremal_incidence_counts(qs: &[u64]) -> Result<Vec<IncidenceRow>, FamilyError> {
    qs.iter()
        .map(|&q| {
            if !is_prime(q) {
                return Err(FamilyError::NotPrime(q));
            }
            if q > MAX_TABLE_Q {
                return Err(FamilyError::TooLarge { q, max: MAX_TABLE_Q });
            }
            let inst = FamilySpec::ProjectivePlane { q }.instance()?;
            let sizes = inst.sizes();
            Ok(IncidenceRow {
                q,
                points: sizes[0],
                lines: sizes[1],
                incidences: inst.edge_count(),
                kuu_free: !inst.contains_complete(2),
            })
        })
        .collect()
}
