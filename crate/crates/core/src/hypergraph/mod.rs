//! k-partite k-uniform relations and the exact predicates on them.
//!
//! A [`Relation`] is a membership oracle on k-tuples of [`Element`]s. Restricting
//! it to finite ground sets with [`Relation::induce`] yields an [`Instance`]:
//! per-class labels plus an explicit, sorted edge list over class indices.

mod search;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use search::CompleteWitness;

/// Instances whose full product has at most this many tuples get a dense
/// bitset membership index; larger ones fall back to hashing.
const DENSE_INDEX_LIMIT: u128 = 1 << 27;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("arity mismatch: relation has arity {expected}, got {found} classes")]
    ArityMismatch { expected: usize, found: usize },
    #[error("class {class} contains duplicate element {element}")]
    DuplicateElement { class: usize, element: String },
    #[error("edge {edge:?} has {found} coordinates, expected {expected}")]
    EdgeArity { edge: Vec<usize>, expected: usize, found: usize },
    #[error("edge {edge:?} is out of range in class {class} (size {size})")]
    EdgeOutOfRange { edge: Vec<usize>, class: usize, size: usize },
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<usize>),
    #[error("header says k = {header} but {classes} classes were given")]
    HeaderMismatch { header: usize, classes: usize },
    #[error("pins must be distinct")]
    DuplicatePins,
    #[error("class index {index} out of range for arity {arity}")]
    ClassIndex { index: usize, arity: usize },
    #[error("cannot fix a coordinate of a relation of arity 1")]
    UnaryFiber,
    #[error("pin index {pin} out of range for class of size {size}")]
    PinOutOfRange { pin: usize, size: usize },
}

/// A point of some power `M^{x_i}` of the universe, as integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub Vec<i64>);

impl Element {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// First coordinate; the whole value for scalar elements.
    pub fn scalar(&self) -> i64 {
        self.0.first().copied().unwrap_or_default()
    }
}

impl From<i64> for Element {
    fn from(v: i64) -> Self {
        Element(vec![v])
    }
}

impl From<Vec<i64>> for Element {
    fn from(v: Vec<i64>) -> Self {
        Element(v)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [v] = self.0.as_slice() {
            return write!(f, "{v}");
        }
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Where a relation came from. Carried for reporting only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub family: String,
    pub params: String,
    pub seed: Option<u64>,
}

type Membership = Arc<dyn Fn(&[&Element]) -> bool + Send + Sync>;

/// An arity-k membership oracle, optionally with canonical finite classes.
#[derive(Clone)]
pub struct Relation {
    arity: usize,
    membership: Membership,
    generator: Option<Generator>,
    classes: Option<Vec<Vec<Element>>>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relation")
            .field("arity", &self.arity)
            .field("generator", &self.generator)
            .field("classes", &self.classes.as_ref().map(|c| c.iter().map(Vec::len).collect::<Vec<_>>()))
            .finish()
    }
}

impl Relation {
    /// Wraps a predicate. The predicate must be deterministic.
    pub fn new<F>(arity: usize, membership: F) -> Result<Self, HypergraphError>
    where
        F: Fn(&[&Element]) -> bool + Send + Sync + 'static,
    {
        if arity == 0 {
            return Err(HypergraphError::ZeroArity);
        }
        Ok(Relation {
            arity,
            membership: Arc::new(membership),
            generator: None,
            classes: None,
        })
    }

    /// A relation given by an explicit edge list over elements.
    pub fn from_edges<I>(arity: usize, edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = Vec<Element>>,
    {
        let mut set = HashSet::new();
        for edge in edges {
            if edge.len() != arity {
                return Err(HypergraphError::EdgeArity {
                    edge: Vec::new(),
                    expected: arity,
                    found: edge.len(),
                });
            }
            set.insert(edge);
        }
        Relation::new(arity, move |t: &[&Element]| {
            let owned: Vec<Element> = t.iter().map(|e| (*e).clone()).collect();
            set.contains(&owned)
        })
    }

    pub fn full(arity: usize) -> Result<Self, HypergraphError> {
        Relation::new(arity, |_| true)
    }

    pub fn empty(arity: usize) -> Result<Self, HypergraphError> {
        Relation::new(arity, |_| false)
    }

    pub fn with_generator(mut self, generator: Generator) -> Self {
        self.generator = Some(generator);
        self
    }

    /// Attaches canonical classes, used by [`Relation::sample_classes`] and
    /// by family generators.
    pub fn with_classes(mut self, classes: Vec<Vec<Element>>) -> Result<Self, HypergraphError> {
        if classes.len() != self.arity {
            return Err(HypergraphError::ArityMismatch {
                expected: self.arity,
                found: classes.len(),
            });
        }
        self.classes = Some(classes);
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generator(&self) -> Option<&Generator> {
        self.generator.as_ref()
    }

    pub fn classes(&self) -> Option<&[Vec<Element>]> {
        self.classes.as_deref()
    }

    pub fn holds(&self, tuple: &[&Element]) -> bool {
        debug_assert_eq!(tuple.len(), self.arity);
        (self.membership)(tuple)
    }

    /// Ground sets of the requested sizes: prefixes of the canonical classes
    /// when present (clamped to their length), otherwise the scalars `0..n_i`.
    pub fn sample_classes(&self, sizes: &[usize]) -> Result<Vec<Vec<Element>>, HypergraphError> {
        if sizes.len() != self.arity {
            return Err(HypergraphError::ArityMismatch {
                expected: self.arity,
                found: sizes.len(),
            });
        }
        Ok(match &self.classes {
            Some(classes) => classes
                .iter()
                .zip(sizes)
                .map(|(c, &n)| c[..n.min(c.len())].to_vec())
                .collect(),
            None => sizes
                .iter()
                .map(|&n| (0..n as i64).map(Element::from).collect())
                .collect(),
        })
    }

    /// The induced k-graph `E(P_1, ..., P_k)`.
    pub fn induce(&self, classes: &[Vec<Element>]) -> Result<Instance, HypergraphError> {
        if classes.len() != self.arity {
            return Err(HypergraphError::ArityMismatch {
                expected: self.arity,
                found: classes.len(),
            });
        }
        for (i, class) in classes.iter().enumerate() {
            let mut seen = HashSet::with_capacity(class.len());
            for e in class {
                if !seen.insert(e) {
                    return Err(HypergraphError::DuplicateElement {
                        class: i,
                        element: e.to_string(),
                    });
                }
            }
        }
        let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
        let mut edges = Vec::new();
        if sizes.iter().all(|&n| n > 0) {
            let mut idx = vec![0usize; self.arity];
            let mut tuple: Vec<&Element> = classes.iter().map(|c| &c[0]).collect();
            'odometer: loop {
                if self.holds(&tuple) {
                    edges.push(idx.clone());
                }
                // last coordinate fastest, so edges come out sorted
                let mut pos = self.arity;
                loop {
                    if pos == 0 {
                        break 'odometer;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < sizes[pos] {
                        tuple[pos] = &classes[pos][idx[pos]];
                        continue 'odometer;
                    }
                    idx[pos] = 0;
                    tuple[pos] = &classes[pos][0];
                }
            }
        }
        let labels = classes
            .iter()
            .map(|c| c.iter().map(Element::to_string).collect())
            .collect();
        Ok(Instance::from_sorted_unchecked(labels, edges))
    }

    /// `R(x_{≠i}) := ⋀_e E(..., a_e, ...)` with each pin substituted at `class_index`.
    pub fn intersect_fibers(&self, class_index: usize, pins: &[Element]) -> Result<Relation, HypergraphError> {
        if self.arity == 1 {
            return Err(HypergraphError::UnaryFiber);
        }
        if class_index >= self.arity {
            return Err(HypergraphError::ClassIndex {
                index: class_index,
                arity: self.arity,
            });
        }
        let distinct: HashSet<&Element> = pins.iter().collect();
        if distinct.len() != pins.len() {
            return Err(HypergraphError::DuplicatePins);
        }
        let parent = self.clone();
        let pins_owned = pins.to_vec();
        let mut out = Relation::new(self.arity - 1, move |rest: &[&Element]| {
            let mut full: Vec<&Element> = Vec::with_capacity(rest.len() + 1);
            pins_owned.iter().all(|pin| {
                full.clear();
                full.extend_from_slice(&rest[..class_index]);
                full.push(pin);
                full.extend_from_slice(&rest[class_index..]);
                parent.holds(&full)
            })
        })?;
        if let Some(classes) = &self.classes {
            let mut rest = classes.clone();
            rest.remove(class_index);
            out.classes = Some(rest);
        }
        out.generator = self.generator.as_ref().map(|g| Generator {
            family: format!("{}|fiber{}", g.family, class_index),
            params: format!("{};pins={}", g.params, pins.len()),
            seed: g.seed,
        });
        Ok(out)
    }
}

#[derive(Clone, Debug)]
enum EdgeIndex {
    Dense { strides: Vec<usize>, bits: Vec<u64> },
    Sparse(HashSet<Vec<usize>>),
}

impl EdgeIndex {
    fn build(sizes: &[usize], edges: &[Vec<usize>]) -> Self {
        let total: u128 = sizes.iter().map(|&n| n as u128).product();
        if total <= DENSE_INDEX_LIMIT {
            let mut strides = vec![1usize; sizes.len()];
            for i in (0..sizes.len().saturating_sub(1)).rev() {
                strides[i] = strides[i + 1] * sizes[i + 1];
            }
            let mut bits = vec![0u64; (total as usize).div_ceil(64)];
            for e in edges {
                let at: usize = e.iter().zip(&strides).map(|(j, s)| j * s).sum();
                bits[at / 64] |= 1 << (at % 64);
            }
            EdgeIndex::Dense { strides, bits }
        } else {
            EdgeIndex::Sparse(edges.iter().cloned().collect())
        }
    }

    fn contains(&self, tuple: &[usize]) -> bool {
        match self {
            EdgeIndex::Dense { strides, bits } => {
                let at: usize = tuple.iter().zip(strides).map(|(j, s)| j * s).sum();
                bits[at / 64] >> (at % 64) & 1 == 1
            }
            EdgeIndex::Sparse(set) => set.contains(tuple),
        }
    }
}

/// Finite ground sets `P_1, ..., P_k` with the enumerated edge set `E(P_1, ..., P_k)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr", into = "InstanceRepr")]
pub struct Instance {
    classes: Vec<Vec<String>>,
    edges: Vec<Vec<usize>>,
    index: EdgeIndex,
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    k: usize,
    classes: Vec<Vec<String>>,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<InstanceRepr> for Instance {
    type Error = HypergraphError;

    fn try_from(repr: InstanceRepr) -> Result<Self, Self::Error> {
        if repr.k != repr.classes.len() {
            return Err(HypergraphError::HeaderMismatch {
                header: repr.k,
                classes: repr.classes.len(),
            });
        }
        Instance::new(repr.classes, repr.edges)
    }
}

impl From<Instance> for InstanceRepr {
    fn from(inst: Instance) -> Self {
        InstanceRepr {
            k: inst.k(),
            classes: inst.classes,
            edges: inst.edges,
        }
    }
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.classes == other.classes && self.edges == other.edges
    }
}

impl Instance {
    /// Validates and builds an instance. Edges may come in any order.
    pub fn new(classes: Vec<Vec<String>>, mut edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        let k = classes.len();
        if k == 0 {
            return Err(HypergraphError::ZeroArity);
        }
        for (i, class) in classes.iter().enumerate() {
            let mut seen = HashSet::with_capacity(class.len());
            for label in class {
                if !seen.insert(label) {
                    return Err(HypergraphError::DuplicateElement {
                        class: i,
                        element: label.clone(),
                    });
                }
            }
        }
        for e in &edges {
            if e.len() != k {
                return Err(HypergraphError::EdgeArity {
                    edge: e.clone(),
                    expected: k,
                    found: e.len(),
                });
            }
            for (i, (&j, class)) in e.iter().zip(&classes).enumerate() {
                if j >= class.len() {
                    return Err(HypergraphError::EdgeOutOfRange {
                        edge: e.clone(),
                        class: i,
                        size: class.len(),
                    });
                }
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(HypergraphError::DuplicateEdge(w[0].clone()));
        }
        Ok(Instance::from_sorted_unchecked(classes, edges))
    }

    /// Unlabelled instance with generated labels `c{i}_{j}`.
    pub fn from_sizes(sizes: &[usize], edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        let classes = sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| (0..n).map(|j| format!("c{i}_{j}")).collect())
            .collect();
        Instance::new(classes, edges)
    }

    fn from_sorted_unchecked(classes: Vec<Vec<String>>, edges: Vec<Vec<usize>>) -> Self {
        let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
        let index = EdgeIndex::build(&sizes, &edges);
        Instance { classes, edges, index }
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<String>] {
        &self.classes
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Edges as sorted index tuples.
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `∏ |P_i|`, exact.
    pub fn product_size(&self) -> u128 {
        self.classes.iter().map(|c| c.len() as u128).product()
    }

    pub fn contains_edge(&self, tuple: &[usize]) -> bool {
        tuple.len() == self.k()
            && tuple.iter().zip(&self.classes).all(|(&j, c)| j < c.len())
            && self.index.contains(tuple)
    }

    /// `E(P_1, ..., P_k)` is everything or nothing.
    pub fn is_homogeneous(&self) -> bool {
        self.edges.is_empty() || self.edges.len() as u128 == self.product_size()
    }

    /// Exact search for `K_{u,...,u}`; returns the lexicographically first
    /// witness in the search order (see [`CompleteWitness`]).
    pub fn find_complete(&self, u: usize) -> Option<CompleteWitness> {
        search::find_complete(self, u)
    }

    pub fn contains_complete(&self, u: usize) -> bool {
        self.find_complete(u).is_some()
    }

    /// Induced sub-instance on the given (sorted or unsorted) index subsets.
    pub fn sub_instance(&self, keep: &[Vec<usize>]) -> Result<Instance, HypergraphError> {
        if keep.len() != self.k() {
            return Err(HypergraphError::ArityMismatch {
                expected: self.k(),
                found: keep.len(),
            });
        }
        let mut remap: Vec<HashMap<usize, usize>> = Vec::with_capacity(self.k());
        let mut classes = Vec::with_capacity(self.k());
        for (i, subset) in keep.iter().enumerate() {
            let mut map = HashMap::with_capacity(subset.len());
            let mut labels = Vec::with_capacity(subset.len());
            for &j in subset {
                if j >= self.classes[i].len() {
                    return Err(HypergraphError::PinOutOfRange {
                        pin: j,
                        size: self.classes[i].len(),
                    });
                }
                if map.insert(j, labels.len()).is_some() {
                    return Err(HypergraphError::DuplicateElement {
                        class: i,
                        element: self.classes[i][j].clone(),
                    });
                }
                labels.push(self.classes[i][j].clone());
            }
            remap.push(map);
            classes.push(labels);
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| e.iter().zip(&remap).map(|(j, m)| m.get(j).copied()).collect::<Option<Vec<_>>>())
            .collect();
        Instance::new(classes, edges)
    }

    /// Instance-level counterpart of [`Relation::intersect_fibers`]: the
    /// (k−1)-graph `⋂_e E(P_1, ..., a_e, ..., P_k)` on the remaining classes,
    /// with pins given as indices into `class_index`.
    pub fn intersect_fibers(&self, class_index: usize, pins: &[usize]) -> Result<Instance, HypergraphError> {
        let k = self.k();
        if k == 1 {
            return Err(HypergraphError::UnaryFiber);
        }
        if class_index >= k {
            return Err(HypergraphError::ClassIndex { index: class_index, arity: k });
        }
        let size = self.classes[class_index].len();
        let mut pinset = HashSet::with_capacity(pins.len());
        for &p in pins {
            if p >= size {
                return Err(HypergraphError::PinOutOfRange { pin: p, size });
            }
            if !pinset.insert(p) {
                return Err(HypergraphError::DuplicatePins);
            }
        }
        let mut hits: HashMap<Vec<usize>, usize> = HashMap::new();
        for e in &self.edges {
            if pinset.contains(&e[class_index]) {
                let mut rest = e.clone();
                rest.remove(class_index);
                *hits.entry(rest).or_default() += 1;
            }
        }
        let mut classes = self.classes.clone();
        classes.remove(class_index);
        let edges: Vec<Vec<usize>> = if pins.is_empty() {
            // empty conjunction: everything
            let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
            product_indices(&sizes)
        } else {
            hits.into_iter().filter(|(_, c)| *c == pins.len()).map(|(t, _)| t).collect()
        };
        Instance::new(classes, edges)
    }
}

/// All index tuples of `[n_1] × ⋯ × [n_k]`, lexicographic.
pub(crate) fn product_indices(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |j| {
                    let mut t = prefix.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    out
}
