//! Closed-form bound functions.
//!
//! For an exponent tuple `c = (c_1, ..., c_k)` with every `c_i ≥ 1`:
//!
//! ```text
//! γ_i(c)   = 1 − (1/(c_i−1)) / (k − 1 + Σ_j 1/(c_j−1))
//! E_c(n)   = ∏_i n_i^{γ_i(c)}
//! F^ε_c(n) = Σ_{I ⊆ [k], |I| ≥ 2} E_{c_I}(n_I) ∏_{i∈I} n_i^ε ∏_{i∉I} n_i + (Σ_i 1/n_i) ∏_i n_i
//! ```
//!
//! When some `c_j = 1` the exponents are taken as the limit
//! `γ_i = 1 − 𝟙(c_i = 1) / #{j : c_j = 1}`. For a restricted tuple `c_I` the
//! rule is applied relative to `c_I` itself. `F` of a single coordinate is the
//! constant 1. All arithmetic is binary64 and `0^0 = 1`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative slack used when checking inequalities between evaluated bounds.
pub const INEQUALITY_SLACK: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("exponent tuple is empty")]
    EmptyTuple,
    #[error("exponent c_{index} = {value} must be finite and at least 1")]
    ExponentBelowOne { index: usize, value: f64 },
    #[error("exponent c_{index} = {value} must be finite and nonnegative")]
    NegativeExponent { index: usize, value: f64 },
    #[error("coefficient lambda = {0} must be finite and greater than 1")]
    Lambda(f64),
    #[error("got {c} exponents but {n} sizes")]
    LengthMismatch { c: usize, n: usize },
    #[error("size n_{index} = {value} is not allowed here")]
    Size { index: usize, value: f64 },
    #[error("epsilon = {0} must be finite and positive")]
    Epsilon(f64),
    #[error("class index {index} out of range for k = {k}")]
    Index { index: usize, k: usize },
    #[error("arity k = {0} too small; need k >= 2")]
    Arity(usize),
    #[error("u must be at least 1")]
    ZeroU,
}

/// Exponents `c̄` with coefficient `λ > 1`: partitions with at most
/// `λ δ^{−c_i}` blocks in class `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityTuple {
    c: Vec<f64>,
    lambda: f64,
}

impl RegularityTuple {
    pub fn new(c: Vec<f64>, lambda: f64) -> Result<Self, BoundsError> {
        if c.is_empty() {
            return Err(BoundsError::EmptyTuple);
        }
        for (index, &value) in c.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(BoundsError::NegativeExponent { index, value });
            }
        }
        if !lambda.is_finite() || lambda <= 1.0 {
            return Err(BoundsError::Lambda(lambda));
        }
        Ok(RegularityTuple { c, lambda })
    }

    pub fn k(&self) -> usize {
        self.c.len()
    }

    pub fn exponents(&self) -> &[f64] {
        &self.c
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `λ δ^{−c_i}`.
    pub fn block_cap(&self, i: usize, delta: f64) -> f64 {
        self.lambda * delta.powf(-self.c[i])
    }

    /// The tuple with each exponent raised by `by` and coefficient `lambda`.
    pub fn shifted(&self, by: f64, lambda: f64) -> Result<Self, BoundsError> {
        RegularityTuple::new(self.c.iter().map(|c| c + by).collect(), lambda)
    }

    /// The tuple with exponent `i` dropped, same coefficient.
    pub fn without(&self, i: usize) -> Result<Self, BoundsError> {
        if i >= self.k() {
            return Err(BoundsError::Index { index: i, k: self.k() });
        }
        let mut c = self.c.clone();
        c.remove(i);
        RegularityTuple::new(c, self.lambda)
    }
}

fn check_exponents(c: &[f64]) -> Result<(), BoundsError> {
    if c.is_empty() {
        return Err(BoundsError::EmptyTuple);
    }
    for (index, &value) in c.iter().enumerate() {
        if !value.is_finite() || value < 1.0 {
            return Err(BoundsError::ExponentBelowOne { index, value });
        }
    }
    Ok(())
}

fn check_sizes(c: &[f64], n: &[f64], positive: bool) -> Result<(), BoundsError> {
    if c.len() != n.len() {
        return Err(BoundsError::LengthMismatch { c: c.len(), n: n.len() });
    }
    for (index, &value) in n.iter().enumerate() {
        let ok = value.is_finite() && if positive { value > 0.0 } else { value >= 0.0 };
        if !ok {
            return Err(BoundsError::Size { index, value });
        }
    }
    Ok(())
}

fn check_epsilon(eps: f64) -> Result<(), BoundsError> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(BoundsError::Epsilon(eps))
    }
}

/// All exponents `γ_1(c), ..., γ_k(c)`.
pub fn gammas(c: &[f64]) -> Result<Vec<f64>, BoundsError> {
    check_exponents(c)?;
    let k = c.len();
    let ones = c.iter().filter(|&&x| x == 1.0).count();
    if ones > 0 {
        return Ok(c
            .iter()
            .map(|&x| if x == 1.0 { 1.0 - 1.0 / ones as f64 } else { 1.0 })
            .collect());
    }
    let inv: Vec<f64> = c.iter().map(|&x| 1.0 / (x - 1.0)).collect();
    let total: f64 = inv.iter().sum();
    let denom = (k - 1) as f64 + total;
    // 1 − a_i/D written as (D − a_i)/D, summing the other terms directly
    Ok((0..k)
        .map(|i| {
            let others: f64 = inv.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, a)| a).sum();
            ((k - 1) as f64 + others) / denom
        })
        .collect())
}

pub fn gamma(c: &[f64], i: usize) -> Result<f64, BoundsError> {
    let all = gammas(c)?;
    all.get(i).copied().ok_or(BoundsError::Index { index: i, k: c.len() })
}

/// `E_c(n) = ∏ n_i^{γ_i(c)}`.
pub fn e_value(c: &[f64], n: &[f64]) -> Result<f64, BoundsError> {
    check_sizes(c, n, false)?;
    let g = gammas(c)?;
    Ok(n.iter().zip(&g).map(|(&ni, &gi)| ni.powf(gi)).product())
}

/// `F^ε_c(n)`; the constant 1 when `k = 1`.
pub fn f_value(c: &[f64], n: &[f64], eps: f64) -> Result<f64, BoundsError> {
    check_exponents(c)?;
    check_epsilon(eps)?;
    let k = c.len();
    if n.len() != k {
        return Err(BoundsError::LengthMismatch { c: k, n: n.len() });
    }
    if k == 1 {
        return Ok(1.0);
    }
    check_sizes(c, n, true)?;
    let mut total = 0.0;
    let mut sub_c = Vec::with_capacity(k);
    let mut sub_n = Vec::with_capacity(k);
    for mask in 0u32..(1 << k) {
        if mask.count_ones() < 2 {
            continue;
        }
        sub_c.clear();
        sub_n.clear();
        let mut outside = 1.0;
        for i in 0..k {
            if mask >> i & 1 == 1 {
                sub_c.push(c[i]);
                sub_n.push(n[i]);
            } else {
                outside *= n[i];
            }
        }
        let inside_eps: f64 = sub_n.iter().map(|x| x.powf(eps)).product();
        total += e_value(&sub_c, &sub_n)? * inside_eps * outside;
    }
    for skip in 0..k {
        total += n.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, x)| x).product::<f64>();
    }
    Ok(total)
}

/// The binary exponents `(c_2(c_1−1)/(c_1c_2−1), c_1(c_2−1)/(c_1c_2−1))`,
/// with `(1/2, 1/2)` at `c_1 = c_2 = 1`.
pub fn binary_exponents(c1: f64, c2: f64) -> Result<(f64, f64), BoundsError> {
    check_exponents(&[c1, c2])?;
    if c1 == 1.0 && c2 == 1.0 {
        return Ok((0.5, 0.5));
    }
    let d = c1 * c2 - 1.0;
    Ok((c2 * (c1 - 1.0) / d, c1 * (c2 - 1.0) / d))
}

/// Classical exponents: `2 − 1/u` for bipartite graphs and `k − 1/u^{k−1}`
/// for k-partite k-graphs.
pub fn baseline_exponents(k: usize, u: usize) -> Result<(f64, f64), BoundsError> {
    if k < 2 {
        return Err(BoundsError::Arity(k));
    }
    if u == 0 {
        return Err(BoundsError::ZeroU);
    }
    let u = u as f64;
    Ok((2.0 - 1.0 / u, k as f64 - u.powi(1 - k as i32)))
}

/// `f^1(0), ..., f^steps(0)` for `f(γ) = 1/(1 + c(1−γ))`, which increases to `1/c`.
pub fn prelim_fixed_point(c: f64, steps: usize) -> Result<Vec<f64>, BoundsError> {
    check_exponents(&[c])?;
    let mut gamma = 0.0;
    Ok((0..steps)
        .map(|_| {
            gamma = 1.0 / (1.0 + c * (1.0 - gamma));
            gamma
        })
        .collect())
}

/// Both sides of `k F_c(n) ≥ E_c(n) ∏ n_i^ε + Σ_i n_i F_{c≠i}(n≠i)`.
pub fn remark_sides(c: &[f64], n: &[f64], eps: f64) -> Result<(f64, f64), BoundsError> {
    let k = c.len();
    if k < 2 {
        return Err(BoundsError::Arity(k));
    }
    let lhs = k as f64 * f_value(c, n, eps)?;
    let mut rhs = e_value(c, n)? * n.iter().map(|x| x.powf(eps)).product::<f64>();
    for i in 0..k {
        let (ci, ni) = drop_index(c, n, i);
        rhs += n[i] * f_value(&ci, &ni, eps)?;
    }
    Ok((lhs, rhs))
}

pub fn check_remark_inequality(c: &[f64], n: &[f64], eps: f64) -> Result<bool, BoundsError> {
    let (lhs, rhs) = remark_sides(c, n, eps)?;
    Ok(lhs >= rhs * (1.0 - INEQUALITY_SLACK))
}

fn drop_index(c: &[f64], n: &[f64], i: usize) -> (Vec<f64>, Vec<f64>) {
    let mut ci = c.to_vec();
    let mut ni = n.to_vec();
    ci.remove(i);
    ni.remove(i);
    (ci, ni)
}

/// How far `F_c(n)` is from its leading term `E_c(n) ∏ n_i^ε`, together with
/// whether the size hypothesis under which that term dominates holds.
/// A diagnostic only: the dominance constant is not explicit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    /// Per class: `n_1⋯n_k · n_i^{−1/c_i+ε} ≥ n_i F_{c≠i}(n≠i)`.
    pub hypothesis: Vec<bool>,
    pub hypothesis_holds: bool,
    /// `F_c(n) / (E_c(n) ∏ n_i^ε)`, at least 1.
    pub ratio: f64,
}

pub fn dominance(c: &[f64], n: &[f64], eps: f64) -> Result<DominanceReport, BoundsError> {
    let k = c.len();
    if k < 2 {
        return Err(BoundsError::Arity(k));
    }
    let f = f_value(c, n, eps)?;
    let lead = e_value(c, n)? * n.iter().map(|x| x.powf(eps)).product::<f64>();
    let prod: f64 = n.iter().product();
    let mut hypothesis = Vec::with_capacity(k);
    for i in 0..k {
        let (ci, ni) = drop_index(c, n, i);
        let left = prod * n[i].powf(-1.0 / c[i] + eps);
        hypothesis.push(left >= n[i] * f_value(&ci, &ni, eps)?);
    }
    Ok(DominanceReport {
        hypothesis_holds: hypothesis.iter().all(|&h| h),
        hypothesis,
        ratio: f / lead,
    })
}

/// Evaluated bounds for one size vector, optionally with the exact edge count
/// of an instance of those sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub c: Vec<f64>,
    pub n: Vec<u64>,
    pub u: usize,
    pub epsilon: f64,
    pub exact_edges: Option<u64>,
    pub f_value: f64,
    pub e_value: f64,
    pub kst_exponent: f64,
    pub erdos_exponent: f64,
    pub gamma: Vec<f64>,
}

impl BoundReport {
    pub fn evaluate(c: &[f64], n: &[u64], eps: f64, u: usize, exact_edges: Option<u64>) -> Result<Self, BoundsError> {
        let nf: Vec<f64> = n.iter().map(|&x| x as f64).collect();
        let (kst, erdos) = baseline_exponents(c.len(), u)?;
        Ok(BoundReport {
            c: c.to_vec(),
            n: n.to_vec(),
            u,
            epsilon: eps,
            exact_edges,
            f_value: f_value(c, &nf, eps)?,
            e_value: e_value(c, &nf)?,
            kst_exponent: kst,
            erdos_exponent: erdos,
            gamma: gammas(c)?,
        })
    }

    /// `f ≥ e ∏ n_i^ε / k`, which every report must satisfy.
    pub fn leading_term_consistent(&self) -> bool {
        let k = self.n.len() as f64;
        let lead = self.e_value * self.n.iter().map(|&x| (x as f64).powf(self.epsilon)).product::<f64>();
        self.f_value >= lead / k * (1.0 - INEQUALITY_SLACK)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn gamma_examples() {
        assert!(rel_close(gamma(&[2.0, 2.0], 0).unwrap(), 2.0 / 3.0, 1e-15));
        assert_eq!(gammas(&[1.0, 1.0]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(gammas(&[1.0, 2.0]).unwrap(), vec![0.0, 1.0]);
        for g in gammas(&[2.0, 2.0, 2.0]).unwrap() {
            assert!(rel_close(g, 0.8, 1e-15));
        }
        assert_eq!(gamma(&[0.5, 2.0], 0), Err(BoundsError::ExponentBelowOne { index: 0, value: 0.5 }));
        assert_eq!(gamma(&[2.0, 2.0], 2), Err(BoundsError::Index { index: 2, k: 2 }));
    }

    #[test]
    fn e_value_examples() {
        let n = 37.0_f64;
        assert!(rel_close(e_value(&[2.0, 2.0], &[n, n]).unwrap(), n.powf(4.0 / 3.0), 1e-12));
        assert_eq!(e_value(&[3.0, 1.0, 7.5], &[1.0, 1.0, 1.0]).unwrap(), 1.0);
        let v = e_value(&[2.0, 2.0, 2.0], &[10.0, 10.0, 10.0]).unwrap();
        assert!(rel_close(v, 10f64.powf(12.0 / 5.0), 1e-12));
        assert!((v - 251.1886).abs() < 1e-4);
        // 0^0 = 1 on the degenerate exponent
        assert_eq!(e_value(&[1.0, 2.0], &[0.0, 5.0]).unwrap(), 5.0);
    }

    #[test]
    fn f_value_binary_example() {
        let f = f_value(&[2.0, 2.0], &[100.0, 100.0], 0.01).unwrap();
        let expected = 100f64.powf(4.0 / 3.0 + 0.02) + 200.0;
        assert!(rel_close(f, expected, 1e-12));
    }

    #[test]
    fn f_value_unary_is_one() {
        assert_eq!(f_value(&[4.0], &[1000.0], 0.3).unwrap(), 1.0);
        assert_eq!(f_value(&[1.0], &[0.0], 0.3).unwrap(), 1.0);
    }

    /// Term-by-term expansion for k = 3, written out by hand.
    fn f3_oracle(c: [f64; 3], n: [f64; 3], eps: f64) -> f64 {
        let pair = |a: usize, b: usize| {
            let (g1, g2) = binary_exponents(c[a], c[b]).unwrap();
            let other = 3 - a - b;
            n[a].powf(g1 + eps) * n[b].powf(g2 + eps) * n[other]
        };
        let a: Vec<f64> = c.iter().map(|x| 1.0 / (x - 1.0)).collect();
        let d = 2.0 + a[0] + a[1] + a[2];
        let triple: f64 = (0..3).map(|i| n[i].powf(1.0 - a[i] / d + eps)).product();
        let boundary = (1.0 / n[0] + 1.0 / n[1] + 1.0 / n[2]) * n[0] * n[1] * n[2];
        triple + pair(0, 1) + pair(0, 2) + pair(1, 2) + boundary
    }

    #[test]
    fn f_value_three_classes_matches_expansion() {
        let f = f_value(&[2.0, 2.0, 2.0], &[8.0, 8.0, 8.0], 0.1).unwrap();
        assert!(rel_close(f, f3_oracle([2.0, 2.0, 2.0], [8.0, 8.0, 8.0], 0.1), 1e-12));
        let f = f_value(&[1.5, 3.0, 7.0], &[3.0, 40.0, 11.0], 0.05).unwrap();
        assert!(rel_close(f, f3_oracle([1.5, 3.0, 7.0], [3.0, 40.0, 11.0], 0.05), 1e-12));
    }

    #[test]
    fn f_value_rejects_zero_size() {
        assert_eq!(
            f_value(&[2.0, 2.0], &[0.0, 3.0], 0.1),
            Err(BoundsError::Size { index: 0, value: 0.0 })
        );
        assert_eq!(f_value(&[2.0, 2.0], &[1.0, 3.0], 0.0), Err(BoundsError::Epsilon(0.0)));
    }

    #[test]
    fn binary_exponent_examples() {
        let (a, b) = binary_exponents(2.0, 2.0).unwrap();
        assert!(rel_close(a, 2.0 / 3.0, 1e-15) && rel_close(b, 2.0 / 3.0, 1e-15));
        assert_eq!(binary_exponents(1.0, 1.0).unwrap(), (0.5, 0.5));
        let (a, b) = binary_exponents(2.0, 3.0).unwrap();
        assert!(rel_close(a, 0.6, 1e-15) && rel_close(b, 0.8, 1e-15));
        let g = gammas(&[2.0, 3.0]).unwrap();
        assert!(rel_close(g[0], a, 1e-15) && rel_close(g[1], b, 1e-15));
    }

    #[test]
    fn baseline_examples() {
        assert_eq!(baseline_exponents(2, 2).unwrap(), (1.5, 1.5));
        assert_eq!(baseline_exponents(3, 2).unwrap(), (1.5, 2.75));
        assert!(rel_close(baseline_exponents(2, 3).unwrap().0, 5.0 / 3.0, 1e-15));
        assert_eq!(baseline_exponents(1, 2), Err(BoundsError::Arity(1)));
        assert_eq!(baseline_exponents(2, 0), Err(BoundsError::ZeroU));
    }

    #[test]
    fn fixed_point_examples() {
        let seq = prelim_fixed_point(1.0, 4).unwrap();
        let expected = [0.5, 2.0 / 3.0, 0.75, 0.8];
        for (a, b) in seq.iter().zip(expected) {
            assert!(rel_close(*a, b, 1e-15));
        }
        let seq = prelim_fixed_point(2.0, 200).unwrap();
        assert!(rel_close(seq[0], 1.0 / 3.0, 1e-15));
        assert!((seq[199] - 0.5).abs() < 1e-6);
        assert_eq!(prelim_fixed_point(3.7, 1).unwrap(), vec![1.0 / 4.7]);
        let slow = prelim_fixed_point(1.0, 200).unwrap();
        assert!((slow[199] - 1.0).abs() < 1e-2);
    }

    #[test]
    fn remark_examples() {
        assert!(check_remark_inequality(&[2.0, 2.0], &[10.0, 10.0], 0.1).unwrap());
        assert!(check_remark_inequality(&[1.0, 1.0, 1.0], &[5.0, 5.0, 5.0], 0.5).unwrap());
        let (lhs, rhs) = remark_sides(&[2.0, 2.0], &[1.0, 1.0], 0.3).unwrap();
        assert_eq!((lhs, rhs), (6.0, 3.0));
    }

    #[test]
    fn degenerate_limit_is_continuous() {
        let near = |d: f64| gammas(&[1.0 + d, 2.5, 4.0]).unwrap();
        let limit = gammas(&[1.0, 2.5, 4.0]).unwrap();
        for ((a, b), l) in near(1e-6).iter().zip(near(1e-9)).zip(limit) {
            assert!((a - b).abs() < 1e-3);
            assert!((b - l).abs() < 1e-3);
        }
    }

    #[test]
    fn dominance_is_at_least_one() {
        let r = dominance(&[2.0, 2.0], &[1000.0, 1000.0], 0.05).unwrap();
        assert!(r.ratio >= 1.0);
        assert!(r.hypothesis_holds);
        let lopsided = dominance(&[2.0, 2.0], &[2.0, 1e9], 0.05).unwrap();
        assert!(!lopsided.hypothesis_holds);
    }

    #[test]
    fn tuple_validation() {
        assert!(RegularityTuple::new(vec![0.0, 1.0], 2.0).is_ok());
        assert_eq!(RegularityTuple::new(vec![1.0], 1.0), Err(BoundsError::Lambda(1.0)));
        assert!(RegularityTuple::new(vec![-1.0], 2.0).is_err());
        assert_eq!(RegularityTuple::new(vec![], 2.0), Err(BoundsError::EmptyTuple));
        let t = RegularityTuple::new(vec![1.0, 2.0], 3.0).unwrap();
        assert_eq!(t.shifted(1.0, 12.0).unwrap().exponents(), &[2.0, 3.0]);
        assert_eq!(t.without(0).unwrap().exponents(), &[2.0]);
        assert!(rel_close(t.block_cap(1, 0.1), 300.0, 1e-12));
    }

    fn exps(max_k: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(prop_oneof![3 => 1.0f64..10.0, 1 => Just(1.0)], 1..=max_k)
    }

    proptest! {
        #[test]
        fn gamma_in_unit_interval(c in exps(5)) {
            let g = gammas(&c).unwrap();
            let deficit: f64 = g.iter().map(|x| 1.0 - x).sum();
            for x in &g {
                prop_assert!((0.0..=1.0).contains(x));
            }
            prop_assert!(deficit <= 1.0 + 1e-12);
        }

        #[test]
        fn uniform_identity(d in 1.01f64..10.0, k in 2usize..=5, n in 1.0f64..1e4) {
            let e = e_value(&vec![d; k], &vec![n; k]).unwrap();
            let k = k as f64;
            let expected = n.powf(k - k / ((k - 1.0) * d + 1.0));
            prop_assert!(rel_close(e, expected, 1e-12));
        }

        #[test]
        fn binary_identity(c1 in 1.0f64..10.0, c2 in 1.0f64..10.0, m in 1.0f64..1e6, n in 1.0f64..1e6, eps in 0.001f64..1.0) {
            let (g1, g2) = binary_exponents(c1, c2).unwrap();
            let closed = m.powf(g1 + eps) * n.powf(g2 + eps) + m + n;
            prop_assert!(rel_close(f_value(&[c1, c2], &[m, n], eps).unwrap(), closed, 1e-12));
        }

        #[test]
        fn monotone_in_sizes(
            c in exps(4),
            base in prop::collection::vec(1.0f64..500.0, 4),
            bump in prop::collection::vec(0.0f64..500.0, 4),
            eps in 0.001f64..0.5,
        ) {
            let k = c.len();
            let n: Vec<f64> = base[..k].to_vec();
            let m: Vec<f64> = n.iter().zip(&bump).map(|(a, b)| a + b).collect();
            let tol = 1.0 - 1e-12;
            prop_assert!(e_value(&c, &m).unwrap() >= e_value(&c, &n).unwrap() * tol);
            prop_assert!(f_value(&c, &m, eps).unwrap() >= f_value(&c, &n, eps).unwrap() * tol);
        }

        #[test]
        fn fixed_point_monotone_and_bounded(c in 1.0f64..10.0) {
            let seq = prelim_fixed_point(c, 200).unwrap();
            for w in seq.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
            for x in &seq {
                prop_assert!(*x >= 1.0 / (c + 1.0) - 1e-15 && *x <= 1.0 / c + 1e-15);
            }
        }

        #[test]
        fn remark_holds(c in exps(4), n in prop::collection::vec(1.0f64..1e3, 4), eps in 0.001f64..1.0) {
            prop_assume!(c.len() >= 2);
            let n = &n[..c.len()];
            prop_assert!(check_remark_inequality(&c, n, eps).unwrap());
        }
    }
}
