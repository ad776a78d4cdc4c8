//! Exact combinatorial bounds on twin-set size and search-tree size.
//!
//! All values are arbitrary-precision integers; products of binomials leave
//! the 64-bit range quickly once projections carry a few dozen hyperedges.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result as CrateResult;
use crate::factorgraph::{enumerate_cliques, CliqueCensus, FactorGraph};
use crate::hypergraph::{ProjectionMatrix, SizeDistribution};

/// Exact nonnegative integer.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn from_u64(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Lossy conversion, used only for rank statistics and plotting.
    pub fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.0).unwrap_or(f64::INFINITY)
    }

    pub fn to_u64(&self) -> Option<u64> {
        num_traits::ToPrimitive::to_u64(&self.0)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::ops::Add for BigCount {
    type Output = BigCount;
    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl std::ops::Mul for BigCount {
    type Output = BigCount;
    fn mul(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 * rhs.0)
    }
}

impl std::iter::Sum for BigCount {
    fn sum<I: Iterator<Item = BigCount>>(iter: I) -> BigCount {
        iter.fold(BigCount::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for BigCount {
    fn product<I: Iterator<Item = BigCount>>(iter: I) -> BigCount {
        iter.fold(BigCount::one(), |a, b| a * b)
    }
}

impl Serialize for BigCount {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<BigUint>().map(BigCount).map_err(serde::de::Error::custom)
    }
}

/// `binom(n, k)` by the multiplicative formula; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // exact at every step: acc = binom(n, i) before the update
        acc *= n - i;
        acc /= i + 1;
    }
    BigCount(acc)
}

/// `binom(n, k)` saturating at `u64::MAX`; used for cheap comparisons in hot loops.
pub fn binomial_saturating(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Worst-case tree size `∏_e binom(|η_e|, W_e)` together with the maximum
/// single-edge width `C = max_e binom(|η_e|, W_e)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSizeBound {
    pub product: BigCount,
    pub max_width: BigCount,
}

/// Evaluated on the initial factor graph (full `η_e`, not residuals).
pub fn worst_case_tree_size(f: &FactorGraph, w: &ProjectionMatrix) -> TreeSizeBound {
    let mut product = BigCount::one();
    let mut max_width = BigCount::zero();
    for (e, &(u, v)) in f.edge_nodes().iter().enumerate() {
        let width = binomial(f.eta(e).len() as u64, w.get(u, v));
        if width > max_width {
            max_width = width.clone();
        }
        product = product * width;
    }
    if f.edge_nodes().is_empty() {
        max_width = BigCount::one();
    }
    TreeSizeBound { product, max_width }
}

/// Worst-case tree size when 2-hyperedges are not clique-nodes: `|η_e|`
/// counts only cliques of size `3..=k_max`. An edge in no such clique can
/// only be covered by the 2-hyperedge itself, so it contributes 1 when its
/// weight is 1 and 0 otherwise. This is the variant used to rank
/// projections in the rank-correlation report.
pub fn worst_case_tree_size_without_pairs(w: &ProjectionMatrix, k_max: usize) -> CrateResult<TreeSizeBound> {
    let n = w.n();
    let (_, by_size) = enumerate_cliques(w, k_max)?;
    let mut eta = vec![0u64; n * n];
    for clique in by_size.range(3..).flat_map(|(_, list)| list) {
        for (i, &u) in clique.iter().enumerate() {
            for &v in &clique[i + 1..] {
                eta[u * n + v] += 1;
            }
        }
    }
    let mut product = BigCount::one();
    let mut max_width = BigCount::one();
    for u in 0..n {
        for v in (u + 1)..n {
            let weight = w.get(u, v);
            if weight == 0 {
                continue;
            }
            let width = match eta[u * n + v] {
                0 => binomial(1, weight),
                c => binomial(c, weight),
            };
            if width > max_width {
                max_width = width.clone();
            }
            product = product * width;
        }
    }
    Ok(TreeSizeBound { product, max_width })
}

/// Clique approximation `∏_{k: M_k > 0} binom(C_k, M_k)`.
pub fn clique_approximation(census: &CliqueCensus, sizes: &SizeDistribution) -> BigCount {
    sizes
        .counts
        .iter()
        .filter(|(_, &m)| m > 0)
        .map(|(&k, &m)| binomial(census.get(k), m))
        .product()
}

/// `∏_k binom(binom(n, k), M_k)`: every `k`-subset of nodes is a candidate.
pub fn naive_upper_bound(n: usize, sizes: &SizeDistribution) -> BigCount {
    sizes
        .counts
        .iter()
        .filter(|(_, &m)| m > 0)
        .map(|(&k, &m)| {
            let slots = binomial(n as u64, k as u64);
            match slots.to_u64() {
                Some(s) => binomial(s, m),
                // m is a u64 so it is below any slot count that overflows u64
                None => big_binomial(&slots.0, m),
            }
        })
        .product()
}

fn big_binomial(n: &BigUint, k: u64) -> BigCount {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - BigUint::from(i);
        acc /= BigUint::from(i + 1);
    }
    BigCount(acc)
}
