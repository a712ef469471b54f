//! Two-way partitions from the leading eigenvector, scored against ground
//! truth.

use serde::{Deserialize, Serialize};

use crate::eigen::ZERO_ENTRY;
use crate::error::{Error, Result};
use crate::graph::Community;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionMethod {
    #[default]
    Sign,
    Kmeans,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub labels: Vec<Community>,
    pub method: PartitionMethod,
}

impl Partition {
    /// Community sizes `(|one|, |two|)`.
    pub fn sizes(&self) -> (usize, usize) {
        let one = self.labels.iter().filter(|&&c| c == Community::One).count();
        (one, self.labels.len() - one)
    }
}

pub fn partition<T: Real>(y: &[T], method: PartitionMethod) -> Result<Partition> {
    match method {
        PartitionMethod::Sign => partition_by_sign(y),
        PartitionMethod::Kmeans => partition_by_kmeans2(y),
    }
}

/// Positive entries go to community one, negative to two. Entries with
/// magnitude at most [`ZERO_ENTRY`] go to community one.
pub fn partition_by_sign<T: Real>(y: &[T]) -> Result<Partition> {
    let eps = T::of(ZERO_ENTRY);
    if y.iter().all(|v| v.abs() <= eps) {
        return Err(Error::ZeroVector);
    }
    let labels = y
        .iter()
        .map(|&v| {
            if v < -eps {
                Community::Two
            } else {
                Community::One
            }
        })
        .collect();
    Ok(Partition {
        labels,
        method: PartitionMethod::Sign,
    })
}

/// Exact one-dimensional 2-means.
///
/// Scans every split of the sorted entries between distinct values and
/// keeps the one with the least within-cluster sum of squares; ties go to
/// the leftmost split. The cluster holding the larger values is community
/// one, matching the sign rule.
pub fn partition_by_kmeans2<T: Real>(y: &[T]) -> Result<Partition> {
    let n = y.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "2-means needs at least two entries".into(),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| y[a].partial_cmp(&y[b]).expect("finite entries"));
    let sorted: Vec<f64> = order.iter().map(|&i| y[i].as_f64()).collect();

    // Prefix sums for O(1) cluster costs; centring on the mean keeps the
    // subtraction well conditioned.
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let mut s1 = vec![0.0; n + 1];
    let mut s2 = vec![0.0; n + 1];
    for (k, v) in sorted.iter().enumerate() {
        let c = v - mean;
        s1[k + 1] = s1[k] + c;
        s2[k + 1] = s2[k] + c * c;
    }
    let cost = |lo: usize, hi: usize| {
        let m = (hi - lo) as f64;
        let s = s1[hi] - s1[lo];
        (s2[hi] - s2[lo]) - s * s / m
    };

    let mut best: Option<(f64, usize)> = None;
    for k in 1..n {
        if sorted[k] == sorted[k - 1] {
            continue;
        }
        let wcss = cost(0, k) + cost(k, n);
        if best.is_none_or(|(b, _)| wcss < b) {
            best = Some((wcss, k));
        }
    }
    let (_, split) = best.ok_or(Error::NoClusterStructure)?;

    let mut labels = vec![Community::One; n];
    for &i in &order[..split] {
        labels[i] = Community::Two;
    }
    Ok(Partition {
        labels,
        method: PartitionMethod::Kmeans,
    })
}

/// Fraction of nodes correctly labelled, maximised over the two ways of
/// matching predicted communities to true ones. Always in `[0.5, 1]`.
pub fn detectability(pred: &[Community], truth: &[Community]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            got: pred.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::InvalidParameter("empty labelling".into()));
    }
    let n = truth.len();
    let agree = pred.iter().zip(truth).filter(|(a, b)| a == b).count();
    Ok(agree.max(n - agree) as f64 / n as f64)
}
