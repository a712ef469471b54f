//! Two-community stochastic block model.
//!
//! The adjacency has the block layout
//!
//! ```text
//!     [ A1  C  ]
//! A = [ Cᵀ  A2 ]
//! ```
//!
//! where `A1`, `A2` are hollow Erdős–Rényi blocks and `C` has independent
//! Bernoulli(p) entries. Nodes `0..n1` belong to community one.
//!
//! Each row of each block draws from its own ChaCha8 stream keyed by
//! `mix([params_hash, seed, block_id, row])` (see [`crate::rng`]), and each
//! candidate pair `(i, j)` in a row consumes exactly one 53-bit uniform in
//! increasing `j`. Rows are generated in parallel; the output does not
//! depend on the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Community, Graph};
use crate::rng;

const BLOCK_ONE: u64 = 1;
const BLOCK_TWO: u64 = 2;
const BLOCK_CROSS: u64 = 3;

/// Parameters of a two-block model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbmParams {
    pub n1: usize,
    pub n2: usize,
    pub p1: f64,
    pub p2: f64,
    /// Inter-community edge probability.
    pub p: f64,
}

impl SbmParams {
    pub fn new(n1: usize, n2: usize, p1: f64, p2: f64, p: f64) -> Result<Self> {
        let params = SbmParams { n1, n2, p1, p2, p };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n1 == 0 || self.n2 == 0 {
            return Err(Error::InvalidParameter(
                "community sizes must be at least 1".into(),
            ));
        }
        let n = self.n1.checked_add(self.n2);
        if n.is_none_or(|n| n > u32::MAX as usize) {
            return Err(Error::InvalidParameter(format!(
                "n1 + n2 = {} + {} overflows the node index type",
                self.n1, self.n2
            )));
        }
        for (name, v) in [("p1", self.p1), ("p2", self.p2), ("p", self.p)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} is not a probability"
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    /// Size ratio `c = n1 / n2`.
    pub fn ratio(&self) -> f64 {
        self.n1 as f64 / self.n2 as f64
    }

    fn hash(&self) -> u64 {
        rng::mix(&[
            self.n1 as u64,
            self.n2 as u64,
            self.p1.to_bits(),
            self.p2.to_bits(),
            self.p.to_bits(),
        ])
    }

    /// Ground-truth labels: community one first.
    pub fn truth(&self) -> Vec<Community> {
        let mut labels = vec![Community::One; self.n1];
        labels.resize(self.n(), Community::Two);
        labels
    }
}

/// A generated graph with its planted partition.
#[derive(Debug, Clone)]
pub struct SbmSample {
    pub params: SbmParams,
    pub graph: Graph,
    pub truth: Vec<Community>,
    pub seed: u64,
}

/// Samples the block model.
pub fn generate(params: &SbmParams, seed: u64) -> Result<SbmSample> {
    params.validate()?;
    let (n1, n2) = (params.n1, params.n2);
    let key = params.hash();

    let mut upper: Vec<Vec<u32>> = (0..params.n())
        .into_par_iter()
        .map(|i| {
            if i < n1 {
                within_row(key, seed, BLOCK_ONE, i, n1, params.p1, 0)
            } else {
                within_row(key, seed, BLOCK_TWO, i - n1, n2, params.p2, n1)
            }
        })
        .collect();

    let cross = generate_cross_block(n1, n2, params.p, rng::mix(&[key, seed, BLOCK_CROSS]))?;
    for (i, row) in upper.iter_mut().take(n1).enumerate() {
        row.extend(cross.row(i).iter().map(|&j| j + n1 as u32));
    }

    Ok(SbmSample {
        params: *params,
        graph: Graph::from_upper_lists(upper),
        truth: params.truth(),
        seed,
    })
}

/// Row `local` of a hollow Erdős–Rényi block: neighbors `j > local`.
fn within_row(
    key: u64,
    seed: u64,
    block: u64,
    local: usize,
    size: usize,
    p: f64,
    base: usize,
) -> Vec<u32> {
    let mut rng = rng::stream(rng::mix(&[key, seed, block, local as u64]));
    ((local + 1)..size)
        .filter(|_| rng::bernoulli(&mut rng, p))
        .map(|j| (j + base) as u32)
        .collect()
}

/// Sparse rectangular 0/1 matrix in row-compressed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    offsets: Vec<usize>,
    indices: Vec<u32>,
}

impl BinaryMatrix {
    /// Builds from per-row sorted, distinct column lists.
    pub fn from_rows(cols: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let mut indices = Vec::new();
        for row in &rows {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(
                    "row entries must be strictly increasing".into(),
                ));
            }
            if let Some(&last) = row.last() {
                if last as usize >= cols {
                    return Err(Error::NodeOutOfRange {
                        node: last as usize,
                        n: cols,
                    });
                }
            }
            indices.extend_from_slice(row);
            offsets.push(indices.len());
        }
        Ok(BinaryMatrix {
            rows: rows.len(),
            cols,
            offsets,
            indices,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.indices[self.offsets[i]..self.offsets[i + 1]]
    }
}

/// Samples an `n1 × n2` matrix of independent Bernoulli(p) entries.
pub fn generate_cross_block(n1: usize, n2: usize, p: f64, seed: u64) -> Result<BinaryMatrix> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParameter(
            "block dimensions must be at least 1".into(),
        ));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} is not a probability"
        )));
    }
    let rows = (0..n1)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(rng::mix(&[seed, BLOCK_CROSS, i as u64]));
            (0..n2)
                .filter(|_| rng::bernoulli(&mut rng, p))
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    BinaryMatrix::from_rows(n2, rows)
}
