//! A-posteriori estimates of the block-model probabilities and of the
//! detectability threshold from an identified two-way partition.
//!
//! The within-community estimate divides by `n̂ᵢ²`, not by the number of
//! node pairs `n̂ᵢ(n̂ᵢ − 1)/2`. Relative to the simple-graph edge density it
//! is biased by a factor of roughly one half when edges are counted once,
//! or by `O(1/n)` when they are counted twice (see [`EdgeCounting`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Community, Graph};
use crate::scalar::Real;

/// How within-community edges enter `p̂ᵢ = m̂ᵢ/n̂ᵢ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeCounting {
    /// Each undirected edge counted once.
    #[default]
    Once,
    /// Each undirected edge counted in both directions (`1ᵀAᵢ1`).
    Twice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalEstimates<T> {
    pub n1_hat: usize,
    pub n2_hat: usize,
    /// Undirected within-community edge counts.
    pub m1_hat: u64,
    pub m2_hat: u64,
    /// Undirected cross-community edge count.
    pub cross_edges: u64,
    pub p_hat: T,
    pub p1_hat: T,
    pub p2_hat: T,
    pub p_star_hat: T,
    /// `p̂ < p̂*`: the partition was found in the detectable regime.
    pub reliable: bool,
    pub counting: EdgeCounting,
}

pub fn estimate<T: Real>(g: &Graph, labels: &[Community]) -> Result<EmpiricalEstimates<T>> {
    estimate_with(g, labels, EdgeCounting::Once)
}

pub fn estimate_with<T: Real>(
    g: &Graph,
    labels: &[Community],
    counting: EdgeCounting,
) -> Result<EmpiricalEstimates<T>> {
    let counts = g.cut_counts(labels)?;
    let n1_hat = labels.iter().filter(|&&c| c == Community::One).count();
    let n2_hat = labels.len() - n1_hat;
    if n1_hat == 0 {
        return Err(Error::EmptyCommunity(1));
    }
    if n2_hat == 0 {
        return Err(Error::EmptyCommunity(2));
    }
    let factor = match counting {
        EdgeCounting::Once => 1.0,
        EdgeCounting::Twice => 2.0,
    };
    let (a, b) = (n1_hat as f64, n2_hat as f64);
    let p_hat = T::of(counts.cross as f64) / (T::of(a) * T::of(b));
    let p1_hat = T::of(factor * counts.within_one as f64) / (T::of(a) * T::of(a));
    let p2_hat = T::of(factor * counts.within_two as f64) / (T::of(b) * T::of(b));
    let p_star_hat = (p1_hat * p2_hat).sqrt();
    Ok(EmpiricalEstimates {
        n1_hat,
        n2_hat,
        m1_hat: counts.within_one,
        m2_hat: counts.within_two,
        cross_edges: counts.cross,
        p_hat,
        p1_hat,
        p2_hat,
        p_star_hat,
        reliable: p_hat < p_star_hat,
        counting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::swap_labels;
    use Community::{One, Two};

    #[test]
    fn triangle_with_one_node_apart() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let e = estimate::<f64>(&g, &[One, One, Two]).unwrap();
        assert_eq!((e.n1_hat, e.n2_hat), (2, 1));
        assert_eq!((e.m1_hat, e.m2_hat, e.cross_edges), (1, 0, 2));
        assert_eq!(e.p_hat, 1.0);
        assert_eq!(e.p1_hat, 0.25);
        assert_eq!(e.p2_hat, 0.0);
        assert_eq!(e.p_star_hat, 0.0);
        assert!(!e.reliable);
    }

    #[test]
    fn no_cross_edges_is_reliable() {
        // Two disjoint triangles.
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let e = estimate::<f64>(&g, &[One, One, One, Two, Two, Two]).unwrap();
        assert_eq!(e.p_hat, 0.0);
        assert!(e.p_star_hat > 0.0);
        assert!(e.reliable);
    }

    #[test]
    fn tie_is_not_reliable() {
        // Edgeless communities, no cross edges: p̂ = p̂* = 0.
        let g = Graph::from_edges(4, &[]).unwrap();
        let e = estimate::<f64>(&g, &[One, One, Two, Two]).unwrap();
        assert_eq!((e.p_hat, e.p_star_hat), (0.0, 0.0));
        assert!(!e.reliable);
    }

    #[test]
    fn twice_doubles_within_estimates_only() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let e = estimate_with::<f64>(&g, &[One, One, Two], EdgeCounting::Twice).unwrap();
        assert_eq!(e.p1_hat, 0.5);
        assert_eq!(e.p_hat, 1.0);
    }

    #[test]
    fn empty_community_is_an_error() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            estimate::<f64>(&g, &[One, One, One]),
            Err(Error::EmptyCommunity(2))
        ));
        assert!(matches!(
            estimate::<f64>(&g, &[Two, Two, Two]),
            Err(Error::EmptyCommunity(1))
        ));
    }

    #[test]
    fn swap_exchanges_block_estimates() {
        let g = Graph::from_edges(
            7,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (0, 2),
                (4, 6),
                (1, 5),
            ],
        )
        .unwrap();
        let labels = vec![One, One, One, Two, Two, Two, Two];
        let e = estimate::<f64>(&g, &labels).unwrap();
        let s = estimate::<f64>(&g, &swap_labels(&labels)).unwrap();
        assert_eq!(
            (e.n1_hat, e.m1_hat, e.p1_hat),
            (s.n2_hat, s.m2_hat, s.p2_hat)
        );
        assert_eq!(
            (e.n2_hat, e.m2_hat, e.p2_hat),
            (s.n1_hat, s.m1_hat, s.p1_hat)
        );
        assert_eq!(e.p_hat, s.p_hat);
        assert_eq!(e.p_star_hat, s.p_star_hat);
        assert_eq!(e.m1_hat + e.m2_hat + e.cross_edges, g.edge_count() as u64);
        assert!((e.p_star_hat.powi(2) - e.p1_hat * e.p2_hat).abs() < 1e-12);
    }
}
