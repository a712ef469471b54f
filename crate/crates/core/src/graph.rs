//! Immutable undirected simple graphs in compressed sparse row form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Community membership of a node in a two-block partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
#[repr(u8)]
pub enum Community {
    One = 1,
    Two = 2,
}

impl Community {
    #[inline]
    pub fn swapped(self) -> Self {
        match self {
            Community::One => Community::Two,
            Community::Two => Community::One,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize - 1
    }
}

impl From<Community> for u8 {
    fn from(c: Community) -> u8 {
        c as u8
    }
}

impl TryFrom<u8> for Community {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Community::One),
            2 => Ok(Community::Two),
            other => Err(format!("community label must be 1 or 2, got {other}")),
        }
    }
}

/// Swaps every label of a partition.
pub fn swap_labels(labels: &[Community]) -> Vec<Community> {
    labels.iter().map(|c| c.swapped()).collect()
}

/// Undirected simple graph on nodes `0..n`.
///
/// Neighbor lists are sorted, free of duplicates and self-loops, and the
/// adjacency is symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Builds a graph from an arbitrary edge list.
    ///
    /// Duplicates and reverse orientations collapse to one edge and
    /// self-loops are dropped.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoNodes);
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!(
                "{n} nodes exceeds the u32 index space"
            )));
        }
        let mut pairs = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if u != v {
                pairs.push((u.min(v) as u32, u.max(v) as u32));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut upper: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in pairs {
            upper[u as usize].push(v);
        }
        Ok(Self::from_upper_lists(upper))
    }

    /// Assembles the symmetric structure from per-node lists of strictly
    /// larger, sorted, distinct neighbors.
    pub(crate) fn from_upper_lists(upper: Vec<Vec<u32>>) -> Self {
        let n = upper.len();
        let mut degree = vec![0usize; n];
        for (i, row) in upper.iter().enumerate() {
            degree[i] += row.len();
            for &j in row {
                debug_assert!(j as usize > i);
                degree[j as usize] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut neighbors = vec![0u32; offsets[n]];
        let mut fill = offsets[..n].to_vec();
        // Lower neighbors of j arrive in increasing i, before j's own upper list.
        for (i, row) in upper.iter().enumerate() {
            for &j in row {
                let j = j as usize;
                neighbors[fill[j]] = i as u32;
                fill[j] += 1;
            }
        }
        for (i, row) in upper.iter().enumerate() {
            let start = fill[i];
            neighbors[start..start + row.len()].copy_from_slice(row);
            fill[i] += row.len();
        }
        Graph { offsets, neighbors }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Sum of all adjacency entries, `1ᵀA1 = 2 × edges`.
    #[inline]
    pub fn m2(&self) -> u64 {
        self.neighbors.len() as u64
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .map(|&j| j as usize)
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    /// Degree vector and `b = 1/m2`.
    pub fn degree_data<T: Real>(&self) -> Result<DegreeData<T>> {
        let m2 = self.m2();
        if m2 == 0 {
            return Err(Error::EmptyGraph);
        }
        let degrees = (0..self.node_count())
            .map(|i| self.degree(i) as u32)
            .collect();
        Ok(DegreeData {
            degrees,
            m2,
            b: T::one() / T::of(m2 as f64),
        })
    }

    /// Counts edges inside community one, inside community two, and across.
    pub fn cut_counts(&self, labels: &[Community]) -> Result<CutCounts> {
        let n = self.node_count();
        if labels.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        let mut counts = CutCounts::default();
        for (u, v) in self.edges() {
            match (labels[u], labels[v]) {
                (Community::One, Community::One) => counts.within_one += 1,
                (Community::Two, Community::Two) => counts.within_two += 1,
                _ => counts.cross += 1,
            }
        }
        Ok(counts)
    }
}

/// Degree vector `d = A1` with the reciprocal total `b = 1/(1ᵀA1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeData<T> {
    pub degrees: Vec<u32>,
    /// `1ᵀA1`; `b · m2 = 1` exactly in rational terms.
    pub m2: u64,
    pub b: T,
}

/// Edge counts of a two-block partition; each undirected edge counted once.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CutCounts {
    pub within_one: u64,
    pub within_two: u64,
    pub cross: u64,
}

impl CutCounts {
    pub fn total(&self) -> u64 {
        self.within_one + self.within_two + self.cross
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Community::{One, Two};

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn build_collapses_duplicates_and_loops() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (1, 1), (1, 2)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(g.m2(), 4);
        assert!(!g.has_edge(1, 1));
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(Graph::from_edges(0, &[]), Err(Error::NoNodes)));
        assert!(matches!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(Error::NodeOutOfRange { node: 3, n: 3 })
        ));
    }

    #[test]
    fn empty_graph_is_valid_but_has_no_b() {
        let g = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(g.m2(), 0);
        assert_eq!(g.node_count(), 2);
        assert!(matches!(g.degree_data::<f64>(), Err(Error::EmptyGraph)));
    }

    #[test]
    fn degree_data_small_graphs() {
        let t = triangle().degree_data::<f64>().unwrap();
        assert_eq!(t.degrees, vec![2, 2, 2]);
        assert_eq!(t.b, 1.0 / 6.0);

        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let p = path.degree_data::<f64>().unwrap();
        assert_eq!(p.degrees, vec![1, 2, 1]);
        assert_eq!(p.b, 0.25);

        let single = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let s = single.degree_data::<f32>().unwrap();
        assert_eq!(s.degrees, vec![1, 1]);
        assert_eq!(s.b, 0.5);
        assert_eq!(s.m2, 2);
    }

    #[test]
    fn cut_counts_examples() {
        let g = triangle();
        let c = g.cut_counts(&[One, One, One]).unwrap();
        assert_eq!((c.within_one, c.within_two, c.cross), (3, 0, 0));
        let c = g.cut_counts(&[One, One, Two]).unwrap();
        assert_eq!((c.within_one, c.within_two, c.cross), (1, 0, 2));

        let e = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let c = e.cut_counts(&[One, Two]).unwrap();
        assert_eq!((c.within_one, c.within_two, c.cross), (0, 0, 1));

        assert!(matches!(
            g.cut_counts(&[One]),
            Err(Error::LengthMismatch {
                expected: 3,
                got: 1
            })
        ));
    }

    #[test]
    fn community_serde_as_integer() {
        let json = serde_json::to_string(&[One, Two]).unwrap();
        assert_eq!(json, "[1,2]");
        let back: Vec<Community> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![One, Two]);
        assert!(serde_json::from_str::<Community>("3").is_err());
    }
}
