//! The modularity matrix `B = A − b·ddᵀ` as an implicit operator.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{DegreeData, Graph};
use crate::scalar::Real;

/// Default size cap for [`dense_modularity`].
pub const DENSE_CAP: usize = 512;

/// Symmetric linear operator applied without materialising a matrix.
pub trait SymmetricOperator<T: Real> {
    fn dim(&self) -> usize;

    /// Writes `M·x` into `out`. Both slices have length `dim()`.
    fn apply_into(&self, x: &[T], out: &mut [T]);
}

/// Matrix-free modularity operator of a graph.
#[derive(Debug, Clone)]
pub struct ModularityOperator<'g, T> {
    graph: &'g Graph,
    deg: DegreeData<T>,
    deg_real: Vec<T>,
}

impl<'g, T: Real> ModularityOperator<'g, T> {
    pub fn new(graph: &'g Graph) -> Result<Self> {
        let deg = graph.degree_data::<T>()?;
        let deg_real = deg.degrees.iter().map(|&d| T::of(d as f64)).collect();
        Ok(ModularityOperator {
            graph,
            deg,
            deg_real,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn degree_data(&self) -> &DegreeData<T> {
        &self.deg
    }

    /// Returns `Ax − b(dᵀx)d`.
    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        let n = self.graph.node_count();
        if x.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let mut out = vec![T::zero(); n];
        self.apply_into(x, &mut out);
        Ok(out)
    }

    /// `xᵀBx`.
    pub fn quadratic_form(&self, x: &[T]) -> Result<T> {
        let bx = self.apply(x)?;
        Ok(crate::scalar::dot(x, &bx))
    }
}

impl<T: Real> SymmetricOperator<T> for ModularityOperator<'_, T> {
    fn dim(&self) -> usize {
        self.graph.node_count()
    }

    fn apply_into(&self, x: &[T], out: &mut [T]) {
        // Sums run over sorted neighbor lists in index order, so results are
        // bitwise reproducible.
        let dtx = crate::scalar::dot(&self.deg_real, x);
        let coef = self.deg.b * dtx;
        for (i, o) in out.iter_mut().enumerate() {
            let ax = self
                .graph
                .neighbors(i)
                .iter()
                .fold(T::zero(), |acc, &j| acc + x[j as usize]);
            *o = ax - coef * self.deg_real[i];
        }
    }
}

/// Entrywise `A − b·ddᵀ` for small graphs (test oracle).
pub fn dense_modularity<T: Real>(g: &Graph, cap: usize) -> Result<DMatrix<T>> {
    let n = g.node_count();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let deg = g.degree_data::<T>()?;
    let d: Vec<T> = deg.degrees.iter().map(|&v| T::of(v as f64)).collect();
    let mut m = DMatrix::from_fn(n, n, |i, j| T::zero() - deg.b * (d[i] * d[j]));
    for (u, v) in g.edges() {
        m[(u, v)] = m[(u, v)] + T::one();
        m[(v, u)] = m[(v, u)] + T::one();
    }
    Ok(m)
}

/// A node subset together with its induced-subgraph degree data
/// (`d̃ = A_S 1`, `b_S = 1/Σd̃`).
#[derive(Debug, Clone)]
pub struct CommunityView<T> {
    nodes: Vec<usize>,
    /// Position of each graph node inside `nodes`, `usize::MAX` if absent.
    position: Vec<usize>,
    within_degrees: Vec<u32>,
    b: Option<T>,
}

impl<T: Real> CommunityView<T> {
    pub fn new(g: &Graph, nodes: &[usize]) -> Result<Self> {
        let n = g.node_count();
        let mut nodes = nodes.to_vec();
        nodes.sort_unstable();
        nodes.dedup();
        let mut position = vec![usize::MAX; n];
        for (k, &v) in nodes.iter().enumerate() {
            if v >= n {
                return Err(Error::NodeOutOfRange { node: v, n });
            }
            position[v] = k;
        }
        let within_degrees: Vec<u32> = nodes
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&j| position[j as usize] != usize::MAX)
                    .count() as u32
            })
            .collect();
        let total: u64 = within_degrees.iter().map(|&d| d as u64).sum();
        let b = (total > 0).then(|| T::one() / T::of(total as f64));
        Ok(CommunityView {
            nodes,
            position,
            within_degrees,
            b,
        })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn within_degrees(&self) -> &[u32] {
        &self.within_degrees
    }

    /// `1/Σd̃`; fails when the induced subgraph has no edges.
    pub fn b(&self) -> Result<T> {
        self.b.ok_or(Error::EdgelessSubgraph)
    }
}

/// `xᵀ B_S x` with `B_S = A_S − b_S d̃ d̃ᵀ`, `x` indexed like `view.nodes()`.
pub fn restricted_quadform<T: Real>(g: &Graph, view: &CommunityView<T>, x: &[T]) -> Result<T> {
    let b = view.b()?;
    if x.len() != view.nodes.len() {
        return Err(Error::LengthMismatch {
            expected: view.nodes.len(),
            got: x.len(),
        });
    }
    let mut xax = T::zero();
    let mut dtx = T::zero();
    for (k, &v) in view.nodes.iter().enumerate() {
        let row = g
            .neighbors(v)
            .iter()
            .map(|&j| view.position[j as usize])
            .filter(|&p| p != usize::MAX)
            .fold(T::zero(), |acc, p| acc + x[p]);
        xax = xax + x[k] * row;
        dtx = dtx + T::of(view.within_degrees[k] as f64) * x[k];
    }
    Ok(xax - b * dtx * dtx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    fn two_edges() -> Graph {
        Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap()
    }

    #[test]
    fn apply_annihilates_ones() {
        let g = two_edges();
        let op = ModularityOperator::<f64>::new(&g).unwrap();
        assert!(op.apply(&[1.0; 4]).unwrap().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn apply_triangle_basis_vector() {
        let g = triangle();
        let op = ModularityOperator::<f64>::new(&g).unwrap();
        let y = op.apply(&[1.0, 0.0, 0.0]).unwrap();
        let want = [-2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        for (a, b) in y.iter().zip(want) {
            assert!(close(*a, b, 1e-15));
        }
    }

    #[test]
    fn apply_two_edges_community_vector_is_fixed() {
        let g = two_edges();
        let op = ModularityOperator::<f64>::new(&g).unwrap();
        let x = [0.5, 0.5, -0.5, -0.5];
        let y = op.apply(&x).unwrap();
        assert_eq!(y, x.to_vec());
    }

    #[test]
    fn apply_rejects_wrong_length_and_empty_graph() {
        let g = triangle();
        let op = ModularityOperator::<f64>::new(&g).unwrap();
        assert!(matches!(
            op.apply(&[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        let empty = Graph::from_edges(2, &[]).unwrap();
        assert!(matches!(
            ModularityOperator::<f64>::new(&empty),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn dense_triangle_and_single_edge() {
        let m = dense_modularity::<f64>(&triangle(), DENSE_CAP).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                // B = (J − I) − (2/3)J = J/3 − I
                let want = 1.0 / 3.0 - if i == j { 1.0 } else { 0.0 };
                assert!(close(m[(i, j)], want, 1e-15));
            }
            assert!(m.row(i).sum().abs() < 1e-15);
        }

        let e = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = dense_modularity::<f64>(&e, DENSE_CAP).unwrap();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[-0.5, 0.5, 0.5, -0.5]));
    }

    #[test]
    fn dense_errors() {
        let empty = Graph::from_edges(3, &[]).unwrap();
        assert!(matches!(
            dense_modularity::<f64>(&empty, DENSE_CAP),
            Err(Error::EmptyGraph)
        ));
        assert!(matches!(
            dense_modularity::<f64>(&triangle(), 2),
            Err(Error::TooLarge { n: 3, cap: 2 })
        ));
    }

    #[test]
    fn restricted_quadform_examples() {
        let t = triangle();
        let all = CommunityView::<f64>::new(&t, &[0, 1, 2]).unwrap();
        assert!(
            restricted_quadform(&t, &all, &[1.0, 1.0, 1.0])
                .unwrap()
                .abs()
                < 1e-15
        );
        assert!(close(
            restricted_quadform(&t, &all, &[1.0, -1.0, 0.0]).unwrap(),
            -2.0,
            1e-15
        ));

        let g = two_edges();
        let s = CommunityView::<f64>::new(&g, &[0, 1]).unwrap();
        assert_eq!(s.within_degrees(), &[1, 1]);
        assert!(close(
            restricted_quadform(&g, &s, &[1.0, -1.0]).unwrap(),
            -2.0,
            1e-15
        ));
        assert!(restricted_quadform(&g, &s, &[1.0, 1.0]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn restricted_quadform_edgeless_subset() {
        let g = two_edges();
        let s = CommunityView::<f64>::new(&g, &[0, 2]).unwrap();
        assert_eq!(s.within_degrees(), &[0, 0]);
        assert!(matches!(
            restricted_quadform(&g, &s, &[1.0, -1.0]),
            Err(Error::EdgelessSubgraph)
        ));
    }

    #[test]
    fn restricted_view_matches_induced_subgraph() {
        // Path 0-1-2-3 plus chord 0-2; subset {0, 2, 3}.
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        let view = CommunityView::<f64>::new(&g, &[3, 0, 2]).unwrap();
        assert_eq!(view.nodes(), &[0, 2, 3]);
        assert_eq!(view.within_degrees(), &[1, 2, 1]);
        assert_eq!(view.b().unwrap(), 0.25);
    }
}
