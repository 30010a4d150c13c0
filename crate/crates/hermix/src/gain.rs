//! Exact arithmetic in the k-th roots of unity.
//!
//! Gains are stored as exponents mod k, never as floating complex numbers:
//! an entry `omega^e` is the integer `e` in `0..k`. All cospectrality
//! conditions that the crate derives from cycle weights are computed in this
//! exact form; floating point only enters when real parts of weights are
//! compared, with a tolerance far below the spacing of distinct cosines for
//! any reasonable k.

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

use crate::graph::{GraphError, MixedGraph};

/// Tolerance for comparing real parts of cycle weights. The values compared
/// are cosines of rational angles; distinct ones differ by far more than
/// this for k up to several hundred.
pub const REAL_PART_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GainError {
    #[error("root order k must be at least 3, got {0}")]
    KTooSmall(u32),
    #[error("no gain entry between vertices {0} and {1}; the sequence is not a closed walk")]
    NotACycle(usize, usize),
    #[error("graphs do not share the same underlying graph")]
    UnderlyingMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The order k >= 3 of the root of unity `omega = exp(2*pi*i/k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootParameter(u32);

impl RootParameter {
    pub fn new(k: u32) -> Result<Self, GainError> {
        if k < 3 {
            return Err(GainError::KTooSmall(k));
        }
        Ok(RootParameter(k))
    }

    pub fn k(self) -> u32 {
        self.0
    }

    /// Normalizes an exponent into `0..k`.
    pub fn reduce(self, e: i64) -> u32 {
        e.rem_euclid(self.0 as i64) as u32
    }

    /// The conjugate exponent `-e mod k`.
    pub fn conjugate(self, e: u32) -> u32 {
        self.reduce(-(e as i64))
    }

    /// `omega^e` as a complex number.
    pub fn unit(self, e: i64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.reduce(e) as f64 / self.0 as f64)
    }

    /// Real part of `omega^e`, i.e. `cos(2*pi*e/k)`.
    pub fn real_part(self, e: i64) -> f64 {
        (TAU * self.reduce(e) as f64 / self.0 as f64).cos()
    }
}

/// The Hermitian adjacency matrix of a mixed graph in exact gain form.
///
/// `entry(i, j)` is `None` off the underlying graph and `Some(e)` for the
/// exponent of the complex entry `omega^e`: undirected edges carry exponent
/// 0 both ways, an arc `u -> v` carries 1 at `(u, v)` and `k - 1` at
/// `(v, u)`. The matrix is Hermitian in gain form: paired exponents sum to
/// 0 mod k and the diagonal is absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GainMatrix {
    n: usize,
    k: RootParameter,
    entries: Vec<Option<u32>>,
}

impl GainMatrix {
    pub fn from_graph(g: &MixedGraph, k: RootParameter) -> Self {
        let n = g.n();
        let mut entries = vec![None; n * n];
        for (u, v) in g.undirected_edges() {
            entries[u * n + v] = Some(0);
            entries[v * n + u] = Some(0);
        }
        for (u, v) in g.arcs() {
            entries[u * n + v] = Some(1);
            entries[v * n + u] = Some(k.k() - 1);
        }
        GainMatrix { n, k, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> RootParameter {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<u32> {
        self.entries[i * self.n + j]
    }

    /// Checks the Hermitian-in-gain invariant; test support.
    pub fn is_hermitian_gain(&self) -> bool {
        for i in 0..self.n {
            if self.entry(i, i).is_some() {
                return false;
            }
            for j in 0..self.n {
                match (self.entry(i, j), self.entry(j, i)) {
                    (None, None) => {}
                    (Some(e), Some(f)) => {
                        if self.k.reduce(e as i64 + f as i64) != 0 {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
        }
        true
    }

    /// Weight exponent of a closed walk, traversed in the order given with
    /// the final step back to the first vertex. The weight of the cycle is
    /// `omega` to this exponent; traversing the reverse direction negates it
    /// mod k.
    pub fn cycle_weight(&self, cycle: &[usize]) -> Result<u32, GainError> {
        let mut sum: i64 = 0;
        for i in 0..cycle.len() {
            let from = cycle[i];
            let to = cycle[(i + 1) % cycle.len()];
            match self.entry(from, to) {
                Some(e) => sum += e as i64,
                None => return Err(GainError::NotACycle(from, to)),
            }
        }
        Ok(self.k.reduce(sum))
    }
}

/// Real part of `omega^e` for the given root order.
pub fn real_part(e: i64, k: RootParameter) -> f64 {
    k.real_part(e)
}

/// Tests whether every simple cycle of the shared underlying graph has the
/// same weight real part in both graphs. When true, the graphs are
/// cospectral; the implication is one-directional.
pub fn cycle_realparts_match(
    ga: &MixedGraph,
    gb: &MixedGraph,
    k: RootParameter,
    cycle_cap: usize,
) -> Result<bool, GainError> {
    if !ga.same_underlying(gb) {
        return Err(GainError::UnderlyingMismatch);
    }
    let ma = GainMatrix::from_graph(ga, k);
    let mb = GainMatrix::from_graph(gb, k);
    for cycle in ga.underlying().simple_cycles(cycle_cap)? {
        let ra = k.real_part(ma.cycle_weight(&cycle)? as i64);
        let rb = k.real_part(mb.cycle_weight(&cycle)? as i64);
        if (ra - rb).abs() > REAL_PART_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::arbitrary_graph;
    use proptest::prelude::*;

    fn k(v: u32) -> RootParameter {
        RootParameter::new(v).unwrap()
    }

    fn directed_triangle() -> MixedGraph {
        MixedGraph::from_edges(3, &[], &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn undirected_triangle() -> MixedGraph {
        MixedGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], &[]).unwrap()
    }

    #[test]
    fn k_must_be_at_least_three() {
        assert_eq!(
            RootParameter::new(2).unwrap_err(),
            GainError::KTooSmall(2)
        );
        assert_eq!(k(3).k(), 3);
    }

    #[test]
    fn gain_entries_of_k2() {
        let g: MixedGraph = "n 2\ne 0 1".parse().unwrap();
        for kk in [3u32, 4, 7] {
            let m = GainMatrix::from_graph(&g, k(kk));
            assert_eq!(m.entry(0, 1), Some(0));
            assert_eq!(m.entry(1, 0), Some(0));
            assert_eq!(m.entry(0, 0), None);
        }
    }

    #[test]
    fn gain_entries_of_single_arc() {
        let g: MixedGraph = "n 2\na 0 1".parse().unwrap();
        let m = GainMatrix::from_graph(&g, k(5));
        assert_eq!(m.entry(0, 1), Some(1));
        assert_eq!(m.entry(1, 0), Some(4));
    }

    #[test]
    fn gain_entries_of_empty_graph() {
        let m = GainMatrix::from_graph(&MixedGraph::new(3), k(3));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.entry(i, j), None);
            }
        }
    }

    #[test]
    fn directed_triangle_weights() {
        let g = directed_triangle();
        let cycle = vec![0, 1, 2];
        assert_eq!(
            GainMatrix::from_graph(&g, k(3)).cycle_weight(&cycle).unwrap(),
            0
        );
        assert_eq!(
            GainMatrix::from_graph(&g, k(4)).cycle_weight(&cycle).unwrap(),
            3
        );
        assert_eq!(
            GainMatrix::from_graph(&undirected_triangle(), k(4))
                .cycle_weight(&cycle)
                .unwrap(),
            0
        );
    }

    #[test]
    fn cycle_weight_matches_complex_product() {
        // The exponent arithmetic agrees with multiplying the complex
        // entries directly.
        for kk in [3u32, 4, 5, 6] {
            let kk = k(kk);
            let m = GainMatrix::from_graph(&directed_triangle(), kk);
            let e = m.cycle_weight(&[0, 1, 2]).unwrap();
            let product: Complex64 = [(0, 1), (1, 2), (2, 0)]
                .iter()
                .map(|&(u, v)| kk.unit(m.entry(u, v).unwrap() as i64))
                .product();
            assert!((kk.unit(e as i64) - product).norm() < 1e-12);
        }
    }

    #[test]
    fn not_a_cycle_error() {
        let g: MixedGraph = "n 3\ne 0 1\ne 1 2".parse().unwrap();
        let m = GainMatrix::from_graph(&g, k(3));
        assert_eq!(
            m.cycle_weight(&[0, 1, 2]).unwrap_err(),
            GainError::NotACycle(2, 0)
        );
    }

    #[test]
    fn real_part_values() {
        assert!((real_part(0, k(5)) - 1.0).abs() < 1e-15);
        assert!((real_part(3, k(3)) - 1.0).abs() < 1e-15);
        assert!(real_part(1, k(4)).abs() < 1e-15);
        assert!((real_part(-1, k(4)) - real_part(3, k(4))).abs() < 1e-15);
    }

    #[test]
    fn realparts_match_on_triangles() {
        let a = undirected_triangle();
        let b = directed_triangle();
        // k = 3: both weights have real part 1.
        assert!(cycle_realparts_match(&a, &b, k(3), 100).unwrap());
        // k = 4: 1 vs cos(3*pi/2) = 0.
        assert!(!cycle_realparts_match(&a, &b, k(4), 100).unwrap());
    }

    #[test]
    fn realparts_match_vacuously_on_trees() {
        let a: MixedGraph = "n 4\ne 0 1\ne 1 2\ne 2 3".parse().unwrap();
        let b: MixedGraph = "n 4\na 1 0\ne 1 2\na 2 3".parse().unwrap();
        assert!(cycle_realparts_match(&a, &b, k(7), 100).unwrap());
    }

    #[test]
    fn realparts_match_requires_same_underlying() {
        let a: MixedGraph = "n 3\ne 0 1".parse().unwrap();
        let b: MixedGraph = "n 3\ne 1 2".parse().unwrap();
        assert_eq!(
            cycle_realparts_match(&a, &b, k(3), 100).unwrap_err(),
            GainError::UnderlyingMismatch
        );
    }

    proptest! {
        #[test]
        fn gain_matrix_is_hermitian(g in arbitrary_graph(7), kk in 3u32..9) {
            prop_assert!(GainMatrix::from_graph(&g, k(kk)).is_hermitian_gain());
        }

        #[test]
        fn cycle_weight_reversal_and_rotation(g in arbitrary_graph(7), kk in 3u32..9) {
            let kk = k(kk);
            let m = GainMatrix::from_graph(&g, kk);
            let conv = GainMatrix::from_graph(&g.converse(), kk);
            for cycle in g.simple_cycles(10_000).unwrap() {
                let w = m.cycle_weight(&cycle).unwrap();

                let mut reversed = cycle.clone();
                reversed.reverse();
                prop_assert_eq!(m.cycle_weight(&reversed).unwrap(), kk.conjugate(w));

                let mut rotated = cycle.clone();
                let shift = 1.min(cycle.len() - 1);
                rotated.rotate_left(shift);
                prop_assert_eq!(m.cycle_weight(&rotated).unwrap(), w);

                // The converse negates every cycle weight.
                prop_assert_eq!(conv.cycle_weight(&cycle).unwrap(), kk.conjugate(w));
            }
        }
    }
}
