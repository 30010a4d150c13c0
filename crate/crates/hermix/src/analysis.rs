//! Balance detection and spectral-radius extremal classification.
//!
//! Both analyses solve difference constraints on vertex potentials by BFS
//! and return machine-checkable certificates: a partition on success, or a
//! closed walk whose accumulated constraint is nonzero on failure.
//!
//! The balance question (is the graph cospectral with its underlying
//! graph?) uses potentials in Z_k: undirected edges force equal values and
//! an arc u -> v forces value(u) - value(v) = 1. The spectral-radius
//! question additionally tries the negated variant in Z_2k, where zeta is a
//! primitive 2k-th root with omega = zeta^2: an undirected edge forces a
//! difference of k (a sign flip) and an arc u -> v forces
//! value(v) - value(u) = k - 2 (the factor -conj(omega)). A graph attains
//! rho = max degree exactly when it is regular and one of the two potential
//! systems is solvable; both verdicts are cross-checked numerically and any
//! disagreement surfaces as a [`AnalysisError::TheoremViolation`].

use serde::Serialize;
use thiserror::Error;

use crate::gain::RootParameter;
use crate::graph::MixedGraph;
use crate::spectra::{HermitianMatrix, SpectraError};
use crate::switching::Partition;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("graph must be connected")]
    Disconnected,
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("k must be odd, got {0}")]
    KMustBeOdd(u32),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// A solved potential: one value per vertex in `0..modulus`, with the BFS
/// root of every component at 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PotentialAssignment {
    pub modulus: u32,
    pub values: Vec<u32>,
}

/// A closed walk (first vertex repeated at the end) whose accumulated
/// constraint deltas are nonzero mod `modulus` — the witness that no
/// potential exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConflictCycle {
    pub modulus: u32,
    pub walk: Vec<usize>,
    pub residue: u32,
}

/// Difference constraints over `Z_modulus`: stepping through an undirected
/// edge adds `undirected_delta`, stepping along an arc adds `arc_delta`,
/// and stepping against an arc subtracts it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeConstraints {
    pub modulus: u32,
    pub undirected_delta: u32,
    pub arc_delta: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PotentialOutcome {
    Assigned(PotentialAssignment),
    Conflict(ConflictCycle),
}

impl EdgeConstraints {
    /// Constraints whose solutions certify `+Delta` extremality (and, for
    /// connected graphs, balance): equal values across undirected edges,
    /// `value(u) - value(v) = 1` along an arc `u -> v`.
    pub fn positive(k: RootParameter) -> Self {
        EdgeConstraints {
            modulus: k.k(),
            undirected_delta: 0,
            arc_delta: k.k() - 1,
        }
    }

    /// Constraints whose solutions certify `-Delta` extremality, in
    /// zeta-exponents mod 2k: a sign flip across undirected edges and the
    /// factor `-conj(omega) = zeta^(k-2)` along arcs.
    pub fn negative(k: RootParameter) -> Self {
        EdgeConstraints {
            modulus: 2 * k.k(),
            undirected_delta: k.k(),
            arc_delta: k.k() - 2,
        }
    }

    fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.modulus as i64) as u32
    }

    /// Delta for the step `from -> to`, or `None` when not adjacent.
    pub fn step_delta(&self, g: &MixedGraph, from: usize, to: usize) -> Option<u32> {
        if g.has_undirected(from, to) {
            Some(self.undirected_delta)
        } else if g.has_arc(from, to) {
            Some(self.arc_delta)
        } else if g.has_arc(to, from) {
            Some(self.reduce(-(self.arc_delta as i64)))
        } else {
            None
        }
    }

    /// Accumulated delta along a walk; `None` if a step is not an edge.
    pub fn walk_residue(&self, g: &MixedGraph, walk: &[usize]) -> Option<u32> {
        let mut sum = 0i64;
        for pair in walk.windows(2) {
            sum += self.step_delta(g, pair[0], pair[1])? as i64;
        }
        Some(self.reduce(sum))
    }

    /// BFS potential assignment, per component with the smallest-index
    /// vertex as root at value 0. Stops at the first inconsistent edge and
    /// returns the closed walk through the BFS tree that witnesses it.
    pub fn solve(&self, g: &MixedGraph) -> PotentialOutcome {
        let n = g.n();
        let adjacency = g.adjacency();
        let mut values: Vec<Option<u32>> = vec![None; n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..n {
            if values[root].is_some() {
                continue;
            }
            values[root] = Some(0);
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                let vu = values[u].unwrap();
                for &w in &adjacency[u] {
                    let delta = self.step_delta(g, u, w).expect("adjacent");
                    let expected = self.reduce(vu as i64 + delta as i64);
                    match values[w] {
                        None => {
                            values[w] = Some(expected);
                            parent[w] = Some(u);
                            queue.push_back(w);
                        }
                        Some(found) if found != expected => {
                            let conflict = self.build_conflict(g, &parent, u, w);
                            return PotentialOutcome::Conflict(conflict);
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        PotentialOutcome::Assigned(PotentialAssignment {
            modulus: self.modulus,
            values: values.into_iter().map(|v| v.unwrap()).collect(),
        })
    }

    fn build_conflict(
        &self,
        g: &MixedGraph,
        parent: &[Option<usize>],
        u: usize,
        w: usize,
    ) -> ConflictCycle {
        let path_to_root = |mut v: usize| {
            let mut path = vec![v];
            while let Some(p) = parent[v] {
                path.push(p);
                v = p;
            }
            path
        };
        let pu = path_to_root(u);
        let pw = path_to_root(w);
        let in_pu: std::collections::HashMap<usize, usize> =
            pu.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        // First vertex on w's root path that also lies on u's is the meeting
        // point of the two tree paths.
        let (wi, meet) = pw
            .iter()
            .enumerate()
            .find(|(_, v)| in_pu.contains_key(v))
            .map(|(i, &v)| (i, v))
            .expect("paths share the root");
        let ui = in_pu[&meet];

        let mut walk: Vec<usize> = pw[..=wi].to_vec();
        walk.extend(pu[..ui].iter().rev());
        walk.push(w);
        let residue = self
            .walk_residue(g, &walk)
            .expect("walk follows tree edges plus the conflict edge");
        debug_assert_ne!(residue, 0, "conflict walk must have nonzero residue");
        ConflictCycle {
            modulus: self.modulus,
            walk,
            residue,
        }
    }
}

/// Result of the balance test: either a partition certifying that the graph
/// is switching-equivalent to its underlying graph, or a conflict cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BalanceOutcome {
    Balanced {
        partition: Partition,
        potential: PotentialAssignment,
    },
    Unbalanced {
        conflict: ConflictCycle,
    },
}

impl BalanceOutcome {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceOutcome::Balanced { .. })
    }
}

/// Searches for a vertex partition under which every undirected edge stays
/// within a part and every arc steps down one part index mod k. Success is
/// equivalent to the graph being cospectral with its underlying graph
/// (for connected graphs); disconnected input is solved per component.
pub fn find_unit_partition(g: &MixedGraph, k: RootParameter) -> BalanceOutcome {
    match EdgeConstraints::positive(k).solve(g) {
        PotentialOutcome::Assigned(potential) => {
            let parts: Vec<u32> = potential.values.iter().map(|&v| v + 1).collect();
            let partition = Partition::new(k.k(), parts).expect("values lie in 0..k");
            BalanceOutcome::Balanced {
                partition,
                potential,
            }
        }
        PotentialOutcome::Conflict(conflict) => BalanceOutcome::Unbalanced { conflict },
    }
}

/// Two-route balance report: the combinatorial verdict from
/// [`find_unit_partition`] and the numeric verdict `lambda_1(M) =
/// lambda_1(G)`. The two must agree; disagreement is a
/// [`AnalysisError::TheoremViolation`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnderlyingReport {
    pub combinatorial: bool,
    pub numeric: bool,
    pub lambda_mixed: Option<f64>,
    pub lambda_underlying: Option<f64>,
    pub certificate: BalanceOutcome,
}

pub fn cospectral_to_underlying(
    g: &MixedGraph,
    k: RootParameter,
    tol: f64,
) -> Result<UnderlyingReport, AnalysisError> {
    if !g.is_connected() {
        return Err(AnalysisError::Disconnected);
    }
    let certificate = find_unit_partition(g, k);
    let combinatorial = certificate.is_balanced();
    let lambda_mixed = HermitianMatrix::from_graph(g, k).eigenvalues()?.leading();
    let lambda_underlying = HermitianMatrix::from_graph(&g.underlying(), k)
        .eigenvalues()?
        .leading();
    let numeric = match (lambda_mixed, lambda_underlying) {
        (Some(a), Some(b)) => (a - b).abs() <= tol,
        (None, None) => true,
        _ => false,
    };
    if combinatorial != numeric {
        return Err(AnalysisError::TheoremViolation(format!(
            "balance partition {} but lambda_1 gap {:?} vs {:?}",
            if combinatorial { "exists" } else { "is impossible" },
            lambda_mixed,
            lambda_underlying,
        )));
    }
    Ok(UnderlyingReport {
        combinatorial,
        numeric,
        lambda_mixed,
        lambda_underlying,
        certificate,
    })
}

/// Case (iii) certificate for odd k: each vertex carries a part in `1..=k`
/// and a sign; `negated[v]` marks the second (negated) copy of the part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoublePartition {
    pub k: u32,
    pub part: Vec<u32>,
    pub negated: Vec<bool>,
}

/// Certificate that `-Delta` is attained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum NegativeCertificate {
    Even { partition: Partition },
    Odd { partition: DoublePartition },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtremalOutcome {
    NotRegular,
    NotExtremal,
    PositiveExtremal,
    NegativeExtremalEven,
    NegativeExtremalOdd,
}

/// Outcome of the extremal analysis, with the full evidence: both potential
/// attempts are reported, so a graph attaining both `+Delta` and `-Delta`
/// (possible for even k, and necessarily the case for odd k whenever
/// `-Delta` is attained) carries both certificates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub regular: bool,
    pub delta: usize,
    pub rho: f64,
    pub borderline: bool,
    pub outcome: ExtremalOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive: Option<Partition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive_conflict: Option<ConflictCycle>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative: Option<NegativeCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative_conflict: Option<ConflictCycle>,
}

impl ClassificationReport {
    pub fn is_extremal(&self) -> bool {
        matches!(
            self.outcome,
            ExtremalOutcome::PositiveExtremal
                | ExtremalOutcome::NegativeExtremalEven
                | ExtremalOutcome::NegativeExtremalOdd
        )
    }
}

fn negative_certificate(k: RootParameter, potential: &PotentialAssignment) -> NegativeCertificate {
    let kk = k.k();
    if kk % 2 == 0 {
        // Both step deltas are even, so every value is even and the
        // assignment collapses into omega-exponents: part = value/2.
        let parts: Vec<u32> = potential.values.iter().map(|&v| (v / 2) % kk + 1).collect();
        NegativeCertificate::Even {
            partition: Partition::new(kk, parts).expect("halved values lie in 0..k"),
        }
    } else {
        // Odd k: parity separates x in T_k (even zeta-exponent) from
        // -x in T_k (odd); halving lands each side on its omega-exponent.
        let mut part = Vec::with_capacity(potential.values.len());
        let mut negated = Vec::with_capacity(potential.values.len());
        for &v in &potential.values {
            if v % 2 == 0 {
                part.push((v / 2) % kk + 1);
                negated.push(false);
            } else {
                part.push(((v + kk) / 2) % kk + 1);
                negated.push(true);
            }
        }
        NegativeCertificate::Odd {
            partition: DoublePartition {
                k: kk,
                part,
                negated,
            },
        }
    }
}

/// Classifies whether a connected mixed graph attains the spectral-radius
/// bound `rho = Delta`. Tries the `+Delta` potential first, then the
/// `-Delta` potential, and cross-checks the combinatorial verdict against
/// the numeric radius at tolerance `tol`. Gaps within 10x of the tolerance
/// are flagged borderline instead of failing the cross-check.
pub fn extremal_classification(
    g: &MixedGraph,
    k: RootParameter,
    tol: f64,
) -> Result<ClassificationReport, AnalysisError> {
    if !g.is_connected() {
        return Err(AnalysisError::Disconnected);
    }
    if g.edge_count() == 0 {
        return Err(AnalysisError::EmptyEdgeSet);
    }
    let delta = g.max_degree();
    let rho = HermitianMatrix::from_graph(g, k)
        .eigenvalues()?
        .spectral_radius();
    let gap = (rho - delta as f64).abs();
    let borderline = gap > tol && gap <= 10.0 * tol;
    let regular = g.is_regular();

    if !regular {
        if gap <= tol {
            return Err(AnalysisError::TheoremViolation(format!(
                "graph is not regular but rho = {rho} attains Delta = {delta}"
            )));
        }
        return Ok(ClassificationReport {
            regular,
            delta,
            rho,
            borderline,
            outcome: ExtremalOutcome::NotRegular,
            positive: None,
            positive_conflict: None,
            negative: None,
            negative_conflict: None,
        });
    }

    let mut report = ClassificationReport {
        regular,
        delta,
        rho,
        borderline,
        outcome: ExtremalOutcome::NotExtremal,
        positive: None,
        positive_conflict: None,
        negative: None,
        negative_conflict: None,
    };
    match EdgeConstraints::positive(k).solve(g) {
        PotentialOutcome::Assigned(potential) => {
            let parts: Vec<u32> = potential.values.iter().map(|&v| v + 1).collect();
            report.positive = Some(Partition::new(k.k(), parts).expect("values lie in 0..k"));
        }
        PotentialOutcome::Conflict(conflict) => report.positive_conflict = Some(conflict),
    }
    match EdgeConstraints::negative(k).solve(g) {
        PotentialOutcome::Assigned(potential) => {
            report.negative = Some(negative_certificate(k, &potential));
        }
        PotentialOutcome::Conflict(conflict) => report.negative_conflict = Some(conflict),
    }

    report.outcome = if report.positive.is_some() {
        ExtremalOutcome::PositiveExtremal
    } else if let Some(cert) = &report.negative {
        match cert {
            NegativeCertificate::Even { .. } => ExtremalOutcome::NegativeExtremalEven,
            NegativeCertificate::Odd { .. } => ExtremalOutcome::NegativeExtremalOdd,
        }
    } else {
        ExtremalOutcome::NotExtremal
    };

    let extremal = report.is_extremal();
    if extremal && gap > 10.0 * tol {
        return Err(AnalysisError::TheoremViolation(format!(
            "extremal partition exists but rho = {rho} misses Delta = {delta}"
        )));
    }
    if !extremal && gap <= tol {
        return Err(AnalysisError::TheoremViolation(format!(
            "no extremal partition but rho = {rho} attains Delta = {delta}"
        )));
    }
    Ok(report)
}

/// Re-verifies a case (i) partition: undirected edges within a part, arcs
/// stepping down one part index mod k.
pub fn verify_positive_partition(g: &MixedGraph, p: &Partition, k: RootParameter) -> bool {
    if p.len() != g.n() || p.parts() != k.k() {
        return false;
    }
    g.undirected_edges().all(|(u, v)| p.part(u) == p.part(v))
        && g.arcs()
            .all(|(u, v)| k.reduce(p.part(u) as i64 - p.part(v) as i64) == 1)
}

/// Re-verifies a case (ii) partition (even k): undirected edges join parts
/// k/2 apart, arcs step k/2 - 1 forward.
pub fn verify_negative_even_partition(g: &MixedGraph, p: &Partition, k: RootParameter) -> bool {
    let kk = k.k();
    if kk % 2 != 0 || p.len() != g.n() || p.parts() != kk {
        return false;
    }
    let half = kk / 2;
    g.undirected_edges()
        .all(|(u, v)| k.reduce(p.part(v) as i64 - p.part(u) as i64) == half)
        && g.arcs()
            .all(|(u, v)| k.reduce(p.part(v) as i64 - p.part(u) as i64) == half - 1)
}

/// Re-verifies a case (iii) double partition (odd k): every edge and arc
/// crosses between the plain and negated copies, undirected edges within
/// the same part index and arcs stepping down one index mod k.
pub fn verify_negative_odd_partition(g: &MixedGraph, dp: &DoublePartition, k: RootParameter) -> bool {
    let kk = k.k();
    if kk % 2 == 0 || dp.part.len() != g.n() || dp.negated.len() != g.n() || dp.k != kk {
        return false;
    }
    g.undirected_edges()
        .all(|(u, v)| dp.part[u] == dp.part[v] && dp.negated[u] != dp.negated[v])
        && g.arcs().all(|(u, v)| {
            k.reduce(dp.part[u] as i64 - dp.part[v] as i64) == 1 && dp.negated[u] != dp.negated[v]
        })
}

/// Re-evaluates a conflict cycle against the constraint system it came
/// from: the walk must be closed, consist of adjacent steps, and accumulate
/// exactly the recorded nonzero residue.
pub fn verify_conflict_cycle(g: &MixedGraph, constraints: EdgeConstraints, c: &ConflictCycle) -> bool {
    if c.modulus != constraints.modulus || c.residue == 0 {
        return false;
    }
    if c.walk.len() < 2 || c.walk.first() != c.walk.last() {
        return false;
    }
    constraints.walk_residue(g, &c.walk) == Some(c.residue)
}

/// For odd k: if `-Delta` is an eigenvalue then `Delta` must be one too.
/// Returns whether the hypothesis was triggered; a counterexample would be a
/// [`AnalysisError::TheoremViolation`].
pub fn negative_implies_positive_check(
    g: &MixedGraph,
    k: RootParameter,
    tol: f64,
) -> Result<bool, AnalysisError> {
    if k.k() % 2 == 0 {
        return Err(AnalysisError::KMustBeOdd(k.k()));
    }
    if !g.is_connected() {
        return Err(AnalysisError::Disconnected);
    }
    let spectrum = HermitianMatrix::from_graph(g, k).eigenvalues()?;
    let delta = g.max_degree() as f64;
    let triggered = spectrum.contains(-delta, tol);
    if triggered && !spectrum.contains(delta, tol) {
        return Err(AnalysisError::TheoremViolation(format!(
            "-Delta = {} is an eigenvalue but Delta is not; spectrum {:?}",
            -delta,
            spectrum.values()
        )));
    }
    Ok(triggered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::cospectral;
    use crate::switching::verify_similarity;

    fn k(v: u32) -> RootParameter {
        RootParameter::new(v).unwrap()
    }

    fn directed_cycle(n: usize) -> MixedGraph {
        let arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MixedGraph::from_edges(n, &[], &arcs).unwrap()
    }

    fn undirected_cycle(n: usize) -> MixedGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MixedGraph::from_edges(n, &edges, &[]).unwrap()
    }

    #[test]
    fn trees_are_balanced() {
        let tree: MixedGraph = "n 5\na 0 1\ne 1 2\na 3 1\ne 3 4".parse().unwrap();
        for kk in 3..=8 {
            assert!(find_unit_partition(&tree, k(kk)).is_balanced());
        }
    }

    #[test]
    fn directed_triangle_balance_depends_on_k() {
        let g = directed_cycle(3);
        match find_unit_partition(&g, k(3)) {
            BalanceOutcome::Balanced { potential, .. } => {
                assert_eq!(potential.values, vec![0, 2, 1]);
            }
            other => panic!("expected balance, got {other:?}"),
        }
        match find_unit_partition(&g, k(4)) {
            BalanceOutcome::Unbalanced { conflict } => {
                assert_eq!(conflict.residue, 1);
                assert_eq!(conflict.walk.first(), conflict.walk.last());
                assert!(verify_conflict_cycle(&g, EdgeConstraints::positive(k(4)), &conflict));
            }
            other => panic!("expected conflict, got {other:?}"),
        }
    }

    #[test]
    fn balance_partition_gives_exact_similarity_to_underlying() {
        // Negating the potential turns the balance certificate into the
        // diagonal similarity carrying the underlying graph onto the mixed
        // graph.
        let g = directed_cycle(3);
        let kk = k(3);
        let BalanceOutcome::Balanced { potential, .. } = find_unit_partition(&g, kk) else {
            panic!("balanced")
        };
        let q = Partition::new(
            3,
            potential
                .values
                .iter()
                .map(|&v| kk.reduce(-(v as i64)) + 1)
                .collect(),
        )
        .unwrap();
        let check = verify_similarity(&g.underlying(), &g, &q, kk).unwrap();
        assert!(check.similar);
    }

    #[test]
    fn underlying_report_for_trees_and_cycles() {
        let tree: MixedGraph = "n 4\na 0 1\ne 1 2\na 2 3".parse().unwrap();
        let r = cospectral_to_underlying(&tree, k(5), 1e-8).unwrap();
        assert!(r.combinatorial && r.numeric);

        let r = cospectral_to_underlying(&directed_cycle(3), k(3), 1e-8).unwrap();
        assert!(r.combinatorial && r.numeric);
        assert!((r.lambda_mixed.unwrap() - 2.0).abs() < 1e-10);

        let r = cospectral_to_underlying(&directed_cycle(6), k(4), 1e-8).unwrap();
        assert!(!r.combinatorial && !r.numeric);
        assert!((r.lambda_mixed.unwrap() - 3f64.sqrt()).abs() < 1e-10);
        assert!((r.lambda_underlying.unwrap() - 2.0).abs() < 1e-10);

        let disconnected: MixedGraph = "n 4\ne 0 1\ne 2 3".parse().unwrap();
        assert_eq!(
            cospectral_to_underlying(&disconnected, k(3), 1e-8).unwrap_err(),
            AnalysisError::Disconnected
        );
    }

    #[test]
    fn undirected_regular_graphs_are_positive_extremal() {
        for kk in [3u32, 4, 5] {
            let report = extremal_classification(&undirected_cycle(6), k(kk), 1e-8).unwrap();
            assert_eq!(report.outcome, ExtremalOutcome::PositiveExtremal);
            assert!((report.rho - 2.0).abs() < 1e-10);
            let p = report.positive.as_ref().unwrap();
            assert!(verify_positive_partition(&undirected_cycle(6), p, k(kk)));
            // All vertices in one part.
            assert!(p.assignment().iter().all(|&x| x == 1));
        }
    }

    #[test]
    fn k33_carries_both_certificates_at_k4() {
        let mut g = MixedGraph::new(6);
        for u in 0..3 {
            for v in 3..6 {
                g.add_undirected(u, v).unwrap();
            }
        }
        let kk = k(4);
        let report = extremal_classification(&g, kk, 1e-8).unwrap();
        assert_eq!(report.outcome, ExtremalOutcome::PositiveExtremal);
        assert!((report.rho - 3.0).abs() < 1e-10);
        // Bipartite regular: -Delta is attained as well, with the sides in
        // parts k/2 = 2 apart.
        let Some(NegativeCertificate::Even { partition }) = &report.negative else {
            panic!("expected the even negative certificate")
        };
        assert!(verify_negative_even_partition(&g, partition, kk));
        let diff = kk.reduce(partition.part(3) as i64 - partition.part(0) as i64);
        assert_eq!(diff, 2);
        let spectrum = HermitianMatrix::from_graph(&g, kk).eigenvalues().unwrap();
        assert!(spectrum.contains(-3.0, 1e-8));
    }

    #[test]
    fn pure_negative_even_case() {
        // Two arcs and one undirected edge around a triangle: at k = 4 the
        // cycle weight is -1, the spectrum is {1, 1, -2}, so only -Delta is
        // attained.
        let g: MixedGraph = "n 3\na 0 1\na 1 2\ne 0 2".parse().unwrap();
        let report = extremal_classification(&g, k(4), 1e-8).unwrap();
        assert_eq!(report.outcome, ExtremalOutcome::NegativeExtremalEven);
        assert!(report.positive.is_none());
        assert!(report.positive_conflict.is_some());
        let Some(NegativeCertificate::Even { partition }) = &report.negative else {
            panic!("expected even certificate")
        };
        assert!(verify_negative_even_partition(&g, partition, k(4)));
        let spectrum = HermitianMatrix::from_graph(&g, k(4)).eigenvalues().unwrap();
        assert!(spectrum.contains(-2.0, 1e-8));
        assert!(!spectrum.contains(2.0, 1e-8));
    }

    #[test]
    fn directed_c6_at_k3_has_odd_double_partition() {
        // Both +-2 are eigenvalues; the positive outcome wins, and the odd
        // negative certificate is still reported and re-verifies.
        let g = directed_cycle(6);
        let kk = k(3);
        let report = extremal_classification(&g, kk, 1e-8).unwrap();
        assert_eq!(report.outcome, ExtremalOutcome::PositiveExtremal);
        let Some(NegativeCertificate::Odd { partition }) = &report.negative else {
            panic!("expected odd certificate")
        };
        assert!(verify_negative_odd_partition(&g, partition, kk));
        // Signs must alternate around the cycle.
        for i in 0..6 {
            assert_ne!(partition.negated[i], partition.negated[(i + 1) % 6]);
        }
    }

    #[test]
    fn directed_c6_at_k4_is_not_extremal() {
        let report = extremal_classification(&directed_cycle(6), k(4), 1e-8).unwrap();
        assert_eq!(report.outcome, ExtremalOutcome::NotExtremal);
        assert!((report.rho - 3f64.sqrt()).abs() < 1e-10);
        let pc = report.positive_conflict.as_ref().unwrap();
        assert!(verify_conflict_cycle(
            &directed_cycle(6),
            EdgeConstraints::positive(k(4)),
            pc
        ));
        let nc = report.negative_conflict.as_ref().unwrap();
        assert!(verify_conflict_cycle(
            &directed_cycle(6),
            EdgeConstraints::negative(k(4)),
            nc
        ));
    }

    #[test]
    fn directed_ck_attains_the_bound() {
        // All-forward k-cycle with root order k: the potential drops by one
        // per arc and closes up since -k = 0 mod k.
        for kk in 3u32..=6 {
            let g = directed_cycle(kk as usize);
            let report = extremal_classification(&g, k(kk), 1e-8).unwrap();
            assert_eq!(report.outcome, ExtremalOutcome::PositiveExtremal);
            assert!((report.rho - 2.0).abs() < 1e-10, "k={kk}");
            let p = report.positive.as_ref().unwrap();
            assert!(verify_positive_partition(&g, p, k(kk)));
        }
    }

    #[test]
    fn non_regular_and_degenerate_inputs() {
        let path: MixedGraph = "n 4\ne 0 1\ne 1 2\ne 2 3".parse().unwrap();
        let report = extremal_classification(&path, k(3), 1e-8).unwrap();
        assert_eq!(report.outcome, ExtremalOutcome::NotRegular);
        assert!(report.rho < 2.0);

        let disconnected: MixedGraph = "n 4\ne 0 1\ne 2 3".parse().unwrap();
        assert_eq!(
            extremal_classification(&disconnected, k(3), 1e-8).unwrap_err(),
            AnalysisError::Disconnected
        );
        assert_eq!(
            extremal_classification(&MixedGraph::new(1), k(3), 1e-8).unwrap_err(),
            AnalysisError::EmptyEdgeSet
        );
    }

    #[test]
    fn odd_k_corollary_checks() {
        // Bipartite C4 at odd k: hypothesis triggers and the conclusion
        // holds.
        assert!(negative_implies_positive_check(&undirected_cycle(4), k(5), 1e-8).unwrap());
        // Balanced directed triangle: spectrum {2, -1, -1}.
        assert!(!negative_implies_positive_check(&directed_cycle(3), k(3), 1e-8).unwrap());
        // Odd cycle: min eigenvalue -1 > -2.
        assert!(!negative_implies_positive_check(&undirected_cycle(3), k(5), 1e-8).unwrap());
        assert_eq!(
            negative_implies_positive_check(&undirected_cycle(4), k(4), 1e-8).unwrap_err(),
            AnalysisError::KMustBeOdd(4)
        );
    }

    #[test]
    fn balance_success_implies_cospectral_to_underlying() {
        // The (c) => (a) direction on a handful of balanced graphs.
        let balanced = [
            directed_cycle(3),
            "n 4\na 0 1\ne 1 2\na 2 3".parse().unwrap(),
            "n 1".parse().unwrap(),
        ];
        for g in &balanced {
            if find_unit_partition(g, k(3)).is_balanced() {
                let r = cospectral(g, &g.underlying(), k(3), 1e-8).unwrap();
                assert!(r.cospectral);
            }
        }
    }
}
