//! Admissible partitions, three-way and two-way switching rewrites, exact
//! diagonal-similarity verification, and a bounded search for switching
//! equivalence.
//!
//! Part indices are 1-based: part `i` carries the diagonal entry
//! `omega^(i-1)`, so switching by an admissible partition realizes the
//! similarity `H' = D^-1 H D` with `D` block-diagonal. Similarity is
//! verified in exact exponent arithmetic; no floating point is involved.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::gain::{GainMatrix, RootParameter};
use crate::graph::MixedGraph;

/// Default ceiling on visited graphs in [`switching_equivalent_search`].
pub const DEFAULT_SEARCH_BUDGET: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SwitchError {
    #[error("partition covers {got} vertices, graph has {want}")]
    PartitionMismatch { got: usize, want: usize },
    #[error("partition has {got} parts, expected {want}")]
    PartCountMismatch { got: u32, want: u32 },
    #[error("vertex {vertex} assigned part {part}, outside 1..={parts}")]
    PartOutOfRange { vertex: usize, part: u32, parts: u32 },
    #[error("partition is not admissible: {} violation(s)", violations.len())]
    NotAdmissible { violations: Vec<Violation> },
    #[error("arc {0} -> {1} runs from part 2 to part 1, forbidden for two-way switching")]
    ForbiddenArc(usize, usize),
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("vertex {0} missing from the partition")]
    MissingVertex(usize),
}

/// A map from vertices to 1-based part indices `1..=parts`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    parts: u32,
    assignment: Vec<u32>,
}

impl Partition {
    pub fn new(parts: u32, assignment: Vec<u32>) -> Result<Self, SwitchError> {
        for (vertex, &part) in assignment.iter().enumerate() {
            if part == 0 || part > parts {
                return Err(SwitchError::PartOutOfRange {
                    vertex,
                    part,
                    parts,
                });
            }
        }
        Ok(Partition { parts, assignment })
    }

    /// Everything in part 1.
    pub fn uniform(n: usize, parts: u32) -> Self {
        Partition {
            parts,
            assignment: vec![1; n],
        }
    }

    pub fn parts(&self) -> u32 {
        self.parts
    }

    pub fn part(&self, v: usize) -> u32 {
        self.assignment[v]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// Parses the inline form `v0:1,v1:2,...`; every vertex `0..n` must
    /// appear exactly once.
    pub fn parse_inline(text: &str, parts: u32) -> Result<Self, SwitchError> {
        let mut map = HashMap::new();
        for (i, item) in text.split(',').enumerate() {
            let item = item.trim();
            let err = |msg: String| SwitchError::Syntax(i + 1, msg);
            let (vtok, ptok) = item
                .split_once(':')
                .ok_or_else(|| err(format!("expected 'v<index>:<part>', got '{item}'")))?;
            let vertex: usize = vtok
                .strip_prefix('v')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(format!("invalid vertex '{vtok}'")))?;
            let part: u32 = ptok
                .parse()
                .map_err(|_| err(format!("invalid part '{ptok}'")))?;
            if map.insert(vertex, part).is_some() {
                return Err(err(format!("vertex v{vertex} assigned twice")));
            }
        }
        Self::from_map(map, parts)
    }

    fn from_map(map: HashMap<usize, u32>, parts: u32) -> Result<Self, SwitchError> {
        let n = map.keys().max().map_or(0, |m| m + 1);
        let mut assignment = Vec::with_capacity(n);
        for v in 0..n {
            match map.get(&v) {
                Some(&p) => assignment.push(p),
                None => return Err(SwitchError::MissingVertex(v)),
            }
        }
        Partition::new(parts, assignment)
    }

    fn check_covers(&self, g: &MixedGraph) -> Result<(), SwitchError> {
        if self.len() != g.n() {
            return Err(SwitchError::PartitionMismatch {
                got: self.len(),
                want: g.n(),
            });
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = SwitchError;

    /// Parses the partition file format: a `k <parts>` line followed by
    /// `p <vertex> <part>` lines. `#` comments and blank lines are ignored.
    fn from_str(text: &str) -> Result<Self, SwitchError> {
        let mut parts: Option<u32> = None;
        let mut map = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            match parts {
                None => {
                    if tokens.len() != 2 || tokens[0] != "k" {
                        return Err(SwitchError::Syntax(
                            line,
                            "expected header 'k <parts>'".into(),
                        ));
                    }
                    parts = Some(tokens[1].parse().map_err(|_| {
                        SwitchError::Syntax(line, format!("invalid part count '{}'", tokens[1]))
                    })?);
                }
                Some(_) => {
                    if tokens.len() != 3 || tokens[0] != "p" {
                        return Err(SwitchError::Syntax(
                            line,
                            "expected 'p <vertex> <part>'".into(),
                        ));
                    }
                    let vertex: usize = tokens[1].parse().map_err(|_| {
                        SwitchError::Syntax(line, format!("invalid vertex '{}'", tokens[1]))
                    })?;
                    let part: u32 = tokens[2].parse().map_err(|_| {
                        SwitchError::Syntax(line, format!("invalid part '{}'", tokens[2]))
                    })?;
                    if map.insert(vertex, part).is_some() {
                        return Err(SwitchError::Syntax(
                            line,
                            format!("vertex {vertex} assigned twice"),
                        ));
                    }
                }
            }
        }
        let parts = parts.ok_or_else(|| SwitchError::Syntax(1, "missing 'k <parts>'".into()))?;
        Self::from_map(map, parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k {}", self.parts)?;
        for (v, p) in self.assignment.iter().enumerate() {
            writeln!(f, "p {v} {p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Undirected,
    Arc,
}

/// An edge or arc whose endpoint parts violate admissibility, with the
/// offending type `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: PairKind,
    pub endpoints: (usize, usize),
    pub parts: (u32, u32),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (u, v) = self.endpoints;
        let (i, j) = self.parts;
        match self.kind {
            PairKind::Undirected => {
                write!(f, "undirected {{{u}, {v}}} has type ({i}, {j}); need j - i = 0 or +-1 mod k")
            }
            PairKind::Arc => {
                write!(f, "arc {u} -> {v} has type ({i}, {j}); need i - j = 0, 1 or 2 mod k")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub violations: Vec<Violation>,
}

/// Checks the two admissibility conditions: every undirected edge joins
/// parts differing by 0 or +-1 mod k, and every arc runs from part i to
/// part j with i - j = 0, 1 or 2 mod k.
pub fn is_admissible(
    g: &MixedGraph,
    p: &Partition,
    k: RootParameter,
) -> Result<AdmissibilityReport, SwitchError> {
    p.check_covers(g)?;
    if p.parts() != k.k() {
        return Err(SwitchError::PartCountMismatch {
            got: p.parts(),
            want: k.k(),
        });
    }
    let mut violations = Vec::new();
    for (u, v) in g.undirected_edges() {
        let (i, j) = (p.part(u), p.part(v));
        let d = k.reduce(j as i64 - i as i64);
        if !(d == 0 || d == 1 || d == k.k() - 1) {
            violations.push(Violation {
                kind: PairKind::Undirected,
                endpoints: (u, v),
                parts: (i, j),
            });
        }
    }
    for (u, v) in g.arcs() {
        let (i, j) = (p.part(u), p.part(v));
        let d = k.reduce(i as i64 - j as i64);
        if d > 2 {
            violations.push(Violation {
                kind: PairKind::Arc,
                endpoints: (u, v),
                parts: (i, j),
            });
        }
    }
    Ok(AdmissibilityReport {
        admissible: violations.is_empty(),
        violations,
    })
}

/// Rewrites the graph according to an admissible partition:
/// an undirected edge whose parts step up by 1 becomes an arc in that
/// direction, an arc whose parts step down by 1 becomes undirected, and an
/// arc whose parts step down by 2 reverses. Everything within a part is
/// unchanged. The output has the same underlying graph and is cospectral
/// with the input.
pub fn three_way_switch(
    g: &MixedGraph,
    p: &Partition,
    k: RootParameter,
) -> Result<MixedGraph, SwitchError> {
    let report = is_admissible(g, p, k)?;
    if !report.admissible {
        return Err(SwitchError::NotAdmissible {
            violations: report.violations,
        });
    }
    let mut out = MixedGraph::new(g.n());
    for (u, v) in g.undirected_edges() {
        let d = k.reduce(p.part(v) as i64 - p.part(u) as i64);
        let result = match d {
            0 => out.add_undirected(u, v),
            1 => out.add_arc(u, v),
            _ => out.add_arc(v, u), // d == k - 1
        };
        result.expect("rewrite preserves the simple underlying graph");
    }
    for (u, v) in g.arcs() {
        let d = k.reduce(p.part(u) as i64 - p.part(v) as i64);
        let result = match d {
            0 => out.add_arc(u, v),
            1 => out.add_undirected(u, v),
            _ => out.add_arc(v, u), // d == 2
        };
        result.expect("rewrite preserves the simple underlying graph");
    }
    Ok(out)
}

/// The two-part rewrite: requires that no arc runs from part 2 to part 1;
/// then every crossing arc (part 1 to part 2) becomes undirected and every
/// crossing undirected edge becomes an arc from part 2 to part 1.
pub fn two_way_switch(g: &MixedGraph, bipartition: &Partition) -> Result<MixedGraph, SwitchError> {
    bipartition.check_covers(g)?;
    if bipartition.parts() != 2 {
        return Err(SwitchError::PartCountMismatch {
            got: bipartition.parts(),
            want: 2,
        });
    }
    for (u, v) in g.arcs() {
        if bipartition.part(u) == 2 && bipartition.part(v) == 1 {
            return Err(SwitchError::ForbiddenArc(u, v));
        }
    }
    let mut out = MixedGraph::new(g.n());
    for (u, v) in g.undirected_edges() {
        let (i, j) = (bipartition.part(u), bipartition.part(v));
        let result = if i != j {
            // Arc from the part-2 endpoint to the part-1 endpoint.
            if i == 2 {
                out.add_arc(u, v)
            } else {
                out.add_arc(v, u)
            }
        } else {
            out.add_undirected(u, v)
        };
        result.expect("rewrite preserves the simple underlying graph");
    }
    for (u, v) in g.arcs() {
        let (i, j) = (bipartition.part(u), bipartition.part(v));
        let result = if i == 1 && j == 2 {
            out.add_undirected(u, v)
        } else {
            out.add_arc(u, v)
        };
        result.expect("rewrite preserves the simple underlying graph");
    }
    Ok(out)
}

/// Outcome of the exact similarity check `H(g') = D^-1 H(g) D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimilarityCheck {
    pub similar: bool,
    /// First mismatching entry `(u, v, expected gain, found gain)`.
    pub mismatch: Option<(usize, usize, Option<u32>, Option<u32>)>,
}

/// Verifies in exact gain arithmetic that `g2` is the diagonal similarity of
/// `g` by the partition: for every pair, `gain'(u, v)` must equal
/// `gain(u, v) + part(v) - part(u) mod k`, with absent entries staying
/// absent.
pub fn verify_similarity(
    g: &MixedGraph,
    g2: &MixedGraph,
    p: &Partition,
    k: RootParameter,
) -> Result<SimilarityCheck, SwitchError> {
    p.check_covers(g)?;
    if g.n() != g2.n() {
        return Err(SwitchError::PartitionMismatch {
            got: g2.n(),
            want: g.n(),
        });
    }
    let ma = GainMatrix::from_graph(g, k);
    let mb = GainMatrix::from_graph(g2, k);
    for u in 0..g.n() {
        for v in 0..g.n() {
            let expected = ma
                .entry(u, v)
                .map(|e| k.reduce(e as i64 + p.part(v) as i64 - p.part(u) as i64));
            let found = mb.entry(u, v);
            if expected != found {
                return Ok(SimilarityCheck {
                    similar: false,
                    mismatch: Some((u, v, expected, found)),
                });
            }
        }
    }
    Ok(SimilarityCheck {
        similar: true,
        mismatch: None,
    })
}

/// One rewriting step in a switching-equivalence witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SwitchMove {
    ThreeWay(Partition),
    Converse,
}

/// Result of the bounded equivalence search. `NotEquivalent` is definitive
/// (the reachable set was exhausted); `Unknown` means the budget ran out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Equivalent { moves: Vec<SwitchMove> },
    NotEquivalent,
    Unknown,
}

/// Breadth-first search from `ga` over three-way switchings (partitions
/// enumerated up to global rotation, since shifting every part by a
/// constant yields the same rewrite) and the converse operation, visiting
/// at most `budget` graphs. Graphs with different underlying graphs are
/// never equivalent.
pub fn switching_equivalent_search(
    ga: &MixedGraph,
    gb: &MixedGraph,
    k: RootParameter,
    budget: usize,
) -> SearchOutcome {
    if ga == gb {
        return SearchOutcome::Equivalent { moves: Vec::new() };
    }
    if !ga.same_underlying(gb) {
        return SearchOutcome::NotEquivalent;
    }

    let n = ga.n();
    let mut parents: HashMap<MixedGraph, (MixedGraph, SwitchMove)> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut visited = 1usize;
    queue.push_back(ga.clone());
    let mut seen: HashMap<MixedGraph, ()> = HashMap::new();
    seen.insert(ga.clone(), ());

    let reconstruct = |parents: &HashMap<MixedGraph, (MixedGraph, SwitchMove)>,
                       end: &MixedGraph| {
        let mut moves = Vec::new();
        let mut at = end.clone();
        while let Some((prev, mv)) = parents.get(&at) {
            moves.push(mv.clone());
            at = prev.clone();
        }
        moves.reverse();
        moves
    };

    while let Some(current) = queue.pop_front() {
        let mut neighbors: Vec<(MixedGraph, SwitchMove)> =
            vec![(current.converse(), SwitchMove::Converse)];
        for assignment in rotation_fixed_assignments(n, k.k()) {
            let p = Partition::new(k.k(), assignment).expect("generated in range");
            let report = is_admissible(&current, &p, k).expect("partition covers the graph");
            if !report.admissible {
                continue;
            }
            let switched = three_way_switch(&current, &p, k).expect("admissible");
            neighbors.push((switched, SwitchMove::ThreeWay(p)));
        }
        for (next, mv) in neighbors {
            if seen.contains_key(&next) {
                continue;
            }
            if visited >= budget {
                return SearchOutcome::Unknown;
            }
            visited += 1;
            seen.insert(next.clone(), ());
            parents.insert(next.clone(), (current.clone(), mv));
            if &next == gb {
                return SearchOutcome::Equivalent {
                    moves: reconstruct(&parents, gb),
                };
            }
            queue.push_back(next);
        }
    }
    SearchOutcome::NotEquivalent
}

/// All part assignments with vertex 0 pinned to part 1, in lexicographic
/// order: `k^(n-1)` of them.
fn rotation_fixed_assignments(n: usize, k: u32) -> impl Iterator<Item = Vec<u32>> {
    let free = n.saturating_sub(1);
    let total = (k as u128).pow(free as u32);
    (0..total).map(move |index| {
        let mut assignment = Vec::with_capacity(n);
        if n > 0 {
            assignment.push(1);
            let mut rest = index;
            for _ in 0..free {
                assignment.push((rest % k as u128) as u32 + 1);
                rest /= k as u128;
            }
        }
        assignment
    })
}

/// Applies a witness sequence; test support for search results.
pub fn apply_moves(
    g: &MixedGraph,
    moves: &[SwitchMove],
    k: RootParameter,
) -> Result<MixedGraph, SwitchError> {
    let mut current = g.clone();
    for mv in moves {
        current = match mv {
            SwitchMove::Converse => current.converse(),
            SwitchMove::ThreeWay(p) => three_way_switch(&current, p, k)?,
        };
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gain::cycle_realparts_match;
    use crate::graph::tests::arbitrary_graph;
    use crate::spectra::cospectral;
    use proptest::prelude::*;

    fn k(v: u32) -> RootParameter {
        RootParameter::new(v).unwrap()
    }

    fn part(parts: u32, assignment: &[u32]) -> Partition {
        Partition::new(parts, assignment.to_vec()).unwrap()
    }

    #[test]
    fn uniform_partition_admits_undirected_graphs() {
        let g: MixedGraph = "n 4\ne 0 1\ne 1 2\ne 2 3".parse().unwrap();
        let p = Partition::uniform(4, 5);
        assert!(is_admissible(&g, &p, k(5)).unwrap().admissible);
    }

    #[test]
    fn arc_type_rules() {
        let g: MixedGraph = "n 2\na 0 1".parse().unwrap();
        // i - j = 1 - 2 = -1 = 4 mod 5: violation.
        let bad = is_admissible(&g, &part(5, &[1, 2]), k(5)).unwrap();
        assert!(!bad.admissible);
        assert_eq!(bad.violations.len(), 1);
        assert_eq!(bad.violations[0].parts, (1, 2));
        // i - j = 3 - 1 = 2: admissible.
        assert!(is_admissible(&g, &part(5, &[3, 1]), k(5)).unwrap().admissible);
    }

    #[test]
    fn three_way_rewrites_k2() {
        let kk = k(3);
        // Undirected with parts stepping up: becomes an arc u -> v.
        let e: MixedGraph = "n 2\ne 0 1".parse().unwrap();
        let out = three_way_switch(&e, &part(3, &[1, 2]), kk).unwrap();
        assert!(out.has_arc(0, 1));

        // Arc with i - j = 1: becomes undirected.
        let a: MixedGraph = "n 2\na 0 1".parse().unwrap();
        let out = three_way_switch(&a, &part(3, &[2, 1]), kk).unwrap();
        assert!(out.has_undirected(0, 1));

        // Arc with i - j = 2: reverses.
        let out = three_way_switch(&a, &part(3, &[3, 1]), kk).unwrap();
        assert!(out.has_arc(1, 0));

        // Within-part pairs are unchanged.
        let out = three_way_switch(&a, &part(3, &[2, 2]), kk).unwrap();
        assert!(out.has_arc(0, 1));
    }

    #[test]
    fn three_way_rejects_inadmissible() {
        let a: MixedGraph = "n 2\na 0 1".parse().unwrap();
        let err = three_way_switch(&a, &part(4, &[1, 2]), k(4)).unwrap_err();
        assert!(matches!(err, SwitchError::NotAdmissible { .. }));
    }

    #[test]
    fn two_way_rewrites() {
        // Crossing arc from part 1 to part 2 becomes undirected.
        let a: MixedGraph = "n 2\na 0 1".parse().unwrap();
        let out = two_way_switch(&a, &part(2, &[1, 2])).unwrap();
        assert!(out.has_undirected(0, 1));

        // Crossing undirected edge becomes the arc from part 2 to part 1.
        let e: MixedGraph = "n 2\ne 0 1".parse().unwrap();
        let out = two_way_switch(&e, &part(2, &[1, 2])).unwrap();
        assert!(out.has_arc(1, 0));

        // Arc from part 2 to part 1 violates the precondition.
        let back: MixedGraph = "n 2\na 1 0".parse().unwrap();
        assert_eq!(
            two_way_switch(&back, &part(2, &[1, 2])).unwrap_err(),
            SwitchError::ForbiddenArc(1, 0)
        );
    }

    #[test]
    fn similarity_identity_and_mismatch() {
        let g: MixedGraph = "n 3\na 0 1\ne 1 2".parse().unwrap();
        let id = Partition::uniform(3, 3);
        assert!(verify_similarity(&g, &g, &id, k(3)).unwrap().similar);

        let mut reversed = MixedGraph::new(3);
        reversed.add_arc(1, 0).unwrap();
        reversed.add_undirected(1, 2).unwrap();
        let check = verify_similarity(&g, &reversed, &id, k(3)).unwrap();
        assert!(!check.similar);
        assert!(check.mismatch.is_some());
    }

    #[test]
    fn search_finds_directed_triangle_balance() {
        let kk = k(3);
        let directed: MixedGraph = "n 3\na 0 1\na 1 2\na 2 0".parse().unwrap();
        let undirected: MixedGraph = "n 3\ne 0 1\ne 1 2\ne 0 2".parse().unwrap();
        match switching_equivalent_search(&directed, &undirected, kk, 10_000) {
            SearchOutcome::Equivalent { moves } => {
                assert!(!moves.is_empty());
                assert_eq!(apply_moves(&directed, &moves, kk).unwrap(), undirected);
            }
            other => panic!("expected equivalence, got {other:?}"),
        }
    }

    #[test]
    fn search_exhausts_directed_c4_at_k3() {
        // Cycle weights differ (1 vs 0 mod 3) and switching preserves them.
        let directed: MixedGraph = "n 4\na 0 1\na 1 2\na 2 3\na 3 0".parse().unwrap();
        let undirected: MixedGraph = "n 4\ne 0 1\ne 1 2\ne 2 3\ne 0 3".parse().unwrap();
        assert_eq!(
            switching_equivalent_search(&directed, &undirected, k(3), 100_000),
            SearchOutcome::NotEquivalent
        );
    }

    #[test]
    fn search_trivial_and_budget() {
        let g: MixedGraph = "n 3\na 0 1\na 1 2\na 2 0".parse().unwrap();
        assert_eq!(
            switching_equivalent_search(&g, &g, k(3), 10),
            SearchOutcome::Equivalent { moves: vec![] }
        );
        let other: MixedGraph = "n 3\ne 0 1\ne 1 2\ne 0 2".parse().unwrap();
        assert_eq!(
            switching_equivalent_search(&g, &other, k(3), 2),
            SearchOutcome::Unknown
        );
        let different: MixedGraph = "n 3\ne 0 1".parse().unwrap();
        assert_eq!(
            switching_equivalent_search(&g, &different, k(3), 100),
            SearchOutcome::NotEquivalent
        );
    }

    #[test]
    fn partition_file_roundtrip() {
        let p: Partition = "k 3\np 0 1\np 1 3\np 2 2\n".parse().unwrap();
        assert_eq!(p.assignment(), &[1, 3, 2]);
        let back: Partition = p.to_string().parse().unwrap();
        assert_eq!(back, p);

        let missing: Result<Partition, _> = "k 3\np 0 1\np 2 2\n".parse();
        assert_eq!(missing.unwrap_err(), SwitchError::MissingVertex(1));
    }

    #[test]
    fn inline_partition_parsing() {
        let p = Partition::parse_inline("v0:1,v1:2,v2:3", 3).unwrap();
        assert_eq!(p.assignment(), &[1, 2, 3]);
        assert!(Partition::parse_inline("v0:1,v0:2", 3).is_err());
        assert!(Partition::parse_inline("0:1", 3).is_err());
        assert!(matches!(
            Partition::parse_inline("v0:1,v1:9", 3).unwrap_err(),
            SwitchError::PartOutOfRange { .. }
        ));
    }

    fn all_assignments(n: usize, k: u32) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (1..=k).map(move |p| {
                        let mut next = prefix.clone();
                        next.push(p);
                        next
                    })
                })
                .collect();
        }
        out
    }

    proptest! {
        // Theorem-level soundness: every admissible three-way switch is an
        // exact diagonal similarity and preserves the spectrum and all cycle
        // weights.
        #[test]
        fn three_way_switch_is_sound(g in arbitrary_graph(5), kk in 3u32..7, seed in any::<u64>()) {
            let kk = k(kk);
            let n = g.n();
            // Pick a pseudo-random assignment; skip if inadmissible.
            let mut state = seed;
            let assignment: Vec<u32> = (0..n).map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) % kk.k() as u64) as u32 + 1
            }).collect();
            let p = Partition::new(kk.k(), assignment).unwrap();
            prop_assume!(is_admissible(&g, &p, kk).unwrap().admissible);

            let switched = three_way_switch(&g, &p, kk).unwrap();
            prop_assert!(switched.same_underlying(&g));
            prop_assert!(verify_similarity(&g, &switched, &p, kk).unwrap().similar);
            let r = cospectral(&g, &switched, kk, 1e-8).unwrap();
            prop_assert!(r.cospectral, "gap {:?}", r.max_gap);
            prop_assert!(cycle_realparts_match(&g, &switched, kk, 10_000).unwrap());

            let ma = GainMatrix::from_graph(&g, kk);
            let mb = GainMatrix::from_graph(&switched, kk);
            for cycle in g.simple_cycles(10_000).unwrap() {
                prop_assert_eq!(ma.cycle_weight(&cycle).unwrap(), mb.cycle_weight(&cycle).unwrap());
            }
        }

        // Two-way switching agrees with the three-way embedding that sends
        // part 1 to part 2 and part 2 to part 1.
        #[test]
        fn two_way_matches_three_way_embedding(g in arbitrary_graph(5), kk in 3u32..7, mask in any::<u32>()) {
            let kk = k(kk);
            let n = g.n();
            let bipartition = Partition::new(
                2,
                (0..n).map(|v| (mask >> (v % 32) & 1) as u32 + 1).collect(),
            ).unwrap();
            let forbidden = g.arcs().any(|(u, v)| {
                bipartition.part(u) == 2 && bipartition.part(v) == 1
            });
            prop_assume!(!forbidden);

            let two = two_way_switch(&g, &bipartition).unwrap();
            let embedded = Partition::new(
                kk.k(),
                (0..n).map(|v| if bipartition.part(v) == 1 { 2 } else { 1 }).collect(),
            ).unwrap();
            prop_assert!(is_admissible(&g, &embedded, kk).unwrap().admissible);
            let three = three_way_switch(&g, &embedded, kk).unwrap();
            prop_assert_eq!(two, three);
        }
    }

    #[test]
    fn search_is_symmetric_on_triangle_orientations() {
        // Whenever the search proves ga ~ gb, the reverse search proves
        // gb ~ ga.
        let kk = k(3);
        let mut orientations = Vec::new();
        for states in all_assignments(3, 3) {
            let mut g = MixedGraph::new(3);
            for (idx, &(u, v)) in [(0usize, 1usize), (0, 2), (1, 2)].iter().enumerate() {
                match states[idx] {
                    1 => g.add_undirected(u, v).unwrap(),
                    2 => g.add_arc(u, v).unwrap(),
                    _ => g.add_arc(v, u).unwrap(),
                }
            }
            orientations.push(g);
        }
        for a in &orientations[..9] {
            for b in &orientations[..9] {
                let forward = switching_equivalent_search(a, b, kk, 10_000);
                let backward = switching_equivalent_search(b, a, kk, 10_000);
                let f = matches!(forward, SearchOutcome::Equivalent { .. });
                let r = matches!(backward, SearchOutcome::Equivalent { .. });
                assert_eq!(f, r, "asymmetric verdict");
                if let SearchOutcome::Equivalent { moves } = forward {
                    assert_eq!(&apply_moves(a, &moves, kk).unwrap(), b);
                }
            }
        }
    }
}
