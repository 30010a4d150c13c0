//! Mixed-graph data model, the `.mg` text format, structural queries, the
//! converse operation and simple-cycle enumeration.
//!
//! A [`MixedGraph`] keeps undirected edges and arcs in separate ordered sets
//! over vertices `0..n`. The underlying graph is always simple: each vertex
//! pair carries at most one of {undirected edge, arc u->v, arc v->u}.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Default ceiling on the number of simple cycles reported by
/// [`MixedGraph::simple_cycles`].
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("pair ({0}, {1}) declared more than once")]
    DuplicatePair(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {0} out of range for {1} vertices")]
    IndexOutOfRange(usize, usize),
    #[error("cycle budget of {0} exceeded")]
    CycleBudgetExceeded(usize),
}

/// A mixed graph: undirected edges plus arcs over a simple underlying graph.
///
/// Values are immutable in spirit: mutation happens only through the checked
/// `add_*` constructors, and every operation below is a pure function of the
/// edge sets. Equality, ordering and hashing are structural, so graphs can be
/// used directly as keys in visited sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedGraph {
    n: usize,
    undirected: BTreeSet<(usize, usize)>,
    arcs: BTreeSet<(usize, usize)>,
}

/// The three-way split of a vertex neighborhood: undirected neighbors,
/// out-neighbors (heads of arcs leaving the vertex) and in-neighbors
/// (tails of arcs entering it). The three sets are pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborClasses {
    pub undirected: BTreeSet<usize>,
    pub outgoing: BTreeSet<usize>,
    pub incoming: BTreeSet<usize>,
}

impl MixedGraph {
    /// An edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        MixedGraph {
            n,
            undirected: BTreeSet::new(),
            arcs: BTreeSet::new(),
        }
    }

    /// Builds a graph from edge lists, rejecting invalid input.
    pub fn from_edges(
        n: usize,
        undirected: &[(usize, usize)],
        arcs: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let mut g = MixedGraph::new(n);
        for &(u, v) in undirected {
            g.add_undirected(u, v)?;
        }
        for &(u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::IndexOutOfRange(u, self.n));
        }
        if v >= self.n {
            return Err(GraphError::IndexOutOfRange(v, self.n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_pair(u, v) {
            return Err(GraphError::DuplicatePair(u.min(v), u.max(v)));
        }
        Ok(())
    }

    /// Adds the undirected edge `{u, v}`.
    pub fn add_undirected(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        self.undirected.insert((u.min(v), u.max(v)));
        Ok(())
    }

    /// Adds the arc `u -> v`.
    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        self.arcs.insert((u, v));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of underlying edges (undirected edges plus arcs).
    pub fn edge_count(&self) -> usize {
        self.undirected.len() + self.arcs.len()
    }

    /// Undirected edges as normalized pairs `(u, v)` with `u < v`.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.undirected.iter().copied()
    }

    /// Arcs as `(tail, head)` pairs.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn has_undirected(&self, u: usize, v: usize) -> bool {
        self.undirected.contains(&(u.min(v), u.max(v)))
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }

    /// True when the pair `{u, v}` carries any edge or arc.
    pub fn has_pair(&self, u: usize, v: usize) -> bool {
        self.has_undirected(u, v) || self.has_arc(u, v) || self.has_arc(v, u)
    }

    /// The neighborhood of `v` split into undirected/outgoing/incoming parts.
    pub fn neighbor_classes(&self, v: usize) -> Result<NeighborClasses, GraphError> {
        if v >= self.n {
            return Err(GraphError::IndexOutOfRange(v, self.n));
        }
        let mut classes = NeighborClasses {
            undirected: BTreeSet::new(),
            outgoing: BTreeSet::new(),
            incoming: BTreeSet::new(),
        };
        for &(a, b) in &self.undirected {
            if a == v {
                classes.undirected.insert(b);
            } else if b == v {
                classes.undirected.insert(a);
            }
        }
        for &(tail, head) in &self.arcs {
            if tail == v {
                classes.outgoing.insert(head);
            } else if head == v {
                classes.incoming.insert(tail);
            }
        }
        Ok(classes)
    }

    /// Degree in the underlying graph.
    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        let c = self.neighbor_classes(v)?;
        Ok(c.undirected.len() + c.outgoing.len() + c.incoming.len())
    }

    /// Maximum degree of the underlying graph; 0 for an edgeless graph.
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in self.undirected.iter().chain(self.arcs.iter()) {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// True when every vertex has the same degree. Vacuously true for `n = 0`.
    pub fn is_regular(&self) -> bool {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in self.undirected.iter().chain(self.arcs.iter()) {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.windows(2).all(|w| w[0] == w[1])
    }

    /// Sorted adjacency lists of the underlying graph.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![BTreeSet::new(); self.n];
        for &(u, v) in self.undirected.iter().chain(self.arcs.iter()) {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Connectivity of the underlying graph, ignoring edge directions.
    /// The empty graph and single vertices count as connected.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// The converse graph: every arc reversed, undirected edges unchanged.
    pub fn converse(&self) -> MixedGraph {
        MixedGraph {
            n: self.n,
            undirected: self.undirected.clone(),
            arcs: self.arcs.iter().map(|&(u, v)| (v, u)).collect(),
        }
    }

    /// The underlying simple graph with every arc forgotten into an edge.
    pub fn underlying(&self) -> MixedGraph {
        MixedGraph {
            n: self.n,
            undirected: self
                .undirected
                .iter()
                .copied()
                .chain(self.arcs.iter().map(|&(u, v)| (u.min(v), u.max(v))))
                .collect(),
            arcs: BTreeSet::new(),
        }
    }

    pub fn same_underlying(&self, other: &MixedGraph) -> bool {
        self.underlying() == other.underlying()
    }

    /// Every simple cycle of the underlying graph, reported once up to
    /// rotation and reflection.
    ///
    /// Each cycle is canonical: its smallest vertex comes first, followed by
    /// the smaller of that vertex's two cycle neighbors. Backtracks from each
    /// root and only extends through larger vertex indices, so a cycle is
    /// found exactly at its minimum vertex. Graphs with more than `cap`
    /// cycles yield [`GraphError::CycleBudgetExceeded`].
    pub fn simple_cycles(&self, cap: usize) -> Result<Vec<Vec<usize>>, GraphError> {
        let adj = self.adjacency();
        let mut out = Vec::new();
        let mut in_path = vec![false; self.n];
        let mut path = Vec::new();
        for root in 0..self.n {
            in_path[root] = true;
            path.push(root);
            cycle_search(&adj, root, &mut path, &mut in_path, &mut out, cap)?;
            path.pop();
            in_path[root] = false;
        }
        Ok(out)
    }

    fn parse_vertex(&self, token: &str, line: usize) -> Result<usize, GraphError> {
        let v: usize = token
            .parse()
            .map_err(|_| GraphError::Syntax(line, format!("invalid vertex index '{token}'")))?;
        if v >= self.n {
            return Err(GraphError::IndexOutOfRange(v, self.n));
        }
        Ok(v)
    }
}

fn cycle_search(
    adj: &[Vec<usize>],
    root: usize,
    path: &mut Vec<usize>,
    in_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<(), GraphError> {
    let current = *path.last().unwrap();
    for &w in &adj[current] {
        if w == root {
            // Close only in the orientation with the smaller second vertex,
            // so each cycle appears once instead of twice (reflection).
            if path.len() >= 3 && path[1] < current {
                if out.len() == cap {
                    return Err(GraphError::CycleBudgetExceeded(cap));
                }
                out.push(path.clone());
            }
        } else if w > root && !in_path[w] {
            in_path[w] = true;
            path.push(w);
            cycle_search(adj, root, path, in_path, out, cap)?;
            path.pop();
            in_path[w] = false;
        }
    }
    Ok(())
}

impl FromStr for MixedGraph {
    type Err = GraphError;

    /// Parses the `.mg` format: `#` comment lines and blank lines are
    /// ignored, the first data line is `n <count>`, and every further line is
    /// `e <u> <v>` (undirected edge) or `a <u> <v>` (arc u -> v).
    fn from_str(text: &str) -> Result<Self, GraphError> {
        let mut graph: Option<MixedGraph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            match graph {
                None => {
                    if tokens.len() != 2 || tokens[0] != "n" {
                        return Err(GraphError::Syntax(
                            line,
                            "expected header 'n <count>'".into(),
                        ));
                    }
                    let n: usize = tokens[1].parse().map_err(|_| {
                        GraphError::Syntax(line, format!("invalid vertex count '{}'", tokens[1]))
                    })?;
                    graph = Some(MixedGraph::new(n));
                }
                Some(ref mut g) => {
                    if tokens.len() != 3 {
                        return Err(GraphError::Syntax(
                            line,
                            "expected 'e <u> <v>' or 'a <u> <v>'".into(),
                        ));
                    }
                    let u = g.parse_vertex(tokens[1], line)?;
                    let v = g.parse_vertex(tokens[2], line)?;
                    match tokens[0] {
                        "e" => g.add_undirected(u, v)?,
                        "a" => g.add_arc(u, v)?,
                        other => {
                            return Err(GraphError::Syntax(
                                line,
                                format!("unknown declaration '{other}'"),
                            ))
                        }
                    }
                }
            }
        }
        graph.ok_or_else(|| GraphError::Syntax(1, "missing header 'n <count>'".into()))
    }
}

impl fmt::Display for MixedGraph {
    /// Serializes to the `.mg` format: the header, then all `e` lines sorted,
    /// then all `a` lines sorted. `parse . display` is the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for &(u, v) in &self.undirected {
            writeln!(f, "e {u} {v}")?;
        }
        for &(u, v) in &self.arcs {
            writeln!(f, "a {u} {v}")?;
        }
        Ok(())
    }
}
