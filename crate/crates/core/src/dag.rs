//! Directed acyclic graphs over labelled nodes.
//!
//! A [`Dag`] keeps a dense adjacency matrix (row = source, column = target)
//! next to a [`ReachabilityIndex`] of per-node successor and predecessor
//! lists. Every mutation goes through the index so that the acyclicity check
//! for a candidate edge only walks the ancestors of its source.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Index of a node, in `0..n`.
pub type NodeId = usize;

/// Forward (successor) and backward (predecessor) lists of a graph.
///
/// Lists are kept sorted so iteration order is deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReachabilityIndex {
    forward: Vec<Vec<NodeId>>,
    backward: Vec<Vec<NodeId>>,
}

impl ReachabilityIndex {
    pub fn new(n: usize) -> Self {
        ReachabilityIndex {
            forward: vec![Vec::new(); n],
            backward: vec![Vec::new(); n],
        }
    }

    /// Builds the lists from a row-major `n × n` adjacency matrix.
    pub fn from_adjacency(n: usize, adjacency: &[bool]) -> Self {
        let mut index = ReachabilityIndex::new(n);
        for from in 0..n {
            for to in 0..n {
                if adjacency[from * n + to] {
                    index.forward[from].push(to);
                    index.backward[to].push(from);
                }
            }
        }
        index
    }

    pub fn n(&self) -> usize {
        self.forward.len()
    }

    pub fn successors(&self, node: NodeId) -> &[NodeId] {
        &self.forward[node]
    }

    pub fn predecessors(&self, node: NodeId) -> &[NodeId] {
        &self.backward[node]
    }

    pub fn contains(&self, from: NodeId, to: NodeId) -> bool {
        self.forward[from].binary_search(&to).is_ok()
    }

    /// Records `from -> to`. Returns false if it was already present.
    pub fn insert(&mut self, from: NodeId, to: NodeId) -> bool {
        match self.forward[from].binary_search(&to) {
            Ok(_) => false,
            Err(pos) => {
                self.forward[from].insert(pos, to);
                let pos = self.backward[to].binary_search(&from).unwrap_err();
                self.backward[to].insert(pos, from);
                true
            }
        }
    }

    /// Drops `from -> to`. Returns false if it was absent.
    pub fn remove(&mut self, from: NodeId, to: NodeId) -> bool {
        match self.forward[from].binary_search(&to) {
            Err(_) => false,
            Ok(pos) => {
                self.forward[from].remove(pos);
                let pos = self.backward[to]
                    .binary_search(&from)
                    .expect("backward list out of sync with forward list");
                self.backward[to].remove(pos);
                true
            }
        }
    }

    /// Whether adding `from -> to` would close a directed cycle, i.e. whether
    /// `to` is already an ancestor of `from`.
    ///
    /// The search is transitive over the backward lists starting at `from`.
    /// Debug builds also run the mirror search over the forward lists of `to`.
    pub fn would_create_cycle(&self, from: NodeId, to: NodeId) -> Result<bool> {
        let n = self.n();
        if from >= n || to >= n {
            return Err(Error::InvalidArgument(format!(
                "edge {from} -> {to} out of range for {n} nodes"
            )));
        }
        if from == to {
            return Err(Error::InvalidArgument(format!("self-loop on node {from}")));
        }
        let found = search(&self.backward, from, to, None);
        debug_assert_eq!(found, search(&self.forward, to, from, None));
        Ok(found)
    }

    /// Whether a directed path `from ⇝ to` exists, optionally ignoring one
    /// edge.
    pub fn has_path(&self, from: NodeId, to: NodeId, skip: Option<(NodeId, NodeId)>) -> bool {
        search(&self.forward, from, to, skip)
    }
}

/// Depth-first search over `lists` from `start`; true once `target` is met
/// through at least one edge.
fn search(
    lists: &[Vec<NodeId>],
    start: NodeId,
    target: NodeId,
    skip: Option<(NodeId, NodeId)>,
) -> bool {
    let mut seen = vec![false; lists.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(node) = stack.pop() {
        for &next in &lists[node] {
            if skip == Some((node, next)) {
                continue;
            }
            if next == target {
                return true;
            }
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    false
}

/// A directed acyclic graph over `n` labelled nodes.
#[derive(Clone)]
pub struct Dag {
    n: usize,
    adjacency: Vec<bool>,
    labels: Arc<[String]>,
    index: ReachabilityIndex,
}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("V{i}")).collect()
}

impl Dag {
    /// Empty graph with labels `V0..V(n-1)`.
    pub fn empty(n: usize) -> Self {
        Dag {
            n,
            adjacency: vec![false; n * n],
            labels: default_labels(n).into(),
            index: ReachabilityIndex::new(n),
        }
    }

    /// Empty graph with the given labels, which must be unique and non-empty.
    pub fn with_labels(labels: impl Into<Arc<[String]>>) -> Result<Self> {
        let labels = labels.into();
        validate_labels(&labels)?;
        let n = labels.len();
        Ok(Dag {
            n,
            adjacency: vec![false; n * n],
            labels,
            index: ReachabilityIndex::new(n),
        })
    }

    /// Graph with default labels and the given edges, added in order.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut dag = Dag::empty(n);
        for &(from, to) in edges {
            dag.add_edge(from, to)?;
        }
        Ok(dag)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node]
    }

    pub fn node_of(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Replaces the labels, keeping the structure.
    pub fn relabel(mut self, labels: impl Into<Arc<[String]>>) -> Result<Self> {
        let labels = labels.into();
        validate_labels(&labels)?;
        if labels.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "{} labels for a {}-node graph",
                labels.len(),
                self.n
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn adjacency(&self) -> &[bool] {
        &self.adjacency
    }

    pub fn index(&self) -> &ReachabilityIndex {
        &self.index
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.adjacency[from * self.n + to]
    }

    /// Sorted parents of `node`.
    pub fn parents(&self, node: NodeId) -> &[NodeId] {
        self.index.predecessors(node)
    }

    /// Sorted children of `node`.
    pub fn children(&self, node: NodeId) -> &[NodeId] {
        self.index.successors(node)
    }

    /// Edges in lexicographic `(from, to)` order.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        (0..self.n)
            .flat_map(|from| self.children(from).iter().map(move |&to| (from, to)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&b| b).count()
    }

    fn check_node(&self, node: NodeId) -> Result<()> {
        if node >= self.n {
            return Err(Error::InvalidArgument(format!(
                "node {node} out of range for {} nodes",
                self.n
            )));
        }
        Ok(())
    }

    pub fn would_create_cycle(&self, from: NodeId, to: NodeId) -> Result<bool> {
        self.index.would_create_cycle(from, to)
    }

    /// Whether an edge `from -> to` may be inserted: no self-loop, not
    /// already present and no cycle.
    pub fn can_add_edge(&self, from: NodeId, to: NodeId) -> bool {
        from != to
            && from < self.n
            && to < self.n
            && !self.has_edge(from, to)
            && !self.index.would_create_cycle(from, to).unwrap_or(true)
    }

    /// Whether the existing edge `from -> to` can be turned around without
    /// closing a cycle, i.e. whether no other path `from ⇝ to` exists.
    pub fn can_reverse_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.has_edge(from, to) && !self.index.has_path(from, to, Some((from, to)))
    }

    pub fn add_edge(&mut self, from: NodeId, to: NodeId) -> Result<()> {
        self.check_node(from)?;
        self.check_node(to)?;
        if self.has_edge(from, to) {
            return Err(Error::DuplicateEdge { from, to });
        }
        if self.index.would_create_cycle(from, to)? {
            return Err(Error::CycleViolation { from, to });
        }
        self.adjacency[from * self.n + to] = true;
        self.index.insert(from, to);
        Ok(())
    }

    pub fn remove_edge(&mut self, from: NodeId, to: NodeId) -> Result<()> {
        self.check_node(from)?;
        self.check_node(to)?;
        if !self.has_edge(from, to) {
            return Err(Error::MissingEdge { from, to });
        }
        self.adjacency[from * self.n + to] = false;
        self.index.remove(from, to);
        Ok(())
    }

    /// Replaces `from -> to` with `to -> from`.
    pub fn reverse_edge(&mut self, from: NodeId, to: NodeId) -> Result<()> {
        self.check_node(from)?;
        self.check_node(to)?;
        if !self.has_edge(from, to) {
            return Err(Error::MissingEdge { from, to });
        }
        if !self.can_reverse_edge(from, to) {
            return Err(Error::CycleViolation { from: to, to: from });
        }
        self.remove_edge(from, to)?;
        self.add_edge(to, from)
    }

    /// Every node reachable from `node` through at least one edge.
    pub fn descendants(&self, node: NodeId) -> BTreeSet<NodeId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![node];
        while let Some(v) = stack.pop() {
            for &c in self.children(v) {
                if out.insert(c) {
                    stack.push(c);
                }
            }
        }
        out
    }

    /// Kahn's algorithm, always taking the smallest available node index.
    pub fn topological_order(&self) -> Result<Vec<NodeId>> {
        let mut indegree: Vec<usize> = (0..self.n).map(|v| self.parents(v).len()).collect();
        let mut ready: BinaryHeap<Reverse<NodeId>> = indegree
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(v, _)| Reverse(v))
            .collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &c in self.children(v) {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.push(Reverse(c));
                }
            }
        }
        if order.len() != self.n {
            return Err(Error::InternalInvariant(
                "graph contains a directed cycle".to_string(),
            ));
        }
        Ok(order)
    }

    /// Same structure, labels ignored.
    pub fn same_structure(&self, other: &Dag) -> bool {
        self.n == other.n && self.adjacency == other.adjacency
    }
}

impl PartialEq for Dag {
    fn eq(&self, other: &Self) -> bool {
        self.same_structure(other) && self.labels == other.labels
    }
}

impl Eq for Dag {}

impl fmt::Debug for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .into_iter()
            .map(|(a, b)| format!("{}->{}", self.labels[a], self.labels[b]))
            .collect();
        f.debug_struct("Dag")
            .field("n", &self.n)
            .field("edges", &edges)
            .finish()
    }
}

fn validate_labels(labels: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for label in labels {
        if label.is_empty() {
            return Err(Error::InvalidArgument("empty node label".to_string()));
        }
        if !seen.insert(label.as_str()) {
            return Err(Error::InvalidArgument(format!("duplicate node label `{label}`")));
        }
    }
    Ok(())
}

/// Random DAG: a uniformly random node order, then every forward pair is
/// joined independently with probability `edge_prob`.
pub fn random_dag(n: usize, edge_prob: f64, seed: u64) -> Dag {
    let mut rng = rng_from_seed(seed);
    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut dag = Dag::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < edge_prob {
                dag.add_edge(order[i], order[j])
                    .expect("edges along a fixed order never close a cycle");
            }
        }
    }
    dag
}

/// Flat `n²`-bit encoding of a graph: bit `i` stands for the edge
/// `i / n -> i % n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Genome {
    n: usize,
    bits: Vec<bool>,
}

impl Genome {
    pub fn zeros(n: usize) -> Self {
        Genome {
            n,
            bits: vec![false; n * n],
        }
    }

    /// Genome from raw bits. Rejects wrong lengths and self-loop bits;
    /// acyclicity is checked by [`decode`].
    pub fn from_bits(n: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != n * n {
            return Err(Error::InvalidGenome(format!(
                "expected {} bits for {n} nodes, got {}",
                n * n,
                bits.len()
            )));
        }
        if let Some(v) = (0..n).find(|&v| bits[v * n + v]) {
            return Err(Error::InvalidGenome(format!("self-loop bit set on node {v}")));
        }
        Ok(Genome { n, bits })
    }

    pub fn from_set_bits(n: usize, set: &[usize]) -> Result<Self> {
        let mut bits = vec![false; n * n];
        for &i in set {
            if i >= n * n {
                return Err(Error::InvalidGenome(format!("bit {i} out of range")));
            }
            bits[i] = true;
        }
        Genome::from_bits(n, bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, locus: usize) -> bool {
        self.bits[locus]
    }

    pub(crate) fn set(&mut self, locus: usize, value: bool) {
        self.bits[locus] = value;
    }

    /// Positions of the set bits, ascending.
    pub fn set_bits(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    }

    /// `(origin, destination)` of a locus.
    pub fn edge_of(&self, locus: usize) -> (NodeId, NodeId) {
        (locus / self.n, locus % self.n)
    }
}

pub fn decode(genome: &Genome) -> Result<Dag> {
    let n = genome.n;
    if genome.bits.len() != n * n {
        return Err(Error::InvalidGenome("length is not n²".to_string()));
    }
    let mut dag = Dag::empty(n);
    for locus in genome.set_bits() {
        let (from, to) = genome.edge_of(locus);
        if from == to {
            return Err(Error::InvalidGenome(format!("self-loop bit set on node {from}")));
        }
        dag.add_edge(from, to).map_err(|e| match e {
            Error::CycleViolation { from, to } => Error::InvalidGenome(format!(
                "edge {from} -> {to} closes a directed cycle"
            )),
            other => other,
        })?;
    }
    Ok(dag)
}

pub fn encode(dag: &Dag) -> Genome {
    Genome {
        n: dag.n,
        bits: dag.adjacency.clone(),
    }
}
