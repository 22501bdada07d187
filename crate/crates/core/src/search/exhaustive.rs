use crate::dag::{Dag, NodeId};
use crate::error::{Error, Result};
use crate::scoring::Scorer;

pub const DEFAULT_MAX_EXHAUSTIVE_NODES: usize = 5;

#[derive(Clone, Debug)]
pub struct Exhaustive {
    pub dag: Dag,
    pub score: f64,
    /// Number of DAGs enumerated.
    pub visited: u64,
}

/// All ordered pairs `(from, to)` with `from != to`, in lexicographic order.
fn pairs(n: usize) -> Vec<(NodeId, NodeId)> {
    (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect()
}

/// Acyclicity of a graph given as per-node parent bitmasks.
fn acyclic(parent_masks: &[u32]) -> bool {
    let n = parent_masks.len();
    let mut placed = 0u32;
    loop {
        let mut progressed = false;
        for v in 0..n {
            if placed & (1 << v) == 0 && parent_masks[v] & !placed == 0 {
                placed |= 1 << v;
                progressed = true;
            }
        }
        if placed.count_ones() as usize == n {
            return true;
        }
        if !progressed {
            return false;
        }
    }
}

/// Calls `visit` with the parent bitmasks of every DAG over `n` nodes.
fn for_each_dag(n: usize, mut visit: impl FnMut(&[u32], u64)) {
    let pairs = pairs(n);
    let m = pairs.len();
    let mut masks = vec![0u32; n];
    for code in 0..(1u64 << m) {
        masks.iter_mut().for_each(|p| *p = 0);
        for (bit, &(from, to)) in pairs.iter().enumerate() {
            if code & (1 << bit) != 0 {
                masks[to] |= 1 << from;
            }
        }
        if acyclic(&masks) {
            visit(&masks, code);
        }
    }
}

/// Number of labelled DAGs on `n` nodes, by enumeration.
pub fn count_dags(n: usize) -> u64 {
    let mut count = 0;
    for_each_dag(n, |_, _| count += 1);
    count
}

fn parents_of(mask: u32, n: usize) -> Vec<NodeId> {
    (0..n).filter(|&p| mask & (1 << p) != 0).collect()
}

/// Enumerates every DAG over the dataset's variables and returns one with
/// the highest score. Exact ties go to the lexicographically smallest edge
/// list. Graphs whose parent sets exceed the scorer's parent limit are
/// enumerated but not scored.
pub fn exhaustive_best(scorer: &mut Scorer<'_>, max_n: usize) -> Result<Exhaustive> {
    let template = scorer.data().empty_dag();
    let n = template.n();
    // 2^(n(n-1)) candidate graphs; beyond 6 nodes that is out of reach anyway.
    let max = max_n.min(6);
    if n > max {
        return Err(Error::TooManyNodes { n, max });
    }
    let limit = scorer.parent_limit();

    // Node score for every (node, parent mask) within the limit.
    let mut table = vec![vec![None; 1 << n]; n];
    for (node, row) in table.iter_mut().enumerate() {
        for (mask, cell) in row.iter_mut().enumerate() {
            let mask = mask as u32;
            if mask & (1 << node) == 0 && (mask.count_ones() as usize) <= limit {
                *cell = Some(scorer.node_score(node, &parents_of(mask, n))?);
            }
        }
    }

    let pairs = pairs(n);
    let mut visited = 0u64;
    let mut best: Option<(f64, Vec<(NodeId, NodeId)>)> = None;
    for_each_dag(n, |masks, code| {
        visited += 1;
        let mut total = 0.0;
        for (node, &mask) in masks.iter().enumerate() {
            match table[node][mask as usize] {
                Some(s) => total += s,
                None => return,
            }
        }
        let better = match &best {
            None => true,
            Some((s, _)) if total > *s => true,
            Some((s, edges)) if total == *s => {
                let candidate = edges_of(code, &pairs);
                candidate < *edges
            }
            _ => false,
        };
        if better {
            best = Some((total, edges_of(code, &pairs)));
        }
    });

    let (score, edges) = best.ok_or_else(|| {
        Error::InternalInvariant("no DAG satisfies the parent limit".to_string())
    })?;
    let mut dag = template;
    for (from, to) in edges {
        dag.add_edge(from, to)?;
    }
    Ok(Exhaustive {
        dag,
        score,
        visited,
    })
}

fn edges_of(code: u64, pairs: &[(NodeId, NodeId)]) -> Vec<(NodeId, NodeId)> {
    let mut edges: Vec<(NodeId, NodeId)> = pairs
        .iter()
        .enumerate()
        .filter(|(bit, _)| code & (1 << bit) != 0)
        .map(|(_, &p)| p)
        .collect();
    edges.sort_unstable();
    edges
}
