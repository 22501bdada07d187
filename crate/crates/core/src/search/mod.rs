//! Local search over DAG space and an exhaustive oracle for small graphs.

mod exhaustive;
mod local;

use std::fmt;

use crate::dag::{random_dag, Dag, NodeId};
use crate::error::Result;
use crate::rng::derive_seed;

pub use exhaustive::{count_dags, exhaustive_best, Exhaustive, DEFAULT_MAX_EXHAUSTIVE_NODES};
pub use local::{hill_climb, tabu_search, HcConfig, TabuConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    Add,
    Delete,
    Reverse,
}

/// A single-edge change to a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub kind: MoveKind,
    pub from: NodeId,
    pub to: NodeId,
}

impl Move {
    pub fn add(from: NodeId, to: NodeId) -> Self {
        Move { kind: MoveKind::Add, from, to }
    }

    pub fn delete(from: NodeId, to: NodeId) -> Self {
        Move { kind: MoveKind::Delete, from, to }
    }

    pub fn reverse(from: NodeId, to: NodeId) -> Self {
        Move { kind: MoveKind::Reverse, from, to }
    }

    /// The move that undoes this one once it has been applied.
    pub fn inverse(self) -> Self {
        match self.kind {
            MoveKind::Add => Move::delete(self.from, self.to),
            MoveKind::Delete => Move::add(self.from, self.to),
            MoveKind::Reverse => Move::reverse(self.to, self.from),
        }
    }

    pub fn apply(self, dag: &mut Dag) -> Result<()> {
        match self.kind {
            MoveKind::Add => dag.add_edge(self.from, self.to),
            MoveKind::Delete => dag.remove_edge(self.from, self.to),
            MoveKind::Reverse => dag.reverse_edge(self.from, self.to),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            MoveKind::Add => "add",
            MoveKind::Delete => "delete",
            MoveKind::Reverse => "reverse",
        };
        write!(f, "{kind}({},{})", self.from, self.to)
    }
}

/// Every applicable add, delete and reverse move, in that order and
/// lexicographic by `(from, to)` within each kind.
pub fn neighborhood(dag: &Dag) -> Vec<Move> {
    neighborhood_limited(dag, usize::MAX)
}

/// Like [`neighborhood`], but leaves out moves that would give a node more
/// than `parent_limit` parents.
pub fn neighborhood_limited(dag: &Dag, parent_limit: usize) -> Vec<Move> {
    let n = dag.n();
    let mut adds = Vec::new();
    let mut deletes = Vec::new();
    let mut reverses = Vec::new();
    for from in 0..n {
        for to in 0..n {
            if from == to {
                continue;
            }
            if dag.has_edge(from, to) {
                deletes.push(Move::delete(from, to));
                if dag.parents(from).len() < parent_limit && dag.can_reverse_edge(from, to) {
                    reverses.push(Move::reverse(from, to));
                }
            } else if dag.parents(to).len() < parent_limit && dag.can_add_edge(from, to) {
                adds.push(Move::add(from, to));
            }
        }
    }
    adds.extend(deletes);
    adds.extend(reverses);
    adds
}

/// How the first graph of a search is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Init {
    #[default]
    Empty,
    Random { edge_prob: f64 },
}

/// Starting graph for restart `restart`: restart 0 follows `init`, later
/// restarts are random with `restart_edge_prob` (default `2/n`).
pub(crate) fn starting_graph(
    template: &Dag,
    init: Init,
    restart_edge_prob: Option<f64>,
    seed: u64,
    restart: usize,
    parent_limit: usize,
) -> Dag {
    let n = template.n();
    let edge_prob = match (restart, init) {
        (0, Init::Empty) => return template.clone(),
        (0, Init::Random { edge_prob }) => edge_prob,
        _ => restart_edge_prob.unwrap_or_else(|| default_edge_prob(n)),
    };
    let random = random_dag(n, edge_prob, derive_seed(seed, restart as u64));
    let mut dag = template.clone();
    for (from, to) in random.edges() {
        if dag.parents(to).len() < parent_limit {
            dag.add_edge(from, to).expect("subgraph of a DAG is acyclic");
        }
    }
    dag
}

/// Edge probability `2/n`, clamped to `[0, 1]`.
pub fn default_edge_prob(n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        (2.0 / n as f64).min(1.0)
    }
}

/// One accepted step of a search.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    /// Restart (local search) or 0 (genetic algorithm).
    pub restart: usize,
    /// Iteration or generation; 0 is the starting point.
    pub iteration: usize,
    pub mv: Option<Move>,
    /// Score of the current graph after the step (for the genetic algorithm,
    /// the best fitness in the generation).
    pub score: f64,
    /// Best score seen so far in this restart.
    pub best_score: f64,
    /// The move was tabu and admitted by aspiration.
    pub aspiration: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchTrace {
    pub steps: Vec<TraceStep>,
    pub best_score: f64,
    /// Candidate evaluations: neighbourhood sizes for local search, fitness
    /// evaluations for the genetic algorithm.
    pub evaluations: u64,
}

impl SearchTrace {
    pub fn restart(&self, restart: usize) -> impl Iterator<Item = &TraceStep> {
        self.steps.iter().filter(move |s| s.restart == restart)
    }

    /// CSV with header `restart,iteration,move,score,best_score,aspiration`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("restart,iteration,move,score,best_score,aspiration\n");
        for s in &self.steps {
            let mv = s.mv.map(|m| m.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},\"{}\",{},{},{}\n",
                s.restart, s.iteration, mv, s.score, s.best_score, s.aspiration
            ));
        }
        out
    }
}

/// Result of a search run.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best: Dag,
    pub best_score: f64,
    pub trace: SearchTrace,
    /// Final graph of every restart (local search) or the top of the final
    /// population (genetic algorithm), best first for the latter.
    pub ensemble: Vec<Dag>,
}
