use std::collections::HashMap;

use super::{
    neighborhood_limited, starting_graph, Init, Move, SearchOutcome, SearchTrace, TraceStep,
};
use crate::dag::Dag;
use crate::error::{Error, Result};
use crate::scoring::Scorer;

/// Smallest score gain hill climbing accepts as an improvement. Reversing a
/// covered edge changes the score only by rounding noise.
const MIN_IMPROVEMENT: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct HcConfig {
    /// Steps per restart; `None` means `10·n²`.
    pub max_iterations: Option<usize>,
    pub restarts: usize,
    /// Starting graph of restart 0.
    pub init: Init,
    /// Edge probability of the random starts of later restarts; `None`
    /// means `2/n`.
    pub restart_edge_prob: Option<f64>,
    pub seed: u64,
}

impl Default for HcConfig {
    fn default() -> Self {
        HcConfig {
            max_iterations: None,
            restarts: 10,
            init: Init::Empty,
            restart_edge_prob: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TabuConfig {
    /// Iterations during which the reversal of a taken move stays tabu.
    pub tenure: usize,
    /// Stop after this many iterations without a new best; `None` means `3·n`.
    pub no_improve_window: Option<usize>,
    /// Iteration budget; `None` means `10·n²`.
    pub max_iterations: Option<usize>,
    pub init: Init,
    /// Independent runs; runs after the first start from random graphs.
    pub restarts: usize,
    pub restart_edge_prob: Option<f64>,
    pub seed: u64,
}

impl Default for TabuConfig {
    fn default() -> Self {
        TabuConfig {
            tenure: 10,
            no_improve_window: None,
            max_iterations: None,
            init: Init::Empty,
            restarts: 1,
            restart_edge_prob: None,
            seed: 0,
        }
    }
}

fn check_positive(name: &str, value: usize) -> Result<()> {
    if value == 0 {
        return Err(Error::InvalidArgument(format!("{name} must be at least 1")));
    }
    Ok(())
}

/// Steepest-ascent hill climbing with restarts.
///
/// Each restart repeatedly takes the best-scoring neighbour and stops when no
/// neighbour improves the score. Ties go to the first move in neighbourhood
/// order. The best final graph over all restarts is returned; the final graph
/// of every restart is kept in the outcome's ensemble.
pub fn hill_climb(scorer: &mut Scorer<'_>, config: &HcConfig) -> Result<SearchOutcome> {
    check_positive("restarts", config.restarts)?;
    let template = scorer.data().empty_dag();
    let n = template.n();
    let max_iterations = config.max_iterations.unwrap_or(10 * n * n);
    check_positive("max_iterations", max_iterations)?;
    let limit = scorer.parent_limit();

    let mut trace = SearchTrace::default();
    let mut ensemble = Vec::with_capacity(config.restarts);
    let mut best: Option<(Dag, f64)> = None;

    for restart in 0..config.restarts {
        let mut dag = starting_graph(
            &template,
            config.init,
            config.restart_edge_prob,
            config.seed,
            restart,
            limit,
        );
        let mut score = scorer.network_score(&dag)?;
        trace.steps.push(TraceStep {
            restart,
            iteration: 0,
            mv: None,
            score,
            best_score: score,
            aspiration: false,
        });

        for iteration in 1..=max_iterations {
            let moves = neighborhood_limited(&dag, limit);
            trace.evaluations += moves.len() as u64;
            let mut chosen: Option<(Move, f64)> = None;
            for mv in moves {
                let delta = scorer.delta_score(&dag, mv)?;
                if delta > MIN_IMPROVEMENT && chosen.is_none_or(|(_, d)| delta > d) {
                    chosen = Some((mv, delta));
                }
            }
            let Some((mv, _)) = chosen else { break };
            mv.apply(&mut dag)?;
            score = scorer.network_score(&dag)?;
            trace.steps.push(TraceStep {
                restart,
                iteration,
                mv: Some(mv),
                score,
                best_score: score,
                aspiration: false,
            });
        }

        if best.as_ref().is_none_or(|(_, s)| score > *s) {
            best = Some((dag.clone(), score));
        }
        ensemble.push(dag);
    }

    let (best, best_score) = best.expect("at least one restart");
    trace.best_score = best_score;
    Ok(SearchOutcome {
        best,
        best_score,
        trace,
        ensemble,
    })
}

/// Tabu search.
///
/// Every iteration moves to the best admissible neighbour, improving or not.
/// After a move is taken its inverse is tabu for `tenure` iterations unless
/// it would beat the best score found so far (aspiration). A run stops after
/// `max_iterations` iterations, after `no_improve_window` iterations without
/// a new best, or when no admissible move is left, and returns the best graph
/// it visited.
pub fn tabu_search(scorer: &mut Scorer<'_>, config: &TabuConfig) -> Result<SearchOutcome> {
    check_positive("tenure", config.tenure)?;
    check_positive("restarts", config.restarts)?;
    let template = scorer.data().empty_dag();
    let n = template.n();
    let max_iterations = config.max_iterations.unwrap_or(10 * n * n);
    let window = config.no_improve_window.unwrap_or(3 * n);
    check_positive("max_iterations", max_iterations)?;
    check_positive("no_improve_window", window)?;
    let limit = scorer.parent_limit();

    let mut trace = SearchTrace::default();
    let mut ensemble = Vec::with_capacity(config.restarts);
    let mut overall: Option<(Dag, f64)> = None;

    for restart in 0..config.restarts {
        let mut dag = starting_graph(
            &template,
            config.init,
            config.restart_edge_prob,
            config.seed,
            restart,
            limit,
        );
        let mut current = scorer.network_score(&dag)?;
        let mut best = (dag.clone(), current);
        // move -> last iteration at which it is still tabu
        let mut tabu: HashMap<Move, usize> = HashMap::new();
        let mut stale = 0;
        trace.steps.push(TraceStep {
            restart,
            iteration: 0,
            mv: None,
            score: current,
            best_score: current,
            aspiration: false,
        });

        for iteration in 1..=max_iterations {
            let moves = neighborhood_limited(&dag, limit);
            trace.evaluations += moves.len() as u64;
            let mut chosen: Option<(Move, f64, bool)> = None;
            for mv in moves {
                let delta = scorer.delta_score(&dag, mv)?;
                let is_tabu = tabu.get(&mv).is_some_and(|&until| iteration <= until);
                let aspired = if is_tabu {
                    // Aspiration compares the exact score of the resulting graph.
                    let mut probe = dag.clone();
                    mv.apply(&mut probe)?;
                    if scorer.network_score(&probe)? > best.1 {
                        true
                    } else {
                        continue;
                    }
                } else {
                    false
                };
                if chosen.is_none_or(|(_, d, _)| delta > d) {
                    chosen = Some((mv, delta, aspired));
                }
            }
            let Some((mv, _, aspired)) = chosen else { break };
            mv.apply(&mut dag)?;
            current = scorer.network_score(&dag)?;
            tabu.insert(mv.inverse(), iteration + config.tenure);
            if current > best.1 {
                best = (dag.clone(), current);
                stale = 0;
            } else {
                stale += 1;
            }
            trace.steps.push(TraceStep {
                restart,
                iteration,
                mv: Some(mv),
                score: current,
                best_score: best.1,
                aspiration: aspired,
            });
            if stale >= window {
                break;
            }
        }

        if overall.as_ref().is_none_or(|(_, s)| best.1 > *s) {
            overall = Some(best.clone());
        }
        ensemble.push(best.0);
    }

    let (best, best_score) = overall.expect("at least one run");
    trace.best_score = best_score;
    Ok(SearchOutcome {
        best,
        best_score,
        trace,
        ensemble,
    })
}
