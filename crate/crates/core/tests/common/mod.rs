#![allow(dead_code)]

use bnsl::dag::random_dag;
use bnsl::scoring::LinearGaussianFit;
use bnsl::simulate::{simulate_linear_gaussian, GroundTruth};
use bnsl::{Dag, Dataset};

/// Linear-Gaussian truth over `dag` with every coefficient equal to `coef`,
/// zero intercepts and the given noise level.
pub fn truth_with(dag: Dag, coef: f64, noise: f64) -> GroundTruth {
    let params = (0..dag.n())
        .map(|v| {
            let parents = dag.parents(v).to_vec();
            LinearGaussianFit {
                coefficients: vec![coef; parents.len()],
                parents,
                intercept: 0.0,
                residual_variance: noise * noise,
            }
        })
        .collect();
    let n = dag.n();
    GroundTruth::new(dag, params, vec![noise; n]).unwrap()
}

/// `y = 2x + small noise`.
pub fn y2x(n_obs: usize, seed: u64) -> Dataset {
    let dag = Dag::from_edges(2, &[(0, 1)]).unwrap();
    let mut truth = truth_with(dag, 2.0, 1.0);
    truth.noise_std[1] = 0.1;
    simulate_linear_gaussian(&truth, n_obs, seed).unwrap()
}

pub fn chain_data(n: usize, n_obs: usize, seed: u64) -> Dataset {
    let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let dag = Dag::from_edges(n, &edges).unwrap();
    simulate_linear_gaussian(&truth_with(dag, 0.8, 1.0), n_obs, seed).unwrap()
}

/// Data from a random DAG with random parameters.
pub fn random_data(n: usize, edge_prob: f64, n_obs: usize, seed: u64) -> (GroundTruth, Dataset) {
    let dag = random_dag(n, edge_prob, seed);
    let truth = GroundTruth::random(dag, seed ^ 0xabcdef);
    let data = simulate_linear_gaussian(&truth, n_obs, seed.wrapping_add(1)).unwrap();
    (truth, data)
}
