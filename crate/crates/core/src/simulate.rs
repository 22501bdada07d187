//! Synthetic linear-Gaussian data with a known generating network.

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::dag::{random_dag, Dag, NodeId};
use crate::error::{Error, Result};
use crate::evaluation::GoldStandard;
use crate::rng::{derive_seed, rng_from_seed};
use crate::scoring::{Dataset, LinearGaussianFit, DEFAULT_MAX_PARENTS};

/// A generating model: each node is its intercept plus a linear combination
/// of its parents plus Gaussian noise.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruth {
    pub dag: Dag,
    /// Per node; `parents` must equal the node's parents in `dag`.
    pub params: Vec<LinearGaussianFit>,
    pub noise_std: Vec<f64>,
}

impl GroundTruth {
    pub fn new(dag: Dag, params: Vec<LinearGaussianFit>, noise_std: Vec<f64>) -> Result<Self> {
        let n = dag.n();
        if params.len() != n || noise_std.len() != n {
            return Err(Error::Shape(format!(
                "{n} nodes but {} parameter sets and {} noise levels",
                params.len(),
                noise_std.len()
            )));
        }
        for (node, p) in params.iter().enumerate() {
            if p.parents != dag.parents(node) || p.coefficients.len() != p.parents.len() {
                return Err(Error::Shape(format!(
                    "parameters of node `{}` do not match its parents",
                    dag.label(node)
                )));
            }
            if !p.intercept.is_finite() || p.coefficients.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "non-finite parameter for node `{}`",
                    dag.label(node)
                )));
            }
        }
        if let Some(node) = noise_std.iter().position(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "noise level of node `{}` must be finite and non-negative",
                dag.label(node)
            )));
        }
        Ok(GroundTruth {
            dag,
            params,
            noise_std,
        })
    }

    /// Random parameters for `dag`: intercepts in `[-1, 1]`, coefficients of
    /// magnitude `[0.3, 1.0]` with random sign, noise levels in `[0.5, 1.5]`.
    pub fn random(dag: Dag, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let n = dag.n();
        let mut params = Vec::with_capacity(n);
        let mut noise_std = Vec::with_capacity(n);
        for node in 0..n {
            let parents = dag.parents(node).to_vec();
            let intercept = rng.random_range(-1.0..=1.0);
            let coefficients = parents
                .iter()
                .map(|_| {
                    let magnitude: f64 = rng.random_range(0.3..=1.0);
                    if rng.random::<bool>() {
                        magnitude
                    } else {
                        -magnitude
                    }
                })
                .collect();
            params.push(LinearGaussianFit {
                parents,
                intercept,
                coefficients,
                residual_variance: 0.0,
            });
            noise_std.push(rng.random_range(0.5..=1.5));
        }
        for (p, s) in params.iter_mut().zip(&noise_std) {
            p.residual_variance = s * s;
        }
        GroundTruth {
            dag,
            params,
            noise_std,
        }
    }
}

/// Draws `n_obs` independent rows from `truth`, sampling nodes in
/// topological order.
pub fn simulate_linear_gaussian(truth: &GroundTruth, n_obs: usize, seed: u64) -> Result<Dataset> {
    if n_obs < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 observations, got {n_obs}"
        )));
    }
    let dag = &truth.dag;
    let order = dag.topological_order()?;
    let mut rng = rng_from_seed(seed);
    let mut columns = vec![vec![0.0; n_obs]; dag.n()];
    for obs in 0..n_obs {
        for &node in &order {
            let p = &truth.params[node];
            let mut value = p.intercept;
            for (&parent, &coef) in p.parents.iter().zip(&p.coefficients) {
                value += coef * columns[parent][obs];
            }
            let z: f64 = StandardNormal.sample(&mut rng);
            value += truth.noise_std[node] * z;
            columns[node][obs] = value;
        }
    }
    Dataset::new(dag.labels().to_vec(), columns)
}

/// Experimental layout of one generated row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowMeta {
    pub row_index: usize,
    pub condition: String,
    pub time: usize,
    pub replicate: usize,
}

#[derive(Clone, Debug)]
pub struct InSilico {
    pub truth: GroundTruth,
    pub data: Dataset,
    pub gold: GoldStandard,
    pub metadata: Vec<RowMeta>,
}

pub const INSILICO_NODES: usize = 20;
pub const INSILICO_EDGE_PROB: f64 = 0.15;
const STIMULI: usize = 2;
const CONCENTRATIONS: usize = 2;
const INHIBITORS: [&str; 4] = ["none", "I1", "I2", "I3"];
const TIME_POINTS: usize = 10;
const REPLICATES: usize = 3;

/// Row layout: 2 stimuli × 2 concentrations × 4 inhibitor settings × 10 time
/// points × 3 replicates.
pub fn insilico_layout() -> Vec<RowMeta> {
    let mut rows = Vec::new();
    for s in 1..=STIMULI {
        for c in 1..=CONCENTRATIONS {
            for inhibitor in INHIBITORS {
                for time in 0..TIME_POINTS {
                    for replicate in 1..=REPLICATES {
                        rows.push(RowMeta {
                            row_index: rows.len(),
                            condition: format!("S{s}_C{c}_{inhibitor}"),
                            time,
                            replicate,
                        });
                    }
                }
            }
        }
    }
    rows
}

/// Node with the most children, lowest index on ties.
pub fn highest_out_degree(dag: &Dag) -> NodeId {
    (0..dag.n())
        .max_by(|&a, &b| dag.children(a).len().cmp(&dag.children(b).len()).then(b.cmp(&a)))
        .unwrap_or(0)
}

/// A 20-node network with random linear-Gaussian parameters and one i.i.d.
/// draw per row of [`insilico_layout`] (480 rows). The gold standard marks
/// the true descendants of the node with the highest out-degree. Candidate
/// networks whose gold standard would have no positive or no negative node
/// are redrawn.
pub fn generate_insilico_like(seed: u64) -> Result<InSilico> {
    let labels: Vec<String> = (1..=INSILICO_NODES).map(|i| format!("P{i}")).collect();
    let metadata = insilico_layout();
    for attempt in 0..1000u64 {
        let raw = random_dag(
            INSILICO_NODES,
            INSILICO_EDGE_PROB,
            derive_seed(seed, 3 * attempt),
        );
        let mut dag = Dag::with_labels(labels.clone())?;
        for (from, to) in raw.edges() {
            if dag.parents(to).len() < DEFAULT_MAX_PARENTS {
                dag.add_edge(from, to)?;
            }
        }
        let intervention = highest_out_degree(&dag);
        let gold = match GoldStandard::from_dag(&dag, intervention) {
            Ok(g) => g,
            Err(Error::DegenerateGold) => continue,
            Err(e) => return Err(e),
        };
        let truth = GroundTruth::random(dag, derive_seed(seed, 3 * attempt + 1));
        let data = simulate_linear_gaussian(&truth, metadata.len(), derive_seed(seed, 3 * attempt + 2))?;
        return Ok(InSilico {
            truth,
            data,
            gold,
            metadata,
        });
    }
    Err(Error::InternalInvariant(
        "could not draw a network with a usable gold standard".to_string(),
    ))
}
