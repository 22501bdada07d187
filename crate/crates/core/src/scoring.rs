//! Decomposable linear-Gaussian network scores.
//!
//! Every node is regressed on its parents (ordinary least squares with an
//! intercept, maximum-likelihood residual variance). The node's log-likelihood
//! at those estimates is
//!
//! ```text
//! loglik_i = -N/2 · (ln(2π·σ̂²) + 1)
//! ```
//!
//! and with `k_i = |parents| + 2` free parameters the penalised variants are
//! `AIC_i = loglik_i - k_i` and `BIC_i = loglik_i - (k_i / 2)·ln N`. All
//! three are maximised.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::dag::{Dag, NodeId};
use crate::error::{Error, Result};
use crate::search::{Move, MoveKind};

/// Ridge added to the normal equations when they are not positive definite,
/// relative to the mean diagonal.
const RIDGE: f64 = 1e-8;
/// Residual variances are floored at this fraction of the node's variance.
const VARIANCE_FLOOR: f64 = 1e-12;
/// Default cap on the number of parents a search may give a node.
pub const DEFAULT_MAX_PARENTS: usize = 5;

/// `N` observations of `n` continuous variables, stored column-wise.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    labels: Arc<[String]>,
    columns: Vec<Vec<f64>>,
    n_obs: usize,
}

impl Dataset {
    /// Checks that there are at least 3 rows, that every value is finite and
    /// that no column is constant.
    pub fn new(labels: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        let data = Dataset::relaxed(labels, columns)?;
        if data.n_obs < 3 {
            return Err(Error::InvalidDataset(format!(
                "need at least 3 observations, got {}",
                data.n_obs
            )));
        }
        for (label, column) in data.labels.iter().zip(&data.columns) {
            if population_variance(column) <= 0.0 {
                return Err(Error::ZeroVariance(label.clone()));
            }
        }
        Ok(data)
    }

    /// Builds a dataset from row-major observations.
    pub fn from_rows(labels: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let n = labels.len();
        let mut columns = vec![Vec::with_capacity(rows.len()); n];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "row {} has {} values, expected {n}",
                    r + 1,
                    row.len()
                )));
            }
            for (column, &v) in columns.iter_mut().zip(row) {
                column.push(v);
            }
        }
        Dataset::new(labels, columns)
    }

    /// Shape and finiteness checks only. Meant for tiny hand-made fixtures
    /// that break the row-count or variance requirements.
    pub fn relaxed(labels: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if labels.len() != columns.len() {
            return Err(Error::Shape(format!(
                "{} labels for {} columns",
                labels.len(),
                columns.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::InvalidDataset("no variables".to_string()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for label in &labels {
            if label.is_empty() || !seen.insert(label.as_str()) {
                return Err(Error::InvalidDataset(format!(
                    "labels must be unique and non-empty, got `{label}`"
                )));
            }
        }
        let n_obs = columns[0].len();
        if n_obs == 0 {
            return Err(Error::InvalidDataset("no observations".to_string()));
        }
        for (c, column) in columns.iter().enumerate() {
            if column.len() != n_obs {
                return Err(Error::Shape(format!(
                    "column `{}` has {} values, expected {n_obs}",
                    labels[c],
                    column.len()
                )));
            }
            if let Some(r) = column.iter().position(|v| !v.is_finite()) {
                return Err(Error::Parse {
                    row: r + 1,
                    column: c + 1,
                    message: "non-finite value".to_string(),
                });
            }
        }
        Ok(Dataset {
            labels: labels.into(),
            columns,
            n_obs,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.columns.len()
    }

    pub fn n_obs(&self) -> usize {
        self.n_obs
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub(crate) fn shared_labels(&self) -> Arc<[String]> {
        Arc::clone(&self.labels)
    }

    pub fn column(&self, var: NodeId) -> &[f64] {
        &self.columns[var]
    }

    pub fn row(&self, obs: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[obs]).collect()
    }

    /// Empty graph over this dataset's variables.
    pub fn empty_dag(&self) -> Dag {
        Dag::with_labels(self.shared_labels()).expect("dataset labels are validated")
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn population_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScoreKind {
    LogLik,
    Aic,
    Bic,
}

impl ScoreKind {
    pub const ALL: [ScoreKind; 3] = [ScoreKind::LogLik, ScoreKind::Aic, ScoreKind::Bic];

    pub fn as_str(self) -> &'static str {
        match self {
            ScoreKind::LogLik => "loglik",
            ScoreKind::Aic => "aic",
            ScoreKind::Bic => "bic",
        }
    }

    /// Penalty subtracted from the log-likelihood for `k` parameters.
    pub fn penalty(self, k: usize, n_obs: usize) -> f64 {
        match self {
            ScoreKind::LogLik => 0.0,
            ScoreKind::Aic => k as f64,
            ScoreKind::Bic => k as f64 / 2.0 * (n_obs as f64).ln(),
        }
    }
}

impl fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScoreKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "loglik" => Ok(ScoreKind::LogLik),
            "aic" => Ok(ScoreKind::Aic),
            "bic" => Ok(ScoreKind::Bic),
            _ => Err(Error::InvalidArgument(format!(
                "unknown score `{s}` (expected loglik, aic or bic)"
            ))),
        }
    }
}

/// Least-squares regression of a node on its parents.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearGaussianFit {
    /// Sorted parent indices; `coefficients[k]` belongs to `parents[k]`.
    pub parents: Vec<NodeId>,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    /// RSS / N, floored.
    pub residual_variance: f64,
}

pub fn fit_linear_gaussian(
    data: &Dataset,
    node: NodeId,
    parents: &[NodeId],
) -> Result<LinearGaussianFit> {
    let n_vars = data.n_vars();
    if node >= n_vars {
        return Err(Error::InvalidArgument(format!("node {node} out of range")));
    }
    let mut parents = parents.to_vec();
    parents.sort_unstable();
    parents.dedup();
    if let Some(&p) = parents.iter().find(|&&p| p >= n_vars) {
        return Err(Error::InvalidArgument(format!("parent {p} out of range")));
    }
    if parents.contains(&node) {
        return Err(Error::InvalidArgument(format!(
            "node {node} cannot be its own parent"
        )));
    }
    let n_obs = data.n_obs();
    if parents.len() + 2 > n_obs {
        return Err(Error::Underdetermined {
            node,
            parents: parents.len(),
            n_obs,
        });
    }

    let y = data.column(node);
    let y_mean = mean(y);
    let xs: Vec<&[f64]> = parents.iter().map(|&p| data.column(p)).collect();
    let x_means: Vec<f64> = xs.iter().map(|x| mean(x)).collect();
    let p = parents.len();

    // Centred normal equations: S β = s.
    let mut gram = vec![0.0; p * p];
    let mut rhs = vec![0.0; p];
    for a in 0..p {
        for b in a..p {
            let v: f64 = xs[a]
                .iter()
                .zip(xs[b])
                .map(|(u, w)| (u - x_means[a]) * (w - x_means[b]))
                .sum();
            gram[a * p + b] = v;
            gram[b * p + a] = v;
        }
        rhs[a] = xs[a]
            .iter()
            .zip(y)
            .map(|(u, w)| (u - x_means[a]) * (w - y_mean))
            .sum();
    }
    let coefficients = solve_spd(&gram, &rhs, p).unwrap_or_else(|| {
        let scale = (0..p).map(|a| gram[a * p + a]).sum::<f64>() / p as f64;
        let lambda = RIDGE * if scale > 0.0 { scale } else { 1.0 };
        let mut ridged = gram.clone();
        for a in 0..p {
            ridged[a * p + a] += lambda;
        }
        solve_spd(&ridged, &rhs, p).unwrap_or_else(|| vec![0.0; p])
    });
    let intercept = y_mean
        - coefficients
            .iter()
            .zip(&x_means)
            .map(|(b, m)| b * m)
            .sum::<f64>();

    let mut rss = 0.0;
    for (r, &yr) in y.iter().enumerate() {
        let mut fitted = intercept;
        for (b, x) in coefficients.iter().zip(&xs) {
            fitted += b * x[r];
        }
        let e = yr - fitted;
        rss += e * e;
    }
    let floor = VARIANCE_FLOOR * population_variance(y);
    let residual_variance = (rss / n_obs as f64).max(floor);

    Ok(LinearGaussianFit {
        parents,
        intercept,
        coefficients,
        residual_variance,
    })
}

/// Cholesky solve of a `p × p` symmetric system. `None` if a pivot is not
/// clearly positive.
fn solve_spd(a: &[f64], b: &[f64], p: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..=i {
            let mut sum = a[i * p + j];
            for k in 0..j {
                sum -= l[i * p + k] * l[j * p + k];
            }
            if i == j {
                if !(sum > 1e-10 * a[i * p + i].abs()) || sum <= 0.0 {
                    return None;
                }
                l[i * p + i] = sum.sqrt();
            } else {
                l[i * p + j] = sum / l[j * p + j];
            }
        }
    }
    let mut z = vec![0.0; p];
    for i in 0..p {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * p + k] * z[k];
        }
        z[i] = sum / l[i * p + i];
    }
    let mut x = vec![0.0; p];
    for i in (0..p).rev() {
        let mut sum = z[i];
        for k in (i + 1)..p {
            sum -= l[k * p + i] * x[k];
        }
        x[i] = sum / l[i * p + i];
    }
    Some(x)
}

/// Maximised Gaussian log-likelihood of `n_obs` residuals with variance
/// `residual_variance`.
pub fn gaussian_loglik(residual_variance: f64, n_obs: usize) -> f64 {
    -(n_obs as f64) / 2.0 * ((2.0 * PI * residual_variance).ln() + 1.0)
}

/// Number of free parameters of a node with `n_parents` parents.
pub fn parameter_count(n_parents: usize) -> usize {
    n_parents + 2
}

pub fn node_score(
    data: &Dataset,
    node: NodeId,
    parents: &[NodeId],
    kind: ScoreKind,
) -> Result<f64> {
    let fit = fit_linear_gaussian(data, node, parents)?;
    let loglik = gaussian_loglik(fit.residual_variance, data.n_obs());
    Ok(loglik - kind.penalty(parameter_count(fit.parents.len()), data.n_obs()))
}

/// Uncached network score: the sum of node scores in node order.
pub fn network_score(data: &Dataset, dag: &Dag, kind: ScoreKind) -> Result<f64> {
    check_dims(data, dag)?;
    let mut total = 0.0;
    for node in 0..dag.n() {
        total += node_score(data, node, dag.parents(node), kind)?;
    }
    Ok(total)
}

fn check_dims(data: &Dataset, dag: &Dag) -> Result<()> {
    if data.n_vars() != dag.n() {
        return Err(Error::Shape(format!(
            "graph has {} nodes but dataset has {} variables",
            dag.n(),
            data.n_vars()
        )));
    }
    Ok(())
}

/// Node scores keyed by `(node, sorted parent set)`.
#[derive(Clone, Debug, Default)]
pub struct ScoreCache {
    map: HashMap<(NodeId, Vec<NodeId>), f64>,
    hits: u64,
    misses: u64,
}

impl ScoreCache {
    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Scores graphs against one dataset under one [`ScoreKind`], caching node
/// scores. One scorer belongs to one search.
#[derive(Clone, Debug)]
pub struct Scorer<'a> {
    data: &'a Dataset,
    kind: ScoreKind,
    max_parents: usize,
    cache: ScoreCache,
}

impl<'a> Scorer<'a> {
    pub fn new(data: &'a Dataset, kind: ScoreKind) -> Self {
        Scorer {
            data,
            kind,
            max_parents: DEFAULT_MAX_PARENTS,
            cache: ScoreCache::default(),
        }
    }

    pub fn with_max_parents(mut self, max_parents: usize) -> Self {
        self.max_parents = max_parents;
        self
    }

    pub fn data(&self) -> &'a Dataset {
        self.data
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    /// Largest parent set a search may create: `min(N - 2, max_parents)`.
    pub fn parent_limit(&self) -> usize {
        self.max_parents.min(self.data.n_obs().saturating_sub(2))
    }

    pub fn cache(&self) -> &ScoreCache {
        &self.cache
    }

    /// Node score for a sorted parent set.
    pub fn node_score(&mut self, node: NodeId, parents: &[NodeId]) -> Result<f64> {
        debug_assert!(parents.windows(2).all(|w| w[0] < w[1]));
        let key = (node, parents.to_vec());
        if let Some(&v) = self.cache.map.get(&key) {
            self.cache.hits += 1;
            return Ok(v);
        }
        self.cache.misses += 1;
        let v = node_score(self.data, node, parents, self.kind)?;
        self.cache.map.insert(key, v);
        Ok(v)
    }

    pub fn network_score(&mut self, dag: &Dag) -> Result<f64> {
        check_dims(self.data, dag)?;
        let mut total = 0.0;
        for node in 0..dag.n() {
            total += self.node_score(node, dag.parents(node))?;
        }
        Ok(total)
    }

    /// Score change from applying `mv` to `dag`, rescoring only the nodes
    /// whose parent sets change.
    pub fn delta_score(&mut self, dag: &Dag, mv: Move) -> Result<f64> {
        let Move { kind, from, to } = mv;
        match kind {
            MoveKind::Add => {
                let old = dag.parents(to);
                let new = with_parent(old, from);
                Ok(self.node_score(to, &new)? - self.node_score(to, old)?)
            }
            MoveKind::Delete => {
                let old = dag.parents(to);
                let new = without_parent(old, from);
                Ok(self.node_score(to, &new)? - self.node_score(to, old)?)
            }
            MoveKind::Reverse => {
                let old_to = dag.parents(to);
                let new_to = without_parent(old_to, from);
                let old_from = dag.parents(from);
                let new_from = with_parent(old_from, to);
                let d_to = self.node_score(to, &new_to)? - self.node_score(to, old_to)?;
                let d_from = self.node_score(from, &new_from)? - self.node_score(from, old_from)?;
                Ok(d_to + d_from)
            }
        }
    }
}

pub(crate) fn with_parent(parents: &[NodeId], extra: NodeId) -> Vec<NodeId> {
    let mut out = parents.to_vec();
    if let Err(pos) = out.binary_search(&extra) {
        out.insert(pos, extra);
    }
    out
}

pub(crate) fn without_parent(parents: &[NodeId], gone: NodeId) -> Vec<NodeId> {
    parents.iter().copied().filter(|&p| p != gone).collect()
}
