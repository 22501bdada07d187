//! File formats.
//!
//! - Dataset: CSV, header of variable names, one observation per row.
//! - Network: edge list, one `from,to` label pair per line, sorted.
//! - Adjacency: CSV, header of labels, row `i` holds the 0/1 arcs out of node `i`.
//! - Gold standard: `intervention:<label>` then one `<label>,<0|1>` per node.
//! - Ground truth: edge list plus `node,intercept,noise_std,parent:coef,...`.
//! - Row metadata: `row_index,condition,time,replicate`.
//! - Results: `context,method,auroc` and `method,mean_rank`.
//!
//! Floats are written in their shortest round-trip decimal form.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::dag::Dag;
use crate::error::{Error, Result};
use crate::evaluation::{ContextResult, GoldStandard};
use crate::scoring::{Dataset, LinearGaussianFit};
use crate::simulate::{GroundTruth, RowMeta};

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn format_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("nan")
}

/// Parses dataset CSV text. Rows and columns in errors are 1-based, rows
/// counted among data rows.
pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let labels: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Shape(format!("unreadable header: {e}")))?
        .iter()
        .map(|s| s.trim().to_string())
        .collect();
    let n = labels.len();
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            column: 0,
            message: e.to_string(),
        })?;
        if record.len() != n {
            return Err(Error::Shape(format!(
                "row {row} has {} cells, expected {n}",
                record.len()
            )));
        }
        let mut values = Vec::with_capacity(n);
        for (c, cell) in record.iter().enumerate() {
            let column = c + 1;
            let cell = cell.trim();
            if is_missing(cell) {
                return Err(Error::MissingValue { row, column });
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column,
                message: format!("`{cell}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    column,
                    message: format!("`{cell}` is not finite"),
                });
            }
            values.push(v);
        }
        rows.push(values);
    }
    Dataset::from_rows(labels, &rows)
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    parse_dataset(&read_text(path.as_ref())?)
}

pub fn format_dataset(data: &Dataset) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::InvalidDataset(e.to_string());
    writer.write_record(data.labels()).map_err(csv_err)?;
    for obs in 0..data.n_obs() {
        writer
            .write_record(data.row(obs).iter().map(|v| v.to_string()))
            .map_err(csv_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::InvalidDataset(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn save_dataset(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_dataset(data)?)
}

fn check_plain_label(label: &str) -> Result<()> {
    if label.contains([',', '\n', '\r']) {
        return Err(Error::InvalidArgument(format!(
            "label `{label}` cannot be written to an edge list"
        )));
    }
    Ok(())
}

/// Edge-list text: one `from,to` per line, lexicographically sorted.
pub fn format_network(dag: &Dag) -> Result<String> {
    let mut lines = Vec::with_capacity(dag.edge_count());
    for (from, to) in dag.edges() {
        check_plain_label(dag.label(from))?;
        check_plain_label(dag.label(to))?;
        lines.push(format!("{},{}", dag.label(from), dag.label(to)));
    }
    lines.sort();
    Ok(lines.into_iter().map(|l| l + "\n").collect())
}

pub fn save_network(dag: &Dag, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_network(dag)?)
}

/// Reads an edge list over the given node labels. Blank lines are skipped.
pub fn parse_network(text: &str, labels: &[String], path: &Path) -> Result<Dag> {
    let mut dag = Dag::with_labels(labels.to_vec())?;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (from, to) = line
            .split_once(',')
            .ok_or_else(|| format_error(path, format!("line {}: expected `from,to`", i + 1)))?;
        let node = |label: &str| {
            dag.node_of(label.trim())
                .ok_or_else(|| Error::UnknownLabel(label.trim().to_string()))
        };
        let (from, to) = (node(from)?, node(to)?);
        dag.add_edge(from, to)
            .map_err(|e| format_error(path, format!("line {}: {e}", i + 1)))?;
    }
    Ok(dag)
}

pub fn load_network(path: impl AsRef<Path>, labels: &[String]) -> Result<Dag> {
    let path = path.as_ref();
    parse_network(&read_text(path)?, labels, path)
}

pub fn format_adjacency(dag: &Dag) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::InvalidArgument(e.to_string());
    writer.write_record(dag.labels()).map_err(csv_err)?;
    for from in 0..dag.n() {
        writer
            .write_record((0..dag.n()).map(|to| if dag.has_edge(from, to) { "1" } else { "0" }))
            .map_err(csv_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn save_adjacency(dag: &Dag, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_adjacency(dag)?)
}

pub fn load_adjacency(path: impl AsRef<Path>) -> Result<Dag> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let labels: Vec<String> = reader
        .headers()
        .map_err(|e| format_error(path, e.to_string()))?
        .iter()
        .map(|s| s.trim().to_string())
        .collect();
    let mut dag = Dag::with_labels(labels)?;
    let mut rows = 0;
    for (from, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format_error(path, e.to_string()))?;
        if from >= dag.n() {
            return Err(format_error(path, "more rows than labels"));
        }
        for (to, cell) in record.iter().enumerate() {
            match cell.trim() {
                "0" => {}
                "1" => dag
                    .add_edge(from, to)
                    .map_err(|e| format_error(path, e.to_string()))?,
                other => return Err(format_error(path, format!("cell `{other}` is not 0 or 1"))),
            }
        }
        rows += 1;
    }
    if rows != dag.n() {
        return Err(format_error(path, format!("{rows} rows for {} labels", dag.n())));
    }
    Ok(dag)
}

pub fn format_gold(gold: &GoldStandard) -> String {
    let mut out = format!("intervention:{}\n", gold.intervention);
    for (label, &pos) in &gold.labels {
        out.push_str(&format!("{label},{}\n", u8::from(pos)));
    }
    out
}

pub fn save_gold(gold: &GoldStandard, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_gold(gold))
}

pub fn load_gold(path: impl AsRef<Path>) -> Result<GoldStandard> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let intervention = lines
        .next()
        .and_then(|(_, l)| l.trim().strip_prefix("intervention:"))
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .ok_or_else(|| format_error(path, "first line must be `intervention:<label>`"))?;
    let mut labels = BTreeMap::new();
    for (i, line) in lines {
        let (label, flag) = line
            .trim()
            .rsplit_once(',')
            .ok_or_else(|| format_error(path, format!("line {}: expected `<label>,<0|1>`", i + 1)))?;
        let positive = match flag.trim() {
            "1" => true,
            "0" => false,
            other => {
                return Err(format_error(
                    path,
                    format!("line {}: flag `{other}` is not 0 or 1", i + 1),
                ))
            }
        };
        if labels.insert(label.trim().to_string(), positive).is_some() {
            return Err(format_error(path, format!("line {}: duplicate label", i + 1)));
        }
    }
    GoldStandard::new(intervention, labels)
}

/// `node,intercept,noise_std,parent:coef,...`, one line per node in node
/// order.
pub fn format_truth_params(truth: &GroundTruth) -> String {
    let dag = &truth.dag;
    let mut out = String::new();
    for (node, p) in truth.params.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}",
            dag.label(node),
            p.intercept,
            truth.noise_std[node]
        ));
        for (&parent, coef) in p.parents.iter().zip(&p.coefficients) {
            out.push_str(&format!(",{}:{coef}", dag.label(parent)));
        }
        out.push('\n');
    }
    out
}

pub fn save_truth(
    truth: &GroundTruth,
    network_path: impl AsRef<Path>,
    params_path: impl AsRef<Path>,
) -> Result<()> {
    save_network(&truth.dag, network_path)?;
    write_text(params_path.as_ref(), &format_truth_params(truth))
}

/// Reads a ground truth back. Node labels and order come from the parameter
/// file; the edge list must agree with the parents listed there.
pub fn load_truth(
    network_path: impl AsRef<Path>,
    params_path: impl AsRef<Path>,
) -> Result<GroundTruth> {
    let params_path = params_path.as_ref();
    let text = read_text(params_path)?;
    struct Line {
        label: String,
        intercept: f64,
        noise: f64,
        parents: Vec<(String, f64)>,
    }
    let number = |s: &str, i: usize| -> Result<f64> {
        s.trim()
            .parse()
            .map_err(|_| format_error(params_path, format!("line {}: `{s}` is not a number", i + 1)))
    };
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() < 3 {
            return Err(format_error(params_path, format!("line {}: too few fields", i + 1)));
        }
        let mut parents = Vec::new();
        for f in &fields[3..] {
            let (label, coef) = f
                .rsplit_once(':')
                .ok_or_else(|| format_error(params_path, format!("line {}: expected `parent:coef`", i + 1)))?;
            parents.push((label.trim().to_string(), number(coef, i)?));
        }
        lines.push(Line {
            label: fields[0].trim().to_string(),
            intercept: number(fields[1], i)?,
            noise: number(fields[2], i)?,
            parents,
        });
    }
    let labels: Vec<String> = lines.iter().map(|l| l.label.clone()).collect();
    let dag = load_network(network_path, &labels)?;
    let mut params = Vec::with_capacity(lines.len());
    let mut noise_std = Vec::with_capacity(lines.len());
    for line in lines {
        let mut pairs = Vec::with_capacity(line.parents.len());
        for (label, coef) in line.parents {
            let p = dag.node_of(&label).ok_or(Error::UnknownLabel(label))?;
            pairs.push((p, coef));
        }
        pairs.sort_by_key(|&(p, _)| p);
        params.push(LinearGaussianFit {
            parents: pairs.iter().map(|&(p, _)| p).collect(),
            intercept: line.intercept,
            coefficients: pairs.iter().map(|&(_, c)| c).collect(),
            residual_variance: line.noise * line.noise,
        });
        noise_std.push(line.noise);
    }
    GroundTruth::new(dag, params, noise_std)
}

pub fn format_metadata(rows: &[RowMeta]) -> String {
    let mut out = String::from("row_index,condition,time,replicate\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.row_index, r.condition, r.time, r.replicate));
    }
    out
}

pub fn save_metadata(rows: &[RowMeta], path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_metadata(rows))
}

pub fn format_results(results: &[ContextResult]) -> String {
    let mut out = String::from("context,method,auroc\n");
    for r in results {
        out.push_str(&format!("{},{},{}\n", r.context, r.method, r.auroc));
    }
    out
}

pub fn save_results(results: &[ContextResult], path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_results(results))
}

pub fn format_mean_ranks(ranks: &BTreeMap<String, f64>) -> String {
    let mut out = String::from("method,mean_rank\n");
    for (method, rank) in ranks {
        out.push_str(&format!("{method},{rank}\n"));
    }
    out
}

pub fn save_mean_ranks(ranks: &BTreeMap<String, f64>, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_mean_ranks(ranks))
}
