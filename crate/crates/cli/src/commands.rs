use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bnsl::evaluation::{evaluate_context, mean_rank, ContextResult, GoldStandard};
use bnsl::ga::evolve;
use bnsl::io;
use bnsl::scoring::network_score;
use bnsl::search::{exhaustive_best, hill_climb, tabu_search, SearchOutcome, DEFAULT_MAX_EXHAUSTIVE_NODES};
use bnsl::simulate::generate_insilico_like;
use bnsl::{Dag, Dataset, Scorer};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{Method, RunConfig, Score};
use crate::{BenchmarkArgs, Common, EnumerateArgs, EvaluateArgs, Failure, InferArgs, ScoreArgs, SimulateArgs};

fn with_common(common: &Common) -> Result<RunConfig, Failure> {
    let mut config = RunConfig::load(common.config.as_deref())?;
    if common.seed.is_some() {
        config.seed = common.seed;
    }
    if common.max_parents.is_some() {
        config.max_parents = common.max_parents;
    }
    if common.out_dir.is_some() {
        config.out_dir = common.out_dir.clone();
    }
    Ok(config)
}

fn prepare_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::from(bnsl::Error::io(dir, e)))
}

fn write(path: &Path, content: &str) -> Result<(), Failure> {
    fs::write(path, content).map_err(|e| Failure::from(bnsl::Error::io(path, e)))
}

fn json_text(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("manifest serialises");
    text.push('\n');
    text
}

/// Runs one method on `data`. The config supplies seed, parent cap and the
/// method's knobs.
pub fn run_method(
    data: &Dataset,
    method: Method,
    score: Score,
    config: &RunConfig,
) -> Result<SearchOutcome, Failure> {
    let mut scorer = Scorer::new(data, score.kind()).with_max_parents(config.max_parents());
    let outcome = match method {
        Method::Hc => hill_climb(&mut scorer, &config.hc_config()?),
        Method::Tabu => tabu_search(&mut scorer, &config.tabu_config()?),
        Method::Ga => evolve(&mut scorer, &config.ga_config()?),
    };
    outcome.map_err(|e| match e {
        bnsl::Error::InvalidArgument(msg) => Failure::config(format!("[{method}] {msg}")),
        other => other.into(),
    })
}

pub fn infer(args: InferArgs) -> Result<(), Failure> {
    let mut config = with_common(&args.common)?;
    if args.data.is_some() {
        config.dataset = args.data;
    }
    if args.method.is_some() {
        config.method = args.method;
    }
    if args.score.is_some() {
        config.score = args.score;
    }
    let config = config.resolved();
    let dataset = config
        .dataset
        .clone()
        .ok_or_else(|| Failure::config("no dataset: pass DATA or set `dataset` in --config"))?;
    let data = io::load_dataset(&dataset)?;

    let started = Instant::now();
    let outcome = run_method(&data, config.method(), config.score(), &config)?;
    let elapsed = started.elapsed().as_secs_f64();

    let out = config.out_dir();
    prepare_dir(&out)?;
    io::save_network(&outcome.best, out.join("network.txt"))?;
    io::save_adjacency(&outcome.best, out.join("adjacency.csv"))?;
    write(&out.join("trace.csv"), &outcome.trace.to_csv())?;
    let ensemble_dir = out.join("ensemble");
    if ensemble_dir.is_dir() {
        fs::remove_dir_all(&ensemble_dir).map_err(|e| Failure::from(bnsl::Error::io(&ensemble_dir, e)))?;
    }
    prepare_dir(&ensemble_dir)?;
    let mut members = Vec::new();
    for (i, dag) in outcome.ensemble.iter().enumerate() {
        let name = format!("ensemble/net_{i:03}.txt");
        io::save_network(dag, out.join(&name))?;
        members.push(name);
    }
    write(&out.join("config.toml"), &config.to_toml())?;
    let manifest = json!({
        "command": "infer",
        "dataset": dataset,
        "method": config.method(),
        "score": config.score(),
        "seed": config.seed(),
        "max_parents": config.max_parents(),
        "config": config,
        "result": {
            "score": outcome.best_score,
            "edges": outcome.best.edge_count(),
            "evaluations": outcome.trace.evaluations,
            "ensemble": members,
        },
        "files": ["network.txt", "adjacency.csv", "trace.csv", "config.toml", "timing.json"],
    });
    write(&out.join("manifest.json"), &json_text(&manifest))?;
    write(
        &out.join("timing.json"),
        &json_text(&json!({ "wall_time_seconds": elapsed })),
    )?;
    println!("score {:.6}", outcome.best_score);
    println!("edges {}", outcome.best.edge_count());
    Ok(())
}

pub fn score(args: ScoreArgs) -> Result<(), Failure> {
    let config = RunConfig::load(args.config.as_deref())?;
    let score = args.score.unwrap_or(config.score());
    let data = io::load_dataset(&args.data)?;
    let dag = io::load_network(&args.network, data.labels())?;
    let value = network_score(&data, &dag, score.kind())?;
    println!("{value:.6}");
    Ok(())
}

pub fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let config = with_common(&args.common)?;
    let seed = config.seed();
    let sim = generate_insilico_like(seed)?;
    let out = config.out_dir();
    prepare_dir(&out)?;
    io::save_dataset(&sim.data, out.join("data.csv"))?;
    io::save_metadata(&sim.metadata, out.join("metadata.csv"))?;
    io::save_truth(&sim.truth, out.join("truth_network.txt"), out.join("truth_params.csv"))?;
    io::save_gold(&sim.gold, out.join("gold.txt"))?;
    let manifest = json!({
        "command": "simulate",
        "seed": seed,
        "nodes": sim.data.n_vars(),
        "observations": sim.data.n_obs(),
        "truth_edges": sim.truth.dag.edge_count(),
        "intervention": sim.gold.intervention,
        "files": ["data.csv", "metadata.csv", "truth_network.txt", "truth_params.csv", "gold.txt"],
    });
    write(&out.join("manifest.json"), &json_text(&manifest))?;
    println!(
        "{} observations of {} variables, {} true edges, intervention {}",
        sim.data.n_obs(),
        sim.data.n_vars(),
        sim.truth.dag.edge_count(),
        sim.gold.intervention
    );
    Ok(())
}

fn gold_labels(gold: &GoldStandard) -> Vec<String> {
    std::iter::once(gold.intervention.clone())
        .chain(gold.labels.keys().cloned())
        .collect()
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn evaluate(args: EvaluateArgs) -> Result<(), Failure> {
    let gold = io::load_gold(&args.gold)?;
    let labels = gold_labels(&gold);
    let networks = args
        .networks
        .iter()
        .map(|p| io::load_network(p, &labels))
        .collect::<Result<Vec<Dag>, _>>()?;
    let context = args.context.unwrap_or_else(|| stem(&args.gold));
    let result = evaluate_context(&networks, &gold, &context, &args.label)?;
    let out = args.out_dir.unwrap_or_else(|| PathBuf::from("."));
    prepare_dir(&out)?;
    io::save_results(std::slice::from_ref(&result), out.join("evaluation.csv"))?;
    println!("AUROC {:.6}", result.auroc);
    Ok(())
}

fn combo_name(method: Method, score: Score) -> String {
    format!("{method}+{score}")
}

struct Context {
    name: String,
    data: Dataset,
    gold: GoldStandard,
}

fn load_context(name: String, data: &Path, gold: &Path) -> Result<Context, Failure> {
    let data = io::load_dataset(data)?;
    let gold = io::load_gold(gold)?;
    Ok(Context { name, data, gold })
}

fn context_names(paths: &[PathBuf]) -> Vec<String> {
    let stems: Vec<String> = paths.iter().map(|p| stem(p)).collect();
    stems
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if stems.iter().filter(|t| *t == s).count() > 1 {
                format!("{s}#{}", i + 1)
            } else {
                s.clone()
            }
        })
        .collect()
}

const SHADES: [char; 10] = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];

fn heatmap(contexts: &[String], methods: &[String], results: &[ContextResult], ranks: &BTreeMap<String, f64>) -> String {
    let cell: BTreeMap<(&str, &str), f64> = results
        .iter()
        .map(|r| ((r.context.as_str(), r.method.as_str()), r.auroc))
        .collect();
    let first = contexts.iter().map(|c| c.len()).max().unwrap_or(0).max(9);
    let width = methods.iter().map(|m| m.len()).max().unwrap_or(0).max(7);
    let mut out = format!("{:first$}", "context");
    for m in methods {
        let _ = write!(out, "  {m:>width$}");
    }
    out.push('\n');
    for c in contexts {
        let _ = write!(out, "{c:first$}");
        for m in methods {
            match cell.get(&(c.as_str(), m.as_str())) {
                Some(&a) => {
                    let shade = SHADES[((a * 10.0) as usize).min(9)];
                    let _ = write!(out, "  {:>w$} {shade}", format!("{a:.3}"), w = width - 2);
                }
                None => {
                    let _ = write!(out, "  {:>width$}", "-");
                }
            }
        }
        out.push('\n');
    }
    let _ = write!(out, "{:first$}", "mean_rank");
    for m in methods {
        match ranks.get(m) {
            Some(r) => {
                let _ = write!(out, "  {:>width$}", format!("{r:.3}"));
            }
            None => {
                let _ = write!(out, "  {:>width$}", "-");
            }
        }
    }
    out.push('\n');
    let _ = writeln!(out, "\nshade: AUROC in tenths, ' ' < 0.1 ... '@' >= 0.9");
    out
}

pub fn benchmark(args: BenchmarkArgs) -> Result<(), Failure> {
    if args.data.len() != args.gold.len() {
        return Err(Failure::config(format!(
            "{} datasets but {} gold standards",
            args.data.len(),
            args.gold.len()
        )));
    }
    let mut config = with_common(&args.common)?;
    config.seed = Some(config.seed());
    config.max_parents = Some(config.max_parents());
    // Surface knob errors once, before any work.
    config.hc_config()?;
    config.tabu_config()?;
    config.ga_config()?;

    let names = context_names(&args.data);
    let combos: Vec<(Method, Score)> = Method::ALL
        .iter()
        .flat_map(|&m| Score::ALL.iter().map(move |&s| (m, s)))
        .collect();
    let methods: Vec<String> = combos.iter().map(|&(m, s)| combo_name(m, s)).collect();

    let contexts: Vec<Result<Context, Failure>> = names
        .iter()
        .zip(args.data.iter().zip(&args.gold))
        .map(|(name, (d, g))| load_context(name.clone(), d, g))
        .collect();
    let jobs: Vec<(usize, Method, Score)> = contexts
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_ok())
        .flat_map(|(i, _)| combos.iter().map(move |&(m, s)| (i, m, s)))
        .collect();
    let outputs: Vec<Result<ContextResult, Failure>> = jobs
        .par_iter()
        .map(|&(i, method, score)| {
            let ctx = contexts[i].as_ref().expect("only loaded contexts are scheduled");
            let outcome = run_method(&ctx.data, method, score, &config)?;
            Ok(evaluate_context(
                &outcome.ensemble,
                &ctx.gold,
                &ctx.name,
                &combo_name(method, score),
            )?)
        })
        .collect();

    let mut failures: Vec<(String, Failure)> = Vec::new();
    for (name, ctx) in names.iter().zip(&contexts) {
        if let Err(f) = ctx {
            failures.push((name.clone(), Failure { code: f.code, message: f.message.clone() }));
        }
    }
    let mut results = Vec::new();
    for (i, ctx_name) in names.iter().enumerate() {
        let rows: Vec<_> = jobs
            .iter()
            .zip(&outputs)
            .filter(|((j, _, _), _)| *j == i)
            .map(|(_, r)| r)
            .collect();
        if rows.is_empty() {
            continue;
        }
        if let Some(Err(f)) = rows.iter().find(|r| r.is_err()) {
            failures.push((ctx_name.clone(), Failure { code: f.code, message: f.message.clone() }));
            continue;
        }
        results.extend(rows.into_iter().map(|r| r.as_ref().expect("checked").clone()));
    }

    let out = config.out_dir();
    prepare_dir(&out)?;
    io::save_results(&results, out.join("results.csv"))?;
    let ranks = if results.is_empty() {
        BTreeMap::new()
    } else {
        mean_rank(&results)?
    };
    io::save_mean_ranks(&ranks, out.join("mean_rank.csv"))?;
    let done: Vec<String> = names
        .iter()
        .filter(|n| !failures.iter().any(|(f, _)| f == *n))
        .cloned()
        .collect();
    write(&out.join("heatmap.txt"), &heatmap(&done, &methods, &results, &ranks))?;
    let manifest = json!({
        "command": "benchmark",
        "contexts": names,
        "datasets": args.data,
        "golds": args.gold,
        "failed": failures.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
        "config": config,
        "files": ["results.csv", "mean_rank.csv", "heatmap.txt"],
    });
    write(&out.join("manifest.json"), &json_text(&manifest))?;
    print!("{}", heatmap(&done, &methods, &results, &ranks));

    if failures.is_empty() {
        return Ok(());
    }
    for (name, f) in &failures {
        eprintln!("context {name} failed: {}", f.message);
    }
    Err(Failure {
        code: failures.iter().map(|(_, f)| f.code).max().unwrap_or(3),
        message: format!("{} of {} contexts failed", failures.len(), names.len()),
    })
}

pub fn enumerate(args: EnumerateArgs) -> Result<(), Failure> {
    let config = with_common(&args.common)?;
    let score = args.score.unwrap_or(config.score());
    let data = io::load_dataset(&args.data)?;
    let mut scorer = Scorer::new(&data, score.kind()).with_max_parents(config.max_parents());
    let best = exhaustive_best(&mut scorer, DEFAULT_MAX_EXHAUSTIVE_NODES)?;
    let out = config.out_dir();
    prepare_dir(&out)?;
    io::save_network(&best.dag, out.join("network.txt"))?;
    let manifest = json!({
        "command": "enumerate",
        "dataset": args.data,
        "score_kind": score,
        "max_parents": config.max_parents(),
        "score": best.score,
        "edges": best.dag.edge_count(),
        "visited": best.visited,
    });
    write(&out.join("manifest.json"), &json_text(&manifest))?;
    println!("score {:.6}", best.score);
    println!("edges {}", best.dag.edge_count());
    Ok(())
}
