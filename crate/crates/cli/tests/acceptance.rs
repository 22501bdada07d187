//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any failed.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use bnsl::dag::{random_dag, Genome};
use bnsl::evaluation::{auroc, auroc_scores, evaluate_context, mean_rank, ContextResult, GoldStandard};
use bnsl::ga::{crossover, evolve, mutate, ConflictPolicy, GaConfig, Individual};
use bnsl::rng::{derive_seed, rng_from_seed};
use bnsl::scoring::{network_score, node_score, LinearGaussianFit};
use bnsl::search::{
    exhaustive_best, hill_climb, neighborhood, tabu_search, HcConfig, SearchOutcome, TabuConfig,
};
use bnsl::simulate::{generate_insilico_like, simulate_linear_gaussian, GroundTruth};
use bnsl::{Dag, Dataset, ScoreKind, Scorer};
use nalgebra::{DMatrix, DVector};
use rand::seq::IndexedRandom;
use rand::Rng;

const GOLDEN_INSILICO_AUROC: &str = include_str!("golden/insilico_seed1_hc_bic_auroc.txt");

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Verdict {
            passed,
            detail: detail.into(),
        }
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

// ---------------------------------------------------------------- 1 and 9

struct SmallRuns {
    hc: Vec<SearchOutcome>,
    ts: Vec<SearchOutcome>,
}

fn small_dataset(i: u64) -> Dataset {
    let n = if i < 10 { 3 } else { 4 };
    let seed = derive_seed(1000, i);
    let dag = random_dag(n, 0.6, seed);
    let truth = GroundTruth::random(dag, derive_seed(seed, 1));
    simulate_linear_gaussian(&truth, 500, derive_seed(seed, 2)).unwrap()
}

fn oracle_equivalence() -> (Verdict, SmallRuns) {
    let started = Instant::now();
    let (mut hc_hits, mut ts_hits, mut ga_hits) = (0, 0, 0);
    let mut runs = SmallRuns {
        hc: Vec::new(),
        ts: Vec::new(),
    };
    let bic = ScoreKind::Bic;
    for i in 0..20u64 {
        let data = small_dataset(i);
        let oracle = exhaustive_best(&mut Scorer::new(&data, bic), 5).unwrap();
        let target = network_score(&data, &oracle.dag, bic).unwrap();
        let rescore = |dag: &Dag| network_score(&data, dag, bic).unwrap();

        let hc = hill_climb(
            &mut Scorer::new(&data, bic),
            &HcConfig {
                restarts: 10,
                seed: i,
                ..HcConfig::default()
            },
        )
        .unwrap();
        let ts = tabu_search(
            &mut Scorer::new(&data, bic),
            &TabuConfig {
                seed: i,
                ..TabuConfig::default()
            },
        )
        .unwrap();
        let ga = evolve(
            &mut Scorer::new(&data, bic),
            &GaConfig {
                population_size: 100,
                generations: 100,
                seed: i,
                ..GaConfig::default()
            },
        )
        .unwrap();
        hc_hits += usize::from(rescore(&hc.best) == target);
        ts_hits += usize::from(rescore(&ts.best) == target);
        ga_hits += usize::from(rescore(&ga.best) == target);
        runs.hc.push(hc);
        runs.ts.push(ts);
    }
    let elapsed = started.elapsed();
    let passed = hc_hits >= 18 && ts_hits >= 18 && ga_hits >= 16 && within(elapsed, 120);
    (
        Verdict::new(
            passed,
            format!(
                "exact BIC optimum on 20 datasets: hc {hc_hits}/20 (>=18), ts {ts_hits}/20 (>=18), ga {ga_hits}/20 (>=16), {:.1}s (<=120s)",
                elapsed.as_secs_f64()
            ),
        ),
        runs,
    )
}

fn search_contracts(runs: &SmallRuns) -> Verdict {
    let tenure = TabuConfig::default().tenure;
    let mut problems = Vec::new();
    let mut hc_steps = 0;
    let mut ts_steps = 0;
    for (d, out) in runs.hc.iter().enumerate() {
        let restarts: BTreeSet<usize> = out.trace.steps.iter().map(|s| s.restart).collect();
        for r in restarts {
            let steps: Vec<_> = out.trace.restart(r).collect();
            hc_steps += steps.len();
            if steps.windows(2).any(|w| w[1].score <= w[0].score) {
                problems.push(format!("hc dataset {d} restart {r}: score not strictly increasing"));
            }
        }
    }
    for (d, out) in runs.ts.iter().enumerate() {
        let restarts: BTreeSet<usize> = out.trace.steps.iter().map(|s| s.restart).collect();
        for r in restarts {
            let steps: Vec<_> = out.trace.restart(r).collect();
            ts_steps += steps.len();
            if steps.windows(2).any(|w| w[1].best_score < w[0].best_score) {
                problems.push(format!("ts dataset {d} restart {r}: best-so-far decreased"));
            }
            for (j, step) in steps.iter().enumerate() {
                let Some(mv) = step.mv else { continue };
                let tabu = steps[..j].iter().any(|earlier| {
                    earlier.mv.is_some_and(|m| m.inverse() == mv)
                        && step.iteration - earlier.iteration <= tenure
                });
                if tabu && !(step.aspiration && step.score > steps[j - 1].best_score) {
                    problems.push(format!(
                        "ts dataset {d} restart {r} iteration {}: tabu move {mv} without aspiration",
                        step.iteration
                    ));
                }
            }
        }
    }
    Verdict::new(
        problems.is_empty(),
        format!(
            "{hc_steps} hc and {ts_steps} ts trace steps checked, {} violations{}",
            problems.len(),
            problems.first().map(|p| format!(" (first: {p})")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------------- 2

fn kahn_acyclic(genome: &Genome) -> bool {
    let n = genome.n();
    let mut indegree = vec![0usize; n];
    for i in 0..genome.len() {
        if genome.get(i) {
            indegree[i % n] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = ready.pop() {
        seen += 1;
        for w in 0..n {
            if genome.get(v * n + w) {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(w);
                }
            }
        }
    }
    seen == n
}

fn index_matches_genome(ind: &Individual) -> bool {
    let genome = ind.genome();
    let n = genome.n();
    (0..n).all(|v| {
        let succ: Vec<usize> = (0..n).filter(|&w| genome.get(v * n + w)).collect();
        let pred: Vec<usize> = (0..n).filter(|&u| genome.get(u * n + v)).collect();
        ind.index().successors(v) == succ.as_slice() && ind.index().predecessors(v) == pred.as_slice()
    })
}

fn operator_acyclicity() -> Verdict {
    let started = Instant::now();
    let mut applications = 0u64;
    let mut cycle_failures = 0u64;
    let mut index_mismatches = 0u64;
    for (k, n) in [5usize, 10, 15].into_iter().enumerate() {
        let mut rng = rng_from_seed(derive_seed(77, k as u64));
        let mut pool: Vec<Individual> = (0..24)
            .map(|i| Individual::from_dag(&random_dag(n, 3.0 / n as f64, derive_seed(n as u64, i))))
            .collect();
        for step in 0..12_000usize {
            let a = rng.random_range(0..pool.len());
            let b = rng.random_range(0..pool.len());
            let policy = if step % 2 == 0 {
                ConflictPolicy::Crossed
            } else {
                ConflictPolicy::Inherited
            };
            let limit = if step % 3 == 0 { 3 } else { usize::MAX };
            let (mut c1, mut c2) = crossover(&pool[a], &pool[b], policy, limit, &mut rng);
            let p_m = rng.random_range(0.0..0.1);
            mutate(&mut c1, p_m, limit, &mut rng);
            mutate(&mut c2, p_m, limit, &mut rng);
            applications += 3;
            for child in [&c1, &c2] {
                cycle_failures += u64::from(!kahn_acyclic(child.genome()));
                index_mismatches += u64::from(!index_matches_genome(child) || !child.index_consistent());
            }
            pool[a] = c1;
            pool[b] = c2;
        }
    }
    let elapsed = started.elapsed();
    Verdict::new(
        applications >= 100_000 && cycle_failures == 0 && index_mismatches == 0 && within(elapsed, 60),
        format!(
            "{applications} operator applications on n in {{5,10,15}}: {cycle_failures} cycles, {index_mismatches} index mismatches, {:.1}s (<=60s)",
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------------- 3

fn density_loglik(data: &Dataset, node: usize, parents: &[usize]) -> f64 {
    let n = data.n_obs();
    let design = DMatrix::from_fn(n, parents.len() + 1, |r, c| {
        if c == 0 {
            1.0
        } else {
            data.column(parents[c - 1])[r]
        }
    });
    let y = DVector::from_column_slice(data.column(node));
    let beta = design.clone().svd(true, true).solve(&y, 1e-14).unwrap();
    let residuals = &y - &design * &beta;
    let var = residuals.norm_squared() / n as f64;
    residuals
        .iter()
        .map(|e| -0.5 * (2.0 * PI * var).ln() - e * e / (2.0 * var))
        .sum()
}

fn score_correctness() -> Verdict {
    let fixture = Dataset::relaxed(vec!["x".into()], vec![vec![-1.0, 1.0]]).unwrap();
    let ll = node_score(&fixture, 0, &[], ScoreKind::LogLik).unwrap();
    let fixture_ok = (ll - -2.83788).abs() <= 1e-5;

    let dag = random_dag(7, 0.4, 5);
    let truth = GroundTruth::random(dag, 6);
    let data = simulate_linear_gaussian(&truth, 250, 7).unwrap();
    let mut rng = rng_from_seed(8);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let node = rng.random_range(0..7);
        let others: Vec<usize> = (0..7).filter(|&v| v != node).collect();
        let k = rng.random_range(0..=4);
        let mut parents: Vec<usize> = others.choose_multiple(&mut rng, k).copied().collect();
        parents.sort_unstable();
        let ll = density_loglik(&data, node, &parents);
        let k = (parents.len() + 2) as f64;
        let n = data.n_obs() as f64;
        for (kind, want) in [
            (ScoreKind::LogLik, ll),
            (ScoreKind::Aic, ll - k),
            (ScoreKind::Bic, ll - k / 2.0 * n.ln()),
        ] {
            let got = node_score(&data, node, &parents, kind).unwrap();
            worst = worst.max((got - want).abs());
        }
    }
    Verdict::new(
        fixture_ok && worst <= 1e-9,
        format!("fixture loglik {ll:.6} (want -2.83788 +- 1e-5); 100 draws x 3 scores, max |error| {worst:.2e} (<=1e-9)"),
    )
}

// ---------------------------------------------------------------------- 4

fn delta_fidelity() -> Verdict {
    let truth = GroundTruth::random(random_dag(8, 0.4, 40), 41);
    let data = simulate_linear_gaussian(&truth, 300, 42).unwrap();
    let mut rng = rng_from_seed(43);
    let mut scorers: Vec<Scorer> = ScoreKind::ALL.iter().map(|&k| Scorer::new(&data, k)).collect();
    let mut worst = 0.0f64;
    let mut moves = 0;
    while moves < 1000 {
        let p = rng.random_range(0.05..0.6);
        let dag = random_dag(8, p, rng.random());
        let candidates = neighborhood(&dag);
        let Some(&mv) = candidates.choose(&mut rng) else {
            continue;
        };
        let mut after = dag.clone();
        mv.apply(&mut after).unwrap();
        for scorer in scorers.iter_mut() {
            let kind = scorer.kind();
            let full = network_score(&data, &after, kind).unwrap() - network_score(&data, &dag, kind).unwrap();
            let delta = scorer.delta_score(&dag, mv).unwrap();
            worst = worst.max((delta - full).abs());
        }
        moves += 1;
    }
    Verdict::new(
        worst <= 1e-9,
        format!("{moves} random moves on 8-node graphs x 3 scores, max |delta - rescore| {worst:.2e} (<=1e-9)"),
    )
}

// ---------------------------------------------------------------------- 5

fn v_structures(dag: &Dag) -> BTreeSet<(usize, usize, usize)> {
    let mut out = BTreeSet::new();
    for c in 0..dag.n() {
        let parents = dag.parents(c);
        for (i, &a) in parents.iter().enumerate() {
            for &b in &parents[i + 1..] {
                if !dag.has_edge(a, b) && !dag.has_edge(b, a) {
                    out.insert((a.min(b), a.max(b), c));
                }
            }
        }
    }
    out
}

fn skeleton(dag: &Dag) -> BTreeSet<(usize, usize)> {
    dag.edges().into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect()
}

fn structure_recovery() -> Verdict {
    let chain = Dag::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
    let params = (0..5)
        .map(|v| {
            let parents = chain.parents(v).to_vec();
            LinearGaussianFit {
                coefficients: vec![0.8; parents.len()],
                parents,
                intercept: 0.0,
                residual_variance: 1.0,
            }
        })
        .collect();
    let truth = GroundTruth::new(chain.clone(), params, vec![1.0; 5]).unwrap();
    let mut recovered = 0;
    let mut bit_equal = 0;
    for seed in 0..20u64 {
        let data = simulate_linear_gaussian(&truth, 5000, derive_seed(500, seed)).unwrap();
        let out = hill_climb(
            &mut Scorer::new(&data, ScoreKind::Bic),
            &HcConfig {
                seed,
                ..HcConfig::default()
            },
        )
        .unwrap();
        let learned = network_score(&data, &out.best, ScoreKind::Bic).unwrap();
        let true_score = network_score(&data, &chain, ScoreKind::Bic).unwrap();
        let same_class = skeleton(&out.best) == skeleton(&chain) && v_structures(&out.best) == v_structures(&chain);
        let same_score = (learned - true_score).abs() <= 1e-9 * true_score.abs();
        recovered += usize::from(same_class && same_score);
        bit_equal += usize::from(learned == true_score);
    }
    Verdict::new(
        recovered >= 18,
        format!(
            "5-node chain, N=5000: equivalence class and score recovered in {recovered}/20 seeds (>=18); bit-identical score in {bit_equal}/20"
        ),
    )
}

// ---------------------------------------------------------------------- 6

fn insilico_pipeline() -> Verdict {
    let started = Instant::now();
    let sim = generate_insilico_like(1).unwrap();
    let shape_ok = sim.data.n_obs() == 480 && sim.data.n_vars() == 20;
    let out = hill_climb(
        &mut Scorer::new(&sim.data, ScoreKind::Bic),
        &HcConfig {
            restarts: 10,
            seed: 1,
            ..HcConfig::default()
        },
    )
    .unwrap();
    let result = evaluate_context(&out.ensemble, &sim.gold, "insilico", "hc+bic").unwrap();
    let golden: f64 = GOLDEN_INSILICO_AUROC.trim().parse().unwrap();
    let elapsed = started.elapsed();
    let passed = shape_ok
        && out.ensemble.len() == 10
        && result.auroc >= 0.6
        && result.auroc > 0.5
        && result.auroc == golden
        && within(elapsed, 300);
    Verdict::new(
        passed,
        format!(
            "{}x{} dataset, 10-restart hc+bic ensemble AUROC {:.6} (>=0.6, >0.5, golden {golden:.6}), {:.1}s (<=300s)",
            sim.data.n_obs(),
            sim.data.n_vars(),
            result.auroc,
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------------- 7

fn pairwise_auroc(scores: &[f64], positive: &[bool]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for (i, &pi) in positive.iter().enumerate() {
        for (j, &pj) in positive.iter().enumerate() {
            if pi && !pj {
                pairs += 1.0;
                wins += if scores[i] > scores[j] {
                    1.0
                } else if scores[i] == scores[j] {
                    0.5
                } else {
                    0.0
                };
            }
        }
    }
    wins / pairs
}

fn evaluation_math() -> Verdict {
    let gold = GoldStandard::new(
        "X",
        ["A", "B", "C", "D"]
            .iter()
            .enumerate()
            .map(|(i, l)| (l.to_string(), i < 2))
            .collect(),
    )
    .unwrap();
    let mut binary_ok = true;
    for (predicted, want) in [(&["C", "D"][..], 0.0), (&["A", "C"][..], 0.5), (&["A", "B"][..], 1.0)] {
        let conf: BTreeMap<String, f64> = gold
            .labels
            .keys()
            .map(|l| (l.clone(), if predicted.contains(&l.as_str()) { 1.0 } else { 0.0 }))
            .collect();
        let tpr = predicted.iter().filter(|l| gold.labels[**l]).count() as f64 / 2.0;
        let fpr = predicted.iter().filter(|l| !gold.labels[**l]).count() as f64 / 2.0;
        let formula = 0.5 * (1.0 + tpr - fpr);
        let got = auroc(&conf, &gold).unwrap();
        binary_ok &= got == want && formula == want;
    }

    let mut rng = rng_from_seed(70);
    let mut worst = 0.0f64;
    let mut vectors = 0;
    while vectors < 100 {
        let n = rng.random_range(2..40);
        let positive: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        if positive.iter().all(|&b| b) || positive.iter().all(|&b| !b) {
            continue;
        }
        let scores: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0..8u8)) / 7.0).collect();
        let got = auroc_scores(&scores, &positive).unwrap();
        worst = worst.max((got - pairwise_auroc(&scores, &positive)).abs());
        vectors += 1;
    }

    // Context counts that are powers of two keep the rank averages exact in
    // binary, so the identity can be checked with `==`.
    let methods = 9;
    let mut identity_ok = true;
    let mut means = Vec::new();
    for contexts in [1, 2, 4, 8] {
        let mut results = Vec::new();
        for context in 0..contexts {
            let mut values: Vec<f64> = (0..methods).map(|m| (m as f64 + 1.0) / 10.0).collect();
            for i in (1..values.len()).rev() {
                values.swap(i, rng.random_range(0..=i));
            }
            for (m, v) in values.into_iter().enumerate() {
                results.push(ContextResult {
                    context: format!("c{context}"),
                    method: format!("m{m}"),
                    auroc: v,
                });
            }
        }
        let ranks = mean_rank(&results).unwrap();
        let mean = ranks.values().sum::<f64>() / ranks.len() as f64;
        identity_ok &= mean == (methods as f64 + 1.0) / 2.0;
        means.push(mean);
    }
    Verdict::new(
        binary_ok && worst <= 1e-12 && identity_ok,
        format!(
            "binary cases exact: {binary_ok}; midrank vs pairwise on {vectors} vectors max |error| {worst:.1e} (<=1e-12); mean of {methods} mean ranks over 1/2/4/8 contexts {means:?} (want 5)"
        ),
    )
}

// ---------------------------------------------------------------------- 8

fn run_bnsl(cwd: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bnsl"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("bnsl runs")
}

/// Every file below `dir` except the wall-time record.
fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().is_some_and(|n| n != "timing.json") {
                files.insert(path.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    files
}

struct Twice {
    name: String,
    identical: bool,
    succeeded: bool,
    files: usize,
}

/// Runs a command twice into a fresh `out` directory and compares all
/// output files and standard output byte for byte.
fn twice(root: &Path, name: &str, args: &[&str], out: &str) -> Twice {
    let out_dir = root.join(out);
    let mut runs = Vec::new();
    for _ in 0..2 {
        let _ = fs::remove_dir_all(&out_dir);
        let output = run_bnsl(root, args);
        let files = if out_dir.exists() { snapshot(&out_dir) } else { BTreeMap::new() };
        runs.push((output, files));
    }
    let (a, b) = (&runs[0], &runs[1]);
    Twice {
        name: name.to_string(),
        identical: a.0.stdout == b.0.stdout && a.1 == b.1,
        succeeded: a.0.status.success() && b.0.status.success(),
        files: a.1.len(),
    }
}

fn cli_determinism() -> Verdict {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    let mut checks = vec![
        twice(root, "simulate", &["simulate", "--seed", "1", "--out-dir", "ctx1"], "ctx1"),
        twice(root, "simulate", &["simulate", "--seed", "2", "--out-dir", "ctx2"], "ctx2"),
    ];
    for method in ["hc", "tabu", "ga"] {
        let out = format!("infer_{method}");
        checks.push(twice(
            root,
            &format!("infer {method}"),
            &["infer", "ctx1/data.csv", "--method", method, "--score", "bic", "--seed", "7", "--out-dir", &out],
            &out,
        ));
    }
    checks.push(twice(
        root,
        "score",
        &["score", "ctx1/data.csv", "infer_hc/network.txt", "--score", "aic"],
        "none",
    ));
    checks.push(twice(
        root,
        "evaluate",
        &[
            "evaluate",
            "infer_hc/ensemble/net_000.txt",
            "infer_hc/ensemble/net_001.txt",
            "--gold",
            "ctx1/gold.txt",
            "--out-dir",
            "eval",
        ],
        "eval",
    ));
    let small = generate_insilico_like(3).unwrap();
    let cols: Vec<Vec<f64>> = (0..4).map(|v| small.data.column(v).to_vec()).collect();
    let four = Dataset::new(small.data.labels()[..4].to_vec(), cols).unwrap();
    bnsl::io::save_dataset(&four, root.join("four.csv")).unwrap();
    checks.push(twice(
        root,
        "enumerate",
        &["enumerate", "four.csv", "--score", "bic", "--out-dir", "enum"],
        "enum",
    ));
    checks.push(twice(
        root,
        "benchmark",
        &[
            "benchmark",
            "--data",
            "ctx1/data.csv",
            "ctx2/data.csv",
            "--gold",
            "ctx1/gold.txt",
            "ctx2/gold.txt",
            "--seed",
            "3",
            "--out-dir",
            "bench",
        ],
        "bench",
    ));
    let results = fs::read_to_string(root.join("bench/results.csv")).unwrap_or_default();
    let ranks = fs::read_to_string(root.join("bench/mean_rank.csv")).unwrap_or_default();
    let grid_ok = results.lines().count() == 1 + 18 && ranks.lines().count() == 1 + 9;

    let bad: Vec<&str> = checks
        .iter()
        .filter(|c| !(c.identical && c.succeeded))
        .map(|c| c.name.as_str())
        .collect();
    let files: usize = checks.iter().map(|c| c.files).sum();
    Verdict::new(
        bad.is_empty() && grid_ok,
        format!(
            "{} commands run twice, {files} output files compared; benchmark grid 18 rows / 9 ranks: {grid_ok}; differing or failing: {}",
            checks.len(),
            if bad.is_empty() { "none".to_string() } else { bad.join(", ") }
        ),
    )
}

// ------------------------------------------------------------------- main

fn guarded(f: impl FnOnce() -> Verdict) -> Verdict {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(v) => v,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Verdict::new(false, format!("panicked: {msg}"))
        }
    }
}

fn main() {
    let mut small_runs = None;
    let mut verdicts: Vec<(u8, &str, Verdict)> = Vec::new();
    let c1 = guarded(|| {
        let (v, runs) = oracle_equivalence();
        small_runs = Some(runs);
        v
    });
    verdicts.push((1, "oracle equivalence, small n", c1));
    verdicts.push((2, "acyclicity under evolutionary operators", guarded(operator_acyclicity)));
    verdicts.push((3, "score correctness", guarded(score_correctness)));
    verdicts.push((4, "delta-scoring fidelity", guarded(delta_fidelity)));
    verdicts.push((5, "structure recovery", guarded(structure_recovery)));
    verdicts.push((6, "synthetic in-silico pipeline", guarded(insilico_pipeline)));
    verdicts.push((7, "evaluation math", guarded(evaluation_math)));
    verdicts.push((8, "CLI determinism", guarded(cli_determinism)));
    let c9 = match &small_runs {
        Some(runs) => guarded(|| search_contracts(runs)),
        None => Verdict::new(false, "no traces: criterion 1 did not complete"),
    };
    verdicts.push((9, "HC/TS trace contracts", c9));

    let mut failed = 0;
    for (id, name, v) in &verdicts {
        let tag = if v.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!v.passed);
        println!("{tag} criterion {id} ({name}): {}", v.detail);
    }
    println!("{} of {} acceptance criteria passed", verdicts.len() - failed, verdicts.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
