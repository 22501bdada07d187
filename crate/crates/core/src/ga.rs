//! Genetic algorithm over `n²`-bit genomes.
//!
//! Individuals carry forward/backward lists next to their genome. Crossover
//! and mutation consult those lists before setting any bit, so every child
//! they produce is acyclic and no individual is ever rejected.

use rand::Rng as _;

use crate::dag::{decode, Dag, Genome, NodeId, ReachabilityIndex};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed, Rng};
use crate::scoring::Scorer;
use crate::search::{default_edge_prob, starting_graph, Init, SearchOutcome, SearchTrace, TraceStep};

/// How crossover resolves loci past the cut point where the parents differ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConflictPolicy {
    /// Where `p2` has 0 (and `p1` has 1), `child1` gets 0 and `child2`
    /// tries 1; symmetrically where `p1` has 0.
    #[default]
    Crossed,
    /// Each child tries the bit of its own parent: where `p1` has 1,
    /// `child1` tries 1 and `child2` gets 0; symmetrically where `p2` has 1.
    Inherited,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    /// Per-locus mutation probability; `None` means `1/n²`.
    pub mutation_prob: Option<f64>,
    pub elitism_count: usize,
    pub conflict_policy: ConflictPolicy,
    /// Number of distinct top individuals of the final population kept as
    /// the outcome's ensemble.
    pub ensemble_size: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 100,
            generations: 100,
            tournament_size: 3,
            crossover_rate: 0.9,
            mutation_prob: None,
            elitism_count: 2,
            conflict_policy: ConflictPolicy::Crossed,
            ensemble_size: 10,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        if self.population_size < 2 {
            return bad("population_size must be at least 2");
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return bad("tournament_size must lie in [1, population_size]");
        }
        if self.elitism_count >= self.population_size {
            return bad("elitism_count must be smaller than population_size");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad("crossover_rate must lie in [0, 1]");
        }
        if let Some(p) = self.mutation_prob {
            if !(0.0..=1.0).contains(&p) {
                return bad("mutation_prob must lie in [0, 1]");
            }
        }
        Ok(())
    }
}

/// A population member.
#[derive(Clone, Debug)]
pub struct Individual {
    genome: Genome,
    index: ReachabilityIndex,
    fitness: f64,
    fitness_valid: bool,
}

impl Individual {
    pub fn empty(n: usize) -> Self {
        Individual {
            genome: Genome::zeros(n),
            index: ReachabilityIndex::new(n),
            fitness: f64::NEG_INFINITY,
            fitness_valid: false,
        }
    }

    pub fn from_dag(dag: &Dag) -> Self {
        Individual {
            genome: crate::dag::encode(dag),
            index: dag.index().clone(),
            fitness: f64::NEG_INFINITY,
            fitness_valid: false,
        }
    }

    pub fn from_genome(genome: &Genome) -> Result<Self> {
        Ok(Individual::from_dag(&decode(genome)?))
    }

    pub fn n(&self) -> usize {
        self.genome.n()
    }

    pub fn genome(&self) -> &Genome {
        &self.genome
    }

    pub fn index(&self) -> &ReachabilityIndex {
        &self.index
    }

    /// Fitness, if it has been evaluated since the last change.
    pub fn fitness(&self) -> Option<f64> {
        self.fitness_valid.then_some(self.fitness)
    }

    fn ranking_fitness(&self) -> f64 {
        if self.fitness_valid {
            self.fitness
        } else {
            f64::NEG_INFINITY
        }
    }

    pub fn set_fitness(&mut self, fitness: f64) {
        self.fitness = fitness;
        self.fitness_valid = true;
    }

    pub fn to_dag(&self) -> Result<Dag> {
        decode(&self.genome)
    }

    /// Whether `locus` can be switched on: not a self-loop, no cycle, and
    /// the destination stays within `parent_limit` parents.
    pub fn can_set(&self, locus: usize, parent_limit: usize) -> bool {
        let (from, to) = self.genome.edge_of(locus);
        from != to
            && !self.genome.get(locus)
            && self.index.predecessors(to).len() < parent_limit
            && !self
                .index
                .would_create_cycle(from, to)
                .expect("locus within range and not a self-loop")
    }

    /// Sets `locus` if feasible. Returns whether the bit is now set by this
    /// call.
    fn try_set(&mut self, locus: usize, parent_limit: usize) -> bool {
        if !self.can_set(locus, parent_limit) {
            return false;
        }
        let (from, to) = self.genome.edge_of(locus);
        self.genome.set(locus, true);
        self.index.insert(from, to);
        self.fitness_valid = false;
        true
    }

    fn clear(&mut self, locus: usize) {
        let (from, to) = self.genome.edge_of(locus);
        self.genome.set(locus, false);
        self.index.remove(from, to);
        self.fitness_valid = false;
    }

    /// Whether the lists match a rebuild from the genome.
    pub fn index_consistent(&self) -> bool {
        self.index == ReachabilityIndex::from_adjacency(self.n(), self.genome.bits())
    }

    fn parents(&self, node: NodeId) -> &[NodeId] {
        self.index.predecessors(node)
    }
}

/// Draws `tournament_size` members uniformly with replacement and returns
/// the position of the fittest; ties go to the lowest position.
pub fn tournament_select(population: &[Individual], tournament_size: usize, rng: &mut Rng) -> usize {
    assert!(!population.is_empty(), "tournament on an empty population");
    let mut winner: Option<usize> = None;
    for _ in 0..tournament_size.max(1) {
        let pick = rng.random_range(0..population.len());
        winner = Some(match winner {
            None => pick,
            Some(w) => {
                let (fw, fp) = (population[w].ranking_fitness(), population[pick].ranking_fitness());
                if fp > fw || (fp == fw && pick < w) {
                    pick
                } else {
                    w
                }
            }
        });
    }
    winner.expect("at least one draw")
}

/// Single-point crossover with a uniformly drawn cut in `[1, n² - 1]`.
pub fn crossover(
    p1: &Individual,
    p2: &Individual,
    policy: ConflictPolicy,
    parent_limit: usize,
    rng: &mut Rng,
) -> (Individual, Individual) {
    let len = p1.genome.len();
    if len < 2 {
        return (p1.clone(), p2.clone());
    }
    let cut = rng.random_range(1..len);
    crossover_at(p1, p2, cut, policy, parent_limit)
}

/// Crossover at a fixed cut point.
///
/// Loci before `cut` are copied (`child1 ← p1`, `child2 ← p2`). From `cut`
/// on, loci are decided in ascending order; agreeing loci are copied and
/// differing loci follow `policy`. A 1-bit is only written when the child's
/// lists, as built so far, admit the edge; otherwise the locus stays 0.
pub fn crossover_at(
    p1: &Individual,
    p2: &Individual,
    cut: usize,
    policy: ConflictPolicy,
    parent_limit: usize,
) -> (Individual, Individual) {
    assert_eq!(p1.n(), p2.n(), "parents differ in node count");
    let n = p1.n();
    let mut c1 = Individual::empty(n);
    let mut c2 = Individual::empty(n);
    for locus in 0..p1.genome.len() {
        let (a, b) = (p1.genome.get(locus), p2.genome.get(locus));
        if locus < cut || a == b {
            if a {
                c1.try_set(locus, parent_limit);
            }
            if b {
                c2.try_set(locus, parent_limit);
            }
            continue;
        }
        // a != b
        let c1_tries = match policy {
            ConflictPolicy::Crossed => !a,
            ConflictPolicy::Inherited => a,
        };
        if c1_tries {
            c1.try_set(locus, parent_limit);
        } else {
            c2.try_set(locus, parent_limit);
        }
    }
    (c1, c2)
}

/// Visits every locus in ascending order and selects it with probability
/// `mutation_prob`. A selected 1-bit is cleared; a selected 0-bit is set
/// only if the edge is feasible at that moment. Returns whether anything
/// changed.
pub fn mutate(ind: &mut Individual, mutation_prob: f64, parent_limit: usize, rng: &mut Rng) -> bool {
    let mut changed = false;
    for locus in 0..ind.genome.len() {
        let r: f64 = rng.random();
        if r >= mutation_prob {
            continue;
        }
        if ind.genome.get(locus) {
            ind.clear(locus);
            changed = true;
        } else if ind.try_set(locus, parent_limit) {
            changed = true;
        }
    }
    changed
}

/// Sum of node scores in node order, identical to
/// [`Scorer::network_score`] on the decoded graph.
fn evaluate(scorer: &mut Scorer<'_>, ind: &mut Individual) -> Result<()> {
    let mut total = 0.0;
    for node in 0..ind.n() {
        total += scorer.node_score(node, ind.parents(node))?;
    }
    ind.set_fitness(total);
    Ok(())
}

/// Positions sorted by fitness, best first, ties by position.
fn ranking(population: &[Individual]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&a, &b| {
        population[b]
            .ranking_fitness()
            .total_cmp(&population[a].ranking_fitness())
            .then(a.cmp(&b))
    });
    order
}

/// Generational loop: random initial population (edge probability `2/n`),
/// elitism, tournament selection, crossover with probability
/// `crossover_rate` (clones otherwise), mutation of every child. Returns the
/// best individual ever evaluated.
pub fn evolve(scorer: &mut Scorer<'_>, config: &GaConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let template = scorer.data().empty_dag();
    let n = template.n();
    let limit = scorer.parent_limit();
    let mutation_prob = config
        .mutation_prob
        .unwrap_or(if n == 0 { 0.0 } else { 1.0 / (n * n) as f64 });
    let init = Init::Random {
        edge_prob: default_edge_prob(n),
    };
    let mut rng = rng_from_seed(derive_seed(config.seed, u64::MAX));

    let mut population: Vec<Individual> = (0..config.population_size)
        .map(|k| Individual::from_dag(&starting_graph(&template, init, None, config.seed, k, limit)))
        .collect();
    let mut trace = SearchTrace::default();
    for ind in population.iter_mut() {
        evaluate(scorer, ind)?;
        trace.evaluations += 1;
    }
    let mut best = population[ranking(&population)[0]].clone();
    let record = |trace: &mut SearchTrace, generation: usize, gen_best: f64, best: f64| {
        trace.steps.push(TraceStep {
            restart: 0,
            iteration: generation,
            mv: None,
            score: gen_best,
            best_score: best,
            aspiration: false,
        });
    };
    record(&mut trace, 0, best.fitness, best.fitness);

    for generation in 1..=config.generations {
        let order = ranking(&population);
        let mut next: Vec<Individual> = order[..config.elitism_count]
            .iter()
            .map(|&i| population[i].clone())
            .collect();
        while next.len() < config.population_size {
            let a = tournament_select(&population, config.tournament_size, &mut rng);
            let b = tournament_select(&population, config.tournament_size, &mut rng);
            let (mut c1, mut c2) = if rng.random::<f64>() < config.crossover_rate {
                crossover(
                    &population[a],
                    &population[b],
                    config.conflict_policy,
                    limit,
                    &mut rng,
                )
            } else {
                (population[a].clone(), population[b].clone())
            };
            mutate(&mut c1, mutation_prob, limit, &mut rng);
            mutate(&mut c2, mutation_prob, limit, &mut rng);
            next.push(c1);
            if next.len() < config.population_size {
                next.push(c2);
            }
        }
        for ind in next.iter_mut().filter(|i| !i.fitness_valid) {
            evaluate(scorer, ind)?;
            trace.evaluations += 1;
        }
        population = next;
        let top = &population[ranking(&population)[0]];
        if top.fitness > best.fitness {
            best = top.clone();
        }
        record(&mut trace, generation, top.fitness, best.fitness);
    }

    let labels = scorer.data().shared_labels();
    let mut ensemble: Vec<Dag> = Vec::new();
    let mut seen: Vec<&Genome> = Vec::new();
    for &i in &ranking(&population) {
        if ensemble.len() >= config.ensemble_size {
            break;
        }
        let genome = &population[i].genome;
        if !seen.contains(&genome) {
            seen.push(genome);
            ensemble.push(population[i].to_dag()?.relabel(labels.clone())?);
        }
    }
    trace.best_score = best.fitness;
    Ok(SearchOutcome {
        best: best.to_dag()?.relabel(labels)?,
        best_score: best.fitness,
        trace,
        ensemble,
    })
}
