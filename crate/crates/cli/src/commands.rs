//! Subcommand implementations. Each returns the text printed to stdout.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use ffalab_core::batch;
use ffalab_core::maxsat::{brute_force_model, random_ksat};
use ffalab_core::rng::RNG_NAME;
use ffalab_core::solvers::{
    run_jssp_ffa_ma, run_jssp_ma, run_opo_ea_gt0, run_opo_fea_gt0, run_opo_fea_gt0_observed, Algorithm, RunConfig,
    RunOutcome, RunTrace, Solution,
};
use ffalab_core::stats::{ecdf_over_ert, ert, CellSummary};
use ffalab_core::{Objective, RngState, TieRule, Transform};
use serde::Deserialize;

use crate::error::CliError;
use crate::log::{parse_log, write_log, LogHeader};
use crate::spec::{parse_transform, Bks, Loaded, ProblemSpec};

/// One fully resolved run.
#[derive(Debug, Clone)]
pub struct RunJob {
    pub problem: ProblemSpec,
    pub transform: String,
    pub config: RunConfig,
}

impl RunJob {
    pub fn header(&self) -> LogHeader {
        LogHeader {
            algo: self.config.algorithm,
            problem: self.problem.to_string(),
            transform: self.transform.clone(),
            seed: self.config.seed,
            budget: self.config.budget,
            rng: RNG_NAME.to_string(),
            tie: self.config.tie,
        }
    }

    /// `<algo>_<problem>_<transform>` with path-hostile characters replaced.
    pub fn cell_dir(&self) -> String {
        sanitize(&format!(
            "{}_{}_{}",
            self.config.algorithm, self.problem, self.transform
        ))
    }
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Runs one configuration on a loaded problem.
pub fn execute(problem: &Loaded, cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let mut cfg = cfg.clone();
    let out = match (problem, cfg.algorithm) {
        (Loaded::Bits(p), Algorithm::Ea) => run_opo_ea_gt0(p, &cfg),
        (Loaded::Bits(p), Algorithm::Fea) => run_opo_fea_gt0(p, &cfg),
        (Loaded::Jssp { instance, target }, algo @ (Algorithm::Ma | Algorithm::FfaMa)) => {
            if cfg.transform != Transform::Identity {
                return Err(CliError::Usage("job shop solvers take no transform".into()));
            }
            if cfg.target.is_none() {
                cfg.target = *target;
            }
            if algo == Algorithm::Ma {
                run_jssp_ma(instance, &cfg)
            } else {
                run_jssp_ffa_ma(instance, &cfg)
            }
        }
        (Loaded::Bits(_), algo) => {
            return Err(CliError::Usage(format!("{algo} needs a jssp problem")));
        }
        (Loaded::Jssp { .. }, algo) => {
            return Err(CliError::Usage(format!("{algo} needs a bit-string problem")));
        }
    };
    out.map_err(|e| CliError::Fail(e.to_string()))
}

/// Runs all jobs (in parallel when enabled), writes one log per run under
/// `out`, and returns the traces in job order.
pub fn run_jobs(jobs: &[RunJob], out: &Path) -> Result<Vec<(RunJob, RunTrace)>, CliError> {
    let mut loaded: BTreeMap<String, Loaded> = BTreeMap::new();
    for job in jobs {
        if let Entry::Vacant(slot) = loaded.entry(job.problem.to_string()) {
            slot.insert(job.problem.load()?);
        }
    }
    let results = batch::map_runs(jobs, |job| execute(&loaded[&job.problem.to_string()], &job.config));
    let mut traces = Vec::with_capacity(jobs.len());
    for (job, res) in jobs.iter().zip(results) {
        let outcome = res?;
        let dir = out.join(job.cell_dir());
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let path = dir.join(format!("seed-{}.log", job.config.seed));
        fs::write(&path, write_log(&job.header(), &outcome.trace)).map_err(|e| CliError::io(&path, e))?;
        if let Solution::Ops(seq) = &outcome.best {
            let best = dir.join(format!("seed-{}.best", job.config.seed));
            fs::write(&best, format!("{seq}\n")).map_err(|e| CliError::io(&best, e))?;
        }
        traces.push((job.clone(), outcome.trace));
    }
    Ok(traces)
}

pub struct RunOptions {
    pub algo: Algorithm,
    pub problem: String,
    pub transform: String,
    pub seed: u64,
    pub runs: u64,
    pub budget: u64,
    pub tie: TieRule,
    pub target: Option<u64>,
    pub time_limit: Option<f64>,
    pub bks: Option<PathBuf>,
    pub out: PathBuf,
}

fn expand_jobs(opts: &RunOptions) -> Result<Vec<RunJob>, CliError> {
    if opts.budget == 0 {
        return Err(CliError::Usage("budget must be at least 1".into()));
    }
    let bks = opts.bks.as_deref().map(Bks::load).transpose()?;
    let transform = parse_transform(&opts.transform)?;
    let spec: ProblemSpec = opts.problem.parse()?;
    let mut jobs = Vec::new();
    for problem in spec.expand()? {
        let problem = problem.with_bks(bks.as_ref());
        for r in 0..opts.runs {
            let mut config = RunConfig::new(opts.algo, opts.seed.wrapping_add(r), opts.budget)
                .with_transform(transform.clone())
                .with_tie(opts.tie);
            config.target = opts.target;
            if let Some(secs) = opts.time_limit {
                config = config.with_time_limit(std::time::Duration::from_secs_f64(secs));
            }
            jobs.push(RunJob {
                problem: problem.clone(),
                transform: transform.to_string(),
                config,
            });
        }
    }
    Ok(jobs)
}

pub fn cmd_run(opts: &RunOptions) -> Result<String, CliError> {
    let jobs = expand_jobs(opts)?;
    let traces = run_jobs(&jobs, &opts.out)?;
    let mut report = String::new();
    for (job, trace) in &traces {
        report.push_str(&format!(
            "{} seed={} status={} fes={} best={}\n",
            job.problem,
            job.config.seed,
            trace.status,
            trace.fes,
            trace.best().unwrap_or(0)
        ));
    }
    Ok(report)
}

/// Suite file schema.
///
/// ```json
/// {
///   "out_dir": "results",
///   "parallelism": 0,
///   "bks": "data/jssp/bks.csv",
///   "cells": [
///     {"algorithm": "fea", "problem": "onemax:s=32", "transform": "identity",
///      "budget": 1000000, "runs": 100, "base_seed": 0, "tie": "le"}
///   ]
/// }
/// ```
///
/// `transform` (default `identity`), `tie` (default `le`), `target` and the
/// top-level `bks`, `parallelism` (0 = all cores) and `out_dir` are optional.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub parallelism: usize,
    #[serde(default)]
    pub bks: Option<PathBuf>,
    pub cells: Vec<CellConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellConfig {
    pub algorithm: String,
    pub problem: String,
    #[serde(default = "identity")]
    pub transform: String,
    pub budget: u64,
    pub runs: u64,
    pub base_seed: u64,
    #[serde(default)]
    pub tie: Option<String>,
    #[serde(default)]
    pub target: Option<u64>,
}

fn identity() -> String {
    "identity".into()
}

/// Command-line overrides applied to every cell.
#[derive(Debug, Default, Clone)]
pub struct SuiteOverrides {
    pub out: Option<PathBuf>,
    pub parallelism: Option<usize>,
    pub budget: Option<u64>,
    pub runs: Option<u64>,
    pub base_seed: Option<u64>,
}

pub fn load_suite(path: &Path) -> Result<SuiteConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn cmd_suite(config: &SuiteConfig, ov: &SuiteOverrides) -> Result<String, CliError> {
    let out = ov
        .out
        .clone()
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results"));
    let mut jobs = Vec::new();
    for cell in &config.cells {
        let opts = RunOptions {
            algo: cell.algorithm.parse().map_err(|e| CliError::Usage(format!("{e}")))?,
            problem: cell.problem.clone(),
            transform: cell.transform.clone(),
            seed: ov.base_seed.unwrap_or(cell.base_seed),
            runs: ov.runs.unwrap_or(cell.runs),
            budget: ov.budget.unwrap_or(cell.budget),
            tie: match &cell.tie {
                Some(t) => t.parse().map_err(|e| CliError::Usage(format!("{e}")))?,
                None => TieRule::Le,
            },
            target: cell.target,
            time_limit: None,
            bks: config.bks.clone(),
            out: out.clone(),
        };
        jobs.extend(expand_jobs(&opts)?);
    }
    let threads = ov.parallelism.unwrap_or(config.parallelism);
    let traces = batch::with_parallelism(threads, || run_jobs(&jobs, &out))?;
    let csv = summary_csv(traces.iter().map(|(job, t)| (job.header(), t.clone())).collect());
    let path = out.join("summary.csv");
    fs::write(&path, &csv).map_err(|e| CliError::io(&path, e))?;
    Ok(format!("{} runs, summary in {}\n", traces.len(), path.display()))
}

type CellKey = (String, String, String, u64, String);

fn cell_key(h: &LogHeader, problem: &str) -> CellKey {
    (
        h.algo.to_string(),
        problem.to_string(),
        h.transform.clone(),
        h.budget,
        h.tie.to_string(),
    )
}

/// Per-cell rows, plus one aggregate row per instance set (all files of a
/// directory) when a set holds more than one instance.
pub fn summary_csv(runs: Vec<(LogHeader, RunTrace)>) -> String {
    let mut cells: BTreeMap<CellKey, Vec<RunTrace>> = BTreeMap::new();
    let mut sets: BTreeMap<CellKey, (Vec<RunTrace>, std::collections::BTreeSet<String>)> = BTreeMap::new();
    for (h, t) in runs {
        if let Some(dir) = h.problem.parse::<ProblemSpec>().ok().and_then(|p| p.instance_set()) {
            let family = h.problem.split(':').next().unwrap_or_default();
            let label = format!("{family}:set={}", dir.display());
            let e = sets.entry(cell_key(&h, &label)).or_default();
            e.0.push(t.clone());
            e.1.insert(h.problem.clone());
        }
        cells.entry(cell_key(&h, &h.problem)).or_default().push(t);
    }
    let mut out = format!("algorithm,problem,transform,budget,tie,{}\n", CellSummary::CSV_HEADER);
    let mut row = |k: &CellKey, runs: &[RunTrace]| {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            k.0,
            csv_field(&k.1),
            k.2,
            k.3,
            k.4,
            CellSummary::from_runs(runs).csv_fields()
        ));
    };
    for (k, v) in &cells {
        row(k, v);
    }
    for (k, (v, members)) in &sets {
        if members.len() > 1 {
            row(k, v);
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub struct StatsReport {
    pub csv: String,
    /// file name and contents of each ECDF point series
    pub ecdf: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

/// Reads every `*.log` below `dir`; corrupt logs are skipped with a warning.
pub fn cmd_stats(dir: &Path) -> Result<StatsReport, CliError> {
    if !dir.is_dir() {
        return Err(CliError::io(dir, "not a directory"));
    }
    let pattern = dir.join("**").join("*.log");
    let mut files: Vec<PathBuf> = glob::glob(&pattern.to_string_lossy())
        .map_err(|e| CliError::Usage(e.to_string()))?
        .filter_map(Result::ok)
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Fail(format!("no .log files below {}", dir.display())));
    }
    let mut warnings = Vec::new();
    let mut runs = Vec::new();
    for f in &files {
        match fs::read_to_string(f)
            .map_err(|e| e.to_string())
            .and_then(|t| parse_log(&t).map_err(|e| e.to_string()))
        {
            Ok(r) => runs.push(r),
            Err(e) => warnings.push(format!("skipping {}: {e}", f.display())),
        }
    }
    if runs.is_empty() {
        return Err(CliError::Fail(format!("all {} logs are corrupt", files.len())));
    }
    let ecdf = ecdf_series(&runs);
    Ok(StatsReport {
        csv: summary_csv(runs),
        ecdf,
        warnings,
    })
}

/// ECDF over per-instance ERT for every (algorithm, transform, dimension).
fn ecdf_series(runs: &[(LogHeader, RunTrace)]) -> Vec<(String, String)> {
    let mut per_instance: BTreeMap<(String, String, String), Vec<RunTrace>> = BTreeMap::new();
    for (h, t) in runs {
        per_instance
            .entry((h.algo.to_string(), h.transform.clone(), h.problem.clone()))
            .or_default()
            .push(t.clone());
    }
    let mut dims: BTreeMap<(String, String, usize), Vec<f64>> = BTreeMap::new();
    for ((algo, transform, problem), traces) in per_instance {
        let Some(dim) = problem
            .parse::<ProblemSpec>()
            .ok()
            .and_then(|p| p.load().ok())
            .map(|l| l.dimension())
        else {
            continue;
        };
        dims.entry((algo, transform, dim)).or_default().push(ert(&traces));
    }
    dims.into_iter()
        .map(|((algo, transform, dim), erts)| {
            let e = ecdf_over_ert(&erts);
            let mut text = String::from("ert,fraction\n");
            for (t, f) in e.points() {
                text.push_str(&format!("{t},{f}\n"));
            }
            (sanitize(&format!("ecdf_{algo}_{transform}_s{dim}.csv")), text)
        })
        .collect()
}

pub struct VerifyOptions {
    pub problem: String,
    pub transforms: Vec<String>,
    pub against: Vec<String>,
    pub seed: u64,
    pub seeds: u64,
    pub budget: u64,
    pub tie: TieRule,
}

/// Candidate solutions (packed words) and raw values of one FEA run.
fn record_fea(p: &dyn Objective, cfg: &RunConfig) -> Result<(RunTrace, Vec<u64>), CliError> {
    let mut seq = Vec::new();
    let out = run_opo_fea_gt0_observed(&p, cfg, |x, _| seq.extend_from_slice(x.words()))
        .map_err(|e| CliError::Fail(e.to_string()))?;
    Ok((out.trace, seq))
}

/// FEA paired across transforms (raw traces must be byte-identical) and
/// across problems (candidate sequences must be identical).
pub fn cmd_verify_invariance(opts: &VerifyOptions) -> Result<(String, bool), CliError> {
    let spec: ProblemSpec = opts.problem.parse()?;
    let Loaded::Bits(base) = spec.load()? else {
        return Err(CliError::Usage("invariance checks need a bit-string problem".into()));
    };
    let mut report = String::new();
    let mut all_pass = true;
    let seeds: Vec<u64> = (0..opts.seeds).map(|r| opts.seed.wrapping_add(r)).collect();
    let cfg = |seed| RunConfig::new(Algorithm::Fea, seed, opts.budget).with_tie(opts.tie);

    for t in &opts.transforms {
        let transform = parse_transform(t)?;
        transform.compile(base.upper_bound())?;
        let results = batch::map_runs(&seeds, |&seed| -> Result<Option<(u64, u64)>, CliError> {
            let reference = run_opo_fea_gt0(&base, &cfg(seed)).map_err(|e| CliError::Fail(e.to_string()))?;
            let other = run_opo_fea_gt0(&base, &cfg(seed).with_transform(transform.clone()))
                .map_err(|e| CliError::Fail(e.to_string()))?;
            // the logged event stream must match exactly
            let differs = reference.trace != other.trace;
            Ok(differs.then(|| (seed, first_divergence(&reference.trace, &other.trace))))
        });
        let failure = results
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .next();
        match failure {
            None => report.push_str(&format!("PASS {} transform={t} seeds={}\n", spec, opts.seeds)),
            Some((seed, fe)) => {
                all_pass = false;
                report.push_str(&format!(
                    "FAIL {} transform={t} seed={seed} first_divergence_fe={fe}\n",
                    spec
                ));
            }
        }
    }

    for other_spec in &opts.against {
        let other_spec: ProblemSpec = other_spec.parse()?;
        let Loaded::Bits(other) = other_spec.load()? else {
            return Err(CliError::Usage("invariance checks need a bit-string problem".into()));
        };
        if other.dimension() != base.dimension() {
            return Err(CliError::Usage(format!("{other_spec} and {spec} differ in dimension")));
        }
        let results = batch::map_runs(&seeds, |&seed| -> Result<Option<(u64, u64)>, CliError> {
            compare_problems(&*base, &*other, &cfg(seed)).map(|r| r.err().map(|fe| (seed, fe)))
        });
        let failure = results
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .next();
        match failure {
            None => report.push_str(&format!(
                "PASS {spec} vs {other_spec} seeds={} (solution sequences and hitting times)\n",
                opts.seeds
            )),
            Some((seed, fe)) => {
                all_pass = false;
                report.push_str(&format!(
                    "FAIL {spec} vs {other_spec} seed={seed} first_divergence_fe={fe}\n"
                ));
            }
        }
    }
    Ok((report, all_pass))
}

/// Outcome of pairing two problems on one seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairedRuns {
    pub hit_a: Option<u64>,
    pub hit_b: Option<u64>,
    /// FEs compared (the longer of the two stopping runs)
    pub compared: u64,
}

/// Runs the FEA on `a` and on `b` with the same seed and compares the
/// candidate sequences over the longer of the two runs (both continued past
/// their own optimum). Each problem's hitting time must also be the first
/// visit of one of its optima in the shared sequence. `Err(fe)` gives the
/// first diverging FE.
pub fn compare_problems(
    a: &dyn Objective,
    b: &dyn Objective,
    cfg: &RunConfig,
) -> Result<Result<PairedRuns, u64>, CliError> {
    let (ta, _) = record_fea(a, cfg)?;
    let (tb, _) = record_fea(b, cfg)?;
    let len = ta.fes.max(tb.fes);
    let long = RunConfig {
        budget: len,
        ..cfg.clone()
    }
    .without_early_stop();
    let (_, sa) = record_fea(a, &long)?;
    let (_, sb) = record_fea(b, &long)?;
    let words = sa.len() / len as usize;
    if let Some(i) = sa.iter().zip(&sb).position(|(x, y)| x != y) {
        return Ok(Err(i as u64 / words as u64 + 1));
    }
    // first visits of each problem's optimum along the shared sequence
    let first_zero = |p: &dyn Objective| -> Option<u64> {
        let s = p.dimension();
        sa.chunks(words)
            .position(|w| p.evaluate(&ffalab_core::BitString::from_words(s, w).expect("same dimension")) == 0)
            .map(|i| i as u64 + 1)
    };
    let (ha, hb) = (ta.hitting_time(), tb.hitting_time());
    if first_zero(a) != ha {
        return Ok(Err(ha.unwrap_or(len)));
    }
    if first_zero(b) != hb {
        return Ok(Err(hb.unwrap_or(len)));
    }
    Ok(Ok(PairedRuns {
        hit_a: ha,
        hit_b: hb,
        compared: len,
    }))
}

fn first_divergence(a: &RunTrace, b: &RunTrace) -> u64 {
    match a.events.iter().zip(&b.events).find(|(x, y)| x != y) {
        Some((x, y)) => x.0.min(y.0),
        None if a.events.len() != b.events.len() => {
            let n = a.events.len().min(b.events.len());
            a.events.get(n).or(b.events.get(n)).map_or(0, |e| e.0)
        }
        None => a.fes.min(b.fes) + 1,
    }
}

/// Writes `count` satisfiable uniform random k-SAT formulas as DIMACS files
/// `<prefix><i>.cnf`, `i` from 1, zero-padded to two digits.
pub fn cmd_gen_cnf(
    vars: usize,
    clauses: usize,
    k: usize,
    count: usize,
    seed: u64,
    prefix: &str,
    out: &Path,
) -> Result<String, CliError> {
    if vars == 0 || vars > 30 || k == 0 || k > vars || clauses == 0 {
        return Err(CliError::Usage(
            "need 1 <= k <= vars <= 30 and at least one clause".into(),
        ));
    }
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let mut rng = RngState::from_seed(seed);
    let mut rejected = 0usize;
    for i in 1..=count {
        let formula = loop {
            let f = random_ksat(&mut rng, vars, clauses, k);
            if brute_force_model(&f).is_some() {
                break f;
            }
            rejected += 1;
        };
        let path = out.join(format!("{prefix}{i:02}.cnf"));
        let mut buf = Vec::new();
        let comment = format!(
            "uniform random {k}-SAT, {vars} variables, {clauses} clauses, generator seed {seed}, formula {i}, satisfiable (exhaustive check)"
        );
        formula
            .write_dimacs(&mut buf, Some(&comment))
            .map_err(|e| CliError::io(&path, e))?;
        fs::write(&path, buf).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(format!(
        "wrote {count} satisfiable formulas to {} ({rejected} unsatisfiable draws discarded)\n",
        out.display()
    ))
}
