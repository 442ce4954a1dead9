//! The (1+1)-EA>0, the (1+1)-FEA>0 and the two memetic job shop solvers.
//!
//! Every solver owns one [`RngState`] seeded from the run configuration, counts
//! one FE per objective evaluation (or per decode), and records a strictly
//! decreasing sequence of best raw objective values.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::ffa::{FfaSelector, FrequencyTable, TieRule, Transform};
use crate::jssp::{gox_recombine, swap_local_search, Decoder, JsspInstance, OpSeq};
use crate::mutation::Mutator;
use crate::problems::Objective;
use crate::rng::{random_bitstring, RngState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ea,
    Fea,
    Ma,
    FfaMa,
}

impl Algorithm {
    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Ea => "ea",
            Algorithm::Fea => "fea",
            Algorithm::Ma => "ma",
            Algorithm::FfaMa => "ffa-ma",
        }
    }

    pub fn is_memetic(self) -> bool {
        matches!(self, Algorithm::Ma | Algorithm::FfaMa)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ea" => Algorithm::Ea,
            "fea" => Algorithm::Fea,
            "ma" => Algorithm::Ma,
            "ffa-ma" => Algorithm::FfaMa,
            _ => return Err(Error::Transform(format!("unknown algorithm {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub transform: Transform,
    pub seed: u64,
    pub budget: u64,
    pub tie: TieRule,
    /// stop once the raw objective reaches this value (default 0, or the
    /// trivial lower bound for job shop instances)
    pub target: Option<u64>,
    /// when false, runs continue past the target until the budget is spent
    pub stop_on_target: bool,
    /// wall-clock limit for the memetic solvers; not reproducible
    pub time_limit: Option<Duration>,
}

/// Budget used when none is configured.
pub const DEFAULT_BUDGET: u64 = 10_000_000_000;

impl RunConfig {
    pub fn new(algorithm: Algorithm, seed: u64, budget: u64) -> Self {
        RunConfig {
            algorithm,
            transform: Transform::Identity,
            seed,
            budget,
            tie: TieRule::Le,
            target: None,
            stop_on_target: true,
            time_limit: None,
        }
    }

    pub fn with_transform(mut self, transform: Transform) -> Self {
        self.transform = transform;
        self
    }

    pub fn with_tie(mut self, tie: TieRule) -> Self {
        self.tie = tie;
        self
    }

    pub fn with_target(mut self, target: u64) -> Self {
        self.target = Some(target);
        self
    }

    pub fn without_early_stop(mut self) -> Self {
        self.stop_on_target = false;
        self
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::param("budget", 0, "at least one FE is required"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    OptimumFound,
    BudgetExhausted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::OptimumFound => "optimum_found",
            Status::BudgetExhausted => "budget_exhausted",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimum_found" => Ok(Status::OptimumFound),
            "budget_exhausted" => Ok(Status::BudgetExhausted),
            _ => Err(Error::Transform(format!("unknown status {s:?}"))),
        }
    }
}

/// Improvement events and terminal status of one run.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunTrace {
    /// `(fe, best raw objective)`, FE indices 1-based
    pub events: Vec<(u64, u64)>,
    pub status: Status,
    pub fes: u64,
}

impl RunTrace {
    pub fn best(&self) -> Option<u64> {
        self.events.last().map(|&(_, y)| y)
    }

    pub fn succeeded(&self) -> bool {
        self.status == Status::OptimumFound
    }

    /// FE index of the success, if any.
    pub fn hitting_time(&self) -> Option<u64> {
        if self.succeeded() {
            self.events.last().map(|&(fe, _)| fe)
        } else {
            None
        }
    }

    /// Checks event ordering and status consistency against `target`.
    pub fn check(&self, target: u64) -> std::result::Result<(), String> {
        let first = self.events.first().ok_or("trace has no events")?;
        if first.0 != 1 {
            return Err(format!("first event at fe {} instead of 1", first.0));
        }
        for w in self.events.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 >= w[0].1 {
                return Err(format!("events {:?} then {:?} not strictly improving", w[0], w[1]));
            }
        }
        let last = self.events.last().unwrap();
        if last.0 > self.fes {
            return Err(format!("event at fe {} beyond total {}", last.0, self.fes));
        }
        if self.succeeded() != (last.1 <= target) {
            return Err(format!("status {} inconsistent with best {}", self.status, last.1));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Bits(BitString),
    Ops(OpSeq),
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trace: RunTrace,
    pub best: Solution,
}

struct Recorder {
    fes: u64,
    best: u64,
    events: Vec<(u64, u64)>,
}

impl Recorder {
    fn first(y: u64) -> Self {
        Recorder {
            fes: 1,
            best: y,
            events: vec![(1, y)],
        }
    }

    /// Counts one FE; true if `y` is a new best.
    #[inline]
    fn record(&mut self, y: u64) -> bool {
        self.fes += 1;
        if y < self.best {
            self.best = y;
            self.events.push((self.fes, y));
            true
        } else {
            false
        }
    }

    fn finish(self, target: u64) -> RunTrace {
        RunTrace {
            status: if self.best <= target {
                Status::OptimumFound
            } else {
                Status::BudgetExhausted
            },
            fes: self.fes,
            events: self.events,
        }
    }
}

/// The (1+1)-EA>0: accept the offspring iff it is at least as good.
pub fn run_opo_ea_gt0<P: Objective>(problem: &P, cfg: &RunConfig) -> Result<RunOutcome> {
    run_opo_ea_gt0_observed(problem, cfg, |_, _| {})
}

/// As [`run_opo_ea_gt0`], calling `observe(x, f(x))` on every evaluation.
pub fn run_opo_ea_gt0_observed<P, F>(problem: &P, cfg: &RunConfig, mut observe: F) -> Result<RunOutcome>
where
    P: Objective,
    F: FnMut(&BitString, u64),
{
    run_one_plus_one(problem, cfg, &mut observe, |yc, yn| Ok(yn <= yc))
}

/// The (1+1)-FEA>0: accept by encounter frequency of the transformed
/// objective values; report the raw objective.
pub fn run_opo_fea_gt0<P: Objective>(problem: &P, cfg: &RunConfig) -> Result<RunOutcome> {
    run_opo_fea_gt0_observed(problem, cfg, |_, _| {})
}

pub fn run_opo_fea_gt0_observed<P, F>(problem: &P, cfg: &RunConfig, mut observe: F) -> Result<RunOutcome>
where
    P: Objective,
    F: FnMut(&BitString, u64),
{
    let mut selector = FfaSelector::new(cfg.transform.compile(problem.upper_bound())?, cfg.tie);
    run_one_plus_one(problem, cfg, &mut observe, |yc, yn| selector.tick_and_compare(yc, yn))
}

fn run_one_plus_one<P, F, A>(problem: &P, cfg: &RunConfig, observe: &mut F, mut accept: A) -> Result<RunOutcome>
where
    P: Objective,
    F: FnMut(&BitString, u64),
    A: FnMut(u64, u64) -> Result<bool>,
{
    cfg.validate()?;
    let target = cfg.target.unwrap_or(0);
    let s = problem.dimension();
    let mut rng = RngState::from_seed(cfg.seed);
    let mutator = Mutator::new(s);
    let mut x = random_bitstring(&mut rng, s)?;
    let mut y = problem.evaluate(&x);
    observe(&x, y);
    let mut rec = Recorder::first(y);
    let mut best_x = x.clone();
    let mut cand = x.clone();
    while (rec.best > target || !cfg.stop_on_target) && rec.fes < cfg.budget {
        mutator.mutate_into(&mut rng, &x, &mut cand);
        let yn = problem.evaluate(&cand);
        observe(&cand, yn);
        if rec.record(yn) {
            best_x.clone_from(&cand);
        }
        if accept(y, yn)? {
            std::mem::swap(&mut x, &mut cand);
            y = yn;
        }
    }
    Ok(RunOutcome {
        trace: rec.finish(target),
        best: Solution::Bits(best_x),
    })
}

/// Population size and offspring count of the memetic algorithms.
pub const MU: usize = 16;
pub const LAMBDA: usize = 16;
/// Local search steps applied to every new individual.
pub const LS_STEPS: usize = 10;

struct Member {
    seq: OpSeq,
    makespan: u64,
    birth: u64,
}

struct JsspEval<'a> {
    decoder: Decoder<'a>,
    rec: Option<Recorder>,
    budget: u64,
    target: u64,
    stop_on_target: bool,
    deadline: Option<Instant>,
    best_seq: Vec<u32>,
}

impl JsspEval<'_> {
    fn fes(&self) -> u64 {
        self.rec.as_ref().map_or(0, |r| r.fes)
    }

    fn done(&self) -> bool {
        let Some(r) = &self.rec else { return false };
        (self.stop_on_target && r.best <= self.target)
            || r.fes >= self.budget
            || self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn evaluate(&mut self, genes: &[u32]) -> Option<u64> {
        if self.done() {
            return None;
        }
        let ms = self.decoder.makespan(genes);
        let improved = match &mut self.rec {
            None => {
                self.rec = Some(Recorder::first(ms));
                true
            }
            Some(r) => r.record(ms),
        };
        if improved {
            self.best_seq.clear();
            self.best_seq.extend_from_slice(genes);
        }
        Some(ms)
    }
}

/// Per-generation view passed to memetic observers.
pub struct Generation<'a> {
    pub makespans: &'a [u64],
    /// sum of all frequency counters, for the FFA variant
    pub frequency_total: Option<u64>,
    pub fes: u64,
}

/// Memetic algorithm with plain (mu+lambda) truncation selection.
pub fn run_jssp_ma(inst: &JsspInstance, cfg: &RunConfig) -> Result<RunOutcome> {
    run_memetic(inst, cfg, false, |_| {})
}

/// Memetic algorithm with frequency fitness survival selection.
pub fn run_jssp_ffa_ma(inst: &JsspInstance, cfg: &RunConfig) -> Result<RunOutcome> {
    run_memetic(inst, cfg, true, |_| {})
}

/// Shared memetic loop; `on_generation` sees the surviving population.
///
/// The initial population consists of `MU` shuffled multisets, each refined
/// by local search. Every generation creates `LAMBDA` children from two
/// distinct uniformly chosen parents, refines them, and keeps `MU` members
/// of the pool ordered by makespan (plain) or by `(H[makespan], makespan)`
/// after counting every pool member once (FFA). Remaining ties favour the
/// older member.
pub fn run_memetic<F>(inst: &JsspInstance, cfg: &RunConfig, ffa: bool, mut on_generation: F) -> Result<RunOutcome>
where
    F: FnMut(&Generation<'_>),
{
    cfg.validate()?;
    let target = cfg.target.unwrap_or_else(|| inst.lower_bound());
    let mut rng = RngState::from_seed(cfg.seed);
    let mut ev = JsspEval {
        decoder: Decoder::new(inst),
        rec: None,
        budget: cfg.budget,
        target,
        stop_on_target: cfg.stop_on_target,
        deadline: cfg.time_limit.map(|l| Instant::now() + l),
        best_seq: Vec::new(),
    };
    let mut births = 0u64;
    let mut pop: Vec<Member> = Vec::with_capacity(MU + LAMBDA);
    for _ in 0..MU {
        let mut seq = OpSeq::random(&mut rng, inst);
        let Some(v) = ev.evaluate(seq.genes()) else { break };
        let makespan = swap_local_search(&mut rng, &mut seq, v, LS_STEPS, &mut |g| ev.evaluate(g));
        pop.push(Member {
            seq,
            makespan,
            birth: births,
        });
        births += 1;
    }
    let mut freq = ffa.then(|| FrequencyTable::new(inst.upper_bound()));
    let mut stopped = pop.len() < MU;
    let mut makespans = Vec::with_capacity(MU);
    while !stopped {
        for _ in 0..LAMBDA {
            let i = rng.index(pop.len());
            let mut j = rng.index(pop.len() - 1);
            if j >= i {
                j += 1;
            }
            let mut child = gox_recombine(&mut rng, &pop[i].seq, &pop[j].seq);
            let Some(v) = ev.evaluate(child.genes()) else {
                stopped = true;
                break;
            };
            let makespan = swap_local_search(&mut rng, &mut child, v, LS_STEPS, &mut |g| ev.evaluate(g));
            pop.push(Member {
                seq: child,
                makespan,
                birth: births,
            });
            births += 1;
        }
        if stopped {
            break;
        }
        match &mut freq {
            Some(h) => {
                for m in &pop {
                    h.tick(m.makespan);
                }
                pop.sort_by_key(|m| (h.get(m.makespan), m.makespan, m.birth));
            }
            None => pop.sort_by_key(|m| (m.makespan, m.birth)),
        }
        pop.truncate(MU);
        makespans.clear();
        makespans.extend(pop.iter().map(|m| m.makespan));
        on_generation(&Generation {
            makespans: &makespans,
            frequency_total: freq.as_ref().map(FrequencyTable::total),
            fes: ev.fes(),
        });
        stopped = ev.done();
    }
    let best = OpSeq::new(inst, std::mem::take(&mut ev.best_seq))?;
    let rec = ev.rec.expect("budget allows at least one evaluation");
    Ok(RunOutcome {
        trace: rec.finish(target),
        best: Solution::Ops(best),
    })
}
