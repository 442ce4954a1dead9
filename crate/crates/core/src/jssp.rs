//! Job shop scheduling: OR-Library instances, the permutation-with-repetition
//! encoding, its greedy makespan decoder, recombination and swap local
//! search.

use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

use crate::error::{Error, Result};
use crate::rng::RngState;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrlibError {
    #[error("line {line}: malformed header, expected `<jobs> <machines>`: {text:?}")]
    BadHeader { line: usize, text: String },
    #[error("missing header")]
    MissingHeader,
    #[error("line {line}: job {job} has {found} numbers, expected {expected}")]
    PairCount {
        line: usize,
        job: usize,
        found: usize,
        expected: usize,
    },
    #[error("line {line}: invalid number {token:?}")]
    BadNumber { line: usize, token: String },
    #[error("line {line}: machine {machine} out of range 0..{machines}")]
    MachineOutOfRange {
        line: usize,
        machine: usize,
        machines: usize,
    },
    #[error("line {line}: job {job} visits machine {machine} twice")]
    DuplicateMachine { line: usize, job: usize, machine: usize },
    #[error("expected {expected} job lines, found {found}")]
    JobCount { expected: usize, found: usize },
}

/// A job shop instance: every job visits every machine once, in its own
/// order, with an integer processing time per visit. Times are normally
/// positive; zero is accepted because published instances contain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsspInstance {
    jobs: usize,
    machines: usize,
    /// machine of step `k` of job `j` at `j * machines + k`
    machine: Vec<u32>,
    time: Vec<u64>,
}

impl JsspInstance {
    /// Builds an instance from per-job `(machine, time)` routes.
    pub fn new(routes: &[Vec<(usize, u64)>]) -> Result<Self> {
        let jobs = routes.len();
        let machines = routes.first().map_or(0, Vec::len);
        if jobs == 0 || machines == 0 {
            return Err(Error::param(
                "jobs",
                jobs,
                "instance needs at least one job and one machine",
            ));
        }
        let mut machine = Vec::with_capacity(jobs * machines);
        let mut time = Vec::with_capacity(jobs * machines);
        for (j, route) in routes.iter().enumerate() {
            if route.len() != machines {
                return Err(Error::param("job", j, "every job must visit every machine once"));
            }
            let mut seen = vec![false; machines];
            for &(mach, t) in route {
                if mach >= machines || std::mem::replace(&mut seen[mach], true) {
                    return Err(Error::param("machine", mach, format!("invalid route for job {j}")));
                }
                machine.push(mach as u32);
                time.push(t);
            }
        }
        Ok(JsspInstance {
            jobs,
            machines,
            machine,
            time,
        })
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    /// Length of every operation sequence, `jobs * machines`.
    pub fn genes(&self) -> usize {
        self.jobs * self.machines
    }

    /// `(machine, time)` of step `step` of job `job`.
    pub fn operation(&self, job: usize, step: usize) -> (usize, u64) {
        let i = job * self.machines + step;
        (self.machine[i] as usize, self.time[i])
    }

    /// Sum of all processing times; no schedule produced by the decoder
    /// can be longer.
    pub fn upper_bound(&self) -> u64 {
        self.time.iter().sum()
    }

    /// Largest total machine load or job duration.
    pub fn lower_bound(&self) -> u64 {
        let mut load = vec![0u64; self.machines];
        let mut longest_job = 0;
        for j in 0..self.jobs {
            let mut total = 0;
            for k in 0..self.machines {
                let (m, t) = self.operation(j, k);
                load[m] += t;
                total += t;
            }
            longest_job = longest_job.max(total);
        }
        load.into_iter().max().unwrap_or(0).max(longest_job)
    }

    pub fn write_orlib<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{} {}", self.jobs, self.machines)?;
        for j in 0..self.jobs {
            let line: Vec<String> = (0..self.machines)
                .map(|k| {
                    let (m, t) = self.operation(j, k);
                    format!("{m} {t}")
                })
                .collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Parses the OR-Library job shop format: a `jobs machines` header line,
/// then one line per job with `machine time` pairs.
pub fn parse_orlib(text: &str) -> Result<JsspInstance, OrlibError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, htext) = lines.next().ok_or(OrlibError::MissingHeader)?;
    let header: Vec<usize> = htext
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| OrlibError::BadHeader {
            line: hline,
            text: htext.into(),
        })?;
    let &[jobs, machines] = header.as_slice() else {
        return Err(OrlibError::BadHeader {
            line: hline,
            text: htext.into(),
        });
    };
    if jobs == 0 || machines == 0 {
        return Err(OrlibError::BadHeader {
            line: hline,
            text: htext.into(),
        });
    }
    let mut routes = Vec::with_capacity(jobs);
    for (line, ltext) in lines {
        let job = routes.len();
        if job == jobs {
            return Err(OrlibError::JobCount {
                expected: jobs,
                found: jobs + 1,
            });
        }
        let nums: Vec<u64> = ltext
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| OrlibError::BadNumber { line, token: t.into() }))
            .collect::<Result<_, _>>()?;
        if nums.len() != 2 * machines {
            return Err(OrlibError::PairCount {
                line,
                job,
                found: nums.len(),
                expected: 2 * machines,
            });
        }
        let mut seen = vec![false; machines];
        let mut route = Vec::with_capacity(machines);
        for pair in nums.chunks_exact(2) {
            let machine = pair[0] as usize;
            if machine >= machines {
                return Err(OrlibError::MachineOutOfRange {
                    line,
                    machine,
                    machines,
                });
            }
            if std::mem::replace(&mut seen[machine], true) {
                return Err(OrlibError::DuplicateMachine { line, job, machine });
            }
            route.push((machine, pair[1]));
        }
        routes.push(route);
    }
    if routes.len() != jobs {
        return Err(OrlibError::JobCount {
            expected: jobs,
            found: routes.len(),
        });
    }
    Ok(JsspInstance::new(&routes).expect("validated while parsing"))
}

/// Permutation with repetition: each job id occurs once per machine.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpSeq(Vec<u32>);

impl OpSeq {
    /// Wraps `genes` after checking the multiset property for `inst`.
    pub fn new(inst: &JsspInstance, genes: Vec<u32>) -> Result<Self> {
        check_multiset(inst, &genes)?;
        Ok(OpSeq(genes))
    }

    /// Job ids in ascending blocks: `0,0,..,1,1,..`.
    pub fn canonical(inst: &JsspInstance) -> Self {
        OpSeq(
            (0..inst.jobs as u32)
                .flat_map(|j| std::iter::repeat_n(j, inst.machines))
                .collect(),
        )
    }

    /// A uniformly shuffled multiset.
    pub fn random(rng: &mut RngState, inst: &JsspInstance) -> Self {
        let mut s = Self::canonical(inst);
        rng.shuffle(&mut s.0);
        s
    }

    pub fn genes(&self) -> &[u32] {
        &self.0
    }

    pub(crate) fn genes_mut(&mut self) -> &mut Vec<u32> {
        &mut self.0
    }

    pub fn into_genes(self) -> Vec<u32> {
        self.0
    }

    /// Reads a whitespace-separated gene list.
    pub fn parse(inst: &JsspInstance, text: &str) -> Result<Self> {
        let genes = text
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::MultisetViolation(format!("invalid gene {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(inst, genes)
    }
}

impl fmt::Display for OpSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
            first = false;
        }
        Ok(())
    }
}

pub fn check_multiset(inst: &JsspInstance, genes: &[u32]) -> Result<()> {
    if genes.len() != inst.genes() {
        return Err(Error::MultisetViolation(format!(
            "length {} but instance needs {}",
            genes.len(),
            inst.genes()
        )));
    }
    let mut counts = vec![0usize; inst.jobs];
    for &g in genes {
        let c = counts
            .get_mut(g as usize)
            .ok_or_else(|| Error::MultisetViolation(format!("job id {g} out of range")))?;
        *c += 1;
    }
    if let Some((j, &c)) = counts.iter().enumerate().find(|(_, &c)| c != inst.machines) {
        return Err(Error::MultisetViolation(format!(
            "job {j} occurs {c} times, expected {}",
            inst.machines
        )));
    }
    Ok(())
}

/// Reusable scratch space for greedy decoding.
#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    inst: &'a JsspInstance,
    next_step: Vec<usize>,
    job_free: Vec<u64>,
    machine_free: Vec<u64>,
    lower_bound: u64,
}

impl<'a> Decoder<'a> {
    pub fn new(inst: &'a JsspInstance) -> Self {
        Decoder {
            inst,
            next_step: vec![0; inst.jobs],
            job_free: vec![0; inst.jobs],
            machine_free: vec![0; inst.machines],
            lower_bound: inst.lower_bound(),
        }
    }

    pub fn instance(&self) -> &'a JsspInstance {
        self.inst
    }

    /// Makespan of a sequence already known to satisfy the multiset property.
    ///
    /// The `c`-th occurrence of job `i` dispatches its `c`-th operation at the
    /// later of the machine's and the job's release times.
    #[inline]
    pub fn makespan(&mut self, genes: &[u32]) -> u64 {
        let inst = self.inst;
        self.next_step.iter_mut().for_each(|s| *s = 0);
        self.job_free.iter_mut().for_each(|t| *t = 0);
        self.machine_free.iter_mut().for_each(|t| *t = 0);
        let mut makespan = 0;
        for &g in genes {
            let job = g as usize;
            let idx = job * inst.machines + self.next_step[job];
            self.next_step[job] += 1;
            let mach = inst.machine[idx] as usize;
            let end = self.job_free[job].max(self.machine_free[mach]) + inst.time[idx];
            self.job_free[job] = end;
            self.machine_free[mach] = end;
            makespan = makespan.max(end);
        }
        debug_assert!(makespan >= self.lower_bound, "makespan below the trivial lower bound");
        debug_assert!(makespan <= inst.upper_bound());
        makespan
    }
}

/// Checked decoding of a raw gene list.
pub fn decode_makespan(inst: &JsspInstance, genes: &[u32]) -> Result<u64> {
    check_multiset(inst, genes)?;
    Ok(Decoder::new(inst).makespan(genes))
}

/// Generalized order crossover with an explicit parent chooser: `true`
/// reads the next gene from `a`, `false` from `b`.
pub fn gox_recombine_with(a: &OpSeq, b: &OpSeq, mut pick_a: impl FnMut() -> bool) -> OpSeq {
    assert_eq!(a.0.len(), b.0.len(), "parents of different length");
    let len = a.0.len();
    let jobs = a.0.iter().chain(&b.0).map(|&g| g as usize + 1).max().unwrap_or(0);
    let parents = [&a.0, &b.0];
    // positions of the c-th occurrence of every job, per parent
    let occurrences: Vec<Vec<Vec<usize>>> = parents
        .iter()
        .map(|p| {
            let mut occ = vec![Vec::new(); jobs];
            for (pos, &g) in p.iter().enumerate() {
                occ[g as usize].push(pos);
            }
            occ
        })
        .collect();
    let mut marked = [vec![false; len], vec![false; len]];
    let mut cursor = [0usize; 2];
    let mut used = vec![0usize; jobs];
    let mut child = Vec::with_capacity(len);
    for _ in 0..len {
        let p = if pick_a() { 0 } else { 1 };
        while marked[p][cursor[p]] {
            cursor[p] += 1;
        }
        let job = parents[p][cursor[p]];
        let c = used[job as usize];
        used[job as usize] += 1;
        child.push(job);
        for q in 0..2 {
            marked[q][occurrences[q][job as usize][c]] = true;
        }
    }
    OpSeq(child)
}

/// Recombination choosing the source parent by a fair coin per gene.
pub fn gox_recombine(rng: &mut RngState, a: &OpSeq, b: &OpSeq) -> OpSeq {
    gox_recombine_with(a, b, || rng.coin())
}

/// First-improvement swap local search.
///
/// Each of at most `steps` steps visits the pairs `(i, j)`, `i < j`, of
/// positions holding different jobs in a fresh uniformly random order and
/// applies the first swap that strictly shortens the makespan. The search
/// stops early at a local optimum or when `evaluate` returns `None` (budget
/// exhausted). Returns the makespan of `seq` on exit.
pub fn swap_local_search<E>(
    rng: &mut RngState,
    seq: &mut OpSeq,
    mut current: u64,
    steps: usize,
    evaluate: &mut E,
) -> u64
where
    E: FnMut(&[u32]) -> Option<u64>,
{
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for _ in 0..steps {
        let genes = seq.genes_mut();
        pairs.clear();
        for i in 0..genes.len() {
            for j in i + 1..genes.len() {
                if genes[i] != genes[j] {
                    pairs.push((i as u32, j as u32));
                }
            }
        }
        let mut improved = false;
        for t in 0..pairs.len() {
            let r = t + rng.index(pairs.len() - t);
            pairs.swap(t, r);
            let (i, j) = (pairs[t].0 as usize, pairs[t].1 as usize);
            genes.swap(i, j);
            match evaluate(genes) {
                Some(v) if v < current => {
                    current = v;
                    improved = true;
                    break;
                }
                Some(_) => genes.swap(i, j),
                None => {
                    genes.swap(i, j);
                    return current;
                }
            }
        }
        if !improved {
            break;
        }
    }
    current
}
