//! Acceptance checks, one line per criterion. Runs as a plain binary
//! (`harness = false`) and exits non-zero if any criterion fails.

use std::collections::HashSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use ffalab_cli::commands::compare_problems;
use ffalab_cli::log::{write_log, LogHeader};
use ffalab_core::batch::{map_runs, map_seeds};
use ffalab_core::ffa::wrap_objective;
use ffalab_core::jssp::{check_multiset, gox_recombine, gox_recombine_with, parse_orlib, swap_local_search, Decoder};
use ffalab_core::maxsat::parse_dimacs;
use ffalab_core::mutation::Mutator;
use ffalab_core::problems::{jump, leadingones, onemax, plateau, trap, twomax};
use ffalab_core::rng::random_bitstring;
use ffalab_core::solvers::{run_jssp_ffa_ma, run_jssp_ma, run_opo_ea_gt0, run_opo_fea_gt0};
use ffalab_core::stats::{ecdf_over_ert, ert, fit_scale_model, quantile, theory_ea_leadingones, theory_ea_onemax};
use ffalab_core::wmodel::{epistasis_map, max_gamma, neutrality_reduce, ruggedness_table, MajorityTie, WModelParams};
use ffalab_core::{
    Algorithm, Benchmark, BitString, FrequencyTable, JsspInstance, MaxSat, Objective, OpSeq, RngState, RunConfig,
    RunTrace, TieRule, Transform, WModel,
};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn rel_err(x: f64, target: f64) -> f64 {
    (x - target).abs() / target
}

fn bit_runs<P: Objective>(p: &P, algo: Algorithm, runs: u64, budget: u64) -> Vec<RunTrace> {
    map_seeds(0, runs, |seed| {
        let cfg = RunConfig::new(algo, seed, budget);
        match algo {
            Algorithm::Ea => run_opo_ea_gt0(p, &cfg),
            _ => run_opo_fea_gt0(p, &cfg),
        }
        .expect("valid run")
        .trace
    })
}

fn hitting_times(traces: &[RunTrace]) -> Option<Vec<f64>> {
    traces.iter().map(|t| t.hitting_time().map(|h| h as f64)).collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}

fn successes(traces: &[RunTrace]) -> usize {
    traces.iter().filter(|t| t.succeeded()).count()
}

fn theory_match(make: fn(usize) -> Benchmark, theory: fn(u32) -> f64, dims: &[usize]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for &s in dims {
        let traces = bit_runs(&make(s), Algorithm::Ea, 5000, u64::MAX / 2);
        let Some(h) = hitting_times(&traces) else {
            return (false, format!("s={s}: a run did not finish"));
        };
        let (m, t) = (mean(&h), theory(s as u32));
        ok &= rel_err(m, t) <= 0.03;
        parts.push(format!("s={s} mean {m:.1} vs {t:.1} ({:+.1}%)", 100.0 * (m - t) / t));
    }
    (ok, format!("5000 runs each; {}", parts.join(", ")))
}

fn criterion_1() -> Outcome {
    theory_match(|s| Benchmark::onemax(s).unwrap(), theory_ea_onemax, &[16, 32, 64])
}

fn criterion_2() -> Outcome {
    theory_match(|s| Benchmark::leadingones(s).unwrap(), theory_ea_leadingones, &[16, 32])
}

fn criterion_3() -> Outcome {
    let mut points = Vec::new();
    let mut anchor = (0.0, 0.0);
    for s in [8usize, 16, 32, 64] {
        let runs = if s == 32 { 3000 } else { 1000 };
        let Some(h) = hitting_times(&bit_runs(
            &Benchmark::onemax(s).unwrap(),
            Algorithm::Fea,
            runs,
            u64::MAX / 2,
        )) else {
            return (false, format!("s={s}: a run did not finish"));
        };
        if s == 32 {
            anchor = (mean(&h), quantile(&h, 0.5));
        }
        points.push((s as f64, mean(&h), variance(&h) / h.len() as f64));
    }
    let fit = match fit_scale_model(&points) {
        Ok(f) => f,
        Err(e) => return (false, e.to_string()),
    };
    let (m, med) = anchor;
    let ok = rel_err(m, 1620.0) <= 0.10 && rel_err(med, 1375.0) <= 0.10 && fit.r2 >= 0.7;
    (
        ok,
        format!(
            "s=32, 3000 runs: mean {m:.1} (1620 +-10%), median {med:.1} (1375 +-10%); fit c={:.4} weighted R2={:.3}",
            fit.c, fit.r2
        ),
    )
}

fn header(problem: &str, transform: &str, seed: u64, budget: u64) -> LogHeader {
    LogHeader {
        algo: Algorithm::Fea,
        problem: problem.into(),
        transform: transform.into(),
        seed,
        budget,
        rng: "pcg64mcg".into(),
        tie: TieRule::Le,
    }
}

fn log_body(text: &str) -> &str {
    text.split_once('\n').map_or("", |(_, rest)| rest)
}

fn criterion_4() -> Outcome {
    let budget = 10_000_000;
    let problems = [
        Benchmark::onemax(16).unwrap(),
        Benchmark::twomax(16).unwrap(),
        Benchmark::leadingones(16).unwrap(),
        Benchmark::trap(16).unwrap(),
    ];
    let mut mismatches = Vec::new();
    for p in &problems {
        let name = p.to_string();
        let bad: Vec<u64> = map_seeds(0, 100, |seed| {
            let base = RunConfig::new(Algorithm::Fea, seed, budget);
            let a = run_opo_fea_gt0(p, &base).unwrap().trace;
            let b = run_opo_fea_gt0(p, &base.clone().with_transform(Transform::Md5))
                .unwrap()
                .trace;
            let la = write_log(&header(&name, "identity", seed, budget), &a);
            let lb = write_log(&header(&name, "md5", seed, budget), &b);
            (log_body(&la) != log_body(&lb) || !a.succeeded()).then_some(seed)
        })
        .into_iter()
        .flatten()
        .collect();
        if !bad.is_empty() {
            mismatches.push(format!("{name} seeds {bad:?}"));
        }
    }
    if mismatches.is_empty() {
        (
            true,
            "onemax, twomax, leadingones, trap at s=16: 100 seeds each, identity vs md5 log bodies byte-identical"
                .into(),
        )
    } else {
        (false, mismatches.join("; "))
    }
}

fn criterion_5() -> Outcome {
    let s = 32;
    let k_sqrt = (s as f64).sqrt().floor() as usize;
    let base = Benchmark::onemax(s).unwrap();
    let others = [
        Benchmark::trap(s).unwrap(),
        Benchmark::jump(s, 2).unwrap(),
        Benchmark::jump(s, k_sqrt).unwrap(),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for other in &others {
        let res = map_seeds(0, 100, |seed| {
            compare_problems(&base, other, &RunConfig::new(Algorithm::Fea, seed, 100_000_000)).expect("runs")
        });
        let mut diverged = Vec::new();
        let mut equal_hits = 0;
        let mut compared = 0;
        for (seed, r) in res.iter().enumerate() {
            match r {
                Ok(p) => {
                    compared += p.compared;
                    equal_hits += usize::from(p.hit_a == p.hit_b && p.hit_a.is_some());
                }
                Err(fe) => diverged.push((seed, *fe)),
            }
        }
        ok &= diverged.is_empty();
        // jump keeps the OneMax optimum, so its hitting time must coincide
        if other.to_string().starts_with("jump") {
            ok &= equal_hits == 100;
        }
        let hits = if other.to_string().starts_with("jump") {
            format!("equal hitting times {equal_hits}/100")
        } else {
            "hitting times at the first optimum visit of each".to_string()
        };
        notes.push(if diverged.is_empty() {
            format!("{other}: 100/100 identical over {compared} FEs, {hits}")
        } else {
            format!(
                "{other}: diverged at (seed, fe) {:?}",
                &diverged[..diverged.len().min(3)]
            )
        });
    }
    (ok, format!("onemax:s=32 vs {}", notes.join("; ")))
}

fn criterion_6() -> Outcome {
    let p = Benchmark::twomax(32).unwrap();
    let fea = successes(&bit_runs(&p, Algorithm::Fea, 100, 1_000_000));
    let ea = successes(&bit_runs(&p, Algorithm::Ea, 100, 1_000_000));
    (
        fea == 100 && (30..=70).contains(&ea),
        format!("twomax:s=32, budget 1e6: FEA {fea}/100, EA {ea}/100 (band 30..70)"),
    )
}

fn criterion_7() -> Outcome {
    let w = WModel::catalog(6).unwrap();
    let Some(h) = hitting_times(&bit_runs(&w, Algorithm::Fea, 1000, u64::MAX / 2)) else {
        return (false, "an FEA run did not finish".into());
    };
    let (m, med) = (mean(&h), quantile(&h, 0.5));
    let ea = successes(&bit_runs(&w, Algorithm::Ea, 20, 10_000_000));
    (
        rel_err(m, 1602.0) <= 0.15 && rel_err(med, 1355.0) <= 0.15 && ea == 0,
        format!("W-Model 6: FEA mean {m:.1} (1602 +-15%), median {med:.1} (1355 +-15%); EA {ea}/20 at 1e7"),
    )
}

fn criterion_8() -> Outcome {
    let w = WModel::catalog(1).unwrap();
    let Some(h) = hitting_times(&bit_runs(&w, Algorithm::Fea, 1000, u64::MAX / 2)) else {
        return (false, "an FEA run did not finish".into());
    };
    let m = mean(&h);
    let ea = bit_runs(&w, Algorithm::Ea, 500, 1_000_000);
    let e = ert(&ea);
    (
        rel_err(m, 1090.0) <= 0.20 && rel_err(e, 5928.0) <= 0.30,
        format!(
            "W-Model 1: FEA mean {m:.1} (1090 +-20%); EA ERT {e:.1} over 500 runs, {} successes (5928 +-30%)",
            successes(&ea)
        ),
    )
}

fn criterion_9() -> Outcome {
    let dir = data("maxsat/uf20");
    let mut files: Vec<PathBuf> = match fs::read_dir(&dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "cnf"))
            .collect(),
        Err(e) => return (false, format!("{}: {e}", dir.display())),
    };
    files.sort();
    let problems: Vec<MaxSat> = files
        .iter()
        .map(|f| {
            MaxSat::new(
                parse_dimacs(&fs::read_to_string(f).unwrap()).unwrap(),
                f.display().to_string(),
            )
        })
        .collect();
    let traces: Vec<RunTrace> = map_runs(&problems, |p| {
        (0..3)
            .map(|seed| {
                run_opo_fea_gt0(p, &RunConfig::new(Algorithm::Fea, seed, 1_000_000))
                    .unwrap()
                    .trace
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let frac = successes(&traces) as f64 / traces.len() as f64;
    let e = ert(&traces);
    (
        problems.len() == 1000 && frac == 1.0 && rel_err(e, 3091.0) <= 0.25,
        format!(
            "{} instances x 3 runs: success fraction {frac:.3}, aggregate ERT {e:.1} (3091 +-25%)",
            problems.len()
        ),
    )
}

fn load_jssp(name: &str) -> JsspInstance {
    parse_orlib(&fs::read_to_string(data(&format!("jssp/{name}.txt"))).unwrap()).unwrap()
}

/// Straightforward schedule builder used to cross-check the decoder.
fn oracle_makespan(inst: &JsspInstance, genes: &[u32]) -> u64 {
    let mut step = vec![0usize; inst.jobs()];
    let mut job_end = vec![0u64; inst.jobs()];
    let mut machine_end = vec![0u64; inst.machines()];
    for &g in genes {
        let j = g as usize;
        let (m, t) = inst.operation(j, step[j]);
        step[j] += 1;
        let start = job_end[j].max(machine_end[m]);
        job_end[j] = start + t;
        machine_end[m] = start + t;
    }
    machine_end.into_iter().max().unwrap_or(0)
}

fn decode_invariants(inst: &JsspInstance, count: usize) -> Result<usize, String> {
    let mut rng = RngState::from_seed(99);
    let mut dec = Decoder::new(inst);
    let (lb, ub) = (inst.lower_bound(), inst.upper_bound());
    let mut a = OpSeq::random(&mut rng, inst);
    let mut b = OpSeq::random(&mut rng, inst);
    let mut done = 0;
    while done < count {
        let child = gox_recombine(&mut rng, &a, &b);
        for seq in [&a, &child] {
            check_multiset(inst, seq.genes()).map_err(|e| e.to_string())?;
            let ms = dec.makespan(seq.genes());
            if ms != oracle_makespan(inst, seq.genes()) || ms < lb || ms > ub {
                return Err(format!("makespan {ms} for {seq}"));
            }
            done += 1;
        }
        let mut swapped = child.clone().into_genes();
        let (i, j) = (rng.index(swapped.len()), rng.index(swapped.len()));
        swapped.swap(i, j);
        b = a;
        a = OpSeq::new(inst, swapped).map_err(|e| e.to_string())?;
    }
    Ok(done)
}

fn criterion_10() -> Outcome {
    let ft06 = load_jssp("ft06");
    let solved = |ffa: bool| {
        map_seeds(0, 11, |seed| {
            let cfg =
                RunConfig::new(if ffa { Algorithm::FfaMa } else { Algorithm::Ma }, seed, 1_000_000).with_target(55);
            let out = if ffa {
                run_jssp_ffa_ma(&ft06, &cfg)
            } else {
                run_jssp_ma(&ft06, &cfg)
            };
            out.unwrap().trace.best() == Some(55)
        })
        .into_iter()
        .filter(|&x| x)
        .count()
    };
    let (ma6, ffa6) = (solved(false), solved(true));

    let ft10 = load_jssp("ft10");
    let best = |ffa: bool| {
        let v: Vec<f64> = map_seeds(0, 11, |seed| {
            let cfg =
                RunConfig::new(if ffa { Algorithm::FfaMa } else { Algorithm::Ma }, seed, 3_000_000).with_target(930);
            let out = if ffa {
                run_jssp_ffa_ma(&ft10, &cfg)
            } else {
                run_jssp_ma(&ft10, &cfg)
            };
            out.unwrap().trace.best().unwrap() as f64
        });
        mean(&v)
    };
    let (ma10, ffa10) = (best(false), best(true));
    let decodes = decode_invariants(&ft10, 1_000_000);
    let dec_ok = decodes.is_ok();
    (
        ma6 >= 10 && ffa6 >= 10 && ffa10 <= ma10 && dec_ok,
        format!(
            "ft06 makespan 55: MA {ma6}/11, FFA-MA {ffa6}/11; ft10 at 3e6 FEs, 11 seeds: mean best FFA-MA {ffa10:.1} vs MA {ma10:.1}; decoder invariants: {}",
            match decodes {
                Ok(n) => format!("{n} decodes ok"),
                Err(e) => e,
            }
        ),
    )
}

fn bits(s: &str) -> BitString {
    s.parse().unwrap()
}

fn all_strings(s: usize) -> impl Iterator<Item = BitString> {
    (0u64..1 << s).map(move |w| BitString::from_words(s, &[w]).unwrap())
}

/// Closed forms written directly in terms of the number of ones.
fn pb_oracles(s: usize, k: usize, x: &BitString) -> [u64; 6] {
    let ones = x.iter().filter(|&b| b).count();
    let prefix = x.iter().take_while(|&b| b).count();
    let (s64, o, k64) = (s as u64, ones as u64, k as u64);
    [
        s64 - o,
        s64 - prefix as u64,
        if ones == s { 0 } else { 1 + s64 - o.max(s64 - o) },
        if ones == s || ones + k <= s { s64 - o } else { k64 + o },
        if ones == 0 { 0 } else { s64 - o + 1 },
        if ones == s || ones + k <= s { s64 - o } else { k64 },
    ]
}

fn exhaustive_problem_tables() -> bool {
    for s in 3..=12 {
        for k in 2..s {
            let mut max = [0u64; 6];
            for x in all_strings(s) {
                let got = [
                    onemax(&x),
                    leadingones(&x),
                    twomax(&x),
                    jump(&x, k),
                    trap(&x),
                    plateau(&x, k),
                ];
                let want = pb_oracles(s, k, &x);
                if got != want {
                    return false;
                }
                for i in 0..6 {
                    max[i] = max[i].max(got[i]);
                }
            }
            let declared = [
                Benchmark::onemax(s).unwrap().upper_bound(),
                Benchmark::leadingones(s).unwrap().upper_bound(),
                Benchmark::twomax(s).unwrap().upper_bound(),
                Benchmark::jump(s, k).unwrap().upper_bound(),
                Benchmark::trap(s).unwrap().upper_bound(),
                Benchmark::plateau(s, k).unwrap().upper_bound(),
            ];
            if max != declared {
                return false;
            }
        }
    }
    true
}

fn with_ones(s: usize, ones: usize) -> BitString {
    let v: Vec<bool> = (0..s).map(|i| i < ones).collect();
    BitString::from_bits(&v).unwrap()
}

fn hamming(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn to_bools(w: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| w >> i & 1 == 1).collect()
}

fn epistasis_checks() -> bool {
    for nu in 2..=8 {
        let images: Vec<Vec<bool>> = (0u64..1 << nu).map(|w| epistasis_map(&to_bools(w, nu), nu)).collect();
        if images[0].iter().any(|&b| b) || images.iter().collect::<HashSet<_>>().len() != images.len() {
            return false;
        }
        for w in 0u64..1 << nu {
            for i in 0..nu {
                if hamming(&images[w as usize], &images[(w ^ 1 << i) as usize]) < nu - 1 {
                    return false;
                }
            }
        }
    }
    true
}

fn ruggedness_checks() -> bool {
    (1..=100usize).all(|n| {
        (0..=max_gamma(n)).all(|g| {
            let t = ruggedness_table(g, n).unwrap();
            let mut seen = vec![false; n + 1];
            for &v in &t {
                if v as usize > n || std::mem::replace(&mut seen[v as usize], true) {
                    return false;
                }
            }
            t[0] == 0 && (g != 0 || t.iter().enumerate().all(|(i, &v)| i as u64 == v))
        })
    })
}

fn wmodel_checks() -> bool {
    // instance 6: m = 1, nu = 2, so the pre-image of the alternating target is
    // found block by block
    let p6 = WModelParams::catalog(6).unwrap();
    let w6 = WModel::catalog(6).unwrap();
    let target: Vec<bool> = (0..p6.n).map(|i| i % 2 == 1).collect();
    let mut x = Vec::new();
    for block in target.chunks(2) {
        let pre = (0u64..4)
            .map(|w| to_bools(w, 2))
            .find(|c| epistasis_map(c, 2) == block)
            .unwrap();
        x.extend(pre);
    }
    let six = w6.evaluate(&BitString::from_bits(&x).unwrap()) == 0;
    let w1 = WModel::catalog(1).unwrap();
    let one = all_strings(20).map(|x| w1.evaluate(&x)).min() == Some(0);
    let base = ffalab_core::wmodel::base_objective;
    let hamming_oracle = |x: &[bool]| x.iter().enumerate().filter(|(i, &b)| b != (i % 2 == 1)).count() as u64;
    let b = ["010101", "101010", "01010", "01000"]
        .iter()
        .all(|s| base(&bits(s).to_bits()) == hamming_oracle(&bits(s).to_bits()));
    let n1 = neutrality_reduce(&bits("110010").to_bits(), 2, MajorityTie::Zero) == bits("100").to_bits();
    let n3 = neutrality_reduce(&bits("110001111").to_bits(), 3, MajorityTie::One) == bits("101").to_bits();
    six && one && b && n1 && n3 && epistasis_checks() && ruggedness_checks()
}

fn two_by_two() -> JsspInstance {
    JsspInstance::new(&[vec![(0, 3), (1, 2)], vec![(1, 2), (0, 4)]]).unwrap()
}

fn jssp_checks() -> Vec<(&'static str, bool)> {
    let inst = two_by_two();
    let seqs: Vec<Vec<u32>> = (0u32..16)
        .map(|w| (0..4).map(|i| w >> i & 1).collect::<Vec<u32>>())
        .filter(|g| g.iter().filter(|&&j| j == 0).count() == 2)
        .collect();
    let table: Vec<u64> = seqs.iter().map(|g| oracle_makespan(&inst, g)).collect();
    let decoder_agrees = seqs
        .iter()
        .all(|g| Decoder::new(&inst).makespan(g) == oracle_makespan(&inst, g));
    let optimum = *table.iter().min().unwrap();
    let ex = Decoder::new(&inst).makespan(&[0, 1, 0, 1]);
    let mut worst = OpSeq::new(&inst, vec![0, 0, 1, 1]).unwrap();
    let mut rng = RngState::from_seed(3);
    let start = Decoder::new(&inst).makespan(worst.genes());
    let mut dec = Decoder::new(&inst);
    let reached = swap_local_search(&mut rng, &mut worst, start, 10, &mut |g| Some(dec.makespan(g)));
    let ft06 = load_jssp("ft06");
    let a = OpSeq::random(&mut rng, &ft06);
    let b = OpSeq::random(&mut rng, &ft06);
    vec![
        (
            "2x2 decoder equals schedule oracle on all 6 sequences",
            decoder_agrees && seqs.len() == 6,
        ),
        (
            "2x2 [0,1,0,1] equals enumerated value (7; the stated 9 is not reproducible)",
            ex == table[seqs.iter().position(|g| g == &[0, 1, 0, 1]).unwrap()],
        ),
        (
            "2x2 local search reaches the enumerated optimum in 10 steps",
            reached == optimum,
        ),
        (
            "ft06 has 6 jobs and 6 machines",
            ft06.jobs() == 6 && ft06.machines() == 6,
        ),
        (
            "GOX with forced parent a returns a",
            gox_recombine_with(&a, &b, || true) == a,
        ),
    ]
}

fn maxsat_checks() -> Vec<(&'static str, bool)> {
    let text = fs::read_to_string(data("maxsat/uf20/uf20-01.cnf")).unwrap_or_default();
    let Ok(f) = parse_dimacs(&text) else {
        return vec![("uf20-01.cnf parses", false)];
    };
    let header = f.num_vars() == 20 && f.num_clauses() == 91;
    // exhaustive search for a satisfying assignment
    let model = (0u64..1 << 20).find(|&w| {
        f.clauses()
            .iter()
            .all(|c| c.iter().any(|&l| (w >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0)))
    });
    let zero = model
        .is_some_and(|w| MaxSat::new(f.clone(), "uf20-01").evaluate(&BitString::from_words(20, &[w]).unwrap()) == 0);
    vec![
        ("uf20-01.cnf has 20 variables and 91 clauses", header),
        ("uf20-01.cnf evaluates to 0 at a brute-force model", zero),
    ]
}

fn stats_checks() -> Vec<(&'static str, bool)> {
    let trace = |fes, ok: bool| RunTrace {
        events: vec![(1, 3), (fes, if ok { 0 } else { 1 })],
        status: if ok {
            ffalab_core::Status::OptimumFound
        } else {
            ffalab_core::Status::BudgetExhausted
        },
        fes: if ok { fes } else { 1000 },
    };
    let e = ert(&[trace(500, true), trace(20, false)]);
    let ecdf = ecdf_over_ert(&[3091.0, f64::INFINITY]).at(1e4);
    // type 7 via 1-based position 1 + (n - 1) q
    let q_oracle = |v: &[f64], q: f64| {
        let pos = 1.0 + (v.len() as f64 - 1.0) * q;
        let (lo, frac) = (pos.floor(), pos - pos.floor());
        let a = v[lo as usize - 1];
        let b = *v.get(lo as usize).unwrap_or(&a);
        a + frac * (b - a)
    };
    let q = quantile(&[4.0, 2.0, 1.0, 3.0], 0.159);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1.0);
    // weighted LSQ through the origin, hand formula
    let x = |s: f64| s * s * s.ln();
    let two = [(8.0, 300.0, 4.0), (16.0, 2000.0, 25.0)];
    let c_two = (300.0 * x(8.0) / 4.0 + 2000.0 * x(16.0) / 25.0) / (x(8.0).powi(2) / 4.0 + x(16.0).powi(2) / 25.0);
    let noisy = [
        (8.0, 5.0 * x(8.0), 1.0),
        (16.0, 5.0 * x(16.0), 1.0),
        (32.0, 5.0 * x(32.0), 1.0),
        (64.0, 100.0 * x(64.0), 1e12),
    ];
    let num: f64 = noisy.iter().map(|p| x(p.0) * p.1 / p.2).sum();
    let den: f64 = noisy.iter().map(|p| x(p.0).powi(2) / p.2).sum();
    let fit_noisy = fit_scale_model(&noisy).unwrap().c;
    vec![
        ("ERT of success@500 and failure@1000 is 1500", close(e, 1500.0)),
        ("ECDF of ERTs [3091, inf] at 1e4 is 0.5", ecdf == 0.5),
        (
            "quantile([1,2,3,4], 0.159) matches second implementation",
            close(q, q_oracle(&[1.0, 2.0, 3.0, 4.0], 0.159)),
        ),
        (
            "theory OneMax s=32 is 157.0710107931744",
            close(theory_ea_onemax(32), 157.0710107931744),
        ),
        ("theory LeadingOnes s=2 is 2.25", close(theory_ea_leadingones(2), 2.25)),
        (
            "theory LeadingOnes s=32 is 557.5359320994532",
            close(theory_ea_leadingones(32), 557.5359320994532),
        ),
        (
            "two-point weighted fit matches hand formula",
            close(fit_scale_model(&two).unwrap().c, c_two),
        ),
        (
            "outlier fit matches hand formula and stays near 5",
            close(fit_noisy, num / den) && (fit_noisy - 5.0).abs() < 1e-3,
        ),
    ]
}

fn criterion_11() -> Outcome {
    let mut checks: Vec<(&str, bool)> = Vec::new();
    let mut rng = RngState::from_seed(11);
    let draws = 100_000;
    let ones: usize = (0..draws)
        .map(|_| random_bitstring(&mut rng, 64).unwrap().count_ones())
        .sum();
    checks.push((
        "mean random bit 0.5 +-0.01",
        (ones as f64 / (64 * draws) as f64 - 0.5).abs() <= 0.01,
    ));
    let m = Mutator::new(32);
    let single = (0..draws).filter(|_| m.sample_flip_count(&mut rng) == 1).count() as f64 / draws as f64;
    let p = 32.0 * (1.0 / 32.0) * (31.0f64 / 32.0).powi(31) / (1.0 - (31.0f64 / 32.0).powi(32));
    checks.push((
        "P(one flip | s=32) matches conditional binomial formula (0.5858) +-0.01",
        (single - p).abs() <= 0.01,
    ));

    checks.push(("onemax 10110 = 2", onemax(&bits("10110")) == 2));
    checks.push(("leadingones 110101 = 4", leadingones(&bits("110101")) == 4));
    checks.push(("twomax s=32 |x|=16 is 17", twomax(&with_ones(32, 16)) == 17));
    checks.push((
        "jump s=32 k=6 at 30 and 26 ones is 36 and 6",
        jump(&with_ones(32, 30), 6) == 36 && jump(&with_ones(32, 26), 6) == 6,
    ));
    checks.push(("trap s=5 |x|=3 is 3", trap(&with_ones(5, 3)) == 3));
    checks.push((
        "plateau s=32 k=5 at 30 and 27 ones is 5",
        plateau(&with_ones(32, 30), 5) == 5 && plateau(&with_ones(32, 27), 5) == 5,
    ));
    checks.push((
        "exhaustive tables and tight bounds for s 3..12",
        exhaustive_problem_tables(),
    ));
    checks.push(("W-Model layers and instances 1 and 6", wmodel_checks()));

    let mut h = FrequencyTable::new(10);
    (0..10).for_each(|_| h.tick(4));
    (0..2).for_each(|_| h.tick(9));
    checks.push((
        "frequency hand trace accepts 9 over 4",
        h.tick_and_compare(4, 9, TieRule::Le) && h.get(4) == 11 && h.get(9) == 3,
    ));
    let md5 = wrap_objective(Benchmark::onemax(8).unwrap(), &Transform::Md5).unwrap();
    let keys: HashSet<_> = (0..=8).map(|v| md5.value_map().apply(v)).collect();
    checks.push(("md5 keys of OneMax values 0..8 are distinct", keys.len() == 9));

    checks.extend(jssp_checks());
    checks.extend(maxsat_checks());
    checks.extend(stats_checks());
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    if failed.is_empty() {
        (true, format!("{} oracle checks agree", checks.len()))
    } else {
        (false, format!("disagreeing: {}", failed.join("; ")))
    }
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters from the default harness are ignored
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 11] = [
        ("EA theory match, OneMax", criterion_1),
        ("EA theory match, LeadingOnes", criterion_2),
        ("FEA OneMax anchors and scaling fit", criterion_3),
        ("md5 invariance", criterion_4),
        ("bijection-class equality", criterion_5),
        ("TwoMax separation", criterion_6),
        ("W-Model instance 6", criterion_7),
        ("W-Model instance 1", criterion_8),
        ("MaxSat uf20", criterion_9),
        ("JSSP ft06 and ft10", criterion_10),
        ("oracle equivalence", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = check();
        failed += usize::from(!ok);
        println!(
            "criterion {:>2} {}: {name}: {detail} [{:.1}s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
