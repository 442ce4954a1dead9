//! Run log format.
//!
//! ```text
//! # algo=fea problem=onemax:s=32 transform=identity seed=7 budget=1000000 rng=pcg64mcg tie=le
//! 1;17
//! 3;16
//! ...
//! # end status=optimum_found fes=1412
//! ```

use std::fmt::Write as _;

use ffalab_core::ffa::TieRule;
use ffalab_core::solvers::{Algorithm, RunTrace, Status};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogHeader {
    pub algo: Algorithm,
    pub problem: String,
    pub transform: String,
    pub seed: u64,
    pub budget: u64,
    pub rng: String,
    pub tie: TieRule,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LogError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("missing end line")]
    Truncated,
}

fn malformed(line: usize, msg: impl Into<String>) -> LogError {
    LogError::Malformed { line, msg: msg.into() }
}

pub fn header_line(h: &LogHeader) -> String {
    format!(
        "# algo={} problem={} transform={} seed={} budget={} rng={} tie={}",
        h.algo, h.problem, h.transform, h.seed, h.budget, h.rng, h.tie
    )
}

pub fn write_log(h: &LogHeader, trace: &RunTrace) -> String {
    let mut out = header_line(h);
    out.push('\n');
    for (fe, y) in &trace.events {
        writeln!(out, "{fe};{y}").unwrap();
    }
    writeln!(out, "# end status={} fes={}", trace.status, trace.fes).unwrap();
    out
}

const HEADER_KEYS: [&str; 7] = ["algo", "problem", "transform", "seed", "budget", "rng", "tie"];

pub fn parse_header(line: &str) -> Result<LogHeader, LogError> {
    let body = line
        .strip_prefix("# ")
        .ok_or_else(|| malformed(1, "header must start with '# '"))?;
    let tokens: Vec<&str> = body.split(' ').collect();
    if tokens.len() != HEADER_KEYS.len() {
        return Err(malformed(1, format!("expected {} header fields", HEADER_KEYS.len())));
    }
    let mut values = [""; 7];
    for ((tok, key), slot) in tokens.iter().zip(HEADER_KEYS).zip(values.iter_mut()) {
        *slot = tok
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .filter(|v| !v.is_empty())
            .ok_or_else(|| malformed(1, format!("expected {key}=..., found {tok:?}")))?;
    }
    let num = |i: usize| {
        values[i]
            .parse::<u64>()
            .map_err(|_| malformed(1, format!("{}={} is not a u64", HEADER_KEYS[i], values[i])))
    };
    Ok(LogHeader {
        algo: values[0].parse().map_err(|_| malformed(1, "unknown algorithm"))?,
        problem: values[1].to_string(),
        transform: values[2].to_string(),
        seed: num(3)?,
        budget: num(4)?,
        rng: values[5].to_string(),
        tie: values[6].parse().map_err(|_| malformed(1, "unknown tie rule"))?,
    })
}

pub fn parse_log(text: &str) -> Result<(LogHeader, RunTrace), LogError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or(LogError::Truncated)?;
    let header = parse_header(first)?;
    let mut events = Vec::new();
    for (no, line) in lines.by_ref() {
        if let Some(end) = line.strip_prefix("# end ") {
            let (status, fes) = parse_end(no, end)?;
            if let Some((extra, _)) = lines.find(|(_, l)| !l.is_empty()) {
                return Err(malformed(extra, "content after end line"));
            }
            return Ok((header, RunTrace { events, status, fes }));
        }
        let (fe, y) = line
            .split_once(';')
            .and_then(|(a, b)| Some((a.parse::<u64>().ok()?, b.parse::<u64>().ok()?)))
            .ok_or_else(|| malformed(no, format!("expected <fe>;<value>, found {line:?}")))?;
        events.push((fe, y));
    }
    Err(LogError::Truncated)
}

fn parse_end(no: usize, end: &str) -> Result<(Status, u64), LogError> {
    let mut it = end.split(' ');
    let status = it
        .next()
        .and_then(|t| t.strip_prefix("status="))
        .and_then(|v| v.parse::<Status>().ok())
        .ok_or_else(|| malformed(no, "bad status"))?;
    let fes = it
        .next()
        .and_then(|t| t.strip_prefix("fes="))
        .and_then(|v| v.parse::<u64>().ok())
        .ok_or_else(|| malformed(no, "bad fes"))?;
    if it.next().is_some() {
        return Err(malformed(no, "extra fields in end line"));
    }
    Ok((status, fes))
}
