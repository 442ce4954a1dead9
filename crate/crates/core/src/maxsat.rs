//! MAX-SAT over DIMACS CNF formulas: the objective counts unsatisfied
//! clauses.

use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

use crate::bitstring::BitString;
use crate::problems::Objective;
use crate::rng::RngState;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: missing `p cnf <vars> <clauses>` header")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header: {text}")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: invalid literal {token:?}")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: literal {literal} references a variable outside 1..={vars}")]
    LiteralOutOfRange { line: usize, literal: i64, vars: usize },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("line {line}: header declares {declared} clauses, found {found}")]
    ClauseCount { line: usize, declared: usize, found: usize },
    #[error("line {line}: last clause is not terminated by 0")]
    Unterminated { line: usize },
}

/// A CNF formula; literal `v` means variable `v` is true, `-v` false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    /// Checks variable ranges and that no clause is empty.
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, DimacsError> {
        for c in &clauses {
            if c.is_empty() {
                return Err(DimacsError::EmptyClause { line: 0 });
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(DimacsError::LiteralOutOfRange {
                        line: 0,
                        literal: l as i64,
                        vars: num_vars,
                    });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Writes the formula in DIMACS CNF form.
    pub fn write_dimacs<W: Write>(&self, mut w: W, comment: Option<&str>) -> io::Result<()> {
        if let Some(c) = comment {
            for line in c.lines() {
                writeln!(w, "c {line}")?;
            }
        }
        writeln!(w, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for c in &self.clauses {
            for l in c {
                write!(w, "{l} ")?;
            }
            writeln!(w, "0")?;
        }
        Ok(())
    }
}

/// Parses DIMACS CNF text.
///
/// Comment lines start with `c`. Clauses may span lines and are ended by
/// `0`. A line starting with `%` ends the clause section, as in the SATLib
/// uniform random 3-SAT files.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::BadHeader {
                    line,
                    text: "duplicate header".into(),
                });
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse::<usize>().ok().zip(c.parse::<usize>().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| DimacsError::BadHeader {
                line,
                text: trimmed.to_string(),
            })?);
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(DimacsError::MissingHeader { line });
        };
        for token in trimmed.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| DimacsError::BadLiteral {
                line,
                token: token.to_string(),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(DimacsError::EmptyClause { line });
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > vars {
                    return Err(DimacsError::LiteralOutOfRange {
                        line,
                        literal: lit,
                        vars,
                    });
                }
                current.push(lit as i32);
            }
        }
    }
    let Some((vars, declared)) = header else {
        return Err(DimacsError::MissingHeader { line: last_line.max(1) });
    };
    if !current.is_empty() {
        return Err(DimacsError::Unterminated { line: last_line });
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCount {
            line: last_line,
            declared,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula {
        num_vars: vars,
        clauses,
    })
}

/// Number of clauses left unsatisfied by `x` (variable `i` is bit `i - 1`).
pub fn maxsat_evaluate(formula: &CnfFormula, x: &BitString) -> Result<u64, crate::Error> {
    if x.len() != formula.num_vars {
        return Err(crate::Error::LengthMismatch {
            expected: formula.num_vars,
            found: x.len(),
        });
    }
    Ok(formula
        .clauses
        .iter()
        .filter(|c| !c.iter().any(|&l| x.get(l.unsigned_abs() as usize - 1) == (l > 0)))
        .count() as u64)
}

/// MAX-SAT objective with clauses flattened for fast evaluation.
#[derive(Debug, Clone)]
pub struct MaxSat {
    formula: CnfFormula,
    /// literal variable index (0-based) and polarity
    literals: Vec<(u32, bool)>,
    offsets: Vec<u32>,
    name: String,
}

impl MaxSat {
    pub fn new(formula: CnfFormula, name: impl Into<String>) -> Self {
        let mut literals = Vec::new();
        let mut offsets = vec![0u32];
        for c in &formula.clauses {
            literals.extend(c.iter().map(|&l| (l.unsigned_abs() - 1, l > 0)));
            offsets.push(literals.len() as u32);
        }
        MaxSat {
            formula,
            literals,
            offsets,
            name: name.into(),
        }
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }
}

impl Objective for MaxSat {
    fn dimension(&self) -> usize {
        self.formula.num_vars
    }

    fn upper_bound(&self) -> u64 {
        self.formula.clauses.len() as u64
    }

    fn evaluate(&self, x: &BitString) -> u64 {
        debug_assert_eq!(x.len(), self.formula.num_vars);
        let words = x.words();
        let mut unsat = 0;
        for w in self.offsets.windows(2) {
            let sat = self.literals[w[0] as usize..w[1] as usize].iter().any(|&(v, pos)| {
                let bit = (words[v as usize / 64] >> (v % 64)) & 1 == 1;
                bit == pos
            });
            unsat += u64::from(!sat);
        }
        unsat
    }
}

impl fmt::Display for MaxSat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Uniform random k-SAT: each clause has `k` distinct variables, each
/// negated with probability 1/2.
pub fn random_ksat(rng: &mut RngState, num_vars: usize, num_clauses: usize, k: usize) -> CnfFormula {
    assert!(k >= 1 && k <= num_vars, "clause width must be in 1..=num_vars");
    let clauses = (0..num_clauses)
        .map(|_| {
            let mut clause: Vec<i32> = Vec::with_capacity(k);
            while clause.len() < k {
                let v = rng.index(num_vars) as i32 + 1;
                if clause.iter().all(|l| l.abs() != v) {
                    clause.push(if rng.coin() { v } else { -v });
                }
            }
            clause
        })
        .collect();
    CnfFormula { num_vars, clauses }
}

/// Exhaustive satisfiability check for formulas with at most 30 variables.
/// Returns the satisfying assignment with the smallest binary encoding.
pub fn brute_force_model(formula: &CnfFormula) -> Option<BitString> {
    assert!(formula.num_vars <= 30, "exhaustive search limited to 30 variables");
    let masks: Vec<(u32, u32)> = formula
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0u32, 0u32), |(pos, neg), &l| {
                let bit = 1u32 << (l.unsigned_abs() - 1);
                if l > 0 {
                    (pos | bit, neg)
                } else {
                    (pos, neg | bit)
                }
            })
        })
        .collect();
    (0u32..1 << formula.num_vars)
        .find(|&a| masks.iter().all(|&(pos, neg)| (a & pos) | (!a & neg) != 0))
        .map(|a| BitString::from_words(formula.num_vars, &[a as u64]).expect("nonempty formula"))
}
