//! Problem and transform spec strings.
//!
//! Problems: `onemax:s=N`, `leadingones:s=N`, `twomax:s=N`, `jump:s=N,k=K`,
//! `trap:s=N`, `plateau:s=N,k=K`, `wmodel:id=I`,
//! `wmodel:n=N,m=M,nu=V,gamma=G` (both W-Model forms take an optional
//! `tie=0|1`), `maxsat:path=FILE`, `maxsat:dir=DIR,glob=PATTERN` and
//! `jssp:path=FILE[,target=T]`.
//!
//! Transforms: `identity`, `neg`, `affine:a=A,b=B`, `perm:seed=S`, `md5`.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ffalab_core::jssp::parse_orlib;
use ffalab_core::maxsat::parse_dimacs;
use ffalab_core::wmodel::{MajorityTie, DEFAULT_TIE};
use ffalab_core::{Benchmark, BenchmarkKind, JsspInstance, MaxSat, Objective, Transform, WModel, WModelParams};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WModelSource {
    Catalog(usize),
    Custom(WModelParams),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemSpec {
    Benchmark(Benchmark),
    WModel { source: WModelSource, tie: MajorityTie },
    MaxSat { path: PathBuf },
    MaxSatDir { dir: PathBuf, glob: String },
    Jssp { path: PathBuf, target: Option<u64> },
}

/// Splits `name:k=v,k=v` and checks the key set.
struct Fields<'a> {
    spec: &'a str,
    values: HashMap<&'a str, &'a str>,
}

impl<'a> Fields<'a> {
    fn parse(spec: &'a str, rest: &'a str) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| usage(spec, format!("expected key=value, found {part:?}")))?;
            if values.insert(k, v).is_some() {
                return Err(usage(spec, format!("duplicate key {k:?}")));
            }
        }
        Ok(Fields { spec, values })
    }

    fn only(&self, allowed: &[&str]) -> Result<(), CliError> {
        match self.values.keys().find(|k| !allowed.contains(k)) {
            Some(k) => Err(usage(self.spec, format!("unknown key {k:?}"))),
            None => Ok(()),
        }
    }

    fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn str(&self, key: &str) -> Result<&'a str, CliError> {
        self.values
            .get(key)
            .copied()
            .ok_or_else(|| usage(self.spec, format!("missing key {key:?}")))
    }

    fn num<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        let v = self.str(key)?;
        v.parse()
            .map_err(|_| usage(self.spec, format!("{key}={v} is not a valid number")))
    }

    fn opt_num<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        if self.has(key) {
            self.num(key).map(Some)
        } else {
            Ok(None)
        }
    }
}

fn usage(spec: &str, msg: impl fmt::Display) -> CliError {
    CliError::Usage(format!("{spec:?}: {msg}"))
}

impl FromStr for ProblemSpec {
    type Err = CliError;

    fn from_str(spec: &str) -> Result<Self, CliError> {
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let f = Fields::parse(spec, rest)?;
        let bench = |kind: BenchmarkKind, s: usize| {
            Benchmark::new(kind, s)
                .map(ProblemSpec::Benchmark)
                .map_err(|e| usage(spec, e))
        };
        match name {
            "onemax" | "leadingones" | "twomax" | "trap" => {
                f.only(&["s"])?;
                let kind = match name {
                    "onemax" => BenchmarkKind::OneMax,
                    "leadingones" => BenchmarkKind::LeadingOnes,
                    "twomax" => BenchmarkKind::TwoMax,
                    _ => BenchmarkKind::Trap,
                };
                bench(kind, f.num("s")?)
            }
            "jump" | "plateau" => {
                f.only(&["s", "k"])?;
                let k = f.num("k")?;
                let kind = if name == "jump" {
                    BenchmarkKind::Jump { k }
                } else {
                    BenchmarkKind::Plateau { k }
                };
                bench(kind, f.num("s")?)
            }
            "wmodel" => {
                let tie = match f.values.get("tie").copied() {
                    None => DEFAULT_TIE,
                    Some("0") => MajorityTie::Zero,
                    Some("1") => MajorityTie::One,
                    Some(v) => return Err(usage(spec, format!("tie={v}, expected 0 or 1"))),
                };
                let source = if f.has("id") {
                    f.only(&["id", "tie"])?;
                    let id = f.num("id")?;
                    WModelParams::catalog(id).map_err(|e| usage(spec, e))?;
                    WModelSource::Catalog(id)
                } else {
                    f.only(&["n", "m", "nu", "gamma", "tie"])?;
                    WModelSource::Custom(WModelParams {
                        n: f.num("n")?,
                        m: f.num("m")?,
                        nu: f.num("nu")?,
                        gamma: f.num("gamma")?,
                    })
                };
                let p = ProblemSpec::WModel { source, tie };
                p.wmodel().map_err(|e| usage(spec, e))?;
                Ok(p)
            }
            "maxsat" if f.has("dir") => {
                f.only(&["dir", "glob"])?;
                Ok(ProblemSpec::MaxSatDir {
                    dir: f.str("dir")?.into(),
                    glob: if f.has("glob") { f.str("glob")? } else { "*.cnf" }.to_string(),
                })
            }
            "maxsat" => {
                f.only(&["path"])?;
                Ok(ProblemSpec::MaxSat {
                    path: f.str("path")?.into(),
                })
            }
            "jssp" => {
                f.only(&["path", "target"])?;
                Ok(ProblemSpec::Jssp {
                    path: f.str("path")?.into(),
                    target: f.opt_num("target")?,
                })
            }
            _ => Err(usage(spec, format!("unknown problem {name:?}"))),
        }
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemSpec::Benchmark(b) => write!(f, "{b}"),
            ProblemSpec::WModel { source, tie } => {
                match source {
                    WModelSource::Catalog(id) => write!(f, "wmodel:id={id}")?,
                    WModelSource::Custom(p) => write!(f, "wmodel:n={},m={},nu={},gamma={}", p.n, p.m, p.nu, p.gamma)?,
                }
                if *tie != DEFAULT_TIE {
                    let t = if *tie == MajorityTie::Zero { 0 } else { 1 };
                    write!(f, ",tie={t}")?;
                }
                Ok(())
            }
            ProblemSpec::MaxSat { path } => write!(f, "maxsat:path={}", path.display()),
            ProblemSpec::MaxSatDir { dir, glob } => write!(f, "maxsat:dir={},glob={glob}", dir.display()),
            ProblemSpec::Jssp { path, target } => {
                write!(f, "jssp:path={}", path.display())?;
                if let Some(t) = target {
                    write!(f, ",target={t}")?;
                }
                Ok(())
            }
        }
    }
}

/// A problem ready to run.
pub enum Loaded {
    Bits(Box<dyn Objective>),
    Jssp {
        instance: JsspInstance,
        target: Option<u64>,
    },
}

impl Loaded {
    pub fn dimension(&self) -> usize {
        match self {
            Loaded::Bits(p) => p.dimension(),
            Loaded::Jssp { instance, .. } => instance.genes(),
        }
    }
}

/// Best known makespans keyed by instance name (file stem).
#[derive(Debug, Clone, Default)]
pub struct Bks(HashMap<String, u64>);

impl Bks {
    /// Reads `instance,bks` lines; a header line is skipped.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut map = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with("instance")) {
                continue;
            }
            let parsed = line
                .split_once(',')
                .and_then(|(name, v)| Some((name.trim().to_string(), v.trim().parse().ok()?)));
            let (name, v) = parsed.ok_or_else(|| CliError::Fail(format!("{}:{}: bad line", path.display(), i + 1)))?;
            map.insert(name, v);
        }
        Ok(Bks(map))
    }

    pub fn get(&self, instance: &str) -> Option<u64> {
        self.0.get(instance).copied()
    }
}

impl ProblemSpec {
    fn wmodel(&self) -> Result<WModel, ffalab_core::Error> {
        let ProblemSpec::WModel { source, tie } = self else {
            unreachable!("not a W-Model spec")
        };
        let params = match source {
            WModelSource::Catalog(id) => WModelParams::catalog(*id)?,
            WModelSource::Custom(p) => *p,
        };
        WModel::with_tie(params, *tie)
    }

    /// Resolves directory specs into one spec per matching file, in natural
    /// file-name order.
    pub fn expand(&self) -> Result<Vec<ProblemSpec>, CliError> {
        let ProblemSpec::MaxSatDir { dir, glob: pattern } = self else {
            return Ok(vec![self.clone()]);
        };
        if !dir.is_dir() {
            return Err(CliError::io(dir, "not a directory"));
        }
        let full = dir.join(pattern);
        let paths = glob::glob(&full.to_string_lossy()).map_err(|e| usage(&self.to_string(), e))?;
        let mut files: Vec<PathBuf> = paths.filter_map(Result::ok).filter(|p| p.is_file()).collect();
        if files.is_empty() {
            return Err(CliError::Io(format!("no files match {}", full.display())));
        }
        files.sort_by_key(|p| natural_key(p));
        Ok(files.into_iter().map(|path| ProblemSpec::MaxSat { path }).collect())
    }

    /// Fills in a job shop target from `bks` when the spec has none.
    pub fn with_bks(self, bks: Option<&Bks>) -> Self {
        match (self, bks) {
            (ProblemSpec::Jssp { path, target: None }, Some(bks)) => {
                let target = path.file_stem().and_then(|s| bks.get(&s.to_string_lossy()));
                ProblemSpec::Jssp { path, target }
            }
            (p, _) => p,
        }
    }

    pub fn load(&self) -> Result<Loaded, CliError> {
        Ok(match self {
            ProblemSpec::Benchmark(b) => Loaded::Bits(Box::new(*b)),
            ProblemSpec::WModel { .. } => Loaded::Bits(Box::new(self.wmodel()?)),
            ProblemSpec::MaxSat { path } => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                let formula = parse_dimacs(&text).map_err(|e| CliError::Fail(format!("{}: {e}", path.display())))?;
                Loaded::Bits(Box::new(MaxSat::new(formula, self.to_string())))
            }
            ProblemSpec::MaxSatDir { .. } => {
                return Err(usage(&self.to_string(), "directory specs must be expanded first"))
            }
            ProblemSpec::Jssp { path, target } => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                let instance = parse_orlib(&text).map_err(|e| CliError::Fail(format!("{}: {e}", path.display())))?;
                Loaded::Jssp {
                    instance,
                    target: *target,
                }
            }
        })
    }

    /// Problems read from a file report that file's directory here; stats
    /// aggregate instance sets by it.
    pub fn instance_set(&self) -> Option<PathBuf> {
        match self {
            ProblemSpec::MaxSat { path } | ProblemSpec::Jssp { path, .. } => {
                Some(path.parent().map(Path::to_path_buf).unwrap_or_default())
            }
            _ => None,
        }
    }
}

/// Orders `uf20-9.cnf` before `uf20-10.cnf`.
fn natural_key(path: &Path) -> Vec<(String, u64)> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut key = Vec::new();
    let mut text = String::new();
    let mut digits = String::new();
    for c in name.chars() {
        if c.is_ascii_digit() {
            digits.push(c);
        } else {
            if !digits.is_empty() {
                key.push((std::mem::take(&mut text), digits.parse().unwrap_or(u64::MAX)));
                digits.clear();
            }
            text.push(c);
        }
    }
    key.push((
        text,
        if digits.is_empty() {
            0
        } else {
            digits.parse().unwrap_or(u64::MAX)
        },
    ));
    key
}

pub fn parse_transform(spec: &str) -> Result<Transform, CliError> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let f = Fields::parse(spec, rest)?;
    let t = match name {
        "identity" => Transform::Identity,
        "neg" => Transform::Negation,
        "md5" => Transform::Md5,
        "affine" => {
            f.only(&["a", "b"])?;
            let a: u64 = f.num("a")?;
            if a == 0 {
                return Err(usage(spec, "affine slope a must be positive"));
            }
            Transform::Affine { a, b: f.num("b")? }
        }
        "perm" => {
            f.only(&["seed"])?;
            Transform::Permutation { seed: f.num("seed")? }
        }
        _ => return Err(usage(spec, format!("unknown transform {name:?}"))),
    };
    if !matches!(t, Transform::Affine { .. } | Transform::Permutation { .. }) {
        f.only(&[])?;
    }
    Ok(t)
}
