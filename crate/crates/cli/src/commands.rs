use std::fs;
use std::path::Path;
use std::time::Instant;

use hivecount::counting::{self, CountError};
use hivecount::hive::{build_hive_polytope, homogenize, interior_count, HiveError};
use hivecount::klimyk::{self, KlimykError, KostkaMethod};
use hivecount::latte::{LatteError, PolytopeFile};
use hivecount::polyhedra::HRepPolytope;
use hivecount::saturation::{self, SaturationError};
use hivecount::stretch::{self, StretchError};
use hivecount::weights::{parse_parts, HighestWeight, WeightError, WeightTriple};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::{MethodArg, OrderArg, Outcome, TripleArgs, ViaArg};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("self-check failed: naive = {naive}, barvinok = {barvinok}")]
    Mismatch { naive: BigInt, barvinok: BigInt },
    #[error("resource cap exceeded: {0}")]
    Cap(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Mismatch { .. } => 3,
            CliError::Cap(_) => 4,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<WeightError> for CliError {
    fn from(e: WeightError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<HiveError> for CliError {
    fn from(e: HiveError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<LatteError> for CliError {
    fn from(e: LatteError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            CountError::Hive(h) => h.into(),
            CountError::Unbounded => CliError::Input(e.to_string()),
            CountError::Polyhedra(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<KlimykError> for CliError {
    fn from(e: KlimykError) -> Self {
        match e {
            KlimykError::SizeCap { .. } => CliError::Cap(e.to_string()),
            KlimykError::Weight(w) => w.into(),
            KlimykError::Hive(h) => h.into(),
            KlimykError::Count(c) => c.into(),
        }
    }
}

impl From<StretchError> for CliError {
    fn from(e: StretchError) -> Self {
        match e {
            StretchError::Count(c) => c.into(),
            StretchError::EmptyRange | StretchError::InsufficientSamples { .. } => CliError::Input(e.to_string()),
            StretchError::NoFit { .. } => CliError::Internal(e.to_string()),
        }
    }
}

impl From<SaturationError> for CliError {
    fn from(e: SaturationError) -> Self {
        match e {
            SaturationError::BadOrder(_) | SaturationError::RhsLength { .. } | SaturationError::Parse(_) => {
                CliError::Input(e.to_string())
            }
            SaturationError::NoUnimodularCell { .. } => CliError::Internal(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn parse_triple(t: &TripleArgs) -> Result<WeightTriple, CliError> {
    Ok(WeightTriple::parse(&t.lambda, &t.mu, &t.nu)?)
}

/// Counts with the requested method; `both` runs the two and insists they agree.
fn count_with(
    method: MethodArg,
    seed: u64,
    cap: usize,
    naive: impl Fn(usize) -> Result<BigInt, CountError>,
    barvinok: impl Fn(u64) -> Result<BigInt, CountError>,
) -> Result<BigInt, CliError> {
    match method {
        MethodArg::Naive => Ok(naive(cap)?),
        MethodArg::Barvinok => Ok(barvinok(seed)?),
        MethodArg::Both => {
            let (n, b) = (naive(cap)?, barvinok(seed)?);
            if n != b {
                return Err(CliError::Mismatch { naive: n, barvinok: b });
            }
            Ok(b)
        }
    }
}

fn method_name(m: MethodArg) -> String {
    match m {
        MethodArg::Naive => "naive",
        MethodArg::Barvinok => "barvinok",
        MethodArg::Both => "both",
    }
    .to_string()
}

fn count_one(triple: &WeightTriple, method: MethodArg, seed: u64, cap: usize) -> Result<BigInt, CliError> {
    if !triple.sizes_balanced() {
        return Ok(BigInt::from(0));
    }
    let p = build_hive_polytope(triple)?.to_polytope();
    count_polytope_with(&p, method, seed, cap)
}

fn count_polytope_with(p: &HRepPolytope, method: MethodArg, seed: u64, cap: usize) -> Result<BigInt, CliError> {
    count_with(
        method,
        seed,
        cap,
        |cap| counting::count_naive_with_cap(p, cap).map(|r| r.value),
        |seed| counting::count_barvinok_seeded(p, seed).map(|r| r.value),
    )
}

pub fn count(t: &TripleArgs, method: MethodArg, seed: u64, cap: usize) -> Result<Outcome, CliError> {
    let triple = parse_triple(t)?;
    let value = count_one(&triple, method, seed, cap)?;
    Ok(Outcome {
        text: value.to_string(),
        result: json!({ "triple": triple, "coefficient": value.to_string() }),
        method: Some(method_name(method)),
        rank: Some(triple.parts()),
    })
}

pub fn count_polytope(path: &Path, method: MethodArg, seed: u64, cap: usize) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let file: PolytopeFile = text.parse()?;
    let value = count_polytope_with(&file.to_polytope()?, method, seed, cap)?;
    Ok(Outcome {
        text: value.to_string(),
        result: json!({ "dimension": file.dim, "count": value.to_string() }),
        method: Some(method_name(method)),
        rank: None,
    })
}

/// Parses `lambda mu nu` (whitespace or `;` separated, `#` comments).
pub fn parse_triple_line(line: &str) -> Result<Option<WeightTriple>, CliError> {
    let line = line.split('#').next().unwrap_or("").trim();
    if line.is_empty() {
        return Ok(None);
    }
    let fields: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ';').filter(|s| !s.is_empty()).collect();
    let [l, m, n] = fields[..] else {
        return Err(CliError::Input(format!("expected three weights, got {line:?}")));
    };
    Ok(Some(WeightTriple::parse(l, m, n)?))
}

pub fn count_file(path: &Path, method: MethodArg, seed: u64, cap: usize) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut out = String::new();
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let triple = parse_triple_line(line).map_err(|e| CliError::Input(format!("line {}: {e}", i + 1)))?;
        let Some(triple) = triple else { continue };
        let start = Instant::now();
        let value = count_one(&triple, method, seed, cap)?;
        out.push_str(&format!("{value}\n"));
        rows.push(json!({
            "triple": triple,
            "coefficient": value.to_string(),
            "rank": triple.parts(),
            "ms": start.elapsed().as_secs_f64() * 1e3,
        }));
    }
    Ok(Outcome {
        text: out,
        result: Value::Array(rows),
        method: Some(method_name(method)),
        rank: None,
    })
}

pub fn nonzero(t: &TripleArgs) -> Result<Outcome, CliError> {
    let triple = parse_triple(t)?;
    let nz = counting::is_nonzero(&triple)?;
    Ok(Outcome {
        text: if nz { "nonzero" } else { "zero" }.into(),
        result: json!({ "triple": triple, "nonzero": nz }),
        method: Some("lp".into()),
        rank: Some(triple.parts()),
    })
}

pub fn kostka(lambda: &str, mu: &str, via: ViaArg) -> Result<Outcome, CliError> {
    let lambda: HighestWeight = lambda.parse()?;
    let content = parse_parts(mu)?;
    let method = match via {
        ViaArg::Direct => KostkaMethod::Direct,
        ViaArg::Hive => KostkaMethod::Hive,
    };
    let value = klimyk::kostka(&lambda, &content, method)?;
    Ok(Outcome {
        text: value.to_string(),
        result: json!({ "lambda": lambda, "mu": content, "kostka": value.to_string() }),
        method: Some(serde_json::to_value(method).expect("enum serializes").as_str().unwrap_or_default().into()),
        rank: Some(lambda.len().max(content.len())),
    })
}

pub fn klimyk(lambda: &str, mu: &str, cap: u64) -> Result<Outcome, CliError> {
    let lambda: HighestWeight = lambda.parse()?;
    let mu: HighestWeight = mu.parse()?;
    let terms = klimyk::klimyk_decompose_with_cap(&lambda, &mu, cap)?;
    let text: String = terms.iter().map(|t| format!("{} {}\n", t.nu, t.multiplicity)).collect();
    Ok(Outcome {
        text,
        result: json!({ "lambda": lambda, "mu": mu, "terms": terms }),
        method: Some("klimyk".into()),
        rank: Some(lambda.len().max(mu.len())),
    })
}

pub fn stretch(t: &TripleArgs, n_max: Option<u64>, periods: &[usize]) -> Result<Outcome, CliError> {
    let triple = parse_triple(t)?;
    if periods.is_empty() || periods.contains(&0) {
        return Err(CliError::Input("periods must be positive".into()));
    }
    let degree = interior_count(triple.parts());
    let n_max = n_max.unwrap_or_else(|| {
        periods
            .iter()
            .map(|&p| stretch::required_samples(degree, p))
            .max()
            .unwrap_or(1)
    });
    let report = stretch::conjecture2_report_with(&triple, n_max, periods)?;
    let result = serde_json::to_value(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(Outcome {
        text: serde_json::to_string_pretty(&result).expect("value serializes"),
        result,
        method: Some("barvinok".into()),
        rank: Some(triple.parts()),
    })
}

pub fn triangulate(rank: usize, order: OrderArg, seed: u64, output: Option<&Path>) -> Result<Outcome, CliError> {
    if rank < 2 {
        return Err(CliError::Input("triangulate needs --rank >= 2".into()));
    }
    let cfg = saturation::hive_matrix(rank);
    let order_v = match order {
        OrderArg::Natural => saturation::natural_order(cfg.ncols()),
        OrderArg::Random => saturation::random_order(cfg.ncols(), seed),
    };
    let t = saturation::triangulate(&cfg, &order_v)?;
    let check = saturation::is_unimodular(&t);
    let file = t.export(rank, &cfg);
    let mut text = String::new();
    match output {
        Some(path) => fs::write(path, &file).map_err(|e| io_err(path, e))?,
        None => text.push_str(&file),
    }
    let verdict = if check.unimodular { "PASS" } else { "FAIL" };
    text.push_str(&format!("{verdict} unimodular rank={rank} cells={}", t.cells.len()));
    if let Some(w) = &check.witness {
        let idx: Vec<String> = w.columns.iter().map(|c| (c + 1).to_string()).collect();
        text.push_str(&format!(" witness=[{}] det={}", idx.join(" "), w.determinant));
    }
    text.push('\n');
    Ok(Outcome {
        text,
        result: json!({
            "rows": cfg.rows,
            "columns": cfg.ncols(),
            "cells": t.cells.len(),
            "unimodular": check.unimodular,
            "witness": check.witness.map(|w| json!({
                "columns": w.columns.iter().map(|c| c + 1).collect::<Vec<_>>(),
                "determinant": w.determinant.to_string(),
            })),
            "insertion_order": order_v.iter().map(|c| c + 1).collect::<Vec<_>>(),
            "output": output.map(|p| p.display().to_string()),
        }),
        method: Some("placing".into()),
        rank: Some(rank),
    })
}

/// `{ x >= 0 : M x = b }` as an H-polytope.
fn homogenized_polytope(triple: &WeightTriple) -> Result<HRepPolytope, CliError> {
    let (m, b) = homogenize(&build_hive_polytope(triple)?);
    let n = m.ncols();
    let nonneg: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { -1 } else { 0 }).collect())
        .collect();
    HRepPolytope::new(n, m.rows.clone(), b.b, nonneg, vec![0; n]).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn export(t: &TripleArgs, homogenized: bool, output: Option<&Path>) -> Result<Outcome, CliError> {
    let triple = parse_triple(t)?;
    let p = if homogenized {
        homogenized_polytope(&triple)?
    } else {
        build_hive_polytope(&triple)?.to_polytope()
    };
    let file = PolytopeFile::from_polytope(&p);
    let body = file.to_string();
    let text = match output {
        Some(path) => {
            fs::write(path, &body).map_err(|e| io_err(path, e))?;
            String::new()
        }
        None => body.clone(),
    };
    Ok(Outcome {
        text,
        result: json!({
            "rows": file.rows.len(),
            "dimension": file.dim,
            "linearity": file.linearity.len(),
            "inequalities": file.inequality_count(),
            "homogenized": homogenized,
            "file": body,
        }),
        method: None,
        rank: Some(triple.parts()),
    })
}
