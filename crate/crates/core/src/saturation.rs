//! Unimodular placing triangulations of the homogenized hive matrix and integral vertices of
//! g-hive polytopes `{ x >= 0 : M x = b }`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::hive::{GHiveRhs, HiveMatrix};
use crate::linalg::{self, big_vec, mat_vec};
use crate::polyhedra::{LinearProgram, LpOutcome};
use crate::triangulation::{coefficients, placing_triangulation, PlacingResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SaturationError {
    #[error("insertion order is not a permutation of 0..{0}")]
    BadOrder(usize),
    #[error("right-hand side has {got} entries, the configuration has {expected} rows")]
    RhsLength { got: usize, expected: usize },
    #[error("b lies only in non-unimodular cells, e.g. {cell:?} with determinant {determinant}")]
    NoUnimodularCell { cell: Vec<usize>, determinant: BigInt },
    #[error("cannot parse triangulation: {0}")]
    Parse(String),
}

/// Integral column vectors `a_1..a_n` in `Z^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfiguration {
    pub rows: usize,
    pub columns: Vec<Vec<i64>>,
}

impl PointConfiguration {
    pub fn new(rows: usize, columns: Vec<Vec<i64>>) -> Self {
        debug_assert!(columns.iter().all(|c| c.len() == rows));
        Self { rows, columns }
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    fn big_columns(&self) -> Vec<Vec<BigInt>> {
        self.columns.iter().map(|c| big_vec(c)).collect()
    }

    fn big_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| self.columns.iter().map(|c| BigInt::from(c[r])).collect())
            .collect()
    }
}

/// Columns of `M = [B 0; R I]`: hive variables first, then slacks.
pub fn hive_matrix(rank: usize) -> PointConfiguration {
    let m = HiveMatrix::for_rank(rank);
    PointConfiguration::new(m.nrows(), m.columns())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialCell {
    /// Sorted 0-based column indices.
    pub columns: Vec<usize>,
    pub determinant: BigInt,
}

impl SimplicialCell {
    pub fn is_unimodular(&self) -> bool {
        self.determinant.abs().is_one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub cells: Vec<SimplicialCell>,
    pub insertion_order: Vec<usize>,
    placing: PlacingResult,
}

impl Triangulation {
    /// Dimension of the linear span of the configuration.
    pub fn span_rank(&self) -> usize {
        self.placing.rank
    }

    /// Cells whose cone contains `b`, with the coefficients of `b` in the cell's columns.
    pub fn locate(&self, b: &[BigInt]) -> Vec<(usize, Vec<BigRational>)> {
        let p = self.placing.basis.project(b);
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, cell)| {
                let c = coefficients(&self.placing.coords, &cell.columns, &p);
                c.iter().all(|v| !v.is_negative()).then_some((i, c))
            })
            .collect()
    }

    /// Text form: `rank rows columns cells` header, then one cell per line as sorted 1-based
    /// column indices.
    pub fn export(&self, rank: usize, cfg: &PointConfiguration) -> String {
        let mut s = format!("{} {} {} {}\n", rank, cfg.rows, cfg.ncols(), self.cells.len());
        for cell in &self.cells {
            let idx: Vec<String> = cell.columns.iter().map(|c| (c + 1).to_string()).collect();
            let _ = writeln!(s, "{}", idx.join(" "));
        }
        s
    }
}

/// Parses the cell list written by [`Triangulation::export`]; returns the header fields
/// and 0-based cells.
pub fn parse_triangulation(text: &str) -> Result<([usize; 4], Vec<Vec<usize>>), SaturationError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| SaturationError::Parse("empty input".into()))?;
    let fields: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| SaturationError::Parse(format!("bad header {header:?}"))))
        .collect::<Result<_, _>>()?;
    let header: [usize; 4] = fields
        .try_into()
        .map_err(|_| SaturationError::Parse("header needs four fields".into()))?;
    let cells: Vec<Vec<usize>> = lines
        .map(|l| {
            l.split_whitespace()
                .map(|t| match t.parse::<usize>() {
                    Ok(v) if v >= 1 && v <= header[2] => Ok(v - 1),
                    _ => Err(SaturationError::Parse(format!("bad index {t:?}"))),
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if cells.len() != header[3] {
        return Err(SaturationError::Parse(format!(
            "header announces {} cells, found {}",
            header[3],
            cells.len()
        )));
    }
    Ok((header, cells))
}

pub fn natural_order(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// A uniformly random insertion order, reproducible from `seed`.
pub fn random_order(n: usize, seed: u64) -> Vec<usize> {
    let mut order = natural_order(n);
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

/// Placing triangulation of `cone(cfg)`, with determinants measured in the lattice
/// `span ∩ Z^m`.
pub fn triangulate(cfg: &PointConfiguration, order: &[usize]) -> Result<Triangulation, SaturationError> {
    let n = cfg.ncols();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(SaturationError::BadOrder(n));
    }
    let placing = placing_triangulation(&cfg.big_columns(), cfg.rows, order);
    let cells = placing
        .cells
        .par_iter()
        .map(|c| SimplicialCell {
            columns: c.clone(),
            determinant: placing.cell_determinant(c),
        })
        .collect();
    Ok(Triangulation {
        cells,
        insertion_order: order.to_vec(),
        placing,
    })
}

/// Result of a unimodularity check; `witness` is the first cell with `|det| != 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularityCheck {
    pub unimodular: bool,
    pub witness: Option<SimplicialCell>,
}

pub fn is_unimodular(t: &Triangulation) -> UnimodularityCheck {
    let witness = t.cells.iter().find(|c| !c.is_unimodular()).cloned();
    UnimodularityCheck {
        unimodular: witness.is_none(),
        witness,
    }
}

/// An integral vertex of `{ x >= 0 : M x = b }` obtained from a unimodular cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralVertex {
    pub x: Vec<BigInt>,
    pub cell: Vec<usize>,
}

/// Outcome of [`integral_vertex_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Vertex(IntegralVertex),
    /// `b` is outside `cone(M)`: the LP `{ x >= 0 : M x = b }` is infeasible.
    Infeasible,
}

/// Whether `x` is a vertex of `{ x >= 0 : M x = b }`: nonnegative, feasible, and supported
/// on linearly independent columns.
pub fn is_vertex(cfg: &PointConfiguration, b: &[BigInt], x: &[BigInt]) -> bool {
    if x.iter().any(|v| v.is_negative()) || mat_vec(&cfg.big_rows(), x) != b {
        return false;
    }
    let support: Vec<Vec<BigInt>> = x
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, _)| big_vec(&cfg.columns[i]))
        .collect();
    linalg::rank(&support, cfg.rows) == support.len()
}

fn lp_feasible(cfg: &PointConfiguration, b: &[BigInt]) -> bool {
    let n = cfg.ncols();
    let eq = cfg.big_rows();
    let ineq: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { -BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let zero = vec![BigInt::zero(); n];
    !matches!(
        LinearProgram {
            nvars: n,
            eq: &eq,
            eq_rhs: b,
            ineq: &ineq,
            ineq_rhs: &zero,
        }
        .optimize(&zero, false),
        LpOutcome::Infeasible
    )
}

/// Finds an integral vertex of the g-hive polytope `P_b` through a unimodular cell of `t`
/// containing `b`, or certifies `b ∉ cone(M)` by LP infeasibility.
pub fn integral_vertex_witness(
    b: &GHiveRhs,
    cfg: &PointConfiguration,
    t: &Triangulation,
) -> Result<Witness, SaturationError> {
    if b.b.len() != cfg.rows {
        return Err(SaturationError::RhsLength {
            got: b.b.len(),
            expected: cfg.rows,
        });
    }
    let bb = big_vec(&b.b);
    if !lp_feasible(cfg, &bb) {
        return Ok(Witness::Infeasible);
    }
    let hits = t.locate(&bb);
    let Some((ci, coeffs)) = hits
        .iter()
        .find(|(ci, _)| t.cells[*ci].is_unimodular())
        .cloned()
    else {
        let (ci, _) = hits.first().expect("b in cone(M) lies in some cell");
        let cell = &t.cells[*ci];
        return Err(SaturationError::NoUnimodularCell {
            cell: cell.columns.clone(),
            determinant: cell.determinant.clone(),
        });
    };
    let cell = &t.cells[ci];
    let mut x = vec![BigInt::zero(); cfg.ncols()];
    for (&c, v) in cell.columns.iter().zip(&coeffs) {
        assert!(v.is_integer(), "unimodular cell gives integral coordinates");
        x[c] = v.to_integer();
    }
    debug_assert!(is_vertex(cfg, &bb, &x));
    Ok(Witness::Vertex(IntegralVertex {
        x,
        cell: cell.columns.clone(),
    }))
}
