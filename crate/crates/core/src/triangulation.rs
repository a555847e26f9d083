//! Placing triangulations of vector configurations.
//!
//! Vectors are first rewritten in an integral basis of the lattice `span ∩ Z^m`, so cell
//! determinants are measured relative to that lattice.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::linalg::{column_echelon, determinant, rat, solve_rational, transpose};
use crate::polyhedra::exact::{Echelon, Reduced};

/// Integral coordinates on `span(points) ∩ Z^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanBasis {
    /// `rank x m` matrix mapping ambient vectors in the span to lattice coordinates.
    pub map: Vec<Vec<BigInt>>,
    pub coords: Vec<Vec<BigInt>>,
    pub rank: usize,
}

impl SpanBasis {
    pub fn new(points: &[Vec<BigInt>], ambient: usize) -> Self {
        if points.is_empty() {
            return Self {
                map: vec![],
                coords: vec![],
                rank: 0,
            };
        }
        let ech = column_echelon(points, ambient);
        let k = ech.rank();
        let coords = ech.h.iter().map(|row| row[..k].to_vec()).collect();
        let map = (0..k)
            .map(|r| (0..ambient).map(|i| ech.u[i][r].clone()).collect())
            .collect();
        Self {
            map,
            coords,
            rank: k,
        }
    }

    /// Lattice coordinates of an ambient vector assumed to lie in the span.
    pub fn project(&self, v: &[BigInt]) -> Vec<BigInt> {
        crate::linalg::mat_vec(&self.map, v)
    }
}

/// A placing triangulation: each cell is a sorted list of `rank` vector indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacingResult {
    pub cells: Vec<Vec<usize>>,
    pub rank: usize,
    pub coords: Vec<Vec<BigInt>>,
    pub basis: SpanBasis,
}

impl PlacingResult {
    /// Determinant of a cell in span coordinates.
    pub fn cell_determinant(&self, cell: &[usize]) -> BigInt {
        let cols: Vec<Vec<BigInt>> = cell.iter().map(|&i| self.coords[i].clone()).collect();
        determinant(&transpose(&cols, self.rank))
    }
}

/// Coefficients of `p` in the basis given by `cell` (which spans a space containing `p`).
pub fn coefficients(coords: &[Vec<BigInt>], cell: &[usize], p: &[BigInt]) -> Vec<BigRational> {
    let k = p.len();
    let a: Vec<Vec<BigInt>> = (0..k)
        .map(|r| cell.iter().map(|&c| coords[c][r].clone()).collect())
        .collect();
    let b: Vec<BigRational> = p.iter().map(rat).collect();
    solve_rational(&a, &b, cell.len()).expect("point lies in the span of the cell")
}

/// Triangulates the cone over `points` by inserting them in `order`.
///
/// A point outside the current linear span is coned over every cell. A point inside the span
/// is joined to each boundary facet it sees; points seeing no facet are skipped.
pub fn placing_triangulation(points: &[Vec<BigInt>], ambient: usize, order: &[usize]) -> PlacingResult {
    let basis = SpanBasis::new(points, ambient);
    let coords = basis.coords.clone();
    let rank = basis.rank;
    let mut cells: Vec<Vec<usize>> = vec![vec![]];
    let mut span: Echelon<BigInt> = Echelon::new(rank);
    for &p in order {
        let v = &coords[p];
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        match span.reduce(v.clone()).expect("bigint arithmetic does not overflow") {
            Reduced::Independent(row, piv) => {
                span.push(row, piv);
                for c in cells.iter_mut() {
                    c.push(p);
                    c.sort_unstable();
                }
            }
            Reduced::Dependent => {
                let mut facet_count: HashMap<Vec<usize>, usize> = HashMap::new();
                for c in &cells {
                    for skip in 0..c.len() {
                        let mut f = c.clone();
                        f.remove(skip);
                        *facet_count.entry(f).or_default() += 1;
                    }
                }
                let mut added = Vec::new();
                for c in &cells {
                    let mut coeffs: Option<Vec<BigRational>> = None;
                    for skip in 0..c.len() {
                        let mut f = c.clone();
                        f.remove(skip);
                        if facet_count[&f] != 1 {
                            continue;
                        }
                        let cs = coeffs.get_or_insert_with(|| coefficients(&coords, c, v));
                        if cs[skip].is_negative() {
                            f.push(p);
                            f.sort_unstable();
                            added.push(f);
                        }
                    }
                }
                cells.extend(added);
            }
        }
    }
    if span.rows.is_empty() {
        cells.clear();
    }
    cells.sort();
    PlacingResult {
        cells,
        rank,
        coords,
        basis,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::big_matrix;
    use num_traits::One;

    #[test]
    fn plane_example() {
        let pts = big_matrix(&[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let t = placing_triangulation(&pts, 2, &[0, 1, 2]);
        assert_eq!(t.cells, vec![vec![0, 1]]);
        let t = placing_triangulation(&pts, 2, &[0, 2, 1]);
        assert_eq!(t.cells, vec![vec![0, 2], vec![1, 2]]);
        for c in &t.cells {
            assert!(t.cell_determinant(c).abs().is_one());
        }
    }

    #[test]
    fn identity_columns() {
        let pts = big_matrix(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let t = placing_triangulation(&pts, 3, &[0, 1, 2]);
        assert_eq!(t.cells, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn lower_dimensional_span() {
        // vectors in the plane x = y inside R^3, lattice basis (1,1,0), (0,0,1)
        let pts = big_matrix(&[vec![2, 2, 0], vec![0, 0, 1], vec![1, 1, 1]]);
        let t = placing_triangulation(&pts, 3, &[0, 1, 2]);
        assert_eq!(t.rank, 2);
        assert_eq!(t.cells, vec![vec![0, 1]]);
        assert_eq!(t.cell_determinant(&[0, 1]).abs(), BigInt::from(2));
        assert_eq!(t.basis.project(&pts[2]), t.coords[2]);
        let t = placing_triangulation(&pts, 3, &[2, 0, 1]);
        assert_eq!(t.cells, vec![vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn whole_line() {
        let pts = big_matrix(&[vec![1], vec![-1], vec![2]]);
        let t = placing_triangulation(&pts, 1, &[0, 1, 2]);
        assert_eq!(t.cells, vec![vec![0], vec![1]]);
    }

    #[test]
    fn square_pyramid_fan() {
        let pts = big_matrix(&[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]]);
        let t = placing_triangulation(&pts, 3, &[0, 1, 2, 3]);
        assert_eq!(t.cells.len(), 2);
    }
}
