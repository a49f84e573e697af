//! The coefficient matrix driving pair exchange between loci.
//!
//! Entry `a[i][j]` in `[0, 1]` weights how strongly locus `i`'s pair reacts
//! to locus `j`'s coordinates.  The diagonal is never read by any operation:
//! a locus's interaction with itself cancels identically in the dynamics.

use serde::Serialize;

use crate::error::QsoError;

/// A validated square matrix of exchange coefficients, `a[i][j] ∈ [0, 1]`.
///
/// Structural flags are computed once at construction:
/// * `is_symmetric` — `a[i][j] == a[j][i]` exactly, off the diagonal;
/// * `row_condition` — every row has positive off-diagonal sum, i.e. every
///   locus exchanges mass with at least one other locus;
/// * `strictly_positive_off_diagonal` — every off-diagonal entry is > 0.
///
/// A single-locus matrix is permitted (zero-mass reduction can shrink a
/// system down to one locus); for it `row_condition` is `false` (the empty
/// off-diagonal sum is zero) and `strictly_positive_off_diagonal` is
/// vacuously `true`.  User-facing states always carry at least two loci.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientMatrix {
    m: usize,
    rows: Vec<Vec<f64>>,
    is_symmetric: bool,
    row_condition: bool,
    strictly_positive_off_diagonal: bool,
}

impl CoefficientMatrix {
    /// Validate `rows` as an `m x m` coefficient matrix.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, QsoError> {
        let m = rows.len();
        if m == 0 {
            return Err(QsoError::BadDimension { len: 0 });
        }
        for row in &rows {
            if row.len() != m {
                return Err(QsoError::DimensionMismatch { expected: m, got: row.len() });
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    return Err(QsoError::CoefficientOutOfRange { i, j, value: v });
                }
            }
        }
        let mut is_symmetric = true;
        let mut row_condition = m > 1;
        let mut strictly_positive = true;
        for i in 0..m {
            let mut off_diag_sum = 0.0;
            for j in 0..m {
                if i == j {
                    continue;
                }
                if rows[i][j] != rows[j][i] {
                    is_symmetric = false;
                }
                if rows[i][j] <= 0.0 {
                    strictly_positive = false;
                }
                off_diag_sum += rows[i][j];
            }
            if off_diag_sum <= 0.0 {
                row_condition = false;
            }
        }
        Ok(CoefficientMatrix {
            m,
            rows,
            is_symmetric,
            row_condition,
            strictly_positive_off_diagonal: strictly_positive,
        })
    }

    /// The all-zero matrix (the dynamics then is the identity).
    pub fn zeros(m: usize) -> Result<Self, QsoError> {
        CoefficientMatrix::new(vec![vec![0.0; m]; m])
    }

    /// Number of loci.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Entry `a[i][j]`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    /// The rows of the matrix.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Whether the off-diagonal part is exactly symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.is_symmetric
    }

    /// Whether every locus has positive off-diagonal row sum.
    pub fn row_condition(&self) -> bool {
        self.row_condition
    }

    /// Whether every off-diagonal entry is strictly positive.
    pub fn strictly_positive_off_diagonal(&self) -> bool {
        self.strictly_positive_off_diagonal
    }

    /// 0-based indices of rows whose off-diagonal sum is zero ("frozen"
    /// loci: their coordinate pairs never change under the dynamics).
    /// For a single-locus matrix this reports `[0]`, consistent with the
    /// definition, though one-locus dynamics is the identity regardless.
    pub fn frozen_loci(&self) -> Vec<usize> {
        (0..self.m)
            .filter(|&i| {
                (0..self.m).filter(|&j| j != i).map(|j| self.rows[i][j]).sum::<f64>() <= 0.0
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_range() {
        assert!(CoefficientMatrix::new(vec![vec![0.0, 1.0], vec![0.5, 0.3]]).is_ok());
        let e = CoefficientMatrix::new(vec![vec![0.0, 1.5], vec![0.5, 0.0]]);
        assert!(matches!(e, Err(QsoError::CoefficientOutOfRange { i: 0, j: 1, .. })));
        let e = CoefficientMatrix::new(vec![vec![0.0, -0.1], vec![0.5, 0.0]]);
        assert!(matches!(e, Err(QsoError::CoefficientOutOfRange { .. })));
        let e = CoefficientMatrix::new(vec![vec![0.0, f64::NAN], vec![0.5, 0.0]]);
        assert!(matches!(e, Err(QsoError::CoefficientOutOfRange { .. })));
        let e = CoefficientMatrix::new(vec![vec![0.0, 0.5]]);
        assert!(matches!(e, Err(QsoError::DimensionMismatch { expected: 1, got: 2 })));
    }

    #[test]
    fn flags_reflect_structure() {
        let a = CoefficientMatrix::new(vec![vec![0.9, 0.5], vec![0.5, 0.1]]).unwrap();
        assert!(a.is_symmetric()); // diagonal entries do not participate
        assert!(a.row_condition());
        assert!(a.strictly_positive_off_diagonal());

        let a = CoefficientMatrix::new(vec![vec![0.0, 0.5], vec![0.25, 0.0]]).unwrap();
        assert!(!a.is_symmetric());
        assert!(a.row_condition());

        // Second row exchanges nothing: frozen locus.
        let a = CoefficientMatrix::new(vec![
            vec![0.0, 0.0, 0.5],
            vec![0.0, 0.0, 0.0],
            vec![0.5, 0.1, 0.0],
        ])
        .unwrap();
        assert!(!a.row_condition());
        assert!(!a.strictly_positive_off_diagonal());
        assert_eq!(a.frozen_loci(), vec![1]);
    }

    #[test]
    fn zero_matrix_freezes_everything() {
        let a = CoefficientMatrix::zeros(3).unwrap();
        assert!(!a.row_condition());
        assert_eq!(a.frozen_loci(), vec![0, 1, 2]);
        assert!(a.is_symmetric());
    }

    #[test]
    fn single_locus_matrix_is_allowed() {
        let a = CoefficientMatrix::new(vec![vec![0.0]]).unwrap();
        assert_eq!(a.m(), 1);
        assert!(!a.row_condition());
        assert!(a.strictly_positive_off_diagonal()); // vacuous
        assert_eq!(a.frozen_loci(), vec![0]);
    }
}
