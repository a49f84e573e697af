//! Heredity coefficients as a cubic matrix.
//!
//! Any quadratic stochastic operator has a normal form `V(x)_k = Σ_{i,j}
//! P_{ij,k} x_i x_j` with `P` symmetric in `(i, j)`, entrywise nonnegative,
//! and `Σ_k P_{ij,k} = 1` — the entries are the heredity coefficients.  This
//! module materializes `P` for the pair-exchange operator by reading the
//! coefficients straight off the stochastic evaluation form (see
//! [`crate::operator`]): monomials that pair two *distinct* coordinates have
//! their weight split evenly between the `(i, j)` and `(j, i)` slots, squares
//! keep their full weight on the diagonal.

use crate::coeffs::CoefficientMatrix;
use crate::error::QsoError;
use crate::simplex::SimplexPoint;

/// The heredity tensor `P[i][j][k]`, dimensions `2m x 2m x 2m`, stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicMatrix {
    n: usize, // 2m
    p: Vec<f64>,
}

impl CubicMatrix {
    /// Side length `2m` of the tensor.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of loci `m`.
    pub fn m(&self) -> usize {
        self.n / 2
    }

    /// Entry `P[i][j][k]` (all indices 0-based, < `2m`).
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.p[(i * self.n + j) * self.n + k]
    }

    fn set_sym(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let n = self.n;
        self.p[(i * n + j) * n + k] = v;
        self.p[(j * n + i) * n + k] = v;
    }

    /// The level-`k` slice as a row-major `2m x 2m` matrix: `P[i][j][k]`.
    pub fn level(&self, k: usize) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j, k)).collect())
            .collect()
    }

    /// All `2m` level slices, index `k` outermost.
    pub fn levels(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.n).map(|k| self.level(k)).collect()
    }

    /// Evaluate the quadratic form: `out[k] = Σ_{i,j} P[i][j][k] x_i x_j`.
    ///
    /// This must reproduce one generation of the operator; the verification
    /// battery and the property tests check it against
    /// [`crate::operator::apply_w`].
    pub fn apply_quadratic_form(&self, x: &SimplexPoint) -> Result<Vec<f64>, QsoError> {
        if 2 * x.m() != self.n {
            return Err(QsoError::DimensionMismatch { expected: self.m(), got: x.m() });
        }
        let coords = x.coords();
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                let xij = coords[i] * coords[j];
                if xij == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += self.p[(i * n + j) * n + k] * xij;
                }
            }
        }
        Ok(out)
    }
}

/// Build the heredity tensor for the given coefficients.
///
/// For locus `i` with odd slot `o = 2i` and even slot `e = 2i + 1`
/// (0-based), the nonzero entries at level `o` are
///
/// ```text
/// P[o][o][o] = 1          P[o][e][o] = 1/2
/// P[o][oj][o] = 1/2       P[o][ej][o] = (1 - a_ij)/2     P[e][oj][o] = a_ij/2
/// ```
///
/// for every other locus `j` (slots `oj`, `ej`), each mirrored in `(i, j)`;
/// level `e` is the same pattern with odd and even slots exchanged.
pub fn build_cubic_matrix(a: &CoefficientMatrix) -> CubicMatrix {
    let m = a.m();
    let n = 2 * m;
    let mut p = CubicMatrix { n, p: vec![0.0; n * n * n] };
    for i in 0..m {
        let (o, e) = (2 * i, 2 * i + 1);
        // Level o: the odd slot of locus i.
        p.set_sym(o, o, o, 1.0);
        p.set_sym(o, e, o, 0.5);
        // Level e: the even slot of locus i.
        p.set_sym(e, e, e, 1.0);
        p.set_sym(o, e, e, 0.5);
        for j in 0..m {
            if j == i {
                continue;
            }
            let (oj, ej) = (2 * j, 2 * j + 1);
            let aij = a.get(i, j);
            p.set_sym(o, oj, o, 0.5);
            p.set_sym(o, ej, o, (1.0 - aij) / 2.0);
            p.set_sym(e, oj, o, aij / 2.0);

            p.set_sym(e, ej, e, 0.5);
            p.set_sym(e, oj, e, (1.0 - aij) / 2.0);
            p.set_sym(o, ej, e, aij / 2.0);
        }
    }
    p
}
