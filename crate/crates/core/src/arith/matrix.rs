use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntegerMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self::new(rows, cols, entries)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn mul(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows);
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|t| self.get(i, t) * rhs.get(t, j)).sum()
        })
    }

    fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .chunks(self.cols.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let (sign, pivot_ok) = bareiss(&mut a, self.rows);
        if !pivot_ok {
            return BigInt::zero();
        }
        sign * a[self.rows - 1][self.rows - 1].clone()
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// In-place Bareiss elimination on the leading `n` columns of `a` (which
/// may carry extra augmented columns). Returns the row-swap sign and whether
/// a non-zero pivot was found in every column.
fn bareiss(a: &mut [Vec<BigInt>], n: usize) -> (i32, bool) {
    let width = a.first().map_or(0, Vec::len);
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return (sign, false),
            }
        }
        for i in k + 1..n {
            for j in k + 1..width {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    (sign, true)
}

/// Solve `m x = v` exactly over the integers for a unimodular `m`.
pub fn integer_matrix_solve(m: &IntegerMatrix, v: &[BigInt]) -> Result<Vec<BigInt>> {
    if m.rows != m.cols {
        return Err(Error::InvalidArgument(format!(
            "expected a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if v.len() != m.rows {
        return Err(Error::InvalidArgument(format!(
            "right-hand side has length {}, expected {}",
            v.len(),
            m.rows
        )));
    }
    let n = m.rows;
    let mut a: Vec<Vec<BigInt>> = m
        .to_rows()
        .into_iter()
        .zip(v)
        .map(|(mut row, b)| {
            row.push(b.clone());
            row
        })
        .collect();
    let (sign, ok) = bareiss(&mut a, n);
    let det = if !ok || n == 0 {
        if n == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    } else {
        sign * a[n - 1][n - 1].clone()
    };
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular {
            det: det.to_string(),
        });
    }
    // back substitution; every division is exact because the solution is
    // integral
    let mut x = vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        let mut rhs = a[i][n].clone();
        for j in i + 1..n {
            rhs -= &a[i][j] * &x[j];
        }
        let (q, r) = rhs.div_rem(&a[i][i]);
        debug_assert!(r.is_zero());
        x[i] = q;
    }
    Ok(x)
}
