//! Exact linear algebra over ℚ for the small systems used by the fitters.

use num_traits::Zero;

use crate::scalar::Rational;

/// Solves the square system `a · x = b`; `None` when `a` is singular.
#[allow(clippy::needless_range_loop)] // row operations index two rows at once
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in col..n {
                let delta = &factor * &a[col][j];
                a[r][j] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some(b)
}

/// Row space built one vector at a time; reports whether each new row is
/// independent of those already accepted.
#[derive(Debug, Clone, Default)]
pub struct IncrementalBasis {
    /// Reduced rows, each with its pivot column.
    rows: Vec<(usize, Vec<Rational>)>,
}

impl IncrementalBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `row` if it is independent of the current rows.
    pub fn try_add(&mut self, mut row: Vec<Rational>) -> bool {
        for (pivot, basis_row) in &self.rows {
            if row[*pivot].is_zero() {
                continue;
            }
            let factor = row[*pivot].clone() / &basis_row[*pivot];
            for (x, y) in row.iter_mut().zip(basis_row) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        match row.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, row));
                true
            }
            None => false,
        }
    }
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut basis = IncrementalBasis::new();
    for r in rows {
        basis.try_add(r.clone());
    }
    basis.rank()
}
