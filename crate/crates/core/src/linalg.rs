//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::ratio::Rational;

/// Solves `a · x = b` for square nonsingular `a`; `None` if singular.
pub(crate) fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for c in col..n {
            a[col][c] = &a[col][c] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let v = &f * &a[col][c];
                    a[r][c] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some(b)
}

/// Incrementally maintained row-echelon basis of a vector space.
#[derive(Clone, Debug, Default)]
pub(crate) struct Basis {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Basis {
    /// Reduces `v` against the basis and adds the remainder if nonzero.
    /// Returns whether the span grew.
    pub(crate) fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let p = v[pivot].clone();
        for x in v.iter_mut() {
            *x = &*x / &p;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let f = row[pivot].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{frac, int};

    #[test]
    fn solves_small_system() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve(a, vec![int(3), int(5)]).unwrap();
        assert_eq!(x, vec![frac(4, 5), frac(7, 5)]);
        assert!(solve(vec![vec![int(1), int(2)], vec![int(2), int(4)]], vec![int(1), int(1)]).is_none());
    }

    #[test]
    fn basis_tracks_rank() {
        let mut b = Basis::default();
        assert!(b.insert(vec![int(1), int(2)]));
        assert!(!b.insert(vec![int(2), int(4)]));
        assert!(b.insert(vec![int(0), int(1)]));
        assert!(!b.insert(vec![int(5), int(-3)]));
    }
}
