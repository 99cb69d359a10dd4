//! Gauss-Jordan elimination and nullspaces over any [`FieldElement`].

use crate::field::FieldElement;

/// Reduced row echelon form: `rows[i]` has a leading one in `pivots[i]`.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub ncols: usize,
    pub pivots: Vec<usize>,
    pub rows: Vec<Vec<F>>,
}

impl<F: FieldElement> Echelon<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Canonical nullspace basis: one vector per free column `f`, with a one
    /// in position `f` and zeros in every other free position.
    pub fn nullspace(&self, zero: &F) -> Vec<Vec<F>> {
        let one = zero.one_like();
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![zero.clone(); self.ncols];
                v[f] = one.clone();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = row[f].negated();
                }
                v
            })
            .collect()
    }
}

/// Row-reduce `rows` (each of length `ncols`) to reduced echelon form.
pub fn row_reduce<F: FieldElement>(mut rows: Vec<Vec<F>>, ncols: usize) -> Echelon<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r >= rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_nil()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][col].inverse();
        for x in &mut rows[r][col..ncols] {
            *x = x.times(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_nil() {
                continue;
            }
            let factor = row[col].clone();
            for j in col..ncols {
                if !pivot_row[j].is_nil() {
                    row[j] = row[j].minus(&factor.times(&pivot_row[j]));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Echelon {
        ncols,
        pivots,
        rows,
    }
}

pub fn nullspace<F: FieldElement>(rows: Vec<Vec<F>>, ncols: usize, zero: &F) -> Vec<Vec<F>> {
    row_reduce(rows, ncols).nullspace(zero)
}

pub fn rank<F: FieldElement>(rows: Vec<Vec<F>>, ncols: usize) -> usize {
    row_reduce(rows, ncols).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Rational};
    use crate::field::Zp;
    use num_traits::Zero;

    fn qmat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let m = qmat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let basis = nullspace(m.clone(), 3, &Rational::zero());
        assert_eq!(basis.len(), 1);
        for row in &m {
            let dot: Rational = row.iter().zip(&basis[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        assert_eq!(basis[0], vec![int(-1), int(-1), int(1)]);
    }

    #[test]
    fn full_rank_and_empty() {
        let m = qmat(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(nullspace(m, 2, &Rational::zero()).is_empty());
        let empty: Vec<Vec<Rational>> = Vec::new();
        assert_eq!(nullspace(empty, 3, &Rational::zero()).len(), 3);
    }

    #[test]
    fn modular_rank_drop() {
        // determinant 7: full rank over Q, singular mod 7
        let rows = |p: u64| -> Vec<Vec<Zp>> {
            [[2u64, 1], [1, 4]]
                .iter()
                .map(|r| r.iter().map(|&v| Zp::new(v, p)).collect())
                .collect()
        };
        assert_eq!(rank(rows(11), 2), 2);
        assert_eq!(rank(rows(7), 2), 1);
    }
}
