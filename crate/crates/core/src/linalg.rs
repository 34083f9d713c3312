//! Gaussian elimination over a finite field.

use crate::field::Field;

/// Brings `rows` to reduced row echelon form in place, dropping zero rows.
/// Every pivot is 1. Returns the pivot column of each remaining row.
pub fn row_reduce(field: &Field, rows: &mut Vec<Vec<u16>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        let Some(found) = (next..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(next, found);
        let scale = field.inv(rows[next][col]).expect("pivot is nonzero");
        for v in rows[next].iter_mut() {
            *v = field.mul(*v, scale);
        }
        let pivot_row = rows[next].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == next || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = field.sub(*v, field.mul(factor, pv));
            }
        }
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    rows.truncate(next);
    pivots
}

pub fn rank(field: &Field, rows: &[Vec<u16>]) -> usize {
    let mut work = rows.to_vec();
    row_reduce(field, &mut work).len()
}

/// Basis of `{x : row·x = 0 for every row}` in `F^ncols`, itself in reduced
/// row echelon form.
pub fn null_space(field: &Field, rows: &[Vec<u16>], ncols: usize) -> Vec<Vec<u16>> {
    let mut work = rows.to_vec();
    let pivots = row_reduce(field, &mut work);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u16; ncols];
        v[free] = 1;
        for (row, &pc) in work.iter().zip(&pivots) {
            v[pc] = field.neg(row[free]);
        }
        basis.push(v);
    }
    row_reduce(field, &mut basis);
    basis
}

pub fn dot(field: &Field, a: &[u16], b: &[u16]) -> u16 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_over_gf3() {
        let f = Field::with_order(3).unwrap();
        let rows = vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]];
        // second row is twice the first
        assert_eq!(rank(&f, &rows), 2);
    }

    #[test]
    fn rref_shape() {
        let f = Field::with_order(5).unwrap();
        let mut rows = vec![vec![0, 2, 4], vec![3, 1, 1]];
        let piv = row_reduce(&f, &mut rows);
        assert_eq!(piv, vec![0, 1]);
        for (row, &p) in rows.iter().zip(&piv) {
            assert_eq!(row[p], 1);
        }
        assert_eq!(rows[1][0], 0);
        assert_eq!(rows[0][1], 0);
    }

    #[test]
    fn null_space_is_annihilator() {
        let f = Field::with_order(4).unwrap();
        let rows = vec![vec![1, 2, 3, 0], vec![0, 1, 1, 1]];
        let ns = null_space(&f, &rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert_eq!(dot(&f, r, v), 0);
            }
        }
        assert_eq!(null_space(&f, &[], 3).len(), 3);
    }
}
