//! Dense linear algebra over `F_q`. Matrices are row-major `Vec<Vec<Elem>>`.

use crate::field::{Elem, FiniteField};

pub type Matrix = Vec<Vec<Elem>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![0; cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn transpose(a: &Matrix, cols: usize) -> Matrix {
    let mut t = zeros(cols, a.len());
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            t[j][i] = v;
        }
    }
    t
}

pub fn mat_vec(f: &FiniteField, a: &Matrix, x: &[Elem]) -> Vec<Elem> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0, |acc, (&r, &v)| f.add(acc, f.mul(r, v)))
        })
        .collect()
}

pub fn mat_mul(f: &FiniteField, a: &Matrix, b: &Matrix, b_cols: usize) -> Matrix {
    a.iter()
        .map(|row| {
            (0..b_cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(0, |acc, (&r, brow)| f.add(acc, f.mul(r, brow[j])))
                })
                .collect()
        })
        .collect()
}

pub fn axpy(f: &FiniteField, y: &mut [Elem], a: Elem, x: &[Elem]) {
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = f.add(*yi, f.mul(a, xi));
    }
}

pub fn scale(f: &FiniteField, x: &[Elem], a: Elem) -> Vec<Elem> {
    x.iter().map(|&v| f.mul(a, v)).collect()
}

pub fn sub_vec(f: &FiniteField, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
    x.iter().zip(y).map(|(&a, &b)| f.sub(a, b)).collect()
}

pub fn weight(x: &[Elem]) -> usize {
    x.iter().filter(|&&v| v != 0).count()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(f: &FiniteField, a: &mut Matrix, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = f.inv(a[r][c]).expect("pivot is nonzero");
        for v in a[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = f.neg(row[c]);
                axpy(f, row, factor, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    pivots
}

pub fn rank(f: &FiniteField, a: &Matrix, cols: usize) -> usize {
    let mut m = a.clone();
    rref(f, &mut m, cols).len()
}

/// Basis of `{x : A x = 0}` for `A` with `cols` columns.
pub fn nullspace(f: &FiniteField, a: &Matrix, cols: usize) -> Matrix {
    let mut m = a.clone();
    let pivots = rref(f, &mut m, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![0; cols];
            x[free] = 1;
            for (row, &p) in m.iter().zip(&pivots) {
                x[p] = f.neg(row[free]);
            }
            x
        })
        .collect()
}

/// Some solution of `A x = b`, if one exists.
pub fn solve(f: &FiniteField, a: &Matrix, cols: usize, b: &[Elem]) -> Option<Vec<Elem>> {
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(f, &mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![0; cols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[cols];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_hamming_parity_check() {
        let f = FiniteField::new(2, 1).unwrap();
        let h: Matrix = vec![
            vec![1, 0, 1, 0, 1, 0, 1],
            vec![0, 1, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1],
        ];
        let ns = nullspace(&f, &h, 7);
        assert_eq!(ns.len(), 4);
        for x in &ns {
            assert!(mat_vec(&f, &h, x).iter().all(|&v| v == 0));
        }
        assert_eq!(rank(&f, &ns, 7), 4);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = FiniteField::new(5, 1).unwrap();
        let a: Matrix = vec![vec![1, 2], vec![2, 4]];
        let x = solve(&f, &a, 2, &[3, 1]).unwrap();
        assert_eq!(mat_vec(&f, &a, &x), vec![3, 1]);
        assert!(solve(&f, &a, 2, &[3, 2]).is_none());
    }
}
