//! Gauss-Jordan elimination over a `FieldOps` backend.

use super::ops::FieldOps;

/// Reduced row echelon form. `rows[r]` has a 1 at `pivots[r]` and zeros in
/// every other pivot column; rows past `pivots.len()` are zero in the pivot
/// region.
#[derive(Clone, Debug)]
pub struct Rref<E> {
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl<E> Rref<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Row reduces `rows`, choosing pivots only among the first `pivot_cols` columns.
pub fn rref<F: FieldOps>(
    ops: &F,
    mut rows: Vec<Vec<F::Elem>>,
    cols: usize,
    pivot_cols: usize,
) -> Rref<F::Elem> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols.min(cols) {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !ops.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, found);
        let inv = ops.inv(&rows[r][c]);
        ops.scale(&mut rows[r][c..], &inv);
        let (before, rest) = rows.split_at_mut(r);
        let (pivot_row, after) = rest.split_first_mut().unwrap();
        for row in before.iter_mut().chain(after.iter_mut()) {
            if !ops.is_zero(&row[c]) {
                let m = row[c].clone();
                ops.sub_scaled(&mut row[c..], &m, &pivot_row[c..]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { rows, pivots, cols }
}

/// Canonical nullspace basis from an RREF over `cols` unknowns: one vector per
/// free column, scaled so its first nonzero entry is 1.
pub fn nullspace_from_rref<F: FieldOps>(ops: &F, rref: &Rref<F::Elem>) -> Vec<Vec<F::Elem>> {
    let n = rref.cols;
    let mut is_pivot = vec![false; n];
    for &c in &rref.pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![ops.zero(); n];
        v[f] = ops.one();
        for (r, &pc) in rref.pivots.iter().enumerate() {
            v[pc] = ops.neg(&rref.rows[r][f]);
        }
        normalize_first(ops, &mut v);
        out.push(v);
    }
    out
}

/// Scales `v` so that its first nonzero entry is 1.
pub fn normalize_first<F: FieldOps>(ops: &F, v: &mut [F::Elem]) {
    if let Some(lead) = v.iter().find(|x| !ops.is_zero(x)).cloned() {
        let inv = ops.inv(&lead);
        ops.scale(v, &inv);
    }
}

pub fn nullspace<F: FieldOps>(ops: &F, rows: Vec<Vec<F::Elem>>, cols: usize) -> Vec<Vec<F::Elem>> {
    let r = rref(ops, rows, cols, cols);
    nullspace_from_rref(ops, &r)
}

pub fn rank<F: FieldOps>(ops: &F, rows: Vec<Vec<F::Elem>>, cols: usize) -> usize {
    rref(ops, rows, cols, cols).rank()
}

/// Determinant by forward elimination.
pub fn det<F: FieldOps>(ops: &F, mut rows: Vec<Vec<F::Elem>>) -> F::Elem {
    let n = rows.len();
    let mut acc = ops.one();
    for c in 0..n {
        let Some(found) = (c..n).find(|&i| !ops.is_zero(&rows[i][c])) else {
            return ops.zero();
        };
        if found != c {
            rows.swap(c, found);
            acc = ops.neg(&acc);
        }
        acc = ops.mul(&acc, &rows[c][c]);
        let inv = ops.inv(&rows[c][c]);
        let (top, bottom) = rows.split_at_mut(c + 1);
        let pivot_row = &top[c];
        for row in bottom.iter_mut() {
            if !ops.is_zero(&row[c]) {
                let m = ops.mul(&row[c], &inv);
                ops.sub_scaled(&mut row[c..], &m, &pivot_row[c..]);
            }
        }
    }
    acc
}

/// Incrementally grown row space. Each stored row is monic at its pivot and
/// reduced against all earlier rows, so `reduce` leaves zeros in every pivot
/// column.
#[derive(Clone, Debug)]
pub struct Echelon<F: FieldOps> {
    ops: F,
    cols: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: FieldOps> Echelon<F> {
    pub fn new(ops: F, cols: usize) -> Self {
        Echelon {
            ops,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn reduce(&self, v: &mut [F::Elem]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if !self.ops.is_zero(&v[pc]) {
                let m = v[pc].clone();
                self.ops.sub_scaled(v, &m, row);
            }
        }
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.cols, "row length");
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|x| !self.ops.is_zero(x)) else {
            return false;
        };
        let inv = self.ops.inv(&v[pc]);
        self.ops.scale(&mut v, &inv);
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.ops.is_zero(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::ops::{PrimeOps, RationalOps};
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn rref_small() {
        let ops = RationalOps;
        let rows = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(0), q(1)],
        ];
        let r = rref(&ops, rows.clone(), 3, 3);
        assert_eq!(r.pivots, vec![0, 1]);
        let ns = nullspace(&ops, rows, 3);
        assert_eq!(ns.len(), 1);
        // x = (-1, -1, 1) scaled to first entry 1
        assert_eq!(ns[0], vec![q(1), q(1), q(-1)]);
    }

    #[test]
    fn det_prime() {
        let ops = PrimeOps::new(101);
        let rows = vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 9]];
        // det = 0*(36-35) - 1*(27-30) + 2*(21-24) = 3 - 6 = -3
        assert_eq!(det(&ops, rows), 98);
    }

    #[test]
    fn echelon_tracks_span() {
        let ops = PrimeOps::new(13);
        let mut e = Echelon::new(ops, 3);
        assert!(e.insert(vec![0, 2, 4]));
        assert!(e.insert(vec![1, 1, 1]));
        assert!(!e.insert(vec![2, 4, 6]));
        assert!(e.contains(&[3, 5, 7]));
        assert!(!e.contains(&[0, 0, 1]));
        assert_eq!(e.rank(), 2);
    }
}
