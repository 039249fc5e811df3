use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::bareiss::{fraction_free_gj, integer_rows, rational_nullspace};
use super::elim;
use super::ops::{FieldOps, PrimeOps};
use super::scalar::{Field, Scalar};
use crate::error::{ReesError, Result};

/// Dense matrix over a single exact field.
///
/// Rational matrices are eliminated fraction-free over the integers; prime
/// field matrices use plain Gauss-Jordan on `u64` residues.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(ReesError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|s| s.field() != field) {
            return Err(ReesError::BackendMismatch(format!(
                "entry in {} inside a {field} matrix",
                bad.field()
            )));
        }
        Ok(ExactMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ReesError::ShapeMismatch("ragged rows".into()));
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    /// Panics if `v` is from another field.
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "entry backend");
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(ReesError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(ReesError::BackendMismatch("matrix product".into()));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(r, k) * other.get(k, c));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(ReesError::ShapeMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = self.field.zero();
            for (a, b) in self.row(r).iter().zip(v) {
                acc = acc.checked_add(&a.checked_mul(b)?)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    fn prime_rows(&self, ops: &PrimeOps) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| ops.import_all(self.row(r)).expect("validated backend"))
            .collect()
    }

    fn rational_rows(&self, extra: Option<&[Scalar]>) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|r| {
                let mut row: Vec<BigRational> = self.row(r).iter().map(rational).collect();
                if let Some(b) = extra {
                    row.push(rational(&b[r]));
                }
                row
            })
            .collect()
    }

    fn integer_rows(&self, extra: Option<&[Scalar]>) -> (Vec<Vec<BigInt>>, BigInt) {
        integer_rows(&self.rational_rows(extra))
    }

    pub fn rank(&self) -> usize {
        match self.field {
            Field::Prime(p) => {
                let ops = PrimeOps::new(p);
                elim::rank(&ops, self.prime_rows(&ops), self.cols)
            }
            Field::Rational => {
                let (rows, _) = self.integer_rows(None);
                fraction_free_gj(rows, self.cols, self.cols).pivots.len()
            }
        }
    }

    /// Canonical nullspace basis: one vector per free column of the reduced
    /// row echelon form, each scaled so its first nonzero entry is 1.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        match self.field {
            Field::Prime(p) => {
                let ops = PrimeOps::new(p);
                elim::nullspace(&ops, self.prime_rows(&ops), self.cols)
                    .iter()
                    .map(|v| ops.export_all(v))
                    .collect()
            }
            Field::Rational => rational_nullspace(&self.rational_rows(None), self.cols)
                .into_iter()
                .map(|v| v.into_iter().map(Scalar::Rational).collect())
                .collect(),
        }
    }

    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(ReesError::ShapeMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows == 0 {
            return Ok(self.field.one());
        }
        Ok(match self.field {
            Field::Prime(p) => {
                let ops = PrimeOps::new(p);
                ops.export(&elim::det(&ops, self.prime_rows(&ops)))
            }
            Field::Rational => {
                let (rows, scale) = self.integer_rows(None);
                let ff = fraction_free_gj(rows, self.cols, self.cols);
                if ff.pivots.len() < self.rows {
                    return Ok(self.field.zero());
                }
                let mut d = BigRational::new(ff.denom, scale);
                if ff.swaps % 2 == 1 {
                    d = -d;
                }
                Scalar::Rational(d)
            }
        })
    }

    /// A particular solution of `self * x = b` with free variables set to
    /// zero, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(ReesError::ShapeMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        if let Some(bad) = b.iter().find(|s| s.field() != self.field) {
            return Err(ReesError::BackendMismatch(format!(
                "right-hand side in {}",
                bad.field()
            )));
        }
        let n = self.cols;
        match self.field {
            Field::Prime(p) => {
                let ops = PrimeOps::new(p);
                let rows: Vec<Vec<u64>> = (0..self.rows)
                    .map(|r| {
                        let mut row = ops.import_all(self.row(r)).unwrap();
                        row.push(ops.import(&b[r]).unwrap());
                        row
                    })
                    .collect();
                let rr = elim::rref(&ops, rows, n + 1, n);
                if rr.rows[rr.rank()..].iter().any(|row| row[n] != 0) {
                    return Ok(None);
                }
                let mut x = vec![self.field.zero(); n];
                for (r, &pc) in rr.pivots.iter().enumerate() {
                    x[pc] = ops.export(&rr.rows[r][n]);
                }
                Ok(Some(x))
            }
            Field::Rational => {
                let (rows, _) = self.integer_rows(Some(b));
                let ff = fraction_free_gj(rows, n + 1, n);
                let rank = ff.pivots.len();
                if ff.rows[rank..].iter().any(|row| !row[n].is_zero()) {
                    return Ok(None);
                }
                let mut x = vec![self.field.zero(); n];
                for (r, &pc) in ff.pivots.iter().enumerate() {
                    x[pc] = Scalar::Rational(BigRational::new(
                        ff.rows[r][n].clone(),
                        ff.denom.clone(),
                    ));
                }
                Ok(Some(x))
            }
        }
    }

    pub fn inverse(&self) -> Result<ExactMatrix> {
        if self.rows != self.cols {
            return Err(ReesError::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        if self.rank() < n {
            return Err(ReesError::precondition("invertible", "singular matrix"));
        }
        let mut inv = Self::zeros(self.field, n, n);
        for c in 0..n {
            let e: Vec<Scalar> = (0..n)
                .map(|r| if r == c { self.field.one() } else { self.field.zero() })
                .collect();
            let x = self
                .solve(&e)?
                .ok_or_else(|| ReesError::precondition("invertible", "singular matrix"))?;
            for (r, v) in x.into_iter().enumerate() {
                inv.set(r, c, v);
            }
        }
        Ok(inv)
    }
}

fn rational(s: &Scalar) -> BigRational {
    match s {
        Scalar::Rational(r) => r.clone(),
        Scalar::Prime { .. } => unreachable!("rational matrix holds prime entry"),
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix<{}> {}x{} [", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(field: Field, rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn kit_on_both_backends() {
        for field in [Field::Rational, Field::Prime(1_000_003)] {
            let a = m(field, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
            assert_eq!(a.rank(), 2);
            assert_eq!(a.det().unwrap(), field.zero());
            let ns = a.nullspace();
            assert_eq!(ns.len(), 1);
            assert_eq!(ns[0], vec![field.one(), field.one(), field.from_i64(-1)]);
            let b = vec![field.from_i64(4), field.from_i64(8), field.from_i64(2)];
            let x = a.solve(&b).unwrap().unwrap();
            assert_eq!(a.mul_vec(&x).unwrap(), b);
            let bad = vec![field.from_i64(4), field.from_i64(9), field.from_i64(2)];
            assert!(a.solve(&bad).unwrap().is_none());
        }
    }

    #[test]
    fn rational_det_and_inverse() {
        let q = Field::Rational;
        let a = ExactMatrix::from_rows(
            q,
            vec![
                vec![q.parse_scalar("1/2").unwrap(), q.from_i64(3)],
                vec![q.from_i64(-1), q.parse_scalar("2/3").unwrap()],
            ],
        )
        .unwrap();
        assert_eq!(a.det().unwrap(), q.parse_scalar("10/3").unwrap());
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), ExactMatrix::identity(q, 2));
    }

    #[test]
    fn shape_errors() {
        let q = Field::Rational;
        assert!(ExactMatrix::new(q, 2, 2, vec![q.one()]).is_err());
        let a = ExactMatrix::zeros(q, 2, 3);
        assert!(a.det().is_err());
        assert!(a.solve(&[q.one()]).is_err());
        assert!(ExactMatrix::new(q, 1, 1, vec![Field::Prime(5).one()]).is_err());
    }
}
