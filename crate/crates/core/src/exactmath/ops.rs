//! Unboxed field arithmetic used by the elimination kernels.
//!
//! `Scalar` carries its backend at runtime; hot loops instead go through a
//! `FieldOps` implementation so prime-field rows are plain `u64` slices.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{inv_mod, mul_mod, Field, Scalar};
use crate::error::{ReesError, Result};

pub trait FieldOps: Clone {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn field(&self) -> Field;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn import(&self, s: &Scalar) -> Result<Self::Elem>;
    fn export(&self, a: &Self::Elem) -> Scalar;

    /// `dst -= m * src`, elementwise.
    fn sub_scaled(&self, dst: &mut [Self::Elem], m: &Self::Elem, src: &[Self::Elem]) {
        for (d, s) in dst.iter_mut().zip(src) {
            if !self.is_zero(s) {
                *d = self.sub(d, &self.mul(m, s));
            }
        }
    }

    fn scale(&self, row: &mut [Self::Elem], m: &Self::Elem) {
        for x in row.iter_mut() {
            if !self.is_zero(x) {
                *x = self.mul(x, m);
            }
        }
    }

    /// Canonical nullspace basis of a matrix with `cols` columns.
    fn nullspace(&self, rows: Vec<Vec<Self::Elem>>, cols: usize) -> Vec<Vec<Self::Elem>> {
        super::elim::nullspace(self, rows, cols)
    }

    fn import_all(&self, v: &[Scalar]) -> Result<Vec<Self::Elem>> {
        v.iter().map(|s| self.import(s)).collect()
    }

    fn export_all(&self, v: &[Self::Elem]) -> Vec<Scalar> {
        v.iter().map(|a| self.export(a)).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PrimeOps {
    p: u64,
}

impl PrimeOps {
    pub fn new(p: u64) -> Self {
        debug_assert!(p < (1u64 << 63));
        PrimeOps { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl FieldOps for PrimeOps {
    type Elem = u64;

    fn field(&self) -> Field {
        Field::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.p).expect("inverse of zero")
    }
    fn import(&self, s: &Scalar) -> Result<u64> {
        match s {
            Scalar::Prime { value, modulus } if *modulus == self.p => Ok(*value),
            _ => Err(ReesError::BackendMismatch(format!(
                "expected fp:{}, got {}",
                self.p,
                s.field()
            ))),
        }
    }
    fn export(&self, a: &u64) -> Scalar {
        Scalar::Prime {
            value: *a,
            modulus: self.p,
        }
    }

    // Shoup multiplication: one 128-bit division per row instead of per entry.
    fn sub_scaled(&self, dst: &mut [u64], m: &u64, src: &[u64]) {
        let m = *m;
        if m == 0 {
            return;
        }
        let p = self.p;
        let mp = (((m as u128) << 64) / p as u128) as u64;
        for (d, &s) in dst.iter_mut().zip(src) {
            let q = ((mp as u128 * s as u128) >> 64) as u64;
            let mut t = m.wrapping_mul(s).wrapping_sub(q.wrapping_mul(p));
            if t >= p {
                t -= p;
            }
            *d = if *d >= t { *d - t } else { *d + p - t };
        }
    }

    fn scale(&self, row: &mut [u64], m: &u64) {
        let m = *m;
        let p = self.p;
        let mp = (((m as u128) << 64) / p as u128) as u64;
        for x in row.iter_mut() {
            let q = ((mp as u128 * *x as u128) >> 64) as u64;
            let mut t = m.wrapping_mul(*x).wrapping_sub(q.wrapping_mul(p));
            if t >= p {
                t -= p;
            }
            *x = t;
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RationalOps;

impl FieldOps for RationalOps {
    type Elem = BigRational;

    fn field(&self) -> Field {
        Field::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn import(&self, s: &Scalar) -> Result<BigRational> {
        match s {
            Scalar::Rational(r) => Ok(r.clone()),
            _ => Err(ReesError::BackendMismatch(format!(
                "expected q, got {}",
                s.field()
            ))),
        }
    }
    fn export(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }

    // fraction-free elimination is much cheaper than rational Gauss-Jordan here
    fn nullspace(&self, rows: Vec<Vec<BigRational>>, cols: usize) -> Vec<Vec<BigRational>> {
        super::bareiss::rational_nullspace(&rows, cols)
    }
}

/// Runs `$body` with `$ops` bound to the `FieldOps` matching `$field`.
#[macro_export]
macro_rules! with_field_ops {
    ($field:expr, $ops:ident => $body:expr) => {
        match $field {
            $crate::exactmath::Field::Prime(p) => {
                let $ops = $crate::exactmath::PrimeOps::new(p);
                $body
            }
            $crate::exactmath::Field::Rational => {
                let $ops = $crate::exactmath::RationalOps;
                $body
            }
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::DEFAULT_PRIME;

    #[test]
    fn shoup_matches_naive() {
        let ops = PrimeOps::new(DEFAULT_PRIME);
        let p = DEFAULT_PRIME;
        let src: Vec<u64> = (0..50u64).map(|i| i.wrapping_mul(0x9E37_79B9_7F4A_7C15) % p).collect();
        let mut dst: Vec<u64> = (0..50u64).map(|i| i.wrapping_mul(0x2545_F491_4F6C_DD1D) % p).collect();
        let m = p - 12345;
        let expect: Vec<u64> = dst
            .iter()
            .zip(&src)
            .map(|(d, s)| ops.sub(d, &mul_mod(m, *s, p)))
            .collect();
        ops.sub_scaled(&mut dst, &m, &src);
        assert_eq!(dst, expect);
        let mut row = src.clone();
        ops.scale(&mut row, &m);
        let expect: Vec<u64> = src.iter().map(|s| mul_mod(*s, m, p)).collect();
        assert_eq!(row, expect);
    }
}
