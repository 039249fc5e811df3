use crate::error::{ReesError, Result};
use crate::exactmath::Field;

use super::{BiPoly, XPoly};

/// Determinant of a square matrix with polynomial entries (Bareiss).
///
/// The matrix must be graded: entry `(r, c)` has bidegree `row[r] + col[c]`
/// whenever it is nonzero. A zero determinant is returned with bidegree
/// `zero_bideg`.
pub fn det_poly(field: Field, mut a: Vec<Vec<BiPoly>>, zero_bideg: (u32, u32)) -> Result<BiPoly> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(ReesError::ShapeMismatch("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(BiPoly::constant(field.one()));
    }
    let mut negate = false;
    let mut prev = BiPoly::constant(field.one());
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(BiPoly::zero(field, zero_bideg));
            };
            a.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let p1 = a[k][k].mul(&a[i][j])?;
                let p2 = a[i][k].mul(&a[k][j])?;
                let t = match (p1.is_zero(), p2.is_zero()) {
                    (true, true) => p1,
                    (true, false) => p2.neg(),
                    (false, true) => p1,
                    (false, false) => p1.sub(&p2)?,
                };
                a[i][j] = if t.is_zero() || k == 0 {
                    t
                } else {
                    t.exact_div(&prev)?
                };
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if d.is_zero() {
        return Ok(BiPoly::zero(field, zero_bideg));
    }
    Ok(if negate { d.neg() } else { d })
}

/// Sylvester resultant with respect to `T`.
///
/// Coefficients are listed from the `T1^s` term down to `T0^s`, i.e. the
/// forms are read as polynomials in `T1/T0`.
pub fn resultant_t(f: &BiPoly, g: &BiPoly) -> Result<XPoly> {
    if f.field() != g.field() {
        return Err(ReesError::BackendMismatch("resultant".into()));
    }
    let (s1, j1) = f.bidegree();
    let (s2, j2) = g.bidegree();
    if s1 == 0 || s2 == 0 {
        return Err(ReesError::DegreeMismatch(
            "resultant needs positive T-degrees".into(),
        ));
    }
    if f.is_zero() || g.is_zero() {
        return Err(ReesError::precondition("nonzero", "resultant of a zero polynomial"));
    }
    let field = f.field();
    let n = (s1 + s2) as usize;
    let mut m = Vec::with_capacity(n);
    for (poly, s, other, j) in [(f, s1, s2, j1), (g, s2, s1, j2)] {
        let coeffs: Vec<XPoly> = (0..=s).rev().map(|a1| poly.t_coeff(s - a1, a1)).collect();
        for shift in 0..other as usize {
            let mut row = vec![BiPoly::zero(field, (0, j)); n];
            for (k, c) in coeffs.iter().enumerate() {
                row[shift + k] = c.clone();
            }
            m.push(row);
        }
    }
    det_poly(field, m, (0, s2 * j1 + s1 * j2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BiPoly {
        BiPoly::parse(Field::Rational, s, (0, 0)).unwrap()
    }

    #[test]
    fn two_by_two() {
        let r = resultant_t(&p("T0*X0 + T1*X1"), &p("T0*X1 - T1*X0")).unwrap();
        assert_eq!(r, p("X0^2 + X1^2"));
    }

    #[test]
    fn self_resultant_vanishes() {
        let f = p("T0^2*X0 + T1^2*X1 + T0*T1*X2");
        let r = resultant_t(&f, &f).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.bidegree(), (0, 4));
    }

    #[test]
    fn det_of_graded_matrix() {
        let m = vec![
            vec![p("X0"), p("X1"), p("X2")],
            vec![p("X1"), p("X2"), p("X0")],
            vec![p("X2"), p("X0"), p("X1")],
        ];
        let d = det_poly(Field::Rational, m, (0, 3)).unwrap();
        assert_eq!(d, p("3*X0*X1*X2 - X0^3 - X1^3 - X2^3"));
    }

    #[test]
    fn non_square_rejected() {
        assert!(det_poly(Field::Rational, vec![vec![p("X0"), p("X1")]], (0, 1)).is_err());
    }
}
