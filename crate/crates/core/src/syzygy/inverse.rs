use crate::bipoly::{x_monomials, BiPoly, Monomial, XPoly};
use crate::error::{ReesError, Result};
use crate::exactmath::{Echelon, FieldOps};
use crate::with_field_ops;

use super::mubasis::MuBasis;
use super::param::{kernel_piece, Parametrization};

/// Birational inverse `(T0 : T1) = (A : B)` of a proper parametrisation,
/// read off from `G = T0 B - T1 A`, the kernel element of bidegree `(1, l)`
/// with `l` minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseMap {
    pub a: XPoly,
    pub b: XPoly,
    pub g: BiPoly,
}

impl InverseMap {
    pub fn degree(&self) -> u32 {
        self.a.x_degree()
    }
}

pub fn inverse_map(par: &Parametrization, equation: &XPoly) -> Result<InverseMap> {
    let d = par.degree();
    let field = par.field();
    let e_deg = equation.x_degree();
    if e_deg != d {
        return Err(ReesError::precondition(
            "proper parametrisation",
            format!("implicit equation has degree {e_deg}, expected {d}"),
        ));
    }
    for l in 1..=2 * d {
        let piece = kernel_piece(par, 1, l)?;
        if piece.is_empty() {
            continue;
        }
        // T * (E * X-monomials) spans the part coming from K_{0, l}
        let mut trivial = Vec::new();
        if l >= e_deg {
            for x in x_monomials(l - e_deg) {
                let ex = equation.mul_monomial(&x);
                trivial.push(ex.mul_monomial(&Monomial::t(1, 0)));
                trivial.push(ex.mul_monomial(&Monomial::t(0, 1)));
            }
        }
        let found = with_field_ops!(field, ops => {
            let n = piece[0].to_dense().len();
            let mut span = Echelon::new(ops.clone(), n);
            for t in &trivial {
                span.insert(ops.import_all(&t.to_dense())?);
            }
            let mut found = None;
            for g in &piece {
                let mut v = ops.import_all(&g.to_dense())?;
                span.reduce(&mut v);
                if v.iter().any(|x| !ops.is_zero(x)) {
                    found = Some(BiPoly::from_dense(field, (1, l), &ops.export_all(&v))?);
                    break;
                }
            }
            found
        });
        if let Some(g) = found {
            let g = g.normalized();
            let b = g.t_coeff(1, 0);
            let a = g.t_coeff(0, 1).neg();
            return Ok(InverseMap { a, b, g });
        }
    }
    Err(ReesError::Verification("no kernel element of T-degree 1".into()))
}

/// Checks `P(A, B, X)` and `Q(A, B, X)` vanish modulo the implicit equation.
pub fn check_inverse(inv: &InverseMap, mb: &MuBasis, equation: &XPoly) -> Result<bool> {
    for s in [&mb.p, &mb.q] {
        let h = s.subst_t(&inv.a, &inv.b)?;
        let (_, r) = h.div_rem(equation)?;
        if !r.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Field;
    use crate::syzygy::{implicit_equation, mu_basis};

    #[test]
    fn monomial_quintic_inverse() {
        let q = Field::Rational;
        let par = Parametrization::from_i64(
            q,
            [&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 0, 0, 1]],
        )
        .unwrap();
        let mb = mu_basis(&par).unwrap();
        let ie = implicit_equation(&par, &mb).unwrap();
        let inv = inverse_map(&par, &ie.equation).unwrap();
        assert_eq!(inv.degree(), 2);
        let a_u = inv.a.subst_x(par.components()).unwrap();
        let b_u = inv.b.subst_x(par.components()).unwrap();
        // A(u) T1 = B(u) T0
        let t0 = crate::bipoly::TPoly::from_i64(q, &[1, 0]);
        let t1 = crate::bipoly::TPoly::from_i64(q, &[0, 1]);
        assert_eq!(a_u.mul(&t1).unwrap(), b_u.mul(&t0).unwrap());
        assert_eq!(inv.a.to_string(), "X1^2");
        assert_eq!(inv.b.to_string(), "X0*X2");
        assert!(check_inverse(&inv, &mb, &ie.equation).unwrap());
    }
}
