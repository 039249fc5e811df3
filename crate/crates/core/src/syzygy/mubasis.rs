use crate::bipoly::{t_monomials, BiPoly};
use crate::error::{ReesError, Result};
use crate::exactmath::{Echelon, FieldOps, Scalar};
use crate::with_field_ops;

use super::param::{cross, kernel_piece, proportionality, Parametrization};

/// Generators `P` (bidegree `(mu, 1)`) and `Q` (bidegree `(d - mu, 1)`) of the
/// syzygy module of a parametrisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuBasis {
    pub mu: u32,
    pub p: BiPoly,
    pub q: BiPoly,
}

impl MuBasis {
    /// The constant `l` with `P x Q = l u`.
    pub fn hilbert_burch_constant(&self, par: &Parametrization) -> Result<Scalar> {
        let c = cross(&self.p, &self.q)?;
        proportionality(&c, par.components())
            .filter(|l| !l.is_zero())
            .ok_or_else(|| {
                ReesError::Verification("P x Q is not a nonzero multiple of u".into())
            })
    }
}

/// Syzygies of degree `s`, i.e. a basis of the kernel piece of bidegree `(s, 1)`.
pub fn syzygies(par: &Parametrization, s: u32) -> Result<Vec<BiPoly>> {
    kernel_piece(par, s, 1)
}

pub fn mu_basis(par: &Parametrization) -> Result<MuBasis> {
    let d = par.degree();
    let (mu, p) = (0..=d / 2)
        .find_map(|s| match syzygies(par, s) {
            Ok(v) if !v.is_empty() => Some(Ok((s, v[0].clone()))),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .ok_or_else(|| ReesError::Verification("no syzygy of degree <= d/2".into()))??;
    let nu = d - mu;
    let candidates = syzygies(par, nu)?;
    let multiples: Vec<BiPoly> = t_monomials(nu - mu)
        .iter()
        .map(|m| p.mul_monomial(m))
        .collect();
    let field = par.field();
    let q = with_field_ops!(field, ops => {
        let mut span = Echelon::new(ops.clone(), multiples[0].to_dense().len());
        for m in &multiples {
            span.insert(ops.import_all(&m.to_dense())?);
        }
        let mut found = None;
        for c in &candidates {
            let mut v = ops.import_all(&c.to_dense())?;
            span.reduce(&mut v);
            if v.iter().any(|x| !ops.is_zero(x)) {
                found = Some(BiPoly::from_dense(field, (nu, 1), &ops.export_all(&v))?);
                break;
            }
        }
        found
    })
    .ok_or_else(|| ReesError::Verification("no second syzygy generator".into()))?
    .normalized();
    let mb = MuBasis { mu, p, q };
    mb.hilbert_burch_constant(par)?;
    Ok(mb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Field;

    #[test]
    fn monomial_quintic() {
        let q = Field::Rational;
        let par = Parametrization::from_i64(
            q,
            [&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 0, 0, 1]],
        )
        .unwrap();
        let mb = mu_basis(&par).unwrap();
        assert_eq!(mb.mu, 2);
        assert_eq!(mb.p.to_string(), "T0^2*X1 - T1^2*X0");
        assert_eq!(mb.q.to_string(), "T0^3*X2 - T1^3*X1");
        assert!(par.annihilates(&mb.p).unwrap());
        assert!(par.annihilates(&mb.q).unwrap());
    }

    #[test]
    fn twisted_mu_one() {
        // u = (T0^3, T0^2 T1, T1^3) has the linear syzygy T1 X0 - T0 X1
        let q = Field::Rational;
        let par =
            Parametrization::from_i64(q, [&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]).unwrap();
        let mb = mu_basis(&par).unwrap();
        assert_eq!(mb.mu, 1);
        assert_eq!(mb.q.bidegree(), (2, 1));
    }
}
