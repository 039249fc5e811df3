use crate::bipoly::{resultant_t, BiPoly, Monomial, XPoly};
use crate::error::{ReesError, Result};
use crate::exactmath::Field;

use super::mubasis::MuBasis;
use super::param::Parametrization;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicitEquation {
    /// Reduced implicit equation, leading coefficient 1.
    pub equation: XPoly,
    /// `Res_T(P, Q)` as computed.
    pub resultant: XPoly,
    /// Degree of the parametrisation onto its image; 1 means proper.
    pub properness_degree: u32,
}

impl ImplicitEquation {
    pub fn is_proper(&self) -> bool {
        self.properness_degree == 1
    }
}

pub fn implicit_equation(par: &Parametrization, mb: &MuBasis) -> Result<ImplicitEquation> {
    let resultant = resultant_t(&mb.p, &mb.q)?;
    if resultant.is_zero() {
        return Err(ReesError::Verification("Res(P, Q) vanishes".into()));
    }
    let d = par.degree();
    let monic = resultant.normalized();
    let mut divisors: Vec<u32> = (1..=d).filter(|e| d % e == 0).collect();
    divisors.reverse();
    for e in divisors {
        if let Some(root) = perfect_root(&monic, e) {
            return Ok(ImplicitEquation {
                equation: root,
                resultant,
                properness_degree: e,
            });
        }
    }
    unreachable!("e = 1 always succeeds")
}

/// The monic `E` with `E^e = f`, for monic `f`, if it exists.
///
/// Terms of `E` are recovered in decreasing lex order: if `E_k` agrees with
/// `E` on its first `k` terms, the leading term of `f - E_k^e` is
/// `e * lt(E)^(e-1) * t_(k+1)`.
pub fn perfect_root(f: &XPoly, e: u32) -> Option<XPoly> {
    if e == 1 {
        return Some(f.normalized());
    }
    let field = f.field();
    if let Field::Prime(p) = field {
        if u64::from(e) % p == 0 {
            return None;
        }
    }
    let (lm, lc) = f.leading()?;
    if !lc.is_one() || lm.0.iter().any(|x| x % e != 0) || f.x_degree() % e != 0 {
        return None;
    }
    let (ti, tj) = f.bidegree();
    if ti % e != 0 {
        return None;
    }
    let lead = Monomial(lm.0.map(|x| x / e));
    let mut root = BiPoly::monomial(field, lead);
    let denom_mono = Monomial(lead.0.map(|x| x * (e - 1)));
    let denom_coeff = field.from_i64(e as i64);
    let max_terms = crate::bipoly::bidegree_count(ti / e, tj / e);
    for _ in 0..=max_terms {
        let r = f.sub(&root.pow(e)).ok()?;
        let Some((m, c)) = r.leading() else {
            return Some(root);
        };
        let next = m.div(&denom_mono)?;
        if next >= lead {
            return None;
        }
        let coeff = c.checked_div(&denom_coeff).ok()?;
        root = root.add(&BiPoly::term(next, coeff)).ok()?;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syzygy::mu_basis;

    fn p(s: &str) -> BiPoly {
        BiPoly::parse(Field::Rational, s, (0, 0)).unwrap()
    }

    #[test]
    fn roots_of_powers() {
        let e = p("X0^2 - 3*X1*X2 + 1/2*X2^2");
        let f = e.pow(3);
        assert_eq!(perfect_root(&f, 3), Some(e.clone()));
        assert_eq!(perfect_root(&f, 2), None);
        assert_eq!(perfect_root(&e.mul(&p("X0^2 + X1^2")).unwrap(), 2), None);
    }

    #[test]
    fn monomial_quintic_equation() {
        let q = Field::Rational;
        let par = Parametrization::from_i64(
            q,
            [&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 0, 0, 1]],
        )
        .unwrap();
        let mb = mu_basis(&par).unwrap();
        let ie = implicit_equation(&par, &mb).unwrap();
        assert_eq!(ie.properness_degree, 1);
        assert_eq!(ie.equation, p("X0^3*X2^2 - X1^5"));
        assert!(par.annihilates(&ie.equation).unwrap());
    }

    #[test]
    fn double_cover_is_improper() {
        // (T0^4 : T0^2 T1^2 : T1^4) covers the conic X1^2 = X0 X2 twice
        let q = Field::Rational;
        let par = Parametrization::from_i64(
            q,
            [&[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 0, 1]],
        )
        .unwrap();
        let mb = mu_basis(&par).unwrap();
        let ie = implicit_equation(&par, &mb).unwrap();
        assert_eq!(ie.properness_degree, 2);
        assert_eq!(ie.equation, p("X0*X2 - X1^2"));
    }
}
