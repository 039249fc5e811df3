use std::fmt;

use crate::error::{ReesError, Result};
use crate::exactmath::{Field, Scalar};

use super::{BiPoly, Monomial};

/// Binary form in `T0, T1`. `coeffs[a]` multiplies `T0^(s-a) T1^a` where `s`
/// is the declared degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl TPoly {
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(ReesError::DegreeMismatch("empty coefficient list".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(ReesError::BackendMismatch(format!(
                "coefficient in {} for a form over {field}",
                bad.field()
            )));
        }
        Ok(TPoly { field, coeffs })
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Self {
        TPoly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
            .expect("nonempty coefficient list")
    }

    pub fn zero(field: Field, degree: u32) -> Self {
        TPoly {
            field,
            coeffs: vec![field.zero(); degree as usize + 1],
        }
    }

    pub fn one(field: Field) -> Self {
        TPoly {
            field,
            coeffs: vec![field.one()],
        }
    }

    /// The monomial `c T0^a0 T1^a1`.
    pub fn monomial(c: Scalar, a0: u32, a1: u32) -> Self {
        let field = c.field();
        let mut t = TPoly::zero(field, a0 + a1);
        t.coeffs[a1 as usize] = c;
        t
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, a: usize) -> &Scalar {
        &self.coeffs[a]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    fn check(&self, other: &TPoly) -> Result<()> {
        if self.field != other.field {
            return Err(ReesError::BackendMismatch(format!(
                "{} vs {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TPoly) -> Result<TPoly> {
        self.check(other)?;
        if self.degree() != other.degree() {
            return Err(ReesError::DegreeMismatch(format!(
                "adding forms of degree {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(TPoly {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &TPoly) -> Result<TPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TPoly {
        TPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<TPoly> {
        Ok(TPoly {
            field: self.field,
            coeffs: self
                .coeffs
                .iter()
                .map(|a| a.checked_mul(c))
                .collect::<Result<_>>()?,
        })
    }

    pub fn mul(&self, other: &TPoly) -> Result<TPoly> {
        self.check(other)?;
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Ok(TPoly {
            field: self.field,
            coeffs: out,
        })
    }

    pub fn pow(&self, e: u32) -> TPoly {
        let mut r = TPoly::one(self.field);
        for _ in 0..e {
            r = r.mul(self).expect("same field");
        }
        r
    }

    /// Multiplies by `T0^a0 T1^a1`.
    pub fn shift(&self, a0: u32, a1: u32) -> TPoly {
        let mut coeffs = vec![self.field.zero(); a1 as usize];
        coeffs.extend(self.coeffs.iter().cloned());
        coeffs.extend(std::iter::repeat_n(self.field.zero(), a0 as usize));
        TPoly {
            field: self.field,
            coeffs,
        }
    }

    /// Exact quotient; fails unless `other` divides `self`.
    pub fn exact_div(&self, other: &TPoly) -> Result<TPoly> {
        self.check(other)?;
        if other.is_zero() {
            return Err(ReesError::DivisionByZero);
        }
        if other.degree() > self.degree() {
            if self.is_zero() {
                return Err(ReesError::DegreeMismatch("quotient degree".into()));
            }
            return Err(ReesError::InexactDivision("divisor has larger degree".into()));
        }
        let (q, r) = uni_divrem(&trim(&self.coeffs), &trim(&other.coeffs))?;
        if !r.is_empty() {
            return Err(ReesError::InexactDivision("nonzero remainder".into()));
        }
        let qd = (self.degree() - other.degree()) as usize;
        if q.len() > qd + 1 {
            return Err(ReesError::InexactDivision("T0 does not divide".into()));
        }
        let mut coeffs = q;
        coeffs.resize(qd + 1, self.field.zero());
        Ok(TPoly {
            field: self.field,
            coeffs,
        })
    }

    /// Power of `T0` dividing `self` (the degree for the zero form).
    fn t0_valuation(&self) -> u32 {
        match self.coeffs.iter().rposition(|c| !c.is_zero()) {
            Some(top) => self.degree() - top as u32,
            None => self.degree(),
        }
    }

    /// Monic homogeneous gcd. Zero forms are ignored; the gcd of only zero
    /// forms is reported as the zero form of degree 0.
    pub fn gcd_all(forms: &[&TPoly]) -> Result<TPoly> {
        let field = forms
            .first()
            .map(|f| f.field)
            .ok_or_else(|| ReesError::DegreeMismatch("gcd of nothing".into()))?;
        let mut g: Option<Vec<Scalar>> = None;
        let mut val = u32::MAX;
        for f in forms.iter().filter(|f| !f.is_zero()) {
            if f.field != field {
                return Err(ReesError::BackendMismatch("gcd".into()));
            }
            val = val.min(f.t0_valuation());
            let c = trim(&f.coeffs);
            g = Some(match g {
                None => c,
                Some(prev) => uni_gcd(&prev, &c)?,
            });
        }
        let Some(g) = g else {
            return Ok(TPoly::zero(field, 0));
        };
        let g = monic(&g)?;
        // the dehomogenised gcd has the T0-free part; re-attach the shared T0 power
        let part = TPoly {
            field,
            coeffs: g,
        };
        Ok(part.shift(val, 0))
    }

    pub fn gcd(&self, other: &TPoly) -> Result<TPoly> {
        TPoly::gcd_all(&[self, other])
    }

    pub fn to_bipoly(&self) -> BiPoly {
        let s = self.degree();
        BiPoly::from_terms(
            self.field,
            (s, 0),
            self.coeffs
                .iter()
                .enumerate()
                .map(|(a, c)| (Monomial::t(s - a as u32, a as u32), c.clone())),
        )
        .expect("valid terms")
    }

    /// Scalar `l` with `self = l * other`, if one exists.
    pub fn ratio(&self, other: &TPoly) -> Option<Scalar> {
        if self.field != other.field || self.degree() != other.degree() || other.is_zero() {
            return None;
        }
        let k = other.coeffs.iter().position(|c| !c.is_zero())?;
        let l = self.coeffs[k].checked_div(&other.coeffs[k]).ok()?;
        (other.scale(&l).ok()? == *self).then_some(l)
    }
}

fn trim(c: &[Scalar]) -> Vec<Scalar> {
    let n = c.iter().rposition(|x| !x.is_zero()).map_or(0, |k| k + 1);
    c[..n].to_vec()
}

fn monic(c: &[Scalar]) -> Result<Vec<Scalar>> {
    let lead = c.last().ok_or(ReesError::DivisionByZero)?.inv()?;
    Ok(c.iter().map(|x| x * &lead).collect())
}

/// Univariate division on trimmed ascending coefficient vectors.
fn uni_divrem(a: &[Scalar], b: &[Scalar]) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let lead_inv = b.last().ok_or(ReesError::DivisionByZero)?.inv()?;
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![lead_inv.field().zero(); r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = &r[k + b.len() - 1] * &lead_inv;
        if !c.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                r[k + i] = &r[k + i] - &(&c * bi);
            }
        }
        q[k] = c;
    }
    Ok((trim(&q), trim(&r)))
}

fn uni_gcd(a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let (_, r) = uni_divrem(&a, &b)?;
        a = b;
        b = r;
    }
    Ok(a)
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly({})", self)
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bipoly())
    }
}
