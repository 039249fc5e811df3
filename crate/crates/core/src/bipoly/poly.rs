use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{ReesError, Result};
use crate::exactmath::{ExactMatrix, Field, Scalar};

use super::monomial::{bidegree_count, monomials};
use super::{Monomial, TPoly};

/// Bihomogeneous polynomial in `k[T0,T1] ⊗ k[X0,X1,X2]` with a fixed bidegree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    field: Field,
    bideg: (u32, u32),
    terms: BTreeMap<Monomial, Scalar>,
}

/// Polynomial in the X variables only, i.e. of bidegree `(0, l)`.
pub type XPoly = BiPoly;

impl BiPoly {
    pub fn zero(field: Field, bideg: (u32, u32)) -> Self {
        BiPoly {
            field,
            bideg,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        BiPoly::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = BiPoly::zero(c.field(), m.bidegree());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial(field: Field, m: Monomial) -> Self {
        BiPoly::term(m, field.one())
    }

    /// Builds a polynomial, merging repeated monomials. Every monomial must
    /// have bidegree `bideg`.
    pub fn from_terms(
        field: Field,
        bideg: (u32, u32),
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut p = BiPoly::zero(field, bideg);
        for (m, c) in terms {
            if m.bidegree() != bideg {
                return Err(ReesError::BidegreeMismatch {
                    expected: bideg,
                    found: m.bidegree(),
                });
            }
            if c.field() != field {
                return Err(ReesError::BackendMismatch(format!(
                    "coefficient in {} for a polynomial over {field}",
                    c.field()
                )));
            }
            p.add_term(m, &c);
        }
        Ok(p)
    }

    pub fn from_i64_terms(field: Field, terms: &[(i64, [u32; 5])]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| ReesError::Parse("empty term list".into()))?;
        let bideg = Monomial(first.1).bidegree();
        BiPoly::from_terms(
            field,
            bideg,
            terms.iter().map(|(c, e)| (Monomial(*e), field.from_i64(*c))),
        )
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = &*v + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.bideg
    }

    pub fn t_degree(&self) -> u32 {
        self.bideg.0
    }

    pub fn x_degree(&self) -> u32 {
        self.bideg.1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in decreasing canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    fn compatible(&self, other: &BiPoly) -> Result<()> {
        if self.field != other.field {
            return Err(ReesError::BackendMismatch(format!(
                "{} vs {}",
                self.field, other.field
            )));
        }
        if self.bideg != other.bideg {
            return Err(ReesError::BidegreeMismatch {
                expected: self.bideg,
                found: other.bideg,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &BiPoly) -> Result<BiPoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &BiPoly) -> Result<BiPoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, &-c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly {
            field: self.field,
            bideg: self.bideg,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<BiPoly> {
        if c.field() != self.field {
            return Err(ReesError::BackendMismatch("scalar multiple".into()));
        }
        if c.is_zero() {
            return Ok(BiPoly::zero(self.field, self.bideg));
        }
        Ok(BiPoly {
            field: self.field,
            bideg: self.bideg,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        })
    }

    pub fn mul(&self, other: &BiPoly) -> Result<BiPoly> {
        if self.field != other.field {
            return Err(ReesError::BackendMismatch(format!(
                "{} vs {}",
                self.field, other.field
            )));
        }
        let bideg = (self.bideg.0 + other.bideg.0, self.bideg.1 + other.bideg.1);
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let prod = c1 * c2;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &prod,
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        Ok(BiPoly {
            field: self.field,
            bideg,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn mul_monomial(&self, m: &Monomial) -> BiPoly {
        let (i, j) = m.bidegree();
        BiPoly {
            field: self.field,
            bideg: (self.bideg.0 + i, self.bideg.1 + j),
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut r = BiPoly::constant(self.field.one());
        for _ in 0..e {
            r = r.mul(self).expect("same field");
        }
        r
    }

    /// Quotient and remainder of one-divisor division with respect to the
    /// lexicographic order.
    pub fn div_rem(&self, divisor: &BiPoly) -> Result<(BiPoly, BiPoly)> {
        if self.field != divisor.field {
            return Err(ReesError::BackendMismatch("division".into()));
        }
        let (lm, lc) = divisor.leading().ok_or(ReesError::DivisionByZero)?;
        let (lm, lc_inv) = (*lm, lc.inv()?);
        let qdeg = (
            self.bideg.0.saturating_sub(divisor.bideg.0),
            self.bideg.1.saturating_sub(divisor.bideg.1),
        );
        let mut q = BiPoly::zero(self.field, qdeg);
        let mut r = BiPoly::zero(self.field, self.bideg);
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            match m.div(&lm) {
                Some(qm) => {
                    let qc = &c * &lc_inv;
                    for (dm, dc) in &divisor.terms {
                        p.add_term(dm.mul(&qm), &-(dc * &qc));
                    }
                    q.add_term(qm, &qc);
                }
                None => {
                    p.terms.remove(&m);
                    r.add_term(m, &c);
                }
            }
        }
        Ok((q, r))
    }

    /// Exact quotient; errors if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &BiPoly) -> Result<BiPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(ReesError::InexactDivision(format!(
                "remainder with {} terms",
                r.num_terms()
            )));
        }
        if !self.is_zero()
            && (self.bideg.0 < divisor.bideg.0 || self.bideg.1 < divisor.bideg.1)
        {
            return Err(ReesError::InexactDivision("bidegree".into()));
        }
        Ok(q)
    }

    /// Scaled copy whose leading coefficient is 1.
    pub fn normalized(&self) -> BiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().unwrap()).unwrap(),
        }
    }

    /// `l` with `self = l * other`, if it exists.
    pub fn ratio(&self, other: &BiPoly) -> Option<Scalar> {
        if self.field != other.field || self.bideg != other.bideg || other.is_zero() {
            return None;
        }
        let (m, c) = other.leading()?;
        let l = self.coeff(m).checked_div(c).ok()?;
        (other.scale(&l).ok()? == *self).then_some(l)
    }

    /// Coefficient of the T-monomial `T0^a0 T1^a1`, as a polynomial in X.
    pub fn t_coeff(&self, a0: u32, a1: u32) -> XPoly {
        let mut out = BiPoly::zero(self.field, (0, self.bideg.1));
        for (m, c) in &self.terms {
            if m.0[0] == a0 && m.0[1] == a1 {
                out.terms.insert(Monomial::x(m.0[2], m.0[3], m.0[4]), c.clone());
            }
        }
        out
    }

    /// Coefficient of the X-monomial `x`, as a form in T.
    pub fn x_coeff(&self, x: [u32; 3]) -> TPoly {
        let s = self.bideg.0;
        let mut coeffs = vec![self.field.zero(); s as usize + 1];
        for (m, c) in &self.terms {
            if m.x_part() == x {
                coeffs[m.0[1] as usize] = c.clone();
            }
        }
        TPoly::new(self.field, coeffs).unwrap()
    }

    /// Writes `self = sum_k L_k X_k` for a polynomial of X-degree 1.
    pub fn linear_coeffs(&self) -> Result<[TPoly; 3]> {
        if self.bideg.1 != 1 {
            return Err(ReesError::DegreeMismatch(format!(
                "expected X-degree 1, got {}",
                self.bideg.1
            )));
        }
        Ok([
            self.x_coeff([1, 0, 0]),
            self.x_coeff([0, 1, 0]),
            self.x_coeff([0, 0, 1]),
        ])
    }

    /// `sum_k c[k] X_k` with form coefficients of a common degree.
    pub fn from_linear_coeffs(c: &[TPoly; 3]) -> Result<BiPoly> {
        let field = c[0].field();
        let s = c[0].degree();
        if c.iter().any(|f| f.degree() != s) {
            return Err(ReesError::DegreeMismatch("linear coefficients".into()));
        }
        let mut terms = Vec::new();
        for (k, f) in c.iter().enumerate() {
            for (a, v) in f.coeffs().iter().enumerate() {
                terms.push((Monomial::t(s - a as u32, a as u32).mul(&Monomial::x_var(k)), v.clone()));
            }
        }
        BiPoly::from_terms(field, (s, 1), terms)
    }

    /// `self(T, u(T))`, a form of degree `i + j d`.
    pub fn subst_x(&self, u: &[TPoly; 3]) -> Result<TPoly> {
        let d = u[0].degree();
        if u.iter().any(|f| f.degree() != d || f.field() != self.field) {
            return Err(ReesError::DegreeMismatch("parametrisation components".into()));
        }
        let mut powers: Vec<Vec<TPoly>> = Vec::new();
        for f in u {
            let mut row = vec![TPoly::one(self.field)];
            for e in 1..=self.bideg.1 {
                let next = row[e as usize - 1].mul(f)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = TPoly::zero(self.field, self.bideg.0 + self.bideg.1 * d);
        let mut by_x: BTreeMap<[u32; 3], TPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let t = TPoly::monomial(c.clone(), m.0[0], m.0[1]);
            let e = by_x
                .entry(m.x_part())
                .or_insert_with(|| TPoly::zero(self.field, self.bideg.0));
            *e = e.add(&t)?;
        }
        for (x, t) in by_x {
            let ux = powers[0][x[0] as usize]
                .mul(&powers[1][x[1] as usize])?
                .mul(&powers[2][x[2] as usize])?;
            out = out.add(&t.mul(&ux)?)?;
        }
        Ok(out)
    }

    /// `self(F0, F1, X)` for X-forms `F0, F1` of a common degree.
    pub fn subst_t(&self, f0: &XPoly, f1: &XPoly) -> Result<XPoly> {
        if f0.bideg.0 != 0 || f1.bideg.0 != 0 || f0.bideg.1 != f1.bideg.1 {
            return Err(ReesError::DegreeMismatch(
                "inverse map components must be X-forms of one degree".into(),
            ));
        }
        let e = f0.bideg.1;
        let (i, j) = self.bideg;
        let p0: Vec<BiPoly> = (0..=i).map(|k| f0.pow(k)).collect();
        let p1: Vec<BiPoly> = (0..=i).map(|k| f1.pow(k)).collect();
        let mut out = BiPoly::zero(self.field, (0, i * e + j));
        for (m, c) in &self.terms {
            let x = BiPoly::term(Monomial::x(m.0[2], m.0[3], m.0[4]), c.clone());
            let t = p0[m.0[0] as usize].mul(&p1[m.0[1] as usize])?.mul(&x)?;
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// `self(T, M X)`, i.e. each `X_k` replaced by `sum_l M[k][l] X_l`.
    pub fn change_x(&self, m: &ExactMatrix) -> Result<BiPoly> {
        if m.nrows() != 3 || m.ncols() != 3 {
            return Err(ReesError::ShapeMismatch("X change must be 3x3".into()));
        }
        if m.field() != self.field {
            return Err(ReesError::BackendMismatch("X change".into()));
        }
        let lin: Vec<BiPoly> = (0..3)
            .map(|k| {
                BiPoly::from_terms(
                    self.field,
                    (0, 1),
                    (0..3).map(|l| (Monomial::x_var(l), m.get(k, l).clone())),
                )
            })
            .collect::<Result<_>>()?;
        let j = self.bideg.1;
        let pows: Vec<Vec<BiPoly>> = lin
            .iter()
            .map(|l| (0..=j).map(|e| l.pow(e)).collect())
            .collect();
        let mut out = BiPoly::zero(self.field, self.bideg);
        let mut by_x: BTreeMap<[u32; 3], Vec<(Monomial, Scalar)>> = BTreeMap::new();
        for (mono, c) in &self.terms {
            by_x.entry(mono.x_part())
                .or_default()
                .push((Monomial::t(mono.0[0], mono.0[1]), c.clone()));
        }
        for (x, ts) in by_x {
            let tpart = BiPoly::from_terms(self.field, (self.bideg.0, 0), ts)?;
            let xp = pows[0][x[0] as usize]
                .mul(&pows[1][x[1] as usize])?
                .mul(&pows[2][x[2] as usize])?;
            out = out.add(&tpart.mul(&xp)?)?;
        }
        Ok(out)
    }

    /// Coefficient vector in the basis `monomials(i, j)`.
    pub fn to_dense(&self) -> Vec<Scalar> {
        let (i, j) = self.bideg;
        let mut v = vec![self.field.zero(); bidegree_count(i, j)];
        for (m, c) in &self.terms {
            v[m.index()] = c.clone();
        }
        v
    }

    pub fn from_dense(field: Field, bideg: (u32, u32), v: &[Scalar]) -> Result<BiPoly> {
        let ms = monomials(bideg.0, bideg.1);
        if ms.len() != v.len() {
            return Err(ReesError::ShapeMismatch(format!(
                "{} coefficients for bidegree {bideg:?}",
                v.len()
            )));
        }
        BiPoly::from_terms(field, bideg, ms.into_iter().zip(v.iter().cloned()))
    }

    /// Exact text form: `c*T0^a0*T1^a1*X0^b0*X1^b1*X2^b2` terms in
    /// decreasing canonical order joined by ` + `; `0` for zero.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms()
            .map(|(m, c)| format!("{c}*{}", m.canonical()))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses canonical or pretty text. The bidegree is read from the terms;
    /// a zero polynomial takes `default_bideg`.
    pub fn parse(field: Field, s: &str, default_bideg: (u32, u32)) -> Result<BiPoly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ReesError::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        for (neg, body) in split_terms(s)? {
            let (m, mut c) = parse_term(field, &body)?;
            if neg {
                c = -c;
            }
            terms.push((m, c));
        }
        let nonzero: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let bideg = nonzero.first().map_or(default_bideg, |(m, _)| m.bidegree());
        BiPoly::from_terms(field, bideg, nonzero)
    }
}

fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut prev = None;
    for ch in s.chars() {
        if ch.is_whitespace() {
            continue;
        }
        let sign = ch == '+' || ch == '-';
        if sign && !matches!(prev, Some('^') | Some('*') | Some('/')) {
            if !cur.is_empty() {
                out.push((neg, std::mem::take(&mut cur)));
                neg = false;
            } else if prev.is_some() && !matches!(prev, Some('+') | Some('-')) {
                return Err(ReesError::Parse(format!("misplaced sign in '{s}'")));
            }
            if ch == '-' {
                neg = !neg;
            }
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if cur.is_empty() {
        return Err(ReesError::Parse(format!("dangling sign in '{s}'")));
    }
    out.push((neg, cur));
    Ok(out)
}

fn parse_term(field: Field, t: &str) -> Result<(Monomial, Scalar)> {
    let mut e = [0u32; 5];
    let mut c = field.one();
    for factor in t.split('*') {
        let (base, exp) = match factor.split_once('^') {
            Some((b, x)) => (
                b,
                x.parse::<u32>()
                    .map_err(|_| ReesError::Parse(format!("bad exponent in '{factor}'")))?,
            ),
            None => (factor, 1),
        };
        let var = match base {
            "T0" => Some(0),
            "T1" => Some(1),
            "X0" => Some(2),
            "X1" => Some(3),
            "X2" => Some(4),
            _ => None,
        };
        match var {
            Some(k) => e[k] += exp,
            None => {
                let v = field.parse_scalar(base)?;
                c = &c * &v.pow(exp);
            }
        }
    }
    Ok((Monomial(e), c))
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly{:?}[{}]", self.bideg, self)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let (neg, abs) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if *m == Monomial::ONE {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn p(s: &str) -> BiPoly {
        BiPoly::parse(q(), s, (0, 0)).unwrap()
    }

    #[test]
    fn parse_and_print_roundtrip() {
        let f = p("T1^2*X0 - T0^2*X1 + 3/2*T0*T1*X2");
        assert_eq!(f.bidegree(), (2, 1));
        assert_eq!(f.to_string(), "-T0^2*X1 + 3/2*T0*T1*X2 + T1^2*X0");
        let c = f.to_canonical_string();
        assert_eq!(BiPoly::parse(q(), &c, (0, 0)).unwrap(), f);
        assert!(c.starts_with("-1*T0^2*T1^0*X0^0*X1^1*X2^0"));
        assert!(BiPoly::parse(q(), "T0 + X0", (0, 0)).is_err());
        assert!(BiPoly::parse(q(), "T0 +", (0, 0)).is_err());
        assert_eq!(BiPoly::parse(q(), "0", (2, 3)).unwrap().bidegree(), (2, 3));
    }

    #[test]
    fn arithmetic_and_bidegree_errors() {
        let a = p("T0*X0 + T1*X1");
        let b = p("T0*X1 - T1*X0");
        let s = a.mul(&b).unwrap();
        assert_eq!(s.bidegree(), (2, 2));
        assert_eq!(s.exact_div(&a).unwrap(), b);
        assert!(s.exact_div(&p("T0*X0 + T1*X2")).is_err());
        assert!(matches!(
            a.add(&p("X0")),
            Err(ReesError::BidegreeMismatch { .. })
        ));
        assert_eq!(a.sub(&a).unwrap(), BiPoly::zero(q(), (1, 1)));
    }

    #[test]
    fn substitutions() {
        // u = (T0^2, T0 T1, T1^2): the conic X1^2 - X0 X2 vanishes
        let u = [
            TPoly::from_i64(q(), &[1, 0, 0]),
            TPoly::from_i64(q(), &[0, 1, 0]),
            TPoly::from_i64(q(), &[0, 0, 1]),
        ];
        assert!(p("X1^2 - X0*X2").subst_x(&u).unwrap().is_zero());
        assert!(p("T1*X0 - T0*X1").subst_x(&u).unwrap().is_zero());
        let g = p("T0*X1 + T1*X2");
        let h = g.subst_t(&p("X0"), &p("X1")).unwrap();
        assert_eq!(h, p("X0*X1 + X1*X2"));
    }

    #[test]
    fn change_of_coordinates() {
        let f = q();
        let m = ExactMatrix::from_rows(
            f,
            vec![
                vec![f.from_i64(0), f.from_i64(1), f.from_i64(0)],
                vec![f.from_i64(1), f.from_i64(0), f.from_i64(0)],
                vec![f.from_i64(1), f.from_i64(0), f.from_i64(1)],
            ],
        )
        .unwrap();
        let g = p("T0*X0^2 + X1*X2*T1");
        // X0 -> X1, X1 -> X0, X2 -> X0 + X2
        let h = g.change_x(&m).unwrap();
        assert_eq!(h, p("T0*X1^2 + T1*X0^2 + T1*X0*X2"));
    }

    #[test]
    fn dense_roundtrip_and_ratio() {
        let g = p("2*T0*X1^2 - T1*X0*X2");
        let v = g.to_dense();
        assert_eq!(BiPoly::from_dense(q(), (1, 2), &v).unwrap(), g);
        let h = g.scale(&q().from_i64(-3)).unwrap();
        assert_eq!(h.ratio(&g), Some(q().from_i64(-3)));
        assert_eq!(g.normalized().leading().unwrap().1, &q().one());
    }
}
