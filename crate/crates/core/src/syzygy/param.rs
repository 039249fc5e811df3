use crate::bipoly::{monomials, BiPoly, TPoly};
use crate::error::{ReesError, Result};
use crate::exactmath::{ExactMatrix, Field, Scalar};

/// A plane curve parametrisation `(u0 : u1 : u2)` by binary forms of degree `d`
/// with no common factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parametrization {
    u: [TPoly; 3],
}

impl Parametrization {
    pub fn new(u: [TPoly; 3]) -> Result<Self> {
        let field = u[0].field();
        let d = u[0].degree();
        if u.iter().any(|f| f.field() != field) {
            return Err(ReesError::BackendMismatch("parametrisation components".into()));
        }
        if u.iter().any(|f| f.degree() != d) {
            return Err(ReesError::precondition(
                "equal degrees",
                format!(
                    "components have degrees {}, {}, {}",
                    u[0].degree(),
                    u[1].degree(),
                    u[2].degree()
                ),
            ));
        }
        if d == 0 {
            return Err(ReesError::precondition("d >= 1", "constant parametrisation"));
        }
        if u.iter().all(TPoly::is_zero) {
            return Err(ReesError::precondition("nonzero", "all components vanish"));
        }
        let g = TPoly::gcd_all(&[&u[0], &u[1], &u[2]])?;
        if g.degree() > 0 {
            return Err(ReesError::precondition(
                "gcd(u) = 1",
                format!("components share the factor {g}"),
            ));
        }
        Ok(Parametrization { u })
    }

    pub fn from_i64(field: Field, u: [&[i64]; 3]) -> Result<Self> {
        Parametrization::new(u.map(|c| TPoly::from_i64(field, c)))
    }

    /// Components from the 2x2 minors of the coefficient vectors of two
    /// syzygies, rescaled so the first nonzero coefficient is 1.
    pub fn from_syzygies(p: &BiPoly, q: &BiPoly) -> Result<Self> {
        let u = cross(p, q)?;
        let lead = u
            .iter()
            .flat_map(|f| f.coeffs().iter())
            .find(|c| !c.is_zero())
            .cloned()
            .ok_or_else(|| ReesError::precondition("independent syzygies", "all minors vanish"))?;
        let inv = lead.inv()?;
        let u = [u[0].scale(&inv)?, u[1].scale(&inv)?, u[2].scale(&inv)?];
        Parametrization::new(u)
    }

    pub fn field(&self) -> Field {
        self.u[0].field()
    }

    pub fn degree(&self) -> u32 {
        self.u[0].degree()
    }

    pub fn components(&self) -> &[TPoly; 3] {
        &self.u
    }

    /// `m * u`: with `X = M X'` the curve in the new coordinates is
    /// `transform(M^-1)`.
    pub fn transform(&self, m: &ExactMatrix) -> Result<Self> {
        if m.nrows() != 3 || m.ncols() != 3 {
            return Err(ReesError::ShapeMismatch("3x3 matrix required".into()));
        }
        let mut out = Vec::with_capacity(3);
        for k in 0..3 {
            let mut acc = TPoly::zero(self.field(), self.degree());
            for l in 0..3 {
                acc = acc.add(&self.u[l].scale(m.get(k, l))?)?;
            }
            out.push(acc);
        }
        let [a, b, c]: [TPoly; 3] = out.try_into().unwrap();
        Parametrization::new([a, b, c])
    }

    /// Whether `g(T, u(T))` vanishes identically.
    pub fn annihilates(&self, g: &BiPoly) -> Result<bool> {
        Ok(g.subst_x(&self.u)?.is_zero())
    }
}

/// Cross product of the X-coefficient vectors of two polynomials of X-degree 1.
pub fn cross(p: &BiPoly, q: &BiPoly) -> Result<[TPoly; 3]> {
    let [a, b, c] = p.linear_coeffs()?;
    let [x, y, z] = q.linear_coeffs()?;
    Ok([
        b.mul(&z)?.sub(&c.mul(&y)?)?,
        c.mul(&x)?.sub(&a.mul(&z)?)?,
        a.mul(&y)?.sub(&b.mul(&x)?)?,
    ])
}

/// Canonical basis of the graded piece of bidegree `(i, j)` of the kernel of
/// `X_k -> u_k`, from the nullspace of the substitution matrix.
pub fn kernel_piece(par: &Parametrization, i: u32, j: u32) -> Result<Vec<BiPoly>> {
    let field = par.field();
    let cols = monomials(i, j);
    let rows = (i + j * par.degree()) as usize + 1;
    let mut m = ExactMatrix::zeros(field, rows, cols.len());
    for (c, mono) in cols.iter().enumerate() {
        let img = BiPoly::monomial(field, *mono).subst_x(par.components())?;
        for (r, v) in img.coeffs().iter().enumerate() {
            if !v.is_zero() {
                m.set(r, c, v.clone());
            }
        }
    }
    m.nullspace()
        .iter()
        .map(|v| BiPoly::from_dense(field, (i, j), v))
        .collect()
}

/// `l` with `v = l * u`, if it exists.
pub fn proportionality(v: &[TPoly; 3], u: &[TPoly; 3]) -> Option<Scalar> {
    let k = u.iter().position(|f| !f.is_zero())?;
    let l = v[k].ratio(&u[k])?;
    v.iter()
        .zip(u)
        .all(|(a, b)| b.scale(&l).ok().as_ref() == Some(a))
        .then_some(l)
}
