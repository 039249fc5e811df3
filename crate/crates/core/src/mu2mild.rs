//! Generators of `K` for `mu = 2` curves whose singularities are all double
//! points: Sylvester forms, the Morley form and the minors built from it.

use std::collections::BTreeMap;

use crate::bipoly::{det_poly, BiPoly, Monomial, XPoly};
use crate::error::{ReesError, Result};
use crate::exactmath::{Field, Scalar};
use crate::report::Generator;
use crate::syzygy::{coefficient_matrix, mu_basis, MuBasis, Parametrization};

#[derive(Clone, Debug)]
pub struct MildContext {
    pub par: Parametrization,
    pub basis: MuBasis,
    pub d: u32,
    /// `P = T0^2 L0 + T1^2 L1 + T0 T1 Lstar`.
    pub l0: XPoly,
    pub l1: XPoly,
    pub lstar: XPoly,
}

impl MildContext {
    pub fn new(par: &Parametrization) -> Result<Self> {
        let mb = mu_basis(par)?;
        Self::from_basis(par, &mb)
    }

    /// Only checks `mu = 2` and that `L0, L1, Lstar` have no common zero;
    /// the caller decides whether the curve is in the mild class.
    pub fn from_basis(par: &Parametrization, mb: &MuBasis) -> Result<Self> {
        if mb.mu != 2 {
            return Err(ReesError::precondition("mu = 2", format!("mu = {}", mb.mu)));
        }
        if coefficient_matrix(&mb.p)?.rank() != 3 {
            return Err(ReesError::precondition(
                "L0, L1, L* without common zero",
                "coefficient matrix of P is singular",
            ));
        }
        Ok(MildContext {
            par: par.clone(),
            d: par.degree(),
            l0: mb.p.t_coeff(2, 0),
            l1: mb.p.t_coeff(0, 2),
            lstar: mb.p.t_coeff(1, 1),
            basis: mb.clone(),
        })
    }

    pub fn field(&self) -> Field {
        self.par.field()
    }
}

/// `g = T0^(1+v0) A + T1^(1+v1) B`, a term going to the first part whenever
/// its T0-exponent allows it.
fn split_t(g: &BiPoly, v: (u32, u32)) -> Result<(BiPoly, BiPoly)> {
    let (i, j) = g.bidegree();
    let field = g.field();
    let (e0, e1) = (1 + v.0, 1 + v.1);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (m, c) in g.terms() {
        let mut e = m.0;
        if e[0] >= e0 {
            e[0] -= e0;
            a.push((Monomial(e), c.clone()));
        } else if e[1] >= e1 {
            e[1] -= e1;
            b.push((Monomial(e), c.clone()));
        } else {
            return Err(ReesError::DegreeMismatch(format!("cannot split {m} for v = {v:?}")));
        }
    }
    Ok((
        BiPoly::from_terms(field, (i - e0, j), a)?,
        BiPoly::from_terms(field, (i - e1, j), b)?,
    ))
}

/// `Delta^v` for one `v`, without range checks.
pub fn sylvester_form(ctx: &MildContext, v: (u32, u32)) -> Result<BiPoly> {
    let (p0, p1) = split_t(&ctx.basis.p, v)?;
    let (q0, q1) = split_t(&ctx.basis.q, v)?;
    p0.mul(&q1)?.sub(&p1.mul(&q0)?)
}

#[derive(Clone, Debug)]
pub struct SylvesterForms {
    pub d00: BiPoly,
    pub d10: BiPoly,
    pub d01: BiPoly,
}

pub fn delta_sylvester(ctx: &MildContext) -> Result<SylvesterForms> {
    if ctx.d < 5 {
        return Err(ReesError::precondition("d >= 5", format!("d = {}", ctx.d)));
    }
    sylvester_forms_unchecked(ctx)
}

pub(crate) fn sylvester_forms_unchecked(ctx: &MildContext) -> Result<SylvesterForms> {
    Ok(SylvesterForms {
        d00: sylvester_form(ctx, (0, 0))?,
        d10: sylvester_form(ctx, (1, 0))?,
        d01: sylvester_form(ctx, (0, 1))?,
    })
}

/// Polynomials in `S, T, X`, stored by S-exponent.
type SPoly = BTreeMap<[u32; 2], BTreeMap<Monomial, Scalar>>;

fn add_term(acc: &mut SPoly, s: [u32; 2], m: Monomial, c: &Scalar) {
    let slot = acc.entry(s).or_default();
    match slot.get_mut(&m) {
        Some(x) => {
            *x = &*x + c;
            if x.is_zero() {
                slot.remove(&m);
            }
        }
        None => {
            slot.insert(m, c.clone());
        }
    }
}

/// Divided differences `(G^0, G^1)` with `g(T) - g(S) = G^0 (T0 - S0) +
/// G^1 (T1 - S1)`. The staircase passes through `(S0, T1)`; the swapped one
/// through `(T0, S1)`.
fn divided_differences(g: &BiPoly, swapped: bool) -> (SPoly, SPoly) {
    let mut g0 = SPoly::new();
    let mut g1 = SPoly::new();
    for (m, c) in g.terms() {
        let [a0, a1, b0, b1, b2] = m.0;
        if !swapped {
            for k in 0..a0 {
                add_term(&mut g0, [a0 - 1 - k, 0], Monomial([k, a1, b0, b1, b2]), c);
            }
            for k in 0..a1 {
                add_term(&mut g1, [a0, a1 - 1 - k], Monomial([0, k, b0, b1, b2]), c);
            }
        } else {
            for k in 0..a1 {
                add_term(&mut g1, [0, a1 - 1 - k], Monomial([a0, k, b0, b1, b2]), c);
            }
            for k in 0..a0 {
                add_term(&mut g0, [a0 - 1 - k, a1], Monomial([k, 0, b0, b1, b2]), c);
            }
        }
    }
    (g0, g1)
}

fn spoly_mul_sub(acc: &mut SPoly, a: &SPoly, b: &SPoly, negate: bool) {
    for (sa, ta) in a {
        for (sb, tb) in b {
            let s = [sa[0] + sb[0], sa[1] + sb[1]];
            for (ma, ca) in ta {
                for (mb, cb) in tb {
                    let c = ca * cb;
                    let c = if negate { -&c } else { c };
                    add_term(acc, s, ma.mul(mb), &c);
                }
            }
        }
    }
}

/// Coefficients `F^v` of `Mor(S, T, X) = sum_v F^v(T, X) S^v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorleyData {
    pub d: u32,
    pub coeffs: BTreeMap<(u32, u32), BiPoly>,
}

impl MorleyData {
    /// `F^v`, of bidegree `(d - 2 - |v|, 2)`.
    pub fn get(&self, v: (u32, u32)) -> BiPoly {
        self.coeffs.get(&v).cloned().unwrap_or_else(|| {
            let field = self.coeffs.values().next().map(BiPoly::field).unwrap();
            BiPoly::zero(field, (self.d - 2 - v.0 - v.1, 2))
        })
    }

    /// Coefficient of `T^w S^v`.
    pub fn entry(&self, v: (u32, u32), w: (u32, u32)) -> XPoly {
        self.get(v).t_coeff(w.0, w.1)
    }
}

fn morley_from(ctx: &MildContext, swapped: bool) -> Result<MorleyData> {
    let field = ctx.field();
    let (p0, p1) = divided_differences(&ctx.basis.p, swapped);
    let (q0, q1) = divided_differences(&ctx.basis.q, swapped);
    let mut mor = SPoly::new();
    spoly_mul_sub(&mut mor, &p0, &q1, false);
    spoly_mul_sub(&mut mor, &p1, &q0, true);
    let d = ctx.d;
    let mut coeffs = BTreeMap::new();
    for (s, terms) in mor {
        let bideg = (d - 2 - s[0] - s[1], 2);
        let f = BiPoly::from_terms(field, bideg, terms)?;
        if !f.is_zero() {
            coeffs.insert((s[0], s[1]), f);
        }
    }
    if coeffs.is_empty() {
        return Err(ReesError::Verification("Morley form vanishes".into()));
    }
    Ok(MorleyData { d, coeffs })
}

/// Morley coefficients from the staircase decomposition.
pub fn morley_coeffs(ctx: &MildContext) -> Result<MorleyData> {
    morley_from(ctx, false)
}

/// Same with the roles of `T0` and `T1` exchanged in the staircase.
pub fn morley_coeffs_swapped(ctx: &MildContext) -> Result<MorleyData> {
    morley_from(ctx, true)
}

/// Exponents `(n - r, r)` for `r = 0..=n`.
fn row_index(n: u32) -> Vec<(u32, u32)> {
    (0..=n).map(|r| (n - r, r)).collect()
}

/// Banded column `c` of L-forms over `rows` rows.
fn band(ctx: &MildContext, rows: usize, c: usize) -> Vec<XPoly> {
    let zero = XPoly::zero(ctx.field(), (0, 1));
    (0..rows)
        .map(|r| match r.wrapping_sub(c) {
            0 => ctx.l0.clone(),
            1 => ctx.lstar.clone(),
            2 => ctx.l1.clone(),
            _ => zero.clone(),
        })
        .collect()
}

/// `M_i` as rows: `d - 1 - i` rows indexed by `|v| = d - 2 - i` in
/// decreasing `v0`, `d - 3 - i` banded columns and the column of `F^v`.
pub fn minor_matrix(ctx: &MildContext, mor: &MorleyData, i: u32) -> Result<Vec<Vec<BiPoly>>> {
    let d = ctx.d;
    if i == 0 || i + 2 > d {
        return Err(ReesError::precondition(
            "1 <= i <= d - 2",
            format!("i = {i}, d = {d}"),
        ));
    }
    let vs = row_index(d - 2 - i);
    let n = vs.len();
    let cols: Vec<Vec<XPoly>> = (0..n - 2).map(|c| band(ctx, n, c)).collect();
    Ok(vs
        .iter()
        .enumerate()
        .map(|(r, v)| {
            let mut row: Vec<BiPoly> = cols.iter().map(|col| col[r].clone()).collect();
            row.push(mor.get(*v));
            row
        })
        .collect())
}

/// `Delta^v_{i, d-1-i}` for `|v| = d - 2 - i`: the maximal minor of `M_i`
/// without row `v`, with sign `(-1)^position`.
pub fn minor_family(ctx: &MildContext, mor: &MorleyData, i: u32) -> Result<Vec<BiPoly>> {
    let d = ctx.d;
    if i == 0 || i + 4 > d {
        return Err(ReesError::precondition(
            "1 <= i <= d - 4",
            format!("i = {i}, d = {d}"),
        ));
    }
    let m = minor_matrix(ctx, mor, i)?;
    let mut out = Vec::with_capacity(m.len());
    for pos in 0..m.len() {
        let sub: Vec<Vec<BiPoly>> = m
            .iter()
            .enumerate()
            .filter(|&(r, _)| r != pos)
            .map(|(_, row)| row.clone())
            .collect();
        let det = det_poly(ctx.field(), sub, (i, d - 1 - i))?;
        out.push(if pos % 2 == 0 { det } else { det.neg() });
    }
    Ok(out)
}

/// The square matrix `[[M_i(1), Mor(i)], [0, M_{d-2-i}(1)^t]]`.
pub fn resultant_matrix(ctx: &MildContext, mor: &MorleyData, i: u32) -> Result<Vec<Vec<XPoly>>> {
    let d = ctx.d;
    if i == 0 || i + 4 > d {
        return Err(ReesError::precondition(
            "1 <= i <= d - 4",
            format!("i = {i}, d = {d}"),
        ));
    }
    let field = ctx.field();
    let n = (d - 2) as usize;
    let upper_rows = row_index(d - 2 - i);
    let t_cols = row_index(i);
    let nb = upper_rows.len() - 2;
    let mut m = vec![vec![XPoly::zero(field, (0, 1)); n]; n];
    for c in 0..nb {
        for (r, l) in band(ctx, upper_rows.len(), c).into_iter().enumerate() {
            m[r][c] = l;
        }
    }
    for (r, v) in upper_rows.iter().enumerate() {
        for (c, w) in t_cols.iter().enumerate() {
            m[r][nb + c] = mor.entry(*v, *w);
        }
    }
    // transpose of the banded part of M_{d-2-i}, over the T-monomials of degree i
    for t in 0..t_cols.len().saturating_sub(2) {
        for (c, l) in band(ctx, t_cols.len(), t).into_iter().enumerate() {
            m[upper_rows.len() + t][nb + c] = l;
        }
    }
    Ok(m)
}

/// `|M_i|` and `l` with `|M_i| = l E`.
pub fn morley_det_check(
    ctx: &MildContext,
    mor: &MorleyData,
    i: u32,
    equation: &XPoly,
) -> Result<(XPoly, Scalar)> {
    let m = resultant_matrix(ctx, mor, i)?;
    let det = det_poly(ctx.field(), m, (0, ctx.d))?;
    if det.is_zero() {
        return Err(ReesError::Verification(format!("|M_{i}| vanishes")));
    }
    let lambda = det.ratio(equation).ok_or_else(|| {
        ReesError::Verification(format!("|M_{i}| is not a multiple of the implicit equation"))
    })?;
    Ok((det, lambda))
}

/// `E, P, Q, Delta^(1,0), Delta^(0,1)` and the minors for `1 <= i <= d - 4`.
pub fn assemble_mild(ctx: &MildContext, equation: &XPoly) -> Result<Vec<Generator>> {
    if ctx.d < 5 {
        return Err(ReesError::precondition("d >= 5", format!("d = {}", ctx.d)));
    }
    assemble_unchecked(ctx, equation)
}

pub(crate) fn assemble_unchecked(ctx: &MildContext, equation: &XPoly) -> Result<Vec<Generator>> {
    let syl = sylvester_forms_unchecked(ctx)?;
    let mut out = vec![
        ("E".to_string(), equation.clone()),
        ("P".into(), ctx.basis.p.clone()),
        ("Q".into(), ctx.basis.q.clone()),
        ("D(1,0)".into(), syl.d10),
        ("D(0,1)".into(), syl.d01),
    ];
    if ctx.d >= 5 {
        let mor = morley_coeffs(ctx)?;
        for i in 1..=ctx.d - 4 {
            let vs = row_index(ctx.d - 2 - i);
            for (v, g) in vs.into_iter().zip(minor_family(ctx, &mor, i)?) {
                out.push((format!("D[{i}]({},{})", v.0, v.1), g));
            }
        }
    }
    out.into_iter()
        .map(|(label, g)| {
            if g.is_zero() {
                return Err(ReesError::Verification(format!("generator {label} vanishes")));
            }
            Ok(Generator {
                label,
                poly: g.normalized(),
            })
        })
        .collect()
}

/// `(d + 1)(d - 4) / 2 + 5`.
pub fn mild_generator_count(d: u32) -> u32 {
    (d + 1) * (d - 4) / 2 + 5
}
