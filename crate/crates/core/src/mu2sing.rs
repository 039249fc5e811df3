//! Generators of `K` for curves with a very singular point.
//!
//! Everything is computed in coordinates where the point is `(0 : 0 : 1)` and
//! `P = p1 X0 - p0 X1`; generators are mapped back at the end.

use crate::bipoly::{BiPoly, Monomial, TPoly, XPoly};
use crate::error::{ReesError, Result};
use crate::exactmath::ExactMatrix;
use crate::report::Generator;
use crate::syzygy::{classify, mu_basis, MuBasis, Parametrization, SingularityKind};

#[derive(Clone, Debug)]
pub struct VerySingularContext {
    pub original: Parametrization,
    /// The curve in the new coordinates `X = M X'`.
    pub par: Parametrization,
    pub mu: u32,
    pub d: u32,
    pub k: u32,
    pub r: i32,
    pub p0: TPoly,
    pub p1: TPoly,
    pub q: TPoly,
    /// `P` and `Q` in the new coordinates.
    pub p: BiPoly,
    pub q_syz: BiPoly,
    pub change: ExactMatrix,
    pub change_inv: ExactMatrix,
}

/// `(k, r)` with `d = k mu + r` and `-1 <= r < mu - 1`.
pub fn quotient_pair(d: u32, mu: u32) -> (u32, i32) {
    let r = d % mu;
    if r == mu - 1 {
        ((d + 1) / mu, -1)
    } else {
        (d / mu, r as i32)
    }
}

impl VerySingularContext {
    pub fn new(par: &Parametrization) -> Result<Self> {
        let mb = mu_basis(par)?;
        Self::from_basis(par, &mb)
    }

    pub fn from_basis(par: &Parametrization, mb: &MuBasis) -> Result<Self> {
        let d = par.degree();
        let cls = classify(mb, d)?;
        if cls.kind != SingularityKind::VerySingular {
            return Err(ReesError::precondition(
                "very singular point",
                format!("curve classified as {}", cls.kind.as_str()),
            ));
        }
        let change = cls.change.unwrap();
        let (p0, p1) = cls.axial.unwrap();
        let change_inv = change.inverse()?;
        let local = par.transform(&change_inv)?;
        let [u0, u1, _] = local.components();
        let q = if p0.is_zero() {
            u1.exact_div(&p1)?
        } else {
            u0.exact_div(&p0)?
        };
        if p0.mul(&q)? != *u0 || p1.mul(&q)? != *u1 {
            return Err(ReesError::Verification(
                "u0 = p0 q and u1 = p1 q fail after the change of coordinates".into(),
            ));
        }
        let (k, r) = quotient_pair(d, mb.mu);
        Ok(VerySingularContext {
            original: par.clone(),
            p: mb.p.change_x(&change)?,
            q_syz: mb.q.change_x(&change)?,
            par: local,
            mu: mb.mu,
            d,
            k,
            r,
            p0,
            p1,
            q,
            change,
            change_inv,
        })
    }

    pub fn to_original(&self, g: &BiPoly) -> Result<BiPoly> {
        g.change_x(&self.change_inv)
    }

    pub fn to_local(&self, g: &BiPoly) -> Result<BiPoly> {
        g.change_x(&self.change)
    }
}

/// Columns: coefficients of `a` then of `c`, each of degree `i - mu`; rows:
/// coefficients of `p0 a + p1 c`.
fn bezout_matrix(ctx: &VerySingularContext, i: u32) -> Result<ExactMatrix> {
    let field = ctx.par.field();
    let mu = ctx.mu as usize;
    let s = (i - ctx.mu) as usize;
    let mut m = ExactMatrix::zeros(field, i as usize + 1, 2 * (s + 1));
    for (block, p) in [&ctx.p0, &ctx.p1].into_iter().enumerate() {
        for t in 0..=s {
            for a in 0..=mu {
                m.set(a + t, block * (s + 1) + t, p.coeff(a).clone());
            }
        }
    }
    Ok(m)
}

fn x_term(x: [u32; 3], t: &TPoly) -> Result<BiPoly> {
    Ok(t.to_bipoly().mul_monomial(&Monomial::x(x[0], x[1], x[2])))
}

/// Lowers the T-degree by `mu`: `G = p0 G0 + p1 G1` gives `X0 G0 + X1 G1`.
pub fn apply_dt(ctx: &VerySingularContext, g: &BiPoly) -> Result<BiPoly> {
    let (i, j) = g.bidegree();
    if i + 1 < 2 * ctx.mu {
        return Err(ReesError::precondition(
            "i >= 2 mu - 1",
            format!("T-degree {i} with mu = {}", ctx.mu),
        ));
    }
    let field = g.field();
    let s = i - ctx.mu;
    let m = bezout_matrix(ctx, i)?;
    let mut xs: Vec<[u32; 3]> = g.terms().map(|(m, _)| m.x_part()).collect();
    xs.sort();
    xs.dedup();
    let mut out = BiPoly::zero(field, (s, j + 1));
    for x in xs {
        let rhs = g.x_coeff(x);
        let sol = m.solve(rhs.coeffs())?.ok_or_else(|| {
            ReesError::Verification(format!("no decomposition in T-degree {i}"))
        })?;
        let n = s as usize + 1;
        let a = TPoly::new(field, sol[..n].to_vec())?;
        let c = TPoly::new(field, sol[n..].to_vec())?;
        out = out.add(&x_term([x[0] + 1, x[1], x[2]], &a)?)?;
        out = out.add(&x_term([x[0], x[1] + 1, x[2]], &c)?)?;
    }
    Ok(out)
}

/// `G = X0 G0 + X1 G1`, with every term divisible by `X0` in the first part.
pub fn split_x(g: &BiPoly) -> Result<(BiPoly, BiPoly)> {
    let (i, j) = g.bidegree();
    if j == 0 {
        return Err(ReesError::precondition("G in <X0, X1>", "G has X-degree 0"));
    }
    let field = g.field();
    let mut g0 = Vec::new();
    let mut g1 = Vec::new();
    for (m, c) in g.terms() {
        let mut e = m.0;
        if e[2] > 0 {
            e[2] -= 1;
            g0.push((Monomial(e), c.clone()));
        } else if e[3] > 0 {
            e[3] -= 1;
            g1.push((Monomial(e), c.clone()));
        } else {
            return Err(ReesError::precondition(
                "G in <X0, X1>",
                format!("term {m} is a pure power of X2"),
            ));
        }
    }
    Ok((
        BiPoly::from_terms(field, (i, j - 1), g0)?,
        BiPoly::from_terms(field, (i, j - 1), g1)?,
    ))
}

/// Raises the T-degree by `mu`: `G = X0 G0 + X1 G1` gives `p0 G0 + p1 G1`.
pub fn apply_dx(ctx: &VerySingularContext, g: &BiPoly) -> Result<BiPoly> {
    let (g0, g1) = split_x(g)?;
    ctx.p0.to_bipoly().mul(&g0)?.add(&ctx.p1.to_bipoly().mul(&g1)?)
}

/// `[F_{d-mu,1} = Q, D_T(Q), ..., ]` down to X-degree `k - 1`.
pub fn family_f(ctx: &VerySingularContext) -> Result<Vec<BiPoly>> {
    if 2 * ctx.mu >= ctx.d {
        return Err(ReesError::precondition(
            "mu < d - mu",
            format!("mu = {}, d = {}", ctx.mu, ctx.d),
        ));
    }
    let mut out = vec![ctx.q_syz.clone()];
    for _ in 2..ctx.k {
        let next = apply_dt(ctx, out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

fn require(ctx: &VerySingularContext, odd: bool) -> Result<()> {
    if ctx.mu != 2 {
        return Err(ReesError::precondition("mu = 2", format!("mu = {}", ctx.mu)));
    }
    if (ctx.d % 2 == 1) != odd {
        return Err(ReesError::precondition(
            if odd { "d odd" } else { "d even" },
            format!("d = {}", ctx.d),
        ));
    }
    let min_k = if odd { 2 } else { 3 };
    if ctx.k < min_k {
        return Err(ReesError::precondition(
            if odd { "k >= 2" } else { "k >= 3" },
            format!("d = {}", ctx.d),
        ));
    }
    Ok(())
}

/// Divides every term by `T_var`, failing if some term is not divisible.
pub fn div_t(g: &BiPoly, var: usize) -> Result<BiPoly> {
    let (i, j) = g.bidegree();
    if i == 0 {
        return Err(ReesError::InexactDivision(format!("T{var} into T-degree 0")));
    }
    let mut terms = Vec::new();
    for (m, c) in g.terms() {
        let mut e = m.0;
        if e[var] == 0 {
            return Err(ReesError::InexactDivision(format!("T{var} does not divide {m}")));
        }
        e[var] -= 1;
        terms.push((Monomial(e), c.clone()));
    }
    BiPoly::from_terms(g.field(), (i - 1, j), terms)
}

/// Sylvester form of `P = T0 G + T1 H` and `F_{1,k-1} = T0 F1 - T1 F0`:
/// `F0 G + F1 H`.
pub fn top_generator_odd(ctx: &VerySingularContext, family: &[BiPoly]) -> Result<BiPoly> {
    require(ctx, true)?;
    let last = family
        .last()
        .filter(|f| f.bidegree() == (1, ctx.k - 1))
        .ok_or_else(|| ReesError::precondition("family down to F_{1,k-1}", "missing"))?;
    let field = ctx.p.field();
    let (mut gt, mut ht) = (Vec::new(), Vec::new());
    for (m, c) in ctx.p.terms() {
        if m.0[0] > 0 {
            gt.push((*m, c.clone()));
        } else {
            ht.push((*m, c.clone()));
        }
    }
    let g = div_t(&BiPoly::from_terms(field, ctx.p.bidegree(), gt)?, 0)?;
    let h = div_t(&BiPoly::from_terms(field, ctx.p.bidegree(), ht)?, 1)?;
    let f1: XPoly = last.t_coeff(1, 0);
    let f0: XPoly = last.t_coeff(0, 1).neg();
    f0.mul(&g)?.add(&f1.mul(&h)?)
}

/// `(F^0_{1,k}, F^1_{1,k})` from `M^0 P - F^0 F_{2,k-1} = T1 F^0_{1,k}` and
/// `M^1 P - F^1 F_{2,k-1} = T0 F^1_{1,k}`.
pub fn top_generators_even(
    ctx: &VerySingularContext,
    family: &[BiPoly],
) -> Result<(BiPoly, BiPoly)> {
    require(ctx, false)?;
    let last = family
        .last()
        .filter(|f| f.bidegree() == (2, ctx.k - 1))
        .ok_or_else(|| ReesError::precondition("family down to F_{2,k-1}", "missing"))?;
    let p = &ctx.p;
    let a = p.t_coeff(2, 0).mul(last)?;
    let top0 = last.t_coeff(2, 0).mul(p)?.sub(&a)?;
    let b = p.t_coeff(0, 2).mul(last)?;
    let top1 = last.t_coeff(0, 2).mul(p)?.sub(&b)?;
    Ok((div_t(&top0, 1)?, div_t(&top1, 0)?))
}

/// Generators in the original coordinates, in the order `E, P`, the family,
/// then the T-degree 1 generators.
pub fn assemble_very_singular(
    ctx: &VerySingularContext,
    equation: &XPoly,
) -> Result<Vec<Generator>> {
    require(ctx, ctx.d % 2 == 1)?;
    let family = family_f(ctx)?;
    let mut local = vec![("E".to_string(), ctx.to_local(equation)?)];
    local.push(("P".into(), ctx.p.clone()));
    for f in &family {
        let (i, j) = f.bidegree();
        local.push((format!("F[{i},{j}]"), f.clone()));
    }
    let k = ctx.k;
    if ctx.d % 2 == 1 {
        local.push((format!("F[1,{k}]"), top_generator_odd(ctx, &family)?));
    } else {
        let (a, b) = top_generators_even(ctx, &family)?;
        local.push((format!("F0[1,{k}]"), a));
        local.push((format!("F1[1,{k}]"), b));
    }
    local
        .into_iter()
        .map(|(label, g)| {
            Ok(Generator {
                label,
                poly: ctx.to_original(&g)?.normalized(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Field;
    use crate::oracle::{equivalent_modulo, ideal_piece_membership};
    use crate::syzygy::implicit_equation;

    fn monomial_odd(k: usize) -> Parametrization {
        let d = 2 * k - 1;
        let mut u = vec![vec![0i64; d + 1]; 3];
        u[0][0] = 1;
        u[1][2] = 1;
        u[2][d] = 1;
        Parametrization::from_i64(Field::Rational, [&u[0], &u[1], &u[2]]).unwrap()
    }

    fn p(s: &str) -> BiPoly {
        BiPoly::parse(Field::Rational, s, (0, 0)).unwrap()
    }


    #[test]
    fn quotient_pairs() {
        assert_eq!(quotient_pair(5, 2), (3, -1));
        assert_eq!(quotient_pair(6, 2), (3, 0));
        assert_eq!(quotient_pair(10, 3), (3, 1));
        assert_eq!(quotient_pair(11, 3), (4, -1));
    }

    #[test]
    fn quintic_operators() {
        let ctx = VerySingularContext::new(&monomial_odd(3)).unwrap();
        assert_eq!((ctx.k, ctx.r), (3, -1));
        let pp = [ctx.p.clone()];
        let f31 = p("T1^3*X1 - T0^3*X2");
        let f12 = apply_dt(&ctx, &f31).unwrap();
        assert!(equivalent_modulo(&f12, &p("T1*X1^2 - T0*X0*X2"), &pp).unwrap());
        let back = apply_dx(&ctx, &f12).unwrap();
        assert!(ideal_piece_membership(&back.sub(&f31).unwrap(), &pp).unwrap());
    }

    #[test]
    fn trivial_decompositions() {
        let ctx = VerySingularContext::new(&monomial_odd(3)).unwrap();
        let h = p("T0*X2^2");
        let g = ctx.p0.to_bipoly().mul(&h).unwrap();
        assert_eq!(apply_dt(&ctx, &g).unwrap(), p("T0*X0*X2^2"));
        let x0h = p("X0").mul(&h).unwrap();
        assert_eq!(apply_dx(&ctx, &x0h).unwrap(), ctx.p0.to_bipoly().mul(&h).unwrap());
        assert!(apply_dx(&ctx, &p("T0*X2")).is_err());
        assert!(apply_dt(&ctx, &p("T0^2*X2")).is_err());
    }

    #[test]
    fn septic_family() {
        let par = monomial_odd(4);
        let ctx = VerySingularContext::new(&par).unwrap();
        let fam = family_f(&ctx).unwrap();
        let expected = [
            "T1^5*X1 - T0^5*X2",
            "T1^3*X1^2 - T0^3*X0*X2",
            "T1*X1^3 - T0*X0^2*X2",
        ];
        assert_eq!(fam.len(), 3);
        for (f, e) in fam.iter().zip(expected) {
            assert!(par.annihilates(f).unwrap());
            assert!(equivalent_modulo(f, &p(e), &[ctx.p.clone()]).unwrap(), "{f} vs {e}");
        }
    }

    #[test]
    fn quintic_assembly() {
        let par = monomial_odd(3);
        let mb = mu_basis(&par).unwrap();
        let eq = implicit_equation(&par, &mb).unwrap().equation;
        let ctx = VerySingularContext::from_basis(&par, &mb).unwrap();
        let gens = assemble_very_singular(&ctx, &eq).unwrap();
        let labels: Vec<_> = gens.iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, ["E", "P", "F[3,1]", "F[1,2]", "F[1,3]"]);
        for g in &gens {
            assert!(par.annihilates(&g.poly).unwrap(), "{}", g.label);
        }
        let earlier: Vec<BiPoly> = gens[..4].iter().map(|g| g.poly.clone()).collect();
        assert!(equivalent_modulo(&gens[4].poly, &p("T0*X1^3 - T1*X0^2*X2"), &earlier).unwrap());
    }

    #[test]
    fn even_sextic_top_pair() {
        // u = (T0^6, T0^4 (T1^2 + T0 T1), T1^4 (T1^2 + T0 T1))
        let par = Parametrization::from_i64(
            Field::Rational,
            [&[1, 0, 0, 0, 0, 0, 0], &[0, 1, 1, 0, 0, 0, 0], &[0, 0, 0, 0, 0, 1, 1]],
        )
        .unwrap();
        let ctx = VerySingularContext::new(&par).unwrap();
        let fam = family_f(&ctx).unwrap();
        assert_eq!(fam.iter().map(BiPoly::bidegree).collect::<Vec<_>>(), [(4, 1), (2, 2)]);
        let (a, b) = top_generators_even(&ctx, &fam).unwrap();
        for g in [&a, &b] {
            assert_eq!(g.bidegree(), (1, 3));
            assert!(ctx.par.annihilates(g).unwrap());
            split_x(g).unwrap();
        }
        assert!(a.ratio(&b).is_none());
    }

    #[test]
    fn mild_curve_rejected() {
        let par = Parametrization::from_syzygies(
            &p("T0^2*X0 + T1^2*X1 + T0*T1*X2"),
            &p("T1^3*X2 + T0^3*X1 + 2*T0^2*T1*X0 - T0*T1^2*X1"),
        )
        .unwrap();
        let err = VerySingularContext::new(&par).unwrap_err();
        assert!(err.is_precondition(), "{err}");
    }
}
