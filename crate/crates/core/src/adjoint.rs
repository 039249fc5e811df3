//! Dimensions of `K_{1,l}` and of `Z_l = <X0, X1>^(d-3) ∩ K_{1,l}` for
//! `mu = 2` curves with a very singular point.

use crate::bipoly::BiPoly;
use crate::error::{ReesError, Result};
use crate::exactmath::{elim, FieldOps};
use crate::mu2sing::VerySingularContext;
use crate::oracle::kernel_basis;
use crate::with_field_ops;

fn binom2(a: i64) -> usize {
    if a < 2 {
        0
    } else {
        (a * (a - 1) / 2) as usize
    }
}

fn k_of(d: u32) -> i64 {
    i64::from(d).div_euclid(2) + i64::from(d % 2)
}

/// Closed form for `dim K_{1,l}`.
pub fn k1_dimension_formula(d: u32, l: u32) -> usize {
    let (k, l) = (k_of(d), i64::from(l));
    if d % 2 == 1 {
        binom2(l - k + 3) + binom2(l - k + 2)
    } else {
        2 * binom2(l - k + 2)
    }
}

/// Upper bound for the adjoint pencils inside `K_{1,l}`; it is also the
/// dimension of `Z_l` predicted from the generators.
pub fn ttt_bound(d: u32, l: u32) -> usize {
    let (k, l) = (k_of(d), i64::from(l));
    let (start, shift) = if d % 2 == 1 { (2 * k - 3, 2 * k - 4) } else { (2 * k - 2, 2 * k - 3) };
    if l < start {
        0
    } else {
        (l * (l - shift)) as usize
    }
}

/// Largest `n` with `g` in `<X0, X1>^n`; `None` for `g = 0`.
pub fn power_order(g: &BiPoly) -> Option<u32> {
    g.terms().map(|(m, _)| m.0[2] + m.0[3]).min()
}

/// `dim Z_l`, in the coordinates where the very singular point is
/// `(0 : 0 : 1)`.
pub fn z_dimension(ctx: &VerySingularContext, l: u32) -> Result<usize> {
    let d = ctx.d;
    if d < 3 {
        return Err(ReesError::precondition("d >= 3", format!("d = {d}")));
    }
    let basis = kernel_basis(&ctx.par, 1, l)?.basis;
    if basis.is_empty() {
        return Ok(0);
    }
    let field = ctx.par.field();
    // coordinates on the monomials outside the power ideal
    let outside: Vec<usize> = crate::bipoly::monomials(1, l)
        .iter()
        .enumerate()
        .filter(|(_, m)| m.0[2] + m.0[3] < d - 3)
        .map(|(n, _)| n)
        .collect();
    let rank = with_field_ops!(field, ops => {
        let mut rows = Vec::with_capacity(basis.len());
        for g in &basis {
            let dense = ops.import_all(&g.to_dense())?;
            rows.push(outside.iter().map(|&n| dense[n].clone()).collect::<Vec<_>>());
        }
        elim::rank(&ops, rows, outside.len())
    });
    Ok(basis.len() - rank)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointRow {
    pub l: u32,
    pub k1_formula: usize,
    pub k1_oracle: usize,
    pub z_dim: usize,
    pub bound: usize,
}

impl AdjointRow {
    pub fn formula_matches(&self) -> bool {
        self.k1_formula == self.k1_oracle
    }

    pub fn bound_attained(&self) -> bool {
        self.z_dim == self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointReport {
    pub d: u32,
    pub rows: Vec<AdjointRow>,
}

pub fn adjoint_report(ctx: &VerySingularContext, ls: impl IntoIterator<Item = u32>) -> Result<AdjointReport> {
    let mut rows = Vec::new();
    for l in ls {
        rows.push(AdjointRow {
            l,
            k1_formula: k1_dimension_formula(ctx.d, l),
            k1_oracle: crate::oracle::kernel_dim(&ctx.par, 1, l)?,
            z_dim: z_dimension(ctx, l)?,
            bound: ttt_bound(ctx.d, l),
        });
    }
    Ok(AdjointReport { d: ctx.d, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Field;
    use crate::mu2sing::family_f;
    use crate::syzygy::Parametrization;

    #[test]
    fn closed_forms() {
        assert_eq!(k1_dimension_formula(5, 2), 1);
        assert_eq!(k1_dimension_formula(5, 3), 4);
        assert_eq!(k1_dimension_formula(6, 3), 2);
        assert_eq!(k1_dimension_formula(6, 2), 0);
        assert_eq!(ttt_bound(5, 2), 0);
        assert_eq!(ttt_bound(5, 3), 3);
        assert_eq!(ttt_bound(6, 3), 0);
        assert_eq!(ttt_bound(6, 4), 4);
    }

    #[test]
    fn quotient_stabilises() {
        // dim K_{1,l} - bound = (k-2)^2 or (k-1)(k-2) for l >= d - 2
        for d in 5..12u32 {
            let k = k_of(d) as usize;
            let expected = if d % 2 == 1 { (k - 2) * (k - 2) } else { (k - 1) * (k - 2) };
            for l in d - 2..d + 3 {
                assert_eq!(k1_dimension_formula(d, l) - ttt_bound(d, l), expected, "d={d} l={l}");
            }
        }
    }

    #[test]
    fn quintic_monomial_curve() {
        let par = Parametrization::from_i64(
            Field::Rational,
            [&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 0, 0, 1]],
        )
        .unwrap();
        let ctx = VerySingularContext::new(&par).unwrap();
        let rep = adjoint_report(&ctx, 0..=7).unwrap();
        for row in &rep.rows {
            assert!(row.formula_matches(), "{row:?}");
        }
        assert_eq!(rep.rows[2].z_dim, 0);
        let fam = family_f(&ctx).unwrap();
        assert_eq!(power_order(fam.last().unwrap()), Some(1));
    }
}
