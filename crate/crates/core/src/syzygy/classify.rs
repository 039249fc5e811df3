use crate::bipoly::{BiPoly, TPoly};
use crate::error::{ReesError, Result};
use crate::exactmath::ExactMatrix;

use super::mubasis::MuBasis;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityKind {
    /// The X-coefficient matrix of `P` has rank at most 2.
    VerySingular,
    /// `mu = 2` and the coefficient matrix is invertible.
    Mild,
    NotApplicable,
}

impl SingularityKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SingularityKind::VerySingular => "very-singular",
            SingularityKind::Mild => "mild",
            SingularityKind::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: SingularityKind,
    /// For very singular curves: `M` with `det M = 1` such that in the
    /// coordinates `X = M X'` the syzygy reads `P' = p1 X0' - p0 X1'`.
    pub change: Option<ExactMatrix>,
    /// `(p0, p1)`, coprime forms of degree `mu`.
    pub axial: Option<(TPoly, TPoly)>,
    pub note: Option<String>,
}

/// The `3 x (mu + 1)` matrix of coefficients of `P`: row `k` lists the
/// coefficients of `X_k` on `T0^mu, T0^(mu-1) T1, ..., T1^mu`.
pub fn coefficient_matrix(p: &BiPoly) -> Result<ExactMatrix> {
    let lin = p.linear_coeffs()?;
    let mu = p.t_degree() as usize;
    let mut m = ExactMatrix::zeros(p.field(), 3, mu + 1);
    for (k, f) in lin.iter().enumerate() {
        for a in 0..=mu {
            m.set(k, a, f.coeff(a).clone());
        }
    }
    Ok(m)
}

pub fn classify(mb: &MuBasis, d: u32) -> Result<Classification> {
    let mu = mb.mu;
    if mu == 0 {
        return Err(ReesError::precondition("mu >= 1", "constant syzygy"));
    }
    let cm = coefficient_matrix(&mb.p)?;
    let rank = cm.rank();
    let not_applicable = |note: String| Classification {
        kind: SingularityKind::NotApplicable,
        change: None,
        axial: None,
        note: Some(note),
    };
    if 2 * mu == d {
        let mut note = "2 mu = d: the mu-basis is not unique".to_string();
        if rank <= 2 {
            note.push_str("; the rank test passes but is not conclusive here");
        }
        return Ok(not_applicable(note));
    }
    if mu == 1 {
        return Ok(not_applicable("mu = 1".into()));
    }
    if rank == 3 {
        if mu == 2 {
            return Ok(Classification {
                kind: SingularityKind::Mild,
                change: None,
                axial: None,
                note: None,
            });
        }
        return Ok(not_applicable(format!(
            "coefficient matrix of full rank with mu = {mu}"
        )));
    }
    let field = mb.p.field();
    let n = cm.transpose().nullspace().into_iter().next().ok_or_else(|| {
        ReesError::Verification("rank-deficient matrix without a null vector".into())
    })?;
    let piv = n.iter().position(|x| !x.is_zero()).unwrap();
    let others: Vec<usize> = (0..3).filter(|&k| k != piv).collect();
    let mut change = ExactMatrix::zeros(field, 3, 3);
    for k in 0..3 {
        change.set(k, 2, n[k].clone());
    }
    change.set(others[0], 0, field.one());
    change.set(others[1], 1, field.one());
    if change.det()? != field.one() {
        change.set(others[0], 0, field.from_i64(-1));
    }
    debug_assert_eq!(change.det()?, field.one());
    let moved = mb.p.change_x(&change)?;
    let [p1, neg_p0, rest] = moved.linear_coeffs()?;
    if !rest.is_zero() {
        return Err(ReesError::Verification("X2' coefficient survives".into()));
    }
    let p0 = neg_p0.neg();
    let g = p0.gcd(&p1)?;
    if g.degree() > 0 || g.is_zero() {
        return Err(ReesError::precondition(
            "gcd(p0, p1) = 1",
            format!("axial coefficients share the factor {g}"),
        ));
    }
    Ok(Classification {
        kind: SingularityKind::VerySingular,
        change: Some(change),
        axial: Some((p0, p1)),
        note: None,
    })
}
