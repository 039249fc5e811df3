//! Random `mu = 2` curves, built from a random mu-basis and filtered by
//! rejection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bipoly::{monomials, BiPoly, Monomial, TPoly};
use crate::error::{ReesError, Result};
use crate::exactmath::{ExactMatrix, Field, Scalar};
use crate::report::pipeline_kind;
use crate::syzygy::{implicit_equation, mu_basis, Parametrization, SingularityKind};

const MAX_ATTEMPTS: usize = 200;

fn random_scalar<R: Rng>(field: Field, rng: &mut R) -> Scalar {
    match field.modulus() {
        Some(p) => field.from_i64(rng.gen_range(0..p) as i64),
        None => field.from_i64(rng.gen_range(-9..=9)),
    }
}

fn random_form<R: Rng>(field: Field, (i, j): (u32, u32), rng: &mut R) -> Result<BiPoly> {
    let terms = monomials(i, j)
        .into_iter()
        .map(|m| (m, random_scalar(field, rng)))
        .collect::<Vec<_>>();
    BiPoly::from_terms(field, (i, j), terms)
}

fn random_tpoly<R: Rng>(field: Field, deg: u32, rng: &mut R) -> Result<TPoly> {
    TPoly::new(field, (0..=deg).map(|_| random_scalar(field, rng)).collect())
}

fn random_invertible<R: Rng>(field: Field, rng: &mut R) -> Result<ExactMatrix> {
    loop {
        let data = (0..9).map(|_| random_scalar(field, rng)).collect();
        let m = ExactMatrix::new(field, 3, 3, data)?;
        if m.rank() == 3 {
            return Ok(m);
        }
    }
}

/// Accepts a candidate if it is a proper `mu = 2` curve of the wanted class.
fn accept(par: Parametrization, kind: SingularityKind) -> Result<Option<Parametrization>> {
    let mb = mu_basis(&par)?;
    if mb.mu != 2 {
        return Ok(None);
    }
    let d = par.degree();
    let proper = match implicit_equation(&par, &mb) {
        Ok(imp) => imp.is_proper(),
        Err(ReesError::Verification(_)) => false,
        Err(e) => return Err(e),
    };
    if !proper {
        return Ok(None);
    }
    let found = match pipeline_kind(&mb, d) {
        Ok((k, _)) => k,
        Err(e) if e.is_precondition() => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok((found == kind).then_some(par))
}

fn retry<R: Rng>(
    rng: &mut R,
    mut candidate: impl FnMut(&mut R) -> Result<Parametrization>,
    kind: SingularityKind,
) -> Result<Parametrization> {
    for _ in 0..MAX_ATTEMPTS {
        match candidate(rng) {
            Ok(par) => {
                if let Some(par) = accept(par, kind)? {
                    return Ok(par);
                }
            }
            Err(e) if e.is_precondition() => {}
            Err(e) => return Err(e),
        }
    }
    Err(ReesError::Verification(format!(
        "no {} sample found in {MAX_ATTEMPTS} attempts",
        kind.as_str()
    )))
}

/// A proper curve of degree `d` with `mu = 2` and a very singular point at a
/// random position: `P = p1 X0 - p0 X1` and a random `Q`, moved by a random
/// change of coordinates.
pub fn sample_very_singular<R: Rng>(d: u32, field: Field, rng: &mut R) -> Result<Parametrization> {
    if d < 5 {
        return Err(ReesError::precondition("d >= 5", format!("d = {d}")));
    }
    retry(
        rng,
        |rng| {
            let p0 = random_tpoly(field, 2, rng)?.to_bipoly();
            let p1 = random_tpoly(field, 2, rng)?.to_bipoly();
            let p = p1
                .mul_monomial(&Monomial::x_var(0))
                .sub(&p0.mul_monomial(&Monomial::x_var(1)))?;
            let q = random_form(field, (d - 2, 1), rng)?;
            Parametrization::from_syzygies(&p, &q)?.transform(&random_invertible(field, rng)?)
        },
        SingularityKind::VerySingular,
    )
}

/// A proper curve of degree `d` with `mu = 2` and no very singular point.
pub fn sample_mild<R: Rng>(d: u32, field: Field, rng: &mut R) -> Result<Parametrization> {
    if d < 4 {
        return Err(ReesError::precondition("d >= 4", format!("d = {d}")));
    }
    retry(
        rng,
        |rng| {
            let p = random_form(field, (2, 1), rng)?;
            let q = random_form(field, (d - 2, 1), rng)?;
            Parametrization::from_syzygies(&p, &q)
        },
        SingularityKind::Mild,
    )
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_have_the_requested_class() {
        let mut rng = seeded_rng(7);
        for d in 5..=8 {
            let f = Field::default_prime();
            let v = sample_very_singular(d, f, &mut rng).unwrap();
            assert_eq!(v.degree(), d);
            let m = sample_mild(d, f, &mut rng).unwrap();
            assert_eq!(m.degree(), d);
        }
        let q = sample_mild(5, Field::Rational, &mut rng).unwrap();
        assert_eq!(q.field(), Field::Rational);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let f = Field::default_prime();
        let a = sample_mild(6, f, &mut seeded_rng(3)).unwrap();
        let b = sample_mild(6, f, &mut seeded_rng(3)).unwrap();
        assert_eq!(a, b);
    }
}
