//! End-to-end generator pipeline for `mu = 2` curves and its verification
//! report.

use std::time::Instant;

use crate::bipoly::{resultant_t, BiPoly, XPoly};
use crate::error::{ReesError, Result};
use crate::mu2mild::{assemble_mild, assemble_unchecked, morley_coeffs, morley_det_check, MildContext};
use crate::mu2sing::{assemble_very_singular, VerySingularContext};
use crate::oracle::{certify_generators, default_box, reduce_modulo, MinGenTable};
use crate::syzygy::{
    classify, coefficient_matrix, implicit_equation, mu_basis, MuBasis, Parametrization,
    SingularityKind,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub poly: BiPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSummary {
    pub d: u32,
    pub mu: u32,
    pub properness_degree: u32,
    pub kind: SingularityKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorEntry {
    pub label: String,
    pub poly: BiPoly,
    pub in_kernel: bool,
}

impl GeneratorEntry {
    pub fn bidegree(&self) -> (u32, u32) {
        self.poly.bidegree()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorReport {
    pub summary: CurveSummary,
    pub equation: XPoly,
    pub generators: Vec<GeneratorEntry>,
    pub predicted: Vec<(u32, u32)>,
    pub table: MinGenTable,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub elapsed_ms: u128,
}

impl GeneratorReport {
    pub fn all_pass(&self) -> bool {
        self.generators.iter().all(|g| g.in_kernel) && self.checks.iter().all(|c| c.passed)
    }

    pub fn polys(&self) -> Vec<BiPoly> {
        self.generators.iter().map(|g| g.poly.clone()).collect()
    }
}

/// Generator bidegrees predicted by the structure theorems, sorted.
pub fn predicted_bidegrees(kind: SingularityKind, d: u32) -> Option<Vec<(u32, u32)>> {
    let mut out = vec![(0, d), (2, 1)];
    match kind {
        SingularityKind::VerySingular => {
            let k = (d + 1) / 2;
            // family F_{d-2j, j}, then one or two forms of bidegree (1, k)
            for j in 1..k {
                out.push((d - 2 * j, j));
            }
            out.push((1, k));
            if d % 2 == 0 {
                out.push((1, k));
            }
        }
        SingularityKind::Mild if d >= 5 => {
            out.push((d - 2, 1));
            out.extend([(d - 3, 2); 2]);
            for i in 1..=d - 4 {
                out.extend(std::iter::repeat((i, d - 1 - i)).take((d - 1 - i) as usize));
            }
        }
        _ => return None,
    }
    out.sort();
    Some(out)
}

/// Rewrites each generator as its normal form modulo the ideal spanned by
/// the generators before it, scaled to leading coefficient 1.
pub fn canonicalize(gens: &[Generator]) -> Result<Vec<Generator>> {
    let mut out: Vec<Generator> = Vec::with_capacity(gens.len());
    for g in gens {
        let earlier: Vec<BiPoly> = out.iter().map(|h| h.poly.clone()).collect();
        let r = reduce_modulo(&g.poly, &earlier)?;
        if r.is_zero() {
            return Err(ReesError::Verification(format!(
                "generator {} lies in the ideal of the previous ones",
                g.label
            )));
        }
        out.push(Generator {
            label: g.label.clone(),
            poly: r.normalized(),
        });
    }
    Ok(out)
}

/// The class that picks the construction. At `d = 4` the mu-basis is not
/// unique and `classify` declines; a full-rank coefficient matrix is then
/// sent to the mild construction.
pub fn pipeline_kind(mb: &MuBasis, d: u32) -> Result<(SingularityKind, Option<String>)> {
    let cls = classify(mb, d)?;
    if cls.kind == SingularityKind::NotApplicable
        && mb.mu == 2
        && d == 4
        && coefficient_matrix(&mb.p)?.rank() == 3
    {
        return Ok((SingularityKind::Mild, cls.note));
    }
    Ok((cls.kind, cls.note))
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn resultant_check(name: String, f: &BiPoly, g: &BiPoly, e: &XPoly) -> Result<Check> {
    let r = resultant_t(f, g)?;
    Ok(match r.ratio(e) {
        Some(l) if !l.is_zero() => check(name, true, format!("lambda = {l}")),
        _ => check(name, false, "not a nonzero multiple of E"),
    })
}

/// Runs the full pipeline: mu-basis, implicit equation, classification,
/// generator construction, canonical forms and the oracle certificate over
/// `bbox` (default `(d - 2, d)`).
pub fn generate(par: &Parametrization, bbox: Option<(u32, u32)>) -> Result<GeneratorReport> {
    let start = Instant::now();
    let d = par.degree();
    let mb = mu_basis(par)?;
    if mb.mu != 2 {
        return Err(ReesError::precondition("mu = 2", format!("mu = {}", mb.mu)));
    }
    let imp = implicit_equation(par, &mb)?;
    if !imp.is_proper() {
        return Err(ReesError::precondition(
            "proper parametrization",
            format!("properness degree {}", imp.properness_degree),
        ));
    }
    let e = imp.equation;
    let (kind, note) = pipeline_kind(&mb, d)?;
    let mut warnings = Vec::new();
    let mut checks = Vec::new();
    let raw = match kind {
        SingularityKind::VerySingular => {
            let ctx = VerySingularContext::from_basis(par, &mb)?;
            let gens = assemble_very_singular(&ctx, &e)?;
            let p = &gens[1].poly;
            // the family members sit between P and the top forms
            for g in &gens[2..gens.len() - 1 - (d as usize + 1) % 2] {
                checks.push(resultant_check(format!("Res(P, {}) = lE", g.label), p, &g.poly, &e)?);
            }
            if d % 2 == 0 {
                let n = gens.len();
                checks.push(resultant_check(
                    format!("Res({}, {}) = lE", gens[n - 2].label, gens[n - 1].label),
                    &gens[n - 2].poly,
                    &gens[n - 1].poly,
                    &e,
                )?);
            }
            gens
        }
        SingularityKind::Mild => {
            let ctx = MildContext::from_basis(par, &mb)?;
            if d < 5 {
                warnings.push(format!(
                    "d = {d}: the generator count formula does not apply; the table is reported but not compared"
                ));
                assemble_unchecked(&ctx, &e)?
            } else {
                let mor = morley_coeffs(&ctx)?;
                for i in 1..=d - 4 {
                    let name = format!("|M_{i}| = lE");
                    checks.push(match morley_det_check(&ctx, &mor, i, &e) {
                        Ok((_, l)) => check(name, !l.is_zero(), format!("lambda = {l}")),
                        Err(ReesError::Verification(msg)) => check(name, false, msg),
                        Err(err) => return Err(err),
                    });
                }
                assemble_mild(&ctx, &e)?
            }
        }
        SingularityKind::NotApplicable => {
            return Err(ReesError::precondition(
                "mu = 2 with a known singularity class",
                note.unwrap_or_default(),
            ))
        }
    };
    let gens = canonicalize(&raw)?;
    let polys: Vec<BiPoly> = gens.iter().map(|g| g.poly.clone()).collect();
    let (i_max, j_max) = bbox.unwrap_or_else(|| default_box(d, 2));
    let cert = certify_generators(par, &polys, i_max, j_max)?;
    checks.push(check(
        "minimal generating set in box",
        cert.passed(),
        cert.failures.join("; "),
    ));
    if !cert.outside_box.is_empty() {
        warnings.push(format!("generators outside the box: {:?}", cert.outside_box));
    }
    let predicted = predicted_bidegrees(kind, d).unwrap_or_default();
    if !predicted.is_empty() {
        let mut ours: Vec<(u32, u32)> = polys.iter().map(|g| g.bidegree()).collect();
        ours.sort();
        checks.push(check(
            "bidegrees match the structure theorem",
            ours == predicted && cert.table.bidegrees() == predicted,
            format!("table {:?}", cert.table.bidegrees()),
        ));
    }
    let generators = gens
        .into_iter()
        .map(|g| {
            Ok(GeneratorEntry {
                in_kernel: par.annihilates(&g.poly)?,
                label: g.label,
                poly: g.poly,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GeneratorReport {
        summary: CurveSummary {
            d,
            mu: mb.mu,
            properness_degree: imp.properness_degree,
            kind,
        },
        equation: e,
        generators,
        predicted,
        table: cert.table,
        checks,
        warnings,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Re-checks a saved generator list against a curve: kernel membership and
/// the oracle certificate.
pub fn verify_generators(
    par: &Parametrization,
    gens: &[BiPoly],
    bbox: Option<(u32, u32)>,
) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (n, g) in gens.iter().enumerate() {
        checks.push(check(format!("generator #{n} in K"), par.annihilates(g)?, ""));
    }
    let (i_max, j_max) = bbox.unwrap_or_else(|| default_box(par.degree(), 2));
    let cert = certify_generators(par, gens, i_max, j_max)?;
    checks.push(check(
        "minimal generating set in box",
        cert.passed(),
        cert.failures.join("; "),
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Field;
    use crate::mu2mild::mild_generator_count;

    #[test]
    fn quintic_monomial_report() {
        let par = Parametrization::from_i64(
            Field::Rational,
            [&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 0, 0, 1]],
        )
        .unwrap();
        let rep = generate(&par, None).unwrap();
        assert_eq!(rep.generators.len(), 5);
        assert!(rep.all_pass(), "{:?}", rep.checks);
        let texts: Vec<String> = rep.generators.iter().map(|g| g.poly.to_string()).collect();
        assert_eq!(
            texts,
            [
                "X0^3*X2^2 - X1^5",
                "T0^2*X1 - T1^2*X0",
                "T0^3*X2 - T1^3*X1",
                "T0*X0*X2 - T1*X1^2",
                "T0*X1^3 - T1*X0^2*X2",
            ]
        );
    }

    #[test]
    fn prediction_sizes() {
        for d in 5..=12 {
            let m = predicted_bidegrees(SingularityKind::Mild, d).unwrap();
            assert_eq!(m.len() as u32, mild_generator_count(d));
            let v = predicted_bidegrees(SingularityKind::VerySingular, d).unwrap();
            let k = (d + 1) / 2;
            assert_eq!(v.len() as u32, if d % 2 == 1 { k + 2 } else { k + 3 });
        }
        assert!(predicted_bidegrees(SingularityKind::Mild, 4).is_none());
    }

    #[test]
    fn improper_rejected() {
        // (s^2 : s t : t^2) composed with a squaring map
        let par = Parametrization::from_i64(
            Field::Rational,
            [&[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 0, 1]],
        )
        .unwrap();
        match generate(&par, None) {
            Err(ReesError::Precondition { .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
