//! Brute-force linear algebra on graded pieces of the kernel `K` of
//! `X_k -> u_k(T) Z`.
//!
//! `K_{i,j}` is the nullspace of the matrix sending the monomials of
//! bidegree `(i, j)` to their images `T^a u^b`. The number of minimal
//! generators in bidegree `(i, j)` is `dim K_{i,j}` minus the rank of
//! `T0 K_{i-1,j} + T1 K_{i-1,j} + X0 K_{i,j-1} + X1 K_{i,j-1} + X2 K_{i,j-1}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::bipoly::{bidegree_count, monomials, x_count, x_monomials, BiPoly, Monomial};
use crate::error::{ReesError, Result};
use num_rational::BigRational;

use crate::exactmath::elim;
use crate::exactmath::{
    is_prime_u64, Echelon, Field, FieldOps, PrimeOps, RationalOps, DEFAULT_PRIME,
};
use crate::syzygy::Parametrization;
use crate::with_field_ops;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub bidegree: (u32, u32),
    pub basis: Vec<BiPoly>,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Minimal generator counts over the box `i <= i_max, j <= j_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinGenTable {
    pub i_max: u32,
    pub j_max: u32,
    /// Nonzero counts only.
    pub counts: BTreeMap<(u32, u32), usize>,
    /// `dim K_{i,j}` for every cell of the box.
    pub dims: BTreeMap<(u32, u32), usize>,
}

impl MinGenTable {
    pub fn count(&self, i: u32, j: u32) -> usize {
        self.counts.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Sorted multiset of generator bidegrees.
    pub fn bidegrees(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (&b, &n) in &self.counts {
            out.extend(std::iter::repeat_n(b, n));
        }
        out
    }

    /// Nonzero cells on the outer edge of the box other than `allowed`;
    /// generators there may continue beyond the box.
    pub fn boundary_cells(&self, allowed: &[(u32, u32)]) -> Vec<(u32, u32)> {
        self.counts
            .keys()
            .filter(|&&(i, j)| (i == self.i_max || j == self.j_max) && !allowed.contains(&(i, j)))
            .copied()
            .collect()
    }
}

impl fmt::Display for MinGenTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "  j\\i")?;
        for i in 0..=self.i_max {
            write!(f, "{i:>4}")?;
        }
        writeln!(f)?;
        for j in 0..=self.j_max {
            write!(f, "{j:>5}")?;
            for i in 0..=self.i_max {
                match self.count(i, j) {
                    0 => write!(f, "   .")?,
                    n => write!(f, "{n:>4}")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Result of checking a proposed generating set cell by cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub table: MinGenTable,
    pub failures: Vec<String>,
    /// Generators whose bidegree lies outside the box.
    pub outside_box: Vec<(u32, u32)>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The box used when the caller does not choose one.
pub fn default_box(d: u32, mu: u32) -> (u32, u32) {
    (d.saturating_sub(mu), d)
}

struct Engine<F: FieldOps> {
    ops: F,
    d: u32,
    u: [Vec<F::Elem>; 3],
    /// `upow[j][k]` is the coefficient vector of `u^b` for the k-th
    /// X-monomial `b` of degree `j`.
    upow: Vec<Vec<Vec<F::Elem>>>,
}

impl<F: FieldOps> Engine<F> {
    fn new(ops: F, par: &Parametrization) -> Result<Self> {
        let u = [
            ops.import_all(par.components()[0].coeffs())?,
            ops.import_all(par.components()[1].coeffs())?,
            ops.import_all(par.components()[2].coeffs())?,
        ];
        Ok(Self::from_coeffs(ops, u, par.degree()))
    }

    fn from_coeffs(ops: F, u: [Vec<F::Elem>; 3], d: u32) -> Self {
        Engine {
            upow: vec![vec![vec![ops.one()]]],
            ops,
            d,
            u,
        }
    }

    fn poly_mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![self.ops.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.ops.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !self.ops.is_zero(y) {
                    out[i + j] = self.ops.add(&out[i + j], &self.ops.mul(x, y));
                }
            }
        }
        out
    }

    fn ensure_powers(&mut self, j: u32) {
        while self.upow.len() <= j as usize {
            let jj = self.upow.len() as u32;
            let prev = &self.upow[jj as usize - 1];
            let mut level = Vec::with_capacity(x_count(jj));
            for m in x_monomials(jj) {
                let b = m.x_part();
                let k = (0..3).find(|&k| b[k] > 0).unwrap();
                let mut e = b;
                e[k] -= 1;
                let lower = Monomial::x(e[0], e[1], e[2]).index();
                level.push(self.poly_mul(&prev[lower], &self.u[k]));
            }
            self.upow.push(level);
        }
    }

    fn eval_rows(&mut self, i: u32, j: u32) -> Vec<Vec<F::Elem>> {
        self.ensure_powers(j);
        let nx = x_count(j);
        let ncols = bidegree_count(i, j);
        let nrows = (i + j * self.d) as usize + 1;
        let mut rows = vec![vec![self.ops.zero(); ncols]; nrows];
        for a0 in (0..=i).rev() {
            let a1 = (i - a0) as usize;
            let block = (i - a0) as usize * nx;
            for (xi, pw) in self.upow[j as usize].iter().enumerate() {
                for (c, v) in pw.iter().enumerate() {
                    if !self.ops.is_zero(v) {
                        rows[a1 + c][block + xi] = v.clone();
                    }
                }
            }
        }
        rows
    }

    fn kernel(&mut self, i: u32, j: u32) -> Vec<Vec<F::Elem>> {
        let rows = self.eval_rows(i, j);
        self.ops.nullspace(rows, bidegree_count(i, j))
    }
}

/// Index map for multiplication by the monomial `v` from bidegree `src`.
fn shift_map(src: (u32, u32), v: &Monomial) -> Vec<usize> {
    monomials(src.0, src.1)
        .iter()
        .map(|m| m.mul(v).index())
        .collect()
}

fn shifted<E: Clone>(zero: &E, v: &[E], map: &[usize], len: usize) -> Vec<E> {
    let mut out = vec![zero.clone(); len];
    for (x, &k) in v.iter().zip(map) {
        out[k] = x.clone();
    }
    out
}

const T_VARS: [Monomial; 2] = [Monomial([1, 0, 0, 0, 0]), Monomial([0, 1, 0, 0, 0])];
const X_VARS: [Monomial; 3] = [
    Monomial([0, 0, 1, 0, 0]),
    Monomial([0, 0, 0, 1, 0]),
    Monomial([0, 0, 0, 0, 1]),
];

pub fn kernel_basis(par: &Parametrization, i: u32, j: u32) -> Result<GradedPiece> {
    let field = par.field();
    let basis = with_field_ops!(field, ops => {
        let mut eng = Engine::new(ops.clone(), par)?;
        eng.kernel(i, j)
            .iter()
            .map(|v| BiPoly::from_dense(field, (i, j), &ops.export_all(v)))
            .collect::<Result<Vec<_>>>()?
    });
    Ok(GradedPiece {
        bidegree: (i, j),
        basis,
    })
}

pub fn kernel_dim(par: &Parametrization, i: u32, j: u32) -> Result<usize> {
    Ok(with_field_ops!(par.field(), ops => {
        let mut eng = Engine::new(ops.clone(), par)?;
        let rows = eng.eval_rows(i, j);
        bidegree_count(i, j) - elim::rank(&ops, rows, bidegree_count(i, j))
    }))
}

pub fn mingen_table(par: &Parametrization, i_max: u32, j_max: u32) -> Result<MinGenTable> {
    Ok(analyze(par, &[], i_max, j_max)?.table)
}

/// Computes the table and checks that `gens` is a minimal generating set of
/// `K` in every cell of the box: each generator lies in `K`, and in each cell
/// the generators of that bidegree are independent modulo the part generated
/// from lower cells and fill up `K_{i,j}`.
pub fn certify_generators(
    par: &Parametrization,
    gens: &[BiPoly],
    i_max: u32,
    j_max: u32,
) -> Result<Certificate> {
    analyze(par, gens, i_max, j_max)
}

type Counts = BTreeMap<(u32, u32), usize>;

fn analyze(par: &Parametrization, gens: &[BiPoly], i_max: u32, j_max: u32) -> Result<Certificate> {
    let field = par.field();
    let mut failures = Vec::new();
    let mut outside_box = Vec::new();
    let mut by_cell: BTreeMap<(u32, u32), Vec<&BiPoly>> = BTreeMap::new();
    for (n, g) in gens.iter().enumerate() {
        if g.field() != field {
            return Err(ReesError::BackendMismatch("generator field".into()));
        }
        if g.is_zero() {
            failures.push(format!("generator #{n} is zero"));
            continue;
        }
        if !par.annihilates(g)? {
            failures.push(format!("generator #{n} of bidegree {:?} is not in K", g.bidegree()));
        }
        let (i, j) = g.bidegree();
        if i > i_max || j > j_max {
            outside_box.push((i, j));
        } else {
            by_cell.entry((i, j)).or_default().push(g);
        }
    }
    let (counts, dims) = match field {
        Field::Prime(p) => {
            let ops = PrimeOps::new(p);
            let mut eng = Engine::new(ops, par)?;
            sweep(&mut eng, &by_cell, i_max, j_max, &mut failures)?
        }
        Field::Rational => rational_tables(par, &by_cell, i_max, j_max, &mut failures)?,
    };
    Ok(Certificate {
        table: MinGenTable {
            i_max,
            j_max,
            counts,
            dims,
        },
        failures,
        outside_box,
    })
}

/// Inserts `T K_{i-1,j} + X K_{i,j-1}` into `span`, stopping once it
/// reaches `dim`.
fn fill_lower<E: Clone, F: FieldOps<Elem = E>>(
    span: &mut Echelon<F>,
    zero: &E,
    (i, j): (u32, u32),
    dim: usize,
    x_lower: Option<&[Vec<E>]>,
    t_lower: Option<&[Vec<E>]>,
) {
    let len = bidegree_count(i, j);
    if let Some(ws) = x_lower {
        for v in X_VARS {
            let map = shift_map((i, j - 1), &v);
            for w in ws {
                if span.rank() == dim {
                    return;
                }
                span.insert(shifted(zero, w, &map, len));
            }
        }
    }
    if let Some(ws) = t_lower {
        for v in T_VARS {
            let map = shift_map((i - 1, j), &v);
            for w in ws {
                if span.rank() == dim {
                    return;
                }
                span.insert(shifted(zero, w, &map, len));
            }
        }
    }
}

/// Adds the proposed generators of one cell to the span of the lower part
/// and records what goes wrong.
fn check_cell<F: FieldOps>(
    ops: &F,
    span: &mut Echelon<F>,
    (i, j): (u32, u32),
    dim: usize,
    count: usize,
    cell_gens: &[&BiPoly],
    failures: &mut Vec<String>,
) -> Result<()> {
    if cell_gens.len() != count {
        failures.push(format!(
            "bidegree ({i},{j}): {} generators proposed, {count} needed",
            cell_gens.len()
        ));
        return Ok(());
    }
    for g in cell_gens {
        if !span.insert(ops.import_all(&g.to_dense())?) {
            failures.push(format!(
                "bidegree ({i},{j}): generator is redundant modulo lower degrees"
            ));
        }
    }
    if count > 0 && span.rank() != dim {
        failures.push(format!("bidegree ({i},{j}): K is not filled"));
    }
    Ok(())
}

/// Column-by-column pass over the whole box in the engine's field.
fn sweep<F: FieldOps>(
    eng: &mut Engine<F>,
    by_cell: &BTreeMap<(u32, u32), Vec<&BiPoly>>,
    i_max: u32,
    j_max: u32,
    failures: &mut Vec<String>,
) -> Result<(Counts, Counts)> {
    let ops = eng.ops.clone();
    let zero = ops.zero();
    let mut counts = BTreeMap::new();
    let mut dims = BTreeMap::new();
    // kernels of the previous column (i - 1) and of the current one
    let mut prev_col: Vec<Vec<Vec<F::Elem>>> = Vec::new();
    for i in 0..=i_max {
        let mut col: Vec<Vec<Vec<F::Elem>>> = Vec::with_capacity(j_max as usize + 1);
        for j in 0..=j_max {
            let kern = eng.kernel(i, j);
            let dim = kern.len();
            dims.insert((i, j), dim);
            let mut span = Echelon::new(ops.clone(), bidegree_count(i, j));
            if dim > 0 {
                let x_lower = (j > 0).then(|| &col[j as usize - 1][..]);
                let t_lower = (i > 0).then(|| &prev_col[j as usize][..]);
                fill_lower(&mut span, &zero, (i, j), dim, x_lower, t_lower);
            }
            let count = dim - span.rank();
            if count > 0 {
                counts.insert((i, j), count);
            }
            let cell_gens = by_cell.get(&(i, j)).map_or(&[][..], |v| &v[..]);
            check_cell(&ops, &mut span, (i, j), dim, count, cell_gens, failures)?;
            col.push(kern);
        }
        prev_col = col;
    }
    Ok((counts, dims))
}

/// Primes tried for the modular pass over the rationals.
fn modular_primes() -> impl Iterator<Item = u64> {
    (1u64..)
        .map(|k| DEFAULT_PRIME - 2 * (k - 1))
        .filter(|&p| is_prime_u64(p))
        .take(3)
}

/// Tables over the rationals.
///
/// The box is first swept modulo a prime `p`. Reduction can only lower
/// ranks, so whenever the modular count of a cell is 0 and the neighbouring
/// cells have the same kernel dimension over both fields,
/// `dim K >= rank W >= rank W_p = dim K_p >= dim K` and the rational count
/// is 0 as well, with `dim K = dim K_p`. The remaining cells are recomputed
/// exactly, which also confirms their dimensions. If some dimension differs
/// the next prime is tried, and finally the whole box is swept exactly.
fn rational_tables(
    par: &Parametrization,
    by_cell: &BTreeMap<(u32, u32), Vec<&BiPoly>>,
    i_max: u32,
    j_max: u32,
    failures: &mut Vec<String>,
) -> Result<(Counts, Counts)> {
    let d = par.degree();
    'primes: for p in modular_primes() {
        let fp = Field::Prime(p);
        let ops = PrimeOps::new(p);
        let mut u = Vec::new();
        for f in par.components() {
            let mut v = Vec::new();
            for c in f.coeffs() {
                let Some(r) = c.as_rational() else {
                    return Err(ReesError::BackendMismatch("expected rational".into()));
                };
                match fp.from_rational(r) {
                    Ok(x) => v.push(ops.import(&x)?),
                    Err(_) => continue 'primes,
                }
            }
            u.push(v);
        }
        let u: [Vec<u64>; 3] = u.try_into().unwrap();
        let mut modular = Engine::from_coeffs(ops, u, d);
        let mut ignored = Vec::new();
        let (counts_p, dims) = sweep(&mut modular, &BTreeMap::new(), i_max, j_max, &mut ignored)?;

        let rops = RationalOps;
        let mut exact = Engine::new(rops.clone(), par)?;
        let mut cache: BTreeMap<(u32, u32), Vec<Vec<BigRational>>> = BTreeMap::new();
        let mut kernel = |cell: (u32, u32)| -> Option<Vec<Vec<BigRational>>> {
            if !cache.contains_key(&cell) {
                let k = exact.kernel(cell.0, cell.1);
                cache.insert(cell, k);
            }
            let k = &cache[&cell];
            (k.len() == dims[&cell]).then(|| k.clone())
        };
        let zero = rops.zero();
        let mut counts = BTreeMap::new();
        let mut cell_failures = Vec::new();
        for &(i, j) in counts_p.keys() {
            let Some(kern) = kernel((i, j)) else {
                continue 'primes;
            };
            let x_lower = if j > 0 {
                match kernel((i, j - 1)) {
                    Some(k) => Some(k),
                    None => continue 'primes,
                }
            } else {
                None
            };
            let t_lower = if i > 0 {
                match kernel((i - 1, j)) {
                    Some(k) => Some(k),
                    None => continue 'primes,
                }
            } else {
                None
            };
            let dim = kern.len();
            let mut span = Echelon::new(rops.clone(), bidegree_count(i, j));
            fill_lower(&mut span, &zero, (i, j), dim, x_lower.as_deref(), t_lower.as_deref());
            let count = dim - span.rank();
            if count > 0 {
                counts.insert((i, j), count);
            }
            let cell_gens = by_cell.get(&(i, j)).map_or(&[][..], |v| &v[..]);
            check_cell(&rops, &mut span, (i, j), dim, count, cell_gens, &mut cell_failures)?;
        }
        for (&(i, j), cell_gens) in by_cell {
            if !counts_p.contains_key(&(i, j)) {
                cell_failures.push(format!(
                    "bidegree ({i},{j}): {} generators proposed, 0 needed",
                    cell_gens.len()
                ));
            }
        }
        failures.extend(cell_failures);
        return Ok((counts, dims));
    }
    let mut eng = Engine::new(RationalOps, par)?;
    sweep(&mut eng, by_cell, i_max, j_max, failures)
}

/// Echelon of the bidegree-`(i, j)` piece of the ideal generated by `gens`.
fn ideal_piece<F: FieldOps>(ops: &F, (i, j): (u32, u32), gens: &[BiPoly]) -> Result<Echelon<F>> {
    let len = bidegree_count(i, j);
    let mut span = Echelon::new(ops.clone(), len);
    for h in gens {
        let (a, b) = h.bidegree();
        if a > i || b > j || h.is_zero() {
            continue;
        }
        for m in monomials(i - a, j - b) {
            span.insert(ops.import_all(&h.mul_monomial(&m).to_dense())?);
            if span.rank() == len {
                return Ok(span);
            }
        }
    }
    Ok(span)
}

fn check_fields(g: &BiPoly, gens: &[BiPoly]) -> Result<()> {
    if gens.iter().any(|h| h.field() != g.field()) {
        return Err(ReesError::BackendMismatch("ideal generators".into()));
    }
    Ok(())
}

/// Whether `g` lies in the degree piece of the ideal generated by `gens`.
pub fn ideal_piece_membership(g: &BiPoly, gens: &[BiPoly]) -> Result<bool> {
    check_fields(g, gens)?;
    Ok(with_field_ops!(g.field(), ops => {
        let span = ideal_piece(&ops, g.bidegree(), gens)?;
        span.contains(&ops.import_all(&g.to_dense())?)
    }))
}

/// Normal form of `g` modulo the degree piece of the ideal generated by
/// `gens`: the unique representative vanishing on the pivot monomials.
pub fn reduce_modulo(g: &BiPoly, gens: &[BiPoly]) -> Result<BiPoly> {
    check_fields(g, gens)?;
    let field = g.field();
    with_field_ops!(field, ops => {
        let span = ideal_piece(&ops, g.bidegree(), gens)?;
        let mut v = ops.import_all(&g.to_dense())?;
        span.reduce(&mut v);
        BiPoly::from_dense(field, g.bidegree(), &ops.export_all(&v))
    })
}

/// Whether forms of one bidegree are linearly independent modulo the ideal
/// generated by `modulo`.
pub fn independent_modulo(forms: &[BiPoly], modulo: &[BiPoly]) -> Result<bool> {
    let Some(first) = forms.first() else {
        return Ok(true);
    };
    check_fields(first, modulo)?;
    check_fields(first, forms)?;
    if forms.iter().any(|f| f.bidegree() != first.bidegree()) {
        return Err(ReesError::BidegreeMismatch {
            expected: first.bidegree(),
            found: forms.iter().map(BiPoly::bidegree).find(|b| *b != first.bidegree()).unwrap(),
        });
    }
    Ok(with_field_ops!(first.field(), ops => {
        let mut span = ideal_piece(&ops, first.bidegree(), modulo)?;
        let mut ok = true;
        for f in forms {
            ok &= span.insert(ops.import_all(&f.to_dense())?);
        }
        ok
    }))
}

/// Whether `a = l b` modulo the ideal generated by `gens`, for some `l != 0`.
pub fn equivalent_modulo(a: &BiPoly, b: &BiPoly, gens: &[BiPoly]) -> Result<bool> {
    if a.bidegree() != b.bidegree() {
        return Ok(false);
    }
    let ra = reduce_modulo(a, gens)?;
    let rb = reduce_modulo(b, gens)?;
    Ok(!ra.is_zero() && ra.normalized() == rb.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{Field, DEFAULT_PRIME};
    use crate::syzygy::kernel_piece;

    fn quintic(field: Field) -> Parametrization {
        Parametrization::from_i64(
            field,
            [&[1, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 0, 0, 1]],
        )
        .unwrap()
    }

    #[test]
    fn agrees_with_direct_nullspace() {
        for field in [Field::Rational, Field::Prime(DEFAULT_PRIME)] {
            let par = Parametrization::from_i64(
                field,
                [&[1, 2, 0, -1, 3], &[0, 1, 1, 0, 2], &[5, 0, 0, 1, 1]],
            )
            .unwrap();
            for (i, j) in [(0, 2), (2, 1), (3, 1), (1, 3), (2, 2)] {
                let a = kernel_basis(&par, i, j).unwrap().basis;
                let b = kernel_piece(&par, i, j).unwrap();
                assert_eq!(a, b, "bidegree ({i},{j}) over {field}");
                assert_eq!(kernel_dim(&par, i, j).unwrap(), a.len());
            }
        }
    }

    #[test]
    fn quintic_table() {
        let t = mingen_table(&quintic(Field::Rational), 3, 5).unwrap();
        // P, Q, T-degree 1 and 0 elements of the axial family, E
        assert_eq!(
            t.bidegrees(),
            vec![(0, 5), (1, 2), (1, 3), (2, 1), (3, 1)]
        );
        assert_eq!(t.dims[&(0, 5)], 1);
    }

    #[test]
    fn modular_pass_matches_exact_sweep() {
        let curves: [[&[i64]; 3]; 3] = [
            [&[1, 2, 0, -1, 3], &[0, 1, 1, 0, 2], &[5, 0, 0, 1, 1]],
            [&[1, 0, 0, 0, 0, 0, 0], &[0, 1, 1, 0, 0, 0, 0], &[0, 0, 0, 0, 0, 1, 1]],
            [&[3, 0, 1, 0, 0, 7], &[0, -2, 0, 0, 1, 0], &[1, 1, 0, 4, 0, 0]],
        ];
        for u in curves {
            let par = Parametrization::from_i64(Field::Rational, u).unwrap();
            let d = par.degree();
            let mut failures = Vec::new();
            let fast = rational_tables(&par, &BTreeMap::new(), d, d, &mut failures).unwrap();
            let mut eng = Engine::new(RationalOps, &par).unwrap();
            let slow = sweep(&mut eng, &BTreeMap::new(), d, d, &mut failures).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn membership() {
        let par = quintic(Field::Rational);
        let p = BiPoly::parse(Field::Rational, "T1^2*X0 - T0^2*X1", (0, 0)).unwrap();
        let q = BiPoly::parse(Field::Rational, "T0^3*X2 - T1^3*X1", (0, 0)).unwrap();
        for g in kernel_basis(&par, 4, 1).unwrap().basis {
            assert!(ideal_piece_membership(&g, &[p.clone(), q.clone()]).unwrap());
        }
        let f12 = kernel_basis(&par, 1, 2).unwrap().basis;
        assert!(!ideal_piece_membership(&f12[0], &[p, q]).unwrap());
    }
}
