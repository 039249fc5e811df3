use std::fmt;

/// Exponent vector `[a0, a1, b0, b1, b2]` of `T0^a0 T1^a1 X0^b0 X1^b1 X2^b2`.
///
/// The derived order is lexicographic with `T0 > T1 > X0 > X1 > X2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(pub [u32; 5]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 5]);

    pub fn new(a0: u32, a1: u32, b0: u32, b1: u32, b2: u32) -> Self {
        Monomial([a0, a1, b0, b1, b2])
    }

    pub fn t(a0: u32, a1: u32) -> Self {
        Monomial([a0, a1, 0, 0, 0])
    }

    pub fn x(b0: u32, b1: u32, b2: u32) -> Self {
        Monomial([0, 0, b0, b1, b2])
    }

    /// The k-th X variable.
    pub fn x_var(k: usize) -> Self {
        let mut e = [0; 5];
        e[2 + k] = 1;
        Monomial(e)
    }

    pub fn t_part(&self) -> [u32; 2] {
        [self.0[0], self.0[1]]
    }

    pub fn x_part(&self) -> [u32; 3] {
        [self.0[2], self.0[3], self.0[4]]
    }

    pub fn t_degree(&self) -> u32 {
        self.0[0] + self.0[1]
    }

    pub fn x_degree(&self) -> u32 {
        self.0[2] + self.0[3] + self.0[4]
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.t_degree(), self.x_degree())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0).all(|(a, b)| *a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a -= b;
        }
        Some(Monomial(e))
    }

    /// Position in `monomials(i, j)` for the monomial's own bidegree.
    pub fn index(&self) -> usize {
        let (i, j) = self.bidegree();
        (i - self.0[0]) as usize * x_count(j) + x_index(j, self.0[2], self.0[3])
    }

    pub fn canonical(&self) -> String {
        format!(
            "T0^{}*T1^{}*X0^{}*X1^{}*X2^{}",
            self.0[0], self.0[1], self.0[2], self.0[3], self.0[4]
        )
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 5] = ["T0", "T1", "X0", "X1", "X2"];
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(NAMES)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Number of X-monomials of degree `j`.
pub fn x_count(j: u32) -> usize {
    ((j + 1) * (j + 2) / 2) as usize
}

pub fn bidegree_count(i: u32, j: u32) -> usize {
    (i as usize + 1) * x_count(j)
}

fn x_index(j: u32, b0: u32, b1: u32) -> usize {
    let m = j - b0;
    (m * (m + 1) / 2 + (m - b1)) as usize
}

/// X-monomials of degree `j`, largest first.
pub fn x_monomials(j: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(x_count(j));
    for b0 in (0..=j).rev() {
        for b1 in (0..=j - b0).rev() {
            out.push(Monomial::x(b0, b1, j - b0 - b1));
        }
    }
    out
}

/// T-monomials of degree `i`, largest (`T0^i`) first.
pub fn t_monomials(i: u32) -> Vec<Monomial> {
    (0..=i).rev().map(|a0| Monomial::t(a0, i - a0)).collect()
}

/// All monomials of bidegree `(i, j)` in decreasing canonical order.
pub fn monomials(i: u32, j: u32) -> Vec<Monomial> {
    let xs = x_monomials(j);
    let mut out = Vec::with_capacity(bidegree_count(i, j));
    for t in t_monomials(i) {
        for x in &xs {
            out.push(t.mul(x));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_descending_and_indexed() {
        for i in 0..4 {
            for j in 0..5 {
                let ms = monomials(i, j);
                assert_eq!(ms.len(), bidegree_count(i, j));
                for w in ms.windows(2) {
                    assert!(w[0] > w[1]);
                }
                for (k, m) in ms.iter().enumerate() {
                    assert_eq!(m.index(), k);
                    assert_eq!(m.bidegree(), (i, j));
                }
            }
        }
    }

    #[test]
    fn display_forms() {
        let m = Monomial::new(2, 0, 1, 0, 3);
        assert_eq!(m.to_string(), "T0^2*X0*X2^3");
        assert_eq!(m.canonical(), "T0^2*T1^0*X0^1*X1^0*X2^3");
        assert_eq!(Monomial::ONE.to_string(), "1");
    }
}
