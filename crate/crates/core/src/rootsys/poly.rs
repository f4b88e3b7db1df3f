//! Exact multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for `p/q`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Exponent multi-index, one entry per variable.
pub type Monomial = Vec<u32>;

/// Polynomial in `nvars` variables with rational coefficients.
///
/// The term map never stores a zero coefficient, so structural equality is
/// polynomial equality.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

/// Inverse metric `g^{ij}` used to form the Laplacian `Σ g^{ij} ∂_i ∂_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    inverse: Vec<Vec<Rational>>,
}

impl Metric {
    /// Orthonormal coordinates.
    pub fn euclidean(n: usize) -> Self {
        let inverse = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Metric { inverse }
    }

    /// Coordinates with respect to a basis whose Gram matrix is `gram`.
    ///
    /// Returns `None` when the Gram matrix is singular.
    pub fn from_gram(gram: &[Vec<Rational>]) -> Option<Self> {
        invert(gram).map(|inverse| Metric { inverse })
    }

    pub fn dim(&self) -> usize {
        self.inverse.len()
    }

    pub fn inverse(&self) -> &[Vec<Rational>] {
        &self.inverse
    }

    /// Pairing of two covectors (linear-form coefficient vectors).
    pub fn pair_covectors(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    acc += ai * &self.inverse[i][j] * bj;
                }
            }
        }
        acc
    }
}

/// Gauss–Jordan inverse over the rationals.
pub fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..2 * n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

impl RationalPolynomial {
    pub fn zero(nvars: usize) -> Self {
        RationalPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The linear form `Σ coeffs[i] x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut m = vec![0; n];
            m[i] = 1;
            p.add_term(m, c.clone());
        }
        p
    }

    /// The single variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(m, Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c · x^m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.len(), self.nvars, "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        RationalPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[i] -= 1;
            out.add_term(dm, c * Rational::from_integer(BigInt::from(m[i])));
        }
        out
    }

    /// `Σ g^{ij} ∂_i ∂_j p` for the given inverse metric.
    pub fn laplacian(&self, metric: &Metric) -> Self {
        assert_eq!(metric.dim(), self.nvars, "metric dimension mismatch");
        let mut out = Self::zero(self.nvars);
        let first: Vec<Self> = (0..self.nvars).map(|i| self.partial(i)).collect();
        for (i, di) in first.iter().enumerate() {
            for j in 0..self.nvars {
                let g = &metric.inverse[i][j];
                if g.is_zero() {
                    continue;
                }
                out = out + di.partial(j).scale(g);
            }
        }
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(m) {
                if e > 0 {
                    t *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(m, c)| {
                let cf = c.to_f64().unwrap_or(f64::NAN);
                m.iter().zip(x).fold(cf, |t, (&e, &xi)| t * xi.powi(e as i32))
            })
            .sum()
    }

    /// Substitutes `x ↦ A x` where `A` is a square matrix (row-major).
    pub fn compose_linear(&self, a: &[Vec<Rational>]) -> Self {
        let images: Vec<Self> = a.iter().map(|row| Self::linear(row)).collect();
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut t = Self::constant(self.nvars, c.clone());
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = &t * &images[i];
                }
            }
            out = out + t;
        }
        out
    }
}

impl Add for RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Neg for RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> Self {
        RationalPolynomial {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Sub for RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<'a> Mul<&'a RationalPolynomial> for &'a RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &'a RationalPolynomial) -> RationalPolynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = RationalPolynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl Mul for RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl fmt::Debug for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            let is_const = m.iter().all(|&e| e == 0);
            if !a.is_one() || is_const {
                write!(f, "{a}")?;
            }
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "x{i}")?,
                    _ => write!(f, "x{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_are_dropped() {
        let x = RationalPolynomial::var(2, 0);
        let p = x.clone() - x;
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn product_of_linear_forms() {
        let a = RationalPolynomial::linear(&[rat(1, 1), rat(1, 1)]);
        let b = RationalPolynomial::linear(&[rat(1, 1), rat(-1, 1)]);
        let p = &a * &b;
        // x0^2 - x1^2
        assert_eq!(p.coefficient(&[2, 0]), rat(1, 1));
        assert_eq!(p.coefficient(&[0, 2]), rat(-1, 1));
        assert_eq!(p.coefficient(&[1, 1]), rat(0, 1));
        assert!(p.is_homogeneous());
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn euclidean_laplacian_of_norm_squared() {
        for n in 1..=4 {
            let mut r2 = RationalPolynomial::zero(n);
            for i in 0..n {
                let x = RationalPolynomial::var(n, i);
                r2 = r2 + &x * &x;
            }
            let lap = r2.laplacian(&Metric::euclidean(n));
            assert_eq!(lap, RationalPolynomial::constant(n, rat(2 * n as i64, 1)));
        }
    }

    #[test]
    fn inverse_of_gram() {
        let g = vec![vec![rat(2, 1), rat(-1, 1)], vec![rat(-1, 1), rat(2, 1)]];
        let inv = invert(&g).unwrap();
        assert_eq!(inv, vec![vec![rat(2, 3), rat(1, 3)], vec![rat(1, 3), rat(2, 3)]]);
        assert!(invert(&[vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]]).is_none());
    }

    #[test]
    fn eval_matches_f64() {
        let a = RationalPolynomial::linear(&[rat(1, 2), rat(3, 1)]);
        let p = &(&a * &a) * &a;
        let x = [rat(2, 1), rat(-1, 3)];
        assert_eq!(p.eval(&x), rat(0, 1));
        assert!((p.eval_f64(&[0.3, 0.7]) - (0.15f64 + 2.1).powi(3)).abs() < 1e-12);
    }

    #[test]
    fn display_is_readable() {
        let p = RationalPolynomial::linear(&[rat(1, 1), rat(-3, 2)]);
        assert_eq!(p.to_string(), "x0 - 3/2x1");
    }
}
