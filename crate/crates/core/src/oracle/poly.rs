use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// Guard on the number of stored terms.
pub const MAX_TERMS: usize = 10_000;

/// Exact polynomial in `x`, `y` over the rationals.
///
/// Keys are `(a, b)` for `x^a·y^b`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(BigRational::one(), 0, 1)
    }

    pub fn monomial(c: BigRational, a: u32, b: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(a, b, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), BigRational)>) -> Self {
        let mut p = Self::zero();
        for ((a, b), c) in terms {
            p.add_term(a, b, c);
        }
        p
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_terms(terms: &[(i64, u32, u32)]) -> Self {
        Self::from_terms(terms.iter().map(|&(c, a, b)| ((a, b), rat(c))))
    }

    fn add_term(&mut self, a: u32, b: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((a, b)).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), BigRational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: u32, b: u32) -> BigRational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn check_size(&self) -> Result<()> {
        if self.terms.len() > MAX_TERMS {
            Err(Error::TooManyTerms { limit: MAX_TERMS })
        } else {
            Ok(())
        }
    }

    /// Lowest total degree of a nonzero term; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).max()
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|&(a, _)| a).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|&(_, b)| b).max().unwrap_or(0)
    }

    /// Terms of total degree exactly `k`, as coefficients of `y^i` after
    /// setting `x = 1`; index `i` runs over `0..=k`.
    pub fn form_coefficients(&self, k: u32) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); k as usize + 1];
        for (&(a, b), c) in &self.terms {
            if a + b == k {
                out[b as usize] = c.clone();
            }
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        BivariatePoly {
            terms: self.terms.iter().map(|(&m, c)| (m, c * k)).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Largest `k` with `x^k` dividing every term.
    pub fn x_adic_order(&self) -> u32 {
        self.terms.keys().map(|&(a, _)| a).min().unwrap_or(0)
    }

    pub fn y_adic_order(&self) -> u32 {
        self.terms.keys().map(|&(_, b)| b).min().unwrap_or(0)
    }

    /// Divides by `x^i·y^j`; every term must be divisible.
    pub fn div_monomial(&self, i: u32, j: u32) -> Self {
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| {
                    assert!(a >= i && b >= j, "monomial division is not exact");
                    ((a - i, b - j), c.clone())
                })
                .collect(),
        }
    }

    /// `f(x, x·(c + y))`: the blow-up chart through the finite direction `c`.
    pub fn chart_finite(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (&(a, b), coeff) in &self.terms {
            // (c + y)^b expanded binomially
            let mut binom = BigInt::one();
            let mut cpow = vec![BigRational::one(); b as usize + 1];
            for k in 1..=b as usize {
                cpow[k] = &cpow[k - 1] * c;
            }
            for k in 0..=b {
                let cp = &cpow[(b - k) as usize];
                if !cp.is_zero() {
                    let term = coeff * cp * BigRational::from_integer(binom.clone());
                    out.add_term(a + b, k, term);
                }
                binom = binom * BigInt::from(b - k) / BigInt::from(k + 1);
            }
        }
        out
    }

    /// `f(x·y, x)`: the blow-up chart through the direction at infinity.
    pub fn chart_infinity(&self) -> Self {
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a + b, a), c.clone()))
                .collect(),
        }
    }

    /// Inverse image under [`chart_finite`](Self::chart_finite): the curve in
    /// the coordinates before blowing up, with exceptional factors removed.
    pub fn blow_down_finite(&self, c: &BigRational) -> Self {
        // y_new = (y - c·x)/x, cleared by x^d
        let d = self.degree_y();
        let shifted = &Self::y() - &Self::x().scale(c);
        let mut out = Self::zero();
        for (&(a, b), coeff) in &self.terms {
            let t = shifted.pow(b);
            for (&(i, j), tc) in &t.terms {
                out.add_term(i + a + d - b, j, coeff * tc);
            }
        }
        let k = out.x_adic_order();
        out.div_monomial(k, 0)
    }

    /// Inverse image under [`chart_infinity`](Self::chart_infinity).
    pub fn blow_down_infinity(&self) -> Self {
        // x_new = y, y_new = x/y, cleared by y^d
        let d = self.degree_y();
        let mut out = Self::zero();
        for (&(a, b), coeff) in &self.terms {
            out.add_term(b, a + d - b, coeff.clone());
        }
        let k = out.y_adic_order();
        out.div_monomial(0, k)
    }

    /// Scales to a primitive integer polynomial whose largest term, ordered by
    /// `(y`-exponent, `x`-exponent`)`, is positive.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
        let lead = self
            .terms
            .iter()
            .max_by_key(|(&(a, b), _)| (b, a))
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        let sign = if lead { -BigInt::one() } else { BigInt::one() };
        let factor = BigRational::new(lcm * sign, g);
        self.scale(&factor)
    }

    /// `f(x(t), y(t))` for univariate `x(t)`, `y(t)`.
    pub fn compose(&self, x: &super::univariate::UniPoly, y: &super::univariate::UniPoly) -> super::univariate::UniPoly {
        use super::univariate::UniPoly;
        let mut out = UniPoly::zero();
        for (&(a, b), c) in &self.terms {
            out = &out + &(&x.pow(a) * &y.pow(b)).scale(c);
        }
        out
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.terms
            .iter()
            .map(|(&(a, b), c)| c * num::pow(x.clone(), a as usize) * num::pow(y.clone(), b as usize))
            .fold(BigRational::zero(), |acc, t| acc + t)
    }
}

impl Add for &BivariatePoly {
    type Output = BivariatePoly;

    fn add(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }
}

impl Sub for &BivariatePoly {
    type Output = BivariatePoly;

    fn sub(self, rhs: &BivariatePoly) -> BivariatePoly {
        self + &(-rhs)
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;

    fn neg(self) -> BivariatePoly {
        BivariatePoly {
            terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for &BivariatePoly {
    type Output = BivariatePoly;

    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (&(a, b), c) in &self.terms {
            for (&(i, j), d) in &rhs.terms {
                out.add_term(a + i, b + j, c * d);
            }
        }
        out
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, var: &str, e: u32) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => f.write_str(var),
        _ => write!(f, "{var}^{e}"),
    }
}

impl fmt::Display for BivariatePoly {
    /// Terms by total degree ascending, then `x`-exponent descending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(a, b)| (a + b, std::cmp::Reverse(a)));
        for (i, &&(a, b)) in keys.iter().enumerate() {
            let c = &self.terms[&(a, b)];
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let is_unit = abs.is_one();
            if !is_unit || (a == 0 && b == 0) {
                write!(f, "{abs}")?;
                if a > 0 || b > 0 {
                    f.write_str("*")?;
                }
            }
            fmt_power(f, "x", a)?;
            if a > 0 && b > 0 {
                f.write_str("*")?;
            }
            fmt_power(f, "y", b)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cusp() -> BivariatePoly {
        BivariatePoly::from_int_terms(&[(1, 0, 2), (-1, 3, 0)])
    }

    #[test]
    fn order_and_square() {
        assert_eq!(cusp().order(), Some(2));
        assert_eq!(cusp().pow(2).to_string(), "y^4 - 2*x^3*y^2 + x^6");
        assert_eq!(BivariatePoly::zero().order(), None);
        assert_eq!(BivariatePoly::one().to_string(), "1");
    }

    #[test]
    fn display_rationals() {
        let p = BivariatePoly::from_terms([((1, 1), BigRational::new((-3).into(), 2.into()))]);
        assert_eq!(p.to_string(), "-3/2*x*y");
        let q = BivariatePoly::from_int_terms(&[(1, 1, 0), (1, 0, 1), (2, 0, 0)]);
        assert_eq!(q.to_string(), "2 + x + y");
    }

    #[test]
    fn first_blow_up_of_cusp() {
        let t = cusp().chart_finite(&rat(0));
        let k = t.x_adic_order();
        assert_eq!(k, 2);
        assert_eq!(t.div_monomial(2, 0), BivariatePoly::from_int_terms(&[(1, 0, 2), (-1, 1, 0)]));
    }

    #[test]
    fn blow_down_inverts_charts() {
        let f = cusp();
        for c in [rat(0), rat(2), BigRational::new(1.into(), 3.into())] {
            let g = f.chart_finite(&c);
            let g = g.div_monomial(g.x_adic_order(), 0);
            assert_eq!(g.blow_down_finite(&c).normalized(), f.normalized());
        }
        let g = f.chart_infinity();
        let g = g.div_monomial(g.x_adic_order(), 0);
        assert_eq!(g.blow_down_infinity().normalized(), f.normalized());
    }

    #[test]
    fn normalization() {
        let p = BivariatePoly::from_terms([
            ((0, 2), BigRational::new((-2).into(), 3.into())),
            ((3, 0), BigRational::new(2.into(), 3.into())),
        ]);
        assert_eq!(p.normalized(), cusp());
    }
}
